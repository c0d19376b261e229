#include <algorithm>
#include <cmath>
#include <numeric>

#include "cadedit/geometry.hpp"

namespace cadedit::geometry {

namespace {

using Tri = std::array<std::uint32_t, 3>;

double orient(Vec2 a, Vec2 b, Vec2 c) {
  return (b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x);
}

bool same(Vec2 a, Vec2 b) { return a.x == b.x && a.y == b.y; }

bool proper_cross(Vec2 a, Vec2 b, Vec2 c, Vec2 d) {
  const double d1 = orient(c, d, a), d2 = orient(c, d, b);
  const double d3 = orient(a, b, c), d4 = orient(a, b, d);
  return ((d1 > 0 && d2 < 0) || (d1 < 0 && d2 > 0)) && ((d3 > 0 && d4 < 0) || (d3 < 0 && d4 > 0));
}

bool in_triangle(Vec2 a, Vec2 b, Vec2 c, Vec2 p) {
  constexpr double eps = 1e-14;
  return orient(a, b, p) >= -eps && orient(b, c, p) >= -eps && orient(c, a, p) >= -eps;
}

// Splices each hole into the outer ring through a bridge to the nearest
// vertex pair whose connecting segment crosses no edge.
std::vector<std::uint32_t> bridge_holes(const std::vector<Vec2>& pts, std::uint32_t outer_n,
                                        const std::vector<std::pair<std::uint32_t, std::uint32_t>>& holes) {
  std::vector<std::uint32_t> ring(outer_n);
  std::iota(ring.begin(), ring.end(), 0u);

  std::vector<std::size_t> order(holes.size());
  std::iota(order.begin(), order.end(), 0);
  auto max_x = [&](std::size_t h) {
    double m = -1e300;
    for (std::uint32_t i = holes[h].first; i < holes[h].first + holes[h].second; ++i) m = std::max(m, pts[i].x);
    return m;
  };
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return max_x(a) > max_x(b); });

  auto crosses_any = [&](Vec2 a, Vec2 b) {
    for (std::size_t i = 0; i < ring.size(); ++i) {
      if (proper_cross(a, b, pts[ring[i]], pts[ring[(i + 1) % ring.size()]])) return true;
    }
    for (const auto& [start, count] : holes) {
      for (std::uint32_t i = 0; i < count; ++i) {
        if (proper_cross(a, b, pts[start + i], pts[start + (i + 1) % count])) return true;
      }
    }
    return false;
  };

  for (std::size_t h : order) {
    const auto [start, count] = holes[h];
    double best = 1e300;
    std::size_t best_ring = 0;
    std::uint32_t best_hole = start;
    for (std::size_t i = 0; i < ring.size(); ++i) {
      for (std::uint32_t j = start; j < start + count; ++j) {
        const Vec2 a = pts[ring[i]], b = pts[j];
        const double d = (a.x - b.x) * (a.x - b.x) + (a.y - b.y) * (a.y - b.y);
        if (d < best && !crosses_any(a, b)) {
          best = d;
          best_ring = i;
          best_hole = j;
        }
      }
    }
    std::vector<std::uint32_t> spliced(ring.begin(), ring.begin() + best_ring + 1);
    for (std::uint32_t k = 0; k <= count; ++k) spliced.push_back(start + (best_hole - start + k) % count);
    spliced.push_back(ring[best_ring]);
    spliced.insert(spliced.end(), ring.begin() + best_ring + 1, ring.end());
    ring = std::move(spliced);
  }
  return ring;
}

}  // namespace

std::vector<Tri> triangulate(const Polygon& outer, const std::vector<Polygon>& holes) {
  std::vector<Vec2> pts(outer.begin(), outer.end());
  std::vector<std::pair<std::uint32_t, std::uint32_t>> hole_spans;
  for (const Polygon& h : holes) {
    hole_spans.emplace_back(static_cast<std::uint32_t>(pts.size()), static_cast<std::uint32_t>(h.size()));
    pts.insert(pts.end(), h.begin(), h.end());
  }
  std::vector<std::uint32_t> ring =
      bridge_holes(pts, static_cast<std::uint32_t>(outer.size()), hole_spans);

  std::vector<Tri> tris;
  while (ring.size() > 3) {
    bool clipped = false;
    const std::size_t n = ring.size();
    for (std::size_t i = 0; i < n; ++i) {
      const std::uint32_t ia = ring[(i + n - 1) % n], ip = ring[i], ib = ring[(i + 1) % n];
      const Vec2 a = pts[ia], p = pts[ip], b = pts[ib];
      if (orient(a, p, b) <= 1e-14) continue;
      bool blocked = false;
      for (std::uint32_t q : ring) {
        const Vec2 v = pts[q];
        if (same(v, a) || same(v, p) || same(v, b)) continue;
        if (in_triangle(a, p, b, v)) {
          blocked = true;
          break;
        }
      }
      if (blocked) continue;
      tris.push_back({ia, ip, ib});
      ring.erase(ring.begin() + static_cast<std::ptrdiff_t>(i));
      clipped = true;
      break;
    }
    if (!clipped) {
      // Only collinear or numerically degenerate vertices remain.
      std::size_t flat = 0;
      double best = 1e300;
      for (std::size_t i = 0; i < n; ++i) {
        const double o = std::abs(orient(pts[ring[(i + n - 1) % n]], pts[ring[i]], pts[ring[(i + 1) % n]]));
        if (o < best) {
          best = o;
          flat = i;
        }
      }
      ring.erase(ring.begin() + static_cast<std::ptrdiff_t>(flat));
    }
  }
  if (ring.size() == 3 && orient(pts[ring[0]], pts[ring[1]], pts[ring[2]]) > 1e-14) {
    tris.push_back({ring[0], ring[1], ring[2]});
  }
  return tris;
}

TriangleMesh mesh(const SolidAssembly& assembly) {
  TriangleMesh out;
  for (std::size_t pi = 0; pi < assembly.primitives.size(); ++pi) {
    const Prism& prim = assembly.primitives[pi];
    out.primitive_ops.push_back(prim.op);
    const auto tag = static_cast<std::uint32_t>(pi);
    auto emit = [&](Tri t) {
      out.triangles.push_back(t);
      out.triangle_primitive.push_back(tag);
    };
    for (const FaceRegion& face : prim.profile.faces) {
      std::vector<const Polygon*> loops{&face.outer};
      for (const Polygon& h : face.holes) loops.push_back(&h);
      std::size_t ring_size = 0;
      for (const Polygon* l : loops) ring_size += l->size();

      const auto base = static_cast<std::uint32_t>(out.vertices.size());
      const auto top = base + static_cast<std::uint32_t>(ring_size);
      for (double z : {prim.z_lo, prim.z_hi}) {
        for (const Polygon* l : loops) {
          for (const Vec2& p : *l) out.vertices.push_back(prim.frame.to_world(p.x, p.y, z));
        }
      }
      for (const Tri& t : triangulate(face.outer, face.holes)) {
        emit({base + t[0], base + t[2], base + t[1]});
        emit({top + t[0], top + t[1], top + t[2]});
      }
      std::uint32_t offset = 0;
      for (const Polygon* l : loops) {
        const auto n = static_cast<std::uint32_t>(l->size());
        for (std::uint32_t i = 0; i < n; ++i) {
          const std::uint32_t a = offset + i, b = offset + (i + 1) % n;
          emit({base + a, base + b, top + b});
          emit({base + a, top + b, top + a});
        }
        offset += n;
      }
    }
  }
  return out;
}

}  // namespace cadedit::geometry
