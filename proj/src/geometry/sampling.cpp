#include <algorithm>
#include <cmath>
#include <limits>

#include "cadedit/error.hpp"
#include "cadedit/geometry.hpp"
#include "cadedit/random.hpp"

namespace cadedit::geometry {

namespace {

// A sampleable piece of a prism surface: a cap region or one side wall.
struct Patch {
  const Prism* prim = nullptr;
  const FaceRegion* face = nullptr;  // caps only
  Vec2 a, b;                         // side walls only
  double z = 0;                      // caps only
  bool cap = false;
  double area = 0;
};

double region_area(const FaceRegion& f) {
  double a = std::abs(signed_area(f.outer));
  for (const Polygon& h : f.holes) a -= std::abs(signed_area(h));
  return std::max(a, 0.0);
}

std::vector<Patch> build_patches(const SolidAssembly& assembly) {
  std::vector<Patch> patches;
  for (const Prism& prim : assembly.primitives) {
    const double s2 = prim.frame.scale * prim.frame.scale;
    const double height = prim.z_hi - prim.z_lo;
    for (const FaceRegion& face : prim.profile.faces) {
      const double area = region_area(face) * s2;
      for (double z : {prim.z_lo, prim.z_hi}) {
        Patch p;
        p.prim = &prim;
        p.face = &face;
        p.z = z;
        p.cap = true;
        p.area = area;
        patches.push_back(p);
      }
      auto add_walls = [&](const Polygon& poly) {
        for (std::size_t i = 0; i < poly.size(); ++i) {
          Patch p;
          p.prim = &prim;
          p.a = poly[i];
          p.b = poly[(i + 1) % poly.size()];
          p.area = std::hypot(p.b.x - p.a.x, p.b.y - p.a.y) * height * s2;
          patches.push_back(p);
        }
      };
      add_walls(face.outer);
      for (const Polygon& h : face.holes) add_walls(h);
    }
  }
  return patches;
}

struct SurfaceSample {
  Vec3 point;
  Vec3 normal;
};

SurfaceSample draw(const Patch& patch, Rng& rng) {
  const Frame& f = patch.prim->frame;
  if (patch.cap) {
    double lo_x = 1e300, lo_y = 1e300, hi_x = -1e300, hi_y = -1e300;
    for (const Vec2& p : patch.face->outer) {
      lo_x = std::min(lo_x, p.x);
      lo_y = std::min(lo_y, p.y);
      hi_x = std::max(hi_x, p.x);
      hi_y = std::max(hi_y, p.y);
    }
    Vec2 q{uniform(rng, lo_x, hi_x), uniform(rng, lo_y, hi_y)};
    for (int tries = 0; tries < 64 && !patch.face->contains(q); ++tries) {
      q = {uniform(rng, lo_x, hi_x), uniform(rng, lo_y, hi_y)};
    }
    return {f.to_world(q.x, q.y, patch.z), f.w};
  }
  const double t = uniform01(rng);
  const double z = uniform(rng, patch.prim->z_lo, patch.prim->z_hi);
  const Vec2 q{patch.a.x + t * (patch.b.x - patch.a.x), patch.a.y + t * (patch.b.y - patch.a.y)};
  const double ex = patch.b.x - patch.a.x, ey = patch.b.y - patch.a.y;
  const double len = std::hypot(ex, ey);
  const Vec3 n = (f.u * (ey / len) - f.v * (ex / len));
  return {f.to_world(q.x, q.y, z), n};
}

double dist2(Vec3 a, Vec3 b) {
  const double dx = a.x - b.x, dy = a.y - b.y, dz = a.z - b.z;
  return dx * dx + dy * dy + dz * dz;
}

std::vector<Vec3> farthest_point_subsample(const std::vector<Vec3>& pool, std::size_t n) {
  std::vector<Vec3> out;
  out.reserve(n);
  std::vector<double> best(pool.size(), std::numeric_limits<double>::infinity());
  std::size_t current = 0;
  for (std::size_t k = 0; k < n; ++k) {
    out.push_back(pool[current]);
    const Vec3 c = pool[current];
    std::size_t next = 0;
    double far = -1;
    for (std::size_t i = 0; i < pool.size(); ++i) {
      best[i] = std::min(best[i], dist2(pool[i], c));
      if (best[i] > far) {
        far = best[i];
        next = i;
      }
    }
    current = next;
  }
  return out;
}

}  // namespace

SampledCloud sample_surface(const SolidAssembly& assembly, std::size_t n, std::uint64_t seed) {
  if (n == 0) throw Error(Errc::InvalidInput, "point count must be positive");
  const std::vector<Patch> patches = build_patches(assembly);
  const Aabb box = assembly.bounds();
  if (patches.empty() || box.empty()) throw Error(Errc::EmptySolid, "assembly has no surface");

  double thinnest = std::numeric_limits<double>::infinity();
  for (const Prism& prim : assembly.primitives) {
    thinnest = std::min(thinnest, (prim.z_hi - prim.z_lo) * prim.frame.scale);
  }
  const double band = std::min(kSurfaceBand * box.longest_side(), 0.25 * thinnest);

  std::vector<double> cumulative;
  double total = 0;
  for (const Patch& p : patches) cumulative.push_back(total += p.area);
  if (total <= 0) throw Error(Errc::EmptySolid, "assembly has zero surface area");

  Rng rng(seed);
  const std::size_t target = 3 * n;
  std::vector<Vec3> pool;
  for (int round = 0; round < 8 && pool.size() < target; ++round) {
    for (std::size_t i = 0; i < target; ++i) {
      const double r = uniform01(rng) * total;
      const auto it = std::upper_bound(cumulative.begin(), cumulative.end(), r);
      const std::size_t idx =
          std::min<std::size_t>(static_cast<std::size_t>(it - cumulative.begin()), patches.size() - 1);
      const SurfaceSample s = draw(patches[idx], rng);
      // Keep only points where membership flips across the band.
      if (assembly.contains(s.point + s.normal * band) !=
          assembly.contains(s.point - s.normal * band)) {
        pool.push_back(s.point);
      }
    }
  }
  if (pool.empty()) throw Error(Errc::EmptySolid, "no solid boundary found");
  for (std::size_t i = 0; pool.size() < n; ++i) pool.push_back(pool[i]);

  SampledCloud out;
  out.world = farthest_point_subsample(pool, n);
  out.band = band;

  Aabb cb;
  for (const Vec3& p : out.world) cb.expand(p);
  const Vec3 ext = cb.hi - cb.lo;
  const double longest = cb.longest_side();
  if (!(longest > 0)) throw Error(Errc::EmptySolid, "degenerate point cloud");
  out.cloud.seed = seed;
  out.cloud.points.reserve(n);
  // (p - lo) / L - ext / (2L) keeps the longest side at exactly [-0.5, 0.5].
  for (const Vec3& p : out.world) {
    out.cloud.points.push_back({(p.x - cb.lo.x) / longest - 0.5 * (ext.x / longest),
                                (p.y - cb.lo.y) / longest - 0.5 * (ext.y / longest),
                                (p.z - cb.lo.z) / longest - 0.5 * (ext.z / longest)});
  }
  return out;
}

PointCloud sample_point_cloud(const SolidAssembly& assembly, std::size_t n, std::uint64_t seed) {
  return sample_surface(assembly, n, seed).cloud;
}

}  // namespace cadedit::geometry
