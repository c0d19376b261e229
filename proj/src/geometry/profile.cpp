#include <algorithm>
#include <cmath>
#include <numbers>

#include "cadedit/error.hpp"
#include "cadedit/geometry.hpp"

namespace cadedit::geometry {

double dequant_coord(seq::Quant c) { return (c - 128) / 128.0; }
double dequant_scale(seq::Quant s) { return s / 128.0; }
double dequant_theta(seq::Quant t) { return std::numbers::pi * t / 255.0; }
double dequant_angle(seq::Quant v) { return 2.0 * std::numbers::pi * v / 255.0 - std::numbers::pi; }

double signed_area(const Polygon& poly) {
  double a = 0;
  for (std::size_t i = 0, n = poly.size(); i < n; ++i) {
    const Vec2& p = poly[i];
    const Vec2& q = poly[(i + 1) % n];
    a += p.x * q.y - q.x * p.y;
  }
  return 0.5 * a;
}

bool point_in_polygon(const Polygon& poly, Vec2 p) {
  bool inside = false;
  for (std::size_t i = 0, n = poly.size(), j = n - 1; i < n; j = i++) {
    const Vec2& a = poly[i];
    const Vec2& b = poly[j];
    if ((a.y > p.y) != (b.y > p.y) && p.x < (b.x - a.x) * (p.y - a.y) / (b.y - a.y) + a.x) {
      inside = !inside;
    }
  }
  return inside;
}

bool FaceRegion::contains(Vec2 p) const {
  if (!point_in_polygon(outer, p)) return false;
  for (const Polygon& h : holes) {
    if (point_in_polygon(h, p)) return false;
  }
  return true;
}

bool Profile2D::contains(Vec2 p) const {
  return std::any_of(faces.begin(), faces.end(),
                     [&](const FaceRegion& f) { return f.contains(p); });
}

namespace {

Vec2 dq(seq::Quant x, seq::Quant y) { return {dequant_coord(x), dequant_coord(y)}; }

Vec2 curve_end(const seq::Curve& c) {
  if (const auto* l = std::get_if<seq::Line>(&c)) return dq(l->x, l->y);
  const auto& a = std::get<seq::Arc>(c);
  return dq(a.x, a.y);
}

// Appends the arc from `s` through `m` to `e`, excluding `s`, including `e`.
void append_arc(Polygon& out, Vec2 s, Vec2 m, Vec2 e) {
  const double d = 2.0 * (s.x * (m.y - e.y) + m.x * (e.y - s.y) + e.x * (s.y - m.y));
  if (std::abs(d) < 1e-12) {
    out.push_back(e);
    return;
  }
  const double s2 = s.x * s.x + s.y * s.y;
  const double m2 = m.x * m.x + m.y * m.y;
  const double e2 = e.x * e.x + e.y * e.y;
  const Vec2 c{(s2 * (m.y - e.y) + m2 * (e.y - s.y) + e2 * (s.y - m.y)) / d,
               (s2 * (e.x - m.x) + m2 * (s.x - e.x) + e2 * (m.x - s.x)) / d};
  const double r = std::hypot(s.x - c.x, s.y - c.y);
  constexpr double two_pi = 2.0 * std::numbers::pi;
  auto ccw_span = [&](double from, double to) {
    double span = std::fmod(to - from, two_pi);
    return span < 0 ? span + two_pi : span;
  };
  const double a0 = std::atan2(s.y - c.y, s.x - c.x);
  const double am = std::atan2(m.y - c.y, m.x - c.x);
  const double ae = std::atan2(e.y - c.y, e.x - c.x);
  // Sweep counter-clockwise if that passes through the mid point first.
  double sweep = ccw_span(a0, ae);
  if (ccw_span(a0, am) > sweep) sweep -= two_pi;
  for (int i = 1; i < kArcSegments; ++i) {
    const double a = a0 + sweep * i / kArcSegments;
    out.push_back({c.x + r * std::cos(a), c.y + r * std::sin(a)});
  }
  out.push_back(e);
}

Polygon discretize(const seq::Loop& loop) {
  Polygon poly;
  if (const auto* circle = std::get_if<seq::Circle>(&loop.curves.front())) {
    const Vec2 c = dq(circle->cx, circle->cy);
    const double r = circle->r / 128.0;
    for (int i = 0; i < kCircleSegments; ++i) {
      const double a = 2.0 * std::numbers::pi * i / kCircleSegments;
      poly.push_back({c.x + r * std::cos(a), c.y + r * std::sin(a)});
    }
    return poly;
  }
  Vec2 cur = curve_end(loop.curves.back());
  for (const seq::Curve& c : loop.curves) {
    if (const auto* a = std::get_if<seq::Arc>(&c)) {
      append_arc(poly, cur, dq(a->mx, a->my), dq(a->x, a->y));
    } else {
      poly.push_back(curve_end(c));
    }
    cur = curve_end(c);
  }
  Polygon dedup;
  for (const Vec2& p : poly) {
    if (dedup.empty() || std::abs(dedup.back().x - p.x) > 1e-12 ||
        std::abs(dedup.back().y - p.y) > 1e-12) {
      dedup.push_back(p);
    }
  }
  while (dedup.size() > 1 && std::abs(dedup.front().x - dedup.back().x) <= 1e-12 &&
         std::abs(dedup.front().y - dedup.back().y) <= 1e-12) {
    dedup.pop_back();
  }
  return dedup;
}

double orient(Vec2 a, Vec2 b, Vec2 c) {
  return (b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x);
}

bool on_segment(Vec2 a, Vec2 b, Vec2 p) {
  return std::min(a.x, b.x) - 1e-12 <= p.x && p.x <= std::max(a.x, b.x) + 1e-12 &&
         std::min(a.y, b.y) - 1e-12 <= p.y && p.y <= std::max(a.y, b.y) + 1e-12;
}

bool segments_intersect(Vec2 a, Vec2 b, Vec2 c, Vec2 d) {
  constexpr double eps = 1e-12;
  const double d1 = orient(c, d, a), d2 = orient(c, d, b);
  const double d3 = orient(a, b, c), d4 = orient(a, b, d);
  if (((d1 > eps && d2 < -eps) || (d1 < -eps && d2 > eps)) &&
      ((d3 > eps && d4 < -eps) || (d3 < -eps && d4 > eps))) {
    return true;
  }
  if (std::abs(d1) <= eps && on_segment(c, d, a)) return true;
  if (std::abs(d2) <= eps && on_segment(c, d, b)) return true;
  if (std::abs(d3) <= eps && on_segment(a, b, c)) return true;
  if (std::abs(d4) <= eps && on_segment(a, b, d)) return true;
  return false;
}

struct Edge {
  Vec2 a, b;
  std::size_t loop, index, loop_size;
};

bool adjacent(const Edge& e, const Edge& f) {
  if (e.loop != f.loop) return false;
  const std::size_t n = e.loop_size;
  return (e.index + 1) % n == f.index || (f.index + 1) % n == e.index;
}

void check_simple(const std::vector<Polygon>& loops) {
  std::vector<Edge> edges;
  for (std::size_t l = 0; l < loops.size(); ++l) {
    const Polygon& p = loops[l];
    for (std::size_t i = 0; i < p.size(); ++i) {
      edges.push_back({p[i], p[(i + 1) % p.size()], l, i, p.size()});
    }
  }
  for (std::size_t i = 0; i < edges.size(); ++i) {
    for (std::size_t j = i + 1; j < edges.size(); ++j) {
      if (adjacent(edges[i], edges[j])) continue;
      if (segments_intersect(edges[i].a, edges[i].b, edges[j].a, edges[j].b)) {
        throw Error(Errc::SelfIntersecting, "sketch loops intersect");
      }
    }
  }
}

}  // namespace

Profile2D build_profile(const seq::Sketch& sketch) {
  Profile2D profile;
  for (const seq::Face& face : sketch.faces) {
    std::vector<Polygon> loops;
    for (const seq::Loop& loop : face.loops) {
      if (loop.curves.empty()) throw Error(Errc::DegenerateLoop, "empty loop");
      Polygon poly = discretize(loop);
      if (poly.size() < 3 || std::abs(signed_area(poly)) < 1e-9) {
        throw Error(Errc::DegenerateLoop, "loop encloses zero area");
      }
      loops.push_back(std::move(poly));
    }
    check_simple(loops);
    FaceRegion region;
    for (std::size_t i = 0; i < loops.size(); ++i) {
      Polygon& poly = loops[i];
      const bool ccw = signed_area(poly) > 0;
      if ((i == 0) != ccw) std::reverse(poly.begin(), poly.end());
      if (i == 0) {
        region.outer = std::move(poly);
      } else {
        if (!point_in_polygon(region.outer, poly.front())) {
          throw Error(Errc::HoleOutsideBoundary, "inner loop lies outside the outer loop");
        }
        region.holes.push_back(std::move(poly));
      }
    }
    profile.faces.push_back(std::move(region));
  }
  return profile;
}

}  // namespace cadedit::geometry
