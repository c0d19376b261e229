#include <algorithm>
#include <cmath>

#include "cadedit/error.hpp"
#include "cadedit/geometry.hpp"

namespace cadedit::geometry {

namespace {

Vec3 rot_z(Vec3 p, double a) {
  const double c = std::cos(a), s = std::sin(a);
  return {c * p.x - s * p.y, s * p.x + c * p.y, p.z};
}

Vec3 rot_y(Vec3 p, double a) {
  const double c = std::cos(a), s = std::sin(a);
  return {c * p.x + s * p.z, p.y, -s * p.x + c * p.z};
}

}  // namespace

Frame plane_frame(const seq::Extrusion& e) {
  const double theta = dequant_theta(e.theta);
  const double phi = dequant_angle(e.phi);
  const double gamma = dequant_angle(e.gamma);
  // R = Rz(phi) * Ry(theta) * Rz(gamma); the normal is (sin t cos p, sin t sin p, cos t).
  auto rotate = [&](Vec3 p) { return rot_z(rot_y(rot_z(p, gamma), theta), phi); };
  Frame f;
  f.origin = {dequant_coord(e.origin_x), dequant_coord(e.origin_y), dequant_coord(e.origin_z)};
  f.u = rotate({1, 0, 0});
  f.v = rotate({0, 1, 0});
  f.w = rotate({0, 0, 1});
  f.scale = dequant_scale(e.scale);
  return f;
}

bool Prism::contains(Vec3 p) const {
  const Vec3 q = frame.to_local(p);
  if (q.z < z_lo || q.z > z_hi) return false;
  return profile.contains({q.x, q.y});
}

void Aabb::expand(Vec3 p) {
  lo = {std::min(lo.x, p.x), std::min(lo.y, p.y), std::min(lo.z, p.z)};
  hi = {std::max(hi.x, p.x), std::max(hi.y, p.y), std::max(hi.z, p.z)};
}

double Aabb::longest_side() const {
  if (empty()) return 0;
  return std::max({hi.x - lo.x, hi.y - lo.y, hi.z - lo.z});
}

bool SolidAssembly::contains(Vec3 p) const {
  bool inside = false;
  for (const Prism& prim : primitives) {
    switch (prim.op) {
      case seq::BoolOp::New:
      case seq::BoolOp::Join:
        if (!inside) inside = prim.contains(p);
        break;
      case seq::BoolOp::Cut:
        if (inside) inside = !prim.contains(p);
        break;
      case seq::BoolOp::Intersect:
        if (inside) inside = prim.contains(p);
        break;
    }
  }
  return inside;
}

Aabb SolidAssembly::bounds() const {
  Aabb box;
  for (const Prism& prim : primitives) {
    if (prim.op != seq::BoolOp::New && prim.op != seq::BoolOp::Join) continue;
    for (const FaceRegion& face : prim.profile.faces) {
      for (const Vec2& p : face.outer) {
        box.expand(prim.frame.to_world(p.x, p.y, prim.z_lo));
        box.expand(prim.frame.to_world(p.x, p.y, prim.z_hi));
      }
    }
  }
  return box;
}

SolidAssembly assemble(const seq::CadModel& model) {
  const seq::ValidationReport report = seq::validate(model, {std::nullopt, std::nullopt});
  if (!report.is_valid) {
    const seq::ValidationIssue& issue = report.errors.front();
    throw Error(Errc::InvalidModel, issue.code + " at " + issue.path + ": " + issue.message);
  }
  SolidAssembly assembly;
  for (const seq::SePair& se : model.ses) {
    const seq::Extrusion& e = se.extrusion;
    Prism prim;
    prim.profile = build_profile(se.sketch);
    prim.frame = plane_frame(e);
    prim.op = e.op;
    const double dp = dequant_coord(e.dist_pos);
    const double dn = dequant_coord(e.dist_neg);
    switch (e.extent) {
      case seq::Extent::One:
        prim.z_lo = std::min(0.0, dp);
        prim.z_hi = std::max(0.0, dp);
        break;
      case seq::Extent::Sym:
        prim.z_lo = -std::abs(dp) / 2;
        prim.z_hi = std::abs(dp) / 2;
        break;
      case seq::Extent::Two:
        prim.z_lo = std::min(-dn, dp);
        prim.z_hi = std::max(-dn, dp);
        break;
    }
    if (prim.z_hi - prim.z_lo < 1e-12 || prim.frame.scale <= 0) {
      throw Error(Errc::DegenerateExtrusion, "extrusion has zero length or zero scale");
    }
    assembly.primitives.push_back(std::move(prim));
  }
  return assembly;
}

}  // namespace cadedit::geometry
