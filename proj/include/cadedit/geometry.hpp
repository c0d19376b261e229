#pragma once

// Geometry kernel: profiles, prism assemblies with point-membership booleans,
// surface point clouds, preview meshes and a small software rasterizer.

#include <array>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "cadedit/cad_seq.hpp"

namespace cadedit::geometry {

struct Vec2 {
  double x = 0, y = 0;
};

struct Vec3 {
  double x = 0, y = 0, z = 0;
  bool operator==(const Vec3&) const = default;
};

inline Vec3 operator+(Vec3 a, Vec3 b) { return {a.x + b.x, a.y + b.y, a.z + b.z}; }
inline Vec3 operator-(Vec3 a, Vec3 b) { return {a.x - b.x, a.y - b.y, a.z - b.z}; }
inline Vec3 operator*(Vec3 a, double s) { return {a.x * s, a.y * s, a.z * s}; }
inline double dot(Vec3 a, Vec3 b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
inline Vec3 cross(Vec3 a, Vec3 b) {
  return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}

using Polygon = std::vector<Vec2>;

// Dequantization of the 8-bit grammar values.
double dequant_coord(seq::Quant c);     // (c - 128) / 128
double dequant_scale(seq::Quant s);     // s / 128
double dequant_theta(seq::Quant t);     // pi * t / 255
double dequant_angle(seq::Quant v);     // 2 pi * v / 255 - pi

inline constexpr int kArcSegments = 32;
inline constexpr int kCircleSegments = 64;

double signed_area(const Polygon& poly);
bool point_in_polygon(const Polygon& poly, Vec2 p);

struct FaceRegion {
  Polygon outer;               // CCW
  std::vector<Polygon> holes;  // CW
  bool contains(Vec2 p) const;
};

/// Discretized sketch, one region per face.
struct Profile2D {
  std::vector<FaceRegion> faces;
  bool contains(Vec2 p) const;
};

/// Throws DegenerateLoop, SelfIntersecting or HoleOutsideBoundary.
Profile2D build_profile(const seq::Sketch& sketch);

/// Orthonormal sketch-plane frame; `w` is the extrusion direction.
struct Frame {
  Vec3 origin;
  Vec3 u, v, w;
  double scale = 1;

  Vec3 to_world(double a, double b, double c) const {
    return origin + (u * a + v * b + w * c) * scale;
  }
  Vec3 to_local(Vec3 p) const {
    const Vec3 d = (p - origin) * (1.0 / scale);
    return {dot(d, u), dot(d, v), dot(d, w)};
  }
};

Frame plane_frame(const seq::Extrusion& e);

struct Prism {
  Profile2D profile;
  Frame frame;
  double z_lo = 0, z_hi = 0;  // local sweep interval along w (pre-scale units)
  seq::BoolOp op = seq::BoolOp::New;

  bool contains(Vec3 p) const;
};

struct Aabb {
  Vec3 lo{1e300, 1e300, 1e300};
  Vec3 hi{-1e300, -1e300, -1e300};
  void expand(Vec3 p);
  bool empty() const { return lo.x > hi.x; }
  double longest_side() const;
};

/// Ordered prisms combined left to right by their boolean ops.
struct SolidAssembly {
  std::vector<Prism> primitives;

  bool contains(Vec3 p) const;
  /// Box around the primitives that can add material.
  Aabb bounds() const;
};

/// Throws InvalidModel for a model that fails validation, DegenerateExtrusion
/// for a zero-length sweep, and any build_profile error.
SolidAssembly assemble(const seq::CadModel& model);

/// Band width for surface membership, in normalized (unit bounding box) units.
inline constexpr double kSurfaceBand = 0.01;
inline constexpr std::size_t kDefaultCloudSize = 2000;

struct PointCloud {
  std::vector<Vec3> points;
  std::uint64_t seed = 0;
};

/// Normalized cloud together with the same points in world coordinates.
struct SampledCloud {
  PointCloud cloud;
  std::vector<Vec3> world;
  double band = 0;  // membership probe distance used, in world units
};

/// Samples n points on the solid's boundary, then normalizes so the longest
/// bbox side spans exactly [-0.5, 0.5]. Throws EmptySolid.
SampledCloud sample_surface(const SolidAssembly& assembly, std::size_t n, std::uint64_t seed);
PointCloud sample_point_cloud(const SolidAssembly& assembly, std::size_t n, std::uint64_t seed);

struct TriangleMesh {
  std::vector<Vec3> vertices;
  std::vector<std::array<std::uint32_t, 3>> triangles;
  std::vector<std::uint32_t> triangle_primitive;  // index into primitive_ops
  std::vector<seq::BoolOp> primitive_ops;
};

/// Concatenated per-primitive prism meshes; booleans are not applied.
TriangleMesh mesh(const SolidAssembly& assembly);

/// Ear clipping of a polygon with holes. Indices refer to the concatenation
/// outer ++ holes[0] ++ holes[1] ...
std::vector<std::array<std::uint32_t, 3>> triangulate(const Polygon& outer,
                                                     const std::vector<Polygon>& holes);

struct Rgb {
  std::uint8_t r = 0, g = 0, b = 0;
  bool operator==(const Rgb&) const = default;
};

struct CameraConfig {
  int width = 256;
  int height = 256;
  Vec3 view_dir{1, 1, 1};  // from target towards the eye
  Rgb clear{255, 255, 255};
  Rgb solid{96, 140, 200};
  Rgb cut{220, 80, 60};
  double fill = 0.85;  // fraction of the viewport the mesh extent occupies
};

struct Image {
  int width = 0, height = 0;
  std::vector<std::uint8_t> rgb;  // row-major, 3 bytes per pixel

  Rgb at(int x, int y) const;
  std::size_t count_not(Rgb background) const;
};

/// Flat-shaded orthographic raster fitted to the mesh bounds.
Image render_preview(const TriangleMesh& mesh, const CameraConfig& camera = {});

std::vector<std::uint8_t> encode_png(const Image& image);
void write_obj(std::ostream& out, const TriangleMesh& mesh);
std::string to_obj(const TriangleMesh& mesh);
void write_xyz(std::ostream& out, const PointCloud& cloud);

}  // namespace cadedit::geometry
