#include <iomanip>
#include <ostream>
#include <sstream>

#include "cadedit/geometry.hpp"

namespace cadedit::geometry {

// One group per primitive, named after its boolean op so viewers can render
// cut bodies as translucent subtractions.
void write_obj(std::ostream& out, const TriangleMesh& mesh) {
  out << std::setprecision(9);
  for (const Vec3& v : mesh.vertices) out << "v " << v.x << ' ' << v.y << ' ' << v.z << '\n';
  std::uint32_t group = UINT32_MAX;
  for (std::size_t t = 0; t < mesh.triangles.size(); ++t) {
    const std::uint32_t prim = mesh.triangle_primitive[t];
    if (prim != group) {
      group = prim;
      out << "g se" << prim << '_' << seq::to_string(mesh.primitive_ops[prim]) << '\n';
    }
    const auto& tri = mesh.triangles[t];
    out << "f " << tri[0] + 1 << ' ' << tri[1] + 1 << ' ' << tri[2] + 1 << '\n';
  }
}

std::string to_obj(const TriangleMesh& mesh) {
  std::ostringstream os;
  write_obj(os, mesh);
  return os.str();
}

void write_xyz(std::ostream& out, const PointCloud& cloud) {
  out << std::setprecision(9);
  for (const Vec3& p : cloud.points) out << p.x << ' ' << p.y << ' ' << p.z << '\n';
}

}  // namespace cadedit::geometry
