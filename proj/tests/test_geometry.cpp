#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "cadedit/error.hpp"
#include "cadedit/geometry.hpp"
#include "support/test_support.hpp"

namespace cadedit {
namespace {

using namespace geometry;

Errc geometry_error(const seq::CadModel& m) {
  try {
    assemble(m);
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "expected a geometry error";
  return Errc::IoError;
}

TEST(Profile, UnitSquareIsCcwWithUnitArea) {
  const Profile2D p = build_profile(seq::Sketch{{seq::Face{{testing::unit_square()}}}});
  ASSERT_EQ(p.faces.size(), 1u);
  EXPECT_NEAR(signed_area(p.faces[0].outer), 1.0, 1e-12);
  EXPECT_EQ(p.faces[0].outer.size(), 4u);
}

TEST(Profile, CircleAreaWithinOnePercent) {
  const Profile2D p = build_profile(seq::Sketch{{seq::Face{{{{seq::Circle{128, 128, 64}}}}}}});
  const double a = signed_area(p.faces[0].outer);
  EXPECT_EQ(p.faces[0].outer.size(), static_cast<std::size_t>(kCircleSegments));
  // Regular n-gon inscribed in a circle of radius r: (n/2) r^2 sin(2 pi / n).
  const double n = kCircleSegments, r = 0.5;
  EXPECT_NEAR(a, 0.5 * n * r * r * std::sin(2 * M_PI / n), 1e-12);
  EXPECT_NEAR(a, M_PI * r * r, 0.01 * M_PI * r * r);
}

TEST(Profile, HolesAreClockwise) {
  seq::Face face{{testing::unit_square(), {{seq::Circle{128, 128, 16}}}}};
  const Profile2D p = build_profile(seq::Sketch{{face}});
  ASSERT_EQ(p.faces[0].holes.size(), 1u);
  EXPECT_LT(signed_area(p.faces[0].holes[0]), 0);
  EXPECT_FALSE(p.contains({0, 0}));
  EXPECT_TRUE(p.contains({0.4, 0.4}));
}

TEST(Profile, ArcPassesThroughMidPoint) {
  // Half disc: diameter along x, arc bulging to +y through (128, 192).
  seq::Loop loop{{seq::Line{192, 128}, seq::Arc{64, 128, 128, 192}}};
  const Profile2D p = build_profile(seq::Sketch{{seq::Face{{loop}}}});
  EXPECT_NEAR(signed_area(p.faces[0].outer), M_PI * 0.25 / 2, 0.01);
}

TEST(Profile, Errors) {
  auto code = [](seq::Loop loop) {
    try {
      build_profile(seq::Sketch{{seq::Face{{std::move(loop)}}}});
    } catch (const Error& e) {
      return e.code();
    }
    return Errc::IoError;
  };
  EXPECT_EQ(code({{seq::Line{10, 10}, seq::Line{10, 10}, seq::Line{10, 10}}}), Errc::DegenerateLoop);
  EXPECT_EQ(code({{seq::Line{0, 0}, seq::Line{100, 100}, seq::Line{100, 0}, seq::Line{0, 150}}}),
            Errc::SelfIntersecting);
  seq::Face outside{{testing::unit_square(), {{seq::Circle{10, 10, 5}}}}};
  EXPECT_THROW(build_profile(seq::Sketch{{outside}}), Error);
}

TEST(Assemble, SquarePrismHeight) {
  const SolidAssembly a = assemble(testing::square_model(192));
  ASSERT_EQ(a.primitives.size(), 1u);
  EXPECT_DOUBLE_EQ(a.primitives[0].z_hi - a.primitives[0].z_lo, 0.5);
  const Aabb b = a.bounds();
  EXPECT_NEAR(b.longest_side(), 1.0, 1e-12);
}

TEST(Assemble, ZeroExtrusionIsDegenerate) {
  EXPECT_EQ(geometry_error(testing::square_model(128)), Errc::DegenerateExtrusion);
}

TEST(Assemble, InvalidModelRejected) {
  EXPECT_EQ(geometry_error(seq::CadModel{}), Errc::InvalidModel);
}

TEST(Assemble, CutRemovesCentre) {
  const SolidAssembly a = assemble(testing::cube_with_cut_cylinder());
  EXPECT_FALSE(a.contains({0, 0, 0}));
  EXPECT_TRUE(a.contains({0.4, 0.4, 0.0}));
}

TEST(Assemble, JoinOfDisjointBodies) {
  seq::CadModel m{{testing::se({{seq::Line{96, 64}, seq::Line{96, 96}, seq::Line{64, 96}, seq::Line{64, 64}}}),
                   testing::se({{seq::Line{192, 160}, seq::Line{192, 192}, seq::Line{160, 192}, seq::Line{160, 160}}},
                               seq::BoolOp::Join)}};
  const SolidAssembly a = assemble(m);
  EXPECT_TRUE(a.contains({-0.375, -0.375, 0.1}));
  EXPECT_TRUE(a.contains({0.375, 0.375, 0.1}));
  EXPECT_FALSE(a.contains({0, 0, 0.1}));
}

TEST(Assemble, CutThenJoinRestoresMembership) {
  seq::CadModel base = testing::square_model();
  seq::CadModel m = base;
  const auto body = testing::se({{seq::Circle{128, 128, 32}}}, seq::BoolOp::Cut, 200, seq::Extent::Two);
  m.ses.push_back(body);
  m.ses.push_back(body);
  m.ses.back().extrusion.op = seq::BoolOp::Join;
  const SolidAssembly a = assemble(base), b = assemble(m);
  for (double x = -0.45; x < 0.5; x += 0.1) {
    for (double z = 0.05; z < 0.5; z += 0.1) {
      ASSERT_EQ(a.contains({x, 0.01, z}), b.contains({x, 0.01, z}));
    }
  }
}

TEST(Sampling, UnitCubeNormalization) {
  const PointCloud c = sample_point_cloud(assemble(testing::cube_model()), kDefaultCloudSize, 7);
  ASSERT_EQ(c.points.size(), kDefaultCloudSize);
  Vec3 lo{1e9, 1e9, 1e9}, hi{-1e9, -1e9, -1e9};
  for (const Vec3& p : c.points) {
    lo = {std::min(lo.x, p.x), std::min(lo.y, p.y), std::min(lo.z, p.z)};
    hi = {std::max(hi.x, p.x), std::max(hi.y, p.y), std::max(hi.z, p.z)};
    ASSERT_GE(p.x, -0.5);
    ASSERT_LE(p.x, 0.5);
    ASSERT_GE(p.y, -0.5);
    ASSERT_LE(p.y, 0.5);
    ASSERT_GE(p.z, -0.5);
    ASSERT_LE(p.z, 0.5);
  }
  const double ext[] = {hi.x - lo.x, hi.y - lo.y, hi.z - lo.z};
  const int axis = static_cast<int>(std::max_element(ext, ext + 3) - ext);
  const double los[] = {lo.x, lo.y, lo.z}, his[] = {hi.x, hi.y, hi.z};
  EXPECT_EQ(los[axis], -0.5);
  EXPECT_EQ(his[axis], 0.5);
}

TEST(Sampling, DeterministicPerSeed) {
  const SolidAssembly a = assemble(testing::cube_with_cut_cylinder());
  const PointCloud c1 = sample_point_cloud(a, 500, 3), c2 = sample_point_cloud(a, 500, 3);
  ASSERT_EQ(c1.points.size(), c2.points.size());
  for (std::size_t i = 0; i < c1.points.size(); ++i) {
    ASSERT_EQ(c1.points[i].x, c2.points[i].x);
    ASSERT_EQ(c1.points[i].y, c2.points[i].y);
    ASSERT_EQ(c1.points[i].z, c2.points[i].z);
  }
  const PointCloud c3 = sample_point_cloud(a, 500, 4);
  EXPECT_NE(c1.points[0].x, c3.points[0].x);
}

TEST(Sampling, NoPointInsideCut) {
  const SolidAssembly a = assemble(testing::cube_with_cut_cylinder());
  const SampledCloud s = sample_surface(a, kDefaultCloudSize, 11);
  ASSERT_EQ(s.world.size(), kDefaultCloudSize);
  for (const Vec3& p : s.world) {
    // Strictly inside the cut: radius below 0.25 minus the membership band.
    ASSERT_GE(std::hypot(p.x, p.y), 0.25 - s.band - 1e-9);
  }
}

TEST(Sampling, PointsLieOnTheBoundary) {
  const SolidAssembly a = assemble(testing::cube_with_cut_cylinder());
  const SampledCloud s = sample_surface(a, 1000, 2);
  const double r = 1.5 * s.band;
  const Vec3 dirs[] = {{r, 0, 0}, {-r, 0, 0}, {0, r, 0}, {0, -r, 0}, {0, 0, r}, {0, 0, -r}};
  for (const Vec3& p : s.world) {
    bool in = false, out = false;
    for (const Vec3& d : dirs) (a.contains(p + d) ? in : out) = true;
    ASSERT_TRUE(in && out) << p.x << " " << p.y << " " << p.z;
  }
}

TEST(Sampling, EmptySolid) {
  seq::CadModel m = testing::square_model();
  seq::SePair far = testing::se({{seq::Line{20, 0}, seq::Line{20, 20}, seq::Line{0, 20}, seq::Line{0, 0}}},
                                seq::BoolOp::Intersect);
  m.ses.push_back(far);
  try {
    sample_point_cloud(assemble(m), 100, 1);
    FAIL() << "expected EmptySolid";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::EmptySolid);
  }
}

TEST(Mesh, SquarePrismTopology) {
  const TriangleMesh m = mesh(assemble(testing::square_model()));
  EXPECT_EQ(m.vertices.size(), 8u);
  EXPECT_EQ(m.triangles.size(), 12u);
  for (const auto& t : m.triangles) {
    for (auto i : t) ASSERT_LT(i, m.vertices.size());
  }
}

TEST(Mesh, CylinderTriangleCount) {
  const TriangleMesh m = mesh(assemble(seq::CadModel{{testing::se({{seq::Circle{128, 128, 64}}})}}));
  const std::size_t n = kCircleSegments;
  EXPECT_EQ(m.triangles.size(), 2 * n + 2 * (n - 2));
}

TEST(Mesh, CutPrimitivesTagged) {
  const TriangleMesh m = mesh(assemble(testing::cube_with_cut_cylinder()));
  ASSERT_EQ(m.primitive_ops.size(), 2u);
  EXPECT_EQ(m.primitive_ops[1], seq::BoolOp::Cut);
  EXPECT_EQ(m.triangle_primitive.size(), m.triangles.size());
}

TEST(Mesh, CapWithHoleTriangulates) {
  seq::Face face{{testing::unit_square(), {{seq::Circle{128, 128, 32}}}}};
  seq::SePair s;
  s.sketch.faces.push_back(face);
  const TriangleMesh m = mesh(assemble(seq::CadModel{{s}}));
  // Each cap: polygon of 4 + 64 vertices with one hole gives 4 + 64 triangles.
  const std::size_t cap = 4 + kCircleSegments;
  const std::size_t side = 2 * (4 + kCircleSegments);
  EXPECT_EQ(m.triangles.size(), 2 * cap + side);
}

TEST(Render, CubeHasForeground) {
  const Image img = render_preview(mesh(assemble(testing::cube_model())));
  EXPECT_EQ(img.width, 256);
  EXPECT_GT(img.count_not({255, 255, 255}), 1000u);
  EXPECT_EQ(img.at(0, 0), (Rgb{255, 255, 255}));
}

TEST(Render, Deterministic) {
  const TriangleMesh m = mesh(assemble(testing::cube_with_cut_cylinder()));
  EXPECT_EQ(render_preview(m).rgb, render_preview(m).rgb);
  EXPECT_EQ(encode_png(render_preview(m)), encode_png(render_preview(m)));
}

TEST(Render, TranslationKeepsSilhouette) {
  seq::CadModel moved = testing::cube_model();
  moved.ses[0].extrusion.origin_x = 170;
  moved.ses[0].extrusion.origin_z = 90;
  const auto a = render_preview(mesh(assemble(testing::cube_model()))).count_not({255, 255, 255});
  const auto b = render_preview(mesh(assemble(moved))).count_not({255, 255, 255});
  EXPECT_NEAR(static_cast<double>(a), static_cast<double>(b), 0.01 * a);
}

TEST(Render, Errors) {
  EXPECT_THROW(render_preview(TriangleMesh{}), Error);
  CameraConfig cam;
  cam.width = 0;
  try {
    render_preview(mesh(assemble(testing::cube_model())), cam);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::ZeroAreaViewport);
  }
}

TEST(Render, PngSignature) {
  const auto png = encode_png(render_preview(mesh(assemble(testing::cube_model()))));
  ASSERT_GT(png.size(), 8u);
  EXPECT_EQ(png[1], 'P');
  EXPECT_EQ(png[2], 'N');
  EXPECT_EQ(png[3], 'G');
}

TEST(Export, ObjAndXyz) {
  const std::string obj = to_obj(mesh(assemble(testing::square_model())));
  std::istringstream in(obj);
  std::string line;
  int v = 0, f = 0;
  while (std::getline(in, line)) {
    if (line.rfind("v ", 0) == 0) ++v;
    if (line.rfind("f ", 0) == 0) ++f;
  }
  EXPECT_EQ(v, 8);
  EXPECT_EQ(f, 12);
  std::ostringstream xyz;
  write_xyz(xyz, sample_point_cloud(assemble(testing::cube_model()), 10, 1));
  const std::string s = xyz.str();
  EXPECT_EQ(std::count(s.begin(), s.end(), '\n'), 10);
}

}  // namespace
}  // namespace cadedit
