#include <png.h>

#include <algorithm>
#include <cmath>
#include <limits>

#include "cadedit/error.hpp"
#include "cadedit/geometry.hpp"

namespace cadedit::geometry {

Rgb Image::at(int x, int y) const {
  const std::size_t i = (static_cast<std::size_t>(y) * width + x) * 3;
  return {rgb[i], rgb[i + 1], rgb[i + 2]};
}

std::size_t Image::count_not(Rgb background) const {
  std::size_t n = 0;
  for (std::size_t i = 0; i + 2 < rgb.size(); i += 3) {
    if (rgb[i] != background.r || rgb[i + 1] != background.g || rgb[i + 2] != background.b) ++n;
  }
  return n;
}

namespace {

Vec3 normalized(Vec3 v) {
  const double len = std::sqrt(dot(v, v));
  return len > 0 ? v * (1.0 / len) : v;
}

struct ScreenVertex {
  double x, y, depth;
};

}  // namespace

Image render_preview(const TriangleMesh& mesh, const CameraConfig& camera) {
  if (camera.width <= 0 || camera.height <= 0) {
    throw Error(Errc::ZeroAreaViewport, "viewport has zero area");
  }
  if (mesh.vertices.empty() || mesh.triangles.empty()) {
    throw Error(Errc::InvalidInput, "cannot render an empty mesh");
  }
  const Vec3 dir = normalized(camera.view_dir);
  Vec3 right = cross(Vec3{0, 0, 1}, dir);
  if (dot(right, right) < 1e-12) right = cross(Vec3{0, 1, 0}, dir);
  right = normalized(right);
  const Vec3 up = normalized(cross(dir, right));

  std::vector<ScreenVertex> sv;
  sv.reserve(mesh.vertices.size());
  double lo_x = 1e300, hi_x = -1e300, lo_y = 1e300, hi_y = -1e300;
  for (const Vec3& p : mesh.vertices) {
    const ScreenVertex s{dot(p, right), dot(p, up), dot(p, dir)};
    lo_x = std::min(lo_x, s.x);
    hi_x = std::max(hi_x, s.x);
    lo_y = std::min(lo_y, s.y);
    hi_y = std::max(hi_y, s.y);
    sv.push_back(s);
  }
  const double extent = std::max(hi_x - lo_x, hi_y - lo_y);
  if (!(extent > 0)) throw Error(Errc::ZeroAreaViewport, "mesh projects to a point");
  const double cx = 0.5 * (lo_x + hi_x), cy = 0.5 * (lo_y + hi_y);
  const double pix = camera.fill * std::min(camera.width, camera.height) / extent;
  for (ScreenVertex& s : sv) {
    s.x = (s.x - cx) * pix + 0.5 * camera.width;
    s.y = 0.5 * camera.height - (s.y - cy) * pix;
  }

  Image img;
  img.width = camera.width;
  img.height = camera.height;
  img.rgb.resize(static_cast<std::size_t>(img.width) * img.height * 3);
  for (std::size_t i = 0; i < img.rgb.size(); i += 3) {
    img.rgb[i] = camera.clear.r;
    img.rgb[i + 1] = camera.clear.g;
    img.rgb[i + 2] = camera.clear.b;
  }
  std::vector<double> zbuf(static_cast<std::size_t>(img.width) * img.height,
                           -std::numeric_limits<double>::infinity());
  const Vec3 light = normalized(dir + right * 0.3 + up * 0.5);

  auto raster = [&](bool cut_pass) {
    for (std::size_t t = 0; t < mesh.triangles.size(); ++t) {
      const bool is_cut = mesh.primitive_ops[mesh.triangle_primitive[t]] == seq::BoolOp::Cut;
      if (is_cut != cut_pass) continue;
      const auto& tri = mesh.triangles[t];
      const ScreenVertex a = sv[tri[0]], b = sv[tri[1]], c = sv[tri[2]];
      const double area = (b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x);
      if (std::abs(area) < 1e-12) continue;
      const Vec3 n = normalized(cross(mesh.vertices[tri[1]] - mesh.vertices[tri[0]],
                                      mesh.vertices[tri[2]] - mesh.vertices[tri[0]]));
      const double shade = 0.35 + 0.65 * std::abs(dot(n, light));
      const Rgb base = cut_pass ? camera.cut : camera.solid;
      const int x0 = std::max(0, static_cast<int>(std::floor(std::min({a.x, b.x, c.x}))));
      const int x1 = std::min(img.width - 1, static_cast<int>(std::ceil(std::max({a.x, b.x, c.x}))));
      const int y0 = std::max(0, static_cast<int>(std::floor(std::min({a.y, b.y, c.y}))));
      const int y1 = std::min(img.height - 1, static_cast<int>(std::ceil(std::max({a.y, b.y, c.y}))));
      for (int y = y0; y <= y1; ++y) {
        for (int x = x0; x <= x1; ++x) {
          const double px = x + 0.5, py = y + 0.5;
          double w0 = (b.x - px) * (c.y - py) - (b.y - py) * (c.x - px);
          double w1 = (c.x - px) * (a.y - py) - (c.y - py) * (a.x - px);
          double w2 = (a.x - px) * (b.y - py) - (a.y - py) * (b.x - px);
          if (area < 0) {
            w0 = -w0;
            w1 = -w1;
            w2 = -w2;
          }
          if (w0 < 0 || w1 < 0 || w2 < 0) continue;
          const double inv = 1.0 / std::abs(area);
          const double depth = (w0 * a.depth + w1 * b.depth + w2 * c.depth) * inv;
          const std::size_t idx = static_cast<std::size_t>(y) * img.width + x;
          if (depth <= zbuf[idx]) continue;
          std::uint8_t* px_rgb = &img.rgb[idx * 3];
          const std::uint8_t r = static_cast<std::uint8_t>(std::lround(base.r * shade));
          const std::uint8_t g = static_cast<std::uint8_t>(std::lround(base.g * shade));
          const std::uint8_t bl = static_cast<std::uint8_t>(std::lround(base.b * shade));
          if (cut_pass) {
            // Translucent subtraction overlay; does not occlude.
            px_rgb[0] = static_cast<std::uint8_t>((px_rgb[0] + r) / 2);
            px_rgb[1] = static_cast<std::uint8_t>((px_rgb[1] + g) / 2);
            px_rgb[2] = static_cast<std::uint8_t>((px_rgb[2] + bl) / 2);
          } else {
            zbuf[idx] = depth;
            px_rgb[0] = r;
            px_rgb[1] = g;
            px_rgb[2] = bl;
          }
        }
      }
    }
  };
  raster(false);
  raster(true);
  return img;
}

std::vector<std::uint8_t> encode_png(const Image& image) {
  std::vector<std::uint8_t> out;
  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  if (!png) throw Error(Errc::IoError, "png_create_write_struct failed");
  png_infop info = png_create_info_struct(png);
  if (!info || setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, info ? &info : nullptr);
    throw Error(Errc::IoError, "PNG encoding failed");
  }
  png_set_write_fn(
      png, &out,
      [](png_structp p, png_bytep data, png_size_t len) {
        auto* buf = static_cast<std::vector<std::uint8_t>*>(png_get_io_ptr(p));
        buf->insert(buf->end(), data, data + len);
      },
      nullptr);
  png_set_IHDR(png, info, static_cast<png_uint_32>(image.width), static_cast<png_uint_32>(image.height),
               8, PNG_COLOR_TYPE_RGB, PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT,
               PNG_FILTER_TYPE_DEFAULT);
  png_write_info(png, info);
  for (int y = 0; y < image.height; ++y) {
    png_write_row(png, const_cast<png_bytep>(&image.rgb[static_cast<std::size_t>(y) * image.width * 3]));
  }
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
  return out;
}

}  // namespace cadedit::geometry
