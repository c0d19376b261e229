#include <algorithm>
#include <cmath>

#include <boost/geometry.hpp>
#include <boost/geometry/index/rtree.hpp>

#include "cadedit/error.hpp"
#include "cadedit/metrics.hpp"

namespace cadedit::metrics {

namespace bg = boost::geometry;
namespace bgi = boost::geometry::index;

std::vector<double> OccupancyHistogram::probabilities() const {
  std::vector<double> p(counts.size(), 0.0);
  if (total <= 0) return p;
  for (std::size_t i = 0; i < counts.size(); ++i) p[i] = counts[i] / total;
  return p;
}

OccupancyHistogram occupancy(const std::vector<geometry::PointCloud>& clouds, std::size_t resolution) {
  OccupancyHistogram h;
  h.resolution = resolution;
  h.counts.assign(resolution * resolution * resolution, 0.0);
  const auto r = static_cast<long>(resolution);
  auto cell = [&](double v) {
    const long c = static_cast<long>(std::floor((v + 0.5) * static_cast<double>(r)));
    return static_cast<std::size_t>(std::clamp(c, 0L, r - 1));
  };
  for (const geometry::PointCloud& cloud : clouds) {
    for (const geometry::Vec3& p : cloud.points) {
      h.counts[(cell(p.z) * resolution + cell(p.y)) * resolution + cell(p.x)] += 1;
      h.total += 1;
    }
  }
  return h;
}

double jsd(const std::vector<double>& p, const std::vector<double>& q) {
  if (p.size() != q.size()) throw Error(Errc::ArityMismatch, "distributions differ in length");
  double sp = 0, sq = 0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    sp += p[i];
    sq += q[i];
  }
  if (sp <= 0 || sq <= 0) throw Error(Errc::EmptyInput, "empty distribution");
  double d = 0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double a = p[i] / sp, b = q[i] / sq, m = 0.5 * (a + b);
    if (a > 0) d += 0.5 * a * std::log2(a / m);
    if (b > 0) d += 0.5 * b * std::log2(b / m);
  }
  return std::clamp(d, 0.0, 1.0);
}

double jsd(const std::vector<geometry::PointCloud>& a, const std::vector<geometry::PointCloud>& b,
           std::size_t resolution) {
  const OccupancyHistogram ha = occupancy(a, resolution);
  const OccupancyHistogram hb = occupancy(b, resolution);
  if (ha.total == 0 || hb.total == 0) throw Error(Errc::EmptyInput, "no points to compare");
  return jsd(ha.counts, hb.counts);
}

namespace {

using BPoint = bg::model::point<double, 3, bg::cs::cartesian>;

double sq_dist(const geometry::Vec3& a, const geometry::Vec3& b) {
  const double dx = a.x - b.x, dy = a.y - b.y, dz = a.z - b.z;
  return dx * dx + dy * dy + dz * dz;
}

// Mean squared distance from each point of `from` to its nearest point of `to`.
double directed(const geometry::PointCloud& from, const geometry::PointCloud& to) {
  std::vector<std::pair<BPoint, std::size_t>> entries;
  entries.reserve(to.points.size());
  for (std::size_t i = 0; i < to.points.size(); ++i) {
    const auto& p = to.points[i];
    entries.emplace_back(BPoint(p.x, p.y, p.z), i);
  }
  const bgi::rtree<std::pair<BPoint, std::size_t>, bgi::quadratic<16>> tree(entries.begin(), entries.end());
  double sum = 0;
  std::vector<std::pair<BPoint, std::size_t>> hit;
  for (const geometry::Vec3& p : from.points) {
    hit.clear();
    tree.query(bgi::nearest(BPoint(p.x, p.y, p.z), 1), std::back_inserter(hit));
    sum += sq_dist(p, to.points[hit.front().second]);
  }
  return sum / static_cast<double>(from.points.size());
}

}  // namespace

double chamfer(const geometry::PointCloud& a, const geometry::PointCloud& b) {
  if (a.points.empty() || b.points.empty()) throw Error(Errc::EmptyInput, "empty point cloud");
  return directed(a, b) + directed(b, a);
}

std::string dclip_edit_text(const std::string& instruction) {
  return std::string(kNeutralText) + " " + instruction;
}

double dclip(const DClipInputs& x) {
  const std::size_t n = x.e_img_orig.size();
  if (x.e_img_edit.size() != n || x.e_txt_orig.size() != n || x.e_txt_edit.size() != n) {
    throw Error(Errc::ArityMismatch, "embedding dimensions differ");
  }
  double dot = 0, ni = 0, nt = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double di = x.e_img_edit[i] - x.e_img_orig[i];
    const double dt = x.e_txt_edit[i] - x.e_txt_orig[i];
    dot += di * dt;
    ni += di * di;
    nt += dt * dt;
  }
  ni = std::sqrt(ni);
  nt = std::sqrt(nt);
  if (ni <= 1e-12 || nt <= 1e-12) throw Error(Errc::ZeroDelta, "embedding delta is zero");
  return std::clamp(dot / (ni * nt), -1.0, 1.0);
}

bool renders(const std::string& text, std::size_t points, std::uint64_t seed) {
  try {
    geometry::sample_point_cloud(geometry::assemble(seq::parse(text)), points, seed);
    return true;
  } catch (const Error&) {
    return false;
  }
}

double valid_ratio(const std::vector<std::string>& texts) {
  if (texts.empty()) throw Error(Errc::EmptyInput, "no candidates");
  std::size_t ok = 0;
  for (const std::string& t : texts) ok += renders(t) ? 1 : 0;
  return static_cast<double>(ok) / static_cast<double>(texts.size());
}

namespace {

std::vector<std::vector<double>> parse_embeddings(const nlohmann::json& reply, std::size_t expected) {
  try {
    auto out = reply.at("embeddings").get<std::vector<std::vector<double>>>();
    if (out.size() != expected) throw Error(Errc::ArityMismatch, "embedding count differs from input count");
    return out;
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::FormatError, std::string("malformed embedding reply: ") + e.what());
  }
}

}  // namespace

std::vector<std::vector<double>> HttpEmbeddingBackend::embed_texts(const std::vector<std::string>& texts) {
  return parse_embeddings(post_json(endpoint_, {{"texts", texts}}), texts.size());
}

std::vector<std::vector<double>> HttpEmbeddingBackend::embed_images(
    const std::vector<geometry::Image>& images) {
  std::vector<std::string> encoded;
  for (const geometry::Image& img : images) encoded.push_back(base64_encode(geometry::encode_png(img)));
  return parse_embeddings(post_json(endpoint_, {{"images", encoded}}), images.size());
}

}  // namespace cadedit::metrics
