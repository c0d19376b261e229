#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <map>
#include <sstream>

#include "cadedit/error.hpp"
#include "cadedit/metrics.hpp"

namespace cadedit::metrics {

namespace {

struct CachedModel {
  bool parsed = false;
  std::optional<geometry::PointCloud> cloud;
};

class CloudCache {
 public:
  explicit CloudCache(const EvalConfig& cfg) : cfg_(cfg) {}

  const CachedModel& get(const std::string& text) {
    auto it = cache_.find(text);
    if (it != cache_.end()) return it->second;
    CachedModel m;
    try {
      const seq::CadModel model = seq::parse(text);
      m.parsed = true;
      m.cloud = geometry::sample_point_cloud(geometry::assemble(model), cfg_.cloud_points,
                                             cfg_.seed ^ fnv1a(text));
    } catch (const Error&) {
    }
    return cache_.emplace(text, std::move(m)).first->second;
  }

 private:
  const EvalConfig& cfg_;
  std::map<std::string, CachedModel> cache_;
};

geometry::Image preview(const std::string& text) {
  return geometry::render_preview(geometry::mesh(geometry::assemble(seq::parse(text))));
}

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

}  // namespace

MetricsReport evaluate(const std::vector<captioning::EditTriplet>& testset,
                       const std::vector<pipeline::EditResult>& results, const EvalConfig& cfg) {
  if (results.size() != testset.size()) {
    throw Error(Errc::ArityMismatch, std::to_string(results.size()) + " results for " +
                                         std::to_string(testset.size()) + " examples");
  }
  MetricsReport rep;
  rep.examples = testset.size();
  CloudCache cache(cfg);
  std::vector<geometry::PointCloud> gt_clouds, cand_clouds;
  double best_sum = 0, all_sum = 0;
  std::size_t all_n = 0;
  struct Scored {
    std::size_t example;
    std::string best_text;
  };
  std::vector<Scored> scored;

  for (std::size_t i = 0; i < testset.size(); ++i) {
    const pipeline::EditResult& r = results[i];
    if (r.candidates.size() != r.k) {
      throw Error(Errc::ArityMismatch, "example " + std::to_string(i) + " has " +
                                           std::to_string(r.candidates.size()) + " candidates, expected " +
                                           std::to_string(r.k));
    }
    const CachedModel& gt = cache.get(testset[i].edit_text);
    if (gt.cloud) gt_clouds.push_back(*gt.cloud);
    double best = std::numeric_limits<double>::infinity();
    std::string best_text;
    for (const pipeline::Candidate& c : r.candidates) {
      ++rep.total;
      const CachedModel& m = cache.get(c.edit_text);
      if (m.parsed) ++rep.parsed;
      if (!m.cloud) continue;
      ++rep.rendered;
      cand_clouds.push_back(*m.cloud);
      if (!gt.cloud) continue;
      const double cd = chamfer(*gt.cloud, *m.cloud);
      all_sum += cd;
      ++all_n;
      if (cd < best) {
        best = cd;
        best_text = c.edit_text;
      }
    }
    if (!best_text.empty()) {
      best_sum += best;
      scored.push_back({i, best_text});
    }
  }

  rep.scored = scored.size();
  rep.vr = rep.total ? static_cast<double>(rep.rendered) / static_cast<double>(rep.total) : 0.0;
  rep.jsd = gt_clouds.empty() || cand_clouds.empty() ? kNaN : jsd(gt_clouds, cand_clouds, cfg.resolution);
  rep.cd = scored.empty() ? kNaN : best_sum / static_cast<double>(scored.size());
  rep.cd_mean = all_n ? all_sum / static_cast<double>(all_n) : kNaN;

  if (cfg.embedder && !scored.empty()) {
    std::vector<std::string> texts{std::string(kNeutralText)};
    std::vector<geometry::Image> images;
    for (const Scored& s : scored) {
      texts.push_back(dclip_edit_text(testset[s.example].instruction.text));
      images.push_back(preview(testset[s.example].orig_text));
      images.push_back(preview(s.best_text));
    }
    const auto te = cfg.embedder->embed_texts(texts);
    const auto ie = cfg.embedder->embed_images(images);
    double sum = 0;
    std::size_t n = 0;
    for (std::size_t k = 0; k < scored.size(); ++k) {
      try {
        sum += dclip({ie[2 * k], ie[2 * k + 1], te[0], te[k + 1]});
        ++n;
      } catch (const Error& e) {
        if (e.code() != Errc::ZeroDelta) throw;
      }
    }
    if (n) rep.dclip = sum / static_cast<double>(n);
  }
  return rep;
}

nlohmann::ordered_json to_json(const MetricsReport& r) {
  auto num = [](double v) { return std::isfinite(v) ? nlohmann::ordered_json(v) : nlohmann::ordered_json(nullptr); };
  nlohmann::ordered_json j;
  j["vr"] = r.vr;
  j["jsd"] = num(r.jsd);
  j["cd"] = num(r.cd);
  j["cd_mean"] = num(r.cd_mean);
  j["dclip"] = r.dclip ? num(*r.dclip) : nlohmann::ordered_json(nullptr);
  j["counts"] = {{"total", r.total}, {"parsed", r.parsed}, {"rendered", r.rendered},
                 {"examples", r.examples}, {"scored", r.scored}};
  return j;
}

std::string format_table(const MetricsReport& r) {
  auto cell = [](std::optional<double> v, double scale, int digits = 2) {
    if (!v || !std::isfinite(*v)) return std::string("-");
    std::ostringstream s;
    s << std::fixed << std::setprecision(digits) << *v * scale;
    return s.str();
  };
  std::ostringstream out;
  out << std::left << std::setw(10) << "Method" << std::right << std::setw(8) << "VR (%)" << std::setw(8)
      << "JSD" << std::setw(8) << "CD" << std::setw(8) << "D-CLIP" << std::setw(10) << "CD-mean" << '\n';
  out << std::left << std::setw(10) << "cadedit" << std::right << std::setw(8)
      << cell(r.vr, 100, 1) << std::setw(8) << cell(r.jsd, 100) << std::setw(8) << cell(r.cd, 100)
      << std::setw(8) << cell(r.dclip, 100) << std::setw(10) << cell(r.cd_mean, 100) << '\n';
  out << "JSD, CD and D-CLIP are scaled by 10^2. " << r.rendered << "/" << r.total
      << " candidates rendered over " << r.examples << " examples.\n";
  return out.str();
}

std::vector<pipeline::EditResult> read_results_jsonl(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::IoError, "cannot open " + path);
  std::vector<pipeline::EditResult> out;
  std::string line;
  while (std::getline(in, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      out.push_back(pipeline::edit_result_from_json(nlohmann::json::parse(line)));
    } catch (const nlohmann::json::exception& e) {
      throw Error(Errc::FormatError, path + ": " + e.what());
    }
  }
  return out;
}

void write_results_jsonl(const std::string& path, const std::vector<pipeline::EditResult>& results) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(Errc::IoError, "cannot write " + path);
  for (const auto& r : results) out << pipeline::to_json(r).dump() << '\n';
  if (!out.flush()) throw Error(Errc::IoError, "write failed for " + path);
}

}  // namespace cadedit::metrics
