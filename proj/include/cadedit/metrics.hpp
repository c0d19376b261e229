#pragma once

// Evaluation: valid ratio, occupancy JSD, chamfer distance, directional
// CLIP score and the batch harness that combines them.

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cadedit/captioning.hpp"
#include "cadedit/geometry.hpp"
#include "cadedit/http_client.hpp"
#include "cadedit/pipeline.hpp"

namespace cadedit::metrics {

inline constexpr std::size_t kGridResolution = 28;

struct OccupancyHistogram {
  std::size_t resolution = kGridResolution;
  std::vector<double> counts;  // resolution^3 cells, x fastest
  double total = 0;

  std::vector<double> probabilities() const;
};

/// Pools the points of all clouds; coordinates are expected in [-0.5, 0.5]
/// and are clamped to the border cells.
OccupancyHistogram occupancy(const std::vector<geometry::PointCloud>& clouds,
                             std::size_t resolution = kGridResolution);

/// Jensen-Shannon divergence, log base 2, of two non-negative weight vectors
/// (normalized here). Throws EmptyInput on an all-zero side and
/// ArityMismatch on different lengths.
double jsd(const std::vector<double>& p, const std::vector<double>& q);
double jsd(const std::vector<geometry::PointCloud>& a, const std::vector<geometry::PointCloud>& b,
           std::size_t resolution = kGridResolution);

/// Mean squared nearest-neighbour distance a->b plus b->a. Throws EmptyInput.
double chamfer(const geometry::PointCloud& a, const geometry::PointCloud& b);

inline constexpr std::string_view kNeutralText = "This is a 3D shape.";

/// Text whose embedding stands for the edited model: the neutral text
/// followed by the instruction.
std::string dclip_edit_text(const std::string& instruction);

struct DClipInputs {
  std::vector<double> e_img_orig, e_img_edit;
  std::vector<double> e_txt_orig, e_txt_edit;
};

/// Cosine between the image and text embedding deltas. Throws ZeroDelta when
/// either delta has norm <= 1e-12 and ArityMismatch on differing dimensions.
double dclip(const DClipInputs& x);

/// Parses, assembles and samples; false on any failure.
bool renders(const std::string& text, std::size_t points = geometry::kDefaultCloudSize,
             std::uint64_t seed = 0);

/// Fraction of texts that parse and render. Throws EmptyInput.
double valid_ratio(const std::vector<std::string>& texts);

class EmbeddingBackend {
 public:
  virtual ~EmbeddingBackend() = default;
  virtual std::vector<std::vector<double>> embed_texts(const std::vector<std::string>& texts) = 0;
  virtual std::vector<std::vector<double>> embed_images(const std::vector<geometry::Image>& images) = 0;
};

/// Wire format: {"texts": [...]} or {"images": [base64 PNG, ...]} ->
/// {"embeddings": [[...], ...]}.
class HttpEmbeddingBackend : public EmbeddingBackend {
 public:
  explicit HttpEmbeddingBackend(HttpEndpoint endpoint) : endpoint_(std::move(endpoint)) {}
  std::vector<std::vector<double>> embed_texts(const std::vector<std::string>& texts) override;
  std::vector<std::vector<double>> embed_images(const std::vector<geometry::Image>& images) override;

 private:
  HttpEndpoint endpoint_;
};

struct EvalConfig {
  std::size_t cloud_points = geometry::kDefaultCloudSize;
  std::size_t resolution = kGridResolution;
  std::uint64_t seed = 0;
  EmbeddingBackend* embedder = nullptr;  // D-CLIP is skipped without one
};

struct MetricsReport {
  double vr = 0;
  double jsd = 0;
  double cd = 0;       // mean over examples of the best candidate's CD
  double cd_mean = 0;  // mean over all valid candidates
  std::optional<double> dclip;
  std::size_t total = 0;     // candidates
  std::size_t parsed = 0;
  std::size_t rendered = 0;
  std::size_t examples = 0;
  std::size_t scored = 0;  // examples with at least one valid candidate
};

/// results[i] holds the candidates for testset[i]. Throws ArityMismatch when
/// the counts disagree.
MetricsReport evaluate(const std::vector<captioning::EditTriplet>& testset,
                       const std::vector<pipeline::EditResult>& results, const EvalConfig& cfg = {});

/// Unscaled values.
nlohmann::ordered_json to_json(const MetricsReport& r);
/// Aligned table; VR in percent, JSD, CD and D-CLIP multiplied by 100.
std::string format_table(const MetricsReport& r);

std::vector<pipeline::EditResult> read_results_jsonl(const std::string& path);
void write_results_jsonl(const std::string& path, const std::vector<pipeline::EditResult>& results);

}  // namespace cadedit::metrics
