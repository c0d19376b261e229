#pragma once

// Locate-then-infill editing: a locating call masks the spans to change, then
// k infilling calls propose replacements for the masked spans.

#include <cstdint>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "cadedit/captioning.hpp"
#include "cadedit/http_client.hpp"
#include "cadedit/masking.hpp"

namespace cadedit::pipeline {

struct SamplingConfig {
  double temperature = 0.9;
  double top_p = 0.9;
  int max_tokens = 1024;
  std::optional<std::uint64_t> seed;
};

class ModelBackend {
 public:
  virtual ~ModelBackend() = default;
  virtual std::string complete(const std::string& prompt, const SamplingConfig& sampling) = 0;
};

/// Canned responses keyed by prompt. With several responses for one prompt
/// the call's seed picks one (seed mod count), so results are a pure
/// function of (prompt, seed).
class ScriptedBackend : public ModelBackend {
 public:
  void add(const std::string& prompt, std::string response);
  std::string complete(const std::string& prompt, const SamplingConfig& sampling) override;
  std::size_t size() const { return responses_.size(); }

  /// Answers each triplet's locating prompt with its ground-truth mask and
  /// its infilling prompt with the edited sequence.
  static ScriptedBackend from_triplets(const std::vector<captioning::EditTriplet>& triplets);

 private:
  std::map<std::uint64_t, std::vector<std::string>> responses_;
};

/// Wire format: {"prompt", "temperature", "top_p", "max_tokens", "seed"?} -> {"text"}.
class HttpModelBackend : public ModelBackend {
 public:
  explicit HttpModelBackend(HttpEndpoint endpoint) : endpoint_(std::move(endpoint)) {}
  std::string complete(const std::string& prompt, const SamplingConfig& sampling) override;

 private:
  HttpEndpoint endpoint_;
};

/// Throws InvalidInput on an empty sequence or instruction.
std::string build_locating_prompt(const std::string& orig_text, const std::string& instruction);
/// Also throws InconsistentMask unless masked_text is orig_text with whole
/// spans replaced by "<mask>".
std::string build_infilling_prompt(const std::string& orig_text, const std::string& instruction,
                                   const std::string& masked_text);

struct Candidate {
  std::string edit_text;  // completion as returned
  bool parse_ok = false;
  bool consistency_ok = false;
  std::string error;  // parser error code when !parse_ok
};

struct EditResult {
  masking::MaskedSequence masked;
  std::vector<Candidate> candidates;
  std::size_t k = 0;
};

inline constexpr int kDefaultRetries = 3;
inline constexpr std::size_t kDefaultCandidates = 5;

/// Call i (0-based) is sampled with seed sampling.seed.value_or(0) + i.
/// `retries` extra attempts follow an inconsistent answer before
/// LocatingFailed.
masking::MaskedSequence locate(const seq::CadModel& orig, const std::string& instruction,
                               ModelBackend& backend, const SamplingConfig& sampling = {},
                               int retries = kDefaultRetries);

Candidate infill(const seq::CadModel& orig, const std::string& instruction,
                 const masking::MaskedSequence& masked, ModelBackend& backend,
                 const SamplingConfig& sampling = {});

/// One locate call, then k infill samples with seeds base, base+1, ...
/// Throws InvalidInput when k == 0.
EditResult edit(const seq::CadModel& orig, const std::string& instruction, ModelBackend& backend,
                std::size_t k = kDefaultCandidates, const SamplingConfig& sampling = {},
                int retries = kDefaultRetries);

nlohmann::ordered_json to_json(const EditResult& r);
EditResult edit_result_from_json(const nlohmann::json& j);

/// A human choice among candidates, stored one JSON line per
/// (session, step, annotator).
struct SelectiveRecord {
  std::string session;
  std::size_t step = 0;
  std::string annotator;
  std::string instruction;
  std::string orig;
  std::string edit;
  std::string ts;  // ISO 8601, UTC
};

std::string iso8601_now();

class SelectiveDataset {
 public:
  explicit SelectiveDataset(std::string path) : path_(std::move(path)) {}

  /// Appends, or replaces the line with the same key. The file is
  /// rewritten through a temp file and rename.
  void record(const SelectiveRecord& r);
  std::vector<SelectiveRecord> load() const;
  const std::string& path() const { return path_; }

 private:
  std::string path_;
  mutable std::mutex mu_;
};

nlohmann::ordered_json to_json(const SelectiveRecord& r);

}  // namespace cadedit::pipeline
