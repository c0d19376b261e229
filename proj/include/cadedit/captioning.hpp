#pragma once

// Editing-instruction synthesis: stepwise captioning (describe both models,
// list their differences, compress into an instruction), filtering and
// triplet dataset assembly.

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cadedit/geometry.hpp"
#include "cadedit/http_client.hpp"
#include "cadedit/masking.hpp"
#include "cadedit/variation.hpp"

namespace cadedit::captioning {

enum class Modality { Visual, Sequence };
enum class InstructionSource { Template, Visual, Sequence };

/// JSONL "source" literal: template, lvlm-visual or llm-sequence.
std::string_view to_string(InstructionSource s);
std::optional<InstructionSource> instruction_source_from_string(std::string_view s);

struct CaptionSteps {
  std::string orig_description;
  std::string edit_description;
  std::string raw_diff;
  std::string compressed;
};

struct Instruction {
  std::string text;
  InstructionSource source = InstructionSource::Template;
  std::optional<CaptionSteps> steps;
};

class CaptionBackend {
 public:
  virtual ~CaptionBackend() = default;
  virtual std::string describe_image(const geometry::Image& image, const std::string& prompt) = 0;
  virtual std::string describe_sequence(const std::string& text, const std::string& prompt) = 0;
  virtual std::string complete(const std::string& prompt) = 0;
  virtual InstructionSource source(Modality modality) const = 0;
};

/// Deterministic captioner that reads the answer off a ground-truth
/// EditRecord. Step outputs are keyed on the prompt template in use.
class TemplateCaptioner : public CaptionBackend {
 public:
  explicit TemplateCaptioner(variation::EditRecord record) : record_(std::move(record)) {}

  std::string describe_image(const geometry::Image& image, const std::string& prompt) override;
  std::string describe_sequence(const std::string& text, const std::string& prompt) override;
  std::string complete(const std::string& prompt) override;
  InstructionSource source(Modality) const override { return InstructionSource::Template; }

 private:
  variation::EditRecord record_;
};

/// Template instruction for a record: one sentence per edit op, each naming
/// the primitive class of the part it touches.
std::string template_instruction(const variation::EditRecord& record);

/// Structural summary of a model, e.g. "2 parts: a block (new), a cylinder (cut)."
std::string describe_model(const seq::CadModel& model);

/// Talks to a hosted LVLM (images) and LLM (sequences, text) over HTTP.
/// Wire format: {"prompt", "image"?: base64 PNG, "temperature", "top_p",
/// "max_tokens"} -> {"text"}.
class HttpCaptionBackend : public CaptionBackend {
 public:
  HttpCaptionBackend(HttpEndpoint vision, HttpEndpoint language)
      : vision_(std::move(vision)), language_(std::move(language)) {}

  std::string describe_image(const geometry::Image& image, const std::string& prompt) override;
  std::string describe_sequence(const std::string& text, const std::string& prompt) override;
  std::string complete(const std::string& prompt) override;
  InstructionSource source(Modality modality) const override {
    return modality == Modality::Visual ? InstructionSource::Visual : InstructionSource::Sequence;
  }

 private:
  HttpEndpoint vision_;
  HttpEndpoint language_;
};

// Prompt builders for the three captioning steps.
std::string describe_prompt(Modality modality, const std::string& model_repr);
std::string diff_prompt(const std::string& orig_description, const std::string& edit_description);
std::string compress_prompt(const std::string& differences);

/// Four backend calls: describe original, describe edit, diff, compress.
/// Throws EmptyCompletion if any step comes back blank.
Instruction stepwise_caption(const seq::CadModel& orig, const seq::CadModel& edit,
                             CaptionBackend& backend, Modality modality);

enum class Split { Train, Val, Test };
std::string_view to_string(Split s);
std::optional<Split> split_from_string(std::string_view s);

struct EditTriplet {
  Instruction instruction;
  std::string orig_text;
  std::string edit_text;
  masking::MaskedSequence gt_mask;
  std::optional<variation::EditRecord> record;
  Split split = Split::Train;
};

/// Computes gt_mask from the two serializations.
EditTriplet make_triplet(Instruction instruction, std::string orig_text, std::string edit_text,
                         std::optional<variation::EditRecord> record = std::nullopt);

enum class FilterReason { Accepted, EmptyInstruction, TooManyInstructions, TooManyMasks, NoOp };
std::string_view to_string(FilterReason r);

struct FilterConfig {
  std::size_t max_sentences = 3;
  std::size_t max_masks = 5;
  std::vector<std::string> noop_phrases = {"no transformation is needed", "no changes are needed",
                                           "no change is needed", "the models are identical"};
};

struct FilterResult {
  bool accept = true;
  FilterReason reason = FilterReason::Accepted;
};

/// Sentences are the non-blank pieces between '.', '!' and '?'.
std::size_t sentence_count(std::string_view text);

FilterResult filter_triplet(const EditTriplet& t, const FilterConfig& cfg = {});

struct DatasetConfig {
  double train_fraction = 0.90;
  double val_fraction = 0.05;
};

/// Keeps input order and assigns splits by grouping on orig_text and ranking
/// groups by hash. Throws DuplicateTriplet on a repeated
/// (orig, instruction, edit).
std::vector<EditTriplet> assemble_dataset(std::vector<EditTriplet> triplets,
                                          const DatasetConfig& cfg = {});

/// Reconciles the visual and sequence instructions of one pair: the
/// sequence one is kept unless `keep_both` is set and they differ.
std::vector<Instruction> reconcile_modalities(const Instruction& visual, const Instruction& sequence,
                                              bool keep_both);

nlohmann::ordered_json to_json(const EditTriplet& t);
EditTriplet triplet_from_json(const nlohmann::json& j);
void write_jsonl(std::ostream& out, const std::vector<EditTriplet>& triplets);
std::vector<EditTriplet> read_jsonl(std::istream& in);
std::vector<EditTriplet> read_jsonl_file(const std::string& path);
void write_jsonl_file(const std::string& path, const std::vector<EditTriplet>& triplets);

struct SynthConfig {
  std::size_t count = 100;
  std::uint64_t seed = 1;
  std::size_t variants_per_base = 3;
  std::size_t cloud_points = geometry::kDefaultCloudSize;
  FilterConfig filter;
  DatasetConfig dataset;
};

struct SynthStats {
  std::size_t bases = 0;
  std::size_t rejected_filter = 0;
  std::size_t rejected_duplicate = 0;
  std::size_t rejected_invalid = 0;
};

/// Generates `count` filtered template-captioned triplets. Output depends
/// only on the config.
std::vector<EditTriplet> synthesize(const SynthConfig& cfg, SynthStats* stats = nullptr);

}  // namespace cadedit::captioning
