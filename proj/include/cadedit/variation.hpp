#pragma once

// Rule-based design variation: structural edits of a CadModel with a
// machine-readable record that reproduces the edit exactly.

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

#include "cadedit/cad_seq.hpp"
#include "cadedit/random.hpp"
#include "json.hpp"

namespace cadedit::variation {

enum class EditKind {
  AddSe,
  DeleteSe,
  ReplacePrimitive,
  ScaleLoop,
  TranslateSketch,
  ChangeExtrudeDist,
  ChangeBoolOp,
};

inline constexpr EditKind kAllEditKinds[] = {
    EditKind::AddSe,       EditKind::DeleteSe,          EditKind::ReplacePrimitive,
    EditKind::ScaleLoop,   EditKind::TranslateSketch,   EditKind::ChangeExtrudeDist,
    EditKind::ChangeBoolOp};

std::string_view to_string(EditKind kind);
std::optional<EditKind> edit_kind_from_string(std::string_view s);

/// One primitive edit. `params` holds old/new values plus the primitive
/// class of the affected SE ("primitive", or "old_primitive"/"new_primitive"
/// for replacements).
struct EditOp {
  EditKind kind = EditKind::AddSe;
  std::string target;  // "se[1]", "se[0].sketch.face[0].loop[1]", "se[0].extrusion.dist_pos", ...
  nlohmann::json params;

  bool operator==(const EditOp&) const = default;
};

/// A single edit has one op; composed (variant-to-variant) records have more.
struct EditRecord {
  std::vector<EditOp> ops;

  bool operator==(const EditRecord&) const = default;
};

nlohmann::json to_json(const EditRecord& record);
EditRecord record_from_json(const nlohmann::json& j);

/// Throws EditMismatch if the record's old values do not match the model.
seq::CadModel apply_edit(const seq::CadModel& model, const EditRecord& record);
EditRecord invert(const EditRecord& record);
/// `first` followed by `second`, with consecutive edits of one target merged
/// and no-op edits dropped.
EditRecord compose(const EditRecord& first, const EditRecord& second);

// Record builders for explicit edits.
EditRecord change_extrude_dist(const seq::CadModel& model, std::size_t se, seq::Quant new_value);
EditRecord delete_se(const seq::CadModel& model, std::size_t se);

/// Parameter jitters in quantized units.
inline constexpr int kJitters[] = {-64, -32, -16, 16, 32, 64};

struct PerturbConfig {
  seq::ValidationConfig validation = seq::ValidationConfig::dataset();
  int attempts_per_kind = 12;
};

/// Throws NoApplicableEdit when no kind yields a valid, changed model.
std::pair<seq::CadModel, EditRecord> perturb(const seq::CadModel& model, std::uint64_t seed,
                                             std::optional<EditKind> kind = std::nullopt,
                                             const PerturbConfig& config = {});

struct VariantSet {
  seq::CadModel base;
  std::vector<seq::CadModel> variants;
  std::vector<EditRecord> records;  // records[k] turns base into variants[k]
};

/// K distinct variants of `base`, each from an independent perturbation.
VariantSet make_variant_set(const seq::CadModel& base, std::size_t k, std::uint64_t seed,
                            const PerturbConfig& config = {});

enum class PairStrategy { BaseToVariant, VariantToBase, VariantToVariant };

std::string_view to_string(PairStrategy s);

struct ModelPair {
  seq::CadModel orig;
  seq::CadModel edit;
  EditRecord record;
};

/// Throws NotEnoughVariants (K < 1, or K < 2 for variant-to-variant).
std::vector<ModelPair> make_pairs(const VariantSet& vset, PairStrategy strategy);

// Shapes.

/// Coarse shape name of an SE's sketch: cylinder, ring, block, plate, slot,
/// wedge, prism or profile.
std::string primitive_class(const seq::SePair& se);

seq::Loop rect_loop(seq::Quant x0, seq::Quant y0, seq::Quant x1, seq::Quant y1);
seq::Loop circle_loop(seq::Quant cx, seq::Quant cy, seq::Quant r);

/// Random valid 1..3 SE model built from common part features.
seq::CadModel generate_base_model(Rng& rng);

/// A secondary feature (boss or hole) placed on top of `model`'s first SE.
seq::SePair random_feature(const seq::CadModel& model, Rng& rng);

}  // namespace cadedit::variation
