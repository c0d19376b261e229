#include <map>
#include <set>

#include "cadedit/captioning.hpp"
#include "cadedit/error.hpp"

namespace cadedit::captioning {

namespace {

class ValidityCache {
 public:
  explicit ValidityCache(std::size_t points) : points_(points) {}

  bool renders(const std::string& text) {
    const auto it = cache_.find(text);
    if (it != cache_.end()) return it->second;
    bool ok = true;
    try {
      geometry::sample_point_cloud(geometry::assemble(seq::parse(text)), points_, fnv1a(text));
    } catch (const Error&) {
      ok = false;
    }
    cache_.emplace(text, ok);
    return ok;
  }

 private:
  std::size_t points_;
  std::map<std::string, bool> cache_;
};

constexpr variation::PairStrategy kStrategies[] = {variation::PairStrategy::BaseToVariant,
                                                   variation::PairStrategy::VariantToBase,
                                                   variation::PairStrategy::VariantToVariant};

}  // namespace

std::vector<EditTriplet> synthesize(const SynthConfig& cfg, SynthStats* stats) {
  SynthStats local;
  SynthStats& st = stats ? *stats : local;
  st = {};
  Rng rng(cfg.seed);
  ValidityCache validity(cfg.cloud_points);
  std::set<std::pair<std::string, std::string>> seen;  // (orig, instruction)
  std::vector<EditTriplet> out;

  while (out.size() < cfg.count) {
    const seq::CadModel base = variation::generate_base_model(rng);
    ++st.bases;
    const std::uint64_t vseed = rng();
    const variation::PairStrategy strategy =
        kStrategies[rng() % (sizeof(kStrategies) / sizeof(kStrategies[0]))];
    const std::uint64_t pick_seed = rng();

    variation::VariantSet vset;
    std::vector<variation::ModelPair> pairs;
    try {
      vset = variation::make_variant_set(base, cfg.variants_per_base, vseed);
      pairs = variation::make_pairs(vset, strategy);
    } catch (const Error& e) {
      if (e.code() != Errc::NotEnoughVariants) throw;
      continue;
    }
    if (pairs.empty()) continue;
    const variation::ModelPair& pair = pairs[pick_seed % pairs.size()];

    TemplateCaptioner captioner(pair.record);
    Instruction ins = stepwise_caption(pair.orig, pair.edit, captioner, Modality::Sequence);
    EditTriplet t = make_triplet(std::move(ins), seq::serialize(pair.orig), seq::serialize(pair.edit),
                                 pair.record);
    if (!filter_triplet(t, cfg.filter).accept) {
      ++st.rejected_filter;
      continue;
    }
    if (!seen.emplace(t.orig_text, t.instruction.text).second) {
      ++st.rejected_duplicate;
      continue;
    }
    if (!validity.renders(t.orig_text) || !validity.renders(t.edit_text)) {
      ++st.rejected_invalid;
      continue;
    }
    out.push_back(std::move(t));
  }
  return assemble_dataset(std::move(out), cfg.dataset);
}

}  // namespace cadedit::captioning
