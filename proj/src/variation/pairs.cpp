#include <algorithm>

#include "cadedit/error.hpp"
#include "cadedit/variation.hpp"

namespace cadedit::variation {

std::string_view to_string(PairStrategy s) {
  switch (s) {
    case PairStrategy::BaseToVariant: return "base_to_variant";
    case PairStrategy::VariantToBase: return "variant_to_base";
    case PairStrategy::VariantToVariant: return "variant_to_variant";
  }
  return "base_to_variant";
}

VariantSet make_variant_set(const seq::CadModel& base, std::size_t k, std::uint64_t seed,
                            const PerturbConfig& config) {
  VariantSet out;
  out.base = base;
  Rng rng(seed);
  const std::size_t max_attempts = 8 * k + 8;
  for (std::size_t attempt = 0; attempt < max_attempts && out.variants.size() < k; ++attempt) {
    const std::uint64_t sub = rng();
    std::pair<seq::CadModel, EditRecord> v;
    try {
      v = perturb(base, sub, std::nullopt, config);
    } catch (const Error& e) {
      if (e.code() == Errc::NoApplicableEdit) break;
      throw;
    }
    if (std::find(out.variants.begin(), out.variants.end(), v.first) != out.variants.end()) continue;
    out.variants.push_back(std::move(v.first));
    out.records.push_back(std::move(v.second));
  }
  if (out.variants.size() < k) {
    throw Error(Errc::NotEnoughVariants, "found " + std::to_string(out.variants.size()) +
                                             " distinct variants, wanted " + std::to_string(k));
  }
  return out;
}

std::vector<ModelPair> make_pairs(const VariantSet& vset, PairStrategy strategy) {
  const std::size_t k = vset.variants.size();
  const std::size_t need = strategy == PairStrategy::VariantToVariant ? 2 : 1;
  if (k < need) {
    throw Error(Errc::NotEnoughVariants, std::string(to_string(strategy)) + " needs at least " +
                                             std::to_string(need) + " variants");
  }
  std::vector<ModelPair> out;
  switch (strategy) {
    case PairStrategy::BaseToVariant:
      for (std::size_t i = 0; i < k; ++i) out.push_back({vset.base, vset.variants[i], vset.records[i]});
      break;
    case PairStrategy::VariantToBase:
      for (std::size_t i = 0; i < k; ++i) {
        out.push_back({vset.variants[i], vset.base, invert(vset.records[i])});
      }
      break;
    case PairStrategy::VariantToVariant:
      for (std::size_t a = 0; a < k; ++a) {
        for (std::size_t b = 0; b < k; ++b) {
          if (a == b || vset.variants[a] == vset.variants[b]) continue;
          out.push_back({vset.variants[a], vset.variants[b],
                         compose(invert(vset.records[a]), vset.records[b])});
        }
      }
      break;
  }
  return out;
}

}  // namespace cadedit::variation
