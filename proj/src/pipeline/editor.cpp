#include "cadedit/error.hpp"
#include "cadedit/pipeline.hpp"

namespace cadedit::pipeline {

namespace {

SamplingConfig nth_call(const SamplingConfig& base, std::size_t i) {
  SamplingConfig s = base;
  s.seed = base.seed.value_or(0) + i;
  return s;
}

}  // namespace

masking::MaskedSequence locate(const seq::CadModel& orig, const std::string& instruction,
                               ModelBackend& backend, const SamplingConfig& sampling, int retries) {
  const std::string orig_text = seq::serialize(orig);
  const seq::TokenSequence orig_tokens = seq::tokenize(orig_text);
  const std::string prompt = build_locating_prompt(orig_text, instruction);
  for (int attempt = 0; attempt <= std::max(0, retries); ++attempt) {
    masking::MaskedSequence masked(seq::tokenize(backend.complete(prompt, nth_call(sampling, attempt))));
    if (masking::verify_consistency(orig_tokens, masked)) return masked;
  }
  throw Error(Errc::LocatingFailed,
              "no consistent masked sequence after " + std::to_string(std::max(0, retries) + 1) + " attempts");
}

Candidate infill(const seq::CadModel& orig, const std::string& instruction,
                 const masking::MaskedSequence& masked, ModelBackend& backend,
                 const SamplingConfig& sampling) {
  const std::string prompt = build_infilling_prompt(seq::serialize(orig), instruction, masked.text());
  Candidate c;
  c.edit_text = backend.complete(prompt, sampling);
  const seq::TokenSequence tokens = seq::tokenize(c.edit_text);
  try {
    seq::parse(tokens);
    c.parse_ok = true;
  } catch (const Error& e) {
    c.error = std::string(to_string(e.code()));
  }
  c.consistency_ok = masking::verify_consistency(tokens, masked);
  return c;
}

EditResult edit(const seq::CadModel& orig, const std::string& instruction, ModelBackend& backend,
                std::size_t k, const SamplingConfig& sampling, int retries) {
  if (k == 0) throw Error(Errc::InvalidInput, "k must be at least 1");
  EditResult r;
  r.k = k;
  r.masked = locate(orig, instruction, backend, sampling, retries);
  for (std::size_t i = 0; i < k; ++i) {
    r.candidates.push_back(infill(orig, instruction, r.masked, backend, nth_call(sampling, i)));
  }
  return r;
}

nlohmann::ordered_json to_json(const EditResult& r) {
  nlohmann::ordered_json cands = nlohmann::ordered_json::array();
  for (const Candidate& c : r.candidates) {
    nlohmann::ordered_json j;
    j["edit"] = c.edit_text;
    j["parse_ok"] = c.parse_ok;
    j["consistency_ok"] = c.consistency_ok;
    if (!c.error.empty()) j["error"] = c.error;
    cands.push_back(std::move(j));
  }
  nlohmann::ordered_json out;
  out["masked"] = r.masked.text();
  out["k"] = r.k;
  out["candidates"] = std::move(cands);
  return out;
}

EditResult edit_result_from_json(const nlohmann::json& j) {
  try {
    EditResult r;
    r.masked = masking::MaskedSequence(seq::tokenize(j.value("masked", "")));
    for (const auto& c : j.at("candidates")) {
      r.candidates.push_back({c.at("edit").get<std::string>(), c.value("parse_ok", false),
                              c.value("consistency_ok", false), c.value("error", "")});
    }
    r.k = j.value("k", r.candidates.size());
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::FormatError, std::string("malformed edit result: ") + e.what());
  }
}

}  // namespace cadedit::pipeline
