#include "cadedit/error.hpp"
#include "cadedit/pipeline.hpp"

namespace cadedit::pipeline {

void ScriptedBackend::add(const std::string& prompt, std::string response) {
  responses_[fnv1a(prompt)].push_back(std::move(response));
}

std::string ScriptedBackend::complete(const std::string& prompt, const SamplingConfig& sampling) {
  const auto it = responses_.find(fnv1a(prompt));
  if (it == responses_.end()) {
    throw Error(Errc::BackendUnavailable, "no scripted response for this prompt");
  }
  return it->second[sampling.seed.value_or(0) % it->second.size()];
}

ScriptedBackend ScriptedBackend::from_triplets(const std::vector<captioning::EditTriplet>& triplets) {
  ScriptedBackend backend;
  for (const captioning::EditTriplet& t : triplets) {
    const std::string mask = t.gt_mask.text();
    backend.add(build_locating_prompt(t.orig_text, t.instruction.text), mask);
    backend.add(build_infilling_prompt(t.orig_text, t.instruction.text, mask), t.edit_text);
  }
  return backend;
}

std::string HttpModelBackend::complete(const std::string& prompt, const SamplingConfig& sampling) {
  nlohmann::json body = {{"prompt", prompt},
                         {"temperature", sampling.temperature},
                         {"top_p", sampling.top_p},
                         {"max_tokens", sampling.max_tokens}};
  if (sampling.seed) body["seed"] = *sampling.seed;
  const nlohmann::json reply = post_json(endpoint_, body);
  if (!reply.contains("text") || !reply["text"].is_string()) {
    throw Error(Errc::FormatError, "backend reply has no \"text\" field");
  }
  return reply["text"].get<std::string>();
}

}  // namespace cadedit::pipeline
