#include "cadedit/error.hpp"
#include "cadedit/pipeline.hpp"
#include "prompt_templates.hpp"

namespace cadedit::pipeline {

namespace {

void require(const std::string& value, const char* what) {
  if (value.find_first_not_of(" \t\r\n") == std::string::npos) {
    throw Error(Errc::InvalidInput, std::string(what) + " must not be empty");
  }
}

}  // namespace

std::string build_locating_prompt(const std::string& orig_text, const std::string& instruction) {
  require(orig_text, "original sequence");
  require(instruction, "instruction");
  return fill_template(kPrompt_locate, {{"orig", orig_text}, {"instruction", instruction}});
}

std::string build_infilling_prompt(const std::string& orig_text, const std::string& instruction,
                                   const std::string& masked_text) {
  require(orig_text, "original sequence");
  require(instruction, "instruction");
  const masking::MaskedSequence masked(seq::tokenize(masked_text));
  if (!masking::verify_consistency(seq::tokenize(orig_text), masked)) {
    throw Error(Errc::InconsistentMask, "masked sequence does not match the original");
  }
  return fill_template(kPrompt_infill,
                       {{"orig", orig_text}, {"instruction", instruction}, {"masked", masked_text}});
}

}  // namespace cadedit::pipeline
