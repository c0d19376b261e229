#include <algorithm>
#include <cctype>
#include <sstream>

#include "cadedit/captioning.hpp"
#include "cadedit/error.hpp"
#include "prompt_templates.hpp"

namespace cadedit::captioning {

using variation::EditKind;
using variation::EditOp;

std::string_view to_string(InstructionSource s) {
  switch (s) {
    case InstructionSource::Template: return "template";
    case InstructionSource::Visual: return "lvlm-visual";
    case InstructionSource::Sequence: return "llm-sequence";
  }
  return "template";
}

std::optional<InstructionSource> instruction_source_from_string(std::string_view s) {
  for (auto v : {InstructionSource::Template, InstructionSource::Visual, InstructionSource::Sequence}) {
    if (to_string(v) == s) return v;
  }
  return std::nullopt;
}

namespace {

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(first, last - first + 1));
}

int loop_size(const seq::Loop& loop) {
  int x0 = 1 << 20, y0 = 1 << 20, x1 = -(1 << 20), y1 = -(1 << 20);
  auto add = [&](int x, int y) {
    x0 = std::min(x0, x);
    y0 = std::min(y0, y);
    x1 = std::max(x1, x);
    y1 = std::max(y1, y);
  };
  for (const seq::Curve& c : loop.curves) {
    if (const auto* l = std::get_if<seq::Line>(&c)) add(l->x, l->y);
    if (const auto* a = std::get_if<seq::Arc>(&c)) {
      add(a->x, a->y);
      add(a->mx, a->my);
    }
    if (const auto* ci = std::get_if<seq::Circle>(&c)) {
      add(ci->cx - ci->r, ci->cy - ci->r);
      add(ci->cx + ci->r, ci->cy + ci->r);
    }
  }
  return std::max(x1 - x0, y1 - y0);
}

std::size_t last_index(const std::string& target) {
  const auto open = target.rfind('[');
  return open == std::string::npos ? 0 : std::stoul(target.substr(open + 1));
}

std::string sentence(const EditOp& op) {
  const auto& p = op.params;
  const std::string cls = p.value("primitive", "part");
  switch (op.kind) {
    case EditKind::AddSe: {
      const seq::SePair se = seq::parse_se(p.at("new").get<std::string>());
      if (se.extrusion.op == seq::BoolOp::Cut) return "Cut a " + cls + " hole into the model.";
      if (se.extrusion.op == seq::BoolOp::Intersect) return "Intersect the model with a " + cls + ".";
      return "Add a " + cls + " to the model.";
    }
    case EditKind::DeleteSe: {
      const seq::SePair se = seq::parse_se(p.at("old").get<std::string>());
      if (se.extrusion.op == seq::BoolOp::Cut) return "Fill the " + cls + " hole.";
      if (se.extrusion.op == seq::BoolOp::Intersect) return "Remove the " + cls + " intersection.";
      return "Remove the " + cls + ".";
    }
    case EditKind::ReplacePrimitive:
      return "Replace the " + p.value("old_primitive", "part") + " with a " +
             p.value("new_primitive", "part") + ".";
    case EditKind::ScaleLoop: {
      const int before = loop_size(seq::parse_loop(p.at("old").get<std::string>()));
      const int after = loop_size(seq::parse_loop(p.at("new").get<std::string>()));
      const std::string dir = after > before ? "larger" : "smaller";
      if (last_index(op.target) > 0) return "Make the hole in the " + cls + " " + dir + ".";
      return "Make the " + cls + " " + dir + ".";
    }
    case EditKind::TranslateSketch: {
      const auto old = p.at("old").get<std::vector<int>>();
      const auto nu = p.at("new").get<std::vector<int>>();
      static const char* kPositive[] = {"right", "back", "up"};
      static const char* kNegative[] = {"left", "forward", "down"};
      for (std::size_t a = 0; a < 3 && a < old.size() && a < nu.size(); ++a) {
        if (nu[a] != old[a]) {
          return "Move the " + cls + " " + (nu[a] > old[a] ? kPositive[a] : kNegative[a]) + ".";
        }
      }
      return "Move the " + cls + ".";
    }
    case EditKind::ChangeExtrudeDist: {
      const int before = std::abs(p.at("old").get<int>() - 128);
      const int after = std::abs(p.at("new").get<int>() - 128);
      if (after > before) return "Increase the extrusion height of the " + cls + ".";
      if (after < before) return "Decrease the extrusion height of the " + cls + ".";
      return "Flip the extrusion direction of the " + cls + ".";
    }
    case EditKind::ChangeBoolOp: {
      const std::string nu = p.at("new").get<std::string>();
      if (nu == "cut") return "Cut the " + cls + " out of the model instead.";
      if (nu == "intersect") return "Keep only the overlap between the model and the " + cls + ".";
      return "Join the " + cls + " to the model instead.";
    }
  }
  return "Edit the " + cls + ".";
}

std::string diff_line(const EditOp& op) {
  const auto& p = op.params;
  std::string cls = p.value("primitive", "");
  if (cls.empty()) cls = p.value("old_primitive", "part") + " -> " + p.value("new_primitive", "part");
  return "- " + std::string(variation::to_string(op.kind)) + " on " + op.target + " (" + cls + ")";
}

bool starts_with(std::string_view s, std::string_view prefix) {
  return s.substr(0, prefix.size()) == prefix;
}

std::string checked(std::string completion, const char* step) {
  std::string t = trim(completion);
  if (t.empty()) throw Error(Errc::EmptyCompletion, std::string("empty completion at step: ") + step);
  return t;
}

}  // namespace

std::string template_instruction(const variation::EditRecord& record) {
  std::string out;
  for (const EditOp& op : record.ops) {
    if (!out.empty()) out += ' ';
    out += sentence(op);
  }
  return out;
}

std::string describe_model(const seq::CadModel& model) {
  std::ostringstream out;
  out << model.ses.size() << (model.ses.size() == 1 ? " part: " : " parts: ");
  for (std::size_t i = 0; i < model.ses.size(); ++i) {
    if (i) out << ", ";
    out << "a " << variation::primitive_class(model.ses[i]) << " ("
        << seq::to_string(model.ses[i].extrusion.op) << ")";
  }
  out << '.';
  return out.str();
}

std::string TemplateCaptioner::describe_image(const geometry::Image& image, const std::string&) {
  return "A rendered CAD model covering " + std::to_string(image.count_not({255, 255, 255})) + " of " +
         std::to_string(image.width * image.height) + " pixels.";
}

std::string TemplateCaptioner::describe_sequence(const std::string& text, const std::string&) {
  return describe_model(seq::parse(text));
}

std::string TemplateCaptioner::complete(const std::string& prompt) {
  if (starts_with(prompt, "Step 2")) {
    std::string out;
    for (const EditOp& op : record_.ops) out += diff_line(op) + "\n";
    return out;
  }
  return template_instruction(record_);
}

std::string HttpCaptionBackend::describe_image(const geometry::Image& image, const std::string& prompt) {
  const auto reply = post_json(vision_, {{"prompt", prompt},
                                         {"image", base64_encode(geometry::encode_png(image))},
                                         {"max_tokens", 1024}});
  return reply.value("text", "");
}

std::string HttpCaptionBackend::describe_sequence(const std::string&, const std::string& prompt) {
  return complete(prompt);
}

std::string HttpCaptionBackend::complete(const std::string& prompt) {
  const auto reply = post_json(language_, {{"prompt", prompt}, {"max_tokens", 1024}});
  return reply.value("text", "");
}

std::string describe_prompt(Modality modality, const std::string& model_repr) {
  return fill_template(kPrompt_caption_describe,
                       {{"modality", modality == Modality::Visual
                                         ? "a rendered image (attached)"
                                         : "a sketch-and-extrude operation sequence"},
                        {"model", modality == Modality::Visual ? "[image]" : model_repr}});
}

std::string diff_prompt(const std::string& orig_description, const std::string& edit_description) {
  return fill_template(kPrompt_caption_diff,
                       {{"orig_description", orig_description}, {"edit_description", edit_description}});
}

std::string compress_prompt(const std::string& differences) {
  return fill_template(kPrompt_caption_compress, {{"differences", differences}});
}

Instruction stepwise_caption(const seq::CadModel& orig, const seq::CadModel& edit,
                             CaptionBackend& backend, Modality modality) {
  CaptionSteps steps;
  auto describe = [&](const seq::CadModel& m) {
    if (modality == Modality::Visual) {
      const geometry::Image img = geometry::render_preview(geometry::mesh(geometry::assemble(m)));
      return backend.describe_image(img, describe_prompt(modality, ""));
    }
    const std::string text = seq::serialize(m);
    return backend.describe_sequence(text, describe_prompt(modality, text));
  };
  steps.orig_description = checked(describe(orig), "describe original");
  steps.edit_description = checked(describe(edit), "describe edit");
  steps.raw_diff =
      checked(backend.complete(diff_prompt(steps.orig_description, steps.edit_description)), "diff");
  steps.compressed = checked(backend.complete(compress_prompt(steps.raw_diff)), "compress");

  Instruction out;
  out.text = steps.compressed;
  out.source = backend.source(modality);
  out.steps = std::move(steps);
  return out;
}

}  // namespace cadedit::captioning
