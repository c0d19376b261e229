#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <tuple>

#include "cadedit/captioning.hpp"
#include "cadedit/error.hpp"

namespace cadedit::captioning {

using nlohmann::json;
using nlohmann::ordered_json;

std::string_view to_string(Split s) {
  switch (s) {
    case Split::Train: return "train";
    case Split::Val: return "val";
    case Split::Test: return "test";
  }
  return "train";
}

std::optional<Split> split_from_string(std::string_view s) {
  for (Split v : {Split::Train, Split::Val, Split::Test}) {
    if (to_string(v) == s) return v;
  }
  return std::nullopt;
}

std::string_view to_string(FilterReason r) {
  switch (r) {
    case FilterReason::Accepted: return "Accepted";
    case FilterReason::EmptyInstruction: return "EmptyInstruction";
    case FilterReason::TooManyInstructions: return "TooManyInstructions";
    case FilterReason::TooManyMasks: return "TooManyMasks";
    case FilterReason::NoOp: return "NoOp";
  }
  return "Accepted";
}

EditTriplet make_triplet(Instruction instruction, std::string orig_text, std::string edit_text,
                         std::optional<variation::EditRecord> record) {
  EditTriplet t;
  t.gt_mask = masking::make_gt_mask(seq::tokenize(orig_text), seq::tokenize(edit_text));
  t.instruction = std::move(instruction);
  t.orig_text = std::move(orig_text);
  t.edit_text = std::move(edit_text);
  t.record = std::move(record);
  return t;
}

std::size_t sentence_count(std::string_view text) {
  std::size_t count = 0;
  bool content = false;
  for (char c : text) {
    if (c == '.' || c == '!' || c == '?') {
      if (content) ++count;
      content = false;
    } else if (!std::isspace(static_cast<unsigned char>(c))) {
      content = true;
    }
  }
  return count + (content ? 1 : 0);
}

namespace {

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

}  // namespace

FilterResult filter_triplet(const EditTriplet& t, const FilterConfig& cfg) {
  const std::size_t sentences = sentence_count(t.instruction.text);
  if (sentences == 0) return {false, FilterReason::EmptyInstruction};
  const std::string text = lower(t.instruction.text);
  for (const std::string& phrase : cfg.noop_phrases) {
    if (text.find(lower(phrase)) != std::string::npos) return {false, FilterReason::NoOp};
  }
  if (sentences > cfg.max_sentences) return {false, FilterReason::TooManyInstructions};
  if (t.gt_mask.mask_count() > cfg.max_masks) return {false, FilterReason::TooManyMasks};
  return {};
}

std::vector<EditTriplet> assemble_dataset(std::vector<EditTriplet> triplets, const DatasetConfig& cfg) {
  std::set<std::tuple<std::string, std::string, std::string>> seen;
  std::map<std::string, std::vector<std::size_t>> groups;
  for (std::size_t i = 0; i < triplets.size(); ++i) {
    const EditTriplet& t = triplets[i];
    if (!seen.emplace(t.orig_text, t.instruction.text, t.edit_text).second) {
      throw Error(Errc::DuplicateTriplet, "duplicate triplet at index " + std::to_string(i));
    }
    groups[t.orig_text].push_back(i);
  }

  std::vector<const std::pair<const std::string, std::vector<std::size_t>>*> order;
  for (const auto& g : groups) order.push_back(&g);
  std::sort(order.begin(), order.end(), [](const auto* a, const auto* b) {
    const auto ha = fnv1a(a->first), hb = fnv1a(b->first);
    return ha != hb ? ha < hb : a->first < b->first;
  });

  const double n = static_cast<double>(triplets.size());
  const auto train_target = static_cast<std::size_t>(std::lround(cfg.train_fraction * n));
  const auto val_target = static_cast<std::size_t>(std::lround(cfg.val_fraction * n));
  std::size_t train = 0, val = 0;
  for (const auto* g : order) {
    Split s = Split::Test;
    if (train < train_target) {
      s = Split::Train;
      train += g->second.size();
    } else if (val < val_target) {
      s = Split::Val;
      val += g->second.size();
    }
    for (std::size_t i : g->second) triplets[i].split = s;
  }
  return triplets;
}

std::vector<Instruction> reconcile_modalities(const Instruction& visual, const Instruction& sequence,
                                              bool keep_both) {
  if (keep_both && visual.text != sequence.text) return {visual, sequence};
  return {sequence};
}

ordered_json to_json(const EditTriplet& t) {
  ordered_json j;
  j["instruction"] = t.instruction.text;
  j["orig"] = t.orig_text;
  j["edit"] = t.edit_text;
  j["mask"] = t.gt_mask.text();
  j["record"] = t.record ? ordered_json(variation::to_json(*t.record)) : ordered_json(nullptr);
  j["split"] = to_string(t.split);
  j["source"] = to_string(t.instruction.source);
  return j;
}

EditTriplet triplet_from_json(const json& j) {
  try {
    Instruction ins;
    ins.text = j.at("instruction").get<std::string>();
    const auto source = instruction_source_from_string(j.value("source", "template"));
    if (!source) throw Error(Errc::FormatError, "unknown source " + j.at("source").dump());
    ins.source = *source;
    std::optional<variation::EditRecord> record;
    if (j.contains("record") && !j.at("record").is_null()) record = variation::record_from_json(j.at("record"));
    EditTriplet t = make_triplet(std::move(ins), j.at("orig").get<std::string>(),
                                 j.at("edit").get<std::string>(), std::move(record));
    if (j.contains("mask") && j.at("mask").get<std::string>() != t.gt_mask.text()) {
      throw Error(Errc::FormatError, "stored mask differs from the recomputed ground-truth mask");
    }
    const auto split = split_from_string(j.value("split", "train"));
    if (!split) throw Error(Errc::FormatError, "unknown split " + j.at("split").dump());
    t.split = *split;
    return t;
  } catch (const json::exception& e) {
    throw Error(Errc::FormatError, std::string("malformed triplet: ") + e.what());
  }
}

void write_jsonl(std::ostream& out, const std::vector<EditTriplet>& triplets) {
  for (const EditTriplet& t : triplets) out << to_json(t).dump() << '\n';
}

std::vector<EditTriplet> read_jsonl(std::istream& in) {
  std::vector<EditTriplet> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      out.push_back(triplet_from_json(json::parse(line)));
    } catch (const json::exception& e) {
      throw Error(Errc::FormatError, "line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  return out;
}

std::vector<EditTriplet> read_jsonl_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::IoError, "cannot open " + path);
  return read_jsonl(in);
}

void write_jsonl_file(const std::string& path, const std::vector<EditTriplet>& triplets) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(Errc::IoError, "cannot write " + path);
  write_jsonl(out, triplets);
  if (!out.flush()) throw Error(Errc::IoError, "write failed for " + path);
}

}  // namespace cadedit::captioning
