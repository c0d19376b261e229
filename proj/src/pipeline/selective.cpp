#include <chrono>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>

#include "cadedit/error.hpp"
#include "cadedit/pipeline.hpp"

namespace cadedit::pipeline {

std::string iso8601_now() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

nlohmann::ordered_json to_json(const SelectiveRecord& r) {
  nlohmann::ordered_json j;
  j["instruction"] = r.instruction;
  j["orig"] = r.orig;
  j["edit"] = r.edit;
  j["mask"] = masking::make_gt_mask(seq::tokenize(r.orig), seq::tokenize(r.edit)).text();
  j["record"] = nullptr;
  j["split"] = "train";
  j["source"] = "selective";
  j["annotator"] = r.annotator;
  j["ts"] = r.ts;
  j["session"] = r.session;
  j["step"] = r.step;
  return j;
}

namespace {

SelectiveRecord from_json(const nlohmann::json& j) {
  SelectiveRecord r;
  r.session = j.at("session").get<std::string>();
  r.step = j.at("step").get<std::size_t>();
  r.annotator = j.at("annotator").get<std::string>();
  r.instruction = j.at("instruction").get<std::string>();
  r.orig = j.at("orig").get<std::string>();
  r.edit = j.at("edit").get<std::string>();
  r.ts = j.value("ts", "");
  return r;
}

std::vector<SelectiveRecord> read_all(const std::string& path) {
  std::vector<SelectiveRecord> out;
  std::ifstream in(path);
  if (!in) return out;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    try {
      out.push_back(from_json(nlohmann::json::parse(line)));
    } catch (const nlohmann::json::exception& e) {
      throw Error(Errc::FormatError, path + ": " + e.what());
    }
  }
  return out;
}

}  // namespace

void SelectiveDataset::record(const SelectiveRecord& r) {
  std::lock_guard<std::mutex> lock(mu_);
  std::vector<SelectiveRecord> rows = read_all(path_);
  bool replaced = false;
  for (SelectiveRecord& row : rows) {
    if (row.session == r.session && row.step == r.step && row.annotator == r.annotator) {
      row = r;
      replaced = true;
    }
  }
  if (!replaced) rows.push_back(r);

  const std::filesystem::path target(path_);
  if (target.has_parent_path()) std::filesystem::create_directories(target.parent_path());
  const std::string tmp = path_ + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(Errc::IoError, "cannot write " + tmp);
    for (const SelectiveRecord& row : rows) out << to_json(row).dump() << '\n';
    if (!out.flush()) throw Error(Errc::IoError, "write failed for " + tmp);
  }
  std::filesystem::rename(tmp, target);
}

std::vector<SelectiveRecord> SelectiveDataset::load() const {
  std::lock_guard<std::mutex> lock(mu_);
  return read_all(path_);
}

}  // namespace cadedit::pipeline
