#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "cadedit/error.hpp"
#include "cadedit/service.hpp"

namespace cadedit::service {

namespace fs = std::filesystem;

nlohmann::ordered_json to_json(const EditSession& s) {
  nlohmann::ordered_json history = nlohmann::ordered_json::array();
  for (const HistoryEntry& h : s.history) {
    nlohmann::ordered_json cands = nlohmann::ordered_json::array();
    for (const pipeline::Candidate& c : h.candidates) {
      cands.push_back({{"edit", c.edit_text},
                       {"parse_ok", c.parse_ok},
                       {"consistency_ok", c.consistency_ok},
                       {"error", c.error}});
    }
    nlohmann::ordered_json e;
    e["instruction"] = h.instruction;
    e["orig"] = h.orig;
    e["masked"] = h.masked.text();
    e["candidates"] = std::move(cands);
    e["selection"] = h.selection ? nlohmann::ordered_json(*h.selection) : nlohmann::ordered_json(nullptr);
    e["annotator"] = h.annotator;
    history.push_back(std::move(e));
  }
  nlohmann::ordered_json j;
  j["id"] = s.id;
  j["original"] = s.original;
  j["current"] = s.current;
  j["created"] = s.created;
  j["updated"] = s.updated;
  j["history"] = std::move(history);
  return j;
}

EditSession session_from_json(const nlohmann::json& j) {
  try {
    EditSession s;
    s.id = j.at("id").get<std::string>();
    s.original = j.at("original").get<std::string>();
    s.current = j.at("current").get<std::string>();
    s.created = j.value("created", "");
    s.updated = j.value("updated", "");
    for (const auto& e : j.at("history")) {
      HistoryEntry h;
      h.instruction = e.at("instruction").get<std::string>();
      h.orig = e.at("orig").get<std::string>();
      h.masked = masking::MaskedSequence(seq::tokenize(e.at("masked").get<std::string>()));
      for (const auto& c : e.at("candidates")) {
        h.candidates.push_back({c.at("edit").get<std::string>(), c.value("parse_ok", false),
                                c.value("consistency_ok", false), c.value("error", "")});
      }
      if (e.contains("selection") && !e.at("selection").is_null()) h.selection = e.at("selection").get<std::size_t>();
      h.annotator = e.value("annotator", "");
      s.history.push_back(std::move(h));
    }
    return s;
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::FormatError, std::string("malformed session: ") + e.what());
  }
}

SessionStore::SessionStore(std::string dir) : dir_(std::move(dir)) {
  fs::create_directories(fs::path(dir_) / "sessions");
}

std::string SessionStore::path_for(const std::string& id) const {
  // Ids are generated as hex; anything else cannot name a stored session.
  if (id.empty() || id.find_first_not_of("0123456789abcdef") != std::string::npos) return {};
  return (fs::path(dir_) / "sessions" / (id + ".json")).string();
}

std::string SessionStore::new_id() {
  static thread_local std::mt19937_64 rng{std::random_device{}()};
  for (;;) {
    std::ostringstream out;
    out << std::hex << rng();
    const std::string id = out.str();
    if (!exists(id)) return id;
  }
}

bool SessionStore::exists(const std::string& id) const {
  const std::string p = path_for(id);
  return !p.empty() && fs::exists(p);
}

void SessionStore::save(const EditSession& s) {
  const std::string path = path_for(s.id);
  if (path.empty()) throw Error(Errc::InvalidInput, "bad session id " + s.id);
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(Errc::IoError, "cannot write " + tmp);
    out << to_json(s).dump(2) << '\n';
    if (!out.flush()) throw Error(Errc::IoError, "write failed for " + tmp);
  }
  fs::rename(tmp, path);
}

EditSession SessionStore::load(const std::string& id) const {
  const std::string path = path_for(id);
  std::ifstream in(path.empty() ? std::string() : path);
  if (path.empty() || !in) throw Error(Errc::UnknownSession, "unknown session " + id);
  try {
    return session_from_json(nlohmann::json::parse(in));
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::FormatError, path + ": " + e.what());
  }
}

std::mutex& SessionStore::lock_for(const std::string& id) {
  std::lock_guard<std::mutex> lock(registry_mu_);
  auto& slot = locks_[id];
  if (!slot) slot = std::make_unique<std::mutex>();
  return *slot;
}

}  // namespace cadedit::service
