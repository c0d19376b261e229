#pragma once

// Editing sessions persisted as one JSON file each, the operations the HTTP
// API exposes, and the key=value service configuration.

#include <iosfwd>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "cadedit/error.hpp"
#include "cadedit/metrics.hpp"
#include "cadedit/pipeline.hpp"

namespace httplib {
class Server;
}

namespace cadedit::service {

/// Keys, one per line as `key = value`; '#' starts a comment:
///   data_dir, selective_path, backend (scripted|http), backend_url,
///   auth_token, scripted_dataset, host, port, k, retries, temperature,
///   top_p, max_tokens, seed
/// CADEDIT_BACKEND_URL and CADEDIT_AUTH_TOKEN override the file.
struct ServiceConfig {
  std::string data_dir = "cadedit-data";
  std::string selective_path;  // empty: <data_dir>/selective.jsonl
  std::string backend = "scripted";
  std::string backend_url;
  std::string auth_token;
  std::string scripted_dataset;  // triplets that program the scripted backend
  std::string host = "127.0.0.1";
  int port = 8080;
  std::size_t k = pipeline::kDefaultCandidates;
  int retries = pipeline::kDefaultRetries;
  pipeline::SamplingConfig sampling;

  std::string selective_file() const;
  bool operator==(const ServiceConfig& o) const;
};

ServiceConfig parse_config(std::istream& in);
ServiceConfig load_config(const std::string& path);
std::string to_config_text(const ServiceConfig& cfg);
void apply_env_overrides(ServiceConfig& cfg);

std::unique_ptr<pipeline::ModelBackend> make_backend(const ServiceConfig& cfg);

struct HistoryEntry {
  std::string instruction;
  std::string orig;
  masking::MaskedSequence masked;
  std::vector<pipeline::Candidate> candidates;
  std::optional<std::size_t> selection;
  std::string annotator;
};

struct EditSession {
  std::string id;
  std::string original;
  std::string current;
  std::vector<HistoryEntry> history;
  std::string created;
  std::string updated;
};

nlohmann::ordered_json to_json(const EditSession& s);
EditSession session_from_json(const nlohmann::json& j);

/// One <id>.json per session under `dir`, written through temp file and
/// rename so a crash never leaves a partial file behind.
class SessionStore {
 public:
  explicit SessionStore(std::string dir);

  std::string new_id();
  void save(const EditSession& s);
  /// Throws UnknownSession.
  EditSession load(const std::string& id) const;
  bool exists(const std::string& id) const;
  /// Serializes all operations on one session.
  std::mutex& lock_for(const std::string& id);

 private:
  std::string path_for(const std::string& id) const;

  std::string dir_;
  std::mutex registry_mu_;
  std::map<std::string, std::unique_ptr<std::mutex>> locks_;
};

class EditService {
 public:
  EditService(ServiceConfig cfg, std::unique_ptr<pipeline::ModelBackend> backend);

  /// Throws InvalidModel (with the parser's token index) for bad input.
  EditSession create_session(const std::string& orig_text);
  EditSession get_session(const std::string& id);
  /// Runs the pipeline on the session's current model and appends a history
  /// entry. k defaults to the configured count.
  pipeline::EditResult submit_instruction(const std::string& id, const std::string& instruction,
                                          std::optional<std::size_t> k = std::nullopt);
  /// Makes the chosen candidate of the latest entry current and records it
  /// in the selective dataset.
  EditSession apply_selection(const std::string& id, std::size_t index, const std::string& annotator);

  std::string candidate_obj(const std::string& id, std::size_t index);
  std::vector<std::uint8_t> candidate_png(const std::string& id, std::size_t index);

  const ServiceConfig& config() const { return cfg_; }
  pipeline::SelectiveDataset& selective() { return selective_; }

 private:
  const pipeline::Candidate& latest_candidate(const EditSession& s, std::size_t index) const;

  ServiceConfig cfg_;
  std::unique_ptr<pipeline::ModelBackend> backend_;
  std::mutex backend_mu_;
  SessionStore store_;
  pipeline::SelectiveDataset selective_;
};

/// HTTP status for an error code.
int http_status(Errc code);
nlohmann::ordered_json error_json(const Error& e);

/// Routes:
///   POST /sessions {model}                      GET /sessions/{id}
///   POST /sessions/{id}/instructions {instruction, k?}
///   POST /sessions/{id}/selection {index, annotator}
///   GET  /sessions/{id}/candidates/{i}/mesh     GET /sessions/{id}/candidates/{i}/preview
///   POST /eval {testset, results}  (paths, or inline arrays of JSON objects)
void install_routes(httplib::Server& server, EditService& service);

}  // namespace cadedit::service
