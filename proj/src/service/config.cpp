#include <cstdlib>
#include <fstream>
#include <sstream>

#include "cadedit/captioning.hpp"
#include "cadedit/error.hpp"
#include "cadedit/service.hpp"

namespace cadedit::service {

std::string ServiceConfig::selective_file() const {
  return selective_path.empty() ? data_dir + "/selective.jsonl" : selective_path;
}

bool ServiceConfig::operator==(const ServiceConfig& o) const {
  return to_config_text(*this) == to_config_text(o);
}

namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  return s.substr(first, s.find_last_not_of(" \t\r") - first + 1);
}

template <typename T>
T number(const std::string& key, const std::string& value, std::size_t line) {
  std::istringstream in(value);
  T v{};
  if (!(in >> v) || !(in >> std::ws).eof()) {
    throw Error(Errc::FormatError, "config line " + std::to_string(line) + ": bad value for " + key);
  }
  return v;
}

}  // namespace

ServiceConfig parse_config(std::istream& in) {
  ServiceConfig cfg;
  std::string raw;
  std::size_t lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    const std::string line = trim(raw.substr(0, raw.find('#')));
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw Error(Errc::FormatError, "config line " + std::to_string(lineno) + ": expected key = value");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key == "data_dir") cfg.data_dir = value;
    else if (key == "selective_path") cfg.selective_path = value;
    else if (key == "backend") cfg.backend = value;
    else if (key == "backend_url") cfg.backend_url = value;
    else if (key == "auth_token") cfg.auth_token = value;
    else if (key == "scripted_dataset") cfg.scripted_dataset = value;
    else if (key == "host") cfg.host = value;
    else if (key == "port") cfg.port = number<int>(key, value, lineno);
    else if (key == "k") cfg.k = number<std::size_t>(key, value, lineno);
    else if (key == "retries") cfg.retries = number<int>(key, value, lineno);
    else if (key == "temperature") cfg.sampling.temperature = number<double>(key, value, lineno);
    else if (key == "top_p") cfg.sampling.top_p = number<double>(key, value, lineno);
    else if (key == "max_tokens") cfg.sampling.max_tokens = number<int>(key, value, lineno);
    else if (key == "seed") cfg.sampling.seed = number<std::uint64_t>(key, value, lineno);
    else throw Error(Errc::FormatError, "config line " + std::to_string(lineno) + ": unknown key " + key);
  }
  if (cfg.backend != "scripted" && cfg.backend != "http") {
    throw Error(Errc::FormatError, "backend must be scripted or http, got " + cfg.backend);
  }
  return cfg;
}

ServiceConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::IoError, "cannot open config " + path);
  ServiceConfig cfg = parse_config(in);
  apply_env_overrides(cfg);
  return cfg;
}

std::string to_config_text(const ServiceConfig& cfg) {
  std::ostringstream out;
  out.precision(17);
  out << "data_dir = " << cfg.data_dir << '\n';
  if (!cfg.selective_path.empty()) out << "selective_path = " << cfg.selective_path << '\n';
  out << "backend = " << cfg.backend << '\n';
  if (!cfg.backend_url.empty()) out << "backend_url = " << cfg.backend_url << '\n';
  if (!cfg.auth_token.empty()) out << "auth_token = " << cfg.auth_token << '\n';
  if (!cfg.scripted_dataset.empty()) out << "scripted_dataset = " << cfg.scripted_dataset << '\n';
  out << "host = " << cfg.host << '\n';
  out << "port = " << cfg.port << '\n';
  out << "k = " << cfg.k << '\n';
  out << "retries = " << cfg.retries << '\n';
  out << "temperature = " << cfg.sampling.temperature << '\n';
  out << "top_p = " << cfg.sampling.top_p << '\n';
  out << "max_tokens = " << cfg.sampling.max_tokens << '\n';
  if (cfg.sampling.seed) out << "seed = " << *cfg.sampling.seed << '\n';
  return out.str();
}

void apply_env_overrides(ServiceConfig& cfg) {
  if (const char* url = std::getenv("CADEDIT_BACKEND_URL"); url && *url) cfg.backend_url = url;
  if (const char* token = std::getenv("CADEDIT_AUTH_TOKEN"); token && *token) cfg.auth_token = token;
}

std::unique_ptr<pipeline::ModelBackend> make_backend(const ServiceConfig& cfg) {
  if (cfg.backend == "http") {
    HttpEndpoint ep;
    ep.url = cfg.backend_url;
    ep.auth_token = cfg.auth_token;
    return std::make_unique<pipeline::HttpModelBackend>(ep);
  }
  if (cfg.scripted_dataset.empty()) return std::make_unique<pipeline::ScriptedBackend>();
  return std::make_unique<pipeline::ScriptedBackend>(
      pipeline::ScriptedBackend::from_triplets(captioning::read_jsonl_file(cfg.scripted_dataset)));
}

}  // namespace cadedit::service
