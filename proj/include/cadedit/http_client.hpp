#pragma once

// Minimal JSON-over-HTTP client shared by the LLM, LVLM and embedding
// backends.

#include <chrono>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

namespace cadedit {

struct HttpEndpoint {
  std::string url;         // http://host:port/path
  std::string auth_token;  // sent as "Authorization: Bearer <token>" when non-empty
  std::chrono::milliseconds timeout{60000};
  int retries = 3;
  std::chrono::milliseconds backoff{200};  // doubled after every failed attempt
};

/// POSTs `body` and returns the parsed JSON reply. Connection failures and
/// non-2xx statuses are retried with exponential backoff, then raised as
/// BackendUnavailable.
nlohmann::json post_json(const HttpEndpoint& endpoint, const nlohmann::json& body);

std::string base64_encode(const std::vector<std::uint8_t>& bytes);

}  // namespace cadedit
