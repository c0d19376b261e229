#include "cadedit/error.hpp"
#include "cadedit/service.hpp"
#include "httplib.h"

namespace cadedit::service {

int http_status(Errc code) {
  switch (code) {
    case Errc::UnknownSession: return 404;
    case Errc::InvalidModel:
    case Errc::InvalidInput:
    case Errc::InvalidCandidate:
    case Errc::InconsistentMask:
    case Errc::FormatError:
    case Errc::ArityMismatch:
    case Errc::EmptyInput: return 400;
    case Errc::LocatingFailed: return 422;
    case Errc::BackendUnavailable: return 503;
    default: return 500;
  }
}

nlohmann::ordered_json error_json(const Error& e) {
  nlohmann::ordered_json j;
  j["error"] = to_string(e.code());
  j["message"] = e.what();
  if (e.token_index()) j["token_index"] = *e.token_index();
  return j;
}

namespace {

using Handler = std::function<void(const httplib::Request&, httplib::Response&)>;

void send_json(httplib::Response& res, const nlohmann::ordered_json& j, int status = 200) {
  res.status = status;
  res.set_content(j.dump(), "application/json");
}

// Runs `fn`, turning library errors and malformed bodies into JSON replies.
Handler guarded(Handler fn) {
  return [fn = std::move(fn)](const httplib::Request& req, httplib::Response& res) {
    try {
      fn(req, res);
    } catch (const Error& e) {
      send_json(res, error_json(e), http_status(e.code()));
    } catch (const nlohmann::json::exception& e) {
      send_json(res, error_json(Error(Errc::FormatError, e.what())), 400);
    } catch (const std::exception& e) {
      send_json(res, {{"error", "Internal"}, {"message", e.what()}}, 500);
    }
  };
}

nlohmann::json body_of(const httplib::Request& req) {
  if (req.body.empty()) return nlohmann::json::object();
  return nlohmann::json::parse(req.body);
}

std::size_t index_param(const httplib::Request& req, std::size_t i) {
  try {
    return std::stoul(req.matches[i].str());
  } catch (const std::exception&) {
    throw Error(Errc::InvalidInput, "bad candidate index");
  }
}

std::vector<captioning::EditTriplet> testset_of(const nlohmann::json& v) {
  if (v.is_string()) return captioning::read_jsonl_file(v.get<std::string>());
  std::vector<captioning::EditTriplet> out;
  for (const auto& t : v) out.push_back(captioning::triplet_from_json(t));
  return out;
}

std::vector<pipeline::EditResult> results_of(const nlohmann::json& v) {
  if (v.is_string()) return metrics::read_results_jsonl(v.get<std::string>());
  std::vector<pipeline::EditResult> out;
  for (const auto& r : v) out.push_back(pipeline::edit_result_from_json(r));
  return out;
}

}  // namespace

void install_routes(httplib::Server& server, EditService& service) {
  server.Post("/sessions", guarded([&](const httplib::Request& req, httplib::Response& res) {
    const auto body = body_of(req);
    send_json(res, to_json(service.create_session(body.at("model").get<std::string>())), 201);
  }));

  server.Get(R"(/sessions/([0-9a-zA-Z]+))", guarded([&](const httplib::Request& req, httplib::Response& res) {
    send_json(res, to_json(service.get_session(req.matches[1].str())));
  }));

  server.Post(R"(/sessions/([0-9a-zA-Z]+)/instructions)",
              guarded([&](const httplib::Request& req, httplib::Response& res) {
                const auto body = body_of(req);
                std::optional<std::size_t> k;
                if (body.contains("k") && !body.at("k").is_null()) k = body.at("k").get<std::size_t>();
                const auto result =
                    service.submit_instruction(req.matches[1].str(), body.at("instruction").get<std::string>(), k);
                send_json(res, pipeline::to_json(result));
              }));

  server.Post(R"(/sessions/([0-9a-zA-Z]+)/selection)",
              guarded([&](const httplib::Request& req, httplib::Response& res) {
                const auto body = body_of(req);
                const auto s = service.apply_selection(req.matches[1].str(), body.at("index").get<std::size_t>(),
                                                       body.value("annotator", "anonymous"));
                send_json(res, to_json(s));
              }));

  server.Get(R"(/sessions/([0-9a-zA-Z]+)/candidates/(\d+)/mesh)",
             guarded([&](const httplib::Request& req, httplib::Response& res) {
               res.set_content(service.candidate_obj(req.matches[1].str(), index_param(req, 2)), "model/obj");
             }));

  server.Get(R"(/sessions/([0-9a-zA-Z]+)/candidates/(\d+)/preview)",
             guarded([&](const httplib::Request& req, httplib::Response& res) {
               const auto png = service.candidate_png(req.matches[1].str(), index_param(req, 2));
               res.set_content(std::string(png.begin(), png.end()), "image/png");
             }));

  server.Post("/eval", guarded([&](const httplib::Request& req, httplib::Response& res) {
    const auto body = body_of(req);
    const auto report = metrics::evaluate(testset_of(body.at("testset")), results_of(body.at("results")));
    nlohmann::ordered_json j = metrics::to_json(report);
    j["table"] = metrics::format_table(report);
    send_json(res, j);
  }));
}

}  // namespace cadedit::service
