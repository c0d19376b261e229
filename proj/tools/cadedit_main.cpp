// cadedit: synthesize edit triplets, run the editing pipeline, evaluate,
// serve the HTTP API and export geometry.

#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "cadedit/captioning.hpp"
#include "cadedit/error.hpp"
#include "cadedit/geometry.hpp"
#include "cadedit/metrics.hpp"
#include "cadedit/pipeline.hpp"
#include "cadedit/service.hpp"
#include "httplib.h"

using namespace cadedit;

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::IoError, "cannot open " + path);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

bool ends_with(const std::string& s, const std::string& suffix) {
  return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

struct SynthArgs {
  std::size_t count = 100;
  std::uint64_t seed = 1;
  std::size_t variants = 3;
  std::string out;
};

int run_synth(const SynthArgs& a) {
  captioning::SynthConfig cfg;
  cfg.count = a.count;
  cfg.seed = a.seed;
  cfg.variants_per_base = a.variants;
  captioning::SynthStats stats;
  const auto triplets = captioning::synthesize(cfg, &stats);
  if (a.out.empty() || a.out == "-") {
    captioning::write_jsonl(std::cout, triplets);
  } else {
    captioning::write_jsonl_file(a.out, triplets);
  }
  std::cerr << "synth: " << triplets.size() << " triplets from " << stats.bases << " base models ("
            << stats.rejected_filter << " filtered, " << stats.rejected_duplicate << " duplicates, "
            << stats.rejected_invalid << " invalid)\n";
  return 0;
}

struct EditArgs {
  std::string model;
  std::string instruction;
  std::string backend = "scripted";
  std::string script;  // triplets programming the scripted backend
  std::string testset;
  std::string out;
  std::size_t k = pipeline::kDefaultCandidates;
  int retries = pipeline::kDefaultRetries;
  std::uint64_t seed = 0;
};

std::unique_ptr<pipeline::ModelBackend> backend_for(const EditArgs& a) {
  if (a.backend != "scripted") {
    HttpEndpoint ep;
    ep.url = a.backend;
    if (const char* token = std::getenv("CADEDIT_AUTH_TOKEN")) ep.auth_token = token;
    return std::make_unique<pipeline::HttpModelBackend>(ep);
  }
  const std::string script = a.script.empty() ? a.testset : a.script;
  if (script.empty()) return std::make_unique<pipeline::ScriptedBackend>();
  return std::make_unique<pipeline::ScriptedBackend>(
      pipeline::ScriptedBackend::from_triplets(captioning::read_jsonl_file(script)));
}

int run_edit(const EditArgs& a) {
  auto backend = backend_for(a);
  pipeline::SamplingConfig sampling;
  sampling.seed = a.seed;
  if (!a.testset.empty()) {
    std::vector<pipeline::EditResult> results;
    std::size_t failed = 0;
    for (const auto& t : captioning::read_jsonl_file(a.testset)) {
      try {
        results.push_back(pipeline::edit(seq::parse(t.orig_text), t.instruction.text, *backend, a.k, sampling,
                                         a.retries));
      } catch (const Error& e) {
        if (e.code() != Errc::LocatingFailed) throw;
        // A failed locate yields k invalid candidates.
        pipeline::EditResult r;
        r.k = a.k;
        r.candidates.assign(a.k, pipeline::Candidate{"", false, false, "LocatingFailed"});
        results.push_back(std::move(r));
        ++failed;
      }
    }
    if (a.out.empty() || a.out == "-") {
      for (const auto& r : results) std::cout << pipeline::to_json(r).dump() << '\n';
    } else {
      metrics::write_results_jsonl(a.out, results);
    }
    std::cerr << "edit: " << results.size() << " examples, " << failed << " locate failures\n";
    return 0;
  }
  if (a.model.empty() || a.instruction.empty()) {
    throw Error(Errc::InvalidInput, "edit needs --model and --instruction, or --testset");
  }
  const auto result = pipeline::edit(seq::parse(read_file(a.model)), a.instruction, *backend, a.k, sampling,
                                     a.retries);
  std::cout << pipeline::to_json(result).dump(2) << '\n';
  return 0;
}

struct EvalArgs {
  std::string testset;
  std::string results;
  std::string embed_url;
  bool json = false;
  std::uint64_t seed = 0;
};

int run_eval(const EvalArgs& a) {
  metrics::EvalConfig cfg;
  cfg.seed = a.seed;
  std::unique_ptr<metrics::HttpEmbeddingBackend> embedder;
  if (!a.embed_url.empty()) {
    HttpEndpoint ep;
    ep.url = a.embed_url;
    embedder = std::make_unique<metrics::HttpEmbeddingBackend>(ep);
    cfg.embedder = embedder.get();
  }
  const auto report = metrics::evaluate(captioning::read_jsonl_file(a.testset),
                                        metrics::read_results_jsonl(a.results), cfg);
  if (a.json) {
    std::cout << metrics::to_json(report).dump(2) << '\n';
  } else {
    std::cout << metrics::format_table(report);
  }
  return 0;
}

struct ServeArgs {
  std::string config;
  int port = 0;
};

int run_serve(const ServeArgs& a) {
  service::ServiceConfig cfg;
  if (!a.config.empty()) {
    cfg = service::load_config(a.config);
  } else {
    service::apply_env_overrides(cfg);
  }
  if (a.port) cfg.port = a.port;
  service::EditService svc(cfg, service::make_backend(cfg));
  httplib::Server server;
  service::install_routes(server, svc);
  std::cerr << "serving on " << cfg.host << ":" << cfg.port << "\n";
  if (!server.listen(cfg.host, cfg.port)) {
    throw Error(Errc::IoError, "cannot listen on " + cfg.host + ":" + std::to_string(cfg.port));
  }
  return 0;
}

struct RenderArgs {
  std::string model;
  std::string out;
  std::size_t points = geometry::kDefaultCloudSize;
  std::uint64_t seed = 0;
};

int run_render(const RenderArgs& a) {
  const auto assembly = geometry::assemble(seq::parse(read_file(a.model)));
  std::ofstream out(a.out, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(Errc::IoError, "cannot write " + a.out);
  if (ends_with(a.out, ".png")) {
    const auto png = geometry::encode_png(geometry::render_preview(geometry::mesh(assembly)));
    out.write(reinterpret_cast<const char*>(png.data()), static_cast<std::streamsize>(png.size()));
  } else if (ends_with(a.out, ".xyz")) {
    geometry::write_xyz(out, geometry::sample_point_cloud(assembly, a.points, a.seed));
  } else if (ends_with(a.out, ".obj")) {
    geometry::write_obj(out, geometry::mesh(assembly));
  } else {
    throw Error(Errc::InvalidInput, "output must end in .obj, .png or .xyz");
  }
  if (!out.flush()) throw Error(Errc::IoError, "write failed for " + a.out);
  return 0;
}

void report_error(std::string_view code, const std::string& message, std::optional<std::size_t> token) {
  nlohmann::ordered_json j;
  j["error"] = code;
  j["message"] = message;
  if (token) j["token_index"] = *token;
  std::cerr << j.dump() << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"CAD sequence editing toolkit"};
  app.require_subcommand(1);

  SynthArgs synth;
  auto* s = app.add_subcommand("synth", "Synthesize a filtered triplet dataset");
  s->add_option("--count", synth.count, "Number of triplets")->default_val(100);
  s->add_option("--seed", synth.seed, "RNG seed")->default_val(1);
  s->add_option("--variants", synth.variants, "Variants per base model")->default_val(3);
  s->add_option("--out", synth.out, "Output JSONL (default stdout)");

  EditArgs edit;
  auto* e = app.add_subcommand("edit", "Run locate-then-infill on a model or a test set");
  e->add_option("--model", edit.model, "File holding a CAD sequence");
  e->add_option("--instruction", edit.instruction, "Editing instruction");
  e->add_option("--backend", edit.backend, "'scripted' or a completion endpoint URL")->default_val("scripted");
  e->add_option("--script", edit.script, "Triplets that program the scripted backend");
  e->add_option("--testset", edit.testset, "Batch mode: triplet JSONL to edit");
  e->add_option("--out", edit.out, "Batch mode: results JSONL (default stdout)");
  e->add_option("-k", edit.k, "Candidates per example")->default_val(pipeline::kDefaultCandidates);
  e->add_option("--retries", edit.retries, "Extra locate attempts")->default_val(pipeline::kDefaultRetries);
  e->add_option("--seed", edit.seed, "Base sampling seed")->default_val(0);

  EvalArgs eval;
  auto* v = app.add_subcommand("eval", "Score edit results against a test set");
  v->add_option("--testset", eval.testset, "Triplet JSONL")->required();
  v->add_option("--results", eval.results, "Results JSONL from `edit --testset`")->required();
  v->add_option("--embed-url", eval.embed_url, "Embedding endpoint for D-CLIP");
  v->add_option("--seed", eval.seed, "Point sampling seed")->default_val(0);
  v->add_flag("--json", eval.json, "Print the report as JSON");

  ServeArgs serve;
  auto* sv = app.add_subcommand("serve", "Run the HTTP API");
  sv->add_option("--config", serve.config, "key = value config file");
  sv->add_option("--port", serve.port, "Override the configured port");

  RenderArgs render;
  auto* r = app.add_subcommand("render", "Export a model as OBJ, PNG or XYZ");
  r->add_option("--model", render.model, "File holding a CAD sequence")->required();
  r->add_option("--out", render.out, "Output path (.obj, .png or .xyz)")->required();
  r->add_option("--points", render.points, "Points for .xyz")->default_val(geometry::kDefaultCloudSize);
  r->add_option("--seed", render.seed, "Sampling seed for .xyz")->default_val(0);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& err) {
    if (err.get_exit_code() == 0) return app.exit(err);
    report_error("UsageError", err.what(), std::nullopt);
    return 2;
  }

  try {
    if (*s) return run_synth(synth);
    if (*e) return run_edit(edit);
    if (*v) return run_eval(eval);
    if (*sv) return run_serve(serve);
    if (*r) return run_render(render);
  } catch (const Error& err) {
    report_error(to_string(err.code()), err.what(), err.token_index());
    return 1;
  } catch (const std::exception& err) {
    report_error("Internal", err.what(), std::nullopt);
    return 3;
  }
  return 0;
}
