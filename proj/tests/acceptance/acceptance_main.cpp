// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// non-zero if any fails. Usage: acceptance <cadedit-cli> <golden-dir> <work-dir>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <sys/wait.h>

#include "cadedit/captioning.hpp"
#include "cadedit/error.hpp"
#include "cadedit/masking.hpp"
#include "cadedit/metrics.hpp"
#include "cadedit/pipeline.hpp"
#include "cadedit/variation.hpp"
#include "support/test_support.hpp"

namespace fs = std::filesystem;
using namespace cadedit;

namespace {

std::string g_cli, g_golden, g_work;
int g_failures = 0;

struct Outcome {
  bool ok = true;
  std::string detail;
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

void report(const std::string& name, const std::function<Outcome()>& fn) {
  Outcome o;
  try {
    o = fn();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  if (!o.ok) ++g_failures;
  std::cout << (o.ok ? "PASS " : "FAIL ") << name << " (" << o.detail << ")" << std::endl;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

int shell(const std::string& cmd) {
  const int st = std::system(cmd.c_str());
  return WIFEXITED(st) ? WEXITSTATUS(st) : -1;
}

std::string fmt(double v, int digits = 3) {
  std::ostringstream s;
  s.precision(digits);
  s << std::fixed << v;
  return s.str();
}

Outcome grammar_round_trip() {
  const auto t0 = std::chrono::steady_clock::now();
  Rng rng(2024);
  int ok = 0;
  for (int i = 0; i < 1000; ++i) {
    const seq::CadModel m = testing::random_model(rng);
    const std::string text = seq::serialize(m);
    if (seq::parse(text) == m && seq::serialize(seq::parse(text)) == text) ++ok;
  }
  const double secs = seconds_since(t0);
  return {ok == 1000 && secs < 5.0, std::to_string(ok) + "/1000 in " + fmt(secs) + " s"};
}

Outcome lcs_oracle() {
  const auto t0 = std::chrono::steady_clock::now();
  Rng rng(77);
  int ok = 0;
  for (int i = 0; i < 1000; ++i) {
    const auto a = testing::random_tokens(rng, 12, 4);
    const auto b = testing::random_tokens(rng, 12, 4);
    if (masking::lcs(a, b).pairs.size() == testing::brute_force_lcs(a, b)) ++ok;
  }
  const double secs = seconds_since(t0);
  return {ok == 1000 && secs < 10.0, std::to_string(ok) + "/1000 in " + fmt(secs) + " s"};
}

bool realizes(const std::string& orig, const std::string& edit) {
  const auto o = seq::tokenize(orig), e = seq::tokenize(edit);
  return masking::realize(masking::make_gt_mask(o, e), masking::gt_fills(o, e)) == e;
}

std::string synth_path(int run) { return g_work + "/synth" + std::to_string(run) + ".jsonl"; }

Outcome mask_realizability() {
  Rng rng(5);
  int ok = 0;
  for (int i = 0; i < 1000; ++i) {
    const seq::CadModel a = testing::random_model(rng);
    seq::CadModel b = a;
    if (i % 2) {
      b = testing::random_model(rng);
    } else {
      b.ses[0].extrusion.dist_pos = uniform_int(rng, 0, 255);
      b.ses.push_back(testing::random_model(rng).ses[0]);
    }
    if (realizes(seq::serialize(a), seq::serialize(b))) ++ok;
  }
  const auto triplets = captioning::read_jsonl_file(synth_path(1));
  std::size_t tok = 0;
  for (const auto& t : triplets) tok += realizes(t.orig_text, t.edit_text) ? 1 : 0;
  return {ok == 1000 && tok == triplets.size() && !triplets.empty(),
          "random " + std::to_string(ok) + "/1000, synthesized " + std::to_string(tok) + "/" +
              std::to_string(triplets.size())};
}

Outcome synthesis_soundness() {
  for (int run : {1, 2}) {
    if (shell(g_cli + " synth --count 500 --seed 1 --out " + synth_path(run)) != 0) {
      return {false, "synth run " + std::to_string(run) + " failed"};
    }
  }
  const bool identical = read_file(synth_path(1)) == read_file(synth_path(2));
  const auto ts = captioning::read_jsonl_file(synth_path(1));
  std::size_t pass = 0, valid = 0, contains = 0;
  for (const auto& t : ts) {
    pass += captioning::filter_triplet(t).accept ? 1 : 0;
    valid += metrics::renders(t.edit_text) ? 1 : 0;
    bool all = t.record.has_value();
    if (t.record) {
      for (const auto& op : t.record->ops) {
        for (const char* key : {"primitive", "old_primitive", "new_primitive"}) {
          if (op.params.contains(key) &&
              t.instruction.text.find(op.params[key].get<std::string>()) == std::string::npos) {
            all = false;
          }
        }
      }
    }
    contains += all ? 1 : 0;
  }
  const std::size_t n = ts.size();
  const bool ok = n == 500 && pass == n && valid == n && contains == n && identical;
  return {ok, std::to_string(n) + " triplets, filter " + std::to_string(pass) + ", VR " +
                  fmt(static_cast<double>(valid) / std::max<std::size_t>(n, 1)) + ", class " +
                  std::to_string(contains) + ", identical " + (identical ? "yes" : "no")};
}

geometry::PointCloud random_cloud(Rng& rng, int n) {
  geometry::PointCloud c;
  for (int i = 0; i < n; ++i) {
    const double x = uniform01(rng), y = uniform01(rng), z = uniform01(rng);
    c.points.push_back({x - 0.5, y - 0.5, z - 0.5});
  }
  return c;
}

Outcome metric_oracles() {
  Rng rng(99);
  int cd_ok = 0;
  for (int i = 0; i < 100; ++i) {
    const int na = uniform_int(rng, 1, 20);
    const int nb = uniform_int(rng, 1, 20);
    const auto a = random_cloud(rng, na);
    const auto b = random_cloud(rng, nb);
    if (metrics::chamfer(a, b) == testing::brute_force_chamfer(a, b)) ++cd_ok;
  }
  int jsd_ok = 0;
  const double worked = metrics::jsd({0.5, 0.5}, {1, 0});
  if (std::abs(worked - 0.31128) < 1e-5 && std::abs(worked - testing::direct_jsd({0.5, 0.5}, {1, 0})) < 1e-9) {
    ++jsd_ok;
  }
  for (int i = 1; i < 50; ++i) {
    const int n = uniform_int(rng, 2, 16);
    std::vector<double> p(n), q(n);
    for (int k = 0; k < n; ++k) {
      p[k] = static_cast<double>(uniform_int(rng, 0, 9));
      q[k] = static_cast<double>(uniform_int(rng, 0, 9));
    }
    p[0] += 1;
    q[n - 1] += 1;
    if (std::abs(metrics::jsd(p, q) - testing::direct_jsd(p, q)) < 1e-9) ++jsd_ok;
  }
  const bool dclip_ok = std::abs(metrics::dclip({{0, 0}, {1, 2}, {0, 0}, {2, 4}}) - 1.0) < 1e-12 &&
                        std::abs(metrics::dclip({{0, 0}, {1, 2}, {0, 0}, {-2, -4}}) + 1.0) < 1e-12 &&
                        std::abs(metrics::dclip({{0, 0}, {1, 0}, {0, 0}, {0, 5}})) < 1e-15;
  return {cd_ok == 100 && jsd_ok == 50 && dclip_ok, "chamfer " + std::to_string(cd_ok) + "/100, jsd " +
                                                        std::to_string(jsd_ok) + "/50, dclip " +
                                                        (dclip_ok ? "ok" : "wrong")};
}

Outcome end_to_end() {
  const std::string testset = g_work + "/e2e_test.jsonl", results = g_work + "/e2e_results.jsonl";
  const std::string table = g_work + "/e2e_table.txt", json = g_work + "/e2e_report.json";
  if (shell(g_cli + " synth --count 100 --seed 3 --out " + testset) != 0) return {false, "synth failed"};
  const auto t0 = std::chrono::steady_clock::now();
  if (shell(g_cli + " edit --backend scripted --testset " + testset + " --out " + results) != 0) {
    return {false, "edit failed"};
  }
  if (shell(g_cli + " eval --testset " + testset + " --results " + results + " > " + table) != 0) {
    return {false, "eval failed"};
  }
  const double secs = seconds_since(t0);
  if (shell(g_cli + " eval --json --testset " + testset + " --results " + results + " > " + json) != 0) {
    return {false, "eval --json failed"};
  }
  const auto rep = nlohmann::json::parse(read_file(json));
  const std::string text = read_file(table);
  std::istringstream lines(text);
  std::string header, row;
  std::getline(lines, header);
  std::getline(lines, row);
  std::istringstream cells(row);
  std::string method, vr, jsd, cd;
  cells >> method >> vr >> jsd >> cd;
  bool columns = true;
  for (const char* col : {"VR (%)", "JSD", "CD", "D-CLIP"}) columns = columns && header.find(col) != std::string::npos;
  const double jsd_scaled = rep["jsd"].get<double>() * 100;
  const bool ok = vr == "100.0" && cd == "0.00" && jsd_scaled <= 1e-4 && secs < 120 && columns &&
                  rep["counts"]["examples"] == 100;
  return {ok, "VR " + vr + ", CD " + cd + ", JSD x100 " + fmt(jsd_scaled, 6) + ", " + fmt(secs, 1) + " s, columns " +
                  (columns ? "ok" : "missing")};
}

Outcome prompt_goldens() {
  const seq::CadModel orig = testing::square_model(160);
  const std::string o = seq::serialize(orig);
  const std::string e = seq::serialize(testing::square_model(208));
  const std::string instruction = "Increase the extrusion height of the block.";
  const auto mask = masking::make_gt_mask(seq::tokenize(o), seq::tokenize(e)).text();
  const std::string locate = pipeline::build_locating_prompt(o, instruction);
  const std::string infill = pipeline::build_infilling_prompt(o, instruction, mask);
  const bool l = locate == read_file(g_golden + "/locate.txt") &&
                 locate.find("Replace the parts that need to be modified") != std::string::npos;
  const bool i = infill == read_file(g_golden + "/infill.txt") &&
                 infill.find("Generate the edited CAD sequence that could replace") != std::string::npos;
  return {l && i, std::string("locate ") + (l ? "match" : "differs") + ", infill " + (i ? "match" : "differs")};
}

Outcome geometry_sanity() {
  const auto cube = geometry::sample_point_cloud(geometry::assemble(testing::cube_model()), 2000, 1);
  double lo[3] = {1, 1, 1}, hi[3] = {-1, -1, -1};
  for (const auto& p : cube.points) {
    const double c[3] = {p.x, p.y, p.z};
    for (int k = 0; k < 3; ++k) {
      lo[k] = std::min(lo[k], c[k]);
      hi[k] = std::max(hi[k], c[k]);
    }
  }
  int axis = 0;
  for (int k = 1; k < 3; ++k) {
    if (hi[k] - lo[k] > hi[axis] - lo[axis]) axis = k;
  }
  bool bounded = lo[axis] == -0.5 && hi[axis] == 0.5;
  for (int k = 0; k < 3; ++k) bounded = bounded && lo[k] >= -0.5 && hi[k] <= 0.5;

  const auto assembly = geometry::assemble(testing::cube_with_cut_cylinder());
  const auto s = geometry::sample_surface(assembly, 2000, 1);
  const geometry::Prism& cut = assembly.primitives[1];
  std::size_t interior = 0;
  for (const auto& p : s.world) {
    const geometry::Vec3 q = cut.frame.to_local(p);
    if (std::hypot(q.x, q.y) < 0.25 - s.band && q.z > cut.z_lo && q.z < cut.z_hi) ++interior;
  }
  return {bounded && interior == 0 && s.world.size() == 2000,
          "cube axis [" + fmt(lo[axis], 3) + ", " + fmt(hi[axis], 3) + "], " + std::to_string(interior) +
              " of " + std::to_string(s.world.size()) + " points inside the cut"};
}

}  // namespace

int main(int argc, char** argv) {
  if (argc != 4) {
    std::cerr << "usage: acceptance <cadedit-cli> <golden-dir> <work-dir>\n";
    return 2;
  }
  g_cli = argv[1];
  g_golden = argv[2];
  g_work = argv[3];
  fs::create_directories(g_work);

  report("grammar round-trip", grammar_round_trip);
  report("lcs oracle", lcs_oracle);
  report("synthesis soundness", synthesis_soundness);
  report("mask realizability", mask_realizability);
  report("metric oracles", metric_oracles);
  report("end-to-end scripted pipeline", end_to_end);
  report("prompt golden files", prompt_goldens);
  report("geometry sanity", geometry_sanity);
  return g_failures == 0 ? 0 : 1;
}
