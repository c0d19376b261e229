#pragma once

// Shared fixtures and independent reference implementations for tests.

#include <cmath>
#include <filesystem>
#include <string>
#include <vector>

#include "cadedit/cad_seq.hpp"
#include "cadedit/geometry.hpp"
#include "cadedit/random.hpp"

namespace cadedit::testing {

/// Square loop (64,64)-(192,192): the unit square centred on the origin.
inline seq::Loop unit_square() {
  return {{seq::Line{192, 64}, seq::Line{192, 192}, seq::Line{64, 192}, seq::Line{64, 64}}};
}

inline seq::SePair se(seq::Loop outer, seq::BoolOp op = seq::BoolOp::New, seq::Quant dist = 192,
                      seq::Extent ext = seq::Extent::One) {
  seq::SePair s;
  s.sketch.faces.push_back(seq::Face{{std::move(outer)}});
  // theta 0 with phi + gamma = 0 puts the sketch plane on z = 0 with no twist.
  s.extrusion.theta = 0;
  s.extrusion.gamma = 127;
  s.extrusion.op = op;
  s.extrusion.dist_pos = dist;
  s.extrusion.extent = ext;
  return s;
}

inline seq::CadModel square_model(seq::Quant dist = 192) { return {{se(unit_square(), seq::BoolOp::New, dist)}}; }

/// Near-unit cube: unit square swept symmetrically by (255 - 128) / 128.
inline seq::CadModel cube_model() {
  return {{se(unit_square(), seq::BoolOp::New, 255, seq::Extent::Sym)}};
}

/// Cube with a concentric cylinder of radius 0.25 cut all the way through.
inline seq::CadModel cube_with_cut_cylinder() {
  seq::CadModel m = cube_model();
  m.ses.push_back(se({{seq::Circle{128, 128, 32}}}, seq::BoolOp::Cut, 255, seq::Extent::Two));
  m.ses.back().extrusion.dist_neg = 255;
  return m;
}

/// Grammar-valid random model with 1-4 SEs mixing every curve kind, op and
/// extent. Geometry is not checked.
inline seq::CadModel random_model(Rng& rng) {
  seq::CadModel m;
  const int n_se = uniform_int(rng, 1, 4);
  for (int s = 0; s < n_se; ++s) {
    seq::SePair se;
    const int n_faces = uniform_int(rng, 1, 2);
    for (int f = 0; f < n_faces; ++f) {
      seq::Face face;
      const int n_loops = uniform_int(rng, 1, 2);
      for (int l = 0; l < n_loops; ++l) {
        seq::Loop loop;
        if (uniform_int(rng, 0, 3) == 0) {
          const int cx = uniform_int(rng, 0, 255), cy = uniform_int(rng, 0, 255);
          loop.curves.push_back(seq::Circle{cx, cy, uniform_int(rng, 1, 255)});
        } else {
          const int n = uniform_int(rng, 3, 6);
          for (int c = 0; c < n; ++c) {
            const int x = uniform_int(rng, 0, 255), y = uniform_int(rng, 0, 255);
            if (uniform_int(rng, 0, 2) == 0) {
              const int mx = uniform_int(rng, 0, 255), my = uniform_int(rng, 0, 255);
              loop.curves.push_back(seq::Arc{x, y, mx, my});
            } else {
              loop.curves.push_back(seq::Line{x, y});
            }
          }
        }
        face.loops.push_back(std::move(loop));
      }
      se.sketch.faces.push_back(std::move(face));
    }
    seq::Extrusion& e = se.extrusion;
    e.theta = uniform_int(rng, 0, 255);
    e.phi = uniform_int(rng, 0, 255);
    e.gamma = uniform_int(rng, 0, 255);
    e.origin_x = uniform_int(rng, 0, 255);
    e.origin_y = uniform_int(rng, 0, 255);
    e.origin_z = uniform_int(rng, 0, 255);
    e.scale = uniform_int(rng, 0, 255);
    e.dist_pos = uniform_int(rng, 0, 255);
    e.dist_neg = uniform_int(rng, 0, 255);
    e.op = s == 0 ? seq::BoolOp::New : static_cast<seq::BoolOp>(uniform_int(rng, 0, 3));
    e.extent = static_cast<seq::Extent>(uniform_int(rng, 0, 2));
    m.ses.push_back(std::move(se));
  }
  return m;
}

/// Random sequence over a small alphabet.
inline seq::TokenSequence random_tokens(Rng& rng, int max_len, int alphabet) {
  seq::TokenSequence out;
  const int n = uniform_int(rng, 0, max_len);
  for (int i = 0; i < n; ++i) out.push_back(std::string(1, static_cast<char>('a' + uniform_int(rng, 0, alphabet - 1))));
  return out;
}

inline bool is_subsequence(const seq::TokenSequence& s, const seq::TokenSequence& of) {
  std::size_t j = 0;
  for (const auto& t : of) {
    if (j < s.size() && s[j] == t) ++j;
  }
  return j == s.size();
}

/// LCS length by enumerating every subsequence of `a` (|a| <= 20).
inline std::size_t brute_force_lcs(const seq::TokenSequence& a, const seq::TokenSequence& b) {
  std::size_t best = 0;
  for (std::uint32_t mask = 0; mask < (1u << a.size()); ++mask) {
    const auto bits = static_cast<std::size_t>(__builtin_popcount(mask));
    if (bits <= best) continue;
    seq::TokenSequence sub;
    for (std::size_t i = 0; i < a.size(); ++i) {
      if (mask & (1u << i)) sub.push_back(a[i]);
    }
    if (is_subsequence(sub, b)) best = bits;
  }
  return best;
}

inline double brute_force_chamfer(const geometry::PointCloud& a, const geometry::PointCloud& b) {
  auto directed = [](const geometry::PointCloud& from, const geometry::PointCloud& to) {
    double sum = 0;
    for (const auto& p : from.points) {
      double best = INFINITY;
      for (const auto& q : to.points) {
        const double dx = p.x - q.x, dy = p.y - q.y, dz = p.z - q.z;
        best = std::min(best, dx * dx + dy * dy + dz * dz);
      }
      sum += best;
    }
    return sum / static_cast<double>(from.points.size());
  };
  return directed(a, b) + directed(b, a);
}

/// JSD = KL(P||M)/2 + KL(Q||M)/2 with M = (P+Q)/2, natural log converted to bits.
inline double direct_jsd(std::vector<double> p, std::vector<double> q) {
  double sp = 0, sq = 0;
  for (double v : p) sp += v;
  for (double v : q) sq += v;
  double kl_p = 0, kl_q = 0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double pi = p[i] / sp, qi = q[i] / sq, mi = (pi + qi) / 2;
    if (pi > 0) kl_p += pi * std::log(pi / mi);
    if (qi > 0) kl_q += qi * std::log(qi / mi);
  }
  return (kl_p + kl_q) / 2 / std::log(2.0);
}

/// Fresh empty directory under the system temp dir.
inline std::string temp_dir(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / ("cadedit-test-" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir.string();
}

}  // namespace cadedit::testing
