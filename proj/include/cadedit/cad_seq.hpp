#pragma once

// Sketch-and-extrude (SE) programs and their canonical token grammar:
//
//   model   := se+ "<eom>"
//   se      := "sketch" face+ "extrude" eparams
//   face    := "face" loop+
//   loop    := "loop" curve+
//   curve   := "line" X Y | "arc" X Y MX MY | "circle" CX CY R
//   eparams := "theta" T "phi" P "gamma" G "origin" PX PY PZ "scale" S
//              "dist" E1 E2 "op" (new|join|cut|intersect) "ext" (one|sym|two)
//
// Every numeral is a base-10 integer in [0, 255].

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace cadedit::seq {

using Quant = int;  // 8-bit quantized value, kept in [0, 255]

inline constexpr Quant kQuantMax = 255;
inline constexpr std::string_view kEndToken = "<eom>";

using TokenSequence = std::vector<std::string>;

struct Line {
  Quant x = 0, y = 0;
  bool operator==(const Line&) const = default;
};

struct Arc {
  Quant x = 0, y = 0;    // end point
  Quant mx = 0, my = 0;  // a point on the arc between start and end
  bool operator==(const Arc&) const = default;
};

struct Circle {
  Quant cx = 0, cy = 0, r = 0;
  bool operator==(const Circle&) const = default;
};

using Curve = std::variant<Line, Arc, Circle>;

/// Implicitly closed: the first curve starts where the last one ends.
struct Loop {
  std::vector<Curve> curves;
  bool operator==(const Loop&) const = default;
};

/// First loop is the outer boundary, the rest are holes.
struct Face {
  std::vector<Loop> loops;
  bool operator==(const Face&) const = default;
};

struct Sketch {
  std::vector<Face> faces;
  bool operator==(const Sketch&) const = default;
};

enum class BoolOp { New, Join, Cut, Intersect };
enum class Extent { One, Sym, Two };

struct Extrusion {
  Quant theta = 128, phi = 128, gamma = 128;
  Quant origin_x = 128, origin_y = 128, origin_z = 128;
  Quant scale = 128;
  Quant dist_pos = 160, dist_neg = 128;
  BoolOp op = BoolOp::New;
  Extent extent = Extent::One;
  bool operator==(const Extrusion&) const = default;
};

struct SePair {
  Sketch sketch;
  Extrusion extrusion;
  bool operator==(const SePair&) const = default;
};

struct CadModel {
  std::vector<SePair> ses;
  bool operator==(const CadModel&) const = default;
};

std::string_view to_string(BoolOp op);
std::string_view to_string(Extent ext);
std::optional<BoolOp> bool_op_from_string(std::string_view s);
std::optional<Extent> extent_from_string(std::string_view s);

/// Splits on runs of whitespace.
TokenSequence tokenize(std::string_view text);
std::string join(const TokenSequence& tokens);

/// Throws cadedit::Error with the index of the first offending token.
CadModel parse(std::string_view text);
CadModel parse(const TokenSequence& tokens);

std::string serialize(const CadModel& model);
TokenSequence to_tokens(const CadModel& model);

// Fragments used by edit records: an SE without the terminator, a single loop.
std::string serialize_se(const SePair& se);
std::string serialize_loop(const Loop& loop);
SePair parse_se(std::string_view text);
Loop parse_loop(std::string_view text);

struct ValidationConfig {
  std::optional<std::size_t> max_se;
  std::optional<std::size_t> max_tokens = 1024;

  /// Limits applied to synthesized data: at most 3 SE pairs, 1024 tokens.
  static ValidationConfig dataset() { return {3, 1024}; }
};

struct ValidationIssue {
  std::string code;  // TooManySe, TooLong, FirstOpNotNew, ...
  std::string path;  // e.g. "se[0].sketch.face[1].loop[0]"
  std::string message;
};

struct ValidationReport {
  bool is_valid = true;
  std::vector<ValidationIssue> errors;
};

/// Reports every violated invariant, not only the first.
ValidationReport validate(const CadModel& model, const ValidationConfig& config = {});

}  // namespace cadedit::seq
