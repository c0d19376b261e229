#include "cadedit/cad_seq.hpp"

#include <cctype>
#include <sstream>

#include "cadedit/error.hpp"

namespace cadedit::seq {

std::string_view to_string(BoolOp op) {
  switch (op) {
    case BoolOp::New: return "new";
    case BoolOp::Join: return "join";
    case BoolOp::Cut: return "cut";
    case BoolOp::Intersect: return "intersect";
  }
  return "new";
}

std::string_view to_string(Extent ext) {
  switch (ext) {
    case Extent::One: return "one";
    case Extent::Sym: return "sym";
    case Extent::Two: return "two";
  }
  return "one";
}

std::optional<BoolOp> bool_op_from_string(std::string_view s) {
  if (s == "new") return BoolOp::New;
  if (s == "join") return BoolOp::Join;
  if (s == "cut") return BoolOp::Cut;
  if (s == "intersect") return BoolOp::Intersect;
  return std::nullopt;
}

std::optional<Extent> extent_from_string(std::string_view s) {
  if (s == "one") return Extent::One;
  if (s == "sym") return Extent::Sym;
  if (s == "two") return Extent::Two;
  return std::nullopt;
}

TokenSequence tokenize(std::string_view text) {
  TokenSequence out;
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
    const std::size_t start = i;
    while (i < text.size() && !std::isspace(static_cast<unsigned char>(text[i]))) ++i;
    if (i > start) out.emplace_back(text.substr(start, i - start));
  }
  return out;
}

std::string join(const TokenSequence& tokens) {
  std::string out;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (i) out.push_back(' ');
    out += tokens[i];
  }
  return out;
}

namespace {

bool is_curve_keyword(std::string_view t) {
  return t == "line" || t == "arc" || t == "circle";
}

bool is_structural_keyword(std::string_view t) {
  return t == "sketch" || t == "face" || t == "loop" || t == "extrude" || t == kEndToken;
}

class Parser {
 public:
  explicit Parser(const TokenSequence& tokens) : tokens_(tokens) {}

  CadModel model() {
    CadModel m;
    do {
      m.ses.push_back(se());
    } while (peek_is("sketch"));
    if (at_end()) truncated("missing <eom> terminator");
    if (tokens_[pos_] != kEndToken) unknown("expected 'sketch' or '<eom>'");
    ++pos_;
    if (!at_end()) unknown("unexpected token after <eom>");
    return m;
  }

  SePair se() {
    expect("sketch");
    SePair se;
    if (!peek_is("face")) {
      if (at_end()) truncated("sketch without faces");
      if (is_structural_keyword(tokens_[pos_])) {
        throw Error(Errc::EmptyLoop, "sketch has no face/loop", pos_);
      }
      unknown("expected 'face'");
    }
    while (peek_is("face")) se.sketch.faces.push_back(face());
    if (at_end()) truncated("sketch not followed by 'extrude'");
    if (tokens_[pos_] != "extrude") unknown("expected 'extrude', 'face' or 'loop'");
    se.extrusion = extrusion();
    return se;
  }

  Loop loop_only() {
    Loop l = loop();
    if (!at_end()) unknown("unexpected token after loop");
    return l;
  }

  SePair se_only() {
    SePair s = se();
    if (!at_end()) unknown("unexpected token after extrusion");
    return s;
  }

 private:
  Face face() {
    expect("face");
    Face f;
    if (!peek_is("loop")) {
      if (at_end()) truncated("face without loops");
      if (is_structural_keyword(tokens_[pos_])) {
        throw Error(Errc::EmptyLoop, "face has no loop", pos_);
      }
      unknown("expected 'loop'");
    }
    while (peek_is("loop")) f.loops.push_back(loop());
    return f;
  }

  Loop loop() {
    expect("loop");
    Loop l;
    while (!at_end() && is_curve_keyword(tokens_[pos_])) l.curves.push_back(curve());
    if (l.curves.empty()) {
      if (at_end()) truncated("loop without curves");
      if (is_structural_keyword(tokens_[pos_])) {
        throw Error(Errc::EmptyLoop, "loop has no curves", pos_);
      }
      unknown("expected a curve keyword");
    }
    return l;
  }

  Curve curve() {
    const std::string& kw = tokens_[pos_++];
    if (kw == "line") {
      Line c;
      c.x = number();
      c.y = number();
      return c;
    }
    if (kw == "arc") {
      Arc c;
      c.x = number();
      c.y = number();
      c.mx = number();
      c.my = number();
      return c;
    }
    Circle c;
    c.cx = number();
    c.cy = number();
    c.r = number();
    return c;
  }

  Extrusion extrusion() {
    expect("extrude");
    Extrusion e;
    expect("theta");
    e.theta = number();
    expect("phi");
    e.phi = number();
    expect("gamma");
    e.gamma = number();
    expect("origin");
    e.origin_x = number();
    e.origin_y = number();
    e.origin_z = number();
    expect("scale");
    e.scale = number();
    expect("dist");
    e.dist_pos = number();
    e.dist_neg = number();
    expect("op");
    if (at_end()) truncated("missing boolean operation");
    auto op = bool_op_from_string(tokens_[pos_]);
    if (!op) throw Error(Errc::BadEnumLiteral, "bad op literal '" + tokens_[pos_] + "'", pos_);
    e.op = *op;
    ++pos_;
    expect("ext");
    if (at_end()) truncated("missing extent type");
    auto ext = extent_from_string(tokens_[pos_]);
    if (!ext) throw Error(Errc::BadEnumLiteral, "bad ext literal '" + tokens_[pos_] + "'", pos_);
    e.extent = *ext;
    ++pos_;
    return e;
  }

  Quant number() {
    if (at_end()) truncated("expected a number");
    const std::string& t = tokens_[pos_];
    bool digits = !t.empty() && t.size() <= 3;
    for (char c : t) digits = digits && std::isdigit(static_cast<unsigned char>(c));
    const int value = digits ? std::stoi(t) : -1;
    if (!digits || value > kQuantMax) {
      throw Error(Errc::OutOfRangeNumber, "expected integer in [0,255], got '" + t + "'", pos_);
    }
    ++pos_;
    return value;
  }

  void expect(std::string_view kw) {
    if (at_end()) truncated("expected '" + std::string(kw) + "'");
    if (tokens_[pos_] != kw) unknown("expected '" + std::string(kw) + "'");
    ++pos_;
  }

  bool at_end() const { return pos_ >= tokens_.size(); }
  bool peek_is(std::string_view kw) const { return !at_end() && tokens_[pos_] == kw; }

  [[noreturn]] void truncated(const std::string& what) const {
    const std::size_t idx = tokens_.empty() ? 0 : tokens_.size() - 1;
    throw Error(Errc::TruncatedSequence, "truncated sequence: " + what, idx);
  }

  [[noreturn]] void unknown(const std::string& what) const {
    throw Error(Errc::UnknownKeyword,
                "unexpected token '" + tokens_[pos_] + "': " + what, pos_);
  }

  const TokenSequence& tokens_;
  std::size_t pos_ = 0;
};

void append(TokenSequence& out, Quant v) { out.push_back(std::to_string(v)); }

void append_loop(TokenSequence& out, const Loop& loop) {
  out.emplace_back("loop");
  for (const Curve& c : loop.curves) {
    if (const auto* l = std::get_if<Line>(&c)) {
      out.emplace_back("line");
      append(out, l->x);
      append(out, l->y);
    } else if (const auto* a = std::get_if<Arc>(&c)) {
      out.emplace_back("arc");
      append(out, a->x);
      append(out, a->y);
      append(out, a->mx);
      append(out, a->my);
    } else {
      const auto& ci = std::get<Circle>(c);
      out.emplace_back("circle");
      append(out, ci.cx);
      append(out, ci.cy);
      append(out, ci.r);
    }
  }
}

void append_se(TokenSequence& out, const SePair& se) {
  out.emplace_back("sketch");
  for (const Face& f : se.sketch.faces) {
    out.emplace_back("face");
    for (const Loop& l : f.loops) append_loop(out, l);
  }
  const Extrusion& e = se.extrusion;
  out.emplace_back("extrude");
  out.emplace_back("theta");
  append(out, e.theta);
  out.emplace_back("phi");
  append(out, e.phi);
  out.emplace_back("gamma");
  append(out, e.gamma);
  out.emplace_back("origin");
  append(out, e.origin_x);
  append(out, e.origin_y);
  append(out, e.origin_z);
  out.emplace_back("scale");
  append(out, e.scale);
  out.emplace_back("dist");
  append(out, e.dist_pos);
  append(out, e.dist_neg);
  out.emplace_back("op");
  out.emplace_back(to_string(e.op));
  out.emplace_back("ext");
  out.emplace_back(to_string(e.extent));
}

}  // namespace

CadModel parse(const TokenSequence& tokens) { return Parser(tokens).model(); }

CadModel parse(std::string_view text) { return parse(tokenize(text)); }

TokenSequence to_tokens(const CadModel& model) {
  TokenSequence out;
  for (const SePair& se : model.ses) append_se(out, se);
  out.emplace_back(kEndToken);
  return out;
}

std::string serialize(const CadModel& model) { return join(to_tokens(model)); }

std::string serialize_se(const SePair& se) {
  TokenSequence out;
  append_se(out, se);
  return join(out);
}

std::string serialize_loop(const Loop& loop) {
  TokenSequence out;
  append_loop(out, loop);
  return join(out);
}

SePair parse_se(std::string_view text) {
  const TokenSequence tokens = tokenize(text);
  return Parser(tokens).se_only();
}

Loop parse_loop(std::string_view text) {
  const TokenSequence tokens = tokenize(text);
  return Parser(tokens).loop_only();
}

namespace {

struct Validator {
  ValidationReport report;

  void fail(std::string code, std::string path, std::string message) {
    report.is_valid = false;
    report.errors.push_back({std::move(code), std::move(path), std::move(message)});
  }

  void range(Quant v, const std::string& path) {
    if (v < 0 || v > kQuantMax) {
      fail("OutOfRange", path, "value " + std::to_string(v) + " outside [0,255]");
    }
  }

  void check_loop(const Loop& loop, const std::string& path) {
    if (loop.curves.empty()) {
      fail("EmptyLoop", path, "loop has no curves");
      return;
    }
    bool has_circle = false;
    std::size_t points = 0;
    for (std::size_t i = 0; i < loop.curves.size(); ++i) {
      const std::string cpath = path + ".curve[" + std::to_string(i) + "]";
      const Curve& c = loop.curves[i];
      if (const auto* l = std::get_if<Line>(&c)) {
        range(l->x, cpath);
        range(l->y, cpath);
        points += 1;
      } else if (const auto* a = std::get_if<Arc>(&c)) {
        range(a->x, cpath);
        range(a->y, cpath);
        range(a->mx, cpath);
        range(a->my, cpath);
        points += 2;
      } else {
        const auto& ci = std::get<Circle>(c);
        has_circle = true;
        range(ci.cx, cpath);
        range(ci.cy, cpath);
        range(ci.r, cpath);
        if (ci.r < 1) fail("RadiusTooSmall", cpath, "circle radius must be >= 1");
      }
    }
    if (has_circle && loop.curves.size() != 1) {
      fail("MixedCircleLoop", path, "a loop with a circle must contain only that circle");
    }
    if (!has_circle && points < 3) {
      fail("TooFewPoints", path, "a closed loop needs at least 3 defining points");
    }
  }

  void check_extrusion(const Extrusion& e, const std::string& path) {
    for (Quant v : {e.theta, e.phi, e.gamma, e.origin_x, e.origin_y, e.origin_z, e.scale,
                    e.dist_pos, e.dist_neg}) {
      range(v, path);
    }
  }
};

}  // namespace

ValidationReport validate(const CadModel& model, const ValidationConfig& config) {
  Validator v;
  if (model.ses.empty()) v.fail("EmptyModel", "", "model has no SE pairs");
  if (config.max_se && model.ses.size() > *config.max_se) {
    v.fail("TooManySe", "",
           std::to_string(model.ses.size()) + " SE pairs exceed limit " +
               std::to_string(*config.max_se));
  }
  for (std::size_t s = 0; s < model.ses.size(); ++s) {
    const SePair& se = model.ses[s];
    const std::string spath = "se[" + std::to_string(s) + "]";
    if (se.sketch.faces.empty()) v.fail("EmptySketch", spath + ".sketch", "sketch has no faces");
    for (std::size_t f = 0; f < se.sketch.faces.size(); ++f) {
      const Face& face = se.sketch.faces[f];
      const std::string fpath = spath + ".sketch.face[" + std::to_string(f) + "]";
      if (face.loops.empty()) v.fail("EmptyFace", fpath, "face has no loops");
      for (std::size_t l = 0; l < face.loops.size(); ++l) {
        v.check_loop(face.loops[l], fpath + ".loop[" + std::to_string(l) + "]");
      }
    }
    v.check_extrusion(se.extrusion, spath + ".extrusion");
    if (s == 0 && se.extrusion.op != BoolOp::New) {
      v.fail("FirstOpNotNew", spath + ".extrusion.op", "first SE must use op new");
    }
  }
  if (config.max_tokens) {
    const std::size_t n = to_tokens(model).size();
    if (n > *config.max_tokens) {
      v.fail("TooLong", "",
             std::to_string(n) + " tokens exceed limit " + std::to_string(*config.max_tokens));
    }
  }
  return v.report;
}

}  // namespace cadedit::seq
