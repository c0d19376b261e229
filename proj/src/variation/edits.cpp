#include <algorithm>
#include <cmath>

#include "cadedit/error.hpp"
#include "cadedit/geometry.hpp"
#include "cadedit/variation.hpp"

namespace cadedit::variation {

using nlohmann::json;
using seq::CadModel;
using seq::Quant;

std::string_view to_string(EditKind kind) {
  switch (kind) {
    case EditKind::AddSe: return "add_se";
    case EditKind::DeleteSe: return "delete_se";
    case EditKind::ReplacePrimitive: return "replace_primitive";
    case EditKind::ScaleLoop: return "scale_loop";
    case EditKind::TranslateSketch: return "translate_sketch";
    case EditKind::ChangeExtrudeDist: return "change_extrude_dist";
    case EditKind::ChangeBoolOp: return "change_bool_op";
  }
  return "add_se";
}

std::optional<EditKind> edit_kind_from_string(std::string_view s) {
  for (EditKind k : kAllEditKinds) {
    if (to_string(k) == s) return k;
  }
  return std::nullopt;
}

json to_json(const EditRecord& record) {
  json ops = json::array();
  for (const EditOp& op : record.ops) {
    ops.push_back({{"kind", to_string(op.kind)}, {"target", op.target}, {"params", op.params}});
  }
  return {{"ops", ops}};
}

EditRecord record_from_json(const json& j) {
  EditRecord r;
  try {
    for (const json& o : j.at("ops")) {
      const auto kind = edit_kind_from_string(o.at("kind").get<std::string>());
      if (!kind) throw Error(Errc::FormatError, "unknown edit kind " + o.at("kind").dump());
      r.ops.push_back({*kind, o.at("target").get<std::string>(), o.at("params")});
    }
  } catch (const json::exception& e) {
    throw Error(Errc::FormatError, std::string("malformed edit record: ") + e.what());
  }
  return r;
}

namespace {

std::string se_path(std::size_t i) { return "se[" + std::to_string(i) + "]"; }

std::string loop_path(std::size_t s, std::size_t f, std::size_t l) {
  return se_path(s) + ".sketch.face[" + std::to_string(f) + "].loop[" + std::to_string(l) + "]";
}

std::vector<std::size_t> path_indices(std::string_view target) {
  std::vector<std::size_t> out;
  std::size_t i = 0;
  while ((i = target.find('[', i)) != std::string_view::npos) {
    const std::size_t close = target.find(']', i);
    if (close == std::string_view::npos) break;
    out.push_back(std::stoul(std::string(target.substr(i + 1, close - i - 1))));
    i = close;
  }
  return out;
}

[[noreturn]] void mismatch(const EditOp& op, const std::string& what) {
  throw Error(Errc::EditMismatch,
              std::string(to_string(op.kind)) + " at " + op.target + ": " + what);
}

seq::SePair& se_at(CadModel& m, const EditOp& op, std::size_t i) {
  if (i >= m.ses.size()) mismatch(op, "SE index out of range");
  return m.ses[i];
}

seq::Loop& loop_at(CadModel& m, const EditOp& op) {
  const auto idx = path_indices(op.target);
  if (idx.size() != 3) mismatch(op, "bad loop path");
  seq::SePair& se = se_at(m, op, idx[0]);
  if (idx[1] >= se.sketch.faces.size() || idx[2] >= se.sketch.faces[idx[1]].loops.size()) {
    mismatch(op, "loop index out of range");
  }
  return se.sketch.faces[idx[1]].loops[idx[2]];
}

void apply_op(CadModel& m, const EditOp& op) {
  const auto idx = path_indices(op.target);
  if (idx.empty()) mismatch(op, "target has no index");
  const json& p = op.params;
  switch (op.kind) {
    case EditKind::AddSe: {
      if (idx[0] > m.ses.size()) mismatch(op, "insert index out of range");
      m.ses.insert(m.ses.begin() + static_cast<std::ptrdiff_t>(idx[0]),
                   seq::parse_se(p.at("new").get<std::string>()));
      return;
    }
    case EditKind::DeleteSe: {
      const seq::SePair& se = se_at(m, op, idx[0]);
      if (seq::serialize_se(se) != p.at("old").get<std::string>()) mismatch(op, "SE differs");
      m.ses.erase(m.ses.begin() + static_cast<std::ptrdiff_t>(idx[0]));
      return;
    }
    case EditKind::ReplacePrimitive:
    case EditKind::ScaleLoop: {
      seq::Loop& loop = loop_at(m, op);
      if (seq::serialize_loop(loop) != p.at("old").get<std::string>()) mismatch(op, "loop differs");
      loop = seq::parse_loop(p.at("new").get<std::string>());
      return;
    }
    case EditKind::TranslateSketch: {
      seq::Extrusion& e = se_at(m, op, idx[0]).extrusion;
      const auto old = p.at("old").get<std::vector<int>>();
      const auto nu = p.at("new").get<std::vector<int>>();
      if (old.size() != 3 || nu.size() != 3) mismatch(op, "origin needs 3 values");
      if (e.origin_x != old[0] || e.origin_y != old[1] || e.origin_z != old[2]) {
        mismatch(op, "origin differs");
      }
      e.origin_x = nu[0];
      e.origin_y = nu[1];
      e.origin_z = nu[2];
      return;
    }
    case EditKind::ChangeExtrudeDist: {
      seq::Extrusion& e = se_at(m, op, idx[0]).extrusion;
      if (e.dist_pos != p.at("old").get<int>()) mismatch(op, "distance differs");
      e.dist_pos = p.at("new").get<int>();
      return;
    }
    case EditKind::ChangeBoolOp: {
      seq::Extrusion& e = se_at(m, op, idx[0]).extrusion;
      if (seq::to_string(e.op) != p.at("old").get<std::string>()) mismatch(op, "op differs");
      const auto nu = seq::bool_op_from_string(p.at("new").get<std::string>());
      if (!nu) mismatch(op, "bad op literal");
      e.op = *nu;
      return;
    }
  }
}

EditOp invert_op(const EditOp& op) {
  EditOp inv = op;
  if (op.kind == EditKind::AddSe) inv.kind = EditKind::DeleteSe;
  if (op.kind == EditKind::DeleteSe) inv.kind = EditKind::AddSe;
  inv.params.erase("old");
  inv.params.erase("new");
  if (op.params.contains("new")) inv.params["old"] = op.params["new"];
  if (op.params.contains("old")) inv.params["new"] = op.params["old"];
  if (op.kind == EditKind::ReplacePrimitive) {
    inv.params["old_primitive"] = op.params.value("new_primitive", "");
    inv.params["new_primitive"] = op.params.value("old_primitive", "");
  }
  return inv;
}

bool mergeable(EditKind k) {
  return k != EditKind::AddSe && k != EditKind::DeleteSe;
}

}  // namespace

CadModel apply_edit(const CadModel& model, const EditRecord& record) {
  CadModel out = model;
  try {
    for (const EditOp& op : record.ops) apply_op(out, op);
  } catch (const json::exception& e) {
    throw Error(Errc::EditMismatch, std::string("malformed edit params: ") + e.what());
  }
  return out;
}

EditRecord invert(const EditRecord& record) {
  EditRecord out;
  for (auto it = record.ops.rbegin(); it != record.ops.rend(); ++it) out.ops.push_back(invert_op(*it));
  return out;
}

EditRecord compose(const EditRecord& first, const EditRecord& second) {
  EditRecord out;
  auto push = [&](const EditOp& op) {
    if (!out.ops.empty()) {
      EditOp& last = out.ops.back();
      if (last.kind == op.kind && last.target == op.target && mergeable(op.kind)) {
        last.params["new"] = op.params["new"];
        if (op.kind == EditKind::ReplacePrimitive) {
          last.params["new_primitive"] = op.params.value("new_primitive", "");
        }
        if (last.params["old"] == last.params["new"]) out.ops.pop_back();
        return;
      }
    }
    out.ops.push_back(op);
  };
  for (const EditOp& op : first.ops) push(op);
  for (const EditOp& op : second.ops) push(op);
  return out;
}

EditRecord change_extrude_dist(const CadModel& model, std::size_t se, Quant new_value) {
  const seq::SePair& s = model.ses.at(se);
  return {{{EditKind::ChangeExtrudeDist, se_path(se) + ".extrusion.dist_pos",
            {{"old", s.extrusion.dist_pos}, {"new", new_value}, {"primitive", primitive_class(s)}}}}};
}

EditRecord delete_se(const CadModel& model, std::size_t se) {
  const seq::SePair& s = model.ses.at(se);
  return {{{EditKind::DeleteSe, se_path(se),
            {{"old", seq::serialize_se(s)}, {"primitive", primitive_class(s)}}}}};
}

namespace {

bool in_range(int v) { return v >= 0 && v <= seq::kQuantMax; }

struct LoopRef {
  std::size_t se, face, loop;
};

std::vector<LoopRef> all_loops(const CadModel& m) {
  std::vector<LoopRef> out;
  for (std::size_t s = 0; s < m.ses.size(); ++s) {
    for (std::size_t f = 0; f < m.ses[s].sketch.faces.size(); ++f) {
      for (std::size_t l = 0; l < m.ses[s].sketch.faces[f].loops.size(); ++l) out.push_back({s, f, l});
    }
  }
  return out;
}

std::optional<seq::Loop> scaled_loop(const seq::Loop& loop, int jitter) {
  if (const auto* c = std::get_if<seq::Circle>(&loop.curves.front())) {
    const int r = c->r + jitter / 2;
    if (r < 4 || !in_range(r)) return std::nullopt;
    return circle_loop(c->cx, c->cy, r);
  }
  double x0 = 1e9, y0 = 1e9, x1 = -1e9, y1 = -1e9;
  auto box = [&](int x, int y) {
    x0 = std::min<double>(x0, x);
    y0 = std::min<double>(y0, y);
    x1 = std::max<double>(x1, x);
    y1 = std::max<double>(y1, y);
  };
  for (const seq::Curve& c : loop.curves) {
    if (const auto* l = std::get_if<seq::Line>(&c)) box(l->x, l->y);
    if (const auto* a = std::get_if<seq::Arc>(&c)) {
      box(a->x, a->y);
      box(a->mx, a->my);
    }
  }
  const double size = std::max(x1 - x0, y1 - y0);
  if (size + jitter < 8) return std::nullopt;
  const double f = (size + jitter) / size;
  const double cx = 0.5 * (x0 + x1), cy = 0.5 * (y0 + y1);
  bool ok = true;
  auto sx = [&](int x) {
    const int v = static_cast<int>(std::lround(cx + (x - cx) * f));
    ok = ok && in_range(v);
    return v;
  };
  auto sy = [&](int y) {
    const int v = static_cast<int>(std::lround(cy + (y - cy) * f));
    ok = ok && in_range(v);
    return v;
  };
  seq::Loop out;
  for (const seq::Curve& c : loop.curves) {
    if (const auto* l = std::get_if<seq::Line>(&c)) {
      out.curves.push_back(seq::Line{sx(l->x), sy(l->y)});
    } else if (const auto* a = std::get_if<seq::Arc>(&c)) {
      out.curves.push_back(seq::Arc{sx(a->x), sy(a->y), sx(a->mx), sy(a->my)});
    }
  }
  if (!ok) return std::nullopt;
  return out;
}

seq::Loop replacement_loop(const seq::Loop& loop) {
  if (const auto* c = std::get_if<seq::Circle>(&loop.curves.front())) {
    return rect_loop(std::max(0, c->cx - c->r), std::max(0, c->cy - c->r),
                     std::min(255, c->cx + c->r), std::min(255, c->cy + c->r));
  }
  int x0 = 255, y0 = 255, x1 = 0, y1 = 0;
  for (const seq::Curve& c : loop.curves) {
    auto add = [&](int x, int y) {
      x0 = std::min(x0, x);
      y0 = std::min(y0, y);
      x1 = std::max(x1, x);
      y1 = std::max(y1, y);
    };
    if (const auto* l = std::get_if<seq::Line>(&c)) add(l->x, l->y);
    if (const auto* a = std::get_if<seq::Arc>(&c)) add(a->x, a->y);
  }
  return circle_loop((x0 + x1) / 2, (y0 + y1) / 2, std::max(1, std::min(x1 - x0, y1 - y0) / 2));
}

// One random attempt at an edit of the given kind; nullopt if not applicable.
std::optional<EditOp> propose(const CadModel& m, EditKind kind, Rng& rng, const PerturbConfig& cfg) {
  const std::size_t n = m.ses.size();
  switch (kind) {
    case EditKind::AddSe: {
      if (cfg.validation.max_se && n >= *cfg.validation.max_se) return std::nullopt;
      const seq::SePair se = random_feature(m, rng);
      return EditOp{kind, se_path(n), {{"new", seq::serialize_se(se)}, {"primitive", primitive_class(se)}}};
    }
    case EditKind::DeleteSe: {
      if (n < 2) return std::nullopt;
      return delete_se(m, static_cast<std::size_t>(uniform_int(rng, 1, static_cast<int>(n) - 1))).ops.front();
    }
    case EditKind::ReplacePrimitive: {
      const std::size_t s = static_cast<std::size_t>(uniform_int(rng, 0, static_cast<int>(n) - 1));
      const seq::SePair& se = m.ses[s];
      const seq::Loop& old = se.sketch.faces.front().loops.front();
      seq::SePair replaced = se;
      replaced.sketch.faces.front().loops.front() = replacement_loop(old);
      return EditOp{kind, loop_path(s, 0, 0),
                    {{"old", seq::serialize_loop(old)},
                     {"new", seq::serialize_loop(replaced.sketch.faces.front().loops.front())},
                     {"old_primitive", primitive_class(se)},
                     {"new_primitive", primitive_class(replaced)}}};
    }
    case EditKind::ScaleLoop: {
      const auto loops = all_loops(m);
      const LoopRef ref = pick(rng, loops);
      const seq::SePair& se = m.ses[ref.se];
      const seq::Loop& old = se.sketch.faces[ref.face].loops[ref.loop];
      const auto scaled = scaled_loop(old, pick(rng, std::vector<int>(std::begin(kJitters), std::end(kJitters))));
      if (!scaled) return std::nullopt;
      return EditOp{kind, loop_path(ref.se, ref.face, ref.loop),
                    {{"old", seq::serialize_loop(old)},
                     {"new", seq::serialize_loop(*scaled)},
                     {"primitive", primitive_class(se)}}};
    }
    case EditKind::TranslateSketch: {
      if (n < 2) return std::nullopt;
      const std::size_t s = static_cast<std::size_t>(uniform_int(rng, 1, static_cast<int>(n) - 1));
      const seq::Extrusion& e = m.ses[s].extrusion;
      std::vector<int> old{e.origin_x, e.origin_y, e.origin_z};
      std::vector<int> nu = old;
      const int axis = uniform_int(rng, 0, 2);
      nu[axis] += pick(rng, std::vector<int>(std::begin(kJitters), std::end(kJitters)));
      if (!in_range(nu[axis])) return std::nullopt;
      return EditOp{kind, se_path(s) + ".extrusion.origin",
                    {{"old", old}, {"new", nu}, {"primitive", primitive_class(m.ses[s])}}};
    }
    case EditKind::ChangeExtrudeDist: {
      const std::size_t s = static_cast<std::size_t>(uniform_int(rng, 0, static_cast<int>(n) - 1));
      const int old = m.ses[s].extrusion.dist_pos;
      const int nu = old + pick(rng, std::vector<int>(std::begin(kJitters), std::end(kJitters)));
      if (!in_range(nu) || std::abs(nu - 128) < 8) return std::nullopt;
      return change_extrude_dist(m, s, nu).ops.front();
    }
    case EditKind::ChangeBoolOp: {
      if (n < 2) return std::nullopt;
      const std::size_t s = static_cast<std::size_t>(uniform_int(rng, 1, static_cast<int>(n) - 1));
      const seq::BoolOp old = m.ses[s].extrusion.op;
      std::vector<seq::BoolOp> choices;
      for (seq::BoolOp o : {seq::BoolOp::Join, seq::BoolOp::Cut, seq::BoolOp::Intersect}) {
        if (o != old) choices.push_back(o);
      }
      return EditOp{kind, se_path(s) + ".extrusion.op",
                    {{"old", seq::to_string(old)},
                     {"new", seq::to_string(pick(rng, choices))},
                     {"primitive", primitive_class(m.ses[s])}}};
    }
  }
  return std::nullopt;
}

bool acceptable(const CadModel& orig, const CadModel& edited, const PerturbConfig& cfg) {
  if (edited == orig) return false;
  if (!seq::validate(edited, cfg.validation).is_valid) return false;
  try {
    geometry::assemble(edited);
  } catch (const Error&) {
    return false;
  }
  return true;
}

}  // namespace

std::pair<CadModel, EditRecord> perturb(const CadModel& model, std::uint64_t seed,
                                        std::optional<EditKind> kind, const PerturbConfig& config) {
  Rng rng(seed);
  std::vector<EditKind> kinds;
  if (kind) {
    kinds.push_back(*kind);
  } else {
    kinds.assign(std::begin(kAllEditKinds), std::end(kAllEditKinds));
    shuffle(rng, kinds);
  }
  for (EditKind k : kinds) {
    for (int attempt = 0; attempt < config.attempts_per_kind; ++attempt) {
      const auto op = propose(model, k, rng, config);
      if (!op) continue;
      EditRecord record{{*op}};
      CadModel edited = apply_edit(model, record);
      if (acceptable(model, edited, config)) return {std::move(edited), std::move(record)};
    }
  }
  throw Error(Errc::NoApplicableEdit, "no applicable edit for this model");
}

}  // namespace cadedit::variation
