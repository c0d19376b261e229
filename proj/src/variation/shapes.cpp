#include <algorithm>
#include <array>

#include "cadedit/error.hpp"
#include "cadedit/geometry.hpp"
#include "cadedit/variation.hpp"

namespace cadedit::variation {

using seq::Arc;
using seq::Circle;
using seq::Line;
using seq::Loop;
using seq::Quant;

seq::Loop rect_loop(Quant x0, Quant y0, Quant x1, Quant y1) {
  return Loop{{Line{x1, y0}, Line{x1, y1}, Line{x0, y1}, Line{x0, y0}}};
}

seq::Loop circle_loop(Quant cx, Quant cy, Quant r) { return Loop{{Circle{cx, cy, r}}}; }

namespace {

bool is_circle(const Loop& l) {
  return l.curves.size() == 1 && std::holds_alternative<Circle>(l.curves.front());
}

bool is_axis_rect(const Loop& l) {
  if (l.curves.size() != 4) return false;
  std::vector<Line> pts;
  for (const seq::Curve& c : l.curves) {
    const auto* line = std::get_if<Line>(&c);
    if (!line) return false;
    pts.push_back(*line);
  }
  for (std::size_t i = 0; i < 4; ++i) {
    const Line& a = pts[(i + 3) % 4];
    const Line& b = pts[i];
    if (a.x != b.x && a.y != b.y) return false;
    if (a.x == b.x && a.y == b.y) return false;
  }
  return true;
}

bool has_arc(const Loop& l) {
  return std::any_of(l.curves.begin(), l.curves.end(),
                     [](const seq::Curve& c) { return std::holds_alternative<Arc>(c); });
}

struct Box {
  int x0, y0, x1, y1;
};

Box loop_box(const Loop& l) {
  Box b{255, 255, 0, 0};
  auto add = [&](int x, int y) {
    b.x0 = std::min(b.x0, x);
    b.y0 = std::min(b.y0, y);
    b.x1 = std::max(b.x1, x);
    b.y1 = std::max(b.y1, y);
  };
  for (const seq::Curve& c : l.curves) {
    if (const auto* line = std::get_if<Line>(&c)) {
      add(line->x, line->y);
    } else if (const auto* arc = std::get_if<Arc>(&c)) {
      add(arc->x, arc->y);
      add(arc->mx, arc->my);
    } else {
      const auto& ci = std::get<Circle>(c);
      add(ci.cx - ci.r, ci.cy - ci.r);
      add(ci.cx + ci.r, ci.cy + ci.r);
    }
  }
  return b;
}

seq::Extrusion base_extrusion(Rng& rng) {
  static const std::vector<std::array<Quant, 3>> orientations = {
      {0, 128, 128}, {128, 128, 128}, {128, 192, 64}, {64, 160, 128}};
  const auto& o = pick(rng, orientations);
  seq::Extrusion e;
  e.theta = o[0];
  e.phi = o[1];
  e.gamma = o[2];
  e.scale = pick(rng, std::vector<Quant>{112, 128, 144});
  e.dist_pos = pick(rng, std::vector<Quant>{160, 176, 192, 208});
  e.dist_neg = 128;
  e.op = seq::BoolOp::New;
  e.extent = seq::Extent::One;
  return e;
}

seq::Sketch base_sketch(Rng& rng) {
  seq::Face face;
  switch (uniform_int(rng, 0, 6)) {
    case 0: {  // block
      const int x0 = uniform_int(rng, 40, 96), y0 = uniform_int(rng, 40, 96);
      const int x1 = uniform_int(rng, 160, 216), y1 = uniform_int(rng, 160, 216);
      face.loops.push_back(rect_loop(x0, y0, x1, y1));
      break;
    }
    case 1: {  // cylinder
      const int cx = uniform_int(rng, 120, 136), cy = uniform_int(rng, 120, 136);
      face.loops.push_back(circle_loop(cx, cy, uniform_int(rng, 48, 88)));
      break;
    }
    case 2: {  // plate with a hole
      const int x0 = uniform_int(rng, 40, 80), y0 = uniform_int(rng, 40, 80);
      const int x1 = uniform_int(rng, 176, 216), y1 = uniform_int(rng, 176, 216);
      const int r = uniform_int(rng, 16, std::min(x1 - x0, y1 - y0) / 2 - 20);
      face.loops.push_back(rect_loop(x0, y0, x1, y1));
      face.loops.push_back(circle_loop((x0 + x1) / 2, (y0 + y1) / 2, r));
      break;
    }
    case 3: {  // ring
      const int ro = uniform_int(rng, 56, 96);
      face.loops.push_back(circle_loop(128, 128, ro));
      face.loops.push_back(circle_loop(128, 128, uniform_int(rng, 16, ro - 24)));
      break;
    }
    case 4: {  // slot: straight sides with semicircular ends
      const int half = uniform_int(rng, 16, 36);
      const int x0 = uniform_int(rng, 64, 96), x1 = uniform_int(rng, 160, 192);
      const int y0 = 128 - half, y1 = 128 + half;
      face.loops.push_back(Loop{{Line{x1, y0}, Arc{x1, y1, x1 + half, 128}, Line{x0, y1},
                                 Arc{x0, y0, x0 - half, 128}}});
      break;
    }
    case 5: {  // wedge
      const int x0 = uniform_int(rng, 40, 80), y0 = uniform_int(rng, 40, 80);
      const int x1 = uniform_int(rng, 176, 216), y1 = uniform_int(rng, 176, 216);
      face.loops.push_back(Loop{{Line{x1, y0}, Line{x0, y1}, Line{x0, y0}}});
      break;
    }
    default: {  // L-shaped prism
      const int x0 = uniform_int(rng, 40, 72), y0 = uniform_int(rng, 40, 72);
      const int x1 = uniform_int(rng, 184, 216), y1 = uniform_int(rng, 184, 216);
      const int xm = uniform_int(rng, x0 + 40, x1 - 40), ym = uniform_int(rng, y0 + 40, y1 - 40);
      face.loops.push_back(Loop{{Line{x1, y0}, Line{x1, ym}, Line{xm, ym}, Line{xm, y1},
                                 Line{x0, y1}, Line{x0, y0}}});
      break;
    }
  }
  return seq::Sketch{{face}};
}

bool geometry_ok(const seq::CadModel& model) {
  try {
    geometry::assemble(model);
    return true;
  } catch (const Error&) {
    return false;
  }
}

}  // namespace

std::string primitive_class(const seq::SePair& se) {
  if (se.sketch.faces.size() != 1) return "profile";
  const seq::Face& face = se.sketch.faces.front();
  if (face.loops.empty()) return "profile";
  const Loop& outer = face.loops.front();
  const bool holes = face.loops.size() > 1;
  if (is_circle(outer)) return holes ? "ring" : "cylinder";
  if (is_axis_rect(outer)) return holes ? "plate" : "block";
  if (has_arc(outer)) return "slot";
  if (outer.curves.size() == 3) return "wedge";
  return "prism";
}

seq::SePair random_feature(const seq::CadModel& model, Rng& rng) {
  const seq::SePair& base = model.ses.front();
  const Box b = loop_box(base.sketch.faces.front().loops.front());
  const int w = b.x1 - b.x0, h = b.y1 - b.y0;
  const int cx = (b.x0 + b.x1) / 2 + uniform_int(rng, -w / 6, w / 6);
  const int cy = (b.y0 + b.y1) / 2 + uniform_int(rng, -h / 6, h / 6);
  const int span = std::max(8, std::min(w, h) / 4);

  seq::SePair se;
  se.extrusion = base.extrusion;
  const int base_height = base.extrusion.dist_pos;
  seq::Face face;
  switch (uniform_int(rng, 0, 2)) {
    case 0:  // cylindrical boss
      face.loops.push_back(circle_loop(cx, cy, uniform_int(rng, 8, std::max(9, span))));
      se.extrusion.op = seq::BoolOp::Join;
      se.extrusion.dist_pos = std::min(255, base_height + pick(rng, std::vector<int>{32, 48}));
      break;
    case 1: {  // rectangular boss
      const int hw = uniform_int(rng, 8, std::max(9, span)), hh = uniform_int(rng, 8, std::max(9, span));
      face.loops.push_back(rect_loop(cx - hw, cy - hh, cx + hw, cy + hh));
      se.extrusion.op = seq::BoolOp::Join;
      se.extrusion.dist_pos = std::min(255, base_height + pick(rng, std::vector<int>{32, 48}));
      break;
    }
    default:  // through hole
      face.loops.push_back(circle_loop(cx, cy, uniform_int(rng, 6, std::max(7, span * 3 / 4))));
      se.extrusion.op = seq::BoolOp::Cut;
      se.extrusion.extent = seq::Extent::Two;
      se.extrusion.dist_pos = std::min(255, base_height + 16);
      se.extrusion.dist_neg = 144;
      break;
  }
  se.sketch.faces.push_back(std::move(face));
  return se;
}

seq::CadModel generate_base_model(Rng& rng) {
  for (;;) {
    seq::CadModel model;
    model.ses.push_back({base_sketch(rng), base_extrusion(rng)});
    const int extra = pick(rng, std::vector<int>{0, 0, 1, 1, 2});
    for (int i = 0; i < extra; ++i) model.ses.push_back(random_feature(model, rng));
    if (seq::validate(model, seq::ValidationConfig::dataset()).is_valid && geometry_ok(model)) {
      return model;
    }
  }
}

}  // namespace cadedit::variation
