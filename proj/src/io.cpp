#include "hypbill/io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace hypb {

namespace {

Json vec2_json(const Vec2& v) { return Json::array({v.x(), v.y()}); }

Json word_json(const BounceWord& w) { return format_word(w); }

Json mat_json(const Mat3& m) {
  Json rows = Json::array();
  for (int i = 0; i < 3; ++i) rows.push_back(Json::array({m(i, 0), m(i, 1), m(i, 2)}));
  return rows;
}

Json vec3_json(const Vec3& v) { return Json::array({v.x(), v.y(), v.z()}); }

const Json& require(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw InputError(std::string("missing field \"") + key + "\"");
  return j.at(key);
}

int as_int(const Json& j, const char* what) {
  if (!j.is_number_integer()) throw InputError(std::string(what) + " must be an integer");
  return j.get<int>();
}

}  // namespace

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path);
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw InputError(path + ": " + e.what());
  }
}

RationalAngle angle_from_json(const Json& j) {
  if (j.is_array()) {
    if (j.size() != 2 || !j[0].is_number_integer() || !j[1].is_number_integer()) {
      throw InputError("angle must be [p, q] with integers");
    }
    long p = j[0].get<long>(), q = j[1].get<long>();
    if (p <= 0 || q <= 0) throw InputError("angle [p, q] needs p, q > 0");
    return RationalAngle::fraction(p, q);
  }
  if (j.is_number()) return RationalAngle::radians(j.get<double>());
  throw InputError("angle must be [p, q], a number, \"irrational\" or null");
}

Json angle_to_json(const RationalAngle& a) {
  if (a.declared()) return Json::array({a.declared()->first, a.declared()->second});
  if (a.declared_irrational()) return "irrational";
  return a.value();
}

LabeledPolygon polygon_from_json(const Json& j) {
  std::string model = j.is_object() && j.contains("model") ? j["model"].get<std::string>() : "klein";
  if (model != "klein" && model != "poincare") throw InputError("model must be \"klein\" or \"poincare\"");
  const Json& vs = require(j, "vertices");
  if (!vs.is_array() || vs.size() < 3) throw InputError("vertices must be an array of at least 3 points");
  std::vector<HPoint> pts;
  for (const auto& v : vs) {
    if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number()) {
      throw InputError("vertex must be [u, v]");
    }
    Vec2 w(v[0].get<double>(), v[1].get<double>());
    if (!(w.squaredNorm() < 1.0)) throw InputError("vertex outside the open unit disk");
    pts.push_back(model == "klein" ? HPoint::from_klein(w) : HPoint::from_poincare(w));
  }
  std::vector<RationalAngle> angles;
  if (j.contains("angles") && !j["angles"].is_null()) {
    const Json& as = j["angles"];
    if (!as.is_array() || as.size() != vs.size()) throw InputError("angles must have one entry per vertex");
    // Missing entries fall back to the measured angle.
    std::vector<bool> given;
    for (const auto& a : as) {
      given.push_back(!a.is_null());
      angles.push_back(a.is_null() ? RationalAngle() : a.is_string() ? RationalAngle() : angle_from_json(a));
    }
    LabeledPolygon measured(pts);
    for (size_t i = 0; i < angles.size(); ++i) {
      if (as[i].is_string()) {
        if (as[i].get<std::string>() != "irrational") throw InputError("unknown angle tag " + as[i].dump());
        angles[i] = RationalAngle::irrational(measured.measured_angle(static_cast<int>(i)));
      } else if (!given[i]) {
        angles[i] = RationalAngle::radians(measured.measured_angle(static_cast<int>(i)));
      }
    }
  }
  ValidationReport rep = validate_vertices(pts, angles);
  if (!rep.ok()) {
    std::string msg = "invalid polygon";
    for (const auto& f : rep.failures) msg += "; " + f;
    throw InputError(msg);
  }
  return LabeledPolygon(std::move(pts), std::move(angles));
}

Json polygon_to_json(const LabeledPolygon& poly, const std::string& model, const std::string& name) {
  Json j;
  j["model"] = model;
  if (!name.empty()) j["name"] = name;
  Json vs = Json::array();
  for (const auto& v : poly.vertices()) vs.push_back(vec2_json(model == "poincare" ? to_poincare(v) : to_klein(v)));
  j["vertices"] = vs;
  Json as = Json::array();
  for (const auto& a : poly.angles()) as.push_back(angle_to_json(a));
  j["angles"] = as;
  return j;
}

LabeledPolygon load_polygon(const std::string& path) { return polygon_from_json(read_json_file(path)); }

Json point_json(const HPoint& p) { return vec2_json(to_klein(p)); }

Json trajectory_to_json(const Trajectory& t) {
  Json j;
  j["start"] = point_json(t.start);
  j["word"] = word_json(bounce_word(t));
  j["vertex_hit"] = t.vertex_hit;
  if (t.vertex_hit) j["vertex_hit_step"] = t.vertex_hit_step;
  Json ev = Json::array();
  for (const auto& e : t.events) {
    Json x;
    x["side"] = e.side_label;
    x["point"] = point_json(e.hit_point);
    x["arc_param"] = e.arc_param;
    x["time"] = e.time;
    ev.push_back(x);
  }
  j["events"] = ev;
  j["end"] = point_json(t.end_point);
  return j;
}

Json realizability_to_json(const Realizability& r) {
  Json j;
  j["result"] = to_string(r.verdict);
  j["reason"] = r.reason;
  if (r.verdict == Verdict::Grazing) j["margin"] = r.margin;
  if (r.witness) {
    j["margin"] = r.witness->margin;
    Json w;
    w["chord"] = {{"a", vec2_json(r.witness->chord.a)}, {"b", vec2_json(r.witness->chord.b)}};
    w["params"] = r.witness->crossing_params;
    w["chart"] = r.witness->chart;
    j["witness"] = w;
  }
  return j;
}

Json diagonal_to_json(const DiagonalResult& d) {
  Json j;
  j["result"] = d.found ? "yes" : "no";
  if (!d.reason.empty()) j["reason"] = d.reason;
  if (d.found) {
    j["from_vertex"] = d.from_vertex + 1;
    j["to_vertex"] = d.to_vertex + 1;
    j["chord"] = {{"a", vec2_json(d.chord.a)}, {"b", vec2_json(d.chord.b)}};
    j["margin"] = d.margin;
  }
  return j;
}

Json enumeration_to_json(const DiagonalEnumeration& e) {
  Json j;
  j["count"] = e.words.size();
  j["nodes"] = e.nodes;
  Json ws = Json::array();
  for (const auto& w : e.words) ws.push_back(word_json(w));
  j["words"] = ws;
  return j;
}

Json tiling_to_json(const TilingResult& t) {
  Json j;
  j["status"] = to_string(t.status);
  j["depth"] = t.depth;
  j["elements"] = t.elements;
  j["lines"] = t.lines.size();
  if (t.status == TilingResult::Status::Discrete) {
    Json tile = Json::array();
    for (const auto& p : t.tile) tile.push_back(point_json(p));
    j["tile"] = tile;
    j["tile_angles"] = t.tile_k;
    j["triangle"] = t.triangle;
    j["tiles_in_polygon"] = t.tiles_in_P;
    j["even_at_vertices"] = t.even_at_vertices;
    j["invariants_ok"] = t.invariants_ok;
    if (!t.invariant_failures.empty()) j["invariant_failures"] = t.invariant_failures;
  }
  if (t.witness) {
    Json w;
    w["kind"] = t.witness->kind;
    w["value"] = t.witness->value;
    Json ls = Json::array();
    for (const auto& l : t.witness->lines) ls.push_back(vec3_json(l));
    w["lines"] = ls;
    if (t.witness->element) w["element"] = mat_json(*t.witness->element);
    if (t.witness->angle_index >= 0) w["angle"] = t.witness->angle_index + 1;
    j["witness"] = w;
  }
  return j;
}

Json verdict_to_json(const RigidityVerdict& v) {
  Json j;
  j["verdict"] = to_string(v.kind);
  j["reason"] = v.reason;
  if (v.kind == RigidityVerdict::Kind::Flexible) j["deformation_dim"] = v.deformation_dim;
  return j;
}

Json grammar_to_json(const GrammarResult& g) {
  Json j;
  j["admissible"] = g.admissible;
  if (!g.admissible) {
    j["position"] = g.position;
    j["rule"] = g.rule;
  }
  return j;
}

Json comparison_to_json(const ComparisonReport& r) {
  auto side = [](const SideStats& s) {
    return Json{{"tested", s.tested},
                {"mutual", s.mutual},
                {"one_sided", s.one_sided},
                {"grazing_discards", s.grazing_discards},
                {"vertex_hit_discards", s.vertex_hit_discards},
                {"unsampled", s.unsampled}};
  };
  Json j;
  j["config"] = {{"samples", r.config.samples},
                 {"word_len", r.config.word_len},
                 {"seed", r.config.seed},
                 {"diagonal_len", r.config.diagonal_len},
                 {"stop_at_first", r.config.stop_at_first}};
  j["from_p1"] = side(r.from_p1);
  j["from_p2"] = side(r.from_p2);
  j["one_sided"] = r.one_sided_total();
  if (r.first_distinguishing) {
    j["first_distinguishing"] = {{"word", word_json(*r.first_distinguishing)}, {"from", r.distinguishing_from}};
  } else {
    j["first_distinguishing"] = nullptr;
  }
  if (r.diagonals_compared) {
    Json only1 = Json::array(), only2 = Json::array();
    for (const auto& w : r.diagonals_only_p1) only1.push_back(word_json(w));
    for (const auto& w : r.diagonals_only_p2) only2.push_back(word_json(w));
    j["diagonals"] = {{"equal", r.diagonals_equal},
                      {"count_p1", r.diagonals_p1},
                      {"count_p2", r.diagonals_p2},
                      {"only_p1", only1},
                      {"only_p2", only2}};
  }
  return j;
}

Json validation_to_json(const ValidationReport& v) {
  Json j;
  j["ok"] = v.ok();
  j["simple"] = v.simple;
  j["counterclockwise"] = v.counterclockwise;
  j["angle_sum"] = v.angle_sum;
  j["angle_consistency"] = v.angle_consistency;
  j["failures"] = v.failures;
  return j;
}

std::string rational_string(const Rational& r) {
  std::ostringstream os;
  os << r.numerator();
  if (r.denominator() != 1) os << '/' << r.denominator();
  return os.str();
}

PiAngle pi_angle_from_json(const Json& j) {
  if (j.is_array()) {
    if (j.size() != 2 || !j[0].is_number_integer() || !j[1].is_number_integer()) {
      throw InputError("cone angle must be [p, q] with integers");
    }
    try {
      return PiAngle::fraction(j[0].get<long long>(), j[1].get<long long>());
    } catch (const InvalidData& e) {
      throw InputError(e.what());
    }
  }
  if (j.is_number()) return PiAngle::numeric(j.get<double>());
  throw InputError("cone angle must be [p, q] or radians");
}

ConeSurfaceData cone_surface_from_json(const Json& j) {
  ConeSurfaceData d;
  d.genus = as_int(require(j, "genus"), "genus");
  const Json& as = require(j, "cone_angles");
  if (!as.is_array()) throw InputError("cone_angles must be an array");
  for (const auto& a : as) d.cone_angles.push_back(pi_angle_from_json(a));
  return d;
}

OrbifoldSignature orbifold_from_json(const Json& j) {
  OrbifoldSignature s;
  s.genus = as_int(require(j, "genus"), "genus");
  const Json& os = require(j, "orders");
  if (!os.is_array()) throw InputError("orders must be an array");
  for (const auto& o : os) {
    int b = as_int(o, "order");
    if (b < 2) throw InputError("orders must be at least 2");
    s.orders.push_back(b);
  }
  return s;
}

BranchedCoverData cover_from_json(const Json& j) {
  BranchedCoverData c;
  c.surface = cone_surface_from_json(require(j, "surface"));
  c.orbifold = orbifold_from_json(require(j, "orbifold"));
  c.degree = as_int(require(j, "degree"), "degree");
  const Json& fs = require(j, "fibres");
  if (!fs.is_array()) throw InputError("fibres must be an array");
  for (const auto& f : fs) {
    CoverFibre fib;
    fib.orbifold_point = as_int(require(f, "point"), "point") - 1;
    for (const auto& p : require(f, "preimages")) {
      CoverPreimage pre;
      pre.local_degree = as_int(require(p, "local_degree"), "local_degree");
      if (p.contains("cone") && !p["cone"].is_null()) pre.cone_index = as_int(p["cone"], "cone") - 1;
      fib.preimages.push_back(pre);
    }
    c.fibres.push_back(fib);
  }
  return c;
}

Json cone_surface_to_json(const ConeSurfaceData& d) {
  Json j;
  j["genus"] = d.genus;
  Json as = Json::array();
  for (const auto& a : d.cone_angles) {
    if (a.multiple) {
      as.push_back(Json::array({a.multiple->numerator(), a.multiple->denominator()}));
    } else {
      as.push_back(a.radians);
    }
  }
  j["cone_angles"] = as;
  return j;
}

Json cover_report_to_json(const CoverReport& r) {
  Json j;
  j["valid"] = r.valid;
  j["failures"] = r.failures;
  j["surface_area"] = r.surface_area;
  j["orbifold_area"] = r.orbifold_area;
  return j;
}

Json bound_to_json(const BoundReport& b) {
  Json j;
  j["k"] = b.k;
  j["r"] = b.r;
  j["genus"] = b.genus;
  j["bound"] = b.bound;
  j["rhs"] = b.rhs;
  j["holds"] = b.holds;
  j["rhs_within_bound"] = b.rhs_within_bound;
  return j;
}

}  // namespace hypb
