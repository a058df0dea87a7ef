// hypb: command-line front end. Reports go to stdout as one JSON document,
// human summaries to stderr.
#include "hypbill/io.hpp"
#include "hypbill/svg.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <iostream>

using namespace hypb;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInput = 1;
constexpr int kExitUndecided = 2;

int emit(const Json& j, int code = kExitOk) {
  std::cout << j.dump(2) << "\n";
  return code;
}

int emit_error(const std::string& kind, const std::string& message) {
  return emit(Json{{"error", {{"kind", kind}, {"message", message}}}}, kExitInput);
}

std::vector<double> parse_doubles(const std::string& s) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(tok, &used));
      if (used != tok.size()) throw std::invalid_argument(tok);
    } catch (const std::exception&) {
      throw InputError("not a number: \"" + tok + "\"");
    }
  }
  return out;
}

std::vector<int> parse_ints(const std::string& s) {
  std::vector<int> out;
  for (double d : parse_doubles(s)) {
    if (d != std::floor(d)) throw InputError("not an integer: " + std::to_string(d));
    out.push_back(static_cast<int>(d));
  }
  return out;
}

// "p/q" as a multiple of pi, or a bare number of radians.
RationalAngle parse_angle(const std::string& s) {
  auto slash = s.find('/');
  try {
    if (slash == std::string::npos) return RationalAngle::radians(std::stod(s));
    long p = std::stol(s.substr(0, slash)), q = std::stol(s.substr(slash + 1));
    if (p <= 0 || q <= 0) throw InputError("angle p/q needs p, q > 0");
    return RationalAngle::fraction(p, q);
  } catch (const std::logic_error&) {
    throw InputError("bad angle \"" + s + "\"");
  }
}

std::vector<RationalAngle> parse_angles(const std::string& s) {
  std::vector<RationalAngle> out;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) out.push_back(parse_angle(tok));
  return out;
}

BounceWord word_arg(const std::string& s) {
  try {
    return parse_word(s);
  } catch (const std::exception& e) {
    throw InputError(std::string("bad word: ") + e.what());
  }
}

std::uint64_t resolve_seed(const std::optional<std::uint64_t>& flag) {
  if (flag) return *flag;
  if (const char* env = std::getenv("HYPB_SEED")) {
    try {
      return std::stoull(env);
    } catch (const std::exception&) {
      throw InputError("HYPB_SEED is not an unsigned integer");
    }
  }
  return 1;
}

HPoint start_point(const std::string& s, const std::string& model) {
  auto v = parse_doubles(s);
  if (v.size() != 2) throw InputError("--start needs u,v");
  Vec2 w(v[0], v[1]);
  if (!(w.squaredNorm() < 1.0)) throw InputError("start point outside the disk");
  return model == "poincare" ? HPoint::from_poincare(w) : HPoint::from_klein(w);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Hyperbolic polygonal billiards"};
  app.require_subcommand(1);

  std::string poly_file, word_str, svg_out, p1_file, p2_file, data_file, model = "klein";
  std::optional<std::uint64_t> seed;

  // polygon
  auto* polygon = app.add_subcommand("polygon", "Polygon construction and checks");
  polygon->require_subcommand(1);
  auto* p_validate = polygon->add_subcommand("validate", "Validate a polygon file");
  p_validate->add_option("--polygon", poly_file)->required();
  auto* p_area = polygon->add_subcommand("area", "Area from the angle defect");
  p_area->add_option("--polygon", poly_file)->required();
  int reg_n = 0;
  std::string reg_angle, out_model = "klein";
  auto* p_regular = polygon->add_subcommand("regular", "Regular polygon");
  p_regular->add_option("--n", reg_n)->required();
  p_regular->add_option("--angle", reg_angle, "p/q (times pi) or radians")->required();
  p_regular->add_option("--model", out_model)->check(CLI::IsMember({"klein", "poincare"}));
  std::string def_angles, def_lengths, def_sides;
  auto* p_deform = polygon->add_subcommand("deform", "Solve the closure condition");
  p_deform->add_option("--angles", def_angles, "comma list of p/q or radians")->required();
  p_deform->add_option("--lengths", def_lengths, "free side lengths")->required();
  p_deform->add_option("--free-sides", def_sides, "1-based labels (default 1..n-3)");
  p_deform->add_option("--model", out_model)->check(CLI::IsMember({"klein", "poincare"}));

  // billiards
  std::string start_str;
  double dir = 0.0;
  int bounces = 20;
  auto* simulate_cmd = app.add_subcommand("simulate", "Simulate a billiard trajectory");
  simulate_cmd->add_option("--polygon", poly_file)->required();
  simulate_cmd->add_option("--start", start_str, "u,v in the chosen model")->required();
  simulate_cmd->add_option("--dir", dir, "direction angle at the start point")->required();
  simulate_cmd->add_option("--bounces", bounces)->check(CLI::NonNegativeNumber);
  simulate_cmd->add_option("--model", model)->check(CLI::IsMember({"klein", "poincare"}));
  simulate_cmd->add_option("--svg", svg_out);

  // unfolding
  auto* realize_cmd = app.add_subcommand("realize", "Is the word a billiard bounce sequence?");
  realize_cmd->add_option("--polygon", poly_file)->required();
  realize_cmd->add_option("--word", word_str)->required();
  realize_cmd->add_option("--svg", svg_out);
  auto* diagonal_cmd = app.add_subcommand("diagonal", "Vertex-to-vertex trajectory with this word");
  diagonal_cmd->add_option("--polygon", poly_file)->required();
  diagonal_cmd->add_option("--word", word_str)->required();
  int max_len = 6;
  long node_budget = 400000;
  auto* diagonals_cmd = app.add_subcommand("diagonals", "Enumerate generalized diagonal words");
  diagonals_cmd->add_option("--polygon", poly_file)->required();
  diagonals_cmd->add_option("--max-len", max_len)->check(CLI::Range(0, kMaxDiagonalLength));
  diagonals_cmd->add_option("--node-budget", node_budget);

  // rigidity
  TilingBudget budget;
  auto add_budget = [&](CLI::App* c) {
    c->add_option("--budget", budget.max_word_len, "closure word length");
    c->add_option("--max-elements", budget.max_elements);
    c->add_option("--region-margin", budget.region_margin);
  };
  auto* classify_cmd = app.add_subcommand("classify", "Billiard rigidity verdict");
  classify_cmd->add_option("--polygon", poly_file)->required();
  add_budget(classify_cmd);
  auto* tile_cmd = app.add_subcommand("tile", "Reflection tiling closure");
  tile_cmd->add_option("--polygon", poly_file)->required();
  tile_cmd->add_option("--svg", svg_out);
  add_budget(tile_cmd);
  auto* grammar_cmd = app.add_subcommand("grammar", "Grammar admissibility on a good polygon");
  grammar_cmd->add_option("--polygon", poly_file)->required();
  grammar_cmd->add_option("--word", word_str)->required();
  CompareConfig cmp;
  auto* compare_cmd = app.add_subcommand("compare", "Compare bounce spectra by sampling");
  compare_cmd->add_option("--p1", p1_file)->required();
  compare_cmd->add_option("--p2", p2_file)->required();
  compare_cmd->add_option("--samples", cmp.samples)->check(CLI::PositiveNumber);
  compare_cmd->add_option("--len", cmp.word_len)->check(CLI::PositiveNumber);
  compare_cmd->add_option("--seed", seed);
  compare_cmd->add_option("--diagonal-len", cmp.diagonal_len)->check(CLI::Range(0, kMaxDiagonalLength));
  compare_cmd->add_option("--threads", cmp.threads);
  compare_cmd->add_flag("--stop-at-first", cmp.stop_at_first);

  // cone accounting
  auto* cone = app.add_subcommand("cone", "Cone surfaces, orbifolds and covers");
  cone->require_subcommand(1);
  auto* c_area = cone->add_subcommand("area", "Area of a cone surface");
  c_area->add_option("--data", data_file)->required();
  auto* c_double = cone->add_subcommand("double", "Cone surface of a doubled polygon");
  c_double->add_option("--polygon", poly_file)->required();
  int orb_genus = 0;
  std::string orb_orders;
  auto* c_orb = cone->add_subcommand("orbifold-area", "Orbifold area from its signature");
  c_orb->add_option("--genus", orb_genus)->check(CLI::NonNegativeNumber);
  c_orb->add_option("--orders", orb_orders, "comma list")->required();
  auto* c_check = cone->add_subcommand("check-cover", "Validate branched cover data");
  c_check->add_option("--data", data_file)->required();
  auto* c_bound = cone->add_subcommand("bound", "Cone point bound for a cover");
  c_bound->add_option("--data", data_file)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return emit_error("bad_flags", e.what());
  }

  try {
    if (*p_validate) {
      Json j = read_json_file(poly_file);
      try {
        LabeledPolygon poly = polygon_from_json(j);
        return emit(validation_to_json(validate(poly)));
      } catch (const InputError& e) {
        return emit(Json{{"ok", false}, {"failures", {e.what()}}});
      }
    }
    if (*p_area) {
      LabeledPolygon poly = load_polygon(poly_file);
      return emit(Json{{"area", area(poly)}});
    }
    if (*p_regular) {
      return emit(polygon_to_json(build_regular(reg_n, parse_angle(reg_angle)), out_model));
    }
    if (*p_deform) {
      DeformationParams params;
      params.target_angles = parse_angles(def_angles);
      params.free_lengths = parse_doubles(def_lengths);
      if (!def_sides.empty()) {
        for (int s : parse_ints(def_sides)) params.free_sides.push_back(s - 1);
      }
      ClosureInfo info;
      LabeledPolygon poly = solve_closure(params, nullptr, &info);
      Json j = polygon_to_json(poly, out_model);
      j["closure"] = {{"iterations", info.iterations}, {"residual", info.residual}, {"lengths", info.lengths}};
      return emit(j);
    }
    if (*simulate_cmd) {
      LabeledPolygon poly = load_polygon(poly_file);
      HPoint p = start_point(start_str, model);
      Trajectory t = simulate(poly, p, tangent_at(p, dir), bounces);
      if (!svg_out.empty()) {
        PoincareSvg svg;
        svg.polygon(poly);
        svg.trajectory(t);
        svg.save(svg_out);
      }
      std::cerr << "word " << format_word(bounce_word(t)) << (t.vertex_hit ? " (vertex hit)" : "") << "\n";
      return emit(trajectory_to_json(t), t.vertex_hit ? kExitUndecided : kExitOk);
    }
    if (*realize_cmd) {
      LabeledPolygon poly = load_polygon(poly_file);
      BounceWord w = word_arg(word_str);
      Realizability r = realizable(poly, w);
      if (!svg_out.empty() && r.reason != "immediate_repeat") {
        PoincareSvg svg;
        Corridor c = unfold(poly, w);
        svg.polygon(poly, "#000", "#3498db");
        for (size_t k = 1; k < c.copies.size(); ++k) {
          for (int s = 0; s < poly.size(); ++s) {
            svg.segment(c.copies[k].apply(poly.vertex(s)), c.copies[k].apply(poly.vertex(s + 1)), "#2c3e50", 0.8);
          }
        }
        if (r.witness) {
          const auto& ch = r.witness->chord;
          if (ch.a != ch.b) {
            svg.segment(HPoint::from_klein(ch.a * 0.999999), HPoint::from_klein(ch.b * 0.999999), "#c0392b", 1.2);
          }
        }
        svg.save(svg_out);
      }
      std::cerr << to_string(r.verdict) << " (" << r.reason << ")\n";
      return emit(realizability_to_json(r), r.verdict == Verdict::Grazing ? kExitUndecided : kExitOk);
    }
    if (*diagonal_cmd) {
      LabeledPolygon poly = load_polygon(poly_file);
      return emit(diagonal_to_json(generalized_diagonal(poly, word_arg(word_str))));
    }
    if (*diagonals_cmd) {
      LabeledPolygon poly = load_polygon(poly_file);
      try {
        return emit(enumeration_to_json(enumerate_diagonals(poly, max_len, node_budget)));
      } catch (const BudgetExceeded& e) {
        return emit(Json{{"result", "budget_exceeded"}, {"message", e.what()}}, kExitUndecided);
      }
    }
    if (*classify_cmd) {
      LabeledPolygon poly = load_polygon(poly_file);
      RigidityVerdict v = classify(poly, budget);
      std::cerr << to_string(v.kind) << " (" << v.reason << ")\n";
      return emit(verdict_to_json(v), v.kind == RigidityVerdict::Kind::Unknown ? kExitUndecided : kExitOk);
    }
    if (*tile_cmd) {
      LabeledPolygon poly = load_polygon(poly_file);
      TilingResult t = tiling_closure(poly, budget);
      if (!svg_out.empty()) {
        PoincareSvg svg;
        for (const auto& l : t.lines) svg.line(HGeodesic(l), "#95a5a6", 0.6);
        svg.polygon(poly, "#000", "#3498db");
        if (t.status == TilingResult::Status::Discrete) {
          LabeledPolygon tile(t.tile);
          svg.polygon(tile, "#c0392b", "#e74c3c", false);
        }
        svg.save(svg_out);
      }
      return emit(tiling_to_json(t), t.status == TilingResult::Status::BudgetExhausted ? kExitUndecided : kExitOk);
    }
    if (*grammar_cmd) {
      LabeledPolygon poly = load_polygon(poly_file);
      GrammarSpec spec;
      try {
        spec = grammar_spec(poly);
      } catch (const GrammarUndefined& e) {
        return emit_error("grammar_undefined", e.what());
      }
      return emit(grammar_to_json(grammar_check(spec, word_arg(word_str))));
    }
    if (*compare_cmd) {
      LabeledPolygon p1 = load_polygon(p1_file);
      LabeledPolygon p2 = load_polygon(p2_file);
      cmp.seed = resolve_seed(seed);
      ComparisonReport r = compare(p1, p2, cmp);
      std::cerr << "one-sided words: " << r.one_sided_total() << "\n";
      return emit(comparison_to_json(r));
    }
    if (*c_area) {
      ConeSurfaceData d = cone_surface_from_json(read_json_file(data_file));
      Json j{{"area", cone_area(d)}};
      if (auto e = cone_area_over_pi(d)) j["area_over_pi"] = rational_string(*e);
      return emit(j);
    }
    if (*c_double) {
      LabeledPolygon poly = load_polygon(poly_file);
      ConeSurfaceData d = double_of(poly);
      Json j = cone_surface_to_json(d);
      j["area"] = cone_area(d);
      return emit(j);
    }
    if (*c_orb) {
      OrbifoldSignature sig;
      sig.genus = orb_genus;
      for (int b : parse_ints(orb_orders)) {
        if (b < 2) throw InputError("orders must be at least 2");
        sig.orders.push_back(b);
      }
      Rational a = orbifold_area_over_pi(sig);
      Json j{{"hyperbolic", a > 0}, {"area_over_pi", rational_string(a)}};
      if (a > 0) j["area"] = orbifold_area(sig);
      return emit(j);
    }
    if (*c_check) {
      CoverReport r = validate_cover(cover_from_json(read_json_file(data_file)));
      return emit(cover_report_to_json(r));
    }
    if (*c_bound) {
      return emit(bound_to_json(bound_check(cover_from_json(read_json_file(data_file)))));
    }
  } catch (const InputError& e) {
    return emit_error("input", e.what());
  } catch (const InvalidData& e) {
    return emit_error("invalid_data", e.what());
  } catch (const NoConvergence& e) {
    return emit_error("no_convergence", e.what());
  } catch (const GeometryError& e) {
    return emit_error("geometry", e.what());
  } catch (const std::exception& e) {
    return emit_error("internal", e.what());
  }
  return emit_error("bad_flags", "no command");
}
