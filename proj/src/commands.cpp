#include "bezknot/commands.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>
#include <sstream>

#include "bezknot/errors.hpp"
#include "bezknot/fixtures.hpp"
#include "bezknot/io.hpp"
#include "bezknot/knot.hpp"

namespace bezknot::workbench {

namespace fs = std::filesystem;

namespace {

std::string fmt(const char* format, double a, double b = 0.0, double c = 0.0) {
  char buf[160];
  std::snprintf(buf, sizeof buf, format, a, b, c);
  return buf;
}

Check check(std::string name, bool passed, std::string detail) {
  return {std::move(name), passed, std::move(detail)};
}

json checks_json(const std::vector<Check>& checks) {
  json out = json::array();
  for (const auto& c : checks) {
    out.push_back({{"name", c.name}, {"passed", c.passed}, {"detail", c.detail}});
  }
  return out;
}

void print_checks(const ReproduceResult& r, std::ostream& log) {
  for (const auto& c : r.checks) {
    log << (c.passed ? "PASS " : "FAIL ") << r.case_name << "." << c.name << ": " << c.detail << "\n";
  }
}

std::string dump(const json& doc) { return doc.dump(2) + "\n"; }

json config_json(const selfx::GeneratorConfig& c) {
  return {{"degree", c.degree},
          {"restarts", c.restarts},
          {"seed", c.seed},
          {"eps_root", c.eps_root},
          {"eps_edge", c.eps_edge},
          {"min_parameter_separation", c.min_parameter_separation},
          {"constraint_mode", c.constraint_mode == selfx::ConstraintMode::reject ? "reject" : "penalty"},
          {"penalty_weight", c.penalty_weight},
          {"polish_rounds", c.polish_rounds},
          {"threads", c.threads},
          {"max_evals", c.simplex.max_evals},
          {"x_tolerance", c.simplex.x_tolerance},
          {"f_tolerance", c.simplex.f_tolerance}};
}

selfx::GeneratorConfig config_from_json(const json& j) {
  selfx::GeneratorConfig c;
  c.degree = j.at("degree").get<std::size_t>();
  c.restarts = j.at("restarts").get<std::size_t>();
  c.seed = j.at("seed").get<std::uint64_t>();
  c.eps_root = j.at("eps_root").get<double>();
  c.eps_edge = j.at("eps_edge").get<double>();
  c.min_parameter_separation = j.at("min_parameter_separation").get<double>();
  c.constraint_mode = j.at("constraint_mode").get<std::string>() == "penalty"
                          ? selfx::ConstraintMode::penalty
                          : selfx::ConstraintMode::reject;
  c.penalty_weight = j.at("penalty_weight").get<double>();
  c.polish_rounds = j.at("polish_rounds").get<std::size_t>();
  c.threads = j.at("threads").get<std::size_t>();
  c.simplex.max_evals = j.at("max_evals").get<std::size_t>();
  c.simplex.x_tolerance = j.at("x_tolerance").get<double>();
  c.simplex.f_tolerance = j.at("f_tolerance").get<double>();
  return c;
}

const char* check_name(VerifyCheck c) {
  switch (c) {
    case VerifyCheck::simple: return "simple";
    case VerifyCheck::selfx: return "selfx";
    case VerifyCheck::knot: return "knot";
    case VerifyCheck::pushes: return "pushes";
  }
  return "?";
}

std::string join_checks(const std::vector<VerifyCheck>& checks) {
  std::string out;
  for (auto c : checks) {
    if (!out.empty()) out += ",";
    out += check_name(c);
  }
  return out;
}

void write_with_manifest(const fs::path& out, const std::string& contents, const std::string& command,
                         const json& args, const std::map<std::string, std::string>& inputs) {
  io::write_text_file(out, contents);
  const auto manifest =
      make_manifest(command, args, inputs, {{out.string(), io::fnv1a_hex(contents)}});
  io::write_text_file(manifest_path_for(out), dump(manifest));
}

}  // namespace

bool ReproduceResult::ok() const {
  for (const auto& c : checks) {
    if (!c.passed) return false;
  }
  return !checks.empty();
}

const Check* ReproduceResult::find(const std::string& name) const {
  for (const auto& c : checks) {
    if (c.name == name) return &c;
  }
  return nullptr;
}

ReproduceResult reproduce_trefoil(const ControlPolygon& polygon) {
  ReproduceResult r;
  r.case_name = "trefoil";
  const BezierCurve curve(polygon);
  const auto reference = fixtures::trefoil_crossings();

  const auto pairs = knot::find_planar_self_intersections(project_xy(curve));
  r.checks.push_back(check("planar_pair_count", pairs.size() == reference.size(),
                           std::to_string(pairs.size()) + " pairs, expected 3"));
  json pair_json = json::array();
  for (const auto& p : pairs) pair_json.push_back(io::planar_intersection_to_json(p));
  for (std::size_t k = 0; k < reference.size(); ++k) {
    const auto& ref = reference[k];
    const std::string name = "pair_" + std::to_string(k + 1);
    if (k >= pairs.size()) {
      r.checks.push_back(check(name + "_parameters", false, "missing"));
      r.checks.push_back(check(name + "_gap", false, "missing"));
      continue;
    }
    const auto& p = pairs[k];
    const double err = std::max(std::abs(p.t_first - ref.t_first), std::abs(p.t_second - ref.t_second));
    r.checks.push_back(check(name + "_parameters", err <= 1e-3,
                             fmt("(%.6f, %.6f), max error %.2e <= 1e-3", p.t_first, p.t_second, err)));
    r.checks.push_back(check(name + "_gap", p.gap <= 5e-4, fmt("gap %.3e <= 5e-4", p.gap)));
  }

  // 3D points at the reference (rounded) parameters.
  json points_json = json::array();
  for (std::size_t k = 0; k < reference.size(); ++k) {
    const auto& ref = reference[k];
    const std::pair<double, Point3> sides[2] = {{ref.t_first, ref.point_first},
                                                {ref.t_second, ref.point_second}};
    for (int side = 0; side < 2; ++side) {
      const auto [t, expected] = sides[side];
      const Point3 got = curve.evaluate(t);
      const double err = std::max({std::abs(got.x - expected.x), std::abs(got.y - expected.y),
                                   std::abs(got.z - expected.z)});
      const std::string name = "point_t" + std::to_string(side == 0 ? k + 1 : k + 4);
      r.checks.push_back(check(name, err <= 1e-3,
                               fmt("C(%.4f) ", t) + fmt("= (%.4f, %.4f, %.4f)", got.x, got.y, got.z) +
                                   fmt(", max error %.2e <= 1e-3", err)));
      points_json.push_back({{"t", t}, {"point", io::point_to_json(got)}});
    }
  }

  knot::TrefoilVerdict verdict;
  try {
    const auto diagram = knot::classify_crossings(curve, pairs);
    verdict = knot::certify_trefoil(diagram);
    std::string word;
    for (auto s : diagram.sense_sequence) word += std::string(word.empty() ? "" : ",") + knot::to_string(s);
    r.checks.push_back(check("traversal_word", diagram.sense_sequence == fixtures::trefoil_word(), word));
  } catch (const AmbiguousCrossing& e) {
    verdict.reason = e.what();
    r.checks.push_back(check("traversal_word", false, e.what()));
  }
  r.checks.push_back(check("trefoil_certificate", verdict.accepted, verdict.reason));

  const double curvature = total_curvature(polygon);
  r.checks.push_back(check("polygon_total_curvature_above_4pi", curvature > 4.0 * std::numbers::pi,
                           fmt("%.4f > %.4f", curvature, 4.0 * std::numbers::pi)));

  knot::SimplicityResult simple;
  try {
    simple = knot::polygon_is_simple(polygon);
  } catch (const DegenerateInput& e) {
    simple.simple = false;
  }
  r.checks.push_back(check("polygon_simple", simple.simple, simple.simple ? "exact" : "edges intersect"));

  const knot::UnknotConfig unknot_config;
  const auto unknot = knot::verify_unknot_by_pushes(polygon, fixtures::trefoil_push_script(), unknot_config);
  r.checks.push_back(check("unknot_by_pushes", unknot.status == knot::UnknotStatus::certified,
                           std::string(knot::to_string(unknot.status)) + ": " + unknot.reason));
  const bool replayed = unknot.status == knot::UnknotStatus::certified &&
                        knot::replay_unknot_certificate(polygon, unknot, unknot_config);
  r.checks.push_back(check("unknot_replay", replayed, replayed ? "every push re-verified" : "not replayed"));

  r.report = {{"api", 1},
              {"case", "trefoil"},
              {"input_digest", io::polygon_digest(polygon)},
              {"polygon", io::polygon_to_json(polygon)},
              {"planar_pairs", pair_json},
              {"points_at_reference_parameters", points_json},
              {"reference_sign_corrected", fixtures::kTrefoilSignCorrected},
              {"push_script_reconstructed", fixtures::kPushScriptReconstructed},
              {"trefoil_certificate", io::trefoil_certificate_to_json(verdict, polygon)},
              {"simplicity_certificate", io::simplicity_certificate_to_json(simple, polygon)},
              {"unknot_certificate", io::unknot_certificate_to_json(unknot, polygon, unknot_config)},
              {"total_curvature", curvature},
              {"checks", checks_json(r.checks)}};
  r.report["passed"] = r.ok();
  return r;
}

ReproduceResult reproduce_equilateral(const ControlPolygon& polygon) {
  ReproduceResult r;
  r.case_name = "equilateral";
  const auto params = fixtures::equilateral_params();
  const auto edges = selfx::EdgeVectors::of(polygon);
  const Point3 S = selfx::eval_S(edges, params.s, params.t);
  const double residual = norm(S);
  r.checks.push_back(check("residual_S", residual >= 1e-5 && residual <= 5e-4,
                           fmt("|S(0.2969, 0.0633)| = %.4e, required in [1e-5, 5e-4]", residual)));

  const double F = selfx::closure_defect_F(params);
  const double ratio = F / fixtures::kEquilateralFvalue;
  r.checks.push_back(check("closure_defect_F", ratio >= 0.5 && ratio <= 2.0,
                           fmt("F = %.4e, reference %.4e, ratio %.3f", F, fixtures::kEquilateralFvalue, ratio)));

  knot::SimplicityResult simple;
  try {
    simple = knot::polygon_is_simple(polygon);
  } catch (const DegenerateInput&) {
    simple.simple = false;
  }
  r.checks.push_back(check("polygon_simple", simple.simple, simple.simple ? "exact" : "edges intersect"));

  const double spread = edges.edge_length_spread();
  r.checks.push_back(check("edges_unit", spread <= 1e-3, fmt("max ||q_i| - 1| = %.4e <= 1e-3", spread)));

  // Context for the report only; these do not gate the exit status.
  const auto rebuilt = fixtures::equilateral_polygon_from_params();
  const auto rebuilt_edges = selfx::EdgeVectors::of(rebuilt);
  const Point3 S_rebuilt = selfx::eval_S(rebuilt_edges, params.s, params.t);
  const auto nearest = selfx::find_self_intersection(polygon);
  json edge_lengths = json::array();
  for (const auto& q : edges.q) edge_lengths.push_back(norm(q));

  r.report = {{"api", 1},
              {"case", "equilateral"},
              {"input_digest", io::polygon_digest(polygon)},
              {"polygon", io::polygon_to_json(polygon)},
              {"s", params.s},
              {"t", params.t},
              {"S", io::point_to_json(S)},
              {"residual", residual},
              {"reference_S", fixtures::kEquilateralSvalue},
              {"closure_defect_F", F},
              {"edge_lengths", edge_lengths},
              {"simplicity_certificate", io::simplicity_certificate_to_json(simple, polygon)},
              {"polygon_from_angles",
               {{"polygon", io::polygon_to_json(rebuilt)},
                {"S", io::point_to_json(S_rebuilt)},
                {"residual", norm(S_rebuilt)},
                {"edge_length_spread", rebuilt_edges.edge_length_spread()}}},
              {"nearest_self_approach", nearest ? io::witness_to_json(*nearest) : json(nullptr)},
              {"checks", checks_json(r.checks)}};
  r.report["passed"] = r.ok();
  return r;
}

int cmd_reproduce(const std::string& case_name, const std::optional<fs::path>& fixture,
                  const fs::path& out_dir, std::ostream& log) {
  if (case_name != "trefoil" && case_name != "equilateral") {
    log << "error: unknown case '" << case_name << "' (trefoil|equilateral)\n";
    return kExitInputError;
  }
  std::optional<ControlPolygon> polygon;
  std::map<std::string, std::string> inputs;
  try {
    if (fixture) {
      polygon = io::read_polygon_file(*fixture);
      inputs[fixture->string()] = io::fnv1a_hex(io::read_text_file(*fixture));
    } else {
      polygon = fixtures::by_name(case_name);
    }
  } catch (const ParseError& e) {
    log << "error: " << e.what() << "\n";
    return kExitInputError;
  }
  const auto result =
      case_name == "trefoil" ? reproduce_trefoil(*polygon) : reproduce_equilateral(*polygon);
  print_checks(result, log);
  const fs::path out = out_dir / (case_name + "-report.json");
  json args = {{"case", case_name}, {"out_dir", out_dir.string()}};
  if (fixture) args["fixture"] = fixture->string();
  write_with_manifest(out, dump(result.report), "reproduce", args, inputs);
  log << (result.ok() ? "reproduce " + case_name + ": all checks passed\n"
                      : "reproduce " + case_name + ": FAILED\n");
  return result.ok() ? kExitOk : kExitCheckFailed;
}

std::string render_generate(const selfx::GeneratorConfig& config) {
  return dump(io::generator_outcome_to_json(selfx::generate_counterexample(config)));
}

int cmd_generate(const selfx::GeneratorConfig& config, const fs::path& out, std::ostream& log) {
  try {
    config.validate();
  } catch (const std::exception& e) {
    log << "error: " << e.what() << "\n";
    return kExitInputError;
  }
  const std::string contents = render_generate(config);
  json args = {{"out", out.string()}, {"config", config_json(config)}};
  write_with_manifest(out, contents, "generate", args, {});
  const auto doc = json::parse(contents);
  if (doc["found"].get<bool>()) {
    log << "found: SF = " << doc["sf"].get<double>() << " at restart "
        << doc["restart_index"].get<std::size_t>() << ", written to " << out.string() << "\n";
    return kExitOk;
  }
  log << "not found: best SF = " << doc["best_sf"].get<double>() << ", written to " << out.string()
      << "\n";
  return kExitCheckFailed;
}

std::vector<VerifyCheck> parse_checks(const std::string& list) {
  std::vector<VerifyCheck> out;
  std::stringstream ss(list);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item == "simple") out.push_back(VerifyCheck::simple);
    else if (item == "selfx") out.push_back(VerifyCheck::selfx);
    else if (item == "knot") out.push_back(VerifyCheck::knot);
    else if (item == "pushes") out.push_back(VerifyCheck::pushes);
    else if (!item.empty()) throw std::invalid_argument("unknown check '" + item + "'");
  }
  if (out.empty()) throw std::invalid_argument("no checks selected");
  return out;
}

json render_verify(const ControlPolygon& polygon, const std::vector<VerifyCheck>& checks,
                   const VerifyOptions& options) {
  json results = json::object();
  bool all = true;
  for (auto c : checks) {
    json entry;
    bool passed = false;
    switch (c) {
      case VerifyCheck::simple: {
        try {
          const auto res = knot::polygon_is_simple(polygon);
          entry = io::simplicity_certificate_to_json(res, polygon);
          passed = res.simple;
        } catch (const DegenerateInput& e) {
          entry = {{"kind", "simplicity"}, {"simple", false}, {"degenerate", e.what()}};
        }
        break;
      }
      case VerifyCheck::selfx: {
        const auto w = selfx::find_self_intersection(polygon);
        entry = {{"kind", "self_intersection"},
                 {"numerical", true},
                 {"gap_tolerance", options.selfx_gap_tolerance},
                 {"input_digest", io::polygon_digest(polygon)},
                 {"witness", w ? io::witness_to_json(*w) : json(nullptr)}};
        passed = w && w->gap <= options.selfx_gap_tolerance;
        break;
      }
      case VerifyCheck::knot: {
        try {
          const auto verdict = knot::analyze_trefoil(BezierCurve(polygon));
          entry = io::trefoil_certificate_to_json(verdict, polygon);
          passed = verdict.accepted;
        } catch (const AmbiguousCrossing& e) {
          entry = {{"kind", "trefoil"}, {"accepted", false}, {"reason", e.what()}};
        }
        break;
      }
      case VerifyCheck::pushes: {
        const knot::UnknotConfig config;
        try {
          const auto outcome = knot::verify_unknot_by_pushes(polygon, std::nullopt, config);
          entry = io::unknot_certificate_to_json(outcome, polygon, config);
          passed = outcome.status == knot::UnknotStatus::certified;
        } catch (const DegenerateInput& e) {
          entry = {{"kind", "unknot_by_pushes"}, {"status", "failed"}, {"reason", e.what()}};
        }
        break;
      }
    }
    entry["passed"] = passed;
    all = all && passed;
    results[check_name(c)] = std::move(entry);
  }
  return {{"api", 1},
          {"input_digest", io::polygon_digest(polygon)},
          {"polygon", io::polygon_to_json(polygon)},
          {"checks", results},
          {"passed", all}};
}

int cmd_verify(const fs::path& input, const std::vector<VerifyCheck>& checks,
               const std::optional<fs::path>& out, std::ostream& log, const VerifyOptions& options) {
  std::optional<ControlPolygon> polygon;
  std::string raw;
  try {
    raw = io::read_text_file(input);
    polygon = io::read_polygon_file(input);
  } catch (const ParseError& e) {
    log << "error: " << input.string() << ": " << e.what() << "\n";
    return kExitInputError;
  }
  const auto report = render_verify(*polygon, checks, options);
  for (const auto& [name, entry] : report["checks"].items()) {
    log << (entry["passed"].get<bool>() ? "PASS " : "FAIL ") << name << "\n";
  }
  if (out) {
    json args = {{"input", input.string()}, {"checks", join_checks(checks)}, {"out", out->string()},
                 {"selfx_gap_tolerance", options.selfx_gap_tolerance}};
    write_with_manifest(*out, dump(report), "verify", args, {{input.string(), io::fnv1a_hex(raw)}});
  } else {
    log << dump(report);
  }
  return report["passed"].get<bool>() ? kExitOk : kExitCheckFailed;
}

json render_subdivide(const ControlPolygon& polygon, double u, std::size_t depth) {
  json pieces = json::array();
  for (const auto& piece : subdivide(BezierCurve(polygon), u, depth)) {
    json pts = json::array();
    for (const auto& p : piece.curve.control()) pts.push_back(io::point_to_json(p));
    pieces.push_back({{"t_begin", piece.t_begin}, {"t_end", piece.t_end}, {"points", pts}});
  }
  return {{"api", 1},
          {"input_digest", io::polygon_digest(polygon)},
          {"u", u},
          {"depth", depth},
          {"pieces", pieces}};
}

int cmd_subdivide(const fs::path& input, double u, std::size_t depth, const std::optional<fs::path>& out,
                  std::ostream& log) {
  std::optional<ControlPolygon> polygon;
  std::string raw;
  try {
    raw = io::read_text_file(input);
    polygon = io::read_polygon_file(input);
  } catch (const ParseError& e) {
    log << "error: " << input.string() << ": " << e.what() << "\n";
    return kExitInputError;
  }
  json report;
  try {
    report = render_subdivide(*polygon, u, depth);
  } catch (const std::exception& e) {
    log << "error: " << e.what() << "\n";
    return kExitInputError;
  }
  if (out) {
    json args = {{"input", input.string()}, {"u", u}, {"depth", depth}, {"out", out->string()}};
    write_with_manifest(*out, dump(report), "subdivide", args, {{input.string(), io::fnv1a_hex(raw)}});
    log << report["pieces"].size() << " pieces written to " << out->string() << "\n";
  } else {
    log << dump(report);
  }
  return kExitOk;
}

json make_manifest(const std::string& command, const json& args,
                   const std::map<std::string, std::string>& inputs,
                   const std::map<std::string, std::string>& outputs) {
  json doc = {{"api", 1},
              {"command", command},
              {"toolkit_version", BEZKNOT_VERSION},
              {"args", args},
              {"inputs", inputs},
              {"outputs", outputs}};
  if (args.contains("config")) {
    doc["config"] = args["config"];
    doc["seed"] = args["config"]["seed"];
  }
  return doc;
}

fs::path manifest_path_for(const fs::path& output) {
  return fs::path(output.string() + ".manifest.json");
}

int cmd_replay(const fs::path& manifest_file, std::ostream& log) {
  json manifest;
  try {
    manifest = json::parse(io::read_text_file(manifest_file));
  } catch (const std::exception& e) {
    log << "error: cannot read manifest: " << e.what() << "\n";
    return kExitInputError;
  }
  const std::string command = manifest.value("command", "");
  const json& args = manifest["args"];

  for (const auto& [path, digest] : manifest["inputs"].items()) {
    std::string now;
    try {
      now = io::fnv1a_hex(io::read_text_file(path));
    } catch (const ParseError&) {
      log << "FAIL input " << path << " is missing\n";
      return kExitCheckFailed;
    }
    if (now != digest.get<std::string>()) {
      log << "FAIL input " << path << " changed since the manifest was written\n";
      return kExitCheckFailed;
    }
  }

  std::string contents;
  try {
    if (command == "generate") {
      contents = render_generate(config_from_json(args.at("config")));
    } else if (command == "verify") {
      VerifyOptions options;
      options.selfx_gap_tolerance = args.at("selfx_gap_tolerance").get<double>();
      contents = dump(render_verify(io::read_polygon_file(args.at("input").get<std::string>()),
                                    parse_checks(args.at("checks").get<std::string>()), options));
    } else if (command == "subdivide") {
      contents = dump(render_subdivide(io::read_polygon_file(args.at("input").get<std::string>()),
                                       args.at("u").get<double>(), args.at("depth").get<std::size_t>()));
    } else if (command == "reproduce") {
      const auto case_name = args.at("case").get<std::string>();
      const auto polygon = args.contains("fixture")
                               ? io::read_polygon_file(args["fixture"].get<std::string>())
                               : fixtures::by_name(case_name);
      const auto r = case_name == "trefoil" ? reproduce_trefoil(polygon) : reproduce_equilateral(polygon);
      contents = dump(r.report);
    } else {
      log << "error: manifest command '" << command << "' cannot be replayed\n";
      return kExitInputError;
    }
  } catch (const std::exception& e) {
    log << "error: replay failed: " << e.what() << "\n";
    return kExitInputError;
  }

  const auto& outputs = manifest["outputs"];
  if (outputs.size() != 1) {
    log << "error: manifest must list exactly one output\n";
    return kExitInputError;
  }
  const auto expected = outputs.begin().value().get<std::string>();
  const auto actual = io::fnv1a_hex(contents);
  const bool same = expected == actual;
  log << (same ? "PASS " : "FAIL ") << command << " output " << outputs.begin().key() << " digest "
      << actual << (same ? " matches" : " differs from " + expected) << "\n";
  bool on_disk = false;
  try {
    on_disk = io::fnv1a_hex(io::read_text_file(outputs.begin().key())) == expected;
  } catch (const ParseError&) {
  }
  if (!on_disk) log << "FAIL output file " << outputs.begin().key() << " does not match the manifest\n";
  return same && on_disk ? kExitOk : kExitCheckFailed;
}

}  // namespace bezknot::workbench
