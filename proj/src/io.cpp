#include "bezknot/io.hpp"

#include <cctype>
#include <charconv>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "bezknot/errors.hpp"

namespace bezknot::io {

namespace {

Point3 point_from_json(const json& p, std::size_t index) {
  if (!p.is_array() || p.size() != 3) {
    throw ParseError("point " + std::to_string(index) + " is not an [x,y,z] triple", 0);
  }
  Point3 out;
  double* dst[3] = {&out.x, &out.y, &out.z};
  for (std::size_t k = 0; k < 3; ++k) {
    if (!p[k].is_number()) throw ParseError("point " + std::to_string(index) + " has a non-number", 0);
    *dst[k] = p[k].get<double>();
  }
  return out;
}

bool parse_double(std::string_view token, double& out) {
  if (!token.empty() && token.front() == '+') token.remove_prefix(1);
  auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), out);
  return ec == std::errc() && ptr == token.data() + token.size() && std::isfinite(out);
}

std::string format_double(double v) {
  std::array<char, 64> buf{};
  auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), ptr);
}

json rational_json(const exact::Rational& q) { return exact::to_string(q); }

}  // namespace

json polygon_to_json(const ControlPolygon& polygon) {
  json points = json::array();
  for (const auto& p : polygon.vertices()) points.push_back(point_to_json(p));
  return {{"degree", polygon.degree()}, {"points", points}};
}

ControlPolygon polygon_from_json(const json& doc) {
  if (!doc.is_object()) throw ParseError("polygon document is not a JSON object", 0);
  if (!doc.contains("points") || !doc["points"].is_array()) {
    throw ParseError("polygon document has no \"points\" array", 0);
  }
  const auto& pts = doc["points"];
  std::vector<Point3> vertices;
  for (std::size_t i = 0; i < pts.size(); ++i) vertices.push_back(point_from_json(pts[i], i));
  if (doc.contains("degree")) {
    if (!doc["degree"].is_number_integer()) throw ParseError("\"degree\" is not an integer", 0);
    const auto n = doc["degree"].get<long long>();
    if (n < 0 || static_cast<std::size_t>(n) + 1 != vertices.size()) {
      throw ParseError("\"degree\" " + std::to_string(n) + " does not match " +
                           std::to_string(vertices.size()) + " points",
                       0);
    }
  }
  try {
    return ControlPolygon(std::move(vertices));
  } catch (const DegenerateInput& e) {
    throw ParseError(e.what(), 0);
  }
}

ControlPolygon polygon_from_text(std::string_view text) {
  std::vector<Point3> vertices;
  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t end = std::min(text.find('\n', start), text.size());
    std::string_view line = text.substr(start, end - start);
    ++line_no;
    start = end + 1;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    std::vector<std::string_view> tokens;
    std::size_t pos = 0;
    while (pos < line.size()) {
      while (pos < line.size() && std::isspace(static_cast<unsigned char>(line[pos]))) ++pos;
      const std::size_t tok = pos;
      while (pos < line.size() && !std::isspace(static_cast<unsigned char>(line[pos]))) ++pos;
      if (pos > tok) tokens.push_back(line.substr(tok, pos - tok));
    }
    if (tokens.empty()) {
      if (end == text.size()) break;
      continue;
    }
    if (tokens.size() != 3) {
      throw ParseError("expected 3 coordinates, found " + std::to_string(tokens.size()), line_no);
    }
    Point3 p;
    double* dst[3] = {&p.x, &p.y, &p.z};
    for (std::size_t k = 0; k < 3; ++k) {
      if (!parse_double(tokens[k], *dst[k])) {
        throw ParseError("bad coordinate '" + std::string(tokens[k]) + "'", line_no);
      }
    }
    vertices.push_back(p);
    if (end == text.size()) break;
  }
  if (vertices.size() < 2) throw ParseError("need at least 2 vertices", line_no);
  try {
    return ControlPolygon::from_open(std::move(vertices));
  } catch (const DegenerateInput& e) {
    throw ParseError(e.what(), 0);
  }
}

std::string polygon_to_text(const ControlPolygon& polygon) {
  std::string out;
  for (const auto& p : polygon.vertices()) {
    out += format_double(p.x) + " " + format_double(p.y) + " " + format_double(p.z) + "\n";
  }
  return out;
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open " + path.string(), 0);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::filesystem::path& path, const std::string& contents) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << contents;
}

ControlPolygon read_polygon_file(const std::filesystem::path& path) {
  const std::string text = read_text_file(path);
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && text[first] == '{') {
    json doc;
    try {
      doc = json::parse(text);
    } catch (const json::parse_error& e) {
      // nlohmann reports a byte offset; turn it into a line number
      const auto offset = std::min<std::size_t>(e.byte, text.size());
      const auto line = 1 + static_cast<std::size_t>(
                                std::count(text.begin(), text.begin() + static_cast<long>(offset), '\n'));
      throw ParseError(std::string("invalid JSON: ") + e.what(), line);
    }
    return polygon_from_json(doc);
  }
  return polygon_from_text(text);
}

std::string fnv1a_hex(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  std::ostringstream ss;
  ss << std::hex << std::setw(16) << std::setfill('0') << h;
  return ss.str();
}

std::string polygon_digest(const ControlPolygon& polygon) {
  return fnv1a_hex(polygon_to_json(polygon).dump());
}

json point_to_json(const Point3& p) { return json::array({p.x, p.y, p.z}); }

json exact_point_to_json(const exact::Point& p) {
  return json::array({rational_json(p.x), rational_json(p.y), rational_json(p.z)});
}

json witness_to_json(const selfx::SelfIntersectionWitness& w) {
  return {{"s", w.s},
          {"t", w.t},
          {"residual", w.residual},
          {"point_a", point_to_json(w.point_a)},
          {"point_b", point_to_json(w.point_b)},
          {"gap", w.gap}};
}

json generator_report_to_json(const selfx::GeneratorReport& report) {
  json doc = polygon_to_json(report.polygon);
  doc["witness"] = witness_to_json(report.witness);
  doc["sf"] = report.sf;
  doc["closure_defect"] = report.closure_defect;
  doc["edge_length_spread"] = report.edge_length_spread;
  doc["seed"] = report.seed;
  doc["restart_index"] = report.restart_index;
  doc["params"] = {{"phi", report.params.phi},
                   {"theta", report.params.theta},
                   {"s", report.params.s},
                   {"t", report.params.t}};
  return doc;
}

json generator_outcome_to_json(const selfx::GeneratorOutcome& outcome) {
  json doc;
  doc["api"] = 1;
  doc["found"] = outcome.report.has_value();
  doc["best_sf"] = outcome.best_sf;
  const auto& c = outcome.config;
  doc["config"] = {{"degree", c.degree},
                   {"restarts", c.restarts},
                   {"seed", c.seed},
                   {"eps_root", c.eps_root},
                   {"eps_edge", c.eps_edge},
                   {"min_parameter_separation", c.min_parameter_separation},
                   {"constraint_mode", c.constraint_mode == selfx::ConstraintMode::reject ? "reject"
                                                                                        : "penalty"},
                   {"penalty_weight", c.penalty_weight},
                   {"polish_rounds", c.polish_rounds},
                   {"max_evals", c.simplex.max_evals},
                   {"x_tolerance", c.simplex.x_tolerance},
                   {"f_tolerance", c.simplex.f_tolerance}};
  json restarts = json::array();
  for (const auto& r : outcome.restarts) {
    restarts.push_back({{"restart_index", r.restart_index},
                        {"sf", r.sf},
                        {"raw_sf", r.raw_sf},
                        {"s", r.s},
                        {"t", r.t},
                        {"accepted", r.accepted},
                        {"note", r.note},
                        {"evals", r.evals}});
  }
  doc["restarts"] = restarts;
  if (outcome.report) {
    const json report = generator_report_to_json(*outcome.report);
    for (const auto& [key, value] : report.items()) doc[key] = value;
  }
  return doc;
}

json planar_intersection_to_json(const knot::PlanarIntersection& p) {
  return {{"t_first", p.t_first}, {"t_second", p.t_second}, {"gap", p.gap}};
}

json diagram_to_json(const knot::KnotDiagram& diagram) {
  json crossings = json::array();
  for (const auto& c : diagram.crossings) {
    crossings.push_back({{"t_first", c.t_first},
                         {"t_second", c.t_second},
                         {"planar_point", {c.planar_point.x, c.planar_point.y}},
                         {"z_first", c.z_first},
                         {"z_second", c.z_second},
                         {"sense", knot::to_string(c.sense)},
                         {"planar_gap", c.planar_gap}});
  }
  json word = json::array();
  for (auto s : diagram.sense_sequence) word.push_back(knot::to_string(s));
  return {{"crossings", crossings},
          {"sense_sequence", word},
          {"traversal_parameters", diagram.traversal_parameters},
          {"gauss_code", diagram.gauss_code}};
}

json trefoil_certificate_to_json(const knot::TrefoilVerdict& verdict,
                                 const ControlPolygon& polygon) {
  const auto& tol = verdict.tolerances;
  return {{"kind", "trefoil"},
          {"accepted", verdict.accepted},
          {"reason", verdict.reason},
          {"numerical", true},
          {"exact_arithmetic", false},
          {"input_digest", polygon_digest(polygon)},
          {"tolerances",
           {{"samples", tol.samples},
            {"parameter_separation", tol.parameter_separation},
            {"crossing_tolerance", tol.crossing_tolerance},
            {"z_separation_floor", tol.z_separation_floor}}},
          {"diagram", diagram_to_json(verdict.diagram)}};
}

json simplicity_certificate_to_json(const knot::SimplicityResult& result,
                                    const ControlPolygon& polygon) {
  json doc = {{"kind", "simplicity"},
              {"simple", result.simple},
              {"exact_arithmetic", true},
              {"input_digest", polygon_digest(polygon)}};
  if (result.witness) doc["witness_edges"] = {result.witness->first, result.witness->second};
  return doc;
}

json push_step_to_json(const knot::PushStep& step) {
  json certs = json::array();
  for (const auto& c : step.certificates) {
    json entry = {{"segment", {c.from_label, c.to_label}},
                  {"adjacent", c.adjacent},
                  {"check", knot::to_string(c.check)},
                  {"disjoint", c.disjoint}};
    if (c.solution) {
      entry["solution"] = {{"t", rational_json(c.solution->t)},
                           {"a", rational_json(c.solution->a)},
                           {"b", rational_json(c.solution->b)}};
    }
    certs.push_back(std::move(entry));
  }
  return {{"vertex_label", step.vertex_label},
          {"vertex_index", step.vertex_index},
          {"target", exact_point_to_json(step.target)},
          {"move_label", step.move_label},
          {"certificates", certs}};
}

json unknot_certificate_to_json(const knot::UnknotOutcome& outcome, const ControlPolygon& polygon,
                                const knot::UnknotConfig& config) {
  json steps = json::array();
  for (const auto& s : outcome.steps) steps.push_back(push_step_to_json(s));
  json final_vertices = json::array();
  for (const auto& p : outcome.final_polygon.vertices) final_vertices.push_back(exact_point_to_json(p));
  return {{"kind", "unknot_by_pushes"},
          {"status", knot::to_string(outcome.status)},
          {"reason", outcome.reason},
          {"automatic", outcome.automatic},
          {"attempts", outcome.attempts},
          {"exact_arithmetic", true},
          {"terminal_edges", config.terminal_edges},
          {"input_digest", polygon_digest(polygon)},
          {"steps", steps},
          {"final_vertices", final_vertices},
          {"final_labels", outcome.final_polygon.labels}};
}

}  // namespace bezknot::io
