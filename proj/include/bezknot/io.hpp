#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>

#include "json.hpp"

#include "bezknot/geometry.hpp"
#include "bezknot/knot.hpp"
#include "bezknot/selfx.hpp"

namespace bezknot::io {

using nlohmann::json;

// { "degree": n, "points": [[x,y,z], ...] } with n+1 points, last == first.
json polygon_to_json(const ControlPolygon& polygon);
ControlPolygon polygon_from_json(const json& doc);

// One "x y z" vertex per line; blank lines and '#' comments are skipped; the
// closing vertex is appended when absent. Errors carry the line number.
ControlPolygon polygon_from_text(std::string_view text);
std::string polygon_to_text(const ControlPolygon& polygon);

// Reads either format; JSON when the first non-space character is '{'.
ControlPolygon read_polygon_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, const std::string& contents);
std::string read_text_file(const std::filesystem::path& path);

// 64-bit FNV-1a over bytes, as 16 hex digits; used for input/output digests.
std::string fnv1a_hex(std::string_view bytes);
std::string polygon_digest(const ControlPolygon& polygon);

json point_to_json(const Point3& p);
json exact_point_to_json(const exact::Point& p);

json witness_to_json(const selfx::SelfIntersectionWitness& w);
json generator_report_to_json(const selfx::GeneratorReport& report);
json generator_outcome_to_json(const selfx::GeneratorOutcome& outcome);

json planar_intersection_to_json(const knot::PlanarIntersection& p);
json diagram_to_json(const knot::KnotDiagram& diagram);
json trefoil_certificate_to_json(const knot::TrefoilVerdict& verdict,
                                 const ControlPolygon& polygon);
json simplicity_certificate_to_json(const knot::SimplicityResult& result,
                                    const ControlPolygon& polygon);
json push_step_to_json(const knot::PushStep& step);
json unknot_certificate_to_json(const knot::UnknotOutcome& outcome, const ControlPolygon& polygon,
                                const knot::UnknotConfig& config);

}  // namespace bezknot::io
