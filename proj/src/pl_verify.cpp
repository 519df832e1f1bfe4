#include <algorithm>
#include <functional>
#include <numeric>

#include "bezknot/errors.hpp"
#include "bezknot/knot.hpp"

namespace bezknot::knot {

namespace {

using exact::Point;
using exact::Rational;

// Adjacent edges S->A and S->B overlap beyond S iff they leave S in the same direction.
bool folds_back(const Point& shared, const Point& a, const Point& b) {
  return exact::collinear(shared, a, b) && sgn(exact::dot(a - shared, b - shared)) > 0;
}

// w leaves corner `shared` inside the closed cone spanned by u and v (all
// three coplanar, u and v independent).
bool inside_corner_cone(const Point& u, const Point& v, const Point& w) {
  const Point n = exact::cross(u, v);
  const Rational nn = exact::dot(n, n);
  const Rational alpha = exact::dot(exact::cross(w, v), n) / nn;
  const Rational beta = exact::dot(exact::cross(u, w), n) / nn;
  return sgn(alpha) >= 0 && sgn(beta) >= 0;
}

bool between(const Point& prev, const Point& cur, const Point& next) {
  return exact::collinear(prev, cur, next) && sgn(exact::dot(cur - prev, cur - next)) <= 0;
}

}  // namespace

const char* to_string(SegmentCheck c) {
  switch (c) {
    case SegmentCheck::solved_system:
      return "solved_system";
    case SegmentCheck::parallel_off_plane:
      return "parallel_off_plane";
    case SegmentCheck::coplanar_overlap_test:
      return "coplanar_overlap_test";
    case SegmentCheck::shared_vertex_off_plane:
      return "shared_vertex_off_plane";
    case SegmentCheck::shared_vertex_cone_test:
      return "shared_vertex_cone_test";
  }
  return "unknown";
}

const char* to_string(UnknotStatus s) {
  switch (s) {
    case UnknotStatus::certified:
      return "certified";
    case UnknotStatus::failed:
      return "failed";
    case UnknotStatus::inconclusive:
      return "inconclusive";
  }
  return "unknown";
}

LabeledPolygon LabeledPolygon::from(const ControlPolygon& polygon) {
  LabeledPolygon out;
  const auto v = polygon.distinct_vertices();
  for (std::size_t i = 0; i < v.size(); ++i) {
    out.vertices.push_back(exact::from_double(v[i]));
    out.labels.push_back(i);
  }
  return out;
}

std::optional<std::size_t> LabeledPolygon::index_of(std::size_t label) const {
  auto it = std::find(labels.begin(), labels.end(), label);
  if (it == labels.end()) return std::nullopt;
  return static_cast<std::size_t>(it - labels.begin());
}

ControlPolygon LabeledPolygon::to_polygon() const {
  std::vector<Point3> pts;
  for (const auto& p : vertices) pts.push_back(exact::to_double(p));
  return ControlPolygon::from_open(std::move(pts));
}

SimplicityResult polygon_is_simple(std::span<const Point> v) {
  const std::size_t m = v.size();
  if (m < 2) throw DegenerateInput("polygon needs at least 2 distinct vertices");
  for (std::size_t i = 0; i < m; ++i) {
    if (v[i] == v[(i + 1) % m]) {
      throw DegenerateInput("zero-length edge " + std::to_string(i));
    }
  }
  SimplicityResult result;
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = i + 1; j < m; ++j) {
      bool hit = false;
      if (j == i + 1) {
        hit = folds_back(v[j], v[i], v[(j + 1) % m]);
      } else if (i == 0 && j == m - 1) {
        hit = folds_back(v[0], v[1], v[m - 1]);
      } else {
        hit = exact::segments_intersect(v[i], v[i + 1], v[j], v[(j + 1) % m]);
      }
      if (hit) {
        result.simple = false;
        result.witness = std::make_pair(i, j);
        return result;
      }
    }
  }
  return result;
}

SimplicityResult polygon_is_simple(const ControlPolygon& polygon) {
  std::vector<Point> v;
  for (const auto& p : polygon.distinct_vertices()) v.push_back(exact::from_double(p));
  return polygon_is_simple(v);
}

exact::SegmentTriangleResult segment_triangle_disjoint(const Segment3& segment,
                                                       const Triangle3& triangle) {
  return exact::segment_triangle(exact::from_double(segment.from), exact::from_double(segment.to),
                                 exact::from_double(triangle.apex),
                                 exact::from_double(triangle.left),
                                 exact::from_double(triangle.right));
}

LabeledPolygon merge_collinear(LabeledPolygon polygon) {
  bool changed = true;
  while (changed && polygon.size() > 3) {
    changed = false;
    const std::size_t m = polygon.size();
    for (std::size_t k = 0; k < m; ++k) {
      const auto& prev = polygon.vertices[(k + m - 1) % m];
      const auto& next = polygon.vertices[(k + 1) % m];
      if (between(prev, polygon.vertices[k], next)) {
        polygon.vertices.erase(polygon.vertices.begin() + static_cast<std::ptrdiff_t>(k));
        polygon.labels.erase(polygon.labels.begin() + static_cast<std::ptrdiff_t>(k));
        changed = true;
        break;
      }
    }
  }
  return polygon;
}

PushOutcome apply_median_push(const LabeledPolygon& polygon, std::size_t j,
                              std::optional<exact::Point> target) {
  const std::size_t m = polygon.size();
  if (m < 4) throw DegenerateInput("median push needs a polygon with at least 4 vertices");
  if (j >= m) throw DomainError("push vertex index " + std::to_string(j) + " out of range");
  const auto& v = polygon.vertices;
  const std::size_t jl = (j + m - 1) % m;
  const std::size_t jr = (j + 1) % m;
  const Point& apex = v[j];
  const Point& left = v[jl];
  const Point& right = v[jr];
  if (exact::collinear(left, apex, right)) {
    throw DegenerateInput("vertices around P" + std::to_string(polygon.labels[j]) +
                          " are collinear");
  }
  const Point goal = target ? *target : exact::midpoint(left, right);
  if (!between(left, goal, right)) {
    throw DegenerateInput("push target is not on the segment between the neighbours");
  }
  const Point normal = exact::cross(left - apex, right - apex);

  PushOutcome outcome;
  outcome.step.vertex_index = j;
  outcome.step.vertex_label = polygon.labels[j];
  outcome.step.target = goal;

  for (std::size_t i = 0; i < m; ++i) {
    if (i == jl || i == j) continue;  // the two edges being pushed
    const std::size_t i1 = (i + 1) % m;
    SegmentCertificate cert;
    cert.from_label = polygon.labels[i];
    cert.to_label = polygon.labels[i1];
    if (i == jr || i1 == jl) {
      // Neighbouring edge: it touches the triangle at its shared corner.
      cert.adjacent = true;
      const bool at_right = i == jr;
      const Point& shared = at_right ? right : left;
      const Point& other_end = at_right ? v[i1] : v[i];
      const Point& other_corner = at_right ? left : right;
      if (sgn(exact::dot(other_end - apex, normal)) != 0) {
        cert.check = SegmentCheck::shared_vertex_off_plane;
        cert.disjoint = true;
      } else {
        cert.check = SegmentCheck::shared_vertex_cone_test;
        cert.disjoint = !inside_corner_cone(apex - shared, other_corner - shared, other_end - shared);
      }
    } else {
      auto r = exact::segment_triangle(v[i], v[i1], apex, left, right);
      cert.disjoint = r.disjoint;
      cert.solution = std::move(r.solution);
      switch (r.system) {
        case exact::SystemCase::unique_solution:
          cert.check = SegmentCheck::solved_system;
          break;
        case exact::SystemCase::parallel_off_plane:
          cert.check = SegmentCheck::parallel_off_plane;
          break;
        case exact::SystemCase::coplanar:
          cert.check = SegmentCheck::coplanar_overlap_test;
          break;
      }
    }
    outcome.step.certificates.push_back(cert);
    if (!cert.disjoint) {
      outcome.status = PushStatus::blocked;
      outcome.blocking = cert;
      outcome.polygon = polygon;
      return outcome;
    }
  }

  LabeledPolygon next = polygon;
  next.vertices.erase(next.vertices.begin() + static_cast<std::ptrdiff_t>(j));
  next.labels.erase(next.labels.begin() + static_cast<std::ptrdiff_t>(j));
  outcome.polygon = merge_collinear(std::move(next));
  outcome.status = PushStatus::verified;
  return outcome;
}

UnknotOutcome verify_unknot_by_pushes(const ControlPolygon& polygon,
                                      const std::optional<std::vector<ScriptEntry>>& script,
                                      const UnknotConfig& config) {
  UnknotOutcome outcome;
  outcome.automatic = !script.has_value();
  LabeledPolygon current = merge_collinear(LabeledPolygon::from(polygon));
  outcome.final_polygon = current;

  const auto simplicity = polygon_is_simple(current.vertices);
  if (!simplicity.simple) {
    outcome.status = UnknotStatus::failed;
    outcome.reason = "polygon is not simple (edges " + std::to_string(simplicity.witness->first) +
                     " and " + std::to_string(simplicity.witness->second) + " meet)";
    return outcome;
  }

  if (script) {
    for (std::size_t k = 0; k < script->size(); ++k) {
      const auto& entry = (*script)[k];
      const auto idx = current.index_of(entry.vertex_label);
      const std::string step_name = "step " + std::to_string(k + 1) + " (P" +
                                    std::to_string(entry.vertex_label) + ")";
      if (!idx) {
        outcome.status = UnknotStatus::failed;
        outcome.reason = step_name + ": vertex no longer present";
        return outcome;
      }
      ++outcome.attempts;
      PushOutcome push;
      try {
        push = apply_median_push(current, *idx);
      } catch (const DegenerateInput& e) {
        outcome.status = UnknotStatus::failed;
        outcome.reason = step_name + ": " + e.what();
        return outcome;
      }
      if (push.status == PushStatus::blocked) {
        outcome.status = UnknotStatus::failed;
        outcome.reason = step_name + ": blocked by segment P" +
                         std::to_string(push.blocking->from_label) + "P" +
                         std::to_string(push.blocking->to_label);
        outcome.steps.push_back(push.step);
        return outcome;
      }
      push.step.move_label = entry.move_label;
      outcome.steps.push_back(std::move(push.step));
      current = std::move(push.polygon);
      outcome.final_polygon = current;
    }
    if (current.size() <= config.terminal_edges) {
      outcome.status = UnknotStatus::certified;
      outcome.reason = "pushes reduce the polygon to " + std::to_string(current.size()) + " edges";
    } else {
      outcome.status = UnknotStatus::failed;
      outcome.reason = "script ends with " + std::to_string(current.size()) + " edges";
    }
    return outcome;
  }

  const std::size_t budget = config.max_attempts ? config.max_attempts : 10 * current.size();
  bool exhausted = false;
  std::vector<PushStep> path;
  std::function<bool(const LabeledPolygon&)> search = [&](const LabeledPolygon& poly) -> bool {
    if (poly.size() <= config.terminal_edges) {
      outcome.final_polygon = poly;
      return true;
    }
    const std::size_t m = poly.size();
    std::vector<std::pair<Rational, std::size_t>> order;
    for (std::size_t j = 0; j < m; ++j) {
      auto area = exact::doubled_area_squared(poly.vertices[(j + m - 1) % m], poly.vertices[j],
                                              poly.vertices[(j + 1) % m]);
      if (sgn(area) > 0) order.emplace_back(std::move(area), j);
    }
    std::stable_sort(order.begin(), order.end(),
                     [](const auto& l, const auto& r) { return cmp(l.first, r.first) < 0; });
    for (const auto& [area, j] : order) {
      if (outcome.attempts >= budget) {
        exhausted = true;
        return false;
      }
      ++outcome.attempts;
      auto push = apply_median_push(poly, j);
      if (push.status != PushStatus::verified) continue;
      path.push_back(push.step);
      if (search(push.polygon)) return true;
      path.pop_back();
      if (exhausted) return false;
    }
    return false;
  };
  if (search(current)) {
    outcome.status = UnknotStatus::certified;
    outcome.steps = std::move(path);
    outcome.reason = "automatic pushes reduce the polygon to " +
                     std::to_string(outcome.final_polygon.size()) + " edges";
  } else {
    outcome.status = UnknotStatus::inconclusive;
    outcome.reason = exhausted ? "push attempt budget exhausted"
                               : "no sequence of admissible median pushes found";
  }
  return outcome;
}

bool replay_unknot_certificate(const ControlPolygon& polygon, const UnknotOutcome& outcome,
                               const UnknotConfig& config) {
  if (outcome.status != UnknotStatus::certified) return false;
  LabeledPolygon current = merge_collinear(LabeledPolygon::from(polygon));
  if (!polygon_is_simple(current.vertices).simple) return false;
  for (const auto& step : outcome.steps) {
    const auto idx = current.index_of(step.vertex_label);
    if (!idx) return false;
    PushOutcome push;
    try {
      push = apply_median_push(current, *idx, step.target);
    } catch (const DegenerateInput&) {
      return false;
    }
    if (push.status != PushStatus::verified) return false;
    for (const auto& cert : push.step.certificates) {
      if (!cert.disjoint) return false;
    }
    current = push.polygon;
  }
  return current.size() <= config.terminal_edges;
}

}  // namespace bezknot::knot
