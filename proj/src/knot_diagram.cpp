#include <algorithm>
#include <cmath>
#include <sstream>

#include "bezknot/errors.hpp"
#include "bezknot/knot.hpp"

namespace bezknot::knot {

namespace {

double wrap_parameter(double t) {
  const double w = t - std::floor(t);
  return w >= 1.0 ? 0.0 : w;
}

bool near_pair(const PlanarIntersection& a, const PlanarIntersection& b, double tol) {
  return cyclic_separation(a.t_first, b.t_first) < tol &&
         cyclic_separation(a.t_second, b.t_second) < tol;
}

}  // namespace

double cyclic_separation(double a, double b) {
  const double d = std::abs(a - b);
  return std::min(d, 1.0 - d);
}

const char* to_string(Sense s) { return s == Sense::under ? "under" : "over"; }

std::vector<PlanarIntersection> find_planar_self_intersections(const PlanarCurve& curve,
                                                               const PlanarSearchConfig& config) {
  const std::size_t m = config.samples;
  if (m < 8) throw DomainError("planar search needs at least 8 samples");

  std::vector<Point2> pts(m);
  for (std::size_t k = 0; k < m; ++k) pts[k] = curve.evaluate(static_cast<double>(k) / m);
  double max_step = 0.0;
  for (std::size_t k = 0; k < m; ++k) max_step = std::max(max_step, distance(pts[k], pts[(k + 1) % m]));
  const double seed_radius = 2.0 * max_step;

  // Pairwise distances on the cyclic sample grid.
  std::vector<float> dist(m * m);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = i; j < m; ++j) {
      const auto d = static_cast<float>(distance(pts[i], pts[j]));
      dist[i * m + j] = d;
      dist[j * m + i] = d;
    }
  }
  auto at = [&](std::size_t i, std::size_t j) { return dist[(i % m) * m + (j % m)]; };

  std::vector<std::pair<std::size_t, std::size_t>> seeds;
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = i + 1; j < m; ++j) {
      const float d = dist[i * m + j];
      if (d > seed_radius) continue;
      const double ti = static_cast<double>(i) / m, tj = static_cast<double>(j) / m;
      if (cyclic_separation(ti, tj) <= config.parameter_separation) continue;
      bool is_min = true;
      for (int di = -1; di <= 1 && is_min; ++di) {
        for (int dj = -1; dj <= 1; ++dj) {
          if (di == 0 && dj == 0) continue;
          if (at(i + m + di, j + m + dj) < d) {
            is_min = false;
            break;
          }
        }
      }
      if (is_min) seeds.emplace_back(i, j);
    }
  }

  auto planar_gap = [&curve](std::span<const double> x) {
    return distance(curve.evaluate(wrap_parameter(x[0])), curve.evaluate(wrap_parameter(x[1])));
  };
  optimize::SimplexConfig simplex = config.simplex;
  simplex.initial_step = 2.0 / static_cast<double>(m);

  std::vector<PlanarIntersection> found;
  for (const auto& [i, j] : seeds) {
    const auto result = optimize::minimize(
        planar_gap, {static_cast<double>(i) / m, static_cast<double>(j) / m}, simplex);
    double a = wrap_parameter(result.argmin[0]);
    double b = wrap_parameter(result.argmin[1]);
    if (a > b) std::swap(a, b);
    if (cyclic_separation(a, b) <= config.parameter_separation) continue;
    const double gap = distance(curve.evaluate(a), curve.evaluate(b));
    if (gap > config.crossing_tolerance) continue;
    PlanarIntersection candidate{a, b, gap};
    auto same = std::find_if(found.begin(), found.end(), [&](const PlanarIntersection& p) {
      return near_pair(p, candidate, config.dedup_tolerance);
    });
    if (same == found.end()) {
      found.push_back(candidate);
    } else if (candidate.gap < same->gap) {
      *same = candidate;
    }
  }
  std::sort(found.begin(), found.end(),
            [](const auto& l, const auto& r) { return l.t_first < r.t_first; });
  return found;
}

KnotDiagram classify_crossings(const BezierCurve& curve,
                               std::span<const PlanarIntersection> planar_pairs,
                               const ClassifyConfig& config) {
  KnotDiagram diagram;
  for (const auto& pair : planar_pairs) {
    const double t1 = std::min(pair.t_first, pair.t_second);
    const double t2 = std::max(pair.t_first, pair.t_second);
    const Point3 p1 = curve.evaluate(t1);
    const Point3 p2 = curve.evaluate(t2);
    if (std::abs(p1.z - p2.z) <= config.z_separation_floor) {
      std::ostringstream msg;
      msg << "crossing at parameters (" << t1 << ", " << t2 << ") has height difference "
          << std::abs(p1.z - p2.z) << " within the separation floor "
          << config.z_separation_floor << "; possible 3D self-intersection";
      throw AmbiguousCrossing(msg.str(), t1, t2);
    }
    CrossingRecord record;
    record.t_first = t1;
    record.t_second = t2;
    record.planar_point = {(p1.x + p2.x) / 2.0, (p1.y + p2.y) / 2.0};
    record.z_first = p1.z;
    record.z_second = p2.z;
    record.sense = p1.z < p2.z ? Sense::under : Sense::over;
    record.planar_gap = std::hypot(p1.x - p2.x, p1.y - p2.y);
    diagram.crossings.push_back(record);
  }
  std::sort(diagram.crossings.begin(), diagram.crossings.end(),
            [](const auto& l, const auto& r) { return l.t_first < r.t_first; });

  struct Visit {
    double t;
    Sense sense;
    std::size_t crossing;
  };
  std::vector<Visit> visits;
  for (std::size_t c = 0; c < diagram.crossings.size(); ++c) {
    const auto& rec = diagram.crossings[c];
    visits.push_back({rec.t_first, rec.sense, c});
    visits.push_back({rec.t_second, opposite(rec.sense), c});
  }
  std::sort(visits.begin(), visits.end(), [](const Visit& l, const Visit& r) { return l.t < r.t; });
  for (const auto& v : visits) {
    diagram.sense_sequence.push_back(v.sense);
    diagram.traversal_parameters.push_back(v.t);
    diagram.gauss_code.push_back(v.crossing);
  }
  return diagram;
}

TrefoilVerdict certify_trefoil(const KnotDiagram& diagram, const DiagramTolerances& tolerances) {
  TrefoilVerdict verdict;
  verdict.diagram = diagram;
  verdict.tolerances = tolerances;
  const std::size_t count = diagram.crossings.size();
  if (count != 3) {
    verdict.reason = "diagram has " + std::to_string(count) + " crossings, expected 3";
    return verdict;
  }
  const auto& word = diagram.sense_sequence;
  for (std::size_t k = 0; k < word.size(); ++k) {
    if (word[k] == word[(k + 1) % word.size()]) {
      verdict.reason = "traversal word is not alternating at position " + std::to_string(k);
      return verdict;
    }
  }
  verdict.accepted = true;
  verdict.reason = "three crossings with alternating traversal word";
  return verdict;
}

TrefoilVerdict analyze_trefoil(const BezierCurve& curve, const DiagramTolerances& tolerances) {
  PlanarSearchConfig search;
  search.samples = tolerances.samples;
  search.parameter_separation = tolerances.parameter_separation;
  search.crossing_tolerance = tolerances.crossing_tolerance;
  const auto pairs = find_planar_self_intersections(project_xy(curve), search);
  const auto diagram = classify_crossings(curve, pairs, {tolerances.z_separation_floor});
  return certify_trefoil(diagram, tolerances);
}

}  // namespace bezknot::knot
