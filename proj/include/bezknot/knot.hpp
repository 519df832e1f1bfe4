#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "bezknot/exact.hpp"
#include "bezknot/geometry.hpp"
#include "bezknot/optimize.hpp"

namespace bezknot::knot {

// ---------------------------------------------------------------------------
// Smooth curve: planar self-intersections and the knot diagram
// ---------------------------------------------------------------------------

struct PlanarSearchConfig {
  std::size_t samples = 2000;
  double parameter_separation = 0.05;  // cyclic distance between the two parameters
  double crossing_tolerance = 1e-3;    // max planar gap of an accepted pair
  double dedup_tolerance = 1e-3;
  optimize::SimplexConfig simplex = [] {
    optimize::SimplexConfig c;
    c.x_tolerance = 1e-12;
    c.f_tolerance = 1e-15;
    c.max_evals = 20'000;
    return c;
  }();
};

struct PlanarIntersection {
  double t_first = 0.0;  // t_first < t_second
  double t_second = 0.0;
  double gap = 0.0;      // |C2d(t_first) - C2d(t_second)| after refinement
};

// Distance between parameters on the closed curve, in [0, 1/2].
double cyclic_separation(double a, double b);

// Dense pairwise sampling seeds local minima of planar distance; each seed is
// refined by simplex minimization of |C2d(t1) - C2d(t2)|. Returns refined
// pairs with gap <= crossing_tolerance, deduplicated, sorted by t_first.
std::vector<PlanarIntersection> find_planar_self_intersections(
    const PlanarCurve& curve, const PlanarSearchConfig& config = {});

enum class Sense { under, over };

constexpr Sense opposite(Sense s) { return s == Sense::under ? Sense::over : Sense::under; }
const char* to_string(Sense s);

struct CrossingRecord {
  double t_first = 0.0;
  double t_second = 0.0;
  Point2 planar_point;
  double z_first = 0.0;
  double z_second = 0.0;
  Sense sense = Sense::under;  // at t_first; viewed from +z, larger z is over
  double planar_gap = 0.0;

  // Sense of the strand passing at parameter `t` (t_first or t_second).
  Sense sense_at(double t) const { return t == t_first ? sense : opposite(sense); }
};

struct KnotDiagram {
  std::vector<CrossingRecord> crossings;  // ordered by t_first
  // Traversal word: one entry per crossing visit, ordered by curve parameter.
  std::vector<Sense> sense_sequence;
  std::vector<double> traversal_parameters;
  std::vector<std::size_t> gauss_code;  // crossing index of each traversal entry
};

struct ClassifyConfig {
  double z_separation_floor = 1e-2;
};

// Lifts planar pairs back to the 3D curve and reads over/under by height.
// Throws AmbiguousCrossing when |dz| <= z_separation_floor.
KnotDiagram classify_crossings(const BezierCurve& curve,
                               std::span<const PlanarIntersection> planar_pairs,
                               const ClassifyConfig& config = {});

struct DiagramTolerances {
  std::size_t samples = 2000;
  double parameter_separation = 0.05;
  double crossing_tolerance = 1e-3;
  double z_separation_floor = 1e-2;
};

// Numerical certificate that a diagram is the standard trefoil diagram:
// exactly three crossings and an alternating traversal word.
struct TrefoilVerdict {
  bool accepted = false;
  std::string reason;
  KnotDiagram diagram;
  DiagramTolerances tolerances;
};

TrefoilVerdict certify_trefoil(const KnotDiagram& diagram, const DiagramTolerances& tolerances = {});

// Convenience pipeline: project, search, classify, certify.
TrefoilVerdict analyze_trefoil(const BezierCurve& curve, const DiagramTolerances& tolerances = {});

// ---------------------------------------------------------------------------
// PL side, exact arithmetic
// ---------------------------------------------------------------------------

// Distinct polygon vertices in exact form, each tagged with its index in the
// polygon it came from so scripts can name vertices across pushes.
struct LabeledPolygon {
  std::vector<exact::Point> vertices;
  std::vector<std::size_t> labels;

  static LabeledPolygon from(const ControlPolygon& polygon);
  std::size_t size() const { return vertices.size(); }
  std::optional<std::size_t> index_of(std::size_t label) const;
  ControlPolygon to_polygon() const;
};

struct SimplicityResult {
  bool simple = true;
  // First offending pair of edge indices (edge i runs from vertex i to i+1).
  std::optional<std::pair<std::size_t, std::size_t>> witness;
};

// Exact test over all edge pairs: non-adjacent edges must be disjoint and
// adjacent edges may share only their common vertex. Throws DegenerateInput
// on a zero-length edge.
SimplicityResult polygon_is_simple(const ControlPolygon& polygon);
SimplicityResult polygon_is_simple(std::span<const exact::Point> distinct_vertices);

struct Segment3 {
  Point3 from, to;
};
struct Triangle3 {
  Point3 apex, left, right;
};

// Exact answer to: does P + (Q-P)t = apex + a(left-apex) + b(right-apex) have
// a solution with t in [0,1], a,b >= 0, a+b <= 1? Throws DegenerateInput for a
// degenerate triangle.
exact::SegmentTriangleResult segment_triangle_disjoint(const Segment3& segment,
                                                       const Triangle3& triangle);

enum class SegmentCheck {
  solved_system,            // 3x3 system, unique solution checked against constraints
  parallel_off_plane,       // singular system, segment outside the triangle plane
  coplanar_overlap_test,    // singular system, exact 2D overlap test
  shared_vertex_off_plane,  // neighbouring edge leaves the triangle plane at once
  shared_vertex_cone_test,  // neighbouring edge in the plane, tested against the corner cone
};

const char* to_string(SegmentCheck c);

struct SegmentCertificate {
  std::size_t from_label = 0;
  std::size_t to_label = 0;
  bool adjacent = false;  // shares a triangle corner with the pushed edges
  SegmentCheck check = SegmentCheck::solved_system;
  bool disjoint = true;
  std::optional<exact::TriangleSolution> solution;
};

struct PushStep {
  std::size_t vertex_index = 0;  // index in the polygon the push was applied to
  std::size_t vertex_label = 0;
  exact::Point target;
  std::vector<SegmentCertificate> certificates;
  std::string move_label;  // informational Reidemeister annotation, may be empty
};

enum class PushStatus { verified, blocked };

struct PushOutcome {
  PushStatus status = PushStatus::blocked;
  LabeledPolygon polygon;  // after the push; the input polygon when blocked
  PushStep step;
  std::optional<SegmentCertificate> blocking;
};

// Moves vertex j to `target` (default: midpoint of its neighbours) after
// proving no other edge meets the closed triangle P_{j-1} P_j P_{j+1}. The
// pushed vertex then lies on P_{j-1}P_{j+1} and is merged away, along with any
// other straight pass-through vertices. Throws DegenerateInput for a collinear
// corner, a polygon with fewer than 4 vertices or a target off the segment.
PushOutcome apply_median_push(const LabeledPolygon& polygon, std::size_t j,
                              std::optional<exact::Point> target = std::nullopt);

// Removes vertices lying strictly between their neighbours on a straight line.
LabeledPolygon merge_collinear(LabeledPolygon polygon);

struct ScriptEntry {
  std::size_t vertex_label = 0;
  std::string move_label;
};

enum class UnknotStatus { certified, failed, inconclusive };
const char* to_string(UnknotStatus s);

struct UnknotConfig {
  std::size_t terminal_edges = 5;  // a closed polygon with <= 5 edges is unknotted
  std::size_t max_attempts = 0;    // auto mode push attempts; 0 means 10 * vertex count
};

struct UnknotOutcome {
  UnknotStatus status = UnknotStatus::inconclusive;
  std::string reason;
  std::vector<PushStep> steps;
  LabeledPolygon final_polygon;
  std::size_t attempts = 0;
  bool automatic = false;
};

// Scripted mode applies the given pushes in order; auto mode (no script)
// searches pushes smallest-triangle-first within the attempt budget. Only a
// certified outcome proves anything; inconclusive is not a knottedness proof.
UnknotOutcome verify_unknot_by_pushes(const ControlPolygon& polygon,
                                      const std::optional<std::vector<ScriptEntry>>& script,
                                      const UnknotConfig& config = {});

// Re-runs every recorded push of a certified outcome from the original
// polygon in exact arithmetic. True iff every step re-verifies and the
// replayed polygon reaches the terminal edge count.
bool replay_unknot_certificate(const ControlPolygon& polygon, const UnknotOutcome& outcome,
                               const UnknotConfig& config = {});

}  // namespace bezknot::knot
