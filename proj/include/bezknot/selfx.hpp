#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "bezknot/geometry.hpp"
#include "bezknot/optimize.hpp"

namespace bezknot::selfx {

// Edge vectors q_i = P_{i+1} - P_i of a control polygon.
struct EdgeVectors {
  std::vector<Point3> q;
  double r = 1.0;  // target common edge length

  static EdgeVectors of(const ControlPolygon& polygon, double r = 1.0);
  std::size_t degree() const { return q.size(); }
  // P_0 = origin, P_{i+1} = P_i + q_i; the last vertex is set to P_0 exactly.
  ControlPolygon reconstruct(const Point3& origin = {}) const;
  // max_i | |q_i| - r |
  double edge_length_spread() const;
};

// The n-1 free edges as unit vectors (sin phi cos theta, sin phi sin theta,
// cos phi); the last edge is minus their sum, which closes the polygon.
struct SphericalEdgeParams {
  std::vector<double> phi;
  std::vector<double> theta;
  double s = 0.0;
  double t = 0.0;

  std::size_t degree() const { return phi.size() + 1; }
  // Flat layout (phi_1..phi_{n-1}, theta_1..theta_{n-1}, s, t).
  std::vector<double> flatten() const;
  static SphericalEdgeParams unflatten(std::span<const double> x);
  EdgeVectors edges() const;
  // Same edge vectors with phi in [0, pi] and theta in [0, 2 pi).
  SphericalEdgeParams normalized() const;
};

// Polynomial form of (1/n) (C(1-s) - C(t)) / ((1-s) - t):
// (1/n) sum_i sum_j C(n-1-i, j) s^(n-1-i-j) (1-s)^j sum_k C(i,k) (1-t)^(i-k) t^k q_{j+k}.
Point3 eval_S(const EdgeVectors& edges, double s, double t);

// | |q_{n-1}|^2 - 1 | for the dependent closing edge.
double closure_defect_F(const SphericalEdgeParams& params);

// |S(s,t)| + |F|
double eval_SF(const SphericalEdgeParams& params);

struct SelfIntersectionWitness {
  double s = 0.0;
  double t = 0.0;
  double residual = 0.0;  // |S(s,t)|
  Point3 point_a;         // C(1-s)
  Point3 point_b;         // C(t)
  double gap = 0.0;       // |point_a - point_b|
};

// Interior of D = { s+t < 1, s,t >= 0, (s,t) != (0,0) }.
bool in_domain(double s, double t);

// Cyclic parameter distance between the two curve points C(1-s) and C(t).
double witness_separation(double s, double t);

SelfIntersectionWitness make_witness(const ControlPolygon& polygon, double s, double t);

struct WitnessSearchConfig {
  std::size_t samples = 1000;
  double parameter_separation = 0.05;
  optimize::SimplexConfig simplex = [] {
    optimize::SimplexConfig c;
    c.x_tolerance = 1e-12;
    c.f_tolerance = 1e-15;
    c.max_evals = 20'000;
    return c;
  }();
};

// Closest approach of the 3D curve to itself away from the closure point:
// grid seeding over parameter pairs, simplex refinement of the gap.
std::optional<SelfIntersectionWitness> find_self_intersection(
    const ControlPolygon& polygon, const WitnessSearchConfig& config = {});

enum class ConstraintMode { reject, penalty };

struct GeneratorConfig {
  std::size_t degree = 6;
  std::size_t restarts = 10;
  std::uint64_t seed = 1;
  double eps_root = 5e-4;   // accept SF at or below this
  double eps_edge = 1e-3;   // max | |q_i| - 1 | of the reconstructed polygon
  // Witness points C(1-s), C(t) must be this far apart in parameter; (s,t) near
  // (0,0) or the s+t=1 diagonal gives trivial roots of S.
  double min_parameter_separation = 0.05;
  ConstraintMode constraint_mode = ConstraintMode::reject;
  double penalty_weight = 1e3;
  std::size_t polish_rounds = 2;  // simplex restarts from each local minimum
  std::size_t threads = 1;
  optimize::SimplexConfig simplex = [] {
    optimize::SimplexConfig c;
    c.x_tolerance = 1e-10;
    c.f_tolerance = 1e-14;
    c.max_evals = 200'000;
    return c;
  }();

  void validate() const;
};

struct RestartSummary {
  std::size_t restart_index = 0;
  double sf = 0.0;  // 1 when rejected for leaving D, as in the reference driver
  double raw_sf = 0.0;
  double s = 0.0;
  double t = 0.0;
  bool accepted = false;
  std::string note;
  std::size_t evals = 0;
};

struct GeneratorReport {
  ControlPolygon polygon;
  SphericalEdgeParams params;
  SelfIntersectionWitness witness;
  double sf = 0.0;
  double closure_defect = 0.0;
  double edge_length_spread = 0.0;
  std::uint64_t seed = 0;
  std::size_t restart_index = 0;
};

struct GeneratorOutcome {
  std::optional<GeneratorReport> report;  // empty: not found
  double best_sf = 1.0;                   // best SF seen over all restarts
  std::vector<RestartSummary> restarts;
  GeneratorConfig config;
};

// Start point for restart `index`: phi ~ U(0,pi)^(n-1), theta ~ U(0,2pi)^(n-1),
// s ~ U(0,1), t ~ U(0,1-s), drawn from RandomStream(seed, index).
std::vector<double> sample_start(std::uint64_t seed, std::size_t index, std::size_t degree);

// Multistart search for a closed equilateral control polygon whose curve
// self-intersects. Returns the lowest-SF restart that passes every check.
GeneratorOutcome generate_counterexample(const GeneratorConfig& config);

}  // namespace bezknot::selfx
