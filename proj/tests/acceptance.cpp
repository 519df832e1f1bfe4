// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 on any FAIL.

#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "bezknot/exact.hpp"
#include "bezknot/fixtures.hpp"
#include "bezknot/geometry.hpp"
#include "bezknot/knot.hpp"
#include "bezknot/optimize.hpp"
#include "bezknot/selfx.hpp"

using namespace bezknot;

namespace {

struct Outcome {
  bool passed = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      passed = false;
      detail << " [" << what << "]";
    }
  }
};

int failures = 0;

void criterion(const char* id, const char* name, const std::function<void(Outcome&)>& body) {
  Outcome out;
  const auto start = std::chrono::steady_clock::now();
  try {
    body(out);
  } catch (const std::exception& e) {
    out.passed = false;
    out.detail << " [exception: " << e.what() << "]";
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (!out.passed) ++failures;
  std::printf("%s %s %s (%.2f s)%s\n", out.passed ? "PASS" : "FAIL", id, name, secs,
              out.detail.str().c_str());
  std::fflush(stdout);
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

// Long double de Casteljau, independent of the library evaluators.
std::array<long double, 3> casteljau(const std::vector<Point3>& net, long double t) {
  std::vector<std::array<long double, 3>> b;
  for (const auto& p : net) b.push_back({p.x, p.y, p.z});
  for (std::size_t r = 1; r < b.size(); ++r) {
    for (std::size_t i = 0; i + r < b.size(); ++i) {
      for (int k = 0; k < 3; ++k) b[i][k] = (1 - t) * b[i][k] + t * b[i + 1][k];
    }
  }
  return b[0];
}

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

// Grid minimum of |C(1-s) - C(t)| / |(1-s) - t| over s, t in {k/500}, s + t < 1,
// skipping |(1-s) - t| < 1e-6 and parameter pairs closer than `separation` on
// the closed curve.
std::pair<double, double> grid_argmin(const BezierCurve& curve, double separation) {
  constexpr int N = 500;
  std::vector<Point3> c(N + 1);
  for (int k = 0; k <= N; ++k) c[k] = curve.evaluate(static_cast<double>(k) / N);
  double best = INFINITY;
  std::pair<double, double> at{0, 0};
  for (int i = 0; i < N; ++i) {
    for (int j = 0; i + j < N; ++j) {
      const double s = static_cast<double>(i) / N, t = static_cast<double>(j) / N;
      const double u = 1.0 - s;
      const double d = std::abs(u - t);
      if (d < 1e-6 || std::min(d, 1.0 - d) <= separation) continue;
      const double ratio = norm(c[N - i] - c[j]) / d;
      if (ratio < best) {
        best = ratio;
        at = {s, t};
      }
    }
  }
  return at;
}

}  // namespace

int main() {
  // Reference values.
  constexpr std::array<std::array<double, 2>, 3> kPairs{{{0.0306, 0.5573}, {0.1573, 0.9244}, {0.3731, 0.9493}}};
  const auto trefoil = fixtures::trefoil_polygon();
  const BezierCurve trefoil_curve(trefoil);
  std::vector<knot::PlanarIntersection> pairs;

  criterion("C1", "trefoil planar self-intersection pairs", [&](Outcome& o) {
    const auto start = std::chrono::steady_clock::now();
    pairs = knot::find_planar_self_intersections(project_xy(trefoil_curve));
    const double secs = seconds_since(start);
    o.require(pairs.size() == 3, "pair count " + std::to_string(pairs.size()) + " != 3");
    for (std::size_t k = 0; k < std::min<std::size_t>(3, pairs.size()); ++k) {
      const auto& p = pairs[k];
      const double err = std::max(std::abs(p.t_first - kPairs[k][0]), std::abs(p.t_second - kPairs[k][1]));
      o.detail << " pair" << k + 1 << "=(" << fmt(p.t_first) << "," << fmt(p.t_second) << ") gap " << fmt(p.gap);
      o.require(err <= 1e-3, "pair " + std::to_string(k + 1) + " off by " + fmt(err));
      o.require(p.gap <= 5e-4, "pair " + std::to_string(k + 1) + " gap " + fmt(p.gap));
    }
    o.require(secs < 30.0, "runtime " + fmt(secs) + " s");
  });

  criterion("C2", "crossing certification", [&](Outcome& o) {
    const auto refs = fixtures::trefoil_crossings();
    double worst = 0;
    for (std::size_t k = 0; k < 3; ++k) {
      const Point3 a = trefoil_curve.evaluate(kPairs[k][0]);
      const Point3 b = trefoil_curve.evaluate(kPairs[k][1]);
      for (const auto& [got, want] : {std::pair{a, refs[k].point_first}, std::pair{b, refs[k].point_second}}) {
        worst = std::max({worst, std::abs(got.x - want.x), std::abs(got.y - want.y), std::abs(got.z - want.z)});
      }
    }
    o.detail << " max coordinate error " << fmt(worst);
    o.require(worst <= 1e-3, "3D points off by " + fmt(worst));
    const auto diagram = knot::classify_crossings(trefoil_curve, pairs);
    using knot::Sense;
    const std::vector<Sense> expected{Sense::under, Sense::over, Sense::under,
                                      Sense::over,  Sense::under, Sense::over};
    std::string word;
    for (auto s : diagram.sense_sequence) word += s == Sense::under ? 'U' : 'O';
    o.detail << " word " << word;
    o.require(diagram.sense_sequence == expected, "traversal word " + word);
    const auto verdict = knot::certify_trefoil(diagram);
    o.require(verdict.accepted, "certify_trefoil rejected: " + verdict.reason);
  });

  criterion("C3", "polygon unknot by exact pushes", [&](Outcome& o) {
    o.require(knot::polygon_is_simple(trefoil).simple, "polygon not simple");
    const auto outcome = knot::verify_unknot_by_pushes(trefoil, fixtures::trefoil_push_script());
    o.require(outcome.status == knot::UnknotStatus::certified,
              std::string("status ") + knot::to_string(outcome.status) + ": " + outcome.reason);
    if (!outcome.steps.empty()) {
      const auto& first = outcome.steps.front();
      const auto& v = trefoil.vertices();
      const exact::Point p2 = exact::from_double(v[2]), p4 = exact::from_double(v[4]);
      const exact::Point mid{(p2.x + p4.x) / 2, (p2.y + p4.y) / 2, (p2.z + p4.z) / 2};
      o.require(first.vertex_label == 3, "first push moves label " + std::to_string(first.vertex_label));
      o.require(first.target == mid, "first target is not the midpoint of P2 P4");
    }
    std::size_t systems = 0;
    for (const auto& step : outcome.steps) {
      for (const auto& c : step.certificates) {
        ++systems;
        o.require(c.disjoint, "segment " + std::to_string(c.from_label) + "-" + std::to_string(c.to_label) +
                                  " meets triangle of label " + std::to_string(step.vertex_label));
      }
    }
    o.detail << " pushes " << outcome.steps.size() << ", systems " << systems << ", final edges "
             << outcome.final_polygon.size();
    o.require(outcome.final_polygon.size() <= 5, "final polygon has " +
                                                     std::to_string(outcome.final_polygon.size()) + " edges");
    o.require(knot::replay_unknot_certificate(trefoil, outcome), "certificate replay failed");
  });

  criterion("C4", "equilateral counterexample replay", [&](Outcome& o) {
    const auto poly = fixtures::equilateral_polygon();
    const double residual = norm(selfx::eval_S(selfx::EdgeVectors::of(poly), 0.2969, 0.0633));
    o.detail << " |S| " << fmt(residual);
    o.require(residual >= 1e-5 && residual <= 5e-4, "|S| = " + fmt(residual) + " outside [1e-5, 5e-4]");
    const double f = selfx::closure_defect_F(fixtures::equilateral_params());
    const double ratio = f / 2.23e-5;
    o.detail << " F " << fmt(f);
    o.require(ratio >= 0.5 && ratio <= 2.0, "F = " + fmt(f) + " not within a factor of 2 of 2.23e-5");
    o.require(knot::polygon_is_simple(poly).simple, "polygon not simple");
    const double spread = selfx::EdgeVectors::of(poly).edge_length_spread();
    o.detail << " edge spread " << fmt(spread);
    o.require(spread <= 1e-3, "edge length spread " + fmt(spread));
  });

  criterion("C5", "generator property suite", [&](Outcome& o) {
    const auto start = std::chrono::steady_clock::now();
    std::size_t accepted = 0;
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
      selfx::GeneratorConfig config;
      config.degree = 6;
      config.restarts = 10;
      config.seed = seed;
      const auto outcome = selfx::generate_counterexample(config);
      if (!outcome.report) {
        o.detail << " seed" << seed << ":none";
        continue;
      }
      ++accepted;
      const auto& r = *outcome.report;
      const auto tag = "seed " + std::to_string(seed) + ": ";
      const auto& v = r.polygon.vertices();
      const double sf = selfx::eval_SF(r.params);
      double spread = 0;
      for (std::size_t i = 0; i + 1 < v.size(); ++i) spread = std::max(spread, std::abs(norm(v[i + 1] - v[i]) - 1.0));
      o.require(sf <= 5e-4, tag + "SF " + fmt(sf));
      o.require(spread <= 1e-3, tag + "edge spread " + fmt(spread));
      o.require(v.front() == v.back(), tag + "not closed");
      o.require(knot::polygon_is_simple(r.polygon).simple, tag + "not simple");
      const auto [gs, gt] = grid_argmin(BezierCurve(r.polygon), config.min_parameter_separation);
      const double off = std::max(std::abs(gs - r.witness.s), std::abs(gt - r.witness.t));
      o.require(off <= 0.02, tag + "grid argmin (" + fmt(gs) + "," + fmt(gt) + ") vs witness (" +
                                 fmt(r.witness.s) + "," + fmt(r.witness.t) + ")");
      o.detail << " seed" << seed << ":SF=" << fmt(sf) << ",grid_off=" << fmt(off);
    }
    const double secs = seconds_since(start);
    o.require(accepted >= 1, "no seed produced an accepted report");
    o.require(secs < 300.0, "runtime " + fmt(secs) + " s");
  });

  criterion("C6", "difference quotient vs triple sum on degree-4 curves", [&](Outcome& o) {
    std::mt19937_64 rng(20261014);
    std::uniform_real_distribution<double> coord(-5, 5), unit(0, 1);
    double worst = 0;
    for (int trial = 0; trial < 200; ++trial) {
      std::vector<Point3> net(5);
      for (auto& p : net) p = {coord(rng), coord(rng), coord(rng)};
      double s, t;
      do {
        s = unit(rng);
        t = unit(rng);
      } while (s + t >= 1.0 || std::abs((1 - s) - t) < 1e-3);
      selfx::EdgeVectors e;
      for (std::size_t i = 0; i + 1 < net.size(); ++i) e.q.push_back(net[i + 1] - net[i]);
      const Point3 triple = selfx::eval_S(e, s, t);
      const auto a = casteljau(net, 1.0L - s), b = casteljau(net, t);
      const long double denom = 4.0L * ((1.0L - s) - t);
      const Point3 quotient{static_cast<double>((a[0] - b[0]) / denom), static_cast<double>((a[1] - b[1]) / denom),
                            static_cast<double>((a[2] - b[2]) / denom)};
      worst = std::max(worst, norm(triple - quotient) / norm(quotient));
    }
    o.detail << " max relative difference " << fmt(worst);
    o.require(worst <= 1e-9, "relative difference " + fmt(worst));
  });

  criterion("C7", "optimizer sanity", [&](Outcome& o) {
    const auto bowl = optimize::minimize(
        [](std::span<const double> x) { return (x[0] - 1) * (x[0] - 1) + (x[1] - 2) * (x[1] - 2); }, {0, 0});
    o.detail << " bowl fmin " << fmt(bowl.fmin);
    o.require(bowl.fmin <= 1e-10, "bowl fmin " + fmt(bowl.fmin));
    o.require(std::abs(bowl.argmin[0] - 1) <= 1e-4 && std::abs(bowl.argmin[1] - 2) <= 1e-4, "bowl argmin");

    auto rosen = [](std::span<const double> x) {
      return 100 * (x[1] - x[0] * x[0]) * (x[1] - x[0] * x[0]) + (1 - x[0]) * (1 - x[0]);
    };
    optimize::SimplexConfig config;
    config.max_evals = 100'000;
    const auto r = optimize::minimize(rosen, {-1.2, 1}, config);
    o.detail << " rosenbrock fmin " << fmt(r.fmin) << " in " << r.evals_used << " evals";
    o.require(r.fmin <= 1e-6, "rosenbrock fmin " + fmt(r.fmin));
    o.require(r.evals_used <= 100'000, "rosenbrock evals " + std::to_string(r.evals_used));
    // Fine grid near (1, 1) locates the same minimizer.
    double best = INFINITY, bx = 0, by = 0;
    for (int i = 0; i <= 2000; ++i) {
      for (int j = 0; j <= 2000; ++j) {
        const std::array<double, 2> x{0.9 + i * 1e-4, 0.9 + j * 1e-4};
        const double f = rosen(x);
        if (f < best) {
          best = f;
          bx = x[0];
          by = x[1];
        }
      }
    }
    o.require(std::abs(r.argmin[0] - bx) <= 2e-3 && std::abs(r.argmin[1] - by) <= 2e-3,
              "rosenbrock argmin far from grid minimum");
  });

  criterion("C8", "negative controls", [&](Outcome& o) {
    const auto six = fixtures::six_stick_trefoil();
    o.require(knot::polygon_is_simple(six).simple, "six-stick trefoil not simple");
    knot::UnknotConfig generous;
    generous.max_attempts = 10'000;
    for (const auto& config : {knot::UnknotConfig{}, generous}) {
      const auto out = knot::verify_unknot_by_pushes(six, std::nullopt, config);
      o.require(out.status != knot::UnknotStatus::certified, "six-stick trefoil certified in auto mode");
    }
    for (std::size_t label = 0; label < 6; ++label) {
      const auto out = knot::verify_unknot_by_pushes(six, std::vector<knot::ScriptEntry>{{label, ""}});
      o.require(out.status != knot::UnknotStatus::certified,
                "six-stick trefoil certified by script " + std::to_string(label));
    }
    std::size_t convex = 0;
    for (int n = 3; n <= 9; ++n) {
      for (double phase : {0.0, 0.4, 1.3}) {
        std::vector<Point3> pts;
        for (int k = 0; k < n; ++k) {
          const double a = 2 * std::numbers::pi * k / n + phase;
          pts.push_back({2 * std::cos(a) + 1, 1.5 * std::sin(a) - 3, 0.3 * std::sin(2 * a)});
        }
        const auto found =
            knot::find_planar_self_intersections(project_xy(BezierCurve(ControlPolygon::from_open(pts))));
        ++convex;
        o.require(found.empty(), "convex " + std::to_string(n) + "-gon has " + std::to_string(found.size()) +
                                     " planar pairs");
      }
    }
    o.detail << " convex curves checked " << convex;
  });

  std::printf("%s: %d failing criteria\n", failures == 0 ? "ACCEPTED" : "NOT ACCEPTED", failures);
  return failures == 0 ? 0 : 1;
}
