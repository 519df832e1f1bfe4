#include <cmath>
#include <numbers>
#include <stdexcept>

#include "bezknot/errors.hpp"
#include "bezknot/knot.hpp"
#include "bezknot/selfx.hpp"

namespace bezknot::selfx {

void GeneratorConfig::validate() const {
  if (degree < 4) throw std::invalid_argument("generator degree must be >= 4");
  if (degree > kMaxDegree) throw UnsupportedDegree("generator degree above supported maximum");
  if (restarts == 0) throw std::invalid_argument("generator needs at least one restart");
  if (!(eps_root > 0.0) || !(eps_edge > 0.0)) {
    throw std::invalid_argument("generator tolerances must be positive");
  }
  if (!(min_parameter_separation >= 0.0 && min_parameter_separation < 0.5)) {
    throw std::invalid_argument("min_parameter_separation must lie in [0, 0.5)");
  }
  simplex.validate();
}

std::vector<double> sample_start(std::uint64_t seed, std::size_t index, std::size_t degree) {
  optimize::RandomStream rng(seed, index);
  SphericalEdgeParams p;
  for (std::size_t i = 0; i + 1 < degree; ++i) p.phi.push_back(rng.uniform(0.0, std::numbers::pi));
  for (std::size_t i = 0; i + 1 < degree; ++i) {
    p.theta.push_back(rng.uniform(0.0, 2.0 * std::numbers::pi));
  }
  p.s = rng.uniform();
  p.t = rng.uniform(0.0, 1.0 - p.s);
  return p.flatten();
}

namespace {

optimize::Objective make_objective(const GeneratorConfig& config) {
  optimize::Objective sf = [](std::span<const double> x) {
    return eval_SF(SphericalEdgeParams::unflatten(x));
  };
  if (config.constraint_mode == ConstraintMode::reject) return sf;
  // Distance outside D along the worst violated constraint.
  auto violation = [](std::span<const double> x) {
    const double s = x[x.size() - 2], t = x[x.size() - 1];
    return std::max({s + t - 1.0, -s, -t});
  };
  return optimize::penalized(std::move(sf), violation, config.penalty_weight);
}

}  // namespace

GeneratorOutcome generate_counterexample(const GeneratorConfig& config) {
  config.validate();
  GeneratorOutcome outcome;
  outcome.config = config;

  const auto objective = make_objective(config);
  const auto sampler = [&](std::size_t i) { return sample_start(config.seed, i, config.degree); };
  auto runs = optimize::multistart(objective, sampler, config.restarts, config.simplex,
                                   config.threads);

  for (auto& run : runs) {
    RestartSummary summary;
    summary.restart_index = run.index;
    if (!run.result) {
      summary.sf = 1.0;
      summary.raw_sf = 1.0;
      summary.note = "minimizer failed: " + run.error;
      outcome.restarts.push_back(summary);
      continue;
    }
    auto best = *run.result;
    for (std::size_t round = 0; round < config.polish_rounds; ++round) {
      auto again = optimize::minimize(objective, best.argmin, config.simplex);
      again.evals_used += best.evals_used;
      const bool improved = again.fmin < best.fmin;
      if (improved) best = std::move(again);
      if (!improved) break;
    }
    summary.evals = best.evals_used;

    const auto params = SphericalEdgeParams::unflatten(best.argmin);
    summary.raw_sf = eval_SF(params);
    summary.sf = summary.raw_sf;
    summary.s = params.s;
    summary.t = params.t;

    if (!(params.s + params.t < 1.0)) {
      summary.sf = 1.0;
      summary.note = "rejected: s + t >= 1";
    } else if (!in_domain(params.s, params.t)) {
      summary.sf = 1.0;
      summary.note = "rejected: (s, t) outside D";
    } else if (witness_separation(params.s, params.t) < config.min_parameter_separation) {
      summary.sf = 1.0;
      summary.note = "rejected: trivial root, curve points too close in parameter";
    }
    if (summary.sf < outcome.best_sf) outcome.best_sf = summary.sf;
    if (!summary.note.empty()) {
      outcome.restarts.push_back(summary);
      continue;
    }
    if (summary.sf > config.eps_root) {
      summary.note = "SF above eps_root";
      outcome.restarts.push_back(summary);
      continue;
    }

    const auto edges = params.edges();
    const auto polygon = edges.reconstruct();
    const auto rebuilt = EdgeVectors::of(polygon);
    const double spread = rebuilt.edge_length_spread();
    if (spread > config.eps_edge) {
      summary.note = "edge lengths off by " + std::to_string(spread);
      outcome.restarts.push_back(summary);
      continue;
    }
    bool simple = false;
    try {
      simple = knot::polygon_is_simple(polygon).simple;
    } catch (const DegenerateInput&) {
      simple = false;
    }
    if (!simple) {
      summary.note = "control polygon not simple";
      outcome.restarts.push_back(summary);
      continue;
    }

    summary.accepted = true;
    summary.note = "accepted";
    outcome.restarts.push_back(summary);
    if (!outcome.report || summary.sf < outcome.report->sf) {
      outcome.report = GeneratorReport{polygon,
                                       params.normalized(),
                                       make_witness(polygon, params.s, params.t),
                                       summary.sf,
                                       closure_defect_F(params),
                                       spread,
                                       config.seed,
                                       run.index};
    }
  }
  return outcome;
}

}  // namespace bezknot::selfx
