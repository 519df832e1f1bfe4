#include "bezknot/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "bezknot/errors.hpp"

namespace bezknot::optimize {

namespace {

struct Vertex {
  std::vector<double> x;
  double f = 0.0;
  std::uint64_t id = 0;  // creation order, breaks value ties
};

bool vertex_less(const Vertex& a, const Vertex& b) {
  return a.f < b.f || (a.f == b.f && a.id < b.id);
}

double pairwise_diameter(const std::vector<Vertex>& simplex) {
  double d = 0.0;
  for (std::size_t i = 0; i < simplex.size(); ++i) {
    for (std::size_t j = i + 1; j < simplex.size(); ++j) {
      for (std::size_t k = 0; k < simplex[i].x.size(); ++k) {
        d = std::max(d, std::abs(simplex[i].x[k] - simplex[j].x[k]));
      }
    }
  }
  return d;
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

}  // namespace

void SimplexConfig::validate() const {
  if (max_evals == 0) throw std::invalid_argument("max_evals must be positive");
  if (!(x_tolerance > 0.0) || !(f_tolerance > 0.0)) {
    throw std::invalid_argument("tolerances must be positive");
  }
  if (!(reflection > 0.0)) throw std::invalid_argument("reflection must be > 0");
  if (!(expansion > 1.0) || !(expansion > reflection)) {
    throw std::invalid_argument("expansion must exceed 1 and the reflection coefficient");
  }
  if (!(contraction > 0.0 && contraction < 1.0)) {
    throw std::invalid_argument("contraction must lie in (0,1)");
  }
  if (!(shrink > 0.0 && shrink < 1.0)) throw std::invalid_argument("shrink must lie in (0,1)");
  if (!(initial_step > 0.0)) throw std::invalid_argument("initial_step must be positive");
}

MinimizeResult minimize(const Objective& objective, std::vector<double> x0,
                        const SimplexConfig& config, const IterationObserver& observer) {
  config.validate();
  if (x0.empty()) throw std::invalid_argument("minimize needs at least one variable");
  for (double v : x0) {
    if (!std::isfinite(v)) throw std::invalid_argument("start point is not finite");
  }
  const std::size_t dim = x0.size();
  std::size_t evals = 0;
  std::uint64_t next_id = 0;

  auto evaluate = [&](const std::vector<double>& x) {
    const double f = objective(x);
    ++evals;
    if (std::isnan(f)) throw ObjectiveFailure("objective returned NaN");
    return f;
  };
  auto budget_left = [&] { return evals < config.max_evals; };

  std::vector<Vertex> simplex;
  simplex.reserve(dim + 1);
  simplex.push_back({x0, evaluate(x0), next_id++});
  for (std::size_t k = 0; k < dim && budget_left(); ++k) {
    auto x = x0;
    const double step = std::abs(x0[k]) > 1.0 ? config.initial_step * std::abs(x0[k])
                                                : config.initial_step;
    x[k] += step;
    simplex.push_back({x, evaluate(x), next_id++});
  }
  std::stable_sort(simplex.begin(), simplex.end(), vertex_less);

  MinimizeResult result;
  std::size_t iteration = 0;
  auto notify = [&](StepKind step) {
    if (!observer) return;
    observer({iteration, step, simplex.front().f, pairwise_diameter(simplex)});
  };
  notify(StepKind::initial);

  std::vector<double> centroid(dim);
  auto affine = [&](double coeff, const std::vector<double>& toward) {
    // centroid + coeff * (toward - centroid)
    std::vector<double> x(dim);
    for (std::size_t k = 0; k < dim; ++k) x[k] = centroid[k] + coeff * (toward[k] - centroid[k]);
    return x;
  };

  while (simplex.size() == dim + 1) {
    const Vertex& best = simplex.front();
    double f_spread = 0.0;
    double x_spread = 0.0;
    for (std::size_t i = 1; i <= dim; ++i) {
      f_spread = std::max(f_spread, std::abs(simplex[i].f - best.f));
      for (std::size_t k = 0; k < dim; ++k) {
        x_spread = std::max(x_spread, std::abs(simplex[i].x[k] - best.x[k]));
      }
    }
    if (f_spread <= config.f_tolerance && x_spread <= config.x_tolerance) {
      result.converged = true;
      break;
    }
    if (!budget_left()) break;
    ++iteration;

    std::fill(centroid.begin(), centroid.end(), 0.0);
    for (std::size_t i = 0; i < dim; ++i) {
      for (std::size_t k = 0; k < dim; ++k) centroid[k] += simplex[i].x[k];
    }
    for (double& c : centroid) c /= static_cast<double>(dim);

    Vertex& worst = simplex.back();
    const double second_worst = simplex[dim - 1].f;
    auto reflected = affine(-config.reflection, worst.x);
    const double f_reflected = evaluate(reflected);
    StepKind step = StepKind::reflect;
    bool do_shrink = false;

    if (f_reflected < best.f) {
      if (budget_left()) {
        auto expanded = affine(-config.reflection * config.expansion, worst.x);
        const double f_expanded = evaluate(expanded);
        if (f_expanded < f_reflected) {
          worst = {std::move(expanded), f_expanded, next_id++};
          step = StepKind::expand;
        } else {
          worst = {std::move(reflected), f_reflected, next_id++};
        }
      } else {
        worst = {std::move(reflected), f_reflected, next_id++};
      }
    } else if (f_reflected < second_worst) {
      worst = {std::move(reflected), f_reflected, next_id++};
    } else if (!budget_left()) {
      if (f_reflected < worst.f) worst = {std::move(reflected), f_reflected, next_id++};
    } else if (f_reflected < worst.f) {
      auto contracted = affine(-config.reflection * config.contraction, worst.x);
      const double f_contracted = evaluate(contracted);
      if (f_contracted <= f_reflected) {
        worst = {std::move(contracted), f_contracted, next_id++};
        step = StepKind::contract_outside;
      } else {
        do_shrink = true;
      }
    } else {
      auto contracted = affine(config.contraction, worst.x);
      const double f_contracted = evaluate(contracted);
      if (f_contracted < worst.f) {
        worst = {std::move(contracted), f_contracted, next_id++};
        step = StepKind::contract_inside;
      } else {
        do_shrink = true;
      }
    }

    if (do_shrink) {
      step = StepKind::shrink;
      const auto anchor = simplex.front().x;
      for (std::size_t i = 1; i <= dim && budget_left(); ++i) {
        for (std::size_t k = 0; k < dim; ++k) {
          simplex[i].x[k] = anchor[k] + config.shrink * (simplex[i].x[k] - anchor[k]);
        }
        simplex[i].f = evaluate(simplex[i].x);
        simplex[i].id = next_id++;
      }
    }
    std::stable_sort(simplex.begin(), simplex.end(), vertex_less);
    notify(step);
  }

  std::stable_sort(simplex.begin(), simplex.end(), vertex_less);
  result.argmin = simplex.front().x;
  result.fmin = simplex.front().f;
  result.evals_used = evals;
  result.iterations = iteration;
  return result;
}

Objective penalized(Objective objective, std::function<double(std::span<const double>)> violation,
                    double weight) {
  return [objective = std::move(objective), violation = std::move(violation),
          weight](std::span<const double> x) {
    const double v = std::max(0.0, violation(x));
    return objective(x) + weight * v * v;
  };
}

RandomStream::RandomStream(std::uint64_t seed, std::uint64_t stream_index)
    : engine_(splitmix64(splitmix64(seed) ^ splitmix64(stream_index + 0x632BE59BD9B4E019ull))) {}

double RandomStream::uniform() {
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

std::vector<StartOutcome> multistart(const Objective& objective, const StartSampler& sampler,
                                     std::size_t starts, const SimplexConfig& config,
                                     std::size_t threads) {
  if (starts == 0) throw std::invalid_argument("multistart needs at least one start");
  std::vector<StartOutcome> outcomes(starts);
  for (std::size_t i = 0; i < starts; ++i) {
    outcomes[i].index = i;
    outcomes[i].start = sampler(i);
  }
  auto run_one = [&](std::size_t i) {
    try {
      outcomes[i].result = minimize(objective, outcomes[i].start, config);
    } catch (const std::exception& e) {
      outcomes[i].error = e.what();
    }
  };
  threads = std::max<std::size_t>(1, std::min(threads, starts));
  if (threads == 1) {
    for (std::size_t i = 0; i < starts; ++i) run_one(i);
    return outcomes;
  }
  std::vector<std::future<void>> workers;
  for (std::size_t w = 0; w < threads; ++w) {
    workers.push_back(std::async(std::launch::async, [&, w] {
      for (std::size_t i = w; i < starts; i += threads) run_one(i);
    }));
  }
  for (auto& worker : workers) worker.get();
  return outcomes;
}

}  // namespace bezknot::optimize
