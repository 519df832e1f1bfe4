#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

namespace bezknot::optimize {

using Objective = std::function<double(std::span<const double>)>;

struct SimplexConfig {
  std::size_t max_evals = 1'000'000;
  double x_tolerance = 1e-8;
  double f_tolerance = 1e-12;
  double reflection = 1.0;
  double expansion = 2.0;
  double contraction = 0.5;
  double shrink = 0.5;
  // Offset for the initial simplex; relative to |x0_i| when |x0_i| > 1.
  double initial_step = 0.05;

  // Throws std::invalid_argument when a field is outside its admissible range.
  void validate() const;
};

struct MinimizeResult {
  std::vector<double> argmin;
  double fmin = 0.0;
  std::size_t evals_used = 0;
  std::size_t iterations = 0;
  bool converged = false;
};

enum class StepKind { initial, reflect, expand, contract_outside, contract_inside, shrink };

struct IterationInfo {
  std::size_t iteration = 0;
  StepKind step = StepKind::initial;
  double best_value = 0.0;
  double diameter = 0.0;  // max vertex distance from the best vertex, inf-norm
};

using IterationObserver = std::function<void(const IterationInfo&)>;

// Nelder-Mead simplex minimization. Deterministic for a fixed objective, x0
// and config. Throws ObjectiveFailure if the objective returns NaN.
MinimizeResult minimize(const Objective& objective, std::vector<double> x0,
                        const SimplexConfig& config = {},
                        const IterationObserver& observer = nullptr);

// objective(x) + weight * max(0, violation(x))^2
Objective penalized(Objective objective, std::function<double(std::span<const double>)> violation,
                    double weight);

// Reproducible per-start streams: stream(seed, i) depends only on (seed, i).
class RandomStream {
 public:
  RandomStream(std::uint64_t seed, std::uint64_t stream_index);
  // Uniform double in [0,1) built from the top 53 bits of the engine output,
  // so values do not depend on the standard library's distributions.
  double uniform();
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

 private:
  std::mt19937_64 engine_;
};

// Produces the start point for restart `index`.
using StartSampler = std::function<std::vector<double>(std::size_t index)>;

struct StartOutcome {
  std::size_t index = 0;
  std::vector<double> start;
  std::optional<MinimizeResult> result;  // empty when the start failed
  std::string error;
};

// Runs `starts` independent minimizations. Results are in sampler order
// whatever the thread count; one failing start does not stop the others.
std::vector<StartOutcome> multistart(const Objective& objective, const StartSampler& sampler,
                                     std::size_t starts, const SimplexConfig& config = {},
                                     std::size_t threads = 1);

}  // namespace bezknot::optimize
