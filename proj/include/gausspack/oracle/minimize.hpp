#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <span>
#include <stdexcept>
#include <vector>

// Derivative-free minimization used to check constrained minima by brute force.
namespace gausspack::oracle {

using Objective = std::function<double(std::span<const double>)>;

struct NelderMeadOptions {
  int max_evals = 100000;
  // Stop when the spread of simplex values is below ftol (1 + |f_best|).
  double ftol = 1e-9;
  // Initial simplex edge, relative to max(|x_k|, 1).
  double initial_step = 0.1;
  // Fresh-simplex restarts from the current best point.
  int restarts = 4;
};

struct NelderMeadResult {
  std::vector<double> x;
  double value = 0.0;
  int evaluations = 0;
  bool converged = false;
};

// Non-finite objective values are treated as +infinity (infeasible).
NelderMeadResult nelder_mead(const Objective& f, std::vector<double> x0, const NelderMeadOptions& opt = {});

// Maps a point of the search space to the point the objective sees, or nullopt
// when the point is infeasible.
using Eliminator = std::function<std::optional<std::vector<double>>(std::span<const double>)>;
using Sampler = std::function<std::vector<double>(std::mt19937_64&)>;

struct StartTrace {
  std::vector<double> start;
  std::vector<double> x;
  double value = 0.0;
  int evaluations = 0;
  int resamples = 0;
  bool feasible = false;
};

struct MultiStartResult {
  std::vector<double> best_x;
  double best_value = 0.0;
  std::vector<StartTrace> traces;
  int total_evaluations = 0;
};

class AllStartsInfeasible : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Multi-start Nelder-Mead. Start i draws from an RNG seeded with (seed, i), so
// results do not depend on thread count; the best value is the minimum over
// starts (ties broken by start index). Infeasible starting draws are resampled
// up to 1000 times.
MultiStartResult minimize_free(const Objective& objective, const Eliminator& eliminator, const Sampler& sampler,
                               int starts, const NelderMeadOptions& budget, std::uint64_t seed, int threads = 0);

}  // namespace gausspack::oracle
