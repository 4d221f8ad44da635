#include "gausspack/oracle/minimize.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "gausspack/parallel.hpp"

namespace gausspack::oracle {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double safe_eval(const Objective& f, std::span<const double> x) {
  const double v = f(x);
  return std::isfinite(v) ? v : kInf;
}

// One Nelder-Mead run from a fresh simplex around x0.
NelderMeadResult run_simplex(const Objective& f, const std::vector<double>& x0, const NelderMeadOptions& opt,
                             int budget) {
  const std::size_t n = x0.size();
  std::vector<std::vector<double>> pts(n + 1, x0);
  std::vector<double> vals(n + 1);
  int evals = 0;
  auto eval = [&](const std::vector<double>& p) {
    ++evals;
    return safe_eval(f, p);
  };

  for (std::size_t k = 0; k < n; ++k) pts[k + 1][k] += opt.initial_step * std::max(std::abs(x0[k]), 1.0);
  for (std::size_t k = 0; k <= n; ++k) vals[k] = eval(pts[k]);

  std::vector<std::size_t> order(n + 1);
  std::vector<double> centroid(n), xr(n), xe(n), xc(n);
  bool converged = false;

  while (evals < budget) {
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return vals[a] < vals[b]; });
    const std::size_t best = order.front(), worst = order.back(), second = order[n - 1];
    if (std::isfinite(vals[worst]) && vals[worst] - vals[best] <= opt.ftol * (1.0 + std::abs(vals[best]))) {
      converged = true;
      break;
    }

    std::fill(centroid.begin(), centroid.end(), 0.0);
    for (std::size_t k = 0; k <= n; ++k)
      if (k != worst)
        for (std::size_t d = 0; d < n; ++d) centroid[d] += pts[k][d] / static_cast<double>(n);

    for (std::size_t d = 0; d < n; ++d) xr[d] = centroid[d] + (centroid[d] - pts[worst][d]);
    const double fr = eval(xr);
    if (fr < vals[best]) {
      for (std::size_t d = 0; d < n; ++d) xe[d] = centroid[d] + 2.0 * (centroid[d] - pts[worst][d]);
      const double fe = eval(xe);
      if (fe < fr) {
        pts[worst] = xe;
        vals[worst] = fe;
      } else {
        pts[worst] = xr;
        vals[worst] = fr;
      }
      continue;
    }
    if (fr < vals[second]) {
      pts[worst] = xr;
      vals[worst] = fr;
      continue;
    }
    const bool outside = fr < vals[worst];
    for (std::size_t d = 0; d < n; ++d)
      xc[d] = outside ? centroid[d] + 0.5 * (xr[d] - centroid[d]) : centroid[d] + 0.5 * (pts[worst][d] - centroid[d]);
    const double fc = eval(xc);
    if (fc < std::min(fr, vals[worst])) {
      pts[worst] = xc;
      vals[worst] = fc;
      continue;
    }
    for (std::size_t k = 0; k <= n; ++k) {
      if (k == best) continue;
      for (std::size_t d = 0; d < n; ++d) pts[k][d] = pts[best][d] + 0.5 * (pts[k][d] - pts[best][d]);
      vals[k] = eval(pts[k]);
    }
  }

  const auto it = std::min_element(vals.begin(), vals.end());
  return {pts[static_cast<std::size_t>(it - vals.begin())], *it, evals, converged};
}

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t index) {
  // splitmix64 finalizer over (seed, index)
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace

NelderMeadResult nelder_mead(const Objective& f, std::vector<double> x0, const NelderMeadOptions& opt) {
  NelderMeadResult best = run_simplex(f, x0, opt, opt.max_evals);
  int used = best.evaluations;
  for (int r = 0; r < opt.restarts && used < opt.max_evals; ++r) {
    NelderMeadOptions o = opt;
    o.initial_step = opt.initial_step * std::pow(0.1, r + 1);
    NelderMeadResult next = run_simplex(f, best.x, o, opt.max_evals - used);
    used += next.evaluations;
    const bool improved = next.value < best.value - opt.ftol * (1.0 + std::abs(best.value));
    if (next.value < best.value) {
      next.evaluations = used;
      best = next;
    }
    if (!improved) break;
  }
  best.evaluations = used;
  return best;
}

MultiStartResult minimize_free(const Objective& objective, const Eliminator& eliminator, const Sampler& sampler,
                               int starts, const NelderMeadOptions& budget, std::uint64_t seed, int threads) {
  const Objective reduced = [&](std::span<const double> x) {
    const auto full = eliminator(x);
    if (!full) return kInf;
    return objective(*full);
  };

  MultiStartResult out;
  out.traces.resize(static_cast<std::size_t>(std::max(starts, 0)));
  parallel_for(
      out.traces.size(),
      [&](std::size_t i) {
        std::mt19937_64 rng(mix_seed(seed, i));
        StartTrace& tr = out.traces[i];
        for (int attempt = 0; attempt < 1000; ++attempt) {
          tr.start = sampler(rng);
          if (std::isfinite(reduced(tr.start))) {
            tr.feasible = true;
            break;
          }
          ++tr.resamples;
        }
        if (!tr.feasible) return;
        const NelderMeadResult r = nelder_mead(reduced, tr.start, budget);
        tr.x = r.x;
        tr.value = r.value;
        tr.evaluations = r.evaluations;
      },
      threads);

  bool any = false;
  for (const StartTrace& tr : out.traces) {
    out.total_evaluations += tr.evaluations;
    if (!tr.feasible) continue;
    if (!any || tr.value < out.best_value) {
      out.best_value = tr.value;
      out.best_x = tr.x;
      any = true;
    }
  }
  if (!any) throw AllStartsInfeasible("minimize_free: every start was infeasible");
  return out;
}

}  // namespace gausspack::oracle
