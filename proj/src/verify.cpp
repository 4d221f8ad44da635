#include "gausspack/verify.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>
#include <random>
#include <sstream>

#include "gausspack/oracle/observable.hpp"
#include "gausspack/oracle/overlap.hpp"
#include "gausspack/oracle/phase_space.hpp"
#include "gausspack/oracle/propagate.hpp"
#include "gausspack/oracle/wigner.hpp"
#include "gausspack/parallel.hpp"
#include "gausspack/special_functions.hpp"

namespace gausspack::verify {

namespace {

using Clock = std::chrono::steady_clock;
constexpr double kInf = std::numeric_limits<double>::infinity();

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

class Collector {
 public:
  Collector(std::string suite, std::vector<CheckResult>& out) : suite_(std::move(suite)), out_(out) {}

  void add(const std::string& criterion, const std::string& name, double measured, double tolerance,
           double seconds = 0.0, std::string detail = {}) {
    CheckResult r;
    r.suite = suite_;
    r.criterion = criterion;
    r.name = name;
    r.measured = measured;
    r.tolerance = tolerance;
    r.passed = std::isfinite(measured) && measured <= tolerance;
    r.seconds = seconds;
    r.detail = std::move(detail);
    out_.push_back(std::move(r));
  }

  // Runs f and records a failed check if it throws.
  template <class F>
  void guarded(const std::string& criterion, const std::string& name, F&& f) {
    try {
      f();
    } catch (const std::exception& e) {
      add(criterion, name, kInf, 0.0, 0.0, std::string("exception: ") + e.what());
    }
  }

 private:
  std::string suite_;
  std::vector<CheckResult>& out_;
};

double max_param_diff(const RealParams& a, const RealParams& b) {
  // Compared at a common scale: mu * (quadratic coefficients), linear terms as is.
  const double qa[] = {a.mu * a.alpha, a.mu * a.beta, a.mu * a.gamma, a.mu * a.chi_a, a.mu * a.chi_c, a.mu * a.rho,
                       a.F1,           a.F2,          a.G1,           a.G2};
  const double qb[] = {b.mu * b.alpha, b.mu * b.beta, b.mu * b.gamma, b.mu * b.chi_a, b.mu * b.chi_c, b.mu * b.rho,
                       b.F1,           b.F2,          b.G1,           b.G2};
  double m = 0.0;
  for (int k = 0; k < 10; ++k) m = std::max(m, std::abs(qa[k] - qb[k]));
  return m;
}

RealParams random_params(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> U(0.0, 1.0);
  auto in = [&](double lo, double hi) { return lo + (hi - lo) * U(rng); };
  RealParams p;
  p.mu = in(0.5, 2.0);
  p.alpha = in(0.5, 2.0);
  p.gamma = in(0.5, 2.0);
  p.beta = in(-0.8, 0.8) * std::sqrt(p.alpha * p.gamma);
  p.chi_a = in(-1, 1);
  p.chi_c = in(-1, 1);
  p.rho = in(-1, 1);
  p.F1 = in(-2, 2);
  p.F2 = in(-2, 2);
  p.G1 = in(-2, 2);
  p.G2 = in(-2, 2);
  return p;
}

MinPacketSpec random_min_spec(std::mt19937_64& rng, bool co, double li_max, double lc_max) {
  std::uniform_real_distribution<double> U(0.0, 1.0);
  MinPacketSpec s;
  s.L_i_abs = 0.05 + (li_max - 0.05) * U(rng);
  s.L_c_abs = lc_max * U(rng);
  s.lambda = U(rng) < 0.5 ? 1 : -1;
  s.lambda_c = co ? s.lambda : -s.lambda;
  s.u = 2 * std::numbers::pi * U(rng);
  s.v = 2 * std::numbers::pi * U(rng);
  return s;
}

// ---------------------------------------------------------------- min suite

void suite_min(Collector& c, const VerifyOptions& opt) {
  // AC1: brute-force constrained minimum.
  {
    const auto t0 = Clock::now();
    for (double L : {0.0, 0.5, 1.0, 2.7}) {
      c.guarded("AC1", "verify_minimum L_i=" + fmt(L), [&] {
        MinimumSearchBudget b;
        b.seed = opt.seed;
        b.threads = opt.threads;
        const auto t1 = Clock::now();
        const MinimumReport r = verify_minimum(L, b);
        const double dt = seconds_since(t1);
        c.add("AC1", "simplex minimum L_i=" + fmt(L), std::abs(r.best - (1 + L)), 1e-6, dt,
              "best " + fmt(r.best) + ", predicted " + fmt(1 + L));
        c.add("AC1", "closed-form minimum L_i=" + fmt(L), std::abs(r.predicted - (1 + L)), 1e-12);
        c.add("AC1", "classical part minimum L_i=" + fmt(L), std::abs(r.classical_best - r.classical_predicted), 1e-6);
      });
    }
    const double dt = seconds_since(t0);
    c.add("AC1", "runtime (s)", dt, 30.0, dt);
  }

  // AC3: universal invariants of minimal packets.
  {
    const auto t0 = Clock::now();
    double e0 = 0.0, e2 = 0.0, ek = 0.0, ecov = 0.0;
    int idx = 0;
    for (double Li : {0.0, 0.25, 1.0, 2.7, 6.0})
      for (double Lc : {0.0, 0.5, 1.5, 4.0, 9.0})
        for (double u : {0.0, 0.7, 2.1, 4.0}) {
          MinPacketSpec s;
          s.L_i_abs = Li;
          s.L_c_abs = Lc;
          s.lambda = (idx % 2) ? -1 : 1;
          s.lambda_c = (idx % 3) ? 1 : -1;
          s.u = u;
          s.v = 0.3 + 0.1 * idx;
          ++idx;
          const GaussianState g = gaussian_state(build_min_packet(s));
          const UniversalInvariants inv = universal_invariants(g);
          e0 = std::max(e0, std::abs(inv.D0 - 1.0 / 16));
          e2 = std::max(e2, std::abs(inv.D2 + 0.5));
          ek = std::max({ek, std::abs(inv.kappa1 - 0.5), std::abs(inv.kappa2 - 0.5)});
          const GaussianState cf = min_packet_covariances(s);
          ecov = std::max(ecov, (cf.cov - g.cov).cwiseAbs().maxCoeff() / std::max(1.0, g.cov.cwiseAbs().maxCoeff()));
        }
    const double dt = seconds_since(t0);
    c.add("AC3", "D0 = 1/16 over 5x5x4 grid", e0, 1e-12, dt);
    c.add("AC3", "D2 = -1/2 over 5x5x4 grid", e2, 1e-12);
    c.add("AC3", "symplectic eigenvalues = 1/2", ek, 1e-10);
    c.add("AC3", "closed-form covariances vs packet moments (relative)", ecov, 1e-12);
  }

  // AC9: invariant squeezing.
  {
    const auto t0 = Clock::now();
    double es = 0.0, ebf = 0.0, sup = 0.0;
    for (int k = 0; k < 40; ++k) {
      const double eta = 0.999 * k / 39.0;
      MinPacketSpec s;
      s.L_i_abs = eta * eta / (1 - eta * eta);
      s.L_c_abs = 0.7;
      s.u = 0.37 * k;
      s.v = 0.11 * k;
      s.lambda = k % 2 ? 1 : -1;
      s.lambda_c = k % 3 ? 1 : -1;
      const Squeezing q = squeezing(s);
      const double target = 1 / (1 + eta);
      es = std::max({es, std::abs(q.S_x - target), std::abs(q.S_y - target)});
      sup = std::max({sup, 1 - q.S_x, 1 - q.S_y});
      // Brute force: smallest normalized quadrature variance over rotation angles.
      const Mat4 cov = covariances(build_min_packet(s));
      const double m = s.M * s.omega;
      for (int ax = 0; ax < 2; ++ax) {
        const double xx = cov(ax, ax), pp = cov(ax + 2, ax + 2), xp = cov(ax, ax + 2);
        auto var = [&](double phi) {
          const double cs = std::cos(phi), sn = std::sin(phi);
          return 2 * (m * xx * cs * cs + pp * sn * sn / m + 2 * xp * cs * sn);
        };
        double best = 1e300, arg = 0.0;
        for (int j = 0; j < 720; ++j) {
          const double phi = std::numbers::pi * j / 720;
          if (var(phi) < best) best = var(phi), arg = phi;
        }
        double a = arg - std::numbers::pi / 720, b = arg + std::numbers::pi / 720;
        const double g = (std::sqrt(5.0) - 1) / 2;
        for (int it = 0; it < 80; ++it) {
          const double x1 = b - g * (b - a), x2 = a + g * (b - a);
          if (var(x1) < var(x2)) b = x2; else a = x1;
        }
        ebf = std::max(ebf, std::abs(var(0.5 * (a + b)) - target));
      }
    }
    const double dt = seconds_since(t0);
    c.add("AC9", "S_x = S_y = 1/(1+eta)", es, 1e-12, dt);
    c.add("AC9", "rotation-angle brute force vs 1/(1+eta)", ebf, 1e-9);
    c.add("AC9", "sup (1 - S) over eta < 1 minus 1/2", std::max(0.0, sup - 0.5), 0.0, 0.0,
          "sup(1-S) = " + fmt(sup));
  }
}

// ------------------------------------------------------------ moments suite

void suite_moments(Collector& c, const VerifyOptions& opt) {
  const auto t0 = Clock::now();
  constexpr int kCases = 100;
  std::vector<RealParams> ps(kCases);
  std::mt19937_64 rng(opt.seed);
  for (auto& p : ps) p = random_params(rng);
  std::vector<double> err_mean(kCases), err_cov(kCases), err_L(kCases), err_norm(kCases);
  std::vector<std::string> failure(kCases);
  parallel_for(
      kCases,
      [&](std::size_t i) {
        try {
          const oracle::MomentOracle o(ps[i]);
          const GaussianState q = o.state();
          const GaussianState g = gaussian_state(ps[i]);
          err_mean[i] = (q.mean() - g.mean()).cwiseAbs().maxCoeff();
          err_cov[i] = (q.cov - g.cov).cwiseAbs().maxCoeff();
          err_L[i] = std::abs(o.expectation(oracle::Observable::angular_momentum()) - angular_split(ps[i]).L_total);
          err_norm[i] = std::abs(oracle::quadrature_norm(ps[i]) - 1);
        } catch (const std::exception& e) {
          failure[i] = e.what();
          err_mean[i] = err_cov[i] = err_L[i] = err_norm[i] = kInf;
        }
      },
      opt.threads);
  const double dt = seconds_since(t0);
  std::string detail;
  for (int i = 0; i < kCases; ++i)
    if (!failure[i].empty()) {
      detail = "case " + std::to_string(i) + ": " + failure[i];
      break;
    }
  c.add("AC2", "first moments vs quadrature (100 packets)", *std::max_element(err_mean.begin(), err_mean.end()), 1e-8,
        dt, detail);
  c.add("AC2", "covariances vs quadrature (100 packets)", *std::max_element(err_cov.begin(), err_cov.end()), 1e-8);
  c.add("AC2", "L_c + L_i vs quadrature <L_z>", *std::max_element(err_L.begin(), err_L.end()), 1e-8);
  c.add("AC2", "normalization |N|^2 by quadrature", *std::max_element(err_norm.begin(), err_norm.end()), 1e-8);
  c.add("AC2", "runtime (s)", dt, 60.0, dt);
}

// --------------------------------------------------------------- fock suite

void suite_fock(Collector& c, const VerifyOptions& opt) {
  // AC5: worked sub-Poissonian optima.
  {
    const SubPoissonOptimum a = subpoisson_optimum(1.0 / 8), b = subpoisson_optimum(1.0 / 3);
    c.add("AC5", "L_i=1/8: L = 13/8", std::abs(a.L_total - 13.0 / 8), 1e-12);
    c.add("AC5", "L_i=1/8: sigma_L = 33/32", std::abs(a.sigma_min - 33.0 / 32), 1e-12);
    c.add("AC5", "L_i=1/8: eccentricity = 1/sqrt2", std::abs(a.eccentricity - 1 / std::numbers::sqrt2), 1e-12);
    c.add("AC5", "L_i=1/3: L = 19/3", std::abs(b.L_total - 19.0 / 3), 1e-12);
    c.add("AC5", "L_i=1/3: sigma_L = 26/9", std::abs(b.sigma_min - 26.0 / 9), 1e-12);
    c.add("AC5", "L_i=1/3: eccentricity = sqrt(2/3)", std::abs(b.eccentricity - std::sqrt(2.0 / 3)), 1e-12);
    const GoldenResult g = minimize_sigma_at_fixed_total(13.0 / 8);
    c.add("AC5", "golden-section minimum at L = 13/8", std::abs(g.value - 33.0 / 32), 1e-10,
          0.0, "argmin L_i = " + fmt(g.x));
  }

  // AC6: coefficient triple agreement.
  {
    const auto t0 = Clock::now();
    std::mt19937_64 rng(opt.seed + 6);
    double e_norm = 0.0, e_mean = 0.0, e_sig = 0.0, e_gen = 0.0, e_ovl = 0.0;
    std::string detail;
    for (int k = 0; k < 20; ++k) {
      const bool co = k < 10;
      const MinPacketSpec s = random_min_spec(rng, co, 1.2, 2.5);
      const std::string tag = std::string(co ? "co" : "anti") + " #" + std::to_string(k % 10);
      c.guarded("AC6", "coefficients " + tag, [&] {
        const FockCoefficients f = expand(s);
        e_norm = std::max(e_norm, std::abs(f.norm() - 1));
        e_mean = std::max(e_mean, std::abs(f.mean_m() - s.L_total()));
        const double closed = sigma_L_closed(s);
        e_sig = std::max(e_sig, std::abs(f.variance_m() - closed));
        if (co) e_gen = std::max(e_gen, std::abs(generating_derivatives(s).sigma_L() - closed));

        // Overlaps for the largest coefficients plus modes that must vanish.
        std::vector<std::pair<double, std::pair<int, int>>> ranked;
        for (const auto& [key, v] : f.entries) ranked.push_back({-std::abs(v), key});
        std::sort(ranked.begin(), ranked.end());
        std::vector<LGMode> modes;
        std::vector<cplx> expect;
        for (std::size_t j = 0; j < std::min<std::size_t>(ranked.size(), 16); ++j) {
          const auto key = ranked[j].second;
          modes.push_back({key.first, key.second, s.mu()});
          expect.push_back(f.at(key.first, key.second));
        }
        if (co)
          for (int m : {0, 1, 2}) {
            modes.push_back({1, s.lambda * m, s.mu()});
            expect.push_back(f.at(1, s.lambda * m));
          }
        const std::vector<cplx> got = oracle::overlaps(build_min_packet(s), modes);
        for (std::size_t j = 0; j < modes.size(); ++j) {
          const double e = std::abs(got[j] - expect[j]);
          if (e > e_ovl) {
            e_ovl = e;
            detail = tag + " mode (" + std::to_string(modes[j].n_r) + "," + std::to_string(modes[j].m) + ")";
          }
        }
      });
    }
    const double dt = seconds_since(t0);
    c.add("AC6", "analytic coefficients vs quadrature overlaps", e_ovl, 1e-7, dt, detail);
    c.add("AC6", "sum |c|^2 = 1", e_norm, 1e-8);
    c.add("AC6", "sum m |c|^2 = L", e_mean, 1e-8);
    c.add("AC6", "sigma_L from coefficients vs closed form", e_sig, 1e-9);
    c.add("AC6", "generating-function derivatives vs closed form", e_gen, 1e-9);
  }

  // AC10: special-function identities and Wick symmetry.
  {
    const auto t0 = Clock::now();
    std::mt19937_64 rng(opt.seed + 10);
    std::uniform_real_distribution<double> U(-1.0, 1.0);
    double e_mehler = 0.0, e_add = 0.0, e_shift = 0.0, e_inv = 0.0, e_lag = 0.0, e_wick = 0.0, e_wig = 0.0;
    for (int trial = 0; trial < 50; ++trial) {
      // Mehler kernel.
      const double zeta = 0.6 * U(rng), x = 2 * U(rng), y = 2 * U(rng);
      const auto hx = special::hermite_all(150, x), hy = special::hermite_all(150, y);
      double sum = 0.0;
      for (int k = 0; k <= 150; ++k)
        sum += std::exp(k * std::log(std::abs(zeta) / 2) - special::log_factorial(k)) * (zeta < 0 && k % 2 ? -1 : 1) *
               hx[k] * hy[k];
      const double closed = special::mehler_closed_form(zeta, x, y);
      e_mehler = std::max(e_mehler, std::abs(sum - closed) / std::max(1.0, std::abs(closed)));

      // H_n(x + y) = sum_k C(n,k) H_k(x) (2y)^(n-k).
      const int n = trial % 15;
      double add = 0.0;
      for (int k = 0; k <= n; ++k) add += special::binomial(n, k) * hx[k] * std::pow(2 * y, n - k);
      const double lhs = special::hermite(n, x + y);
      e_add = std::max(e_add, std::abs(add - lhs) / std::max(1.0, std::abs(lhs)));

      // sum_k t^k H_{n+k}(x)/k! = exp(2xt - t^2) H_n(x - t).
      const double t = 0.5 * U(rng);
      double sh = 0.0;
      for (int k = 0; k + n <= 150; ++k) sh += std::pow(t, k) / std::exp(special::log_factorial(k)) * hx[n + k];
      const double shc = special::hermite_shift_closed_form(n, t, x);
      e_shift = std::max(e_shift, std::abs(sh - shc) / std::max(1.0, std::abs(shc)));

      // x^k = sum_n coefficient(k, m, n) L_n^(m)(x).
      const int kk = trial % 9, m = trial % 5;
      const double xs = 3 * (U(rng) + 1);
      double inv = 0.0, scale = 0.0;
      for (int j = 0; j <= kk; ++j) {
        const double term =
            static_cast<double>(special::laguerre_inversion_coefficient(kk, m, j)) * special::laguerre(j, m, xs);
        inv += term;
        scale += std::abs(term);
      }
      // Near x = 0 the terms cancel to many digits; measure against their size.
      e_lag = std::max(e_lag, std::abs(inv - std::pow(xs, kk)) / std::max(1.0, scale));
    }
    // Integer form: sum_n (-1)^(n+j) C(k+m,k-n) C(n+m,n-j) = delta_jk.
    for (int k = 0; k <= 12; ++k)
      for (int m = 0; m <= 6; ++m)
        for (int j = 0; j <= k; ++j) {
          long long s = 0;
          for (int n = j; n <= k; ++n)
            s += special::laguerre_inversion_coefficient(k, m, n) * special::laguerre_coefficient_scaled(n, m, j);
          // Both coefficients carry a factorial: the sum is k! delta_jk.
          long long expect = 0;
          if (j == k) {
            expect = 1;
            for (int q = 2; q <= k; ++q) expect *= q;
          }
          e_inv = std::max(e_inv, static_cast<double>(std::llabs(s - expect)));
        }

    // Wick fourth moments: permutation symmetry and Wigner-function averages.
    for (int trial = 0; trial < 5; ++trial) {
      Mat4 A;
      for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) A(i, j) = U(rng);
      const Mat4 cov = A * A.transpose() + 0.5 * Mat4::Identity();
      GaussianState gs{0, 0, 0, 0, cov};
      for (int a = 0; a < 4; ++a)
        for (int b = a; b < 4; ++b)
          for (int cc = b; cc < 4; ++cc)
            for (int d = cc; d < 4; ++d) {
              int idx[4] = {a, b, cc, d};
              const double ref = wick_fourth_moment(cov, a, b, cc, d);
              std::sort(idx, idx + 4);
              do {
                e_wick = std::max(e_wick, std::abs(wick_fourth_moment(cov, idx[0], idx[1], idx[2], idx[3]) - ref));
              } while (std::next_permutation(idx, idx + 4));
              if (trial == 0) {
                const double w = oracle::wigner_average(
                    gs, [&](const Vec4& v) { return v(a) * v(b) * v(cc) * v(d); }, 4);
                e_wig = std::max(e_wig, std::abs(w - ref) / std::max(1.0, std::abs(ref)));
              }
            }
    }
    const double dt = seconds_since(t0);
    c.add("AC10", "Mehler identity", e_mehler, 1e-9, dt);
    c.add("AC10", "Hermite addition formula", e_add, 1e-9);
    c.add("AC10", "Hermite shift generating sum", e_shift, 1e-9);
    c.add("AC10", "Laguerre inversion (integer coefficients)", e_inv, 0.0);
    c.add("AC10", "Laguerre inversion (power expansion)", e_lag, 1e-9);
    c.add("AC10", "Wick fourth moment permutation symmetry", e_wick, 1e-9);
    c.add("AC10", "Wick fourth moment vs Gauss-Hermite Wigner average", e_wig, 1e-9);
  }
}

// ------------------------------------------------------------- evolve suite

void suite_evolve(Collector& c, const VerifyOptions& opt) {
  // AC4: conservation along trajectories.
  {
    const auto t0 = Clock::now();
    std::mt19937_64 rng(opt.seed + 4);
    const EvolutionContext ctxs[] = {EvolutionContext::oscillator(1.3, 1.0), EvolutionContext::magnetic(0.8, 0.5, 1.2),
                                     EvolutionContext::free_particle(1.0)};
    double e_inv = 0.0, e_L = 0.0, e_flow = 0.0;
    for (const EvolutionContext& ctx : ctxs) {
      std::vector<RealParams> ps;
      for (int k = 0; k < 3; ++k) ps.push_back(random_params(rng));
      for (int k = 0; k < 2; ++k) ps.push_back(build_min_packet(random_min_spec(rng, k == 0, 2.0, 2.0)));
      const double T = ctx.kind == SystemKind::free_particle ? 5.0 : 3 * std::numbers::pi / ctx.omega_tilde();
      for (const RealParams& p : ps) {
        const auto tr = trajectory(p, ctx, 0.0, T, 50, opt.threads);
        const UniversalInvariants i0 = tr.front().invariants;
        const double L0 = tr.front().split.L_total;
        for (const TrajectoryPoint& pt : tr) {
          e_inv = std::max({e_inv, std::abs(pt.invariants.D0 - i0.D0) / std::abs(i0.D0),
                            std::abs(pt.invariants.D2 - i0.D2) / std::abs(i0.D2)});
          e_L = std::max(e_L, std::abs(pt.split.L_total - L0) / std::max(1.0, std::abs(L0)));
        }
        const GaussianState s0 = gaussian_state(p);
        for (double t : {0.3, 1.7, T}) {
          const GaussianState a = evolve_state(s0, ctx, t), b = oracle::evolve_state_numeric(s0, ctx, t);
          const double scale = std::max(1.0, b.cov.cwiseAbs().maxCoeff());
          e_flow = std::max({e_flow, (a.cov - b.cov).cwiseAbs().maxCoeff() / scale,
                             (a.mean() - b.mean()).cwiseAbs().maxCoeff() / std::max(1.0, b.mean().norm())});
        }
      }
    }
    const double dt = seconds_since(t0);
    c.add("AC4", "D0, D2 relative drift (3 Hamiltonians)", e_inv, 1e-10, dt);
    c.add("AC4", "angular momentum relative drift (3 Hamiltonians)", e_L, 1e-10);
    c.add("AC4", "closed-form flow vs matrix exponential", e_flow, 1e-9);

    c.guarded("AC4", "oscillator propagator quadrature", [&] {
      MinPacketSpec s;
      s.L_i_abs = 0.6;
      s.L_c_abs = 1.1;
      s.u = 0.4;
      s.v = 1.0;
      const EvolutionContext ctx = EvolutionContext::oscillator(1.0, 1.0);
      const auto t1 = Clock::now();
      const oracle::PropagationResult r = oracle::propagate_numeric(build_min_packet(s), ctx, 0.7);
      const RealParams expect = build_min_packet(evolve_oscillator(s, 0.7));
      c.add("AC4", "oscillator propagator quadrature vs phase law (omega t = 0.7)", max_param_diff(r.fitted, expect),
            1e-6, seconds_since(t1), "fit residual " + fmt(r.residual));
    });
  }

  // AC7: magnetic zero variance.
  {
    const auto t0 = Clock::now();
    std::mt19937_64 rng(opt.seed + 7);
    std::uniform_real_distribution<double> U(0.0, 1.0);
    const EvolutionContext ctx = EvolutionContext::magnetic(0.7, 0.0, 1.0);
    double e_closed = 0.0, e_wig = 0.0, e_static = 0.0;
    std::string detail;
    for (int k = 0; k < 5; ++k) {
      MinPacketSpec s;
      s.L_i_abs = 0.1 + 2.9 * U(rng);
      s.L_c_abs = 4 * U(rng);
      s.u = 2 * std::numbers::pi * U(rng);
      s.v = 2 * std::numbers::pi * U(rng);
      c.guarded("AC7", "magnetic packet #" + std::to_string(k), [&] {
        e_closed = std::max(e_closed, std::abs(sigma_E(s, ctx)));
        MinPacketSpec sm = s;
        sm.omega = ctx.omega_tilde();
        sm.M = ctx.M;
        const RealParams p = build_min_packet(sm);
        const GaussianState g = gaussian_state(p);
        e_wig = std::max(e_wig, std::abs(oracle::wigner_quadratic_variance(g, oracle::hamiltonian_matrix(ctx), 6)));
        if (k < 2) {
          const oracle::PropagationResult r = oracle::propagate_numeric(p, ctx, 1.1);
          const double e = max_param_diff(r.fitted, p);
          if (e > e_static) e_static = e, detail = "fit residual " + fmt(r.residual);
        }
      });
    }
    const double dt = seconds_since(t0);
    c.add("AC7", "sigma_E for lambda = lambda_c = +1", e_closed, 1e-12, dt);
    c.add("AC7", "Wigner-average energy variance", e_wig, 1e-9);
    c.add("AC7", "propagated packet does not rotate", e_static, 1e-6, 0.0, detail);
  }

  // AC8: shrinking free packets.
  {
    const auto t0 = Clock::now();
    double e_tau = 0.0, e_fmin = 0.0, e_sqrt2 = 0.0, e_eps = 0.0, e_epsmax = 0.0, e_prop = 0.0, e_gen = 0.0;
    std::string detail;
    for (double beta0 : {0.0, 0.3})
      for (double chi0 : {1.0, 3.0}) {
        const std::string tag = "beta0=" + fmt(beta0) + " chi0=" + fmt(chi0);
        c.guarded("AC8", "shrinking " + tag, [&] {
          RealParams p;
          p.alpha = p.gamma = 1.0;
          p.beta = beta0;
          p.chi_a = -chi0;
          p.chi_c = chi0;
          const ShrinkAnalysis a = shrink_analysis(p);
          const SymmetricFreeForm sf = *symmetric_form(p);
          if (!a.shrinks) throw std::runtime_error("packet does not shrink");
          // Sampled F(tau) from the generic evolution, then refined.
          auto F = [&](double tau) { return evolve_free(p, tau / 2).F_tau; };
          const double hi = 4 * a.tau_min;
          double best = 0.0, fbest = 1e300;
          for (int j = 0; j <= 4000; ++j) {
            const double tau = hi * j / 4000;
            if (F(tau) < fbest) fbest = F(tau), best = tau;
          }
          double lo = best - hi / 4000, up = best + hi / 4000;
          const double g = (std::sqrt(5.0) - 1) / 2;
          for (int it = 0; it < 100; ++it) {
            const double x1 = up - g * (up - lo), x2 = lo + g * (up - lo);
            if (F(x1) < F(x2)) up = x2; else lo = x1;
          }
          const double tmin = 0.5 * (lo + up);
          // The minimum is quadratic, so its location is only resolved to ~sqrt(eps).
          e_tau = std::max(e_tau, std::abs(tmin - a.tau_min) / a.tau_min);
          e_fmin = std::max(e_fmin, std::abs(F(tmin) - a.F_min));
          e_sqrt2 = std::max(e_sqrt2, std::abs(F(std::numbers::sqrt2 * a.tau_min) - 1));
          e_gen = std::max(e_gen, std::abs(free_shape_function(sf, a.tau_min) - a.F_min));
          // Eccentricity maximum at tau_0.
          auto eps = [&](double tau) { return ellipse(evolve_free(p, tau / 2).params_t, 1.0).eccentricity; };
          e_eps = std::max(e_eps, std::abs(eps(a.tau_0) - a.eps_max));
          for (int j = 0; j <= 200; ++j) e_epsmax = std::max(e_epsmax, eps(3 * a.tau_0 * j / 200) - a.eps_max);
          // Direct propagator quadrature against the closed forms.
          for (double tau : {0.5 * a.tau_min, a.tau_min, std::numbers::sqrt2 * a.tau_min, a.tau_0}) {
            const oracle::PropagationResult r =
                oracle::propagate_numeric(p, EvolutionContext::free_particle(1.0), tau / 2);
            const double e = max_param_diff(r.fitted, free_symmetric_closed_form(sf, tau));
            if (e > e_prop) e_prop = e, detail = tag + " tau=" + fmt(tau) + " fit residual " + fmt(r.residual);
          }
        });
      }
    const double dt = seconds_since(t0);
    c.add("AC8", "F(tau) sampled minimum vs F_min", e_fmin, 1e-10, dt);
    c.add("AC8", "argmin of sampled F vs tau_min (relative)", e_tau, 1e-6);
    c.add("AC8", "F(sqrt2 tau_min) = 1", e_sqrt2, 1e-10);
    c.add("AC8", "closed-form F(tau_min) = F_min", e_gen, 1e-10);
    c.add("AC8", "eccentricity(tau_0) = eps_max", e_eps, 1e-10);
    c.add("AC8", "sampled eccentricity never exceeds eps_max", std::max(0.0, e_epsmax), 1e-10);
    c.add("AC8", "propagator quadrature vs closed forms", e_prop, 1e-6, 0.0, detail);
  }
}

}  // namespace

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names = {"min", "moments", "fock", "evolve"};
  return names;
}

std::vector<CheckResult> run_suite(std::string_view suite, const VerifyOptions& opt) {
  std::vector<CheckResult> out;
  if (suite == "all") {
    for (const std::string& s : suite_names()) {
      auto r = run_suite(s, opt);
      out.insert(out.end(), r.begin(), r.end());
    }
    return out;
  }
  Collector c{std::string(suite), out};
  if (suite == "min")
    suite_min(c, opt);
  else if (suite == "moments")
    suite_moments(c, opt);
  else if (suite == "fock")
    suite_fock(c, opt);
  else if (suite == "evolve")
    suite_evolve(c, opt);
  else
    throw DomainError("unknown suite: " + std::string(suite));
  return out;
}

std::vector<CriterionSummary> summarize(const std::vector<CheckResult>& results) {
  std::map<int, CriterionSummary> by;
  for (const CheckResult& r : results) {
    const int key = std::stoi(r.criterion.substr(2));
    CriterionSummary& s = by[key];
    s.criterion = r.criterion;
    ++s.checks;
    s.seconds += r.seconds;
    if (!r.passed) {
      s.passed = false;
      ++s.failed;
    }
    const double ratio =
        !std::isfinite(r.measured) ? kInf : (r.tolerance > 0 ? r.measured / r.tolerance : (r.measured > 0 ? kInf : 0));
    if (ratio >= s.worst_ratio || s.worst_name.empty()) {
      s.worst_ratio = ratio;
      s.worst_name = r.name;
    }
  }
  std::vector<CriterionSummary> out;
  for (auto& [k, s] : by) out.push_back(s);
  return out;
}

io::json report(const std::vector<CheckResult>& results, std::string_view suite, const VerifyOptions& opt) {
  io::json checks = io::json::array();
  bool ok = true;
  for (const CheckResult& r : results) {
    ok = ok && r.passed;
    io::json j{{"suite", r.suite},       {"criterion", r.criterion}, {"name", r.name},
               {"passed", r.passed},     {"tolerance", r.tolerance}, {"seconds", r.seconds}};
    if (std::isfinite(r.measured))
      j["measured"] = r.measured;
    else
      j["measured"] = nullptr;
    if (!r.detail.empty()) j["detail"] = r.detail;
    checks.push_back(j);
  }
  io::json crit = io::json::array();
  for (const CriterionSummary& s : summarize(results))
    crit.push_back({{"criterion", s.criterion}, {"passed", s.passed}, {"checks", s.checks}, {"failed", s.failed}});
  return io::json{{"schema_version", io::kSchemaVersion},
                  {"suite", std::string(suite)},
                  {"seed", opt.seed},
                  {"passed", ok},
                  {"criteria", crit},
                  {"checks", checks}};
}

}  // namespace gausspack::verify
