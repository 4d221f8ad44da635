// gausspack command-line tool: describe, minimize, fluct, expand, evolve, verify.

#include <CLI11.hpp>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <sstream>

#include "gausspack/io.hpp"
#include "gausspack/oracle/quadrature.hpp"
#include "gausspack/verify.hpp"

using namespace gausspack;
using io::json;

namespace {

constexpr int kExitDomain = 1;
constexpr int kExitUsage = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void emit(const std::string& text, const std::string& out) {
  if (out.empty() || out == "-") {
    std::cout << text;
    std::cout.flush();
    return;
  }
  std::ofstream f(out);
  if (!f) throw UsageError("cannot write " + out);
  f << text;
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

int parse_sign(int v, const char* flag) {
  if (v != 1 && v != -1) throw UsageError(std::string(flag) + " must be +1 or -1");
  return v;
}

// ------------------------------------------------------------------ describe

struct DescribeArgs {
  std::string spec, out;
};

void run_describe(const DescribeArgs& a) { emit(dump(io::describe(io::packet_from_json(io::load_json_file(a.spec)))), a.out); }

// ------------------------------------------------------------------ minimize

struct MinimizeArgs {
  double Li = 0, Lc = 0, u = 0, v = 0, omega = 1, M = 1;
  std::optional<double> w;
  int lambda = 1, lambda_c = 1;
  bool co = false, anti = false, check = false;
  std::uint64_t seed = 20240611;
  int threads = 0;
  std::string out;
};

MinPacketSpec min_spec(double Li, double Lc, int lambda, int lambda_c, double u, double v, double omega, double M) {
  MinPacketSpec s;
  s.L_i_abs = Li;
  s.L_c_abs = Lc;
  s.lambda = lambda;
  s.lambda_c = lambda_c;
  s.u = u;
  s.v = v;
  s.omega = omega;
  s.M = M;
  s.validate();
  return s;
}

void run_minimize(const MinimizeArgs& a) {
  const int lambda = parse_sign(a.lambda, "--lambda");
  int lambda_c = parse_sign(a.lambda_c, "--lambda-c");
  if (a.co) lambda_c = lambda;
  if (a.anti) lambda_c = -lambda;
  double u = a.u, v = a.v;
  // w = lambda (v - u/2): keep u, place v accordingly.
  if (a.w) v = lambda * *a.w + u / 2;
  const MinPacketSpec s = min_spec(a.Li, a.Lc, lambda, lambda_c, u, v, a.omega, a.M);
  const RealParams p = build_min_packet(s);
  const GaussianState g = gaussian_state(p);
  const Squeezing q = squeezing(s);

  json report;
  report["energy"] = a.omega * mean_energy(s);
  report["energy_over_hbar_omega"] = mean_energy(s);
  report["intrinsic_energy"] = intrinsic_energy(p);
  report["eta"] = s.eta();
  report["orbit_radius"] = s.orbit_radius();
  report["w"] = s.w();
  report["family"] = s.co_rotating() ? "co-rotating" : "anti-rotating";
  report["sigma_L"] = sigma_L(s);
  report["angular_momentum"] = io::to_json(angular_split(p));
  report["invariants"] = io::to_json(universal_invariants(g));
  report["squeezing"] = json{{"S_x", q.S_x}, {"S_y", q.S_y}, {"closed_form", q.closed_form}};
  report["ellipse"] = io::to_json(ellipse(p, 1.0));

  json j;
  j["schema_version"] = io::kSchemaVersion;
  j["spec"] = io::to_json(s);
  j["packet"] = io::to_json(p);
  j["report"] = report;
  if (a.check) {
    MinimumSearchBudget b;
    b.seed = a.seed;
    b.threads = a.threads;
    const MinimumReport r = verify_minimum(a.Li, b);
    j["verification"] = json{{"predicted", r.predicted},
                             {"best", r.best},
                             {"best_chi_elimination", r.best_chi_elimination},
                             {"best_rho_elimination", r.best_rho_elimination},
                             {"classical_best", r.classical_best},
                             {"starts", r.starts},
                             {"evaluations", r.evaluations},
                             {"seed", a.seed},
                             {"passed", r.passed}};
  }
  emit(dump(j), a.out);
}

// --------------------------------------------------------------------- fluct

struct FluctArgs {
  double Li = 0, Lc = 0, w = 0, omegaL = 0, M = 1;
  std::optional<double> omega;
  int lambda = 1;
  bool co = false, anti = false, magnetic = false;
  std::string out;
};

void run_fluct(const FluctArgs& a) {
  if (a.co == a.anti) throw UsageError("exactly one of --co and --anti is required");
  const int lambda = parse_sign(a.lambda, "--lambda");
  const int lambda_c = a.co ? lambda : -lambda;
  EvolutionContext ctx;
  if (a.magnetic) {
    if (a.omegaL == 0.0) throw UsageError("--magnetic needs a non-zero --omegaL");
    ctx = EvolutionContext::magnetic(a.omegaL, a.omega.value_or(0.0), a.M);
  } else {
    ctx = EvolutionContext::oscillator(a.omega.value_or(1.0), a.M);
  }
  // u = 0 and v = lambda w realize the requested w.
  const MinPacketSpec s = min_spec(a.Li, a.Lc, lambda, lambda_c, 0.0, lambda * a.w, ctx.omega_tilde(), a.M);
  json j = io::to_json(variance_report(s, ctx));
  j["system"] = std::string(system_name(ctx.kind));
  j["spec"] = io::to_json(s);
  json out;
  out["schema_version"] = io::kSchemaVersion;
  out.update(j);
  emit(dump(out), a.out);
}

// -------------------------------------------------------------------- expand

struct ExpandArgs {
  std::string spec, format = "csv", out;
  int kmax = -1;
};

void run_expand(const ExpandArgs& a) {
  const json in = io::load_json_file(a.spec);
  if (!io::is_min_spec(in)) throw DomainError("expand needs a minimal-packet spec (L_i, L_c, lambda, lambda_c, u, v)");
  const MinPacketSpec s = io::min_spec_from_json(in);
  const FockCoefficients c =
      a.kmax < 0 ? expand(s) : (s.co_rotating() ? corotating_coeffs(s, a.kmax) : antirotating_coeffs(s, a.kmax, a.kmax));
  if (a.format == "json") {
    json j;
    j["schema_version"] = io::kSchemaVersion;
    j["spec"] = io::to_json(s);
    j.update(io::to_json(c));
    emit(dump(j), a.out);
    return;
  }
  std::vector<std::vector<double>> rows;
  for (const auto& [k, v] : c.entries)
    rows.push_back({static_cast<double>(k.first), static_cast<double>(k.second), v.real(), v.imag(), std::norm(v)});
  std::ostringstream os;
  io::write_csv(os, {"n_r", "m", "re", "im", "prob"}, rows);
  emit(os.str(), a.out);
  if (c.truncation_warning) std::cerr << "warning: expansion truncated before reaching the tail tolerance\n";
}

// -------------------------------------------------------------------- evolve

struct EvolveArgs {
  std::string system = "osc", spec, out;
  std::optional<double> omega, omegaL, t0, t1;
  double M = 1;
  int steps = 200, threads = 0;
};

void run_evolve(const EvolveArgs& a) {
  EvolutionContext ctx;
  if (a.system == "osc") {
    ctx = EvolutionContext::oscillator(a.omega.value_or(1.0), a.M);
  } else if (a.system == "mag") {
    if (!a.omegaL) throw UsageError("--system mag needs --omegaL");
    ctx = EvolutionContext::magnetic(*a.omegaL, a.omega.value_or(0.0), a.M);
  } else if (a.system == "free") {
    ctx = EvolutionContext::free_particle(a.M);
  } else {
    throw UsageError("--system must be osc, mag or free");
  }
  ctx.validate();

  const json in = io::load_json_file(a.spec);
  RealParams p;
  if (io::is_min_spec(in)) {
    // Minimal packets are built for the selected Hamiltonian.
    MinPacketSpec s = io::min_spec_from_json(in);
    if (ctx.kind != SystemKind::free_particle) {
      s.omega = ctx.omega_tilde();
      s.M = ctx.M;
    }
    p = build_min_packet(s);
  } else {
    p = io::params_from_json(in);
  }

  const double t0 = a.t0.value_or(0.0);
  double t1 = 0.0;
  if (a.t1) {
    t1 = *a.t1;
  } else if (ctx.kind == SystemKind::free_particle) {
    double tau_end = 4.0;
    if (symmetric_form(p)) {
      const ShrinkAnalysis s = shrink_analysis(p);
      if (s.shrinks) tau_end = std::max(4 * s.tau_min, 4.0);
    }
    t1 = t0 + tau_end * ctx.M / 2;
  } else {
    t1 = t0 + std::numbers::pi / ctx.omega_tilde();
  }
  if (a.steps < 1) throw UsageError("--steps must be positive");

  const auto tr = trajectory(p, ctx, t0, t1, a.steps, a.threads);
  std::vector<std::vector<double>> rows;
  rows.reserve(tr.size());
  for (const TrajectoryPoint& pt : tr) rows.push_back(io::trajectory_row(pt));
  std::ostringstream os;
  io::write_csv(os, io::trajectory_columns(), rows);
  emit(os.str(), a.out);
}

// -------------------------------------------------------------------- verify

struct VerifyArgs {
  std::string suite = "all", report;
  std::uint64_t seed = 20240611;
  int threads = 0;
};

int run_verify(const VerifyArgs& a) {
  if (a.suite != "all" && std::find(verify::suite_names().begin(), verify::suite_names().end(), a.suite) ==
                              verify::suite_names().end())
    throw UsageError("unknown suite " + a.suite);
  verify::VerifyOptions opt;
  opt.seed = a.seed;
  opt.threads = a.threads;
  const auto results = verify::run_suite(a.suite, opt);
  for (const verify::CheckResult& r : results)
    std::cerr << (r.passed ? "  ok   " : "  FAIL ") << r.criterion << "  " << r.name << "  measured "
              << io::format_double(r.measured) << "  tol " << io::format_double(r.tolerance)
              << (r.detail.empty() ? "" : "  (" + r.detail + ")") << "\n";
  const json rep = verify::report(results, a.suite, opt);
  emit(dump(rep), a.report);
  return rep["passed"].get<bool>() ? 0 : kExitDomain;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Gaussian wave packets with angular momentum: moments, minimal packets, fluctuations, "
               "Laguerre-Gauss expansions and exact evolution"};
  app.require_subcommand(1);

  DescribeArgs da;
  auto* describe = app.add_subcommand("describe", "Moments, angular-momentum split, ellipse and invariants of a packet");
  describe->add_option("--spec", da.spec, "Packet descriptor or minimal-packet spec (JSON)")->required()->check(CLI::ExistingFile);
  describe->add_option("--out", da.out, "Output file (default: standard output)");

  MinimizeArgs ma;
  auto* minimize = app.add_subcommand("minimize", "Minimal-energy packet for given |L_i|, |L_c| and phases");
  minimize->add_option("--Li", ma.Li, "|L_i| (units of hbar)")->required();
  minimize->add_option("--Lc", ma.Lc, "|L_c| (units of hbar)")->required();
  minimize->add_option("--lambda", ma.lambda, "Sign of L_i (+1 or -1)");
  minimize->add_option("--lambda-c", ma.lambda_c, "Sign of L_c (+1 or -1)");
  auto* mco = minimize->add_flag("--co", ma.co, "Co-rotating: lambda_c = lambda");
  minimize->add_flag("--anti", ma.anti, "Anti-rotating: lambda_c = -lambda")->excludes(mco);
  minimize->add_option("--u", ma.u, "Shape phase u");
  minimize->add_option("--v", ma.v, "Orbit phase v");
  minimize->add_option("--w", ma.w, "Relative phase w = lambda (v - u/2); overrides --v");
  minimize->add_option("--omega", ma.omega, "Oscillator frequency");
  minimize->add_option("--M", ma.M, "Mass");
  minimize->add_flag("--verify", ma.check, "Also run the brute-force simplex check of the minimum");
  minimize->add_option("--seed", ma.seed, "Seed for --verify");
  minimize->add_option("--threads", ma.threads, "Worker threads (0 = GAUSSPACK_THREADS or hardware)");
  minimize->add_option("--out", ma.out, "Output file (default: standard output)");

  FluctArgs fa;
  auto* fluct = app.add_subcommand("fluct", "Angular-momentum and energy variances of a minimal packet");
  fluct->add_option("--Li", fa.Li, "|L_i|")->required();
  fluct->add_option("--Lc", fa.Lc, "|L_c|")->required();
  fluct->add_option("--w", fa.w, "Relative phase w")->required();
  fluct->add_option("--lambda", fa.lambda, "Sign of L_i (+1 or -1)");
  auto* fco = fluct->add_flag("--co", fa.co, "Co-rotating family");
  fluct->add_flag("--anti", fa.anti, "Anti-rotating family")->excludes(fco);
  fluct->add_flag("--magnetic", fa.magnetic, "Charged particle in a magnetic field instead of the oscillator");
  fluct->add_option("--omegaL", fa.omegaL, "Larmor frequency (with --magnetic)");
  fluct->add_option("--omega", fa.omega, "Oscillator frequency (with --magnetic: extra confining frequency)");
  fluct->add_option("--M", fa.M, "Mass");
  fluct->add_option("--out", fa.out, "Output file (default: standard output)");

  ExpandArgs ea;
  auto* expand_cmd = app.add_subcommand("expand", "Laguerre-Gauss expansion coefficients of a minimal packet");
  expand_cmd->add_option("--spec", ea.spec, "Minimal-packet spec (JSON)")->required()->check(CLI::ExistingFile);
  expand_cmd->add_option("--kmax", ea.kmax, "Largest index kept (negative: adaptive truncation)");
  expand_cmd->add_option("--format", ea.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  expand_cmd->add_option("--out", ea.out, "Output file (default: standard output)");

  EvolveArgs va;
  auto* evolve = app.add_subcommand("evolve", "Exact trajectory of moments, invariants and ellipse geometry");
  evolve->add_option("--system", va.system, "osc, mag or free")->check(CLI::IsMember({"osc", "mag", "free"}));
  evolve->add_option("--spec", va.spec, "Packet descriptor or minimal-packet spec (JSON)")->required()->check(CLI::ExistingFile);
  evolve->add_option("--omega", va.omega, "Oscillator frequency (mag: confining frequency, default 0)");
  evolve->add_option("--omegaL", va.omegaL, "Larmor frequency (mag)");
  evolve->add_option("--M", va.M, "Mass");
  evolve->add_option("--t0", va.t0, "Start time (default 0)");
  evolve->add_option("--t1", va.t1, "End time (default: half a period, or tau = max(4 tau_min, 4) for free packets)");
  evolve->add_option("--steps", va.steps, "Number of samples");
  evolve->add_option("--threads", va.threads, "Worker threads (0 = GAUSSPACK_THREADS or hardware)");
  evolve->add_option("--out", va.out, "CSV output file (default: standard output)");

  VerifyArgs ra;
  auto* verify_cmd = app.add_subcommand("verify", "Run acceptance checks against the numerical oracles");
  verify_cmd->add_option("--suite", ra.suite, "all, min, moments, fock or evolve")
      ->check(CLI::IsMember({"all", "min", "moments", "fock", "evolve"}));
  verify_cmd->add_option("--seed", ra.seed, "Seed of the randomized checks");
  verify_cmd->add_option("--threads", ra.threads, "Worker threads (0 = GAUSSPACK_THREADS or hardware)");
  verify_cmd->add_option("--report", ra.report, "JSON report file (default: standard output)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (*describe) run_describe(da);
    if (*minimize) run_minimize(ma);
    if (*fluct) run_fluct(fa);
    if (*expand_cmd) run_expand(ea);
    if (*evolve) run_evolve(va);
    if (*verify_cmd) return run_verify(ra);
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const io::ParseError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kExitDomain;
  } catch (const DomainError& e) {
    std::cerr << "domain error: " << e.what() << "\n";
    return kExitDomain;
  } catch (const oracle::ToleranceNotMet& e) {
    std::cerr << "tolerance not met: " << e.what() << "\n";
    return kExitDomain;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitDomain;
  }
  return 0;
}
