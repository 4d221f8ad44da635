#include "gausspack/oracle/quadrature.hpp"

#include <algorithm>
#include <cstdio>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <queue>
#include <string>

namespace gausspack::oracle {

void QuadratureSpec::validate() const {
  if (!(rel_tol > 0) || !(abs_tol > 0)) throw DomainError("quadrature tolerances must be positive");
  if (!(half_width >= 4)) throw DomainError("quadrature half_width must be at least 4");
  if (max_subdivisions < 1) throw DomainError("max_subdivisions must be positive");
}

const GaussRule& gauss_legendre(int order) {
  static std::mutex mu;
  static std::map<int, GaussRule> cache;
  std::lock_guard lock(mu);
  auto it = cache.find(order);
  if (it != cache.end()) return it->second;

  GaussRule r;
  r.nodes.resize(order);
  r.weights.resize(order);
  for (int i = 0; i < order; ++i) {
    double z = std::cos(std::numbers::pi * (i + 0.75) / (order + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = z;
      for (int k = 2; k <= order; ++k) {
        const double p2 = ((2 * k - 1) * z * p1 - (k - 1) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = order * (z * p1 - p0) / (z * z - 1);
      const double dz = p1 / dp;
      z -= dz;
      if (std::abs(dz) < 1e-16) break;
    }
    r.nodes[i] = z;
    r.weights[i] = 2 / ((1 - z * z) * dp * dp);
  }
  return cache.emplace(order, std::move(r)).first->second;
}

double pairwise_sum(std::span<const double> v) {
  if (v.size() <= 8) {
    double s = 0.0;
    for (double x : v) s += x;
    return s;
  }
  const std::size_t h = v.size() / 2;
  return pairwise_sum(v.subspan(0, h)) + pairwise_sum(v.subspan(h));
}

namespace {

constexpr int kHigh = 16;
constexpr int kLow = 8;

struct Panel {
  Box box;
  std::vector<double> value;
  std::vector<double> error;
  std::vector<double> magnitude;  // integral of |f|, for the roundoff floor
  // Which direction dominates the error: 0 = x, 1 = y, 2 = both.
  int split = 2;
  bool active = true;
};

// A panel is integrated with the 16 x 16 Gauss-Legendre product rule. Error
// estimates per direction come from replacing the rule along that direction
// by the 8-point rule.
struct Evaluator {
  const BatchIntegrand& f;
  int ncomp;
  std::vector<double> xs, ys, out;
  int evaluations = 0;

  Panel run(const Box& b) {
    const GaussRule& hi = gauss_legendre(kHigh);
    const GaussRule& lo = gauss_legendre(kLow);
    const double cx = 0.5 * (b.x_lo + b.x_hi), hx = 0.5 * (b.x_hi - b.x_lo);
    const double cy = 0.5 * (b.y_lo + b.y_hi), hy = 0.5 * (b.y_hi - b.y_lo);
    constexpr int nhh = kHigh * kHigh, nlh = kLow * kHigh, n = nhh + 2 * nlh;
    xs.resize(n);
    ys.resize(n);
    out.assign(static_cast<std::size_t>(n) * ncomp, 0.0);
    // [hi x hi | lo(x) x hi(y) | hi(x) x lo(y)]
    for (int i = 0; i < kHigh; ++i)
      for (int j = 0; j < kHigh; ++j) {
        xs[i * kHigh + j] = cx + hx * hi.nodes[i];
        ys[i * kHigh + j] = cy + hy * hi.nodes[j];
      }
    for (int i = 0; i < kLow; ++i)
      for (int j = 0; j < kHigh; ++j) {
        xs[nhh + i * kHigh + j] = cx + hx * lo.nodes[i];
        ys[nhh + i * kHigh + j] = cy + hy * hi.nodes[j];
        xs[nhh + nlh + j * kLow + i] = cx + hx * hi.nodes[j];
        ys[nhh + nlh + j * kLow + i] = cy + hy * lo.nodes[i];
      }
    f(xs, ys, out);
    evaluations += n;

    Panel p;
    p.box = b;
    p.value.resize(ncomp);
    p.error.resize(ncomp);
    p.magnitude.resize(ncomp);
    const double jac = hx * hy;
    double ex_total = 0.0, ey_total = 0.0;
    for (int k = 0; k < ncomp; ++k) {
      const double* o = out.data() + static_cast<std::size_t>(k) * n;
      double s = 0.0, sa = 0.0, sx = 0.0, sy = 0.0;
      for (int i = 0; i < kHigh; ++i) {
        double row = 0.0, rowa = 0.0;
        for (int j = 0; j < kHigh; ++j) {
          row += hi.weights[j] * o[i * kHigh + j];
          rowa += hi.weights[j] * std::abs(o[i * kHigh + j]);
        }
        s += hi.weights[i] * row;
        sa += hi.weights[i] * rowa;
      }
      for (int i = 0; i < kLow; ++i) {
        double rx = 0.0, ry = 0.0;
        for (int j = 0; j < kHigh; ++j) {
          rx += hi.weights[j] * o[nhh + i * kHigh + j];
          ry += hi.weights[j] * o[nhh + nlh + j * kLow + i];
        }
        sx += lo.weights[i] * rx;
        sy += lo.weights[i] * ry;
      }
      const double ex = jac * std::abs(s - sx), ey = jac * std::abs(s - sy);
      p.value[k] = jac * s;
      p.magnitude[k] = jac * sa;
      p.error[k] = ex + ey;
      ex_total += ex;
      ey_total += ey;
    }
    if (ex_total > 8 * ey_total)
      p.split = 0;
    else if (ey_total > 8 * ex_total)
      p.split = 1;
    return p;
  }
};

std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", v);
  return buf;
}

}  // namespace

QuadratureResult integrate_2d(const BatchIntegrand& f, int components, const Box& box, const QuadratureSpec& spec) {
  spec.validate();
  if (components < 1) throw DomainError("integrand needs at least one component");
  if (!(box.x_hi > box.x_lo) || !(box.y_hi > box.y_lo)) throw DomainError("empty integration box");

  Evaluator ev{f, components, {}, {}, {}};
  std::vector<Panel> panels;
  constexpr int kInit = 4;
  const double dx = (box.x_hi - box.x_lo) / kInit, dy = (box.y_hi - box.y_lo) / kInit;
  for (int i = 0; i < kInit; ++i)
    for (int j = 0; j < kInit; ++j)
      panels.push_back(ev.run({box.x_lo + i * dx, box.x_lo + (i + 1) * dx, box.y_lo + j * dy, box.y_lo + (j + 1) * dy}));

  std::vector<double> total(components, 0.0), err(components, 0.0), mag(components, 0.0);
  auto account = [&](const Panel& p, double sign) {
    for (int k = 0; k < components; ++k) {
      total[k] += sign * p.value[k];
      err[k] += sign * p.error[k];
      mag[k] += sign * p.magnitude[k];
    }
  };
  for (const Panel& p : panels) account(p, 1.0);
  // Cancellation between panels limits what any rule can resolve, so the
  // target never drops below a few hundred ulps of the integral of |f|.
  auto target = [&](int k) {
    return std::max({spec.abs_tol, spec.rel_tol * std::abs(total[k]), 256 * 2.2e-16 * mag[k]});
  };

  // Panels are refined in order of their worst error relative to the
  // per-component target.
  using Item = std::pair<double, std::size_t>;
  std::priority_queue<Item> heap;
  auto push = [&](std::size_t idx) {
    double s = 0.0;
    for (int k = 0; k < components; ++k) s = std::max(s, panels[idx].error[k] / target(k));
    heap.emplace(s, idx);
  };
  for (std::size_t i = 0; i < panels.size(); ++i) push(i);

  auto done = [&] {
    for (int k = 0; k < components; ++k)
      if (err[k] > target(k)) return false;
    return true;
  };

  int active = static_cast<int>(panels.size());
  while (!done()) {
    if (active + 3 > spec.max_subdivisions) {
      int worst = 0;
      for (int k = 1; k < components; ++k)
        if (err[k] / target(k) > err[worst] / target(worst)) worst = k;
      throw ToleranceNotMet("quadrature did not converge within " + std::to_string(spec.max_subdivisions) +
                            " panels (component " + std::to_string(worst) + ", error " + sci(err[worst]) +
                            ", target " + sci(target(worst)) + ")");
    }
    const std::size_t idx = heap.top().second;
    heap.pop();
    panels[idx].active = false;
    account(panels[idx], -1.0);
    const Box b = panels[idx].box;
    const double mx = 0.5 * (b.x_lo + b.x_hi), my = 0.5 * (b.y_lo + b.y_hi);
    std::vector<Box> kids;
    switch (panels[idx].split) {
      case 0: kids = {{b.x_lo, mx, b.y_lo, b.y_hi}, {mx, b.x_hi, b.y_lo, b.y_hi}}; break;
      case 1: kids = {{b.x_lo, b.x_hi, b.y_lo, my}, {b.x_lo, b.x_hi, my, b.y_hi}}; break;
      default:
        kids = {{b.x_lo, mx, b.y_lo, my}, {b.x_lo, mx, my, b.y_hi}, {mx, b.x_hi, b.y_lo, my}, {mx, b.x_hi, my, b.y_hi}};
    }
    for (const Box& kb : kids) {
      panels.push_back(ev.run(kb));
      account(panels.back(), 1.0);
      push(panels.size() - 1);
    }
    active += static_cast<int>(kids.size()) - 1;
  }

  // Final values by pairwise summation in panel-creation order.
  std::vector<double> scratch;
  for (int k = 0; k < components; ++k) {
    scratch.clear();
    double e = 0.0;
    for (const Panel& p : panels)
      if (p.active) {
        scratch.push_back(p.value[k]);
        e += p.error[k];
      }
    total[k] = pairwise_sum(scratch);
    err[k] = e;
  }

  QuadratureResult r;
  r.values = total;
  r.errors = err;
  r.panels = active;
  r.evaluations = ev.evaluations;
  return r;
}

Box packet_box(const RealParams& p, double half_width, double scale) {
  validate(p);
  // Density exponent -mu (alpha x^2 + 2 beta x y + gamma y^2) + 2 F1 x + 2 G1 y.
  const double det = p.alpha * p.gamma - p.beta * p.beta;
  const double xc = (p.gamma * p.F1 - p.beta * p.G1) / (p.mu * det);
  const double yc = (p.alpha * p.G1 - p.beta * p.F1) / (p.mu * det);
  // Largest variance: 1 / (2 mu lambda_min) of the quadratic form.
  const double s = p.alpha + p.gamma, R = std::hypot(p.alpha - p.gamma, 2 * p.beta);
  const double lmin = det / (0.5 * (s + R));
  const double sigma = std::sqrt(1 / (2 * p.mu * lmin));
  const double h = half_width * sigma * scale;
  return {xc - h, xc + h, yc - h, yc + h};
}

}  // namespace gausspack::oracle
