#include <cmath>
#include <numbers>

#include "airygap/errors.hpp"
#include "airygap/quadrature.hpp"

namespace airygap::quad {

Rule gauss_legendre(int n, double a, double b) {
  if (n < 1) throw Error(ErrorKind::domain, "gauss_legendre: n must be positive");
  Rule r;
  r.nodes.resize(n);
  r.weights.resize(n);
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    // Tricomi initial guess, then Newton on P_n
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      if (n == 1) p0 = 1.0;
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) <= 1e-16) break;
    }
    {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      if (n == 1) p0 = 1.0;
      dp = n * (x * p1 - p0) / (x * x - 1.0);
    }
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    // x is the i-th largest root
    r.nodes[n - 1 - i] = mid + half * x;
    r.nodes[i] = mid - half * x;
    r.weights[i] = r.weights[n - 1 - i] = half * w;
  }
  if (n % 2 == 1) r.nodes[n / 2] = mid;
  return r;
}

namespace {

struct Pair {
  double value;
  double mass;
};

Pair apply(const Integrand& f, double a, double b, Weight w, int order) {
  double sum = 0.0, mass = 0.0;
  const double len = b - a;
  switch (w) {
    case Weight::none: {
      const Rule r = gauss_legendre(order, a, b);
      for (int i = 0; i < order; ++i) {
        const double v = r.weights[i] * f(r.nodes[i]);
        sum += v;
        mass += std::abs(v);
      }
      break;
    }
    case Weight::chebyshev: {
      const double mid = 0.5 * (a + b);
      const double half = 0.5 * len;
      const double wt = std::numbers::pi / order;
      for (int i = 1; i <= order; ++i) {
        const double s = mid + half * std::cos((2.0 * i - 1.0) * std::numbers::pi / (2.0 * order));
        const double v = wt * f(s);
        sum += v;
        mass += std::abs(v);
      }
      break;
    }
    case Weight::jacobi_left:
    case Weight::jacobi_right: {
      // s = a + len t^2 (or b - len t^2): ds / sqrt(s - a) = 2 sqrt(len) dt
      const Rule r = gauss_legendre(order, 0.0, 1.0);
      const double scale = 2.0 * std::sqrt(len);
      for (int i = 0; i < order; ++i) {
        const double t = r.nodes[i];
        const double s = (w == Weight::jacobi_left) ? a + len * t * t : b - len * t * t;
        const double v = scale * r.weights[i] * f(s);
        sum += v;
        mass += std::abs(v);
      }
      break;
    }
  }
  return {sum, mass};
}

void check_args(double a, double b, int order) {
  if (!(a < b) || !std::isfinite(a) || !std::isfinite(b)) {
    throw Error(ErrorKind::domain, "quadrature: need finite a < b");
  }
  if (order < 4) throw Error(ErrorKind::domain, "quadrature: order must be >= 4");
}

}  // namespace

double integrate_fixed(const Integrand& f, double a, double b, Weight w, int order) {
  check_args(a, b, order);
  return apply(f, a, b, w, order).value;
}

Result integrate(const Integrand& f, double a, double b, Weight w, const Options& opt) {
  check_args(a, b, opt.min_order);
  Pair prev = apply(f, a, b, w, opt.min_order);
  Result res;
  for (int n = 2 * opt.min_order;; n *= 2) {
    const Pair cur = apply(f, a, b, w, n);
    const double err = std::abs(cur.value - prev.value);
    const double ref = std::max(std::abs(cur.value), cur.mass);
    res = {cur.value, err, cur.mass, n};
    if (!std::isfinite(cur.value)) {
      throw Error(ErrorKind::quadrature, "quadrature: non-finite integrand value");
    }
    if (err <= opt.rel_tol * ref) return res;
    if (2 * n > opt.max_order) {
      if (err <= opt.fail_tol * ref) return res;
      throw Error(ErrorKind::quadrature,
                  "quadrature: no convergence at order " + std::to_string(n) +
                      " (relative change " + std::to_string(err / ref) + ")");
    }
    prev = cur;
  }
}

}  // namespace airygap::quad
