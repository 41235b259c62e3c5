#pragma once

#include <functional>
#include <vector>

namespace airygap::quad {

struct Rule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// n-point Gauss-Legendre rule on [a, b] (nodes ascending).
Rule gauss_legendre(int n, double a = -1.0, double b = 1.0);

/// Weight carried by the rule; the integrand passed alongside is the
/// remaining smooth factor f.
enum class Weight {
  none,         // int_a^b f(s) ds
  chebyshev,    // int_a^b f(s) / sqrt((b - s)(s - a)) ds
  jacobi_left,  // int_a^b f(s) / sqrt(s - a) ds
  jacobi_right, // int_a^b f(s) / sqrt(b - s) ds
};

struct Result {
  double value = 0.0;
  double err = 0.0;       // |I(order) - I(order/2)|
  double abs_mass = 0.0;  // same rule applied to |f|
  int order = 0;
};

using Integrand = std::function<double(double)>;

/// Fixed-order rule with the weight factored out. Throws Error{domain}
/// unless a < b and order >= 4.
double integrate_fixed(const Integrand& f, double a, double b, Weight w, int order);

struct Options {
  int min_order = 32;
  int max_order = 8192;
  double rel_tol = 1e-12;
  // error accepted at max_order before giving up with Error{quadrature}
  double fail_tol = 1e-8;
};

/// Doubles the order from min_order until successive values differ by less
/// than rel_tol relative to max(|I|, int |f| w).
Result integrate(const Integrand& f, double a, double b, Weight w, const Options& opt = {});

}  // namespace airygap::quad
