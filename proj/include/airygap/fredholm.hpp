#pragma once

#include <span>
#include <vector>

#include "airygap/config.hpp"

namespace airygap::fredholm {

/// K(u, v) = (Ai(u) Ai'(v) - Ai'(u) Ai(v)) / (u - v). For |u - v| <= 1e-6 a
/// second-order expansion about min(u, v) replaces the quotient; the
/// diagonal is Ai'(u)^2 - u Ai(u)^2. Symmetric bit for bit.
double airy_kernel(double u, double v);

struct Interval {
  double a;
  double b;
};

struct NystromResult {
  int order_per_interval = 0;
  double log_det = 0.0;       // log det(I - K) on the union
  double err_estimate = 0.0;  // |log_det(order) - log_det(order / 2)|
  double spectral_radius_proxy = 0.0;  // largest pivot magnitude in the factorization
  double min_pivot = 0.0;              // smallest pivot; 1 - lambda_max scale
};

/// log det(I - K_Ai) on a union of disjoint intervals (touching is allowed),
/// via Gauss-Legendre Nystrom with `order` nodes per interval and a pivoted
/// LDL^T factorization. Throws Error{domain} for odd order, order < 8,
/// empty or overlapping intervals; Error{near_singular} if a pivot is <= 0.
NystromResult log_gap_probability(std::span<const Interval> intervals, int order = 64,
                                  int threads = 1);

/// log det at a single order, without the refinement estimate.
double log_det_at_order(std::span<const Interval> intervals, int order, int threads = 1,
                        double* min_pivot = nullptr, double* max_pivot = nullptr);

/// Intervals (r x_{2i}, r x_{2i-1}) of a configuration.
std::vector<Interval> scaled_intervals(const IntervalConfig& cfg, double r);

NystromResult gap_probability_scaled(const IntervalConfig& cfg, double r, int order = 64,
                                     int threads = 1);

}  // namespace airygap::fredholm
