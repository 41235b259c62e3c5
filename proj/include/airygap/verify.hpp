#pragma once

#include <optional>
#include <string>
#include <vector>

#include "airygap/asympt.hpp"
#include "airygap/config.hpp"

namespace airygap::verify {

struct ConstantFit {
  double C = 0.0;
  std::vector<double> residuals;
};

/// r^3-weighted mean of logF - predicted. Throws Error{insufficient_data}
/// for fewer than 4 points and Error{domain} when some |logF| > 500 or the
/// lengths differ.
ConstantFit fit_constant(const std::vector<double>& r, const std::vector<double>& logF,
                         const std::vector<double>& predicted_no_C);

struct DecayFit {
  double exponent = 0.0;
  double rss = 0.0;
};

/// Profile least squares of
///   logF - predicted_no_C = C' + r^p (a + sum_j b_j cos(2 pi nu_j) + e_j sin(2 pi nu_j))
/// over p in [-4, 0]. Needs more points than the 2g + 2 linear parameters.
DecayFit fit_decay_exponent(const SurfaceData& sd, const std::vector<double>& r,
                            const std::vector<double>& diff);

/// Slope of ln|residual| against ln r on the upper half of the grid. NaN
/// when fewer than two usable points remain.
double naive_decay_exponent(const std::vector<double>& r, const std::vector<double>& residuals);

struct Oscillation {
  double max_dev_with_theta = 0.0;
  double max_dev_without_theta = 0.0;
  double C_without_theta = 0.0;
  double log_theta_half_range = 0.0;  // (max - min) / 2 of ln theta(nu) on the grid
  bool period_assessed = false;
  double period_measured = 0.0;  // in t = r^{3/2}
  double period_expected = 0.0;  // 2 pi / Omega_j, nearest j
  double period_ratio = 0.0;
  std::string note;

  bool operator==(const Oscillation&) const = default;
};

/// Largest r spacing that resolves the fastest oscillation: pi / (3 Omega_max sqrt(r_max)).
double max_resolving_spacing(const SurfaceData& sd, double r_max);

/// With/without-theta comparison and the oscillation period of
/// logF - c r^3 + (3g/8) ln r, measured by a least-squares frequency scan in
/// t = r^{3/2}. Throws Error{aliasing} when the grid spacing exceeds
/// max_resolving_spacing.
Oscillation check_oscillation(const SurfaceData& sd, const std::vector<double>& r,
                              const std::vector<double>& logF, double theta_tol = 1e-14);

/// Largest r with |c| r^3 <= 400 at which the order / order-2 refinement
/// estimate is below 1e-7 (backing off geometrically from the cap).
double safe_r_max(const SurfaceData& sd, int order = 64, int threads = 1);

/// Default grid: n points on [4/s, 9/s], s = max|x_j|, clipped to r_safe.
std::vector<double> default_grid(const IntervalConfig& cfg, double r_safe, int n = 8);

struct VerificationReport {
  IntervalConfig cfg;
  int order = 64;
  double x0 = 0.0;
  double c = 0.0;
  std::vector<double> omega;
  std::vector<double> tau_imag;  // row-major g x g
  std::vector<double> r_grid;
  std::vector<double> logF_num;
  std::vector<double> err_estimate;
  std::vector<double> predicted_no_C;
  double C_fit = 0.0;
  std::vector<double> residuals;
  double max_abs_residual = 0.0;
  double decay_exponent_fit = 0.0;
  double decay_exponent_naive = 0.0;
  Oscillation oscillation;
  bool partial = false;
  std::string error;  // set for partial reports
  std::vector<std::string> notes;

  bool operator==(const VerificationReport&) const = default;
};

struct VerifyOptions {
  int order = 64;
  int threads = 0;  // 0: worker_count()
  double theta_tol = 1e-14;
};

/// solve_system, leading coefficient, Fredholm sweep over the grid, constant
/// fit, decay fit and oscillation check. Errors are rethrown with the stage
/// name prefixed; a failing sweep point yields a report with partial = true
/// covering the points before it.
VerificationReport run_verification(const IntervalConfig& cfg, const std::vector<double>& r_grid,
                                    const VerifyOptions& opt = {});

}  // namespace airygap::verify
