#pragma once

#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "airygap/config.hpp"
#include "airygap/riemann.hpp"
#include "airygap/specialfn.hpp"

namespace airygap::asympt {

/// F(x) = int_{x2}^{x1} sqrt(x - s) (s + (x - x1 - x2)/2) / sqrt((x1 - s)(s - x2)) ds.
double F_g1(double x, double x1, double x2);

/// Exact genus-1 admissibility: (x2 < x1 < 0) or (x1 >= 0 and x2 < -2 x1).
bool admissible_g1(double x1, double x2);

/// Root of F_g1 in (0, x1 - x2) for x1 < 0, in (x1, x1 - x2) for x1 >= 0.
/// Throws Error{inadmissible} outside the admissible set.
double solve_x0_g1(double x1, double x2);

/// Same root from (x0 + x1 + x2) E(k) + 2 (x0 - x1) K(k) = 0,
/// k^2 = (x1 - x2) / (x0 - x2).
double solve_x0_g1_closed_form(double x1, double x2);

struct SolveOptions {
  int grid_points = 256;
  bool reject_ambiguous = false;
  quad::Options quad{};
};

/// sum_j q_j x0^j after solving M q = mt at this x0 (q_g, q_{g+1} fixed).
/// Optionally returns the full coefficient vector.
double system_residual(const IntervalConfig& cfg, double x0, std::vector<double>* q = nullptr,
                       const quad::Options& opt = {});

/// Outer scan over x0 in (max(x1, 0), x1 - x_{2g}] with Brent refinement,
/// then periods, frequencies and the leading coefficient.
/// Throws Error{no_solution}, Error{ambiguous} (only with reject_ambiguous),
/// and whatever the period computations raise.
SurfaceData solve_system(const IntervalConfig& cfg, const SolveOptions& opt = {});

/// Coefficient of r^3, with q_j := 0 for j < 0.
double leading_coeff(const SurfaceData& sd);
double leading_coeff(std::span<const double> pts, std::span<const double> q);

/// Genus-1 closed form of the same coefficient.
double leading_coeff_g1_closed_form(double x0, double x1, double x2);

/// (2/3) sqrt(x0 - x2) (x0 + x1 + x2) [K(k') (1 - E(k)/K(k)) - E(k')].
double omega_g1_closed_form(double x0, double x1, double x2);

/// nu_j = -Omega_j r^{3/2} / (2 pi). Throws Error{domain} for r <= 0.
Eigen::VectorXd nu_vector(const SurfaceData& sd, double r);

struct ExpansionTerms {
  double c = 0.0;
  double log_coeff = 0.0;  // -3g/8
  Eigen::VectorXd nu;
  double theta_val = 0.0;
  std::optional<double> C;
  double cubic = 0.0;      // c r^3
  double log_term = 0.0;   // -3g/8 ln r
  double log_theta = 0.0;  // ln theta(nu)
  double total = 0.0;      // sum of the above plus C (if set)
};

specialfn::ThetaEvaluator make_theta(const SurfaceData& sd, double tol = 1e-14);

/// Throws Error{theta} if theta(nu) <= 0.
ExpansionTerms expansion_terms(const SurfaceData& sd, const specialfn::ThetaEvaluator& ev,
                               double r, std::optional<double> C = std::nullopt);

/// c r^3 - (3g/8) ln r + ln theta(nu(r)) + C.
double predicted_logF(const SurfaceData& sd, double r, double C, double theta_tol = 1e-14);
double predicted_logF(const SurfaceData& sd, const specialfn::ThetaEvaluator& ev, double r,
                      double C);

struct Admissibility {
  bool admissible = false;
  std::string reason;
};

/// Exact for genus 1; for g >= 2 attempts solve_system.
Admissibility is_admissible(const IntervalConfig& cfg);

}  // namespace airygap::asympt
