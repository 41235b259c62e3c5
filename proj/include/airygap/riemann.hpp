#pragma once

#include <complex>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "airygap/config.hpp"
#include "airygap/quadrature.hpp"

namespace airygap::riemann {

/// x0 > x1 > ... > x_{2g}, stored as pts[j] = x_j.
class BranchPoints {
 public:
  /// Throws Error{domain} on bad ordering or x0 <= max(x1, 0), and
  /// Error{degenerate} when neighbours are within 1e-8 * scale.
  BranchPoints(double x0, std::span<const double> x);
  BranchPoints(double x0, const IntervalConfig& cfg) : BranchPoints(x0, cfg.x) {}

  int genus() const { return g_; }
  double x0() const { return pts_[0]; }
  double operator[](int j) const { return pts_[j]; }
  const std::vector<double>& points() const { return pts_; }
  double scale() const;

 private:
  int g_;
  std::vector<double> pts_;
};

enum class Sheet { upper, lower };

/// prod_j sqrt(z - x_j) with principal branches; positive on (x0, inf) on
/// the upper sheet. A real z carrying +0 (-0) imaginary part yields the
/// boundary value from above (below) on the cuts.
std::complex<double> sqrt_R(std::complex<double> z, const BranchPoints& bp,
                            Sheet sheet = Sheet::upper);

/// int_a^b fn(s) w(s) ds at `order`, with err = |I(2 order) - I(order)|.
quad::Result cut_integral(const quad::Integrand& fn, double a, double b,
                          quad::Weight w = quad::Weight::chebyshev, int order = 32);

struct Moments {
  Eigen::MatrixXd M;   // M(i-1, j-1) = int_{x_{2i}}^{x_{2i-1}} s^{j-1} / sqrt R
  Eigen::VectorXd mt;  // -int (-s^{g+1} + q_g s^g) / sqrt R over the same gap
  double q_g = 0.0;    // (1/2) sum_{j=0}^{2g} x_j
};

Moments moments(const BranchPoints& bp, const quad::Options& opt = {});

struct ACycle {
  Eigen::MatrixXd A;
  double condition = 0.0;
};

/// A_jk = 2 sum_{l >= j} int_{x_{2l-1}}^{x_{2l}} s^{k-1} / sqrt R.
/// Throws Error{degenerate} if the condition number exceeds 1e12.
ACycle a_cycle_matrix(const BranchPoints& bp, const quad::Options& opt = {});
ACycle a_cycle_matrix(const Moments& m);

struct PeriodMatrix {
  Eigen::MatrixXcd tau;  // symmetrized, purely imaginary
  double asymmetry = 0.0;  // max |tau - tau^T| before symmetrizing
  double max_real = 0.0;   // max |Re tau| before it was dropped
};

/// B-periods of the A-normalized differentials. Row signs are fixed so that
/// Im tau_jj > 0. Throws Error{inconsistent_homology} on asymmetry > 1e-8,
/// a real part above 1e-10, or Im tau not positive definite.
PeriodMatrix period_matrix(const BranchPoints& bp, const Eigen::MatrixXd& A,
                           const quad::Options& opt = {});

/// Omega_j = 2i int_{x_{2j+1}}^{x_{2j}} q(s) / sqrt R_+(s) ds with
/// q(s) = sum_k q[k] s^k. Throws Error{solver_inconsistency} if any is <= 0.
Eigen::VectorXd omega_frequencies(const BranchPoints& bp, std::span<const double> q,
                                  const quad::Options& opt = {});

/// i K(k') / K(k), k^2 = (x1 - x2) / (x0 - x2).
std::complex<double> tau_g1_closed_form(const BranchPoints& bp);

/// sqrt(x0 - x2) / (4 K(k)).
double c0_g1_closed_form(const BranchPoints& bp);

/// phi(x) = int_{x0}^x c0 / sqrt R(s) ds on the upper sheet, genus 1.
/// x may be +inf. Throws Error{domain} for x < x0 or g != 1.
double abel_map_g1(const BranchPoints& bp, double c0, double x);

/// int_{x0}^inf c0 h(s) / sqrt R(s) ds, genus 1. Accurate when h(x0 + L tan^2 t),
/// L = x0 - x2, is smooth on [0, pi/2], e.g. h bounded and rational in s.
double abel_ray_integral_g1(const BranchPoints& bp, double c0, const quad::Integrand& h);

}  // namespace airygap::riemann

namespace airygap {

/// Spectral data of a solved configuration.
struct SurfaceData {
  IntervalConfig cfg;
  riemann::BranchPoints bp;
  std::vector<double> q;   // q_0 .. q_{g+1}, q_{g+1} = -1
  Eigen::MatrixXd A;       // A-cycle matrix
  double a_condition = 0.0;
  Eigen::MatrixXcd tau;
  double tau_asymmetry = 0.0;
  Eigen::VectorXd omega;
  std::optional<double> c0;  // genus 1
  double c = 0.0;
  double residual = 0.0;     // sum_j q_j x0^j at the returned x0
  bool ambiguous = false;
  std::vector<double> candidate_roots;

  int genus() const { return cfg.g; }
  double x0() const { return bp.x0(); }
};

}  // namespace airygap
