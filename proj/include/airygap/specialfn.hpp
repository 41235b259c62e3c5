#pragma once

#include <complex>
#include <optional>
#include <span>

#include <Eigen/Dense>

namespace airygap::specialfn {

/// Airy function Ai(x).
///
/// |x| >= 8 uses the large-argument asymptotic expansions (exponential for
/// x > 0, oscillatory for x < 0), summed up to the smallest term. Inside,
/// |x| <= 2 is the Maclaurin series and the rest is reached by exact Taylor
/// stepping of Ai'' = x Ai: leftward from x = 0 on the negative side and
/// leftward from the x = 8 asymptotic values on the positive side, which is
/// the direction in which the Bi contamination decays. Relative accuracy is
/// about 1e-13 or better on [-30, 30] (relative to the envelope where Ai
/// oscillates).
///
/// Throws Error{domain} for non-finite x.
double airy_ai(double x);
double airy_ai_prime(double x);

struct AiryPair {
  double ai;
  double ai_prime;
};

/// Both values at once; cheaper than two calls.
AiryPair airy(double x);

/// Complete elliptic integral of the first kind in the modulus convention,
/// K(k) = int_0^{pi/2} dt / sqrt(1 - k^2 sin^2 t), via the AGM. k in [0, 1).
double ellint_K(double k);

/// Complete elliptic integral of the second kind, modulus convention. k in [0, 1].
double ellint_E(double k);

/// Genus-g Riemann theta function
///   theta(z; tau) = sum_{n in Z^g} exp(i pi (n^T tau n + 2 n^T z))
/// truncated to the cube |n_j| <= radius.
///
/// The radius is picked so that a geometric-series bound on the discarded
/// tail (ratio exp(-pi lambda_min(Im tau))) is below `tol`; arguments with a
/// nonzero imaginary part widen it further per call. Terms n and -n are
/// summed as a pair, so theta(-z) == theta(z) bit for bit.
class ThetaEvaluator {
 public:
  /// Throws Error{domain} if tau is not square, not symmetric within tol
  /// (relative to its largest entry), or Im tau is not positive definite.
  explicit ThetaEvaluator(Eigen::MatrixXcd tau, double tol = 1e-14,
                          std::optional<int> radius = std::nullopt);

  int genus() const { return static_cast<int>(tau_.rows()); }
  int radius() const { return radius_; }
  double tol() const { return tol_; }
  const Eigen::MatrixXcd& tau() const { return tau_; }
  double min_imag_eigenvalue() const { return lambda_min_; }
  bool purely_imaginary() const { return purely_imaginary_; }

  /// Truncation radius actually used for argument z.
  int radius_for(std::span<const std::complex<double>> z) const;
  /// Same, with the tail bound weighted for a derivative of order `deriv`.
  int radius_for(std::span<const std::complex<double>> z, int deriv) const;

 private:
  Eigen::MatrixXcd tau_;
  double tol_;
  int radius_;
  double lambda_min_;
  bool purely_imaginary_;
  bool fixed_radius_ = false;
};

std::complex<double> theta(const ThetaEvaluator& ev,
                           std::span<const std::complex<double>> z);

/// Convenience for real arguments.
std::complex<double> theta(const ThetaEvaluator& ev, std::span<const double> z);

/// k-th derivative (k = 0..3) of the genus-1 theta function, by term-wise
/// differentiation of the lattice sum. Throws Error{unsupported} for k > 3
/// and Error{domain} if the evaluator is not genus 1.
std::complex<double> theta_derivs_g1(const ThetaEvaluator& ev,
                                     std::complex<double> z, int order);

}  // namespace airygap::specialfn
