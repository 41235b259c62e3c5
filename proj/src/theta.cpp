#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "airygap/errors.hpp"
#include "airygap/specialfn.hpp"

namespace airygap::specialfn {
namespace {

using cd = std::complex<double>;
constexpr double kPi = std::numbers::pi;
constexpr int kMaxRadius = 400;

// Upper bound on the lattice tail beyond max-norm R for an argument with
// ||Im z|| = y, including a (2 pi m)^k factor for k-th derivatives.
double tail_bound(int g, double lambda, double y, int k, int R) {
  double sum = 0.0;
  for (int m = R + 1;; ++m) {
    const double expo = -kPi * lambda * m * m + 2.0 * kPi * y * m;
    const double t = 2.0 * g * std::pow(2.0 * m + 1.0, g - 1) *
                     std::pow(2.0 * kPi * m, k) * std::exp(expo);
    sum += t;
    // past the peak of the bound every further term shrinks geometrically
    if (m * lambda > y + 1.0 + k && (t < 1e-20 * sum || t == 0.0)) break;
    if (m > R + 10 * kMaxRadius) break;
  }
  return sum;
}

int choose_radius(int g, double lambda, double y, int k, double tol) {
  int R = std::max(1, static_cast<int>(std::ceil(y / lambda)));
  while (tail_bound(g, lambda, y, k, R) >= tol) {
    if (++R > kMaxRadius) {
      throw Error(ErrorKind::domain,
                  "theta: truncation radius exceeds limit (Im tau too close to singular)");
    }
  }
  return R;
}

double imag_norm(std::span<const cd> z) {
  double s = 0.0;
  for (const cd& v : z) s += v.imag() * v.imag();
  return std::sqrt(s);
}

// cos and sin of a complex argument with exact parity in the argument.
cd even_cos(cd w) {
  const double a = std::abs(w.real());
  const double b = std::abs(w.imag());
  const double sgn = (std::signbit(w.real()) == std::signbit(w.imag())) ? 1.0 : -1.0;
  return {std::cos(a) * std::cosh(b), -sgn * std::sin(a) * std::sinh(b)};
}

cd odd_sin(cd w) {
  const double a = std::abs(w.real());
  const double b = std::abs(w.imag());
  const double sa = std::signbit(w.real()) ? -1.0 : 1.0;
  const double sb = std::signbit(w.imag()) ? -1.0 : 1.0;
  return {sa * std::sin(a) * std::cosh(b), sb * std::cos(a) * std::sinh(b)};
}

// Visits every lattice point n in the cube |n_j| <= R that is
// lexicographically positive, in a fixed order.
template <class F>
void for_half_lattice(int g, int R, F&& f) {
  std::vector<int> n(g, -R);
  for (;;) {
    int first = 0;
    while (first < g && n[first] == 0) ++first;
    if (first < g && n[first] > 0) f(n);
    int j = g - 1;
    while (j >= 0 && n[j] == R) {
      n[j] = -R;
      --j;
    }
    if (j < 0) break;
    ++n[j];
  }
}

cd quad_phase(const Eigen::MatrixXcd& tau, const std::vector<int>& n) {
  const int g = static_cast<int>(n.size());
  cd q = 0.0;
  for (int a = 0; a < g; ++a) {
    if (n[a] == 0) continue;
    cd row = 0.0;
    for (int b = 0; b < g; ++b) row += tau(a, b) * double(n[b]);
    q += double(n[a]) * row;
  }
  // exp(i pi q)
  const double mag = std::exp(-kPi * q.imag());
  return {mag * std::cos(kPi * q.real()), mag * std::sin(kPi * q.real())};
}

bool all_real(std::span<const cd> z) {
  return std::all_of(z.begin(), z.end(), [](const cd& v) { return v.imag() == 0.0; });
}

}  // namespace

ThetaEvaluator::ThetaEvaluator(Eigen::MatrixXcd tau, double tol, std::optional<int> radius)
    : tau_(std::move(tau)), tol_(tol), radius_(0), lambda_min_(0.0), purely_imaginary_(false) {
  if (tau_.rows() == 0 || tau_.rows() != tau_.cols()) {
    throw Error(ErrorKind::domain, "theta: tau must be a non-empty square matrix");
  }
  if (!(tol_ > 0.0)) throw Error(ErrorKind::domain, "theta: tol must be positive");
  if (!tau_.allFinite()) throw Error(ErrorKind::domain, "theta: tau has non-finite entries");
  const double scale = std::max(1.0, tau_.cwiseAbs().maxCoeff());
  if ((tau_ - tau_.transpose()).cwiseAbs().maxCoeff() > tol_ * scale) {
    throw Error(ErrorKind::domain, "theta: tau is not symmetric");
  }
  const Eigen::MatrixXd im = 0.5 * (tau_.imag() + tau_.imag().transpose());
  lambda_min_ = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(im, Eigen::EigenvaluesOnly)
                    .eigenvalues()
                    .minCoeff();
  if (!(lambda_min_ > 0.0)) {
    throw Error(ErrorKind::domain, "theta: Im tau is not positive definite");
  }
  purely_imaginary_ = tau_.real().cwiseAbs().maxCoeff() == 0.0;
  if (radius) {
    if (*radius < 1) throw Error(ErrorKind::domain, "theta: radius must be >= 1");
    radius_ = *radius;
    fixed_radius_ = true;
  } else {
    radius_ = choose_radius(genus(), lambda_min_, 0.0, 0, tol_);
  }
}

int ThetaEvaluator::radius_for(std::span<const cd> z) const {
  return radius_for(z, 0);
}

int ThetaEvaluator::radius_for(std::span<const cd> z, int deriv) const {
  if (fixed_radius_) return radius_;
  const double y = imag_norm(z);
  if (y == 0.0 && deriv == 0) return radius_;
  return std::max(radius_, choose_radius(genus(), lambda_min_, y, deriv, tol_));
}

cd theta(const ThetaEvaluator& ev, std::span<const cd> z) {
  const int g = ev.genus();
  if (static_cast<int>(z.size()) != g) {
    throw Error(ErrorKind::domain, "theta: argument length does not match genus");
  }
  for (const cd& v : z) {
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
      throw Error(ErrorKind::domain, "theta: non-finite argument");
    }
  }
  const int R = ev.radius_for(z);
  cd sum = 0.0;
  for_half_lattice(g, R, [&](const std::vector<int>& n) {
    cd w = 0.0;
    for (int j = 0; j < g; ++j) w += double(n[j]) * z[j];
    sum += 2.0 * quad_phase(ev.tau(), n) * even_cos(2.0 * kPi * w);
  });
  sum += 1.0;
  if (ev.purely_imaginary() && all_real(z)) return {sum.real(), 0.0};
  return sum;
}

cd theta(const ThetaEvaluator& ev, std::span<const double> z) {
  std::vector<cd> zc(z.begin(), z.end());
  return theta(ev, std::span<const cd>(zc));
}

cd theta_derivs_g1(const ThetaEvaluator& ev, cd z, int order) {
  if (ev.genus() != 1) throw Error(ErrorKind::domain, "theta_derivs_g1: genus must be 1");
  if (order < 0) throw Error(ErrorKind::domain, "theta_derivs_g1: negative order");
  if (order > 3) throw Error(ErrorKind::unsupported, "theta_derivs_g1: order > 3");
  const cd zz[1] = {z};
  if (order == 0) return theta(ev, std::span<const cd>(zz, 1));
  const int R = ev.radius_for(std::span<const cd>(zz, 1), order);
  cd sum = 0.0;
  for (int n = 1; n <= R; ++n) {
    const cd w = 2.0 * kPi * double(n) * z;
    static constexpr cd kIPow[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
    const cd fac = std::pow(2.0 * kPi * n, order) * kIPow[order % 4];
    // e^{iw} + (-1)^k e^{-iw}
    const cd pair = (order % 2 == 0) ? 2.0 * even_cos(w) : cd(0.0, 2.0) * odd_sin(w);
    const double q = kPi * double(n) * double(n);
    const cd phase = std::exp(-q * ev.tau()(0, 0).imag()) *
                     cd(std::cos(q * ev.tau()(0, 0).real()), std::sin(q * ev.tau()(0, 0).real()));
    sum += phase * fac * pair;
  }
  if (ev.purely_imaginary() && z.imag() == 0.0) return {sum.real(), 0.0};
  return sum;
}

}  // namespace airygap::specialfn
