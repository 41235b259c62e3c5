#include <cmath>
#include <limits>
#include <numbers>

#include "airygap/errors.hpp"
#include "airygap/specialfn.hpp"

namespace airygap::specialfn {
namespace {

constexpr double kAi0 = 0.355028053887817239260;    // 3^{-2/3} / Gamma(2/3)
constexpr double kAiP0 = -0.258819403792806798405;  // -3^{-1/3} / Gamma(1/3)
constexpr double kAsymptoticSplit = 8.0;
constexpr double kSeriesRadius = 2.0;
constexpr double kMaxStep = 1.0;
constexpr double kEps = std::numeric_limits<double>::epsilon();

// Advances (y, y') of y'' = x y from x0 to x0 + h with the exact Taylor
// recurrence (n+2)(n+1) a_{n+2} = x0 a_n + a_{n-1}, carried in scaled form
// b_n = a_n h^n.
AiryPair taylor_step(double x0, AiryPair start, double h) {
  if (h == 0.0) return start;
  const double h2 = h * h;
  const double h3 = h2 * h;
  double b_prev2 = start.ai;           // b_{n-2}
  double b_prev1 = start.ai_prime * h; // b_{n-1}
  double y = b_prev2 + b_prev1;
  double dy = b_prev1;                 // sum n b_n, divided by h at the end
  // b_2 = x0 h^2 b_0 / 2
  double b_n = x0 * h2 * b_prev2 / 2.0;
  y += b_n;
  dy += 2.0 * b_n;
  double b_nm3 = b_prev2;
  b_prev2 = b_prev1;
  b_prev1 = b_n;
  for (int n = 3; n < 400; ++n) {
    // b_n = (x0 h^2 b_{n-2} + h^3 b_{n-3}) / (n (n-1))
    b_n = (x0 * h2 * b_prev2 + h3 * b_nm3) / (double(n) * double(n - 1));
    y += b_n;
    dy += n * b_n;
    const double tail = std::abs(b_n) + std::abs(b_prev1) + std::abs(b_prev2);
    if (n > 8 && tail <= kEps * 1e-2 * (std::abs(y) + std::abs(dy))) break;
    b_nm3 = b_prev2;
    b_prev2 = b_prev1;
    b_prev1 = b_n;
  }
  return {y, dy / h};
}

// Runs taylor_step from x0 to x in equal steps no longer than kMaxStep.
AiryPair integrate(double x0, AiryPair start, double x) {
  const int steps = std::max(1, static_cast<int>(std::ceil(std::abs(x - x0) / kMaxStep)));
  const double h = (x - x0) / steps;
  AiryPair cur = start;
  for (int i = 0; i < steps; ++i) {
    cur = taylor_step(x0 + i * h, cur, h);
  }
  return cur;
}

// Coefficients u_k, v_k of the large-argument expansions.
struct AsymptoticCoeffs {
  static constexpr int kMax = 64;
  double u[kMax];
  double v[kMax];
  constexpr AsymptoticCoeffs() : u{}, v{} {
    u[0] = 1.0;
    v[0] = 1.0;
    for (int k = 1; k < kMax; ++k) {
      const double kk = k;
      u[k] = u[k - 1] * (6 * kk - 5) * (6 * kk - 3) * (6 * kk - 1) / ((2 * kk - 1) * 216.0 * kk);
      v[k] = -(6 * kk + 1) / (6 * kk - 1) * u[k];
    }
  }
};
constexpr AsymptoticCoeffs kCoeffs{};

// Number of terms to keep: stop before the terms start growing.
int truncation(double zeta) {
  double prev = std::numeric_limits<double>::infinity();
  double pow = 1.0;
  for (int k = 0; k < AsymptoticCoeffs::kMax; ++k) {
    const double t = std::max(std::abs(kCoeffs.u[k]), std::abs(kCoeffs.v[k])) * pow;
    if (t > prev || t < kEps * 1e-3) return k;
    prev = t;
    pow /= zeta;
  }
  return AsymptoticCoeffs::kMax;
}

AiryPair asymptotic_positive(double x) {
  const double zeta = 2.0 / 3.0 * x * std::sqrt(x);
  const int n = truncation(zeta);
  double su = 0.0, sv = 0.0, pow = 1.0, sign = 1.0;
  for (int k = 0; k < n; ++k) {
    su += sign * kCoeffs.u[k] * pow;
    sv += sign * kCoeffs.v[k] * pow;
    pow /= zeta;
    sign = -sign;
  }
  const double x14 = std::sqrt(std::sqrt(x));
  const double pref = std::exp(-zeta) / (2.0 * std::sqrt(std::numbers::pi));
  return {pref / x14 * su, -pref * x14 * sv};
}

AiryPair asymptotic_negative(double x) {
  const double ax = -x;
  const double zeta = 2.0 / 3.0 * ax * std::sqrt(ax);
  const int n = truncation(zeta);
  double pu = 0.0, qu = 0.0, pv = 0.0, qv = 0.0, pow = 1.0;
  for (int k = 0; k < n; ++k) {
    // (-1)^{floor(k/2)} on u_k zeta^{-k}; even k feed P, odd k feed Q
    const double sign = ((k / 2) % 2 == 0) ? 1.0 : -1.0;
    if (k % 2 == 0) {
      pu += sign * kCoeffs.u[k] * pow;
      pv += sign * kCoeffs.v[k] * pow;
    } else {
      qu += sign * kCoeffs.u[k] * pow;
      qv += sign * kCoeffs.v[k] * pow;
    }
    pow /= zeta;
  }
  const double phase = zeta - std::numbers::pi / 4.0;
  const double c = std::cos(phase);
  const double s = std::sin(phase);
  const double x14 = std::sqrt(std::sqrt(ax));
  const double rsp = 1.0 / std::sqrt(std::numbers::pi);
  return {rsp / x14 * (c * pu + s * qu), rsp * x14 * (s * pv - c * qv)};
}

}  // namespace

AiryPair airy(double x) {
  if (!std::isfinite(x)) {
    throw Error(ErrorKind::domain, "airy: argument must be finite");
  }
  if (x >= kAsymptoticSplit) return asymptotic_positive(x);
  if (x <= -kAsymptoticSplit) return asymptotic_negative(x);
  if (std::abs(x) <= kSeriesRadius) return taylor_step(0.0, {kAi0, kAiP0}, x);
  if (x < 0.0) return integrate(0.0, {kAi0, kAiP0}, x);
  return integrate(kAsymptoticSplit, asymptotic_positive(kAsymptoticSplit), x);
}

double airy_ai(double x) { return airy(x).ai; }

double airy_ai_prime(double x) { return airy(x).ai_prime; }

}  // namespace airygap::specialfn
