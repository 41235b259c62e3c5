#include <cmath>
#include <cstdio>
#include <numbers>
#include <random>

#include <boost/math/special_functions/airy.hpp>
#include <boost/math/special_functions/ellint_1.hpp>
#include <boost/math/special_functions/ellint_2.hpp>

#include "doctest.h"
#include "oracles.hpp"

#include "airygap/errors.hpp"
#include "airygap/specialfn.hpp"

using namespace airygap;
using namespace airygap::specialfn;
using cd = std::complex<double>;

namespace {

// |Ai| + |Ai'| envelope used for relative errors where Ai oscillates
double envelope(double x) {
  const double ax = std::max(1.0, std::abs(x));
  if (x >= 0) return std::abs(boost::math::airy_ai(x)) + std::abs(boost::math::airy_ai_prime(x));
  return std::pow(ax, -0.25) + std::pow(ax, 0.25);
}

Eigen::MatrixXcd tau1(cd t) {
  Eigen::MatrixXcd m(1, 1);
  m(0, 0) = t;
  return m;
}

}  // namespace

TEST_CASE("airy values match the 50-digit Maclaurin series") {
  for (double x = -12.0; x <= 6.0; x += 0.37) {
    const auto ref = oracle::airy_series(x);
    const auto p = airy(x);
    const double env = envelope(x);
    CHECK(std::abs(p.ai - ref.first) <= 2e-13 * env);
    CHECK(std::abs(p.ai_prime - ref.second) <= 2e-13 * env);
  }
  CHECK(airy_ai(0.0) == doctest::Approx(0.355028053887817239).epsilon(1e-15));
  CHECK(airy_ai_prime(0.0) == doctest::Approx(-0.258819403792806798).epsilon(1e-15));
}

TEST_CASE("airy agrees with boost across the asymptotic split") {
  double worst = 0.0;
  for (double x = -30.0; x <= 30.0; x += 0.0731) {
    const auto p = airy(x);
    const double env = envelope(x);
    worst = std::max(worst, std::abs(p.ai - boost::math::airy_ai(x)) / env);
    worst = std::max(worst, std::abs(p.ai_prime - boost::math::airy_ai_prime(x)) / env);
  }
  CHECK(worst < 1e-12);
  // exponential tail keeps relative accuracy
  for (double x : {8.0, 12.5, 25.0}) {
    CHECK(airy_ai(x) == doctest::Approx(boost::math::airy_ai(x)).epsilon(1e-13));
  }
}

TEST_CASE("airy satisfies its differential equation") {
  const double h = 1e-3;
  for (double x = -10.0; x <= 5.0; x += 0.41) {
    const double d2 = (airy_ai(x + h) - 2 * airy_ai(x) + airy_ai(x - h)) / (h * h);
    const double scale = envelope(x) * std::max(1.0, std::abs(x));
    CHECK(std::abs(d2 - x * airy_ai(x)) <= 1e-5 * scale);
    const double d1 = (airy_ai(x + h) - airy_ai(x - h)) / (2 * h);
    CHECK(std::abs(d1 - airy_ai_prime(x)) <= 1e-6 * scale);
  }
  // Ai'' (0) = 0
  const double d2 = (airy_ai(h) - 2 * airy_ai(0.0) + airy_ai(-h)) / (h * h);
  CHECK(std::abs(d2) < 1e-7);
}

TEST_CASE("airy rejects non-finite arguments") {
  CHECK_THROWS_AS(airy_ai(std::nan("")), Error);
  CHECK_THROWS_AS(airy(INFINITY), Error);
  try {
    airy_ai_prime(-INFINITY);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::domain);
  }
}

TEST_CASE("elliptic integrals") {
  CHECK(ellint_K(0.0) == doctest::Approx(std::numbers::pi / 2).epsilon(1e-15));
  CHECK(ellint_E(0.0) == doctest::Approx(std::numbers::pi / 2).epsilon(1e-15));
  CHECK(ellint_E(1.0) == doctest::Approx(1.0).epsilon(1e-15));
  const double g14 = std::tgamma(0.25);
  CHECK(ellint_K(1 / std::sqrt(2.0)) ==
        doctest::Approx(g14 * g14 / (4 * std::sqrt(std::numbers::pi))).epsilon(1e-14));
  for (double k : {0.1, 0.3, 0.5, 0.6, 0.8, 0.9, 0.99, 0.999999}) {
    CHECK(ellint_K(k) == doctest::Approx(boost::math::ellint_1(k)).epsilon(1e-14));
    CHECK(ellint_E(k) == doctest::Approx(boost::math::ellint_2(k)).epsilon(1e-14));
    // Legendre relation
    const double kp = std::sqrt(1 - k * k);
    const double leg = ellint_E(k) * ellint_K(kp) + ellint_E(kp) * ellint_K(k) -
                       ellint_K(k) * ellint_K(kp);
    CHECK(leg == doctest::Approx(std::numbers::pi / 2).epsilon(1e-13));
  }
  for (double k : {0.1, 0.5, 0.9, 0.99}) {
    auto kf = [k](double t) { return 1 / std::sqrt(1 - k * k * std::sin(t) * std::sin(t)); };
    const double ref = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
        kf, 0.0, std::numbers::pi / 2, 15, 1e-15);
    CHECK(ellint_K(k) == doctest::Approx(ref).epsilon(1e-13));
  }
  CHECK_THROWS_AS(ellint_K(1.0), Error);
  CHECK_THROWS_AS(ellint_K(-0.1), Error);
  CHECK_THROWS_AS(ellint_E(1.5), Error);
}

TEST_CASE("genus-1 theta matches a plain lattice sum") {
  const cd t(0.3, 0.8);
  const ThetaEvaluator ev(tau1(t));
  for (cd z : {cd(0.0), cd(0.17, 0.0), cd(0.4, 0.25), cd(-0.3, -0.6)}) {
    cd ref = 0.0;
    for (int n = -40; n <= 40; ++n) {
      ref += std::exp(cd(0, 1) * std::numbers::pi * (double(n * n) * t + 2.0 * double(n) * z));
    }
    const cd zz[1] = {z};
    CHECK(std::abs(theta(ev, std::span<const cd>(zz, 1)) - ref) < 1e-13 * std::abs(ref));
  }
}

TEST_CASE("theta periodicity and quasi-periodicity") {
  Eigen::MatrixXcd t2(2, 2);
  t2 << cd(0.1, 1.1), cd(0.05, -0.3), cd(0.05, -0.3), cd(-0.2, 0.9);
  for (const Eigen::MatrixXcd& tau : {tau1(cd(0.0, 1.3)), t2}) {
    const ThetaEvaluator ev(tau);
    const int g = ev.genus();
    std::vector<cd> z(g);
    for (int j = 0; j < g; ++j) z[j] = cd(0.13 + 0.2 * j, 0.07 * (j + 1));
    const cd base = theta(ev, std::span<const cd>(z));
    for (int k = 0; k < g; ++k) {
      auto zp = z;
      zp[k] += 1.0;
      CHECK(std::abs(theta(ev, std::span<const cd>(zp)) - base) < 1e-12 * std::abs(base));
      auto zq = z;
      for (int j = 0; j < g; ++j) zq[j] += tau(j, k);
      const cd factor = std::exp(-cd(0, 1) * std::numbers::pi * (tau(k, k) + 2.0 * z[k]));
      CHECK(std::abs(theta(ev, std::span<const cd>(zq)) - factor * base) <
            1e-11 * std::abs(factor * base));
    }
  }
}

TEST_CASE("theta parity is exact and real arguments give real output") {
  Eigen::MatrixXcd t2(2, 2);
  t2 << cd(0, 1.0207), cd(0, -0.5058), cd(0, -0.5058), cd(0, 1.2561);
  const ThetaEvaluator ev(t2);
  CHECK(ev.purely_imaginary());
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> u(-3, 3);
  for (int i = 0; i < 50; ++i) {
    const cd z[2] = {cd(u(rng), u(rng) * 0.1), cd(u(rng), u(rng) * 0.1)};
    const cd mz[2] = {-z[0], -z[1]};
    CHECK(theta(ev, std::span<const cd>(z, 2)) == theta(ev, std::span<const cd>(mz, 2)));
    const double zr[2] = {z[0].real(), z[1].real()};
    const cd v = theta(ev, std::span<const double>(zr, 2));
    CHECK(v.imag() == 0.0);
    CHECK(v.real() > 0.0);
  }
}

TEST_CASE("theta truncation tolerance is honoured") {
  const ThetaEvaluator ev(tau1(cd(0, 0.7)), 1e-14);
  const ThetaEvaluator wide(tau1(cd(0, 0.7)), 1e-14, 2 * ev.radius());
  CHECK(wide.radius() == 2 * ev.radius());
  for (double x : {0.0, 0.21, 0.5}) {
    const double zz[1] = {x};
    const cd a = theta(ev, std::span<const double>(zz, 1));
    const cd b = theta(wide, std::span<const double>(zz, 1));
    CHECK(std::abs(a - b) < 1e-14 * std::abs(b) + 1e-15);
  }
  const cd far[1] = {cd(0.1, 2.0)};
  CHECK(ev.radius_for(std::span<const cd>(far, 1)) > ev.radius());
  // known value theta(0; i)
  const ThetaEvaluator ei(tau1(cd(0, 1)));
  const double z0[1] = {0.0};
  CHECK(theta(ei, std::span<const double>(z0, 1)).real() ==
        doctest::Approx(1.086434811213308).epsilon(1e-15));
}

TEST_CASE("theta rejects invalid period matrices") {
  CHECK_THROWS_AS(ThetaEvaluator(tau1(cd(0.2, -1.0))), Error);
  CHECK_THROWS_AS(ThetaEvaluator(tau1(cd(0.2, 0.0))), Error);
  Eigen::MatrixXcd asym(2, 2);
  asym << cd(0, 1), cd(0, 0.2), cd(0, 0.3), cd(0, 1);
  CHECK_THROWS_AS(ThetaEvaluator{asym}, Error);
  Eigen::MatrixXcd indef(2, 2);
  indef << cd(0, 1), cd(0, 2), cd(0, 2), cd(0, 1);
  try {
    ThetaEvaluator{indef};
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::domain);
  }
  const ThetaEvaluator ev(tau1(cd(0, 1)));
  const cd two[2] = {0.0, 0.0};
  CHECK_THROWS_AS(theta(ev, std::span<const cd>(two, 2)), Error);
}

TEST_CASE("genus-1 theta derivatives") {
  const ThetaEvaluator ev(tau1(cd(0, 1)));
  CHECK(std::abs(theta_derivs_g1(ev, 0.0, 1)) == 0.0);
  CHECK(theta_derivs_g1(ev, 0.0, 2).real() == doctest::Approx(-3.4131356215119428).epsilon(1e-14));
  const ThetaEvaluator evc(tau1(cd(0.25, 0.9)));
  const double h = 1e-4;
  for (cd z : {cd(0.1), cd(0.3, 0.2), cd(-0.45, 0.4)}) {
    for (int k = 1; k <= 3; ++k) {
      const cd fd = (theta_derivs_g1(evc, z + h, k - 1) - theta_derivs_g1(evc, z - h, k - 1)) / (2 * h);
      const cd ex = theta_derivs_g1(evc, z, k);
      CHECK(std::abs(fd - ex) < 1e-6 * (1 + std::abs(ex)));
    }
  }
  // derivatives are 1-periodic
  for (int k = 0; k <= 3; ++k) {
    const cd a = theta_derivs_g1(evc, cd(0.3, 0.1), k);
    const cd b = theta_derivs_g1(evc, cd(1.3, 0.1), k);
    CHECK(std::abs(a - b) < 1e-12 * std::abs(a));
  }
  CHECK_THROWS_AS(theta_derivs_g1(ev, 0.0, 4), Error);
  try {
    theta_derivs_g1(ev, 0.0, 4);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::unsupported);
  }
  Eigen::MatrixXcd t2 = Eigen::MatrixXcd::Identity(2, 2) * cd(0, 1);
  CHECK_THROWS_AS(theta_derivs_g1(ThetaEvaluator(t2), 0.0, 1), Error);
}
