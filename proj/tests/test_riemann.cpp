#include <cmath>
#include <numbers>
#include <random>

#include <boost/math/special_functions/ellint_1.hpp>

#include "doctest.h"
#include "oracles.hpp"

#include "airygap/asympt.hpp"
#include "airygap/errors.hpp"
#include "airygap/riemann.hpp"

using namespace airygap;
using namespace airygap::riemann;
using cd = std::complex<double>;

namespace {

std::vector<std::vector<double>> g1_configs() {
  return {{-1, -2}, {-0.2, -3}, {-2, -2.5}, {0.5, -1.5}, {1, -2.5}, {0.01, -0.5}, {-0.7, -0.9},
          {2, -10}, {-3, -8}, {0.3, -4}};
}

SurfaceData solved(std::vector<double> x) { return asympt::solve_system(IntervalConfig::make(x)); }

std::vector<double> scaled(const std::vector<double>& x, double lam) {
  std::vector<double> y;
  for (double v : x) y.push_back(lam * v);
  return y;
}

}  // namespace

TEST_CASE("branch point validation") {
  const double x[2] = {-1, -2};
  CHECK_NOTHROW(BranchPoints(0.5, std::span<const double>(x, 2)));
  CHECK_THROWS_AS(BranchPoints(-0.5, std::span<const double>(x, 2)), Error);
  const double up[2] = {1, -2};
  CHECK_THROWS_AS(BranchPoints(0.5, std::span<const double>(up, 2)), Error);
  const double close[2] = {-1, -1 - 1e-10};
  try {
    BranchPoints(0.5, std::span<const double>(close, 2));
    FAIL("expected degenerate");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::degenerate);
  }
  try {
    IntervalConfig::make({-1, -1 - 1e-10});
    FAIL("expected degenerate");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::degenerate);
  }
  CHECK_THROWS_AS(IntervalConfig::make({-2, -1}), Error);
  CHECK_THROWS_AS(IntervalConfig::make({-1}), Error);
  CHECK_THROWS_AS(IntervalConfig::make({}), Error);
  const auto cfg = IntervalConfig::make({-1, -2, -3, -4});
  CHECK(cfg.g == 2);
  CHECK(cfg.scale() == 4.0);
}

TEST_CASE("sqrt R branch structure") {
  const double x[4] = {-1, -2, -3, -4};
  const BranchPoints bp(0.5, std::span<const double>(x, 4));
  CHECK(sqrt_R(cd(3.0, 0.0), bp).real() > 0.0);
  CHECK(sqrt_R(cd(3.0, 0.0), bp, Sheet::lower).real() < 0.0);
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  // cut j = (x_{2j+1}, x_{2j}) and the gaps (x_{2i}, x_{2i-1}) between them
  for (int j = 0; j <= bp.genus(); ++j) {
    const double hi = bp[2 * j];
    const double lo = j < bp.genus() ? bp[2 * j + 1] : bp[2 * j] - 5.0;
    for (int n = 0; n < 200; ++n) {
      const double s = lo + (hi - lo) * (0.001 + 0.998 * u(rng));
      const cd up = sqrt_R(cd(s, 0.0), bp);
      const cd dn = sqrt_R(cd(s, -0.0), bp);
      const double mag = oracle::abs_R(bp, s);
      CHECK(std::abs(up + dn) <= 1e-14 * std::sqrt(mag));
      if (j < bp.genus()) {
        const double sign = (j % 2 == 0) ? 1.0 : -1.0;
        CHECK(std::abs(up - cd(0.0, sign * std::sqrt(mag))) <= 1e-14 * std::sqrt(mag));
      }
    }
  }
  for (int i = 1; i <= bp.genus(); ++i) {
    const double lo = bp[2 * i], hi = bp[2 * i - 1];
    for (int n = 0; n < 200; ++n) {
      const double s = lo + (hi - lo) * (0.001 + 0.998 * u(rng));
      const cd up = sqrt_R(cd(s, 0.0), bp);
      const cd dn = sqrt_R(cd(s, -0.0), bp);
      const double sign = (i % 2 == 0) ? 1.0 : -1.0;
      CHECK(std::abs(up - dn) <= 1e-14 * std::abs(up));
      CHECK(std::abs(up - sign * std::sqrt(oracle::abs_R(bp, s))) <= 1e-13 * std::abs(up));
    }
  }
}

TEST_CASE("cut_integral on the Chebyshev weight") {
  auto one = [](double) { return 1.0; };
  auto lin = [](double s) { return s; };
  CHECK(cut_integral(one, -1.0, 3.0).value == doctest::Approx(std::numbers::pi).epsilon(1e-15));
  const auto r = cut_integral(lin, -1.0, 3.0);
  CHECK(r.value == doctest::Approx(std::numbers::pi).epsilon(1e-15));
  CHECK(r.err < 1e-14);
  auto ex = [](double s) { return std::exp(s); };
  // int_{-1}^{1} e^s / sqrt(1 - s^2) = pi I0(1)
  CHECK(cut_integral(ex, -1.0, 1.0).value ==
        doctest::Approx(std::numbers::pi * std::cyl_bessel_i(0.0, 1.0)).epsilon(1e-14));
}

TEST_CASE("genus-1 moments against complete elliptic integrals") {
  // x0 = 3, x1 = 1, x2 = 0: int_0^1 ds / sqrt(s (1 - s)(3 - s)) = 2 K(1/sqrt 3) / sqrt 3
  const double x[2] = {1, 0};
  const BranchPoints bp(3.0, std::span<const double>(x, 2));
  const auto m = moments(bp);
  const double K = boost::math::ellint_1(1 / std::sqrt(3.0));
  CHECK(m.M(0, 0) == doctest::Approx(-2 * K / std::sqrt(3.0)).epsilon(1e-13));
  CHECK(m.q_g == doctest::Approx(2.0));
  const auto A = a_cycle_matrix(m);
  CHECK(A.A(0, 0) == doctest::Approx(4 * K / std::sqrt(3.0)).epsilon(1e-13));
  CHECK(1.0 / A.A(0, 0) == doctest::Approx(c0_g1_closed_form(bp)).epsilon(1e-13));
}

TEST_CASE("moments are homogeneous") {
  const double x[2] = {-1, -2}, x2[2] = {-2, -4};
  const auto m1 = moments(BranchPoints(0.3, std::span<const double>(x, 2)));
  const auto m2 = moments(BranchPoints(0.6, std::span<const double>(x2, 2)));
  CHECK(m2.M(0, 0) / m1.M(0, 0) == doctest::Approx(1 / std::sqrt(2.0)).epsilon(1e-13));
  const auto sd = solved({-1, -2});
  const auto ms = moments(sd.bp);
  CHECK(ms.mt(0) == doctest::Approx(ms.M(0, 0) * sd.q[0]).epsilon(1e-12));
}

TEST_CASE("A-cycle matrix against independent gap quadrature") {
  for (auto x : std::vector<std::vector<double>>{{-1, -2}, {-1, -2, -3, -4}, {-1, -2, -3, -4, -5, -6}}) {
    const auto sd = solved(x);
    const int g = sd.genus();
    for (int j = 0; j < g; ++j) {
      for (int k = 0; k < g; ++k) {
        double ref = 0.0;
        for (int l = j; l < g; ++l) {
          ref += oracle::gap_integral(sd.bp, l + 1, [k](double s) { return std::pow(s, k); });
        }
        ref *= -2.0;
        CHECK(sd.A(j, k) == doctest::Approx(ref).epsilon(1e-11));
      }
    }
  }
}

TEST_CASE("genus-1 period matches the elliptic closed form and is scale free") {
  for (const auto& x : g1_configs()) {
    const auto sd = solved(x);
    const cd cf = tau_g1_closed_form(sd.bp);
    CHECK(std::abs(sd.tau(0, 0) - cf) < 1e-11 * std::abs(cf));
    CHECK(sd.tau(0, 0).real() == 0.0);
    CHECK(*sd.c0 == doctest::Approx(c0_g1_closed_form(sd.bp)).epsilon(1e-11));
    const auto s2 = solved(scaled(x, 3.0));
    CHECK(std::abs(s2.tau(0, 0) - sd.tau(0, 0)) < 1e-10 * std::abs(cf));
  }
}

TEST_CASE("period matrix is symmetric with positive imaginary part") {
  for (auto x : std::vector<std::vector<double>>{{-1, -2, -3, -4}, {-0.5, -1, -3, -5},
                                                  {-1, -2, -3, -4, -5, -6}}) {
    const auto sd = solved(x);
    CHECK(sd.tau_asymmetry < 1e-10);
    const Eigen::MatrixXd im = sd.tau.imag();
    CHECK((im - im.transpose()).cwiseAbs().maxCoeff() == 0.0);
    CHECK(Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(im).eigenvalues().minCoeff() > 0.0);
    CHECK(sd.tau.real().cwiseAbs().maxCoeff() == 0.0);
  }
  Eigen::MatrixXd bad = Eigen::MatrixXd::Identity(3, 3);
  const auto sd = solved({-1, -2, -3, -4});
  CHECK_THROWS_AS(period_matrix(sd.bp, bad), Error);
}

TEST_CASE("frequencies: closed form, scaling and sign") {
  for (const auto& x : g1_configs()) {
    const auto sd = solved(x);
    const double cf = asympt::omega_g1_closed_form(sd.x0(), x[0], x[1]);
    CHECK(sd.omega(0) == doctest::Approx(cf).epsilon(1e-11));
    CHECK(sd.omega(0) > 0.0);
    const auto s2 = solved(scaled(x, 2.0));
    CHECK(s2.omega(0) == doctest::Approx(std::pow(2.0, 1.5) * sd.omega(0)).epsilon(1e-10));
  }
  const auto g2 = solved({-1, -2, -3, -4});
  CHECK(g2.omega(0) > 0.0);
  CHECK(g2.omega(1) > 0.0);
  std::vector<double> q = g2.q;
  for (double& v : q) v = -v;
  try {
    omega_frequencies(g2.bp, q);
    FAIL("expected solver_inconsistency");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::solver_inconsistency);
  }
}

TEST_CASE("genus-1 Abel map") {
  for (const auto& x : g1_configs()) {
    const auto sd = solved(x);
    const double c0 = *sd.c0;
    CHECK(abel_map_g1(sd.bp, c0, sd.x0()) == 0.0);
    // a full ray is half an A-period
    CHECK(abel_map_g1(sd.bp, c0, INFINITY) == doctest::Approx(0.5).epsilon(1e-12));
    double prev = 0.0;
    for (double t : {0.01, 0.1, 0.5, 2.0, 10.0, 1e3}) {
      const double xx = sd.x0() + t * (sd.x0() - x[1]);
      const double phi = abel_map_g1(sd.bp, c0, xx);
      CHECK(phi > prev);
      CHECK(phi < 0.5);
      prev = phi;
      // derivative is c0 / sqrt R
      const double h = 1e-5 * (xx - sd.x0());
      const double d = (abel_map_g1(sd.bp, c0, xx + h) - abel_map_g1(sd.bp, c0, xx - h)) / (2 * h);
      CHECK(d == doctest::Approx(c0 / std::sqrt(oracle::abs_R(sd.bp, xx))).epsilon(1e-6));
    }
    CHECK_THROWS_AS(abel_map_g1(sd.bp, c0, sd.x0() - 0.1), Error);
  }
}

TEST_CASE("theta and ray-integral identities on genus-1 surfaces") {
  for (const auto& x : g1_configs()) {
    const auto sd = solved(x);
    for (const auto& c : oracle::theta_identities(sd)) {
      INFO(c.name);
      CHECK(c.error < 1e-10);
    }
    for (const auto& c : oracle::ray_integrals(sd)) {
      INFO(c.name);
      CHECK(c.error < 1e-11);
    }
  }
}
