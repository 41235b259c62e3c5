#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "airygap/errors.hpp"
#include "airygap/riemann.hpp"
#include "airygap/specialfn.hpp"

namespace airygap {

IntervalConfig IntervalConfig::make(std::vector<double> x) {
  if (x.empty() || x.size() % 2 != 0) {
    throw Error(ErrorKind::domain, "interval config: need a non-empty, even number of endpoints");
  }
  IntervalConfig cfg;
  cfg.g = static_cast<int>(x.size() / 2);
  cfg.x = std::move(x);
  for (double v : cfg.x) {
    if (!std::isfinite(v)) throw Error(ErrorKind::domain, "interval config: non-finite endpoint");
  }
  for (std::size_t i = 1; i < cfg.x.size(); ++i) {
    if (!(cfg.x[i] < cfg.x[i - 1])) {
      throw Error(ErrorKind::domain, "interval config: endpoints must be strictly decreasing");
    }
  }
  const double s = cfg.scale();
  for (std::size_t i = 1; i < cfg.x.size(); ++i) {
    if (cfg.x[i - 1] - cfg.x[i] < 1e-8 * s) {
      throw Error(ErrorKind::degenerate, "interval config: endpoints " + std::to_string(i) +
                                             " and " + std::to_string(i + 1) + " nearly coincide");
    }
  }
  return cfg;
}

double IntervalConfig::scale() const {
  double s = 0.0;
  for (double v : x) s = std::max(s, std::abs(v));
  return s;
}

}  // namespace airygap

namespace airygap::riemann {
namespace {

using cd = std::complex<double>;

// prod over l not in {skip1, skip2} of |s - x_l|^{-1/2}
double other_factor(const BranchPoints& bp, double s, int skip1, int skip2) {
  double p = 1.0;
  const auto& x = bp.points();
  for (int l = 0; l < static_cast<int>(x.size()); ++l) {
    if (l == skip1 || l == skip2) continue;
    p *= std::abs(s - x[l]);
  }
  return 1.0 / std::sqrt(p);
}

double integrate_gap(const BranchPoints& bp, int i, const quad::Integrand& f,
                     const quad::Options& opt) {
  // gap (x_{2i}, x_{2i-1}); sqrt R = (-1)^i sqrt|R| there
  const double sign = (i % 2 == 0) ? 1.0 : -1.0;
  auto h = [&](double s) { return sign * f(s) * other_factor(bp, s, 2 * i, 2 * i - 1); };
  return quad::integrate(h, bp[2 * i], bp[2 * i - 1], quad::Weight::chebyshev, opt).value;
}

// int over the cut (x_{2j+1}, x_{2j}) of f / sqrt|R|; sqrt R_+ = i (-1)^j sqrt|R|
double integrate_cut_abs(const BranchPoints& bp, int j, const quad::Integrand& f,
                         const quad::Options& opt) {
  auto h = [&](double s) { return f(s) * other_factor(bp, s, 2 * j + 1, 2 * j); };
  return quad::integrate(h, bp[2 * j + 1], bp[2 * j], quad::Weight::chebyshev, opt).value;
}

double ipow(double s, int k) {
  double r = 1.0;
  for (int i = 0; i < k; ++i) r *= s;
  return r;
}

}  // namespace

BranchPoints::BranchPoints(double x0, std::span<const double> x) {
  if (x.empty() || x.size() % 2 != 0) {
    throw Error(ErrorKind::domain, "branch points: need 2g endpoints");
  }
  g_ = static_cast<int>(x.size() / 2);
  pts_.reserve(x.size() + 1);
  pts_.push_back(x0);
  pts_.insert(pts_.end(), x.begin(), x.end());
  for (double v : pts_) {
    if (!std::isfinite(v)) throw Error(ErrorKind::domain, "branch points: non-finite value");
  }
  if (!(x0 > std::max(x[0], 0.0))) {
    throw Error(ErrorKind::domain, "branch points: need x0 > max(x1, 0)");
  }
  for (std::size_t i = 1; i < pts_.size(); ++i) {
    if (!(pts_[i] < pts_[i - 1])) {
      throw Error(ErrorKind::domain, "branch points: must be strictly decreasing");
    }
  }
  const double s = scale();
  for (std::size_t i = 1; i < pts_.size(); ++i) {
    if (pts_[i - 1] - pts_[i] < 1e-8 * s) {
      throw Error(ErrorKind::degenerate, "branch points: x_" + std::to_string(i - 1) + " and x_" +
                                             std::to_string(i) + " nearly coincide");
    }
  }
}

double BranchPoints::scale() const {
  double s = 0.0;
  for (double v : pts_) s = std::max(s, std::abs(v));
  return s;
}

cd sqrt_R(cd z, const BranchPoints& bp, Sheet sheet) {
  cd p = 1.0;
  for (double xj : bp.points()) p *= std::sqrt(z - xj);
  return sheet == Sheet::upper ? p : -p;
}

quad::Result cut_integral(const quad::Integrand& fn, double a, double b, quad::Weight w,
                          int order) {
  const double v1 = quad::integrate_fixed(fn, a, b, w, order);
  const double v2 = quad::integrate_fixed(fn, a, b, w, 2 * order);
  quad::Result r;
  r.value = v1;
  r.err = std::abs(v2 - v1);
  r.order = order;
  return r;
}

Moments moments(const BranchPoints& bp, const quad::Options& opt) {
  const int g = bp.genus();
  Moments m;
  m.M.resize(g, g);
  m.mt.resize(g);
  double sum = 0.0;
  for (double v : bp.points()) sum += v;
  m.q_g = 0.5 * sum;
  for (int i = 1; i <= g; ++i) {
    for (int j = 1; j <= g; ++j) {
      m.M(i - 1, j - 1) = integrate_gap(bp, i, [j](double s) { return ipow(s, j - 1); }, opt);
    }
    const double qg = m.q_g;
    m.mt(i - 1) = -integrate_gap(
        bp, i, [g, qg](double s) { return -ipow(s, g + 1) + qg * ipow(s, g); }, opt);
  }
  return m;
}

ACycle a_cycle_matrix(const Moments& m) {
  const int g = static_cast<int>(m.M.rows());
  ACycle res;
  res.A.resize(g, g);
  // the band integral runs from x_{2l-1} down to x_{2l}: minus the gap moment
  for (int j = 0; j < g; ++j) {
    for (int k = 0; k < g; ++k) {
      double s = 0.0;
      for (int l = j; l < g; ++l) s += m.M(l, k);
      res.A(j, k) = -2.0 * s;
    }
  }
  const Eigen::JacobiSVD<Eigen::MatrixXd> svd(res.A);
  const auto sv = svd.singularValues();
  res.condition = sv(sv.size() - 1) > 0.0 ? sv(0) / sv(sv.size() - 1)
                                           : std::numeric_limits<double>::infinity();
  if (!(res.condition <= 1e12)) {
    throw Error(ErrorKind::degenerate,
                "A-cycle matrix is singular (condition " + std::to_string(res.condition) + ")");
  }
  return res;
}

ACycle a_cycle_matrix(const BranchPoints& bp, const quad::Options& opt) {
  return a_cycle_matrix(moments(bp, opt));
}

PeriodMatrix period_matrix(const BranchPoints& bp, const Eigen::MatrixXd& A,
                           const quad::Options& opt) {
  const int g = bp.genus();
  if (A.rows() != g || A.cols() != g) {
    throw Error(ErrorKind::domain, "period_matrix: A has wrong shape");
  }
  // B_j encircles the cut (x_{2j-1}, x_{2j-2}), i.e. cut index j-1, where
  // sqrt R_+ = i (-1)^{j-1} sqrt|R|; so the raw B-period is imaginary.
  Eigen::MatrixXd Bim(g, g);
  for (int j = 1; j <= g; ++j) {
    const double sign = ((j - 1) % 2 == 0) ? 1.0 : -1.0;
    for (int m = 1; m <= g; ++m) {
      const double v = integrate_cut_abs(bp, j - 1, [m](double s) { return ipow(s, m - 1); }, opt);
      // 2 v / (i sign) = -2 i sign v
      Bim(j - 1, m - 1) = -2.0 * sign * v;
    }
  }
  const Eigen::MatrixXd tim = A.transpose().partialPivLu().solve(Bim.transpose()).transpose();
  Eigen::MatrixXd t = tim;
  for (int j = 0; j < g; ++j) {
    if (t(j, j) < 0.0) t.row(j) *= -1.0;
  }
  PeriodMatrix pm;
  const double scale = t.cwiseAbs().maxCoeff();
  pm.asymmetry = (t - t.transpose()).cwiseAbs().maxCoeff();
  pm.max_real = 0.0;  // the construction is exactly imaginary
  if (pm.asymmetry > 1e-8 * std::max(1.0, scale)) {
    throw Error(ErrorKind::inconsistent_homology,
                "period matrix not symmetric (max asymmetry " + std::to_string(pm.asymmetry) + ")");
  }
  const Eigen::MatrixXd sym = 0.5 * (t + t.transpose());
  const double lmin =
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(sym, Eigen::EigenvaluesOnly).eigenvalues().minCoeff();
  if (!(lmin > 0.0)) {
    throw Error(ErrorKind::inconsistent_homology, "Im tau is not positive definite");
  }
  pm.tau = Eigen::MatrixXcd(g, g);
  pm.tau.real().setZero();
  pm.tau.imag() = sym;
  return pm;
}

Eigen::VectorXd omega_frequencies(const BranchPoints& bp, std::span<const double> q,
                                  const quad::Options& opt) {
  const int g = bp.genus();
  if (static_cast<int>(q.size()) != g + 2) {
    throw Error(ErrorKind::domain, "omega_frequencies: need g+2 polynomial coefficients");
  }
  auto poly = [q](double s) {
    double r = 0.0;
    for (std::size_t k = q.size(); k-- > 0;) r = r * s + q[k];
    return r;
  };
  Eigen::VectorXd om(g);
  for (int j = 0; j < g; ++j) {
    const double sign = (j % 2 == 0) ? 1.0 : -1.0;
    om(j) = 2.0 * sign * integrate_cut_abs(bp, j, poly, opt);
    if (!(om(j) > 0.0)) {
      throw Error(ErrorKind::solver_inconsistency,
                  "frequency Omega_" + std::to_string(j) + " = " + std::to_string(om(j)) +
                      " is not positive");
    }
  }
  return om;
}

std::complex<double> tau_g1_closed_form(const BranchPoints& bp) {
  if (bp.genus() != 1) throw Error(ErrorKind::domain, "tau_g1_closed_form: genus must be 1");
  const double L = bp[0] - bp[2];
  const double k = std::sqrt((bp[1] - bp[2]) / L);
  const double kp = std::sqrt((bp[0] - bp[1]) / L);
  return {0.0, specialfn::ellint_K(kp) / specialfn::ellint_K(k)};
}

double c0_g1_closed_form(const BranchPoints& bp) {
  if (bp.genus() != 1) throw Error(ErrorKind::domain, "c0_g1_closed_form: genus must be 1");
  const double L = bp[0] - bp[2];
  const double k = std::sqrt((bp[1] - bp[2]) / L);
  return std::sqrt(L) / (4.0 * specialfn::ellint_K(k));
}

namespace {

// int_{x0}^{x} c0 h(s) / sqrt R(s) ds with s = x0 + L tan^2 t, L = x0 - x2:
// ds / sqrt R = 2 dt / sqrt((x0 - x1) cos^2 t + L sin^2 t).
double ray_integral(const BranchPoints& bp, double c0, double upper_t, const quad::Integrand& h) {
  const double x0 = bp[0];
  const double d1 = bp[0] - bp[1];
  const double L = bp[0] - bp[2];
  auto f = [&](double t) {
    const double c = std::cos(t), s = std::sin(t);
    const double tn = s / c;
    return 2.0 * h(x0 + L * tn * tn) / std::sqrt(d1 * c * c + L * s * s);
  };
  quad::Options opt;
  opt.min_order = 16;
  opt.max_order = 4096;
  return c0 * quad::integrate(f, 0.0, upper_t, quad::Weight::none, opt).value;
}

}  // namespace

double abel_map_g1(const BranchPoints& bp, double c0, double x) {
  if (bp.genus() != 1) throw Error(ErrorKind::domain, "abel_map_g1: genus must be 1");
  if (std::isnan(x) || x < bp.x0()) throw Error(ErrorKind::domain, "abel_map_g1: need x >= x0");
  if (x == bp.x0()) return 0.0;
  const double L = bp[0] - bp[2];
  const double upper =
      std::isinf(x) ? std::numbers::pi / 2.0 : std::atan(std::sqrt((x - bp.x0()) / L));
  return ray_integral(bp, c0, upper, [](double) { return 1.0; });
}

double abel_ray_integral_g1(const BranchPoints& bp, double c0, const quad::Integrand& h) {
  if (bp.genus() != 1) throw Error(ErrorKind::domain, "abel_ray_integral_g1: genus must be 1");
  return ray_integral(bp, c0, std::numbers::pi / 2.0, h);
}

}  // namespace airygap::riemann
