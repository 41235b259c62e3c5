#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "airygap/asympt.hpp"
#include "airygap/errors.hpp"
#include "airygap/roots.hpp"

namespace airygap::asympt {
namespace {

constexpr char kCriterion[] = "need x2 < x1 < 0, or x1 >= 0 and x_2 < -2x_1";

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

void require_admissible_g1(double x1, double x2) {
  if (!std::isfinite(x1) || !std::isfinite(x2) || !(x2 < x1)) {
    throw Error(ErrorKind::domain, "genus-1 endpoints must be finite with x1 > x2");
  }
  if (!admissible_g1(x1, x2)) {
    throw Error(ErrorKind::inadmissible, "(x1, x2) = (" + fmt(x1) + ", " + fmt(x2) +
                                             ") is not admissible: " + kCriterion);
  }
}

std::pair<double, double> bracket_g1(double x1, double x2) {
  return {x1 < 0.0 ? 0.0 : x1, x1 - x2};
}

}  // namespace

bool admissible_g1(double x1, double x2) {
  return (x2 < x1 && x1 < 0.0) || (x1 >= 0.0 && x2 < -2.0 * x1);
}

double F_g1(double x, double x1, double x2) {
  if (!(x >= x1)) throw Error(ErrorKind::domain, "F_g1: need x >= x1");
  if (x == x1) {
    // integrand reduces to (s - x2/2) / sqrt(s - x2)
    const double d = x1 - x2;
    return std::sqrt(d) * (2.0 * d / 3.0 + x2);
  }
  auto f = [=](double s) { return std::sqrt(x - s) * (s + 0.5 * (x - x1 - x2)); };
  quad::Options opt;
  opt.rel_tol = 1e-14;
  // only x within ~1e-5 (x1 - x2) of x1 misses the target; the sign is all
  // the bracket search needs there
  opt.fail_tol = 1e-3;
  return quad::integrate(f, x2, x1, quad::Weight::chebyshev, opt).value;
}

double solve_x0_g1(double x1, double x2) {
  require_admissible_g1(x1, x2);
  const double scale = std::max(std::abs(x1), std::abs(x2));
  auto [lo, hi] = bracket_g1(x1, x2);
  auto f = [=](double x) { return F_g1(x, x1, x2); };
  const double flo = f(lo), fhi = f(hi);
  if ((flo > 0.0) == (fhi > 0.0)) {
    throw Error(ErrorKind::no_solution, "F has no sign change on the genus-1 bracket");
  }
  return roots::brent(f, lo, hi, flo, fhi, 1e-16 * scale);
}

double solve_x0_g1_closed_form(double x1, double x2) {
  require_admissible_g1(x1, x2);
  const double scale = std::max(std::abs(x1), std::abs(x2));
  auto [lo, hi] = bracket_g1(x1, x2);
  auto G = [=](double x0) {
    const double k = std::sqrt((x1 - x2) / (x0 - x2));
    if (x0 == x1) return x0 + x1 + x2;  // k = 1: (x0 - x1) K(k) -> 0, E(1) = 1
    return (x0 + x1 + x2) * specialfn::ellint_E(k) + 2.0 * (x0 - x1) * specialfn::ellint_K(k);
  };
  const double glo = G(lo), ghi = G(hi);
  if ((glo > 0.0) == (ghi > 0.0)) {
    throw Error(ErrorKind::no_solution, "elliptic root equation has no sign change on the bracket");
  }
  return roots::brent(G, lo, hi, glo, ghi, 1e-16 * scale);
}

double system_residual(const IntervalConfig& cfg, double x0, std::vector<double>* qout,
                       const quad::Options& opt) {
  const riemann::BranchPoints bp(x0, cfg);
  const riemann::Moments m = riemann::moments(bp, opt);
  const int g = cfg.g;
  const Eigen::VectorXd low = m.M.partialPivLu().solve(m.mt);
  std::vector<double> q(g + 2);
  for (int j = 0; j < g; ++j) q[j] = low(j);
  q[g] = m.q_g;
  q[g + 1] = -1.0;
  double r = 0.0;
  for (int k = g + 1; k >= 0; --k) r = r * x0 + q[k];
  if (qout) *qout = std::move(q);
  return r;
}

SurfaceData solve_system(const IntervalConfig& cfg, const SolveOptions& opt) {
  const int g = cfg.g;
  if (g < 1 || static_cast<int>(cfg.x.size()) != 2 * g) {
    throw Error(ErrorKind::domain, "solve_system: malformed configuration");
  }
  if (g == 1) require_admissible_g1(cfg.x[0], cfg.x[1]);
  const double scale = cfg.scale();
  const double base = std::max(cfg.x[0], 0.0);
  const double hi = cfg.x[0] - cfg.x[2 * g - 1];
  const double eps = 1e-8 * scale;
  const int n = std::max(opt.grid_points, 2);

  auto res = [&](double x0) { return system_residual(cfg, x0, nullptr, opt.quad); };

  std::vector<double> xs(n), fs(n);
  const double span = hi - base;
  for (int i = 0; i < n; ++i) {
    // offsets log-spaced from eps to span above the lower end
    xs[i] = base + eps * std::pow(span / eps, double(i) / (n - 1));
    try {
      fs[i] = res(xs[i]);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::quadrature && e.kind() != ErrorKind::degenerate) throw;
      fs[i] = std::numeric_limits<double>::quiet_NaN();
    }
  }
  xs[n - 1] = hi;

  std::vector<double> roots_found;
  const double res_scale = std::pow(scale, g + 1);
  for (int i = 0; i + 1 < n; ++i) {
    if (!std::isfinite(fs[i]) || !std::isfinite(fs[i + 1])) continue;
    if (fs[i] == 0.0) {
      roots_found.push_back(xs[i]);
      continue;
    }
    if ((fs[i] > 0.0) == (fs[i + 1] > 0.0)) continue;
    const double root = roots::brent(res, xs[i], xs[i + 1], fs[i], fs[i + 1], 1e-16 * scale);
    // a sign change across a pole of the inner solve is not a root
    if (std::abs(res(root)) <= 1e-6 * res_scale) roots_found.push_back(root);
  }
  if (fs[n - 1] == 0.0) roots_found.push_back(xs[n - 1]);

  if (roots_found.empty()) {
    throw Error(ErrorKind::no_solution,
                "no sign change of the x0 residual on (" + fmt(base) + ", " + fmt(hi) +
                    "]; the configuration is not in the admissible set or the solver missed it");
  }
  std::sort(roots_found.begin(), roots_found.end());
  if (roots_found.size() > 1 && opt.reject_ambiguous) {
    std::string list;
    for (double r : roots_found) list += (list.empty() ? "" : ", ") + fmt(r);
    throw Error(ErrorKind::ambiguous, "several x0 roots: " + list);
  }

  const double x0 = roots_found.front();
  std::vector<double> q;
  const double resid = system_residual(cfg, x0, &q, opt.quad);
  const riemann::BranchPoints bp(x0, cfg);
  const riemann::ACycle ac = riemann::a_cycle_matrix(bp, opt.quad);
  const riemann::PeriodMatrix pm = riemann::period_matrix(bp, ac.A, opt.quad);
  const Eigen::VectorXd omega = riemann::omega_frequencies(bp, q, opt.quad);

  SurfaceData sd{cfg, bp, q, ac.A, ac.condition, pm.tau, pm.asymmetry, omega,
                 std::nullopt, 0.0, resid, roots_found.size() > 1, roots_found};
  if (g == 1) sd.c0 = riemann::c0_g1_closed_form(bp);
  sd.c = leading_coeff(sd);
  return sd;
}

double leading_coeff(std::span<const double> x, std::span<const double> q) {
  const int np = static_cast<int>(x.size());
  const int g = (np - 1) / 2;
  if (np != 2 * g + 1 || g < 1 || static_cast<int>(q.size()) != g + 2) {
    throw Error(ErrorKind::domain, "leading_coeff: inconsistent sizes");
  }
  double cubes = 0.0, pairs = 0.0, triples = 0.0, sum = 0.0;
  for (int j = 0; j < np; ++j) {
    cubes += x[j] * x[j] * x[j];
    sum += x[j];
    for (int k = j + 1; k < np; ++k) {
      pairs += x[j] * x[j] * x[k] + x[j] * x[k] * x[k];
      for (int l = k + 1; l < np; ++l) triples += x[j] * x[k] * x[l];
    }
  }
  const double q_gm2 = (g >= 2) ? q[g - 2] : 0.0;
  const double q_gm1 = q[g - 1];
  return (cubes - pairs - 2.0 * triples) / 12.0 - 2.0 / 3.0 * q_gm2 - q_gm1 / 3.0 * sum;
}

double leading_coeff(const SurfaceData& sd) {
  return leading_coeff(sd.bp.points(), sd.q);
}

double leading_coeff_g1_closed_form(double x0, double x1, double x2) {
  const double q0 = x0 * (x0 - x1 - x2) / 2.0;
  return (x0 * x0 * x0 + x1 * x1 * x1 + x2 * x2 * x2 - (x0 + x1) * (x0 + x2) * (x1 + x2)) / 12.0 -
         q0 / 3.0 * (x0 + x1 + x2);
}

double omega_g1_closed_form(double x0, double x1, double x2) {
  const double L = x0 - x2;
  const double k = std::sqrt((x1 - x2) / L);
  const double kp = std::sqrt((x0 - x1) / L);
  const double K = specialfn::ellint_K(k);
  const double E = specialfn::ellint_E(k);
  const double Kp = specialfn::ellint_K(kp);
  const double Ep = specialfn::ellint_E(kp);
  return 2.0 / 3.0 * std::sqrt(L) * (x0 + x1 + x2) * (Kp * (1.0 - E / K) - Ep);
}

Eigen::VectorXd nu_vector(const SurfaceData& sd, double r) {
  if (!(r > 0.0) || !std::isfinite(r)) throw Error(ErrorKind::domain, "nu_vector: need r > 0");
  return -sd.omega * (r * std::sqrt(r) / (2.0 * std::numbers::pi));
}

specialfn::ThetaEvaluator make_theta(const SurfaceData& sd, double tol) {
  return specialfn::ThetaEvaluator(sd.tau, tol);
}

ExpansionTerms expansion_terms(const SurfaceData& sd, const specialfn::ThetaEvaluator& ev,
                               double r, std::optional<double> C) {
  ExpansionTerms t;
  const int g = sd.genus();
  t.c = sd.c;
  t.log_coeff = -3.0 * g / 8.0;
  t.nu = nu_vector(sd, r);
  const std::vector<double> nu(t.nu.data(), t.nu.data() + g);
  t.theta_val = specialfn::theta(ev, std::span<const double>(nu)).real();
  if (!(t.theta_val > 0.0)) {
    throw Error(ErrorKind::theta, "theta(nu) = " + fmt(t.theta_val) + " is not positive at r = " +
                                      fmt(r));
  }
  t.C = C;
  t.cubic = sd.c * r * r * r;
  t.log_term = t.log_coeff * std::log(r);
  t.log_theta = std::log(t.theta_val);
  t.total = t.cubic + t.log_term + t.log_theta + C.value_or(0.0);
  return t;
}

double predicted_logF(const SurfaceData& sd, const specialfn::ThetaEvaluator& ev, double r,
                      double C) {
  return expansion_terms(sd, ev, r, C).total;
}

double predicted_logF(const SurfaceData& sd, double r, double C, double theta_tol) {
  return predicted_logF(sd, make_theta(sd, theta_tol), r, C);
}

Admissibility is_admissible(const IntervalConfig& cfg) {
  if (cfg.g == 1) {
    const bool ok = admissible_g1(cfg.x[0], cfg.x[1]);
    return {ok, ok ? "genus-1 criterion satisfied" : std::string("genus-1 criterion: ") + kCriterion};
  }
  try {
    const SurfaceData sd = solve_system(cfg);
    return {true, sd.ambiguous ? "system solved (several roots, smallest taken)" : "system solved"};
  } catch (const Error& e) {
    return {false, std::string("system not solved: ") + e.what()};
  }
}

}  // namespace airygap::asympt
