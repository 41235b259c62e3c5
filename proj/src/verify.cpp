#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include <Eigen/Dense>

#include "airygap/errors.hpp"
#include "airygap/fredholm.hpp"
#include "airygap/parallel.hpp"
#include "airygap/verify.hpp"

namespace airygap::verify {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double max_abs(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

double lsq_rss(const Eigen::MatrixXd& X, const Eigen::VectorXd& y) {
  const Eigen::VectorXd beta = X.colPivHouseholderQr().solve(y);
  return (y - X * beta).squaredNorm();
}

// RSS of y ~ alpha + beta / t + a cos(w t) + b sin(w t)
double period_rss(const std::vector<double>& t, const Eigen::VectorXd& y, double w) {
  const int n = static_cast<int>(t.size());
  Eigen::MatrixXd X(n, 4);
  for (int i = 0; i < n; ++i) {
    X(i, 0) = 1.0;
    X(i, 1) = 1.0 / t[i];
    X(i, 2) = std::cos(w * t[i]);
    X(i, 3) = std::sin(w * t[i]);
  }
  return lsq_rss(X, y);
}

std::vector<double> log_theta_on_grid(const SurfaceData& sd, const specialfn::ThetaEvaluator& ev,
                                      const std::vector<double>& r) {
  std::vector<double> out(r.size());
  for (std::size_t i = 0; i < r.size(); ++i) out[i] = asympt::expansion_terms(sd, ev, r[i]).log_theta;
  return out;
}

void check_grid(const std::vector<double>& r) {
  for (std::size_t i = 0; i < r.size(); ++i) {
    if (!(r[i] > 0.0) || !std::isfinite(r[i])) throw Error(ErrorKind::domain, "r grid must be positive");
    if (i > 0 && !(r[i] > r[i - 1])) throw Error(ErrorKind::domain, "r grid must be strictly increasing");
  }
}

// The comparison part of check_oscillation; no sampling requirement.
void compare_theta(const SurfaceData& sd, const specialfn::ThetaEvaluator& ev,
                   const std::vector<double>& r, const std::vector<double>& logF, Oscillation& out) {
  const int g = sd.genus();
  const std::vector<double> lt = log_theta_on_grid(sd, ev, r);
  std::vector<double> with(r.size()), without(r.size());
  for (std::size_t i = 0; i < r.size(); ++i) {
    without[i] = sd.c * r[i] * r[i] * r[i] - 3.0 * g / 8.0 * std::log(r[i]);
    with[i] = without[i] + lt[i];
  }
  const ConstantFit fw = fit_constant(r, logF, with);
  const ConstantFit fo = fit_constant(r, logF, without);
  out.max_dev_with_theta = max_abs(fw.residuals);
  out.max_dev_without_theta = max_abs(fo.residuals);
  out.C_without_theta = fo.C;
  const auto [lo, hi] = std::minmax_element(lt.begin(), lt.end());
  out.log_theta_half_range = 0.5 * (*hi - *lo);
}

void measure_period(const SurfaceData& sd, const std::vector<double>& r,
                    const std::vector<double>& logF, Oscillation& out) {
  const int g = sd.genus();
  const int n = static_cast<int>(r.size());
  if (n < 6) {
    out.note = "period not assessed: fewer than 6 grid points";
    return;
  }
  std::vector<double> t(n);
  Eigen::VectorXd y(n);
  double dt_max = 0.0;
  for (int i = 0; i < n; ++i) {
    t[i] = r[i] * std::sqrt(r[i]);
    y(i) = logF[i] - sd.c * r[i] * r[i] * r[i] + 3.0 * g / 8.0 * std::log(r[i]);
    if (i > 0) dt_max = std::max(dt_max, t[i] - t[i - 1]);
  }
  const double om_min = sd.omega.minCoeff();
  const double om_max = sd.omega.maxCoeff();
  const double w_lo = 0.2 * om_min;
  const double w_hi = std::min(3.0 * om_max, kPi / dt_max);
  const double span = t.back() - t.front();
  const double step = 2.0 * kPi / span / 50.0;
  double best_w = w_lo, best = std::numeric_limits<double>::infinity();
  for (double w = w_lo; w <= w_hi; w += step) {
    const double rss = period_rss(t, y, w);
    if (rss < best) {
      best = rss;
      best_w = w;
    }
  }
  // golden-section refinement around the best scan point
  double a = best_w - step, b = best_w + step;
  const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
  double c1 = b - gr * (b - a), c2 = a + gr * (b - a);
  double f1 = period_rss(t, y, c1), f2 = period_rss(t, y, c2);
  for (int it = 0; it < 80; ++it) {
    if (f1 < f2) {
      b = c2; c2 = c1; f2 = f1;
      c1 = b - gr * (b - a);
      f1 = period_rss(t, y, c1);
    } else {
      a = c1; c1 = c2; f1 = f2;
      c2 = a + gr * (b - a);
      f2 = period_rss(t, y, c2);
    }
  }
  const double w = 0.5 * (a + b);
  out.period_measured = 2.0 * kPi / w;
  double best_gap = std::numeric_limits<double>::infinity();
  for (int j = 0; j < sd.omega.size(); ++j) {
    const double p = 2.0 * kPi / sd.omega(j);
    if (std::abs(p - out.period_measured) < best_gap) {
      best_gap = std::abs(p - out.period_measured);
      out.period_expected = p;
    }
  }
  out.period_ratio = out.period_measured / out.period_expected;
  out.period_assessed = true;
}

}  // namespace

ConstantFit fit_constant(const std::vector<double>& r, const std::vector<double>& logF,
                         const std::vector<double>& predicted_no_C) {
  if (r.size() != logF.size() || r.size() != predicted_no_C.size()) {
    throw Error(ErrorKind::domain, "fit_constant: vectors differ in length");
  }
  if (r.size() < 4) {
    throw Error(ErrorKind::insufficient_data,
                "fit_constant: need at least 4 points, got " + std::to_string(r.size()));
  }
  double sw = 0.0, s = 0.0;
  for (std::size_t i = 0; i < r.size(); ++i) {
    if (!(std::abs(logF[i]) <= 500.0)) {
      throw Error(ErrorKind::domain, "fit_constant: |logF| exceeds 500 at r = " + std::to_string(r[i]) +
                                         " (outside the double-precision window)");
    }
    const double w = r[i] * r[i] * r[i];
    sw += w;
    s += w * (logF[i] - predicted_no_C[i]);
  }
  ConstantFit f;
  f.C = s / sw;
  f.residuals.resize(r.size());
  for (std::size_t i = 0; i < r.size(); ++i) f.residuals[i] = logF[i] - predicted_no_C[i] - f.C;
  return f;
}

DecayFit fit_decay_exponent(const SurfaceData& sd, const std::vector<double>& r,
                            const std::vector<double>& diff) {
  const int g = sd.genus();
  const int n = static_cast<int>(r.size());
  const int params = 2 * g + 2;
  if (n <= params) {
    throw Error(ErrorKind::insufficient_data, "decay fit: need more than " + std::to_string(params) +
                                                  " points, got " + std::to_string(n));
  }
  Eigen::MatrixXd osc(n, 2 * g);
  for (int i = 0; i < n; ++i) {
    const Eigen::VectorXd nu = asympt::nu_vector(sd, r[i]);
    for (int j = 0; j < g; ++j) {
      osc(i, 2 * j) = std::cos(2.0 * kPi * nu(j));
      osc(i, 2 * j + 1) = std::sin(2.0 * kPi * nu(j));
    }
  }
  const Eigen::VectorXd y = Eigen::Map<const Eigen::VectorXd>(diff.data(), n);
  DecayFit best{0.0, std::numeric_limits<double>::infinity()};
  for (int k = 0; k <= 800; ++k) {
    const double p = -4.0 + k * 0.005;
    Eigen::MatrixXd X(n, params);
    for (int i = 0; i < n; ++i) {
      const double rp = std::pow(r[i], p);
      X(i, 0) = 1.0;
      X(i, 1) = rp;
      for (int j = 0; j < 2 * g; ++j) X(i, 2 + j) = rp * osc(i, j);
    }
    const double rss = lsq_rss(X, y);
    if (rss < best.rss) best = {p, rss};
  }
  return best;
}

double naive_decay_exponent(const std::vector<double>& r, const std::vector<double>& residuals) {
  std::vector<double> lx, ly;
  for (std::size_t i = r.size() / 2; i < r.size(); ++i) {
    if (residuals[i] == 0.0) continue;
    lx.push_back(std::log(r[i]));
    ly.push_back(std::log(std::abs(residuals[i])));
  }
  if (lx.size() < 2) return kNaN;
  const double n = static_cast<double>(lx.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    mx += lx[i] / n;
    my += ly[i] / n;
  }
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    sxy += (lx[i] - mx) * (ly[i] - my);
    sxx += (lx[i] - mx) * (lx[i] - mx);
  }
  return sxy / sxx;
}

double max_resolving_spacing(const SurfaceData& sd, double r_max) {
  return kPi / (3.0 * sd.omega.maxCoeff() * std::sqrt(r_max));
}

Oscillation check_oscillation(const SurfaceData& sd, const std::vector<double>& r,
                              const std::vector<double>& logF, double theta_tol) {
  check_grid(r);
  if (r.size() != logF.size()) throw Error(ErrorKind::domain, "check_oscillation: length mismatch");
  if (r.size() < 2) throw Error(ErrorKind::insufficient_data, "check_oscillation: grid too short");
  const double limit = max_resolving_spacing(sd, r.back());
  double spacing = 0.0;
  for (std::size_t i = 1; i < r.size(); ++i) spacing = std::max(spacing, r[i] - r[i - 1]);
  if (spacing >= limit) {
    throw Error(ErrorKind::aliasing, "grid spacing " + std::to_string(spacing) +
                                         " does not resolve the fastest oscillation (need < " +
                                         std::to_string(limit) + ")");
  }
  Oscillation out;
  const auto ev = asympt::make_theta(sd, theta_tol);
  compare_theta(sd, ev, r, logF, out);
  measure_period(sd, r, logF, out);
  return out;
}

double safe_r_max(const SurfaceData& sd, int order, int threads) {
  double r = std::cbrt(400.0 / std::abs(sd.c));
  for (int it = 0; it < 200; ++it, r *= 0.97) {
    try {
      const auto res = fredholm::gap_probability_scaled(sd.cfg, r, order, threads);
      if (res.err_estimate < 1e-7) return r;
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::near_singular) throw;
    }
  }
  throw Error(ErrorKind::near_singular, "no r with a converged Fredholm determinant was found");
}

std::vector<double> default_grid(const IntervalConfig& cfg, double r_safe, int n) {
  const double s = cfg.scale();
  const double lo = 4.0 / s;
  const double hi = std::min(9.0 / s, r_safe);
  if (!(hi > lo) || n < 2) throw Error(ErrorKind::domain, "default grid: empty window");
  std::vector<double> r(n);
  for (int i = 0; i < n; ++i) r[i] = lo + (hi - lo) * i / (n - 1);
  return r;
}

VerificationReport run_verification(const IntervalConfig& cfg, const std::vector<double>& r_grid,
                                    const VerifyOptions& opt) {
  try {
    check_grid(r_grid);
  } catch (const Error& e) {
    throw annotate(e, "grid");
  }
  VerificationReport rep;
  rep.cfg = cfg;
  rep.order = opt.order;

  std::optional<SurfaceData> sd;
  try {
    sd = asympt::solve_system(cfg);
  } catch (const Error& e) {
    throw annotate(e, "solve_system");
  }
  const int g = cfg.g;
  rep.x0 = sd->x0();
  rep.c = sd->c;
  rep.omega.assign(sd->omega.data(), sd->omega.data() + g);
  for (int i = 0; i < g; ++i)
    for (int j = 0; j < g; ++j) rep.tau_imag.push_back(sd->tau(i, j).imag());
  if (g >= 2) {
    rep.notes.push_back("rational independence / Diophantine conditions are not checked for g >= 2");
  }
  if (sd->ambiguous) rep.notes.push_back("several x0 roots found; the smallest was used");
  const double cap = std::cbrt(400.0 / std::abs(sd->c));
  if (r_grid.back() > cap) {
    rep.notes.push_back("grid extends beyond |c| r^3 <= 400 (r <= " + std::to_string(cap) + ")");
  }

  // Fredholm sweep; results land in slots indexed by r, so the outcome does
  // not depend on scheduling.
  const int n = static_cast<int>(r_grid.size());
  std::vector<fredholm::NystromResult> sweep(n);
  std::vector<std::optional<Error>> failures(n);
  const int threads = opt.threads > 0 ? worker_count(opt.threads) : worker_count();
  parallel_for(n, threads, [&](int i) {
    try {
      sweep[i] = fredholm::gap_probability_scaled(cfg, r_grid[i], opt.order, 1);
    } catch (const Error& e) {
      failures[i] = e;
    }
  });
  int good = n;
  for (int i = 0; i < n; ++i) {
    if (failures[i]) {
      good = i;
      rep.partial = true;
      rep.error = annotate(*failures[i], "fredholm_sweep at r = " + std::to_string(r_grid[i])).what();
      break;
    }
  }
  const auto ev = asympt::make_theta(*sd, opt.theta_tol);
  for (int i = 0; i < good; ++i) {
    rep.r_grid.push_back(r_grid[i]);
    rep.logF_num.push_back(sweep[i].log_det);
    rep.err_estimate.push_back(sweep[i].err_estimate);
    const auto t = asympt::expansion_terms(*sd, ev, r_grid[i]);
    rep.predicted_no_C.push_back(t.total);
  }
  if (rep.partial && good < 4) {
    rep.notes.push_back("too few points before the failure to fit the constant");
    rep.decay_exponent_fit = rep.decay_exponent_naive = kNaN;
    rep.C_fit = rep.max_abs_residual = kNaN;
    return rep;
  }

  try {
    const ConstantFit f = fit_constant(rep.r_grid, rep.logF_num, rep.predicted_no_C);
    rep.C_fit = f.C;
    rep.residuals = f.residuals;
    rep.max_abs_residual = max_abs(f.residuals);
  } catch (const Error& e) {
    throw annotate(e, "fit_constant");
  }

  rep.decay_exponent_naive = naive_decay_exponent(rep.r_grid, rep.residuals);
  std::vector<double> diff(rep.r_grid.size());
  for (std::size_t i = 0; i < diff.size(); ++i) diff[i] = rep.logF_num[i] - rep.predicted_no_C[i];
  try {
    rep.decay_exponent_fit = fit_decay_exponent(*sd, rep.r_grid, diff).exponent;
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::insufficient_data) throw annotate(e, "decay_fit");
    rep.decay_exponent_fit = kNaN;
    rep.notes.push_back(std::string("decay exponent not fitted: ") + e.what());
  }

  try {
    compare_theta(*sd, ev, rep.r_grid, rep.logF_num, rep.oscillation);
    const double limit = max_resolving_spacing(*sd, rep.r_grid.back());
    double spacing = 0.0;
    for (std::size_t i = 1; i < rep.r_grid.size(); ++i) {
      spacing = std::max(spacing, rep.r_grid[i] - rep.r_grid[i - 1]);
    }
    if (spacing < limit) {
      measure_period(*sd, rep.r_grid, rep.logF_num, rep.oscillation);
    } else {
      rep.oscillation.note = "period not assessed: grid spacing " + std::to_string(spacing) +
                             " exceeds " + std::to_string(limit);
    }
  } catch (const Error& e) {
    throw annotate(e, "oscillation");
  }
  return rep;
}

}  // namespace airygap::verify
