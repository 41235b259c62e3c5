#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>

#include <Eigen/Dense>

#include "airygap/errors.hpp"
#include "airygap/fredholm.hpp"
#include "airygap/parallel.hpp"
#include "airygap/quadrature.hpp"
#include "airygap/specialfn.hpp"

namespace airygap::fredholm {
namespace {

constexpr double kNearDiagonal = 1e-6;

// u <= v required; a = Ai, p = Ai'
double kernel_ordered(double u, double au, double pu, double v, double av, double pv) {
  const double h = v - u;
  if (h > kNearDiagonal) return (au * pv - pu * av) / (u - v);
  const double diag = pu * pu - u * au * au;
  return diag - 0.5 * h * au * au - h * h / 6.0 * (au * pu + u * u * au * au - u * pu * pu);
}

void validate(std::span<const Interval> intervals, int order) {
  if (order < 8 || order % 2 != 0) {
    throw Error(ErrorKind::domain, "order must be even and >= 8 (got " + std::to_string(order) + ")");
  }
  std::vector<Interval> sorted(intervals.begin(), intervals.end());
  for (const Interval& iv : sorted) {
    if (!std::isfinite(iv.a) || !std::isfinite(iv.b) || !(iv.a < iv.b)) {
      throw Error(ErrorKind::domain, "intervals must be finite with a < b");
    }
  }
  std::sort(sorted.begin(), sorted.end(), [](const Interval& l, const Interval& r) { return l.a < r.a; });
  for (std::size_t i = 1; i < sorted.size(); ++i) {
    if (sorted[i].a < sorted[i - 1].b) throw Error(ErrorKind::domain, "intervals overlap");
  }
}

}  // namespace

double airy_kernel(double u, double v) {
  if (v < u) std::swap(u, v);
  const auto A = specialfn::airy(u);
  const auto B = specialfn::airy(v);
  return kernel_ordered(u, A.ai, A.ai_prime, v, B.ai, B.ai_prime);
}

double log_det_at_order(std::span<const Interval> intervals, int order, int threads,
                        double* min_pivot, double* max_pivot) {
  validate(intervals, order);
  if (intervals.empty()) {
    if (min_pivot) *min_pivot = 1.0;
    if (max_pivot) *max_pivot = 1.0;
    return 0.0;
  }
  const int n = order * static_cast<int>(intervals.size());
  std::vector<double> t(n), sw(n), ai(n), ap(n);
  for (std::size_t k = 0; k < intervals.size(); ++k) {
    const quad::Rule rule = quad::gauss_legendre(order, intervals[k].a, intervals[k].b);
    for (int i = 0; i < order; ++i) {
      const int idx = static_cast<int>(k) * order + i;
      t[idx] = rule.nodes[i];
      sw[idx] = std::sqrt(rule.weights[i]);
      const auto p = specialfn::airy(t[idx]);
      ai[idx] = p.ai;
      ap[idx] = p.ai_prime;
    }
  }
  Eigen::MatrixXd M(n, n);
  parallel_for(n, threads, [&](int i) {
    for (int j = 0; j < n; ++j) {
      const double k = (t[i] <= t[j]) ? kernel_ordered(t[i], ai[i], ap[i], t[j], ai[j], ap[j])
                                      : kernel_ordered(t[j], ai[j], ap[j], t[i], ai[i], ap[i]);
      M(i, j) = (i == j ? 1.0 : 0.0) - sw[i] * k * sw[j];
    }
  });
  const Eigen::LDLT<Eigen::MatrixXd> ldlt(M);
  const Eigen::VectorXd d = ldlt.vectorD();
  double lo = d.minCoeff();
  double hi = d.cwiseAbs().maxCoeff();
  if (min_pivot) *min_pivot = lo;
  if (max_pivot) *max_pivot = hi;
  if (ldlt.info() != Eigen::Success || !(lo > 0.0)) {
    std::ostringstream msg;
    msg << "I - K lost positive definiteness at order " << order << " (smallest pivot " << lo
        << "); the gap is too large for double precision";
    throw Error(ErrorKind::near_singular, msg.str());
  }
  double s = 0.0;
  for (int i = 0; i < n; ++i) s += std::log(d(i));
  return s;
}

NystromResult log_gap_probability(std::span<const Interval> intervals, int order, int threads) {
  validate(intervals, order);
  NystromResult r;
  r.order_per_interval = order;
  if (intervals.empty()) {
    r.spectral_radius_proxy = 1.0;
    r.min_pivot = 1.0;
    return r;
  }
  double lo = 0.0, hi = 0.0;
  r.log_det = log_det_at_order(intervals, order, threads, &lo, &hi);
  r.min_pivot = lo;
  r.spectral_radius_proxy = hi;
  const int half = std::max(8, order / 2 + (order / 2) % 2);
  const double coarse = log_det_at_order(intervals, half, threads);
  r.err_estimate = std::abs(r.log_det - coarse);
  return r;
}

std::vector<Interval> scaled_intervals(const IntervalConfig& cfg, double r) {
  std::vector<Interval> iv;
  for (int i = 0; i < cfg.g; ++i) iv.push_back({r * cfg.x[2 * i + 1], r * cfg.x[2 * i]});
  return iv;
}

NystromResult gap_probability_scaled(const IntervalConfig& cfg, double r, int order, int threads) {
  if (!(r > 0.0) || !std::isfinite(r)) throw Error(ErrorKind::domain, "r must be positive and finite");
  const auto iv = scaled_intervals(cfg, r);
  return log_gap_probability(iv, order, threads);
}

}  // namespace airygap::fredholm
