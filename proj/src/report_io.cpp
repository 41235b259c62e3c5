#include <cmath>
#include <cstdio>
#include <limits>

#include "airygap/errors.hpp"
#include "airygap/report_io.hpp"

namespace airygap::io {
namespace {

json num(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

json nums(const std::vector<double>& v) {
  json a = json::array();
  for (double x : v) a.push_back(num(x));
  return a;
}

double get_num(const json& j) {
  if (j.is_null()) return std::numeric_limits<double>::quiet_NaN();
  return j.get<double>();
}

std::vector<double> get_nums(const json& j) {
  std::vector<double> v;
  for (const auto& e : j) v.push_back(get_num(e));
  return v;
}

std::string g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

json tau_json(const Eigen::MatrixXcd& tau) {
  json rows = json::array();
  for (int i = 0; i < tau.rows(); ++i) {
    json row = json::array();
    for (int k = 0; k < tau.cols(); ++k) row.push_back(num(tau(i, k).imag()));
    rows.push_back(row);
  }
  return rows;
}

}  // namespace

json to_json(const verify::VerificationReport& rep) {
  const auto& o = rep.oscillation;
  return json{
      {"g", rep.cfg.g},
      {"x", nums(rep.cfg.x)},
      {"order", rep.order},
      {"x0", num(rep.x0)},
      {"c", num(rep.c)},
      {"omega", nums(rep.omega)},
      {"tau_imag", nums(rep.tau_imag)},
      {"r_grid", nums(rep.r_grid)},
      {"logF_num", nums(rep.logF_num)},
      {"err_estimate", nums(rep.err_estimate)},
      {"predicted_no_C", nums(rep.predicted_no_C)},
      {"C_fit", num(rep.C_fit)},
      {"residuals", nums(rep.residuals)},
      {"max_abs_residual", num(rep.max_abs_residual)},
      {"decay_exponent_fit", num(rep.decay_exponent_fit)},
      {"decay_exponent_naive", num(rep.decay_exponent_naive)},
      {"oscillation",
       {{"max_dev_with_theta", num(o.max_dev_with_theta)},
        {"max_dev_without_theta", num(o.max_dev_without_theta)},
        {"C_without_theta", num(o.C_without_theta)},
        {"log_theta_half_range", num(o.log_theta_half_range)},
        {"period_assessed", o.period_assessed},
        {"period_measured", num(o.period_measured)},
        {"period_expected", num(o.period_expected)},
        {"period_ratio", num(o.period_ratio)},
        {"note", o.note}}},
      {"partial", rep.partial},
      {"error", rep.error},
      {"notes", rep.notes},
  };
}

verify::VerificationReport report_from_json(const json& j) {
  try {
    verify::VerificationReport rep;
    rep.cfg.g = j.at("g").get<int>();
    rep.cfg.x = get_nums(j.at("x"));
    rep.order = j.at("order").get<int>();
    rep.x0 = get_num(j.at("x0"));
    rep.c = get_num(j.at("c"));
    rep.omega = get_nums(j.at("omega"));
    rep.tau_imag = get_nums(j.at("tau_imag"));
    rep.r_grid = get_nums(j.at("r_grid"));
    rep.logF_num = get_nums(j.at("logF_num"));
    rep.err_estimate = get_nums(j.at("err_estimate"));
    rep.predicted_no_C = get_nums(j.at("predicted_no_C"));
    rep.C_fit = get_num(j.at("C_fit"));
    rep.residuals = get_nums(j.at("residuals"));
    rep.max_abs_residual = get_num(j.at("max_abs_residual"));
    rep.decay_exponent_fit = get_num(j.at("decay_exponent_fit"));
    rep.decay_exponent_naive = get_num(j.at("decay_exponent_naive"));
    const json& o = j.at("oscillation");
    auto& os = rep.oscillation;
    os.max_dev_with_theta = get_num(o.at("max_dev_with_theta"));
    os.max_dev_without_theta = get_num(o.at("max_dev_without_theta"));
    os.C_without_theta = get_num(o.at("C_without_theta"));
    os.log_theta_half_range = get_num(o.at("log_theta_half_range"));
    os.period_assessed = o.at("period_assessed").get<bool>();
    os.period_measured = get_num(o.at("period_measured"));
    os.period_expected = get_num(o.at("period_expected"));
    os.period_ratio = get_num(o.at("period_ratio"));
    os.note = o.at("note").get<std::string>();
    rep.partial = j.at("partial").get<bool>();
    rep.error = j.at("error").get<std::string>();
    rep.notes = j.at("notes").get<std::vector<std::string>>();
    return rep;
  } catch (const json::exception& e) {
    throw Error(ErrorKind::domain, std::string("report: ") + e.what());
  }
}

std::string to_csv(const verify::VerificationReport& rep) {
  std::string s = "r,logF_num,err_estimate,predicted_no_C,residual\n";
  for (std::size_t i = 0; i < rep.r_grid.size(); ++i) {
    const double res =
        i < rep.residuals.size() ? rep.residuals[i] : std::numeric_limits<double>::quiet_NaN();
    s += g17(rep.r_grid[i]) + ',' + g17(rep.logF_num[i]) + ',' + g17(rep.err_estimate[i]) + ',' +
         g17(rep.predicted_no_C[i]) + ',' + g17(res) + '\n';
  }
  return s;
}

json to_json(const SurfaceData& sd) {
  json j{
      {"g", sd.genus()},
      {"x", nums(sd.cfg.x)},
      {"x0", num(sd.x0())},
      {"q", nums(sd.q)},
      {"A", json::array()},
      {"A_condition", num(sd.a_condition)},
      {"tau_imag", tau_json(sd.tau)},
      {"tau_asymmetry", num(sd.tau_asymmetry)},
      {"omega", nums(std::vector<double>(sd.omega.data(), sd.omega.data() + sd.omega.size()))},
      {"c", num(sd.c)},
      {"residual", num(sd.residual)},
      {"ambiguous", sd.ambiguous},
      {"candidate_roots", nums(sd.candidate_roots)},
  };
  for (int i = 0; i < sd.A.rows(); ++i) {
    json row = json::array();
    for (int k = 0; k < sd.A.cols(); ++k) row.push_back(num(sd.A(i, k)));
    j["A"].push_back(row);
  }
  j["c0"] = sd.c0 ? num(*sd.c0) : json(nullptr);
  return j;
}

json to_json(const fredholm::NystromResult& res) {
  return json{{"order_per_interval", res.order_per_interval},
              {"log_F", num(res.log_det)},
              {"F", num(std::exp(res.log_det))},
              {"err_estimate", num(res.err_estimate)},
              {"spectral_radius_proxy", num(res.spectral_radius_proxy)},
              {"min_pivot", num(res.min_pivot)}};
}

json to_json(const asympt::ExpansionTerms& t) {
  return json{{"c", num(t.c)},
              {"log_coeff", num(t.log_coeff)},
              {"nu", nums(std::vector<double>(t.nu.data(), t.nu.data() + t.nu.size()))},
              {"theta", num(t.theta_val)},
              {"C", t.C ? num(*t.C) : json(nullptr)},
              {"c_r3", num(t.cubic)},
              {"log_r_term", num(t.log_term)},
              {"log_theta", num(t.log_theta)},
              {"predicted_logF", num(t.total)}};
}

}  // namespace airygap::io
