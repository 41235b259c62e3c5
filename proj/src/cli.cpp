#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "CLI11.hpp"

#include "airygap/cli.hpp"
#include "airygap/errors.hpp"
#include "airygap/parallel.hpp"
#include "airygap/report_io.hpp"

namespace airygap::cli {
namespace {

using nlohmann::json;

std::vector<double> parse_list(const std::string& s) {
  std::vector<double> v;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    double d = 0.0;
    try {
      d = std::stod(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    while (used < item.size() && std::isspace(static_cast<unsigned char>(item[used]))) ++used;
    if (item.empty() || used != item.size()) {
      throw Error(ErrorKind::domain, "--x: cannot parse '" + item + "' as a number");
    }
    v.push_back(d);
  }
  return v;
}

std::string g_fmt(double v, const char* f = "%.10g") {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

IntervalConfig interval_config(const RunConfig& rc) {
  if (rc.g && *rc.g < 1) {
    throw Error(ErrorKind::domain,
                "g must be >= 1 (with g = 0 the gap set is empty and F = 1 identically)");
  }
  if (rc.x.empty()) throw Error(ErrorKind::domain, "usage: endpoints required, e.g. --x -1,-2");
  if (rc.g && static_cast<int>(rc.x.size()) != 2 * *rc.g) {
    throw Error(ErrorKind::domain, "g = " + std::to_string(*rc.g) + " needs " +
                                       std::to_string(2 * *rc.g) + " endpoints, got " +
                                       std::to_string(rc.x.size()));
  }
  return IntervalConfig::make(rc.x);
}

void validate_run(const RunConfig& rc) {
  if (rc.order < 8 || rc.order % 2 != 0) throw Error(ErrorKind::domain, "order must be even and >= 8");
  if (rc.r_points < 4) throw Error(ErrorKind::domain, "r_points must be >= 4");
  if (!(rc.theta_tol > 0.0)) throw Error(ErrorKind::domain, "theta_tol must be positive");
  if (rc.format != "json" && rc.format != "csv") {
    throw Error(ErrorKind::domain, "format must be json or csv");
  }
  if (rc.r_min && rc.r_max && !(*rc.r_min < *rc.r_max)) {
    throw Error(ErrorKind::domain, "r_min must be below r_max");
  }
  if (rc.r_min.has_value() != rc.r_max.has_value()) {
    throw Error(ErrorKind::domain, "r_min and r_max must be given together");
  }
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::domain, "cannot open config file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int cmd_solve(const RunConfig& rc, std::ostream& out) {
  const auto sd = asympt::solve_system(interval_config(rc));
  out << io::to_json(sd).dump(2) << '\n';
  return 0;
}

int cmd_gap(const RunConfig& rc, std::ostream& out) {
  if (!rc.r) throw Error(ErrorKind::domain, "gap: --r is required");
  const auto cfg = interval_config(rc);
  const auto res = fredholm::gap_probability_scaled(cfg, *rc.r, rc.order, worker_count(rc.threads));
  json j = io::to_json(res);
  j["r"] = *rc.r;
  out << j.dump(2) << '\n';
  return 0;
}

int cmd_asymptotics(const RunConfig& rc, std::ostream& out) {
  if (!rc.r) throw Error(ErrorKind::domain, "asymptotics: --r is required");
  const auto sd = asympt::solve_system(interval_config(rc));
  const auto ev = asympt::make_theta(sd, rc.theta_tol);
  json j = io::to_json(asympt::expansion_terms(sd, ev, *rc.r, rc.C));
  j["r"] = *rc.r;
  out << j.dump(2) << '\n';
  return 0;
}

int cmd_verify(const RunConfig& rc, std::ostream& out, std::ostream& err) {
  const auto cfg = interval_config(rc);
  const int threads = worker_count(rc.threads);
  std::vector<double> grid;
  if (rc.r_min) {
    for (int i = 0; i < rc.r_points; ++i) {
      grid.push_back(*rc.r_min + (*rc.r_max - *rc.r_min) * i / (rc.r_points - 1));
    }
  } else {
    const auto sd = asympt::solve_system(cfg);
    grid = verify::default_grid(cfg, verify::safe_r_max(sd, rc.order, threads), rc.r_points);
  }
  verify::VerifyOptions vo;
  vo.order = rc.order;
  vo.threads = threads;
  vo.theta_tol = rc.theta_tol;
  const auto rep = verify::run_verification(cfg, grid, vo);

  const std::string body = rc.format == "csv" ? io::to_csv(rep) : io::to_json(rep).dump(2) + "\n";
  std::ostream* summary = &out;
  if (rc.output_path.empty()) {
    out << body;
    summary = &err;
  } else {
    std::ofstream f(rc.output_path, std::ios::binary);
    f << body;
    if (!f) throw Error(ErrorKind::domain, "cannot write '" + rc.output_path + "'");
  }
  const auto& o = rep.oscillation;
  *summary << "C_fit=" << g_fmt(rep.C_fit) << " max_abs_residual=" << g_fmt(rep.max_abs_residual, "%.4g")
           << " decay_exponent=" << g_fmt(rep.decay_exponent_fit, "%.4g") << " period_ratio="
           << (o.period_assessed ? g_fmt(o.period_ratio, "%.5f") : std::string("n/a"))
           << (rep.partial ? " partial=true" : "") << '\n';
  if (rep.partial) {
    err << "error: " << rep.error << '\n';
    return 3;
  }
  return 0;
}

}  // namespace

void apply_json(RunConfig& rc, const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorKind::domain, std::string("config: ") + e.what());
  }
  if (!j.is_object()) throw Error(ErrorKind::domain, "config: top level must be an object");
  for (auto it = j.begin(); it != j.end(); ++it) {
    const std::string& k = it.key();
    const json& v = it.value();
    try {
      if (k == "g") rc.g = v.get<int>();
      else if (k == "x") rc.x = v.get<std::vector<double>>();
      else if (k == "r_min") rc.r_min = v.get<double>();
      else if (k == "r_max") rc.r_max = v.get<double>();
      else if (k == "r_points") rc.r_points = v.get<int>();
      else if (k == "order") rc.order = v.get<int>();
      else if (k == "theta_tol") rc.theta_tol = v.get<double>();
      else if (k == "output_path") rc.output_path = v.get<std::string>();
      else if (k == "format") rc.format = v.get<std::string>();
      else if (k == "r") rc.r = v.get<double>();
      else if (k == "C") rc.C = v.get<double>();
      else if (k == "threads") rc.threads = v.get<int>();
      else throw Error(ErrorKind::domain, "config: unknown field '" + k + "'");
    } catch (const json::exception& e) {
      throw Error(ErrorKind::domain, "config: field '" + k + "': " + e.what());
    }
  }
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Airy-process gap probabilities and their large-gap asymptotics", "airygap"};
  app.require_subcommand(1);
  RunConfig flags;
  std::string config_path, x_text;

  auto common = [&](CLI::App* sub, bool grid) {
    sub->add_option("--config", config_path, "JSON file with run settings");
    sub->add_option("--g", flags.g, "number of intervals");
    sub->add_option("--x", x_text, "endpoints x1,...,x2g (decreasing)");
    sub->add_option("--order", flags.order, "Gauss-Legendre nodes per interval");
    sub->add_option("--theta-tol", flags.theta_tol, "theta truncation tolerance");
    sub->add_option("--threads", flags.threads, "worker threads (AIRYGAP_THREADS caps it)");
    if (grid) {
      sub->add_option("--r-min", flags.r_min, "first grid point (default: safe window)");
      sub->add_option("--r-max", flags.r_max, "last grid point");
      sub->add_option("--r-points", flags.r_points, "number of grid points");
      sub->add_option("--output", flags.output_path, "report file (stdout if omitted)");
      sub->add_option("--format", flags.format, "json or csv");
    }
  };
  CLI::App* solve = app.add_subcommand("solve", "solve for x0, q, tau, Omega, c");
  common(solve, false);
  CLI::App* gap = app.add_subcommand("gap", "log det(I - K_Ai) on r * intervals");
  common(gap, false);
  gap->add_option("--r", flags.r, "scale factor");
  CLI::App* asy = app.add_subcommand("asymptotics", "terms of the large-gap expansion at r");
  common(asy, false);
  asy->add_option("--r", flags.r, "scale factor");
  asy->add_option("--C", flags.C, "additive constant");
  CLI::App* ver = app.add_subcommand("verify", "compare Fredholm numerics with the expansion");
  common(ver, true);

  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      app.exit(e, out, err);
      return 0;
    }
    err << "error: " << e.what() << '\n';
    return 2;
  }

  try {
    CLI::App* sub = app.get_subcommands().front();
    RunConfig rc;
    if (!config_path.empty()) apply_json(rc, read_file(config_path));
    // flags override the file
    if (sub->count("--g")) rc.g = flags.g;
    if (!x_text.empty() || sub->count("--x")) rc.x = parse_list(x_text);
    if (sub->count("--order")) rc.order = flags.order;
    if (sub->count("--theta-tol")) rc.theta_tol = flags.theta_tol;
    if (sub->count("--threads")) rc.threads = flags.threads;
    if (sub->get_option_no_throw("--r") && sub->count("--r")) rc.r = flags.r;
    if (sub->get_option_no_throw("--C") && sub->count("--C")) rc.C = flags.C;
    if (sub == ver) {
      if (sub->count("--r-min")) rc.r_min = flags.r_min;
      if (sub->count("--r-max")) rc.r_max = flags.r_max;
      if (sub->count("--r-points")) rc.r_points = flags.r_points;
      if (sub->count("--output")) rc.output_path = flags.output_path;
      if (sub->count("--format")) rc.format = flags.format;
    }
    validate_run(rc);
    if (sub == solve) return cmd_solve(rc, out);
    if (sub == gap) return cmd_gap(rc, out);
    if (sub == asy) return cmd_asymptotics(rc, out);
    return cmd_verify(rc, out, err);
  } catch (const Error& e) {
    err << "error (" << to_string(e.kind()) << "): " << e.what() << '\n';
    return is_input_error(e.kind()) ? 2 : 3;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 3;
  }
}

}  // namespace airygap::cli
