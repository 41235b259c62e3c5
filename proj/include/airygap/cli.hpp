#pragma once

#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace airygap::cli {

struct RunConfig {
  std::optional<int> g;
  std::vector<double> x;
  std::optional<double> r_min;
  std::optional<double> r_max;
  int r_points = 8;
  int order = 64;
  double theta_tol = 1e-14;
  std::string output_path;
  std::string format = "json";
  std::optional<double> r;  // gap, asymptotics
  double C = 0.0;           // asymptotics
  int threads = 0;
};

/// Applies the fields present in a JSON config object. Throws Error{domain}
/// naming the offending field on a type mismatch or an unknown key.
void apply_json(RunConfig& rc, const std::string& text);

/// Runs one command line (without the program name). Exit codes: 0 ok,
/// 2 bad input, 3 numerical failure (including partial verification sweeps).
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace airygap::cli
