#pragma once

#include <vector>

namespace airygap {

// Genus g and endpoints x[0] > x[1] > ... > x[2g-1]; x[i] is x_{i+1} in the
// usual 1-based labelling, so the gap set is the union of (x[2i+1], x[2i]).
struct IntervalConfig {
  int g = 0;
  std::vector<double> x;

  /// Validates ordering, size and finiteness. Throws Error{domain}, or
  /// Error{degenerate} when two endpoints are within 1e-8 * scale.
  static IntervalConfig make(std::vector<double> x);

  double scale() const;  // max |x_j|

  bool operator==(const IntervalConfig&) const = default;
};

}  // namespace airygap
