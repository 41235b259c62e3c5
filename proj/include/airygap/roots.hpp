#pragma once

#include <functional>

namespace airygap::roots {

/// Brent's method on a bracket with f(a), f(b) of opposite sign (or one of
/// them zero). Stops when the bracket is below xtol + 4 eps |x|.
/// Throws Error{domain} when the bracket does not straddle a root.
double brent(const std::function<double(double)>& f, double a, double b, double fa, double fb,
             double xtol, int max_iter = 200);

inline double brent(const std::function<double(double)>& f, double a, double b, double xtol,
                    int max_iter = 200) {
  return brent(f, a, b, f(a), f(b), xtol, max_iter);
}

}  // namespace airygap::roots
