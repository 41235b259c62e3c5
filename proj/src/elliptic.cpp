#include <cmath>
#include <limits>
#include <numbers>

#include "airygap/errors.hpp"
#include "airygap/specialfn.hpp"

namespace airygap::specialfn {
namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

struct Agm {
  double mean;
  double weighted_sum;  // sum_{n>=0} 2^{n-1} c_n^2
};

Agm agm(double k) {
  double a = 1.0;
  double b = std::sqrt((1.0 - k) * (1.0 + k));
  double c = k;
  double pow2 = 0.5;
  double sum = pow2 * c * c;
  for (int it = 0; it < 64; ++it) {
    if (std::abs(a - b) <= kEps * a) break;
    const double an = 0.5 * (a + b);
    c = 0.5 * (a - b);
    b = std::sqrt(a * b);
    a = an;
    pow2 *= 2.0;
    sum += pow2 * c * c;
  }
  return {a, sum};
}

}  // namespace

double ellint_K(double k) {
  if (!(k >= 0.0 && k < 1.0)) {
    throw Error(ErrorKind::domain, "ellint_K: modulus must lie in [0, 1)");
  }
  return std::numbers::pi / (2.0 * agm(k).mean);
}

double ellint_E(double k) {
  if (!(k >= 0.0 && k <= 1.0)) {
    throw Error(ErrorKind::domain, "ellint_E: modulus must lie in [0, 1]");
  }
  if (k == 1.0) return 1.0;
  const Agm r = agm(k);
  return std::numbers::pi / (2.0 * r.mean) * (1.0 - r.weighted_sum);
}

}  // namespace airygap::specialfn
