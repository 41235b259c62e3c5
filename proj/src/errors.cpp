#include "airygap/errors.hpp"

namespace airygap {

const char* to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::domain: return "domain";
    case ErrorKind::inadmissible: return "inadmissible";
    case ErrorKind::degenerate: return "degenerate";
    case ErrorKind::no_solution: return "no_solution";
    case ErrorKind::ambiguous: return "ambiguous";
    case ErrorKind::near_singular: return "near_singular";
    case ErrorKind::quadrature: return "quadrature";
    case ErrorKind::theta: return "theta";
    case ErrorKind::inconsistent_homology: return "inconsistent_homology";
    case ErrorKind::solver_inconsistency: return "solver_inconsistency";
    case ErrorKind::insufficient_data: return "insufficient_data";
    case ErrorKind::aliasing: return "aliasing";
    case ErrorKind::unsupported: return "unsupported";
  }
  return "unknown";
}

bool is_input_error(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::domain:
    case ErrorKind::inadmissible:
    case ErrorKind::degenerate:
    case ErrorKind::no_solution:
    case ErrorKind::ambiguous:
    case ErrorKind::insufficient_data:
    case ErrorKind::aliasing:
    case ErrorKind::unsupported:
      return true;
    default:
      return false;
  }
}

Error annotate(const Error& e, const std::string& stage) {
  return Error(e.kind(), stage + ": " + e.what());
}

}  // namespace airygap
