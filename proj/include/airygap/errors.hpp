#pragma once

#include <stdexcept>
#include <string>

namespace airygap {

enum class ErrorKind {
  domain,                 // argument outside the mathematical domain
  inadmissible,           // configuration outside the admissible set
  degenerate,             // coincident endpoints, singular A-cycle matrix
  no_solution,            // outer root search found no sign change
  ambiguous,              // several roots and the caller asked to reject
  near_singular,          // Fredholm factorization lost positivity
  quadrature,             // quadrature did not reach its tolerance
  theta,                  // theta evaluation produced a non-positive value
  inconsistent_homology,  // period matrix not symmetric / Im tau not PD
  solver_inconsistency,   // nonpositive frequency at a claimed solution
  insufficient_data,
  aliasing,
  unsupported,
};

const char* to_string(ErrorKind kind) noexcept;

// True for errors caused by the caller's input rather than by numerics.
bool is_input_error(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

// Prefixes the message with the pipeline stage that raised it.
Error annotate(const Error& e, const std::string& stage);

}  // namespace airygap
