#pragma once

#include <stdexcept>
#include <string>

namespace splitkit {

// Base class for all library errors.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Malformed input files (scheme files, pair files).
struct FormatError : Error {
  using Error::Error;
};

// Violated invariants or preconditions (consistency sums, bad arguments).
struct ValidationError : Error {
  using Error::Error;
};

// A scheme fails its declared order; carries the first failing degree.
struct OrderError : Error {
  int failing_degree;
  OrderError(const std::string& msg, int degree)
      : Error(msg), failing_degree(degree) {}
};

// Oracle diagnostics (non-monotone error sequences and the like).
struct OracleError : Error {
  using Error::Error;
};

// Optimizer failures; carries the best infeasible residual seen.
struct OptimizerError : Error {
  double best_residual;
  explicit OptimizerError(const std::string& msg, double residual = 0.0)
      : Error(msg), best_residual(residual) {}
};

// Convergence-study aborts (reference self-check failures, CFL blowups).
struct StudyError : Error {
  using Error::Error;
};

}  // namespace splitkit
