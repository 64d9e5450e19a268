#pragma once

// Scheme search: minimize the leading-error norm over coefficient tables
// subject to order-2 conditions, optional nonnegativity, optional fixed
// entries, and optional leading-defect proportionality to a target scheme.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "splitkit/schemes.hpp"

namespace splitkit {

// 1-based operator row and stage column.
struct FixedCoefficient {
  int op = 0;
  int stage = 0;
  Rational value;
};

// Constrain the degree-3 defect to be a multiple of the basic scheme's, with
// the ratio kept inside [gamma_min, gamma_max] (and away from 1).
struct MilneTarget {
  SchemeTable basic;
  double gamma_min = -100.0;
  double gamma_max = 100.0;
};

struct OptimizeConstraints {
  bool nonnegative = false;
  std::vector<FixedCoefficient> fix_coefficients;
  std::optional<MilneTarget> milne_target;
};

struct OptimizeBudget {
  int multistarts = 64;
  int max_iters = 400;  // simplex iterations per penalty level
};

struct OptimizeSpec {
  int n_ops = 2;
  int stages = 2;
  OptimizeConstraints constraints;
  OptimizeBudget budget;
  std::uint64_t seed = 1;
};

struct OptimizeResult {
  SchemeTable scheme;
  long double lem = 0;  // unscaled, as analysis lem()
  int multistarts_used = 0;
  int feasible_starts = 0;
};

// Multistart + penalty simplex + residual projection. Deterministic for a
// given seed; extending the multistart budget never worsens the best result.
// Throws OptimizerError when the budget is empty or no start reaches a
// feasible point (carrying the best residual attained).
OptimizeResult optimize_scheme(const OptimizeSpec& spec);

// Comment lines (seed, budget, residuals) for save_scheme.
std::vector<std::string> provenance_comments(const OptimizeSpec& spec,
                                             const OptimizeResult& result);

// Searches for a same-operator-count partner whose leading defect is
// proportional to basic's, minimizing the partner's leading-error norm.
// basic must be order 2 with a nonzero leading defect.
MilnePair derive_milne_partner(const SchemeTable& basic, int stages,
                               const OptimizeConstraints& constraints,
                               std::uint64_t seed = 1, const OptimizeBudget& budget = {});

}  // namespace splitkit
