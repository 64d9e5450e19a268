#pragma once

// Brute-force validation backend: linear ODE systems u' = (A_1 + ... + A_n) u
// with random non-commuting matrices, where every subflow and the exact flow
// are matrix exponentials evaluated to machine precision in long double.

#include <Eigen/Dense>
#include <cstdint>
#include <utility>
#include <vector>

#include "splitkit/schemes.hpp"

namespace splitkit {

using MatrixXld = Eigen::Matrix<long double, Eigen::Dynamic, Eigen::Dynamic>;
using VectorXld = Eigen::Matrix<long double, Eigen::Dynamic, 1>;

// Deterministic 64-bit generator with published constants, so the sampling
// protocol can be replayed from any language.
struct SplitMix64 {
  std::uint64_t state;
  explicit SplitMix64(std::uint64_t seed) : state(seed) {}
  std::uint64_t next() {
    state += 0x9E3779B97F4A7C15ull;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }
  // Uniform in [-1, 1).
  double uniform_pm1() {
    return 2.0 * (static_cast<double>(next() >> 11) * 0x1.0p-53) - 1.0;
  }
};

struct MatrixProblem {
  int n_ops = 0;
  int dim = 0;
  std::uint64_t seed = 0;
  std::vector<MatrixXld> mats;  // Frobenius-normalized, pairwise non-commuting

  using Scalar = long double;
  using State = VectorXld;

  int ops() const { return n_ops; }
  State subflow(int ell, long double h, const State& u) const;
  long double norm_diff(const State& a, const State& b) const { return (a - b).norm(); }
};

// Entries uniform on [-1, 1), each matrix scaled to unit Frobenius norm;
// matrices with ||[A_i, A_j]|| <= 0.01 are resampled. dim must be >= 3.
MatrixProblem make_problem(int n_ops, int dim, std::uint64_t seed);

// Scaling-and-squaring Taylor matrix exponential, long double.
MatrixXld expm(const MatrixXld& a);

// expm(h * sum A_l) * u.
VectorXld exact_step(const MatrixProblem& p, long double h, const VectorXld& u);

// Normalized pseudo-random state vector, deterministic in the seed.
VectorXld seeded_unit_state(int dim, std::uint64_t seed);

// Geometric step list 2^-4 .. 2^-10.
std::vector<long double> default_h_list();

struct OrderFit {
  long double slope = 0;  // least-squares log-log slope; ~ order + 1
  std::vector<std::pair<long double, long double>> errors;  // (h, e(h)), h descending
};

// One-step local errors against exact_step. Requires >= 4 geometric h values
// with strictly decreasing errors; otherwise throws OracleError naming the
// offending h.
OrderFit empirical_order(const SchemeTable& s, const MatrixProblem& p,
                         const std::vector<long double>& h_list);

// Richardson-extrapolated defect ratio <e~(h), e(h)> / <e(h), e(h)>; matches
// the algebraic gamma of a genuine pair to O(h^2).
long double empirical_gamma(const MilnePair& pair, const MatrixProblem& p,
                            const std::vector<long double>& h_list);

}  // namespace splitkit
