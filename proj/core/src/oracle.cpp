#include "splitkit/oracle.hpp"

#include <cmath>
#include <string>

#include "splitkit/errors.hpp"
#include "splitkit/integrator.hpp"

namespace splitkit {

MatrixXld expm(const MatrixXld& a) {
  const long double norm = a.cwiseAbs().rowwise().sum().maxCoeff();  // induced inf-norm
  int squarings = 0;
  if (norm > 0.25L) squarings = static_cast<int>(std::ceil(std::log2(norm / 0.25L)));
  MatrixXld b = a / std::pow(2.0L, squarings);
  const auto n = a.rows();
  MatrixXld term = MatrixXld::Identity(n, n);
  MatrixXld sum = term;
  for (int k = 1; k <= 40; ++k) {
    term = (term * b) / static_cast<long double>(k);
    sum += term;
    if (term.cwiseAbs().maxCoeff() < 1e-24L * sum.cwiseAbs().maxCoeff()) break;
  }
  for (int i = 0; i < squarings; ++i) sum = sum * sum;
  return sum;
}

MatrixProblem::State MatrixProblem::subflow(int ell, long double h, const State& u) const {
  if (ell < 1 || ell > n_ops) throw ValidationError("subflow operator index out of range");
  if (h == 0.0L) return u;
  return expm(h * mats[static_cast<std::size_t>(ell - 1)]) * u;
}

MatrixProblem make_problem(int n_ops, int dim, std::uint64_t seed) {
  if (n_ops < 1) throw ValidationError("need at least one operator");
  if (dim < 3)
    throw ValidationError("dim must be >= 3 (low dimensions risk commuting matrices)");
  SplitMix64 rng(seed);
  MatrixProblem p;
  p.n_ops = n_ops;
  p.dim = dim;
  p.seed = seed;
  auto sample = [&rng, dim]() {
    MatrixXld m(dim, dim);
    for (int r = 0; r < dim; ++r)
      for (int c = 0; c < dim; ++c) m(r, c) = static_cast<long double>(rng.uniform_pm1());
    m /= m.norm();  // Frobenius
    return m;
  };
  for (int l = 0; l < n_ops; ++l) {
    for (int attempt = 0;; ++attempt) {
      if (attempt > 100) throw ValidationError("could not sample non-commuting matrices");
      MatrixXld cand = sample();
      bool ok = true;
      for (int j = 0; j < l; ++j) {
        MatrixXld comm = cand * p.mats[static_cast<std::size_t>(j)] -
                         p.mats[static_cast<std::size_t>(j)] * cand;
        if (comm.norm() <= 0.01L) {
          ok = false;
          break;
        }
      }
      if (ok) {
        p.mats.push_back(std::move(cand));
        break;
      }
    }
  }
  return p;
}

VectorXld exact_step(const MatrixProblem& p, long double h, const VectorXld& u) {
  if (h < 0.0L) throw ValidationError("exact_step needs h >= 0");
  MatrixXld sum = MatrixXld::Zero(p.dim, p.dim);
  for (const auto& m : p.mats) sum += m;
  return expm(h * sum) * u;
}

VectorXld seeded_unit_state(int dim, std::uint64_t seed) {
  SplitMix64 rng(seed ^ 0xD1B54A32D192ED03ull);
  VectorXld u(dim);
  for (int i = 0; i < dim; ++i) u(i) = static_cast<long double>(rng.uniform_pm1());
  return u / u.norm();
}

std::vector<long double> default_h_list() {
  std::vector<long double> h;
  for (int k = 4; k <= 10; ++k) h.push_back(std::pow(2.0L, -k));
  return h;
}

namespace {

void check_h_list(const std::vector<long double>& h_list) {
  if (h_list.size() < 4) throw ValidationError("need at least 4 step sizes");
  for (std::size_t i = 1; i < h_list.size(); ++i)
    if (!(h_list[i] > 0.0L) || !(h_list[i] < h_list[i - 1]))
      throw ValidationError("step list must be positive and strictly decreasing");
  long double ratio = h_list[0] / h_list[1];
  for (std::size_t i = 1; i + 1 < h_list.size(); ++i)
    if (std::fabs(h_list[i] / h_list[i + 1] - ratio) > 1e-9L * ratio)
      throw ValidationError("step list must be geometric");
}

}  // namespace

OrderFit empirical_order(const SchemeTable& s, const MatrixProblem& p,
                         const std::vector<long double>& h_list) {
  validate(s);
  if (s.n_ops != p.n_ops)
    throw ValidationError("scheme has " + std::to_string(s.n_ops) + " operators, problem has " +
                          std::to_string(p.n_ops));
  check_h_list(h_list);
  VectorXld u0 = seeded_unit_state(p.dim, p.seed);
  OrderFit fit;
  for (long double h : h_list) {
    VectorXld approx = split_step(p, s, h, u0);
    long double e = (approx - exact_step(p, h, u0)).norm();
    fit.errors.emplace_back(h, e);
  }
  for (std::size_t i = 1; i < fit.errors.size(); ++i) {
    if (!(fit.errors[i].second < fit.errors[i - 1].second))
      throw OracleError(
          "local errors not monotone: e(" + std::to_string(static_cast<double>(fit.errors[i].first)) +
          ") = " + std::to_string(static_cast<double>(fit.errors[i].second)) + " vs e(" +
          std::to_string(static_cast<double>(fit.errors[i - 1].first)) + ") = " +
          std::to_string(static_cast<double>(fit.errors[i - 1].second)) +
          "; h too large or at the roundoff floor");
  }
  // Least-squares slope of log e against log h.
  long double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const long double m = static_cast<long double>(fit.errors.size());
  for (const auto& [h, e] : fit.errors) {
    long double x = std::log(h), y = std::log(e);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  fit.slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
  return fit;
}

long double empirical_gamma(const MilnePair& pair, const MatrixProblem& p,
                            const std::vector<long double>& h_list) {
  validate(pair.basic);
  validate(pair.partner);
  check_h_list(h_list);
  VectorXld u0 = seeded_unit_state(p.dim, p.seed);
  auto ratio = [&](long double h) {
    VectorXld exact = exact_step(p, h, u0);
    VectorXld e = split_step(p, pair.basic, h, u0) - exact;
    VectorXld et = split_step(p, pair.partner, h, u0) - exact;
    long double ee = e.dot(e);
    if (ee == 0.0L) throw OracleError("basic local error vanished; cannot form ratio");
    return et.dot(e) / ee;
  };
  long double h_min = h_list.back();
  long double h_prev = h_list[h_list.size() - 2];
  long double r1 = ratio(h_min);
  long double r2 = ratio(h_prev);
  // r(h) = gamma + c*h + O(h^2) with h_prev = 2 h_min.
  return 2.0L * r1 - r2;
}

}  // namespace splitkit
