#pragma once

#include <map>
#include <vector>

#include "splitkit/free_algebra.hpp"
#include "splitkit/schemes.hpp"

namespace splitkit {

// Truncated series of the composed step: product of exp(a[l][nu] * A_l) in
// application order (stage-major, operators ascending), so the first applied
// factor is the leftmost part of every word. Shared by analysis (exact
// rationals) and the optimizer (long double).
template <class T>
FreePoly<T> scheme_series_coeffs(const std::vector<std::vector<T>>& a, int n, int D) {
  FreePoly<T> s = FreePoly<T>::unit(n, D);
  const int stages = a.empty() ? 0 : static_cast<int>(a.front().size());
  for (int nu = 0; nu < stages; ++nu)
    for (int l = 0; l < n; ++l) {
      if (a[static_cast<std::size_t>(l)][static_cast<std::size_t>(nu)] == T(0)) continue;
      s = mul(s, exp_single(l + 1, a[static_cast<std::size_t>(l)][static_cast<std::size_t>(nu)], n, D));
    }
  return s;
}

// log(series) - sum_l A_l; a Lie element whose degree-d parts are the
// order-condition residuals (zero through degree p for an order-p scheme).
template <class T>
FreePoly<T> log_defect_coeffs(const std::vector<std::vector<T>>& a, int n, int D) {
  FreePoly<T> d = log_truncated(scheme_series_coeffs(a, n, D));
  for (int l = 1; l <= n; ++l) d.at(Word{l}) -= T(1);
  return d;
}

// Coefficients of the degree-d component at the Lyndon words of degree d, in
// lexicographic word order. A Lie element is zero iff these all vanish.
template <class T>
std::vector<T> lyndon_word_coeffs(const FreePoly<T>& p, int d) {
  std::vector<T> out;
  for (const Word& w : lyndon_words(p.n, d)) out.push_back(p.at(w));
  return out;
}

FreePoly<Rational> scheme_series(const SchemeTable& s, int D);

struct OrderReport {
  std::map<int, long double> residual_norm_by_degree;  // degrees 1..D
  int verified_order = 0;  // largest q with all residuals at degrees <= q below tol
};

inline constexpr long double kOrderResidualTol = 1e-5L;

// Per-degree norms of the log defect on the Lyndon words (degree 1 = single
// letters, i.e. the consistency residuals). Exact rational arithmetic.
OrderReport order_residuals(const SchemeTable& s, int D = 3);

struct LeadingDefect {
  int degree = 0;                         // = order + 1
  std::vector<LyndonBasisElement> basis;  // Lyndon basis at that degree
  std::vector<long double> coeffs;        // defect coefficients at the Lyndon words
  long double lie_residual = 0;           // bracket-basis least-squares residual
};

// Degree-(order+1) defect data; throws OrderError (carrying the failing
// degree) if the scheme does not pass its declared order.
LeadingDefect leading_defect(const SchemeTable& s);

// Euclidean norm of leading_defect(s).coeffs: plain h^(p+1) coefficients with
// no factorial weighting (strang-2 -> 0.0931695).
long double lem(const SchemeTable& s);

// (order+1)! * lem(s); the normalization used by several published
// coefficient tables (strang-2 -> 0.5590170).
long double lem_scaled(const SchemeTable& s);

// lem recomputed with every coefficient scaled by lambda and the defect
// renormalized by lambda^(order+1); equals lem(s) (grading invariance).
long double lem_at_scaling(const SchemeTable& s, const Rational& lambda);

struct GammaResult {
  long double gamma = 0;
  long double parallelism_defect = 0;  // ||c2 - gamma*c1|| / ||c2||
};

// Leading-defect proportionality of a candidate pair. Errors when the basic
// defect vanishes (nothing to be proportional to) or |gamma - 1| < 0.05.
GammaResult gamma_of_pair(const SchemeTable& basic, const SchemeTable& partner);

// 1/(1 - gamma).
long double milne_weight(const MilnePair& pair);

// Norm of the degree-(p+1) defect of the combined scheme
// (-gamma*S + S~)/(1-gamma): ||(c2 - gamma*c1)/(1-gamma)||.
long double combined_defect_norm(const SchemeTable& basic, const SchemeTable& partner,
                                 long double gamma);

}  // namespace splitkit
