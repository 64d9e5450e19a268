#include "splitkit/analysis.hpp"

#include <cmath>

#include "splitkit/errors.hpp"

namespace splitkit {

namespace {

FreePoly<Rational> exact_defect(const SchemeTable& s, int D) {
  return log_defect_coeffs<Rational>(s.coeffs, s.n_ops, D);
}

Rational sum_of_squares(const std::vector<Rational>& v) {
  Rational s(0);
  for (const Rational& x : v) s += x * x;
  return s;
}

long double norm_ld(const Rational& sum_sq) { return std::sqrt(to_long_double(sum_sq)); }

std::vector<Rational> degree_coeffs(const SchemeTable& s, int degree, const Rational& lambda) {
  std::vector<std::vector<Rational>> a = s.coeffs;
  if (!(lambda == 1))
    for (auto& row : a)
      for (auto& c : row) c *= lambda;
  FreePoly<Rational> d = log_defect_coeffs<Rational>(a, s.n_ops, degree);
  return lyndon_word_coeffs(d, degree);
}

}  // namespace

FreePoly<Rational> scheme_series(const SchemeTable& s, int D) {
  validate(s);
  return scheme_series_coeffs<Rational>(s.coeffs, s.n_ops, D);
}

OrderReport order_residuals(const SchemeTable& s, int D) {
  validate(s);
  FreePoly<Rational> defect = exact_defect(s, D);
  OrderReport report;
  report.verified_order = D;
  for (int d = 1; d <= D; ++d) {
    long double res = norm_ld(sum_of_squares(lyndon_word_coeffs(defect, d)));
    report.residual_norm_by_degree[d] = res;
    if (res > kOrderResidualTol && report.verified_order >= d) report.verified_order = d - 1;
  }
  return report;
}

LeadingDefect leading_defect(const SchemeTable& s) {
  validate(s);
  const int degree = s.order + 1;
  if (degree > kMaxDegree)
    throw ValidationError("leading defect of an order-" + std::to_string(s.order) +
                          " scheme needs degree " + std::to_string(degree) +
                          " which exceeds the supported truncation");
  OrderReport report = order_residuals(s, degree);
  if (report.verified_order < s.order) {
    int failing = 1;
    while (failing <= s.order &&
           report.residual_norm_by_degree.at(failing) <= kOrderResidualTol)
      ++failing;
    throw OrderError("scheme '" + s.name + "' declares order " + std::to_string(s.order) +
                         " but its degree-" + std::to_string(failing) + " residual is " +
                         std::to_string(static_cast<double>(
                             report.residual_norm_by_degree.at(failing))),
                     failing);
  }
  FreePoly<Rational> defect = exact_defect(s, degree);
  LeadingDefect out;
  out.degree = degree;
  out.basis = lyndon_basis(s.n_ops, degree);
  std::vector<Rational> exact = lyndon_word_coeffs(defect, degree);
  out.coeffs.reserve(exact.size());
  for (const Rational& c : exact) out.coeffs.push_back(to_long_double(c));
  FreePoly<Rational> homogeneous(s.n_ops, degree);
  detail::WordIndex ix(s.n_ops, degree);
  for (std::size_t i = ix.offset[degree]; i < ix.offset[degree + 1]; ++i)
    homogeneous.coeffs[i] = defect.coeffs[i];
  out.lie_residual = lie_project(homogeneous, out.basis).residual;
  return out;
}

long double lem(const SchemeTable& s) {
  validate(s);
  leading_defect(s);  // order verification and error reporting
  return norm_ld(sum_of_squares(degree_coeffs(s, s.order + 1, Rational(1))));
}

long double lem_scaled(const SchemeTable& s) {
  long double factorial = 1;
  for (int i = 2; i <= s.order + 1; ++i) factorial *= i;
  return factorial * lem(s);
}

long double lem_at_scaling(const SchemeTable& s, const Rational& lambda) {
  validate(s);
  if (lambda == 0) throw ValidationError("scaling factor must be nonzero");
  const int degree = s.order + 1;
  std::vector<Rational> coeffs = degree_coeffs(s, degree, lambda);
  Rational scale = 1;
  for (int i = 0; i < degree; ++i) scale *= lambda;
  for (Rational& c : coeffs) c /= scale;
  return norm_ld(sum_of_squares(coeffs));
}

GammaResult gamma_of_pair(const SchemeTable& basic, const SchemeTable& partner) {
  if (basic.n_ops != partner.n_ops)
    throw ValidationError("pair members disagree in operator count");
  if (basic.order != partner.order)
    throw ValidationError("pair members disagree in order");
  leading_defect(basic);    // order checks with informative errors
  leading_defect(partner);
  const int degree = basic.order + 1;
  std::vector<Rational> c1 = degree_coeffs(basic, degree, Rational(1));
  std::vector<Rational> c2 = degree_coeffs(partner, degree, Rational(1));
  Rational c1c1 = sum_of_squares(c1);
  if (c1c1 == 0)
    throw ValidationError("basic scheme '" + basic.name +
                          "' has zero leading defect; not a valid pair configuration");
  Rational c2c1(0);
  for (std::size_t i = 0; i < c1.size(); ++i) c2c1 += c2[i] * c1[i];
  Rational gamma = c2c1 / c1c1;
  std::vector<Rational> dev = c2;
  for (std::size_t i = 0; i < dev.size(); ++i) dev[i] -= gamma * c1[i];
  Rational c2c2 = sum_of_squares(c2);
  GammaResult out;
  out.gamma = to_long_double(gamma);
  out.parallelism_defect =
      c2c2 == 0 ? 0.0L : std::sqrt(to_long_double(sum_of_squares(dev) / c2c2));
  Rational one_dev = gamma - 1;
  if (one_dev < 0) one_dev = -one_dev;
  if (one_dev < Rational(1, 20))
    throw ValidationError("gamma = " + std::to_string(static_cast<double>(out.gamma)) +
                          " is too close to 1; the estimator weight 1/(1-gamma) blows up");
  return out;
}

long double milne_weight(const MilnePair& pair) {
  if (pair.gamma == 1) throw ValidationError("gamma = 1 has no Milne weight");
  return to_long_double(Rational(1) / (Rational(1) - pair.gamma));
}

long double combined_defect_norm(const SchemeTable& basic, const SchemeTable& partner,
                                 long double gamma) {
  if (gamma == 1.0L) throw ValidationError("gamma = 1 has no combined scheme");
  const int degree = basic.order + 1;
  std::vector<Rational> c1 = degree_coeffs(basic, degree, Rational(1));
  std::vector<Rational> c2 = degree_coeffs(partner, degree, Rational(1));
  Rational g = rational_from_long_double(gamma);
  std::vector<Rational> combined(c1.size());
  for (std::size_t i = 0; i < c1.size(); ++i)
    combined[i] = (c2[i] - g * c1[i]) / (Rational(1) - g);
  return norm_ld(sum_of_squares(combined));
}

}  // namespace splitkit
