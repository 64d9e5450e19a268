#pragma once

// Generic splitting stepper over abstract subflows, Milne-pair local error
// estimation, and the adaptive step-size controller
//   h_new = h_old * min{alpha_max, max{alpha_min, alpha*(tol/P)^(1/(p+1))}}.

#include <algorithm>
#include <cmath>
#include <concepts>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <utility>
#include <vector>

#include "splitkit/analysis.hpp"
#include "splitkit/errors.hpp"
#include "splitkit/schemes.hpp"

namespace splitkit {

// A problem exposes the subflow maps E_l(h, u); subflow(l, 0, u) must be u.
template <class P>
concept SplittableProblem = requires(const P p, int l, typename P::Scalar h,
                                     const typename P::State& u) {
  { p.ops() } -> std::convertible_to<int>;
  { p.subflow(l, h, u) } -> std::convertible_to<typename P::State>;
  { p.norm_diff(u, u) } -> std::convertible_to<long double>;
};

struct StepController {
  double tol = 1e-5;
  double alpha = 0.9;
  double alpha_min = 0.25;
  double alpha_max = 4.0;
  double h_min = 1e-6;
  double h_max = 0.1;
  double reject_threshold = 1.2;  // reject when P > reject_threshold * tol
};

inline void validate(const StepController& c) {
  if (!(c.tol > 0)) throw ValidationError("controller tol must be positive");
  if (!(0 < c.alpha_min && c.alpha_min < 1 && 1 < c.alpha_max))
    throw ValidationError("controller needs 0 < alpha_min < 1 < alpha_max");
  if (!(0 < c.h_min && c.h_min < c.h_max))
    throw ValidationError("controller needs 0 < h_min < h_max");
  if (!(c.alpha > 0)) throw ValidationError("controller alpha must be positive");
  if (!(c.reject_threshold >= 1)) throw ValidationError("reject threshold must be >= 1");
}

struct StepRecord {
  double t = 0;        // time at which the step was attempted
  double h = 0;        // attempted step size
  double P = 0;        // local error estimate of the attempt
  bool accepted = false;
};

struct StepTrace {
  std::vector<StepRecord> records;  // every attempt, accepted or not
  int accepted = 0;
  int rejected = 0;
  bool floor_hit = false;  // forced accept at h_min with P above threshold

  void write_csv(const std::filesystem::path& path) const {
    std::ofstream out(path);
    if (!out) throw FormatError("cannot write '" + path.string() + "'");
    out << "t,h,P,accepted\n";
    char buf[128];
    for (const StepRecord& r : records) {
      std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%d\n", r.t, r.h, r.P,
                    r.accepted ? 1 : 0);
      out << buf;
    }
  }
};

// Exactly the controller formula, then clamped into [h_min, h_max];
// P = 0 takes the alpha_max branch.
inline double propose_step(const StepController& c, double h_old, double P, int order) {
  double factor;
  if (P <= 0) {
    factor = c.alpha_max;
  } else {
    factor = c.alpha * std::pow(c.tol / P, 1.0 / (order + 1));
    factor = std::min(c.alpha_max, std::max(c.alpha_min, factor));
  }
  return std::clamp(h_old * factor, c.h_min, c.h_max);
}

namespace detail {

template <class Scalar>
std::vector<std::pair<int, Scalar>> scalar_factors(const SchemeTable& s) {
  std::vector<std::pair<int, Scalar>> out;
  for (const auto& [op, a] : factor_sequence(s)) out.emplace_back(op, rational_to<Scalar>(a));
  return out;
}

}  // namespace detail

// Applies the subflows stage nu = 1..k, operators l = 1..n within each stage,
// with steps a[l][nu]*h; zero coefficients are skipped.
template <SplittableProblem P>
typename P::State split_step(const P& p, const SchemeTable& s, typename P::Scalar h,
                             typename P::State u) {
  if (s.n_ops != p.ops())
    throw ValidationError("scheme/problem operator count mismatch in split_step");
  for (int nu = 0; nu < s.stages; ++nu)
    for (int l = 0; l < s.n_ops; ++l) {
      const Rational& a = s.coeffs[static_cast<std::size_t>(l)][static_cast<std::size_t>(nu)];
      if (a == 0) continue;
      u = p.subflow(l + 1, rational_to<typename P::Scalar>(a) * h, u);
    }
  return u;
}

template <class State>
struct MilneStep {
  State u1;       // basic-scheme step
  double est;     // ||S - S~|| * |1/(1-gamma)| in the problem norm
};

// Leading factors shared between the two schemes (identical operator and
// coefficient) are computed once.
template <SplittableProblem P>
MilneStep<typename P::State> milne_step(const P& p, const MilnePair& pair,
                                        typename P::Scalar h, typename P::State u) {
  if (pair.basic.n_ops != p.ops())
    throw ValidationError("pair/problem operator count mismatch in milne_step");
  if (pair.gamma == 1) throw ValidationError("pair has gamma = 1");
  using Scalar = typename P::Scalar;
  auto fb = factor_sequence(pair.basic);
  auto fp = factor_sequence(pair.partner);
  std::size_t shared = 0;
  while (shared < fb.size() && shared < fp.size() && fb[shared] == fp[shared]) ++shared;
  for (std::size_t i = 0; i < shared; ++i)
    u = p.subflow(fb[i].first, rational_to<Scalar>(fb[i].second) * h, u);
  typename P::State ub = u;
  for (std::size_t i = shared; i < fb.size(); ++i)
    ub = p.subflow(fb[i].first, rational_to<Scalar>(fb[i].second) * h, ub);
  typename P::State up = std::move(u);
  for (std::size_t i = shared; i < fp.size(); ++i)
    up = p.subflow(fp[i].first, rational_to<Scalar>(fp[i].second) * h, up);
  long double weight = std::fabs(to_long_double(Rational(1) / (Rational(1) - pair.gamma)));
  double est = static_cast<double>(static_cast<long double>(p.norm_diff(ub, up)) * weight);
  return {std::move(ub), est};
}

template <class State>
struct AdaptiveResult {
  State u_final;
  StepTrace trace;
};

// Adaptive loop: accept when P <= reject_threshold*tol or the step is at the
// floor (forced accept sets floor_hit when P is above threshold); the next
// step always comes from propose_step; the last step is shortened to land on
// t_end exactly.
template <SplittableProblem P>
AdaptiveResult<typename P::State> integrate_adaptive(const P& p, const MilnePair& pair,
                                                     const StepController& c, double t0,
                                                     double t_end, typename P::State u0,
                                                     double h0 = 0) {
  validate(c);
  if (t_end < t0) throw ValidationError("t_end must be >= t0");
  AdaptiveResult<typename P::State> out{std::move(u0), {}};
  if (t_end == t0) return out;
  const double span = t_end - t0;
  double t = t0;
  double h = std::clamp(h0 > 0 ? h0 : c.h_max / 100.0, c.h_min, c.h_max);
  while (t_end - t > 1e-13 * span) {
    double h_att = std::min(h, t_end - t);
    auto step = milne_step(p, pair, static_cast<typename P::Scalar>(h_att), out.u_final);
    bool at_floor = h_att <= c.h_min * (1 + 1e-12);
    bool accept = step.est <= c.reject_threshold * c.tol || at_floor;
    out.trace.records.push_back({t, h_att, step.est, accept});
    if (accept) {
      if (at_floor && step.est > c.reject_threshold * c.tol) out.trace.floor_hit = true;
      t += h_att;
      out.u_final = std::move(step.u1);
      ++out.trace.accepted;
    } else {
      ++out.trace.rejected;
    }
    h = propose_step(c, h_att, step.est, pair.basic.order);
  }
  return out;
}

}  // namespace splitkit
