#include "splitkit/optimizer.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "splitkit/analysis.hpp"
#include "splitkit/errors.hpp"
#include "splitkit/free_algebra.hpp"
#include "splitkit/oracle.hpp"

namespace splitkit {

namespace {

using VecLD = Eigen::Matrix<long double, Eigen::Dynamic, 1>;
using MatLD = Eigen::Matrix<long double, Eigen::Dynamic, Eigen::Dynamic>;

std::string fmt_ld(long double v) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.3Le", v);
  return buf;
}

// Search space: the free entries of the flattened coefficient table
// (operator-major, slot = l*stages + nu). Residuals are the degree-1 and
// degree-2 Lyndon-word coefficients of the log defect, plus, in Milne mode,
// the components of the degree-3 coefficients orthogonal to the target's.
struct Search {
  int n = 0;
  int k = 0;
  bool nonneg = false;
  std::vector<long double> base;  // fixed values in place, 0 in free slots
  std::vector<int> free_slots;
  bool milne = false;
  MatLD complement;  // orthonormal rows spanning the complement of the target defect
  double gamma_min = 0;
  double gamma_max = 0;
  int nres = 0;
};

std::vector<std::vector<long double>> to_table(const Search& s, const VecLD& x) {
  std::vector<std::vector<long double>> a(
      static_cast<std::size_t>(s.n),
      std::vector<long double>(static_cast<std::size_t>(s.k), 0.0L));
  for (int l = 0; l < s.n; ++l)
    for (int nu = 0; nu < s.k; ++nu)
      a[static_cast<std::size_t>(l)][static_cast<std::size_t>(nu)] =
          s.base[static_cast<std::size_t>(l * s.k + nu)];
  for (std::size_t i = 0; i < s.free_slots.size(); ++i) {
    int slot = s.free_slots[i];
    a[static_cast<std::size_t>(slot / s.k)][static_cast<std::size_t>(slot % s.k)] =
        x[static_cast<Eigen::Index>(i)];
  }
  return a;
}

struct Eval {
  VecLD r;
  long double lem3sq = 0;
};

Eval evaluate(const Search& s, const VecLD& x) {
  auto a = to_table(s, x);
  FreePoly<long double> defect = log_defect_coeffs(a, s.n, 3);
  Eval e;
  e.r.resize(s.nres);
  Eigen::Index pos = 0;
  for (int l = 1; l <= s.n; ++l) e.r[pos++] = defect.at(Word{l});
  for (long double c : lyndon_word_coeffs(defect, 2)) e.r[pos++] = c;
  std::vector<long double> c3 = lyndon_word_coeffs(defect, 3);
  VecLD c3v(static_cast<Eigen::Index>(c3.size()));
  for (Eigen::Index i = 0; i < c3v.size(); ++i) c3v[i] = c3[static_cast<std::size_t>(i)];
  if (s.milne) {
    VecLD proj = s.complement * c3v;
    for (Eigen::Index i = 0; i < proj.size(); ++i) e.r[pos++] = proj[i];
  }
  e.lem3sq = c3v.squaredNorm();
  return e;
}

long double penalty_value(const Search& s, const VecLD& x, long double mu) {
  Eval e = evaluate(s, x);
  return e.lem3sq + mu * e.r.squaredNorm();
}

VecLD clamp_box(const Search& s, VecLD x) {
  if (s.nonneg)
    for (Eigen::Index i = 0; i < x.size(); ++i) x[i] = std::max(x[i], 0.0L);
  return x;
}

// Deterministic Nelder-Mead with the classic coefficients; nonnegativity is
// kept by clamping every proposal into the box. Ties resolve by vertex index.
VecLD nelder_mead(const Search& s, VecLD x0, long double mu, int max_iters) {
  const int m = static_cast<int>(x0.size());
  std::vector<VecLD> xs;
  std::vector<long double> fs;
  xs.reserve(static_cast<std::size_t>(m) + 1);
  xs.push_back(clamp_box(s, std::move(x0)));
  fs.push_back(penalty_value(s, xs[0], mu));
  for (int i = 0; i < m; ++i) {
    VecLD v = xs[0];
    v[i] += 0.1L;
    xs.push_back(clamp_box(s, std::move(v)));
    fs.push_back(penalty_value(s, xs.back(), mu));
  }
  std::vector<int> ord(static_cast<std::size_t>(m) + 1);
  for (int i = 0; i <= m; ++i) ord[static_cast<std::size_t>(i)] = i;
  auto vx = [&](int o) -> VecLD& { return xs[static_cast<std::size_t>(o)]; };
  auto vf = [&](int o) -> long double& { return fs[static_cast<std::size_t>(o)]; };
  auto resort = [&] {
    std::stable_sort(ord.begin(), ord.end(),
                     [&](int p, int q) { return vf(p) < vf(q); });
  };
  for (int iter = 0; iter < max_iters; ++iter) {
    resort();
    const int best = ord[0], worst = ord[static_cast<std::size_t>(m)],
              second = ord[static_cast<std::size_t>(m - 1)];
    long double spread = vf(worst) - vf(best);
    if (spread <= 1e-18L * (1.0L + std::fabs(vf(best)))) {
      long double diam = 0;
      for (int i = 1; i <= m; ++i)
        diam = std::max(diam,
                        (vx(ord[static_cast<std::size_t>(i)]) - vx(best)).cwiseAbs().maxCoeff());
      if (diam <= 1e-13L) break;
    }
    VecLD centroid = VecLD::Zero(m);
    for (int i = 0; i <= m; ++i)
      if (i != worst) centroid += vx(i);
    centroid /= static_cast<long double>(m);
    VecLD xr = clamp_box(s, centroid + (centroid - vx(worst)));
    long double fr = penalty_value(s, xr, mu);
    if (fr < vf(best)) {
      VecLD xe = clamp_box(s, centroid + 2.0L * (centroid - vx(worst)));
      long double fe = penalty_value(s, xe, mu);
      if (fe < fr) {
        vx(worst) = std::move(xe);
        vf(worst) = fe;
      } else {
        vx(worst) = std::move(xr);
        vf(worst) = fr;
      }
    } else if (fr < vf(second)) {
      vx(worst) = std::move(xr);
      vf(worst) = fr;
    } else {
      bool shrink = false;
      if (fr < vf(worst)) {
        VecLD xc = clamp_box(s, centroid + 0.5L * (centroid - vx(worst)));
        long double fc = penalty_value(s, xc, mu);
        if (fc <= fr) {
          vx(worst) = std::move(xc);
          vf(worst) = fc;
        } else {
          shrink = true;
        }
      } else {
        VecLD xc = clamp_box(s, centroid - 0.5L * (centroid - vx(worst)));
        long double fc = penalty_value(s, xc, mu);
        if (fc < vf(worst)) {
          vx(worst) = std::move(xc);
          vf(worst) = fc;
        } else {
          shrink = true;
        }
      }
      if (shrink) {
        for (int i = 0; i <= m; ++i) {
          if (i == best) continue;
          vx(i) = clamp_box(s, vx(best) + 0.5L * (vx(i) - vx(best)));
          vf(i) = penalty_value(s, vx(i), mu);
        }
      }
    }
  }
  resort();
  return vx(ord[0]);
}

// Gauss-Newton with min-norm steps and central differences, moving only the
// unpinned variables; returns the final max |residual|.
long double project(const Search& s, VecLD& x, const std::vector<bool>& pinned) {
  std::vector<int> vars;
  for (std::size_t i = 0; i < pinned.size(); ++i)
    if (!pinned[i]) vars.push_back(static_cast<int>(i));
  if (vars.empty()) return evaluate(s, x).r.cwiseAbs().maxCoeff();
  const long double fd = 1e-6L;
  long double rmax = std::numeric_limits<long double>::infinity();
  for (int it = 0; it < 60; ++it) {
    Eval e = evaluate(s, x);
    rmax = e.r.cwiseAbs().maxCoeff();
    if (rmax <= 1e-13L) return rmax;
    MatLD J(s.nres, static_cast<Eigen::Index>(vars.size()));
    for (std::size_t j = 0; j < vars.size(); ++j) {
      VecLD xp = x, xm = x;
      xp[vars[j]] += fd;
      xm[vars[j]] -= fd;
      J.col(static_cast<Eigen::Index>(j)) = (evaluate(s, xp).r - evaluate(s, xm).r) / (2.0L * fd);
    }
    Eigen::FullPivLU<MatLD> lu(J * J.transpose());
    if (!lu.isInvertible()) return rmax;
    VecLD dx = J.transpose() * lu.solve(e.r);
    for (std::size_t j = 0; j < vars.size(); ++j) x[vars[j]] -= dx[static_cast<Eigen::Index>(j)];
  }
  return evaluate(s, x).r.cwiseAbs().maxCoeff();
}

// Projects onto the constraint set; in nonnegative mode variables the simplex
// left on the boundary are pinned to 0 first, and variables the projection
// drags slightly negative are pinned and the projection repeated.
bool settle(const Search& s, VecLD& x, long double& rmax_out) {
  std::vector<bool> pinned(static_cast<std::size_t>(x.size()), false);
  if (s.nonneg)
    for (Eigen::Index i = 0; i < x.size(); ++i)
      if (x[i] <= 1e-9L) {
        x[i] = 0.0L;
        pinned[static_cast<std::size_t>(i)] = true;
      }
  for (int round = 0; round < 4; ++round) {
    rmax_out = project(s, x, pinned);
    if (!(rmax_out <= 1e-11L)) return false;
    if (!s.nonneg) return true;
    bool clean = true;
    for (Eigen::Index i = 0; i < x.size(); ++i) {
      if (pinned[static_cast<std::size_t>(i)]) continue;
      if (x[i] < -1e-5L) return false;
      if (x[i] < -1e-12L) {
        x[i] = 0.0L;
        pinned[static_cast<std::size_t>(i)] = true;
        clean = false;
      } else if (x[i] < 0.0L) {
        x[i] = 0.0L;
      }
    }
    if (clean) return true;
  }
  return false;
}

SchemeTable build_table(const Search& s, const VecLD& x, const std::string& name) {
  SchemeTable t;
  t.name = name;
  t.n_ops = s.n;
  t.stages = s.k;
  t.order = 2;
  t.tags.nonnegative = s.nonneg;
  auto a = to_table(s, x);
  t.coeffs.assign(static_cast<std::size_t>(s.n), {});
  for (int l = 0; l < s.n; ++l) {
    t.coeffs[static_cast<std::size_t>(l)].resize(static_cast<std::size_t>(s.k));
    for (int nu = 0; nu < s.k; ++nu)
      t.coeffs[static_cast<std::size_t>(l)][static_cast<std::size_t>(nu)] =
          rational_from_long_double(a[static_cast<std::size_t>(l)][static_cast<std::size_t>(nu)]);
  }
  return t;
}

bool passes_order2(const SchemeTable& t) {
  OrderReport rep = order_residuals(t, 3);
  return rep.residual_norm_by_degree.at(1) <= 1e-8L &&
         rep.residual_norm_by_degree.at(2) <= 1e-8L;
}

}  // namespace

OptimizeResult optimize_scheme(const OptimizeSpec& spec) {
  const int n = spec.n_ops, k = spec.stages;
  if (n < 2 || n > kMaxLetters)
    throw ValidationError("optimize needs between 2 and " + std::to_string(kMaxLetters) +
                          " operators");
  if (k < 1) throw ValidationError("optimize needs at least one stage");

  std::vector<bool> fixed(static_cast<std::size_t>(n * k), false);
  std::vector<long double> base(static_cast<std::size_t>(n * k), 0.0L);
  for (const FixedCoefficient& fc : spec.constraints.fix_coefficients) {
    if (fc.op < 1 || fc.op > n || fc.stage < 1 || fc.stage > k)
      throw ValidationError("fixed coefficient (" + std::to_string(fc.op) + "," +
                            std::to_string(fc.stage) + ") is out of range");
    std::size_t slot = static_cast<std::size_t>((fc.op - 1) * k + (fc.stage - 1));
    if (fixed[slot])
      throw ValidationError("fixed coefficient (" + std::to_string(fc.op) + "," +
                            std::to_string(fc.stage) + ") given twice");
    if (spec.constraints.nonnegative && fc.value < 0)
      throw ValidationError("fixed coefficient conflicts with nonnegativity");
    fixed[slot] = true;
    base[slot] = to_long_double(fc.value);
  }

  Search s;
  s.n = n;
  s.k = k;
  s.nonneg = spec.constraints.nonnegative;
  s.base = std::move(base);
  for (int i = 0; i < n * k; ++i)
    if (!fixed[static_cast<std::size_t>(i)]) s.free_slots.push_back(i);
  s.nres = n + static_cast<int>(lyndon_count(n, 2));
  if (spec.constraints.milne_target) {
    const MilneTarget& mt = *spec.constraints.milne_target;
    if (mt.basic.n_ops != n) throw ValidationError("milne target operator count mismatch");
    validate(mt.basic);
    FreePoly<Rational> bd = log_defect_coeffs(mt.basic.coeffs, n, 3);
    std::vector<Rational> c3 = lyndon_word_coeffs(bd, 3);
    const Eigen::Index l3 = static_cast<Eigen::Index>(c3.size());
    VecLD c3v(l3);
    bool allzero = true;
    for (Eigen::Index i = 0; i < l3; ++i) {
      c3v[i] = to_long_double(c3[static_cast<std::size_t>(i)]);
      if (c3[static_cast<std::size_t>(i)] != 0) allzero = false;
    }
    if (allzero)
      throw ValidationError("milne target has zero leading defect; nothing to be proportional to");
    VecLD u = c3v / c3v.norm();
    VecLD v = u;
    v[0] += (u[0] >= 0 ? 1.0L : -1.0L);
    v /= v.norm();
    MatLD h = MatLD::Identity(l3, l3) - 2.0L * v * v.transpose();
    s.complement = h.bottomRows(l3 - 1);
    s.milne = true;
    s.gamma_min = mt.gamma_min;
    s.gamma_max = mt.gamma_max;
    s.nres += static_cast<int>(l3) - 1;
  }

  const int nf = static_cast<int>(s.free_slots.size());
  if (nf < s.nres)
    throw ValidationError("search has negative degrees of freedom: " + std::to_string(nf) +
                          " free coefficients against " + std::to_string(s.nres) +
                          " constraints");
  if (spec.budget.multistarts <= 0)
    throw OptimizerError("budget error: zero multistarts leaves nothing to search");
  if (spec.budget.max_iters <= 0)
    throw OptimizerError("budget error: zero simplex iterations");

  SplitMix64 rng(spec.seed);
  std::vector<VecLD> starts;
  starts.reserve(static_cast<std::size_t>(spec.budget.multistarts));
  for (int i = 0; i < spec.budget.multistarts; ++i) {
    VecLD x(nf);
    for (int j = 0; j < nf; ++j) {
      long double u = static_cast<long double>(rng.uniform_pm1());
      x[j] = s.nonneg ? 0.5L * (u + 1.0L) : u;
    }
    starts.push_back(std::move(x));
  }

  const std::string name = "optimized-" + std::to_string(n) + "-" + std::to_string(k);
  const long double inf = std::numeric_limits<long double>::infinity();
  struct Candidate {
    long double lem_value;
    SchemeTable table;
  };
  std::optional<Candidate> best;
  long double best_res = inf;
  long double best_parallel = inf;
  int feasible = 0;
  const long double mus[] = {1e2L, 1e4L, 1e6L};
  for (int i = 0; i < spec.budget.multistarts; ++i) {
    VecLD x = starts[static_cast<std::size_t>(i)];
    for (long double mu : mus) x = nelder_mead(s, std::move(x), mu, spec.budget.max_iters);
    long double rmax = inf;
    bool ok = settle(s, x, rmax);
    if (std::isfinite(rmax)) best_res = std::min(best_res, rmax);
    if (!ok) continue;
    SchemeTable t = build_table(s, x, name);
    try {
      validate(t);
    } catch (const Error&) {
      continue;
    }
    if (!passes_order2(t)) continue;
    if (s.milne) {
      try {
        GammaResult g = gamma_of_pair(spec.constraints.milne_target->basic, t);
        best_parallel = std::min(best_parallel, g.parallelism_defect);
        if (g.parallelism_defect > 1e-6L) continue;
        if (g.gamma < static_cast<long double>(s.gamma_min) ||
            g.gamma > static_cast<long double>(s.gamma_max))
          continue;
      } catch (const Error&) {
        continue;
      }
    }
    long double l = lem(t);
    ++feasible;
    if (!best || l < best->lem_value) best = Candidate{l, std::move(t)};
  }
  if (!best) {
    if (s.milne && std::isfinite(best_parallel))
      throw OptimizerError(
          "no feasible Milne partner within budget; best parallelism defect = " +
              fmt_ld(best_parallel),
          static_cast<double>(best_parallel));
    throw OptimizerError(
        "no feasible scheme within budget; best constraint residual = " +
            fmt_ld(std::isfinite(best_res) ? best_res : -1.0L),
        std::isfinite(best_res) ? static_cast<double>(best_res) : 0.0);
  }
  return OptimizeResult{std::move(best->table), best->lem_value, spec.budget.multistarts,
                        feasible};
}

std::vector<std::string> provenance_comments(const OptimizeSpec& spec,
                                             const OptimizeResult& result) {
  std::vector<std::string> out;
  char buf[200];
  std::snprintf(buf, sizeof buf, "seed = %llu",
                static_cast<unsigned long long>(spec.seed));
  out.emplace_back(buf);
  std::snprintf(buf, sizeof buf,
                "budget = %d multistarts (%d feasible), %d simplex iterations per level",
                spec.budget.multistarts, result.feasible_starts, spec.budget.max_iters);
  out.emplace_back(buf);
  OrderReport rep = order_residuals(result.scheme, 3);
  std::snprintf(buf, sizeof buf, "order residuals: degree 1 = %.3Le, degree 2 = %.3Le",
                rep.residual_norm_by_degree.at(1), rep.residual_norm_by_degree.at(2));
  out.emplace_back(buf);
  std::snprintf(buf, sizeof buf, "lem = %.7Lf (scaled %.7Lf)", result.lem,
                lem_scaled(result.scheme));
  out.emplace_back(buf);
  return out;
}

MilnePair derive_milne_partner(const SchemeTable& basic, int stages,
                               const OptimizeConstraints& constraints, std::uint64_t seed,
                               const OptimizeBudget& budget) {
  validate(basic);
  if (basic.order != 2)
    throw ValidationError("milne partner derivation expects an order-2 basic scheme");
  OrderReport rep = order_residuals(basic, 3);
  if (rep.verified_order < 2)
    throw ValidationError("basic scheme fails its order-2 conditions");
  if (rep.residual_norm_by_degree.at(3) == 0.0L)
    throw ValidationError(
        "basic scheme has zero leading defect; nothing to be proportional to");
  OptimizeSpec spec;
  spec.n_ops = basic.n_ops;
  spec.stages = stages;
  spec.constraints = constraints;
  if (spec.constraints.milne_target)
    spec.constraints.milne_target->basic = basic;
  else
    spec.constraints.milne_target = MilneTarget{basic};
  spec.seed = seed;
  spec.budget = budget;
  OptimizeResult r = optimize_scheme(spec);
  r.scheme.name = basic.name + "-milne-partner";
  GammaResult g = gamma_of_pair(basic, r.scheme);
  return MilnePair{basic, std::move(r.scheme), rational_from_long_double(g.gamma)};
}

}  // namespace splitkit
