// Acceptance gate: ten end-to-end criteria, one line each in the form
// "A<k> PASS|FAIL|SKIP: detail", exit status 1 when any criterion fails.
// Seeded checks all use the fixed seed below and are fully deterministic.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <numeric>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "splitkit/analysis.hpp"
#include "splitkit/burgers.hpp"
#include "splitkit/errors.hpp"
#include "splitkit/free_algebra.hpp"
#include "splitkit/integrator.hpp"
#include "splitkit/optimizer.hpp"
#include "splitkit/oracle.hpp"
#include "splitkit/schemes.hpp"

using namespace splitkit;

namespace {

constexpr std::uint64_t kSeed = 20260817;

int failures = 0;

std::string fmt(const char* f, ...) {
  char buf[512];
  va_list ap;
  va_start(ap, f);
  std::vsnprintf(buf, sizeof buf, f, ap);
  va_end(ap);
  return buf;
}

void line(const char* id, const char* verdict, const std::string& detail) {
  std::printf("%s %s: %s\n", id, verdict, detail.c_str());
  std::fflush(stdout);
}

void report(const char* id, bool pass, const std::string& detail) {
  if (!pass) ++failures;
  line(id, pass ? "PASS" : "FAIL", detail);
}

template <class F>
void criterion(const char* id, F f) {
  try {
    f();
  } catch (const std::exception& e) {
    report(id, false, std::string("exception: ") + e.what());
  }
}

struct Timer {
  std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
  double s() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  }
};

std::vector<SchemeTable> registry_tables() {
  std::vector<SchemeTable> out;
  for (const std::string& name : registry_names()) {
    RegistryEntry e;
    try {
      e = registry_get(name);
    } catch (const Error&) {
      continue;  // entries needing external data are covered by A10
    }
    if (std::holds_alternative<SchemeTable>(e)) {
      out.push_back(std::get<SchemeTable>(e));
    } else {
      out.push_back(std::get<MilnePair>(e).basic);
      out.push_back(std::get<MilnePair>(e).partner);
    }
  }
  return out;
}

// The N = 1024 local order study, shared between A4 and A6.
struct SharedStudy {
  StudyResult study;
  double seconds = 0;
};

const SharedStudy& shared_study() {
  static const SharedStudy s = [] {
    Timer t;
    BurgersConfig cfg = study_config();
    StudyResult r = local_order_study(cfg, default_burgers_pair(), init_bump(cfg),
                                      default_study_h_list());
    return SharedStudy{std::move(r), t.s()};
  }();
  return s;
}

// A1: scaled leading-error measures of the six tabulated reference schemes.
void a1() {
  Timer t;
  const std::vector<std::pair<std::string, double>> tabulated = {
      {"strang-4", 2.62202},    {"opt-4-4-pos", 2.11759},    {"opt-4-5-pos", 0.17423},
      {"opt-4-4-neg", 0.80685}, {"opt-3-3-pos", 0.29596},    {"milne-3-partner", 0.12167}};
  std::vector<double> computed;
  int matched = 0;
  std::string mism;
  for (const auto& [name, ref] : tabulated) {
    double v = static_cast<double>(lem_scaled(std::get<SchemeTable>(registry_get(name))));
    computed.push_back(v);
    if (std::fabs(v - ref) <= 1e-3 * ref)
      ++matched;
    else
      mism += fmt("%s%s computed %.5f vs tabulated %.5f", mism.empty() ? "" : "; ",
                  name.c_str(), v, ref);
  }
  const bool direct = matched == 6;

  std::vector<std::size_t> by_ref(6);
  std::iota(by_ref.begin(), by_ref.end(), std::size_t{0});
  std::vector<std::size_t> by_cmp = by_ref;
  std::sort(by_ref.begin(), by_ref.end(),
            [&](std::size_t a, std::size_t b) { return tabulated[a].second < tabulated[b].second; });
  std::sort(by_cmp.begin(), by_cmp.end(),
            [&](std::size_t a, std::size_t b) { return computed[a] < computed[b]; });
  const bool same_order = by_ref == by_cmp;

  double anchor = static_cast<double>(lem(std::get<SchemeTable>(registry_get("strang-2"))));
  const bool anchor_ok = std::fabs(anchor - 0.093169) <= 1e-5;

  double r0 = computed[0] / tabulated[0].second;
  bool common_factor = true;
  for (std::size_t i = 1; i < computed.size(); ++i)
    if (std::fabs(computed[i] / tabulated[i].second - r0) > 1e-3 * r0) common_factor = false;

  const bool fallback = same_order && anchor_ok && common_factor;
  report("A1", (direct || fallback) && t.s() < 1.0,
         fmt("%d/6 values match to 1e-3 (%s); ascending order %s; strang-2 anchor %.7f %s; "
             "t=%.2fs",
             matched, mism.empty() ? "all agree" : mism.c_str(),
             same_order ? "matches" : "differs", anchor, anchor_ok ? "ok" : "off", t.s()));
}

// A2: empirical one-step order of every registry table on the matrix oracle.
void a2() {
  double worst = 0;
  int tables = 0;
  std::string bad;
  for (const SchemeTable& s : registry_tables()) {
    MatrixProblem prob = make_problem(s.n_ops, 6, kSeed);
    OrderFit fit = empirical_order(s, prob, default_h_list());
    double dev = std::fabs(static_cast<double>(fit.slope) - (s.order + 1));
    worst = std::max(worst, dev);
    if (dev > 0.1) bad += fmt("%s%s slope %.3Lf", bad.empty() ? "" : "; ", s.name.c_str(),
                              fit.slope);
    ++tables;
  }
  report("A2", bad.empty() && tables >= 8,
         fmt("%d tables, worst |slope - (order+1)| = %.3f%s%s", tables, worst,
             bad.empty() ? "" : ", out of band: ", bad.c_str()));
}

// A3: the one-parameter 4-operator family has a strict local minimum of the
// error measure at t = 0.22633512.
void a3() {
  Timer t;
  Rational tstar = parse_decimal("0.22633512");
  Rational dt = parse_decimal("0.01");
  long double lm = lem(table1_parameterized(tstar - dt));
  long double l0 = lem(table1_parameterized(tstar));
  long double lp = lem(table1_parameterized(tstar + dt));
  long double scaled = lem_scaled(table1_parameterized(tstar));
  report("A3", lm > l0 && lp > l0 && t.s() < 1.0,
         fmt("lem(t*) = %.7Lf (scaled %.7Lf), lem(t*-0.01) = %.7Lf, lem(t*+0.01) = %.7Lf, "
             "t=%.2fs",
             l0, scaled, lm, lp, t.s()));
}

// A4: the derived pair's gamma agrees with its empirical value, the combined
// scheme kills the leading defect, and the error estimate tracks the true
// error on both the matrix oracle and the PDE study.
void a4() {
  const MilnePair& pair = default_burgers_pair();
  GammaResult g = gamma_of_pair(pair.basic, pair.partner);
  MatrixProblem prob = make_problem(2, 6, kSeed);
  long double ge = empirical_gamma(pair, prob, default_h_list());
  long double gdev = std::fabs(g.gamma - ge);
  long double cd = combined_defect_norm(pair.basic, pair.partner, g.gamma);

  VectorXld u = seeded_unit_state(6, kSeed + 1);
  const long double h = 0.0009765625L;  // 2^-10
  auto ms = milne_step(prob, pair, h, u);
  long double true_err = prob.norm_diff(split_step(prob, pair.basic, h, u),
                                        exact_step(prob, h, u));
  double r_mat = static_cast<double>(ms.est / true_err);
  double r_pde = shared_study().study.est_over_true_at_smallest_h;
  bool ratios = r_mat >= 0.85 && r_mat <= 1.15 && r_pde >= 0.85 && r_pde <= 1.15;
  report("A4", gdev <= 1e-3 && cd <= 1e-8 && ratios,
         fmt("gamma %.6Lf vs empirical %.6Lf (dev %.2Le), combined defect %.2Le, est/true "
             "matrix %.4f, pde %.4f",
             g.gamma, ge, gdev, cd, r_mat, r_pde));
}

// A5: the step proposal reproduces its three defining cases bit-exactly.
void a5() {
  StepController c;  // tol = 1e-5
  double p1 = propose_step(c, 0.01, c.tol, 2);
  double p2 = propose_step(c, 0.01, 1000 * c.tol, 2);
  double p3 = propose_step(c, 0.01, c.tol * 1e-6, 2);
  bool ok = p1 == 0.9 * 0.01 && p2 == 0.25 * 0.01 && p3 == 4.0 * 0.01;
  report("A5", ok, fmt("P=tol -> %.17g, P=1000*tol -> %.17g, P=1e-6*tol -> %.17g", p1, p2, p3));
}

// A6: the smooth-datum study shows third-order local errors with stable
// constants for both pair members.
void a6() {
  const SharedStudy& sh = shared_study();
  const auto& rows = sh.study.rows;
  double omin = 1e300, omax = -1e300;
  for (std::size_t i = 1; i < rows.size(); ++i)
    for (double o : {rows[i].order_basic, rows[i].order_partner}) {
      omin = std::min(omin, o);
      omax = std::max(omax, o);
    }
  auto variation = [&](auto member) {
    double lo = 1e300, hi = -1e300;
    for (std::size_t i = rows.size() - 4; i < rows.size(); ++i) {
      lo = std::min(lo, member(rows[i]));
      hi = std::max(hi, member(rows[i]));
    }
    return hi / lo - 1;
  };
  double vb = variation([](const StudyRow& r) { return r.const_basic; });
  double vp = variation([](const StudyRow& r) { return r.const_partner; });
  bool ok = omin >= 2.8 && omax <= 3.05 && vb < 0.25 && vp < 0.25 && sh.seconds < 120.0;
  report("A6", ok,
         fmt("orders in [%.3f, %.3f], const variation %.1f%%/%.1f%% over the last four rows, "
             "self-check %.2e, t=%.1fs",
             omin, omax, 100 * vb, 100 * vp, sh.study.max_refcheck_rel, sh.seconds));
}

// A7: the shock run grows the step on the smooth phase, shrinks it by a large
// factor into the shock, reaches the floor, and never accepts above threshold
// away from the floor.
void a7() {
  Timer t;
  ShockPreset p = shock_preset();
  ShockRunResult run = adaptive_shock_run(p.cfg, default_burgers_pair(), p.controller, p.t_end,
                                          p.h0, p.hat_half_width);
  double hmax = 0, hfinal = 0;
  bool accepted_ok = true;
  for (const StepRecord& r : run.trace.records)
    if (r.accepted) {
      hmax = std::max(hmax, r.h);
      hfinal = r.h;
      bool at_floor = r.h <= p.controller.h_min * (1 + 1e-12);
      if (!at_floor && r.P > p.controller.reject_threshold * p.controller.tol)
        accepted_ok = false;
    }
  bool ok = hmax / p.h0 >= 2.0 && hmax / hfinal >= 20.0 && run.trace.floor_hit &&
            accepted_ok && t.s() < 300.0;
  report("A7", ok,
         fmt("max h / h0 = %.1f, max h / final h = %.1f, floor_hit = %s, %d accepted / %d "
             "rejected, accepted estimates %s threshold, t=%.1fs",
             hmax / p.h0, hmax / hfinal, run.trace.floor_hit ? "true" : "false",
             run.trace.accepted, run.trace.rejected, accepted_ok ? "within" : "ABOVE", t.s()));
}

// A8: the optimizer finds a nonnegative 3-operator 3-stage order-2 scheme at
// least as good as the tabulated one.
void a8() {
  Timer t;
  OptimizeSpec spec;
  spec.n_ops = 3;
  spec.stages = 3;
  spec.constraints.nonnegative = true;
  spec.budget = {64, 400};
  spec.seed = kSeed;
  OptimizeResult res = optimize_scheme(spec);
  bool nonneg = true;
  for (const auto& row : res.scheme.coeffs)
    for (const Rational& a : row)
      if (a < 0) nonneg = false;
  int vo = order_residuals(res.scheme, 3).verified_order;
  long double scaled = lem_scaled(res.scheme);
  bool ok = nonneg && vo >= 2 && scaled <= 0.35 && t.s() < 600.0;
  report("A8", ok,
         fmt("seed %llu, 64 multistarts (%d feasible), verified order %d, nonnegative %s, "
             "scaled lem %.6Lf (bound 0.35), t=%.1fs",
             static_cast<unsigned long long>(kSeed), res.feasible_starts, vo,
             nonneg ? "yes" : "NO", scaled, t.s()));
}

// A9: structural invariants: row sums, tag validity (palindromy included),
// subflow mass conservation, exact-flow semigroup, exp/log round trip.
void a9() {
  long double worst_sum = 0;
  int symmetric = 0;
  bool palindromic = true;
  for (const SchemeTable& s : registry_tables()) {
    validate(s);
    for (const auto& row : s.coeffs) {
      Rational sum = 0;
      for (const Rational& a : row) sum += a;
      worst_sum = std::max(worst_sum, std::fabs(to_long_double(sum - Rational(1))));
    }
    if (s.tags.symmetric) {
      ++symmetric;
      auto f = factor_sequence(s);
      for (std::size_t i = 0; i < f.size(); ++i)
        if (f[i] != f[f.size() - 1 - i]) palindromic = false;
    }
  }

  BurgersConfig cfg;
  cfg.N = 256;
  cfg.kappa = 1.0;
  cfg.nu = 0.002;
  GridFunction u = init_hat(cfg, 1.5, 0.4);
  double m0 = mass(cfg, u);
  double md = std::fabs(mass(cfg, diffusion_subflow(cfg, 0.01, u)) - m0);
  double ma = std::fabs(mass(cfg, advection_subflow(cfg, 0.01, u)) - m0);

  MatrixProblem prob = make_problem(2, 6, kSeed);
  VectorXld v = seeded_unit_state(6, kSeed + 2);
  long double sg = prob.norm_diff(exact_step(prob, 0.3L, v),
                                  exact_step(prob, 0.2L, exact_step(prob, 0.1L, v)));

  auto x = mul(exp_single(1, Rational(1, 3), 2, 4), exp_single(2, Rational(-2, 5), 2, 4));
  bool roundtrip = exp_truncated(log_truncated(x)).coeffs == x.coeffs;

  bool ok = worst_sum <= 5e-7L && palindromic && md <= 1e-10 && ma <= 1e-10 &&
            sg <= 1e-12L && roundtrip;
  report("A9", ok,
         fmt("worst row-sum deviation %.1Le, %d symmetric tables palindromic: %s, mass drift "
             "%.1e/%.1e, semigroup %.1Le, exp/log round trip %s",
             worst_sum, symmetric, palindromic ? "yes" : "NO", md, ma, sg,
             roundtrip ? "exact" : "BROKEN"));
}

// A10: gamma and parallelism of the externally supplied pair, when its
// coefficient file is available.
void a10() {
  const char* env = std::getenv("SPLITKIT_DATA_DIR");
  if (!env || !std::filesystem::exists(std::filesystem::path(env) / "ak32i.scheme")) {
    line("A10", "SKIP", "ak32i.scheme not present; set SPLITKIT_DATA_DIR to enable");
    return;
  }
  auto pair = std::get<MilnePair>(registry_get("milne-3-pair"));
  GammaResult g = gamma_of_pair(pair.basic, pair.partner);
  double target = 1.0 / 4.1092266;
  bool ok = std::fabs(static_cast<double>(g.gamma) - target) <= 1e-4 &&
            g.parallelism_defect <= 1e-4L;
  report("A10", ok,
         fmt("gamma %.7Lf vs 1/4.1092266 = %.7f, parallelism defect %.2Le", g.gamma, target,
             g.parallelism_defect));
}

}  // namespace

int main() {
  criterion("A1", a1);
  criterion("A2", a2);
  criterion("A3", a3);
  criterion("A4", a4);
  criterion("A5", a5);
  criterion("A6", a6);
  criterion("A7", a7);
  criterion("A8", a8);
  criterion("A9", a9);
  criterion("A10", a10);
  return failures ? 1 : 0;
}
