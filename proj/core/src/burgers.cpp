#include "splitkit/burgers.hpp"

#include <quadmath.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <future>
#include <limits>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <utility>

#include "splitkit/fft.hpp"
#include "splitkit/optimizer.hpp"

namespace splitkit {

using quad = __float128;

// The order study resolves errors far below double's noise floor once the
// reference is 512 fine steps, so its whole pipeline runs in quad precision.
template <>
struct FftTraits<quad> {
  static quad pi() { return M_PIq; }
  static quad cos_at(quad x) { return cosq(x); }
  static quad sin_at(quad x) { return sinq(x); }
};

namespace {

std::string fmt_g(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

std::shared_ptr<const Fft<double>> cached_fft(int n) {
  static std::mutex mu;
  static std::map<int, std::shared_ptr<const Fft<double>>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto& slot = cache[n];
  if (!slot) slot = std::make_shared<const Fft<double>>(static_cast<std::size_t>(n));
  return slot;
}

}  // namespace

void validate(const BurgersConfig& cfg) {
  if (cfg.N < 2 || (cfg.N & (cfg.N - 1)) != 0)
    throw ValidationError("grid size must be a power of two, at least 2");
  if (!(cfg.L > 0)) throw ValidationError("domain length must be positive");
  if (!(cfg.kappa >= 0)) throw ValidationError("advection strength must be nonnegative");
  if (!(cfg.nu >= 0)) throw ValidationError("diffusion coefficient must be nonnegative");
  if (!(cfg.cfl_safety > 0 && cfg.cfl_safety < 1))
    throw ValidationError("cfl_safety must lie strictly between 0 and 1");
}

double grid_node(const BurgersConfig& cfg, int i) {
  return -cfg.L / 2 + static_cast<double>(i) * cfg.L / cfg.N;
}

GridFunction init_bump(const BurgersConfig& cfg) {
  validate(cfg);
  if (cfg.L < 2) throw ValidationError("bump support (-1,1) needs domain length >= 2");
  GridFunction u(static_cast<std::size_t>(cfg.N), 0.0);
  for (int i = 0; i < cfg.N; ++i) {
    double x = grid_node(cfg, i);
    if (std::fabs(x) < 1.0) u[static_cast<std::size_t>(i)] = 0.5 * std::exp(1.0 / (x * x - 1.0));
  }
  return u;
}

GridFunction init_hat(const BurgersConfig& cfg, double height, double half_width) {
  validate(cfg);
  if (!(half_width > 0 && half_width < cfg.L / 2))
    throw ValidationError("hat half-width must lie in (0, L/2)");
  GridFunction u(static_cast<std::size_t>(cfg.N), 0.0);
  for (int i = 0; i < cfg.N; ++i) {
    double x = grid_node(cfg, i);
    if (std::fabs(x) <= half_width)
      u[static_cast<std::size_t>(i)] = height * (1.0 - std::fabs(x) / half_width);
  }
  return u;
}

GridFunction diffusion_subflow(const BurgersConfig& cfg, double h, const GridFunction& u) {
  validate(cfg);
  if (h < 0) throw ValidationError("diffusion step must be nonnegative");
  if (static_cast<int>(u.size()) != cfg.N)
    throw ValidationError("grid length does not match the configuration");
  if (h == 0 || cfg.nu == 0) return u;
  auto fft = cached_fft(cfg.N);
  std::vector<double> re = u, im(u.size(), 0.0);
  fft->forward(re, im);
  const double w0 = 2.0 * FftTraits<double>::pi() / cfg.L;
  for (int i = 0; i < cfg.N; ++i) {
    int k = i <= cfg.N / 2 ? i : i - cfg.N;
    double w = w0 * k;
    double f = std::exp(-cfg.nu * w * w * h);
    re[static_cast<std::size_t>(i)] *= f;
    im[static_cast<std::size_t>(i)] *= f;
  }
  fft->inverse(re, im);
  return re;
}

GridFunction advection_subflow(const BurgersConfig& cfg, double h, const GridFunction& u0) {
  validate(cfg);
  if (h < 0) throw ValidationError("advection step must be nonnegative");
  if (static_cast<int>(u0.size()) != cfg.N)
    throw ValidationError("grid length does not match the configuration");
  if (h == 0 || cfg.kappa == 0) return u0;
  const std::size_t n = u0.size();
  const double dx = cfg.L / cfg.N;
  double umax = 0;
  for (double v : u0) umax = std::max(umax, std::fabs(v));
  const double m_needed = std::ceil(cfg.kappa * umax * h / (cfg.cfl_safety * dx));
  if (!(m_needed < 1e9))
    throw StudyError("advection CFL substep count overflows: h = " + fmt_g(h) +
                     ", max|u| at entry = " + fmt_g(umax));
  const int m = std::max(1, static_cast<int>(m_needed));
  const double tau = h / m;
  const double c = tau / (2.0 * dx);
  const double r = tau / dx;
  GridFunction u = u0, f(n), flux(n);
  for (int step = 0; step < m; ++step) {
    for (std::size_t i = 0; i < n; ++i) f[i] = cfg.kappa * u[i] * u[i] / 2.0;
    for (std::size_t i = 0; i < n; ++i) {
      std::size_t ip = i + 1 == n ? 0 : i + 1;
      double a = cfg.kappa * (u[i] + u[ip]) / 2.0;
      flux[i] = 0.5 * (f[i] + f[ip]) - c * a * (f[ip] - f[i]);
    }
    for (std::size_t i = 0; i < n; ++i) {
      std::size_t im = i == 0 ? n - 1 : i - 1;
      u[i] -= r * (flux[i] - flux[im]);
    }
    for (std::size_t i = 0; i < n; ++i)
      if (!std::isfinite(u[i]))
        throw StudyError("advection produced non-finite values: h = " + fmt_g(h) +
                         ", inner steps = " + std::to_string(m) +
                         ", max|u| at entry = " + fmt_g(umax));
  }
  return u;
}

double mass(const BurgersConfig& cfg, const GridFunction& u) {
  double s = 0;
  for (double v : u) s += v;
  return s * cfg.L / cfg.N;
}

double scaled_l2_diff(const GridFunction& a, const GridFunction& b) {
  if (a.size() != b.size()) throw ValidationError("grid length mismatch");
  double ss = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    double d = a[i] - b[i];
    ss += d * d;
  }
  return std::sqrt(ss / static_cast<double>(a.size()));
}

namespace {

class QuadBurgers {
 public:
  using Scalar = quad;
  using State = std::vector<quad>;

  explicit QuadBurgers(const BurgersConfig& cfg)
      : n_(cfg.N),
        kappa_(cfg.kappa),
        nu_(cfg.nu),
        cfl_(cfg.cfl_safety),
        dx_(quad(cfg.L) / cfg.N),
        w0_(2 * M_PIq / quad(cfg.L)),
        fft_(static_cast<std::size_t>(cfg.N)) {}

  int ops() const { return 2; }

  State subflow(int ell, quad h, const State& u) const {
    if (ell == 1) return diffusion(h, u);
    if (ell == 2) return advection(h, u);
    throw ValidationError("operator index out of range");
  }

  long double norm_diff(const State& a, const State& b) const {
    quad ss = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
      quad d = a[i] - b[i];
      ss += d * d;
    }
    return static_cast<long double>(sqrtq(ss / quad(n_)));
  }

 private:
  State diffusion(quad h, const State& u) const {
    if (nu_ == 0 || h == 0) return u;
    State re = u, im(u.size(), quad(0));
    fft_.forward(re, im);
    for (int i = 0; i < n_; ++i) {
      int k = i <= n_ / 2 ? i : i - n_;
      quad w = w0_ * k;
      quad f = expq(-nu_ * w * w * h);
      re[static_cast<std::size_t>(i)] *= f;
      im[static_cast<std::size_t>(i)] *= f;
    }
    fft_.inverse(re, im);
    return re;
  }

  State advection(quad h, const State& u0) const {
    if (kappa_ == 0 || h == 0) return u0;
    const std::size_t n = u0.size();
    quad umax = 0;
    for (quad v : u0) umax = std::max(umax, static_cast<quad>(fabsq(v)));
    int m = static_cast<int>(ceilq(kappa_ * umax * h / (cfl_ * dx_)));
    if (m < 1) m = 1;
    const quad tau = h / m;
    const quad c = tau / (2 * dx_);
    const quad r = tau / dx_;
    State u = u0, f(n), flux(n);
    for (int step = 0; step < m; ++step) {
      for (std::size_t i = 0; i < n; ++i) f[i] = kappa_ * u[i] * u[i] / 2;
      for (std::size_t i = 0; i < n; ++i) {
        std::size_t ip = i + 1 == n ? 0 : i + 1;
        quad a = kappa_ * (u[i] + u[ip]) / 2;
        flux[i] = (f[i] + f[ip]) / 2 - c * a * (f[ip] - f[i]);
      }
      for (std::size_t i = 0; i < n; ++i) {
        std::size_t im = i == 0 ? n - 1 : i - 1;
        u[i] -= r * (flux[i] - flux[im]);
      }
    }
    return u;
  }

  int n_;
  quad kappa_, nu_, cfl_, dx_, w0_;
  Fft<quad> fft_;
};

}  // namespace

StudyResult local_order_study(const BurgersConfig& cfg, const MilnePair& pair,
                              const GridFunction& u0, const std::vector<double>& h_list) {
  validate(cfg);
  validate(pair.basic);
  validate(pair.partner);
  if (pair.basic.n_ops != 2 || pair.partner.n_ops != 2)
    throw ValidationError("the study needs a 2-operator pair");
  if (pair.gamma == 1) throw ValidationError("pair has gamma = 1");
  if (static_cast<int>(u0.size()) != cfg.N)
    throw ValidationError("grid length does not match the configuration");
  if (h_list.size() < 2) throw ValidationError("study needs at least two step sizes");
  for (std::size_t i = 0; i + 1 < h_list.size(); ++i)
    if (!(h_list[i + 1] > 0) || !(h_list[i] > h_list[i + 1]))
      throw ValidationError("step list must be positive and strictly decreasing");
  const double ratio0 = h_list[0] / h_list[1];
  for (std::size_t i = 1; i + 1 < h_list.size(); ++i)
    if (std::fabs(h_list[i] / h_list[i + 1] - ratio0) > 1e-9 * ratio0)
      throw ValidationError("step list must be geometric");

  const long double weight =
      std::fabs(to_long_double(Rational(1) / (Rational(1) - pair.gamma)));

  struct RowOut {
    double err_b, err_p, est_ratio, refcheck;
  };
  auto run_row = [&](double h) -> RowOut {
    QuadBurgers qp(cfg);
    std::vector<quad> q0(u0.begin(), u0.end());
    std::vector<quad> ub = split_step(qp, pair.basic, static_cast<quad>(h), q0);
    std::vector<quad> up = split_step(qp, pair.partner, static_cast<quad>(h), q0);
    auto fixed_steps = [&](int count) {
      std::vector<quad> v = q0;
      const quad tau = quad(h) / count;
      for (int j = 0; j < count; ++j) v = split_step(qp, pair.basic, tau, std::move(v));
      return v;
    };
    std::vector<quad> ref = fixed_steps(256);
    std::vector<quad> ref2 = fixed_steps(512);
    double err_b = static_cast<double>(qp.norm_diff(ub, ref));
    double err_p = static_cast<double>(qp.norm_diff(up, ref));
    double refdiff = static_cast<double>(qp.norm_diff(ref, ref2));
    double emin = std::min(err_b, err_p);
    double refcheck =
        emin > 0 ? refdiff / emin : std::numeric_limits<double>::infinity();
    if (!(refcheck <= 0.01))
      throw StudyError("reference self-check failed at h = " + fmt_g(h) +
                       ": refining the reference moved it by " + fmt_g(refcheck) +
                       " of the measured error");
    double est = static_cast<double>(qp.norm_diff(ub, up) * weight);
    double est_ratio = err_b > 0 ? est / err_b : 0.0;
    return {err_b, err_p, est_ratio, refcheck};
  };

  std::vector<std::future<RowOut>> futs;
  futs.reserve(h_list.size());
  for (double h : h_list) futs.push_back(std::async(std::launch::async, run_row, h));
  std::vector<RowOut> outs;
  outs.reserve(futs.size());
  for (auto& f : futs) outs.push_back(f.get());

  StudyResult res;
  const double nan = std::numeric_limits<double>::quiet_NaN();
  for (std::size_t i = 0; i < h_list.size(); ++i) {
    StudyRow row;
    row.h = h_list[i];
    row.err_basic = outs[i].err_b;
    row.order_basic = i == 0 ? nan : std::log2(outs[i - 1].err_b / outs[i].err_b);
    row.const_basic = outs[i].err_b / (row.h * row.h * row.h);
    row.err_partner = outs[i].err_p;
    row.order_partner = i == 0 ? nan : std::log2(outs[i - 1].err_p / outs[i].err_p);
    row.const_partner = outs[i].err_p / (row.h * row.h * row.h);
    res.rows.push_back(row);
    res.max_refcheck_rel = std::max(res.max_refcheck_rel, outs[i].refcheck);
  }
  res.est_over_true_at_smallest_h = outs.back().est_ratio;
  return res;
}

std::vector<double> default_study_h_list() {
  std::vector<double> out;
  double h = 0.0625;
  for (int i = 0; i < 9; ++i) {
    out.push_back(h);
    h /= 2;
  }
  return out;
}

BurgersConfig study_config() {
  BurgersConfig cfg;
  cfg.N = 1024;
  cfg.L = 4.0;
  cfg.kappa = 0.002;
  cfg.nu = 0.002;
  cfg.cfl_safety = 0.9;
  return cfg;
}

ShockPreset shock_preset() {
  ShockPreset p;
  p.cfg.N = 1024;
  p.cfg.L = 4.0;
  p.cfg.kappa = 1.0;
  p.cfg.nu = 0.002;
  p.cfg.cfl_safety = 0.9;
  p.controller.tol = 1e-5;
  p.controller.h_min = 5e-4;
  p.controller.h_max = 0.1;
  p.t_end = 0.3179;
  p.h0 = 1e-3;
  p.hat_half_width = 0.4;
  return p;
}

ShockRunResult adaptive_shock_run(const BurgersConfig& cfg, const MilnePair& pair,
                                  const StepController& controller, double t_end, double h0,
                                  double hat_half_width) {
  GridFunction u0 = init_hat(cfg, 1.5, hat_half_width);
  BurgersProblem prob(cfg);
  auto res = integrate_adaptive(prob, pair, controller, 0.0, t_end, u0, h0);
  return {std::move(u0), std::move(res.u_final), std::move(res.trace)};
}

const MilnePair& default_burgers_pair() {
  static const MilnePair pair = [] {
    OptimizeConstraints c;
    c.nonnegative = true;
    return derive_milne_partner(registry_scheme("strang-2"), 3, c, 1);
  }();
  return pair;
}

namespace {

std::string csv_num(double v) {
  if (std::isnan(v)) return "";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.16e", v);
  return buf;
}

std::ofstream open_csv(const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw FormatError("cannot write '" + path.string() + "'");
  return out;
}

}  // namespace

void write_study_csv(const StudyResult& r, const std::filesystem::path& path) {
  std::ofstream out = open_csv(path);
  out << "h,err_basic,order_basic,const_basic,err_partner,order_partner,const_partner\n";
  for (const StudyRow& row : r.rows)
    out << csv_num(row.h) << ',' << csv_num(row.err_basic) << ',' << csv_num(row.order_basic)
        << ',' << csv_num(row.const_basic) << ',' << csv_num(row.err_partner) << ','
        << csv_num(row.order_partner) << ',' << csv_num(row.const_partner) << '\n';
}

void write_trace_csv(const StepTrace& t, const std::filesystem::path& path) {
  std::ofstream out = open_csv(path);
  out << "t,h,inv_h,P,accepted\n";
  for (const StepRecord& rec : t.records)
    out << csv_num(rec.t) << ',' << csv_num(rec.h) << ',' << csv_num(1.0 / rec.h) << ','
        << csv_num(rec.P) << ',' << (rec.accepted ? 1 : 0) << '\n';
}

void write_snapshot_csv(const BurgersConfig& cfg, const GridFunction& u,
                        const std::filesystem::path& path) {
  if (static_cast<int>(u.size()) != cfg.N)
    throw ValidationError("grid length does not match the configuration");
  std::ofstream out = open_csv(path);
  out << "x,u\n";
  for (int i = 0; i < cfg.N; ++i)
    out << csv_num(grid_node(cfg, i)) << ',' << csv_num(u[static_cast<std::size_t>(i)]) << '\n';
}

}  // namespace splitkit
