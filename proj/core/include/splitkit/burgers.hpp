#pragma once

// Periodic viscous Burgers equation u_t = nu*u_xx - kappa*u*u_x on
// [-L/2, L/2) as a 2-operator splitting problem: operator 1 = diffusion,
// exact in time via the Fourier symbol; operator 2 = advection in
// conservative form via inner Lax-Wendroff substeps under a CFL bound.

#include <filesystem>
#include <vector>

#include "splitkit/integrator.hpp"
#include "splitkit/schemes.hpp"

namespace splitkit {

// Node values at x_i = -L/2 + i*L/N.
using GridFunction = std::vector<double>;

struct BurgersConfig {
  int N = 1024;             // grid points / Fourier modes, power of two
  double L = 4.0;           // domain length
  double kappa = 0.01;      // advection strength
  double nu = 1.0;          // diffusion coefficient
  double cfl_safety = 0.9;  // inner-step fraction of the CFL bound
};

void validate(const BurgersConfig& cfg);

double grid_node(const BurgersConfig& cfg, int i);

// u0(x) = e^{1/(x^2-1)}/2 on (-1,1), 0 elsewhere. Needs L >= 2.
GridFunction init_bump(const BurgersConfig& cfg);

// Tent of the given height on [-w, w]. Needs 0 < w < L/2.
GridFunction init_hat(const BurgersConfig& cfg, double height = 1.5, double half_width = 1.0);

// Multiplies mode k by e^{-nu*(2*pi*k/L)^2*h}.
GridFunction diffusion_subflow(const BurgersConfig& cfg, double h, const GridFunction& u);

// Advances u_t = -d/dx (kappa*u^2/2) by M = ceil(kappa*max|u|*h/(cfl_safety*dx))
// two-point-flux Lax-Wendroff substeps (at least one). Throws StudyError with
// diagnostics if a substep produces non-finite values.
GridFunction advection_subflow(const BurgersConfig& cfg, double h, const GridFunction& u);

double mass(const BurgersConfig& cfg, const GridFunction& u);  // sum u_i * dx

double scaled_l2_diff(const GridFunction& a, const GridFunction& b);  // sqrt(sum/N)

class BurgersProblem {
 public:
  using Scalar = double;
  using State = GridFunction;

  explicit BurgersProblem(const BurgersConfig& cfg) : cfg_(validated(cfg)) {}

  int ops() const { return 2; }

  State subflow(int ell, double h, const State& u) const {
    if (ell == 1) return diffusion_subflow(cfg_, h, u);
    if (ell == 2) return advection_subflow(cfg_, h, u);
    throw ValidationError("operator index out of range");
  }

  long double norm_diff(const State& a, const State& b) const {
    return scaled_l2_diff(a, b);
  }

  const BurgersConfig& config() const { return cfg_; }

 private:
  static BurgersConfig validated(const BurgersConfig& cfg) {
    validate(cfg);
    return cfg;
  }

  BurgersConfig cfg_;
};

struct StudyRow {
  double h = 0;
  double err_basic = 0;
  double order_basic = 0;  // log2(e(2h)/e(h)); NaN in the first row
  double const_basic = 0;  // err / h^3
  double err_partner = 0;
  double order_partner = 0;
  double const_partner = 0;
};

struct StudyResult {
  std::vector<StudyRow> rows;
  double est_over_true_at_smallest_h = 0;
  double max_refcheck_rel = 0;  // worst reference self-check, relative to the error
};

// One step from u0 at each h for both pair members, against a reference built
// by the basic scheme at fixed step h/256 (internally in extended precision,
// rows in parallel). A reference that moves by more than 1% of the error when
// recomputed at h/512 aborts with StudyError. h_list must be geometric,
// decreasing.
StudyResult local_order_study(const BurgersConfig& cfg, const MilnePair& pair,
                              const GridFunction& u0, const std::vector<double>& h_list);

// 0.0625 halving down to 0.000244140625.
std::vector<double> default_study_h_list();

// Parameters under which the study's h range is asymptotic on the bump datum.
BurgersConfig study_config();

struct ShockPreset {
  BurgersConfig cfg;
  StepController controller;
  double t_end = 0.3179;
  double h0 = 1e-3;
  double hat_half_width = 0.4;
};

// Strong advection over weak viscosity: the hat steepens into a shock by
// t_end and drives the controller to its floor.
ShockPreset shock_preset();

struct ShockRunResult {
  GridFunction u0;
  GridFunction u_final;
  StepTrace trace;
};

ShockRunResult adaptive_shock_run(const BurgersConfig& cfg, const MilnePair& pair,
                                  const StepController& controller, double t_end = 0.3179,
                                  double h0 = 0, double hat_half_width = 1.0);

// Order-2 pair derived once (deterministically) from strang-2 with a
// nonnegative 3-stage partner; cached.
const MilnePair& default_burgers_pair();

// CSV writers (header row, scientific, 17 significant digits).
void write_study_csv(const StudyResult& r, const std::filesystem::path& path);
void write_trace_csv(const StepTrace& t, const std::filesystem::path& path);
void write_snapshot_csv(const BurgersConfig& cfg, const GridFunction& u,
                        const std::filesystem::path& path);

}  // namespace splitkit
