#pragma once

#include <functional>
#include <optional>
#include <span>
#include <variant>
#include <vector>

#include "shockzoom/flux.hpp"
#include "shockzoom/grid.hpp"
#include "shockzoom/kernels.hpp"

namespace shockzoom {

using kernels::FluxScheme;

/// Periodic grids carry the closing node twice: values.front() == values.back().
struct Periodic {};

/// Dirichlet end values held fixed in time.
struct Clamped {
  double left = 0.0;
  double right = 0.0;
};

/// Dirichlet end values prescribed as functions of time.
struct DirichletInTime {
  std::function<double(double)> left;
  std::function<double(double)> right;
};

using Boundary = std::variant<Periodic, Clamped, DirichletInTime>;

enum class KernelMode { Serial, Parallel };

struct SolverConfig {
  double viscosity = 1.0;
  Boundary boundary = Clamped{};
  double cfl_advection = 0.5;
  double diffusion_number = 0.45;
  FluxScheme flux_scheme = FluxScheme::LocalLaxFriedrichs;
  KernelMode kernel = KernelMode::Parallel;
};

/// Largest step honoring cfl * dx / max|f'|, diffusion_number * dx^2 / eps and
/// the forward-Euler positivity bound dt (max|f'| / dx + 2 eps / dx^2) <= 1,
/// which keeps each Heun stage monotone.
double stable_dt(const GridFunction& state, const FluxModel& flux, const SolverConfig& cfg);

/// Clamped boundary whose values are the end values of `state`.
Clamped clamp_to_ends(const GridFunction& state);

/// One Heun (SSP-RK2) step from time t to t + dt. Throws Instability when the
/// result is non-finite or leaves ten times the initial range.
GridFunction step(const GridFunction& state, const FluxModel& flux, const SolverConfig& cfg,
                  double dt, double t = 0.0);

struct SolveOptions {
  /// Store only nodes inside [lo, hi] in each snapshot.
  std::optional<Interval> crop;
  /// Called after every step with (t, state); used by audits that need the
  /// whole history without storing it.
  std::function<void(double, const GridFunction&)> observer;
};

/// Integrates from t_start to t_final, landing exactly on every requested
/// snapshot time by shortening the step before it.
Trajectory solve(const GridFunction& initial, const FluxModel& flux, const SolverConfig& cfg,
                 double t_start, double t_final, std::span<const double> snapshot_times,
                 const SolveOptions& options = {});

/// solve starting at t = 0.
Trajectory solve(const GridFunction& initial, const FluxModel& flux, const SolverConfig& cfg,
                 double t_final, std::span<const double> snapshot_times);

struct OleinikEntry {
  double t = 0.0;
  double max_slope = 0.0;
  double bound = 0.0;
  double margin = 0.0;  // bound + tolerance - max_slope; negative is a violation
};

struct OleinikReport {
  std::vector<OleinikEntry> entries;
  int violations = 0;
  double worst_margin = 0.0;
};

/// Checks max_forward_slope <= 1/(c1 t) + tolerance at every snapshot.
OleinikReport oleinik_check(const Trajectory& snapshots, double c1, double tolerance);

}  // namespace shockzoom
