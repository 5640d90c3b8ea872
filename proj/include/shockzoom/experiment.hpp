#pragma once

#include <optional>
#include <string>
#include <vector>

#include "shockzoom/profiles.hpp"
#include "shockzoom/rescale.hpp"
#include "shockzoom/scenarios.hpp"
#include "shockzoom/solver.hpp"

namespace shockzoom {

/// Settings of a zoom sweep: the zoomed window, the rescaled mesh shared by the
/// physical solves and the limit construction, and the limit parameters.
struct ZoomSweepOptions {
  Window window{{-5.0, 5.0}, {-5.0, 5.0}, 0.1};
  /// Physical mesh is eps^beta * dx_zoom, so every eps sees the same zoomed mesh.
  double dx_zoom = 0.1;
  /// Physical half-width about xi; 0 derives it from where the data settle.
  double half_width = 0.0;
  /// Bound on the fitted (t, x) shift; 0 compares without a fit.
  double shift_bound = 2.0;
  FluxScheme scheme = FluxScheme::Central;
  KernelMode kernel = KernelMode::Parallel;
  double cfl_advection = 0.5;
  double diffusion_number = 0.45;
  /// Start times of the merging runs behind W (deepest last).
  std::vector<double> merge_taus{-20.0, -30.0, -40.0};
  /// Truncation levels behind Z (largest last).
  std::vector<int> z_levels{16, 32, 64};
  /// NotConverged threshold for the Z levels.
  double z_tolerance = 0.05;
  /// Keep the zoomed field of every eps in the report.
  bool keep_fields = false;
};

/// The limit pattern in zoomed variables.
struct ZoomLimit {
  std::string kind;
  Evaluator field;
  /// Local shock states for traveling-wave limits.
  double u_left = 0.0;
  double u_right = 0.0;
  std::optional<CauchyReport> cauchy;
  std::optional<ZConvergenceReport> z_report;
};

/// Traveling wave through the local shock states, merging W, or eternal Z,
/// depending on the scenario kind.
ZoomLimit zoom_limit(const Scenario& scenario, const ZoomSweepOptions& options);

/// Physical half-width of the solve domain: where the data settle to their end
/// states, plus the distance information travels by the last window time.
double solve_half_width(const Scenario& scenario, double eps, const ZoomSweepOptions& options);

/// Solves with viscosity eps on the mesh matched to dx_zoom and samples the
/// zoomed window.
Trajectory zoomed_solution(const Scenario& scenario, double eps, const ZoomSweepOptions& options);

struct SweepRow {
  double eps = 0.0;
  double sup_error = 0.0;
  double l1_error = 0.0;
  double t_shift = 0.0;
  double x_shift = 0.0;
  std::size_t nodes = 0;
};

struct SweepReport {
  std::vector<SweepRow> rows;
  std::optional<RateFit> sup_rate;
  std::optional<RateFit> l1_rate;
  bool sup_decreasing = false;
  bool l1_decreasing = false;
  /// Zoomed fields in eps order when requested.
  std::vector<Trajectory> fields;
};

/// Zoomed errors against the limit for every eps (parallel over eps).
SweepReport zoom_sweep(const Scenario& scenario, const std::vector<double>& eps_list,
                       const ZoomSweepOptions& options, const ZoomLimit& limit);

/// Throws Config unless the list is strictly decreasing and positive.
void validate_eps_list(const std::vector<double>& eps_list, const std::string& field);

bool strictly_decreasing(const std::vector<double>& values);

}  // namespace shockzoom
