#include "shockzoom/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <sstream>

#include "shockzoom/error.hpp"
#include "shockzoom/kernels.hpp"

namespace shockzoom {

namespace {

Window widened(const Window& w, double pad) {
  return Window{{w.t.lo - pad, w.t.hi + pad}, {w.x.lo - pad, w.x.hi + pad}, w.dt, {}};
}

std::shared_ptr<const TrajectoryField> field_of(Trajectory snaps) {
  return std::make_shared<const TrajectoryField>(std::move(snaps));
}

// Distance from xi beyond which the data sit within tol of their end states.
double settle_distance(const Scenario& s, double tol) {
  const double step = 0.01;
  const double reach = 200.0;
  double left = 0.0;
  double right = 0.0;
  for (double d = reach; d > 0.0; d -= step) {
    if (std::abs(s.initial(s.xi - d) - s.u_minus) > tol) {
      left = d;
      break;
    }
  }
  for (double d = reach; d > 0.0; d -= step) {
    if (std::abs(s.initial(s.xi + d) - s.u_plus) > tol) {
      right = d;
      break;
    }
  }
  return std::max(left, right) + step;
}

double data_speed(const Scenario& s) {
  const double lo = std::min({s.u_minus, s.u_star, s.u_plus});
  const double hi = std::max({s.u_minus, s.u_star, s.u_plus});
  if (s.kind == ScenarioKind::ShockFormation) {
    const double span = settle_distance(s, 0.0);
    const auto samples = GridFunction::linspace(s.xi - span, s.xi + span, 2001, s.initial);
    return s.flux.max_speed(samples.min(), samples.max());
  }
  return s.flux.max_speed(lo, hi);
}

}  // namespace

bool strictly_decreasing(const std::vector<double>& values) {
  for (std::size_t k = 1; k < values.size(); ++k) {
    if (!(values[k] < values[k - 1])) return false;
  }
  return true;
}

void validate_eps_list(const std::vector<double>& eps_list, const std::string& field) {
  if (eps_list.empty()) fail(ErrorKind::Config, field + ": empty list");
  for (std::size_t k = 0; k < eps_list.size(); ++k) {
    if (!(eps_list[k] > 0.0)) {
      fail(ErrorKind::Config, field + ": entries must be positive");
    }
    if (k > 0 && eps_list[k] == eps_list[k - 1]) {
      fail(ErrorKind::Config, field + ": duplicate entry " + std::to_string(eps_list[k]));
    }
    if (k > 0 && eps_list[k] > eps_list[k - 1]) {
      fail(ErrorKind::Config, field + ": entries must be strictly decreasing");
    }
  }
}

ZoomLimit zoom_limit(const Scenario& scenario, const ZoomSweepOptions& options) {
  ZoomLimit out;
  const Window window = widened(options.window, options.shift_bound);
  switch (scenario.kind) {
    case ScenarioKind::SingleShock: {
      const double h = 1e-9 * (1.0 + std::abs(scenario.xi));
      out.u_left = scenario.reference(scenario.tau, scenario.xi - h);
      out.u_right = scenario.reference(scenario.tau, scenario.xi + h);
      const double reach =
          std::max(std::abs(window.x.lo), std::abs(window.x.hi)) + 10.0 * std::abs(window.t.hi);
      auto wave = std::make_shared<const TravelingWave>(
          traveling_wave(scenario.flux, out.u_left, out.u_right, reach + 10.0, 0.01));
      out.kind = "traveling-wave";
      out.field = [wave](double t, double x) { return (*wave)(x - wave->shock().lambda * t); };
      break;
    }
    case ScenarioKind::MergingShocks: {
      const auto triple = make_merging_triple(scenario.flux, scenario.u_minus, scenario.u_star,
                                              scenario.u_plus);
      MergingOptions mo;
      mo.dx = options.dx_zoom;
      mo.scheme = options.scheme;
      mo.kernel = options.kernel;
      auto w = merging_W(triple, scenario.flux, options.merge_taus, window, mo);
      out.kind = "merging-W";
      out.cauchy = w.cauchy;
      auto field = field_of(std::move(w.trajectory));
      out.field = [field](double t, double x) { return (*field)(t, x); };
      break;
    }
    case ScenarioKind::ShockFormation: {
      EternalZOptions zo;
      zo.dx = options.dx_zoom;
      zo.scheme = options.scheme;
      zo.kernel = options.kernel;
      zo.cfl_advection = options.cfl_advection;
      zo.diffusion_number = options.diffusion_number;
      auto z = eternal_Z_limit(options.z_levels, window, options.z_tolerance, zo);
      out.kind = "eternal-Z";
      out.z_report = z.report;
      auto field = field_of(std::move(z.limit.trajectory));
      out.field = [field](double t, double x) { return (*field)(t, x); };
      break;
    }
  }
  return out;
}

double solve_half_width(const Scenario& scenario, double eps, const ZoomSweepOptions& options) {
  if (options.half_width > 0.0) return options.half_width;
  const RescaleFrame frame = scenario.frame(eps);
  const double t_end = frame.physical_t(options.window.t.hi);
  const double window_reach = std::max(std::abs(frame.physical_x(options.window.x.lo) - scenario.xi),
                                       std::abs(frame.physical_x(options.window.x.hi) - scenario.xi));
  return settle_distance(scenario, 1e-8) + data_speed(scenario) * t_end +
         10.0 * std::sqrt(eps * t_end) + window_reach;
}

Trajectory zoomed_solution(const Scenario& scenario, double eps, const ZoomSweepOptions& options) {
  if (!(eps > 0.0)) fail(ErrorKind::InvalidArgument, "eps must be positive");
  if (!(options.dx_zoom > 0.0)) fail(ErrorKind::InvalidArgument, "dx_zoom must be positive");
  const RescaleFrame frame = scenario.frame(eps);
  const Window& w = options.window;
  const double dx = std::pow(eps, frame.beta) * options.dx_zoom;
  const double half = solve_half_width(scenario, eps, options);
  const auto k = static_cast<std::size_t>(std::ceil(half / dx));
  const GridFunction initial = scenario.sample(scenario.xi - static_cast<double>(k) * dx, dx, 2 * k + 1);

  const std::vector<double> zoom_times = w.snapshot_times();
  std::vector<double> times;
  times.reserve(zoom_times.size());
  for (double t : zoom_times) times.push_back(frame.physical_t(t));
  if (!(times.front() >= 0.0)) {
    fail(ErrorKind::InvalidArgument, "zoom window starts before t = 0 at this eps");
  }

  SolverConfig cfg;
  cfg.viscosity = eps;
  cfg.boundary = clamp_to_ends(initial);
  cfg.flux_scheme = options.scheme;
  cfg.kernel = options.kernel;
  cfg.cfl_advection = options.cfl_advection;
  cfg.diffusion_number = options.diffusion_number;
  SolveOptions so;
  const double pad = 2.0 * dx;
  so.crop = Interval{frame.physical_x(w.x.lo) - pad, frame.physical_x(w.x.hi) + pad};
  Trajectory phys = solve(initial, scenario.flux, cfg, 0.0, times.back(), times, so);
  // Land exactly on the requested times so the time interpolation is trivial.
  for (std::size_t i = 0; i < phys.size(); ++i) phys[i].t = times[i];

  const TrajectoryField field(std::move(phys));
  const auto nx = static_cast<std::size_t>(std::llround(w.x.length() / options.dx_zoom)) + 1;
  const GridFunction templ(w.x.lo, options.dx_zoom, std::vector<double>(nx, 0.0));
  const Evaluator u = [&field](double t, double x) { return field(t, x); };
  return zoom_sample(u, frame, zoom_times, templ);
}

SweepReport zoom_sweep(const Scenario& scenario, const std::vector<double>& eps_list,
                       const ZoomSweepOptions& options, const ZoomLimit& limit) {
  validate_eps_list(eps_list, "eps");
  SweepReport report;
  report.rows.resize(eps_list.size());
  if (options.keep_fields) report.fields.resize(eps_list.size());
  ZoomSweepOptions member = options;
  if (eps_list.size() > 1) member.kernel = KernelMode::Serial;
  kernels::run_members(eps_list.size(), [&](std::size_t i) {
    const double eps = eps_list[i];
    const Trajectory zoomed = zoomed_solution(scenario, eps, member);
    SweepRow row;
    row.eps = eps;
    row.nodes = static_cast<std::size_t>(
        2.0 * std::ceil(solve_half_width(scenario, eps, member) /
                        (std::pow(eps, scenario.frame(eps).beta) * member.dx_zoom)) + 1.0);
    if (options.shift_bound > 0.0) {
      const SpacetimeFit fit = fit_spacetime_shift(zoomed, limit.field, options.shift_bound);
      row.sup_error = fit.error.sup_error;
      row.l1_error = fit.error.l1_error;
      row.t_shift = fit.t_shift;
      row.x_shift = fit.x_shift;
    } else {
      const WindowError e = window_error(zoomed, limit.field);
      row.sup_error = e.sup_error;
      row.l1_error = e.l1_error;
    }
    report.rows[i] = row;
    if (options.keep_fields) report.fields[i] = zoomed;
  });
  std::vector<double> sup, l1;
  for (const auto& r : report.rows) sup.push_back(r.sup_error), l1.push_back(r.l1_error);
  report.sup_decreasing = strictly_decreasing(sup);
  report.l1_decreasing = strictly_decreasing(l1);
  if (eps_list.size() >= 3) {
    try {
      report.sup_rate = convergence_rate(eps_list, sup);
      report.l1_rate = convergence_rate(eps_list, l1);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::NonPositive) throw;
    }
  }
  return report;
}

}  // namespace shockzoom
