#include "shockzoom/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "shockzoom/error.hpp"

namespace shockzoom {

namespace {

bool is_periodic(const SolverConfig& cfg) {
  return std::holds_alternative<Periodic>(cfg.boundary);
}

struct Band {
  double lo;
  double hi;
};

Band allowed_band(const GridFunction& state) {
  const double lo = state.min();
  const double hi = state.max();
  const double scale = std::max(hi - lo, 1e-8 * (1.0 + std::max(std::abs(lo), std::abs(hi))));
  return {lo - 10.0 * scale, hi + 10.0 * scale};
}

void check_state(std::span<const double> v, const Band& band, double t) {
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!std::isfinite(v[i]) || v[i] < band.lo || v[i] > band.hi) {
      std::ostringstream os;
      os << "solution left [" << band.lo << ", " << band.hi << "] at node " << i << ", t = " << t
         << " (value " << v[i] << ")";
      fail(ErrorKind::Instability, os.str());
    }
  }
}

// Reusable buffers for Heun stepping.
class Stepper {
 public:
  Stepper(const FluxModel& flux, const SolverConfig& cfg, std::size_t n, double dx)
      : flux_(flux), cfg_(cfg), stage_(n), rate_(n), node_flux_(n), node_speed_(n), face_(n) {
    args_.flux = &flux_;
    args_.viscosity = cfg.viscosity;
    args_.dx = dx;
    args_.scheme = cfg.flux_scheme;
    args_.periodic = is_periodic(cfg);
  }

  void advance(std::span<double> u, double t, double dt) {
    op(u, rate_);
    combine(u, u, rate_, 0.0, 1.0, dt, stage_);
    set_boundary(stage_, t + dt);
    op(stage_, rate_);
    combine(u, stage_, rate_, 0.5, 0.5, dt, u);
    set_boundary(u, t + dt);
  }

  void set_boundary(std::span<double> u, double t) const {
    std::visit(
        [&](const auto& bc) {
          using T = std::decay_t<decltype(bc)>;
          if constexpr (std::is_same_v<T, Periodic>) {
            u.back() = u.front();
          } else if constexpr (std::is_same_v<T, Clamped>) {
            u.front() = bc.left;
            u.back() = bc.right;
          } else {
            u.front() = bc.left(t);
            u.back() = bc.right(t);
          }
        },
        cfg_.boundary);
  }

 private:
  void op(std::span<const double> u, std::span<double> out) {
    const kernels::Workspace ws{node_flux_, node_speed_, face_};
    if (cfg_.kernel == KernelMode::Serial) {
      kernels::apply_operator_serial(u, out, args_, ws);
    } else {
      kernels::apply_operator_parallel(u, out, args_, ws);
    }
  }

  void combine(std::span<const double> x, std::span<const double> y, std::span<const double> r,
               double a, double b, double dt, std::span<double> out) const {
    if (cfg_.kernel == KernelMode::Serial) {
      kernels::combine_serial(x, y, r, a, b, dt, out);
    } else {
      kernels::combine_parallel(x, y, r, a, b, dt, out);
    }
  }

  const FluxModel& flux_;
  const SolverConfig& cfg_;
  kernels::OperatorArgs args_;
  std::vector<double> stage_, rate_, node_flux_, node_speed_, face_;
};

void validate(const SolverConfig& cfg) {
  if (!(cfg.viscosity >= 0.0)) fail(ErrorKind::InvalidArgument, "viscosity must be >= 0");
  if (!(cfg.cfl_advection > 0.0 && cfg.cfl_advection <= 1.0)) {
    fail(ErrorKind::InvalidArgument, "cfl_advection must lie in (0, 1]");
  }
  if (!(cfg.diffusion_number > 0.0 && cfg.diffusion_number < 0.5)) {
    fail(ErrorKind::InvalidArgument, "diffusion_number must lie in (0, 0.5)");
  }
}

}  // namespace

double stable_dt(const GridFunction& state, const FluxModel& flux, const SolverConfig& cfg) {
  const double dx = state.dx();
  const double speed = flux.max_speed(state.min(), state.max());
  double dt = std::numeric_limits<double>::infinity();
  if (speed > 0.0) dt = std::min(dt, cfg.cfl_advection * dx / speed);
  if (cfg.viscosity > 0.0) dt = std::min(dt, cfg.diffusion_number * dx * dx / cfg.viscosity);
  const double rate = speed / dx + 2.0 * cfg.viscosity / (dx * dx);
  if (rate > 0.0) dt = std::min(dt, 1.0 / rate);
  return dt;
}

Clamped clamp_to_ends(const GridFunction& state) {
  return Clamped{state[0], state[state.size() - 1]};
}

GridFunction step(const GridFunction& state, const FluxModel& flux, const SolverConfig& cfg,
                  double dt, double t) {
  validate(cfg);
  if (!(dt > 0.0)) fail(ErrorKind::InvalidArgument, "dt must be positive");
  if (is_periodic(cfg) && state[0] != state[state.size() - 1]) {
    fail(ErrorKind::InvalidArgument, "periodic state must repeat its first node at the end");
  }
  const Band band = allowed_band(state);
  GridFunction next = state;
  Stepper stepper(flux, cfg, state.size(), state.dx());
  stepper.advance(next.values(), t, dt);
  check_state(next.values(), band, t + dt);
  return next;
}

Trajectory solve(const GridFunction& initial, const FluxModel& flux, const SolverConfig& cfg,
                 double t_start, double t_final, std::span<const double> snapshot_times,
                 const SolveOptions& options) {
  validate(cfg);
  if (!(t_final >= t_start)) fail(ErrorKind::InvalidArgument, "t_final precedes t_start");
  if (!std::is_sorted(snapshot_times.begin(), snapshot_times.end())) {
    fail(ErrorKind::InvalidArgument, "snapshot times must be sorted");
  }
  for (double ts : snapshot_times) {
    if (ts < t_start || ts > t_final) {
      fail(ErrorKind::InvalidArgument, "snapshot time outside [t_start, t_final]");
    }
  }
  if (is_periodic(cfg) && initial[0] != initial[initial.size() - 1]) {
    fail(ErrorKind::InvalidArgument, "periodic state must repeat its first node at the end");
  }

  auto store = [&](Trajectory& out, double t, const GridFunction& u) {
    if (options.crop) {
      out.push_back({t, u.crop(options.crop->lo, options.crop->hi)});
    } else {
      out.push_back({t, u});
    }
  };

  const Band band = allowed_band(initial);
  GridFunction u = initial;
  Stepper stepper(flux, cfg, u.size(), u.dx());

  Trajectory out;
  out.reserve(snapshot_times.size());
  double t = t_start;
  std::size_t next = 0;
  // Snapshots at the start time hold the data as given, before boundary values apply.
  while (next < snapshot_times.size() && snapshot_times[next] <= t) store(out, t, u), ++next;
  stepper.set_boundary(u.values(), t_start);

  // Stability limits depend on the range, which the maximum principle keeps
  // inside the initial one up to the band check; recompute periodically.
  double dt_max = stable_dt(u, flux, cfg);
  long count = 0;
  const double t_end = t_final;
  while (t < t_end) {
    const double target = next < snapshot_times.size() ? snapshot_times[next] : t_end;
    double dt = dt_max;
    bool land = false;
    if (t + dt >= target - 1e-12 * std::max(1.0, std::abs(target))) {
      dt = target - t;
      land = true;
    }
    if (dt > 0.0) stepper.advance(u.values(), t, dt);
    t = land ? target : t + dt;
    ++count;
    if (options.observer) options.observer(t, u);
    if (count % 64 == 0 || land) {
      check_state(u.values(), band, t);
      dt_max = stable_dt(u, flux, cfg);
    }
    while (next < snapshot_times.size() && snapshot_times[next] <= t) store(out, t, u), ++next;
  }
  check_state(u.values(), band, t);
  while (next < snapshot_times.size()) store(out, t, u), ++next;
  return out;
}

Trajectory solve(const GridFunction& initial, const FluxModel& flux, const SolverConfig& cfg,
                 double t_final, std::span<const double> snapshot_times) {
  return solve(initial, flux, cfg, 0.0, t_final, snapshot_times, {});
}

OleinikReport oleinik_check(const Trajectory& snapshots, double c1, double tolerance) {
  OleinikReport report;
  report.worst_margin = std::numeric_limits<double>::infinity();
  for (const auto& snap : snapshots) {
    if (!(snap.t > 0.0)) fail(ErrorKind::InvalidArgument, "Oleinik bound needs t > 0");
    OleinikEntry e;
    e.t = snap.t;
    e.max_slope = max_forward_slope(snap.u);
    e.bound = 1.0 / (c1 * snap.t);
    e.margin = e.bound + tolerance - e.max_slope;
    if (e.margin < 0.0) ++report.violations;
    report.worst_margin = std::min(report.worst_margin, e.margin);
    report.entries.push_back(e);
  }
  return report;
}

}  // namespace shockzoom
