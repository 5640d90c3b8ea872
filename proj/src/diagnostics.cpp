#include "shockzoom/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "shockzoom/error.hpp"
#include "shockzoom/kernels.hpp"
#include "shockzoom/profiles.hpp"

namespace shockzoom {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// max over x1 < x2 of u(x2) - u(x1).
double max_rise(std::span<const double> v) {
  double rise = -kInf;
  double lowest = v[0];
  for (std::size_t i = 1; i < v.size(); ++i) {
    rise = std::max(rise, v[i] - lowest);
    lowest = std::min(lowest, v[i]);
  }
  return rise;
}

}  // namespace

WCurve w_curve(const GridFunction& state, const FluxModel& flux) {
  const std::size_t n = state.size();
  if (n < 3) fail(ErrorKind::InvalidArgument, "w_curve needs at least three nodes");
  const double dx = state.dx();
  WCurve c;
  c.u.assign(state.values().begin(), state.values().end());
  c.w.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    double ux;
    if (i == 0) {
      ux = (-3.0 * state[0] + 4.0 * state[1] - state[2]) / (2.0 * dx);
    } else if (i + 1 == n) {
      ux = (3.0 * state[n - 1] - 4.0 * state[n - 2] + state[n - 3]) / (2.0 * dx);
    } else {
      ux = (state[i + 1] - state[i - 1]) / (2.0 * dx);
    }
    c.w[i] = flux.f(state[i]) - ux;
  }
  return c;
}

double strip_deviation(const WCurve& curve, const AffineMap& chord, Interval u_range) {
  double worst = 0.0;
  for (std::size_t i = 0; i < curve.u.size(); ++i) {
    if (!u_range.contains(curve.u[i])) continue;
    worst = std::max(worst, std::abs(curve.w[i] - chord(curve.u[i])));
  }
  return worst;
}

double omega_margin(const FluxModel& flux, double u_minus, double u_plus, double delta1, double u,
                    double w, double hull_slack) {
  const double lo = u_plus - delta1;
  const double hi = u_minus + delta1;
  const AffineMap upper = chord(flux, hi, lo);
  double margin = std::min(u - lo, hi - u);
  margin = std::min(margin, w - (flux.f(u) - delta1 - hull_slack));
  margin = std::min(margin, upper(u) + delta1 - w);
  return margin;
}

OmegaReport omega_membership(const WCurve& curve, const FluxModel& flux, double u_minus,
                             double u_plus, double delta1, double hull_slack) {
  if (!(u_minus > u_plus)) fail(ErrorKind::NotLax, "omega_membership needs u_minus > u_plus");
  OmegaReport r;
  r.worst_margin = kInf;
  for (std::size_t i = 0; i < curve.u.size(); ++i) {
    const double m = omega_margin(flux, u_minus, u_plus, delta1, curve.u[i], curve.w[i], hull_slack);
    r.worst_margin = std::min(r.worst_margin, m);
    if (m >= 0.0) ++r.inside; else ++r.outside;
  }
  return r;
}

FitResult lemma31_check(const GridFunction& state, const FluxModel& flux, double u_minus,
                        double u_plus, double delta) {
  if (!(u_minus > u_plus)) fail(ErrorKind::NotLax, "lemma31_check needs u_minus > u_plus");
  const double mid = 0.5 * (u_minus + u_plus);
  const double straddle = std::min(delta, 0.25 * (u_minus - u_plus));
  if (!(state.min() < mid - straddle && state.max() > mid + straddle)) {
    fail(ErrorKind::NoCrossing, "state does not straddle the midpoint");
  }
  const double dev = strip_deviation(w_curve(state, flux), chord(flux, u_minus, u_plus),
                                     {u_plus, u_minus});
  if (dev > delta) {
    std::ostringstream os;
    os << "strip deviation " << dev << " exceeds delta = " << delta;
    fail(ErrorKind::InvalidArgument, os.str());
  }
  const double reach = std::max(std::abs(state.x_left()), std::abs(state.x_right())) +
                       (state.x_right() - state.x_left());
  const auto tw = traveling_wave(flux, u_minus, u_plus, reach, std::min(state.dx(), 0.05));
  return fit_shift(state, [&](double x) { return tw(x); }, mid);
}

PhaseTimes phase_times(double M, double m, double a, double b, double c1, double delta1,
                       double u_minus, double u_plus) {
  if (!(M > m) || !(b > a) || !(c1 > 0.0) || !(delta1 > 0.0 && delta1 <= 1.0)) {
    fail(ErrorKind::InvalidArgument, "phase_times needs M > m, b > a, c1 > 0, 0 < delta1 <= 1");
  }
  const double area = 8.0 * (M - m) * (b - a);
  PhaseTimes t;
  t.T1 = area / (c1 * delta1 * delta1);
  const double spread = u_minus - u_plus + 2.0 * delta1;
  t.T2 = std::max(1.0 / (c1 * delta1),
                  (area + 8.0 * c1 + spread * spread * c1) / (2.0 * c1 * delta1 * delta1));
  return t;
}

PhaseReport phase_audit(const GridFunction& initial, const FluxModel& flux, const PhaseSetup& s,
                        const SolverConfig& cfg) {
  if (!(s.delta1 >= 2.0 * s.delta0 && s.delta1 <= 1.0)) {
    fail(ErrorKind::InvalidArgument, "phase_audit needs 2 delta0 <= delta1 <= 1");
  }
  for (std::size_t i = 0; i < initial.size(); ++i) {
    const double x = initial.x(i);
    const double u = initial[i];
    const bool ok = u >= s.m && u <= s.M &&
                    (x > s.a || std::abs(u - s.u_minus) <= s.delta0) &&
                    (x < s.b || std::abs(u - s.u_plus) <= s.delta0);
    if (!ok) {
      std::ostringstream os;
      os << "initial data violate the box conditions at x = " << x << " (u = " << u << ")";
      fail(ErrorKind::InvalidArgument, os.str());
    }
  }
  PhaseReport r;
  r.c1 = kInf;
  for (int k = 0; k <= 256; ++k) r.c1 = std::min(r.c1, flux.d2f(s.m + (s.M - s.m) * k / 256.0));
  r.times = phase_times(s.M, s.m, s.a, s.b, r.c1, s.delta1, s.u_minus, s.u_plus);

  AuditEntry range{"range", 0.0, kInf, true};
  AuditEntry adec{"almost_monotone", 0.0, kInf, true};
  AuditEntry omega{"omega", 0.0, kInf, true};
  auto track = [](AuditEntry& e, double t, double margin) {
    if (margin < e.margin) e.margin = margin, e.t = t;
  };
  SolveOptions options;
  options.observer = [&](double t, const GridFunction& u) {
    if (t < r.times.T1) return;
    track(range, t, std::min(u.min() - (s.u_plus - s.delta1), (s.u_minus + s.delta1) - u.max()));
    track(adec, t, 2.0 * s.delta1 - max_rise(u.values()));
    if (t > r.times.T2) {
      track(omega, t,
            omega_membership(w_curve(u, flux), flux, s.u_minus, s.u_plus, s.delta1).worst_margin);
    }
  };
  SolverConfig local = cfg;
  local.viscosity = 1.0;
  const double t_end = s.t_end_factor * r.times.T2;
  const std::vector<double> times{t_end};
  solve(initial, flux, local, 0.0, t_end, times, options);

  r.entries = {range, adec, omega};
  r.all_pass = true;
  for (auto& e : r.entries) {
    e.pass = e.margin >= -s.tolerance;
    r.all_pass = r.all_pass && e.pass;
  }
  return r;
}

KuznetsovReport kuznetsov_audit(const GridFunction& initial, const FluxModel& flux,
                                const std::vector<double>& eps_list, double t_check,
                                const std::function<double(double)>& reference,
                                const SolverConfig& cfg, Interval lipschitz) {
  if (eps_list.size() < 3) fail(ErrorKind::InvalidArgument, "kuznetsov_audit needs >= 3 eps");
  for (double e : eps_list) {
    if (!(e > 0.0)) fail(ErrorKind::NonPositive, "eps must be positive");
  }
  const std::size_t n = eps_list.size();
  std::vector<GridFunction> finals(n);
  const std::vector<double> times{t_check};
  kernels::run_members(n, [&](std::size_t k) {
    SolverConfig local = cfg;
    local.viscosity = eps_list[k];
    if (n > 1) local.kernel = KernelMode::Serial;
    finals[k] = solve(initial, flux, local, t_check, times).back().u;
  });

  KuznetsovReport r;
  std::vector<double> errs(n);
  for (std::size_t k = 0; k < n; ++k) {
    const auto& u = finals[k];
    const std::size_t m = u.size();
    double l1 = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      const double e = std::abs(u[i] - reference(u.x(i)));
      l1 += (i == 0 || i + 1 == m) ? 0.5 * e : e;
    }
    errs[k] = l1 * u.dx();
    r.c_star = std::max(r.c_star, errs[k] / std::sqrt(eps_list[k]));
  }
  r.rate = convergence_rate(eps_list, errs);
  r.pointwise_pass = true;
  for (std::size_t k = 0; k < n; ++k) {
    KuznetsovRow row;
    row.eps = eps_list[k];
    row.l1_error = errs[k];
    row.pointwise_bound = 2.0 * r.c_star * std::pow(eps_list[k], 1.0 / 6.0);
    const double gap = std::cbrt(eps_list[k]);
    const auto& u = finals[k];
    for (std::size_t i = 0; i < u.size(); ++i) {
      const double x = u.x(i);
      if (x < lipschitz.lo + gap || x > lipschitz.hi - gap) continue;
      row.pointwise_error = std::max(row.pointwise_error, std::abs(u[i] - reference(x)));
    }
    if (row.pointwise_error > row.pointwise_bound) r.pointwise_pass = false;
    r.rows.push_back(row);
  }
  return r;
}

}  // namespace shockzoom
