#include "shockzoom/scenarios.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "shockzoom/error.hpp"

namespace shockzoom {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// log cosh(s), stable for large |s|.
double log_cosh(double s) {
  const double a = std::abs(s);
  return a + std::log1p(std::exp(-2.0 * a)) - std::log(2.0);
}

double sech2(double s) {
  const double c = std::cosh(s);
  return std::isfinite(c) ? 1.0 / (c * c) : 0.0;
}

// Ramp from `left` to `right` centered at c: mean - half tanh((x - c) / w).
struct Ramp {
  double left, right, c, w;
  double value(double x) const {
    return 0.5 * (left + right) - 0.5 * (left - right) * std::tanh((x - c) / w);
  }
  double slope(double x) const { return -0.5 * (left - right) / w * sech2((x - c) / w); }
  double primitive(double x) const {
    return 0.5 * (left + right) * x - 0.5 * (left - right) * w * log_cosh((x - c) / w);
  }
  // Ramp relative to its left state, for summing ramps.
  double excess(double x) const { return value(x) - left; }
};

double min_blowup(const SmoothData& d, const FluxModel& flux, Interval span, int samples) {
  double best = kInf;
  for (int k = 0; k <= samples; ++k) {
    best = std::min(best, blowup_time(d, flux, span.lo + span.length() * k / samples));
  }
  return best;
}

AuditEntry entry(std::string name, double margin) {
  return AuditEntry{std::move(name), 0.0, margin, margin >= 0.0};
}

// Scan step resolving a ramp of width w (or the formation data) for the
// Lax-Oleinik minimization.
double scan_step_for(double width) { return std::clamp(width / 20.0, 1e-4, 0.02); }

}  // namespace

GridFunction Scenario::sample(double x_left, double dx, std::size_t n) const {
  return GridFunction::sample(x_left, dx, n, initial);
}

RescaleFrame Scenario::frame(double eps) const {
  auto f = frame_kind == FrameKind::Type1 ? RescaleFrame::type1(eps, tau, xi)
                                          : RescaleFrame::type2(eps, tau, xi);
  if (kind == ScenarioKind::ShockFormation) f.u_center = formation.u_center;
  return f;
}

bool Scenario::valid() const {
  return std::all_of(validity.begin(), validity.end(), [](const AuditEntry& e) { return e.pass; });
}

Scenario theorem1_single(const FluxModel& flux, double u_minus, double u_plus, double width) {
  const ShockData shock = rankine_hugoniot(flux, u_minus, u_plus);
  require_lax(shock);
  if (width < 0.0) fail(ErrorKind::InvalidArgument, "ramp width must be >= 0");

  Scenario s{.id = "theorem1-single", .flux = flux};
  s.kind = ScenarioKind::SingleShock;
  s.frame_kind = FrameKind::Type1;
  s.tau = 1.0;
  s.xi = shock.lambda;
  s.u_minus = u_minus;
  s.u_star = 0.5 * (u_minus + u_plus);
  s.u_plus = u_plus;
  const ShockData at_singular{u_minus, u_plus, shock.lambda};
  s.pattern = [at_singular, tau = s.tau, xi = s.xi](double t, double x) {
    return single_shock(at_singular, t - tau, x - xi);
  };

  if (width == 0.0) {
    s.initial = [=](double x) { return x < 0.0 ? u_minus : u_plus; };
    s.reference = [shock](double t, double x) { return single_shock(shock, t, x); };
    s.validity.push_back(entry("lax", u_minus - u_plus));
    return s;
  }

  // Place the ramp so the shock sits at x = lambda when t = 1.
  auto build = [&](double center) {
    Ramp r{u_minus, u_plus, center, width};
    const double reach = 40.0 * width + std::abs(center);
    return SmoothData([r](double x) { return r.value(x); }, [r](double x) { return r.slope(x); },
                      {center - reach, center + reach}, {u_plus, u_minus},
                      [r](double x) { return r.primitive(x); });
  };
  const double step = scan_step_for(width);
  const double lam = shock.lambda;
  const double probe = EntropySolution(build(0.0), flux, step)
                           .locate_shock(s.tau, lam - 2.0 - 10.0 * width, lam + 2.0 + 10.0 * width);
  const double center = std::isfinite(probe) ? lam - probe : 0.0;
  auto data = build(center);
  s.smooth = data;
  Ramp r{u_minus, u_plus, center, width};
  s.initial = [r](double x) { return r.value(x); };
  auto solution = std::make_shared<EntropySolution>(data, flux, step);
  s.reference = [solution](double t, double x) { return (*solution)(t, x); };

  const double reach = 10.0 * width;
  s.validity.push_back(entry("lax", u_minus - u_plus));
  s.validity.push_back(entry("blowup_before_tau",
                             s.tau - min_blowup(data, flux, {center - reach, center + reach}, 400)));
  const double located = solution->locate_shock(s.tau, lam - 2.0, lam + 2.0);
  s.validity.push_back(entry("shock_through_singular_point", 1e-6 - std::abs(located - s.xi)));
  return s;
}

Scenario theorem1_merging(const FluxModel& flux, double u_minus, double u_star, double u_plus,
                          double width) {
  if (!(u_minus > u_star && u_star > u_plus)) {
    fail(ErrorKind::NotOrdered, "merging scenario needs u_minus > u_star > u_plus");
  }
  const double lambda1 = rankine_hugoniot(flux, u_minus, u_star).lambda;
  const double lambda2 = rankine_hugoniot(flux, u_star, u_plus).lambda;
  const ShockData merged = rankine_hugoniot(flux, u_minus, u_plus);

  Scenario s{.id = "theorem1-merging", .flux = flux};
  s.kind = ScenarioKind::MergingShocks;
  s.frame_kind = FrameKind::Type1;
  s.tau = 1.0;
  s.xi = 0.0;
  s.u_minus = u_minus;
  s.u_star = u_star;
  s.u_plus = u_plus;

  const double a1 = s.xi - lambda1 * s.tau;
  const double a2 = s.xi - lambda2 * s.tau;
  const double w = width > 0.0 ? width : (a2 - a1) / 20.0;
  const Ramp r1{u_minus, u_star, a1, w};
  const Ramp r2{u_star, u_plus, a2, w};
  auto value = [r1, r2](double x) { return r1.value(x) + r2.excess(x); };
  auto slope = [r1, r2](double x) { return r1.slope(x) + r2.slope(x); };
  auto primitive = [r1, r2](double x) {
    return r1.primitive(x) + r2.primitive(x) - r2.left * x;
  };
  const double reach = 40.0 * w + std::max(std::abs(a1), std::abs(a2));
  SmoothData data(value, slope, {-reach, reach}, {u_plus, u_minus}, primitive);
  s.smooth = data;
  s.initial = value;
  auto solution = std::make_shared<EntropySolution>(data, flux, scan_step_for(w));
  s.reference = [solution](double t, double x) { return (*solution)(t, x); };
  s.pattern = [flux, u_minus, u_star, u_plus, tau = s.tau, xi = s.xi](double t, double x) {
    return two_shock(flux, u_minus, u_star, u_plus, t - tau, x - xi);
  };

  s.validity.push_back(entry("ordered", std::min(u_minus - u_star, u_star - u_plus)));
  s.validity.push_back(entry("width_within_separation", (a2 - a1) / 20.0 * (1 + 1e-12) - w));
  // Both shocks must exist well before they meet.
  const double t_form = std::max(min_blowup(data, flux, {a1 - 10 * w, a1 + 10 * w}, 200),
                                 min_blowup(data, flux, {a2 - 10 * w, a2 + 10 * w}, 200));
  s.validity.push_back(entry("blowup_before_merge", 0.5 * s.tau - t_form));
  // After the merge a single shock at the merged speed.
  const double later = s.tau + 0.5;
  const double located = solution->locate_shock(later, -1.0 + merged.lambda * 0.5,
                                                1.0 + merged.lambda * 0.5);
  s.validity.push_back(
      entry("merged_shock_speed", 0.05 - std::abs(located - (s.xi + merged.lambda * 0.5))));
  return s;
}

Scenario theorem2_formation(const FluxModel& flux, double amplitude, double clamp, double tau,
                            double xi, double u_center) {
  if (!(amplitude > 0.0)) fail(ErrorKind::Degenerate, "formation amplitude must be positive");
  if (!(clamp > 0.0) || !(tau > 0.0)) {
    fail(ErrorKind::InvalidArgument, "formation scenario needs clamp > 0 and tau > 0");
  }
  Scenario s{.id = "theorem2-formation", .flux = flux};
  s.kind = ScenarioKind::ShockFormation;
  s.frame_kind = FrameKind::Type2;
  s.tau = tau;
  s.xi = xi;
  s.formation = FormationPoint{tau, xi, u_center, 0.0, 0.0, -6.0 * amplitude};

  // Foot y(u) of the characteristic that carries u to x = xi - A (u - u_c)^3 at tau.
  auto foot = [=](double u) {
    const double d = u - u_center;
    return xi - amplitude * d * d * d - tau * flux.df(u);
  };
  auto foot_slope = [=](double u) {
    const double d = u - u_center;
    return -3.0 * amplitude * d * d - tau * flux.d2f(u);
  };
  // y(u) is strictly decreasing; invert by Newton safeguarded with bisection.
  auto invert = [=](double y, double lo, double hi) {
    double u = 0.5 * (lo + hi);
    for (int it = 0; it < 200; ++it) {
      const double r = foot(u) - y;
      if (r > 0.0) lo = u; else hi = u;
      double next = u - r / foot_slope(u);
      if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
      if (std::abs(next - u) <= 1e-15 * (1.0 + std::abs(u))) return next;
      u = next;
    }
    return u;
  };
  // States at the clamp points bracket every value.
  double u_hi = u_center + 1.0, u_lo = u_center - 1.0;
  while (foot(u_hi) > xi - clamp) u_hi = u_center + 2.0 * (u_hi - u_center);
  while (foot(u_lo) < xi + clamp) u_lo = u_center - 2.0 * (u_center - u_lo);
  const double u_left = invert(xi - clamp, u_lo, u_hi);
  const double u_right = invert(xi + clamp, u_lo, u_hi);
  s.u_minus = u_left;
  s.u_star = u_center;
  s.u_plus = u_right;

  auto value = [=](double y) {
    if (y <= xi - clamp) return u_left;
    if (y >= xi + clamp) return u_right;
    return invert(y, u_right, u_left);
  };
  auto slope = [=](double y) {
    if (y <= xi - clamp || y >= xi + clamp) return 0.0;
    return 1.0 / foot_slope(value(y));
  };
  // U0(y) = u y - xi u + A (u - u_c)^4 / 4 + tau f(u) inside, linear outside.
  auto inner = [=](double y, double u) {
    const double d = u - u_center;
    return u * y - xi * u + 0.25 * amplitude * d * d * d * d + tau * flux.f(u);
  };
  auto primitive = [=](double y) {
    if (y <= xi - clamp) return inner(xi - clamp, u_left) + u_left * (y - (xi - clamp));
    if (y >= xi + clamp) return inner(xi + clamp, u_right) + u_right * (y - (xi + clamp));
    return inner(y, value(y));
  };
  SmoothData data(value, slope, {xi - clamp, xi + clamp}, {u_right, u_left}, primitive);
  s.smooth = data;
  s.initial = value;
  auto solution = std::make_shared<EntropySolution>(data, flux, 0.01);
  s.reference = [solution](double t, double x) { return (*solution)(t, x); };
  // Before tau the solution near the singular point follows the normalized cubic.
  const FrameFit fit = fit_frame_theorem2(s.formation, flux);
  s.pattern = [=](double t, double x) {
    if (t > tau) return (*solution)(t, x);
    return u_center + fit.c * z_value(fit.sigma * (t - tau), x - xi - fit.lambda * (t - tau));
  };

  const double y_star = foot(u_center);
  const double T_star = blowup_time(data, flux, y_star);
  s.validity.push_back(entry("blowup_at_tau", 1e-9 * tau - std::abs(T_star - tau)));
  const double h = 1e-3 * clamp;
  const double second = blowup_time(data, flux, y_star + h) - 2.0 * T_star +
                        blowup_time(data, flux, y_star - h);
  s.validity.push_back(entry("blowup_strict_minimum", second));
  double others = kInf;
  for (int k = 0; k <= 400; ++k) {
    const double y = xi - clamp + 2.0 * clamp * k / 400.0;
    if (std::abs(y - y_star) > 10.0 * h) others = std::min(others, blowup_time(data, flux, y));
  }
  s.validity.push_back(entry("blowup_minimized_at_foot", others - T_star));
  return s;
}

Scenario make_scenario(const std::string& id, const FluxModel& flux,
                       const std::vector<double>& p) {
  auto arg = [&](std::size_t i, double fallback) { return i < p.size() ? p[i] : fallback; };
  if (id == "theorem1-single") return theorem1_single(flux, arg(0, 1.0), arg(1, -1.0), arg(2, 0.5));
  if (id == "theorem1-merging") {
    return theorem1_merging(flux, arg(0, 1.0), arg(1, 0.0), arg(2, -1.0), arg(3, 0.0));
  }
  if (id == "theorem2-formation") return theorem2_formation(flux, arg(0, 1.0), arg(1, 3.0));
  fail(ErrorKind::Config, "unknown scenario '" + id + "'");
}

}  // namespace shockzoom
