#include "shockzoom/profiles.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "shockzoom/error.hpp"
#include "shockzoom/inviscid.hpp"

namespace shockzoom {

namespace {

constexpr double kMaxRkStep = 0.01;

template <class F>
double rk4(const F& rhs, double s, double h) {
  const double k1 = rhs(s);
  const double k2 = rhs(s + 0.5 * h * k1);
  const double k3 = rhs(s + 0.5 * h * k2);
  const double k4 = rhs(s + h * k3);
  return s + h * (k1 + 2.0 * k2 + 2.0 * k3 + k4) / 6.0;
}

// Root of x = t z - z^3 on the branch continuing z(0, x); for t > 0 only
// valid where that branch is unique, |x| > 2 (t/3)^{3/2}.
double cubic_branch(double t, double x) {
  if (t <= 0.0) return z_value(t, x);
  if (x == 0.0) return 0.0;
  const double ax = std::abs(x);
  // Newton from beyond the root on the convex, monotone side converges monotonically.
  double a = std::cbrt(ax) + std::sqrt(t);
  for (int it = 0; it < 100; ++it) {
    const double r = a * a * a - t * a - ax;
    const double d = 3.0 * a * a - t;
    const double next = a - r / d;
    if (!(next < a)) break;
    a = next;
  }
  return x > 0.0 ? -a : a;
}

std::vector<double> grid_times(Interval t, double dt) {
  if (!(dt > 0.0)) fail(ErrorKind::InvalidArgument, "window dt must be positive");
  if (!(t.hi >= t.lo)) fail(ErrorKind::InvalidArgument, "window time range is empty");
  const double len = t.hi - t.lo;
  const auto k = static_cast<std::size_t>(std::max(0.0, std::ceil(len / dt - 1e-9)));
  std::vector<double> out;
  out.reserve(k + 1);
  for (std::size_t i = 0; i <= k; ++i) {
    out.push_back(i == k ? t.hi : t.lo + len * static_cast<double>(i) / static_cast<double>(k));
  }
  if (k == 0) out.assign(1, t.lo);
  return out;
}

struct SymmetricGrid {
  double x_left;
  double dx;
  std::size_t n;
};

SymmetricGrid symmetric_grid(double half_width, double dx) {
  const auto half = static_cast<std::size_t>(std::ceil(half_width / dx - 1e-9));
  return {-static_cast<double>(half) * dx, dx, 2 * half + 1};
}

}  // namespace

std::vector<double> Window::snapshot_times() const {
  if (times.empty()) return grid_times(t, dt);
  if (!std::is_sorted(times.begin(), times.end()) || times.front() < t.lo || times.back() > t.hi) {
    fail(ErrorKind::InvalidArgument, "window times must be sorted inside the time range");
  }
  return times;
}

TravelingWave::TravelingWave(FluxModel flux, ShockData shock, double C, GridFunction profile)
    : flux_(std::move(flux)), shock_(shock), C_(C), profile_(std::move(profile)) {}

double TravelingWave::slope(double x) const { return rhs((*this)(x)); }

double TravelingWave::continue_from(double x0, double s0, double x) const {
  const double len = x - x0;
  const int steps = std::max(1, static_cast<int>(std::ceil(std::abs(len) / kMaxRkStep)));
  const double h = len / steps;
  auto f = [this](double s) { return rhs(s); };
  double s = s0;
  for (int i = 0; i < steps; ++i) s = rk4(f, s, h);
  return s;
}

double TravelingWave::operator()(double x) const {
  const auto& p = profile_;
  const std::size_t n = p.size();
  if (x <= p.x_left()) return continue_from(p.x_left(), p[0], x);
  if (x >= p.x_right()) return continue_from(p.x_right(), p[n - 1], x);
  const double r = (x - p.x_left()) / p.dx();
  const auto i = std::min(static_cast<std::size_t>(r), n - 2);
  const double s = r - static_cast<double>(i);
  const double h = p.dx();
  const double y0 = p[i], y1 = p[i + 1];
  const double m0 = rhs(y0) * h, m1 = rhs(y1) * h;
  const double s2 = s * s, s3 = s2 * s;
  return (2 * s3 - 3 * s2 + 1) * y0 + (s3 - 2 * s2 + s) * m0 + (-2 * s3 + 3 * s2) * y1 +
         (s3 - s2) * m1;
}

double TravelingWave::ode_residual() const {
  const auto v = profile_.values();
  const double dx = profile_.dx();
  double worst = 0.0;
  for (std::size_t i = 2; i + 2 < v.size(); ++i) {
    const double d = (-v[i + 2] + 8.0 * v[i + 1] - 8.0 * v[i - 1] + v[i - 2]) / (12.0 * dx);
    worst = std::max(worst, std::abs(rhs(v[i]) - d));
  }
  return worst;
}

double TravelingWave::transition_width() const {
  const double jump = shock_.u_minus - shock_.u_plus;
  auto crossing = [&](double level) {
    double lo = -1.0, hi = 1.0;
    while ((*this)(lo) < level) lo *= 2.0;
    while ((*this)(hi) > level) hi *= 2.0;
    for (int it = 0; it < 100; ++it) {
      const double m = 0.5 * (lo + hi);
      if ((*this)(m) > level) lo = m; else hi = m;
    }
    return 0.5 * (lo + hi);
  };
  return crossing(shock_.u_plus + 0.01 * jump) - crossing(shock_.u_minus - 0.01 * jump);
}

TravelingWave traveling_wave(const FluxModel& flux, double u_minus, double u_plus,
                             double half_width, double dx) {
  const ShockData shock = rankine_hugoniot(flux, u_minus, u_plus);
  require_lax(shock);
  if (!(dx > 0.0) || !(half_width > 0.0)) {
    fail(ErrorKind::InvalidArgument, "traveling_wave needs positive half_width and dx");
  }
  const double C = flux.f(u_plus) - shock.lambda * u_plus;
  const int sub = std::max(1, static_cast<int>(std::ceil(dx / kMaxRkStep - 1e-9)));
  const double h = dx / sub;
  auto rhs = [&](double s) { return flux.f(s) - shock.lambda * s - C; };

  const auto half = static_cast<std::size_t>(std::ceil(half_width / dx - 1e-9));
  std::vector<double> v(2 * half + 1);
  v[half] = 0.5 * (u_minus + u_plus);
  for (std::size_t i = half; i < 2 * half; ++i) {
    double s = v[i];
    for (int k = 0; k < sub; ++k) s = rk4(rhs, s, h);
    v[i + 1] = s;
  }
  for (std::size_t i = half; i > 0; --i) {
    double s = v[i];
    for (int k = 0; k < sub; ++k) s = rk4(rhs, s, -h);
    v[i - 1] = s;
  }
  return TravelingWave(flux, shock, C, GridFunction(-static_cast<double>(half) * dx, dx, v));
}

MergingTriple make_merging_triple(const FluxModel& flux, double u_minus, double u_star,
                                  double u_plus, std::optional<double> lambda_star) {
  if (!(u_minus > u_star && u_star > u_plus)) {
    fail(ErrorKind::NotOrdered, "merging triple needs u_minus > u_star > u_plus");
  }
  MergingTriple m;
  m.u_minus = u_minus;
  m.u_star = u_star;
  m.u_plus = u_plus;
  m.lambda1 = rankine_hugoniot(flux, u_minus, u_star).lambda;
  m.lambda2 = rankine_hugoniot(flux, u_star, u_plus).lambda;
  m.lambda_star = lambda_star.value_or(0.5 * (m.lambda1 + m.lambda2));
  if (!(m.lambda2 < m.lambda_star && m.lambda_star < m.lambda1)) {
    fail(ErrorKind::InvalidArgument, "lambda_star must lie strictly between the shock speeds");
  }
  return m;
}

double smoothstep(double s) {
  if (s <= 0.0) return 0.0;
  if (s >= 1.0) return 1.0;
  return s * s * (3.0 - 2.0 * s);
}

GridFunction merging_initial(const MergingTriple& triple, const TravelingWave& s1,
                             const TravelingWave& s2, double tau, double x_left, double dx,
                             std::size_t n, const Blend& blend) {
  if (!(tau < 0.0)) fail(ErrorKind::InvalidArgument, "merging data need tau < 0");
  const double separation = std::abs(triple.lambda1 - triple.lambda2) * std::abs(tau);
  const double needed = 0.5 * (s1.transition_width() + s2.transition_width()) + 1.0;
  if (!(separation > needed)) {
    std::ostringstream os;
    os << "tau = " << tau << " separates the shocks by " << separation << ", need more than "
       << needed;
    fail(ErrorKind::TauTooLate, os.str());
  }
  return GridFunction::sample(x_left, dx, n, [&](double x) {
    const double th = blend(x - triple.lambda_star * tau);
    return th * s2(x - triple.lambda2 * tau) + (1.0 - th) * s1(x - triple.lambda1 * tau);
  });
}

MergingW merging_W(const MergingTriple& triple, const FluxModel& flux,
                   const std::vector<double>& tau_list, const Window& window,
                   const MergingOptions& options) {
  if (tau_list.size() < 2) fail(ErrorKind::InvalidArgument, "merging_W needs at least two taus");
  for (std::size_t k = 0; k < tau_list.size(); ++k) {
    if (!(tau_list[k] < 0.0) || (k > 0 && !(tau_list[k] < tau_list[k - 1]))) {
      fail(ErrorKind::InvalidArgument, "tau_list must be decreasing negatives");
    }
  }
  const double t_cmp = window.t.lo;
  if (!(t_cmp > tau_list.front())) {
    fail(ErrorKind::InvalidArgument, "window must start after the latest tau");
  }
  const double tau_deep = tau_list.back();

  const double probe_dx = std::min(options.dx, 0.05);
  const double w1 = traveling_wave(flux, triple.u_minus, triple.u_star, 20.0, probe_dx)
                        .transition_width();
  const double w2 =
      traveling_wave(flux, triple.u_star, triple.u_plus, 20.0, probe_dx).transition_width();
  double half_width = options.half_width;
  if (half_width <= 0.0) {
    const ShockData merged = rankine_hugoniot(flux, triple.u_minus, triple.u_plus);
    const double reach = std::max(std::abs(triple.lambda1), std::abs(triple.lambda2)) *
                             std::abs(tau_deep) +
                         std::abs(merged.lambda) * std::max(window.t.hi, 0.0);
    half_width = reach + 2.0 * std::max(w1, w2) +
                 std::max(std::abs(window.x.lo), std::abs(window.x.hi)) + 10.0;
  }
  const auto grid = symmetric_grid(half_width, options.dx);
  const double x_span = 0.5 * static_cast<double>(grid.n - 1) * grid.dx;
  // Profiles are evaluated up to |lambda_i tau| beyond the domain.
  const double wave_span =
      x_span + std::max(std::abs(triple.lambda1), std::abs(triple.lambda2)) * std::abs(tau_deep);
  const auto s1 = traveling_wave(flux, triple.u_minus, triple.u_star, wave_span, options.dx);
  const auto s2 = traveling_wave(flux, triple.u_star, triple.u_plus, wave_span, options.dx);

  SolverConfig cfg;
  cfg.viscosity = 1.0;
  cfg.boundary = Clamped{triple.u_minus, triple.u_plus};
  cfg.flux_scheme = options.scheme;

  const std::size_t members = tau_list.size();
  std::vector<GridFunction> at_cmp(members);
  MergingW out;
  out.triple = triple;
  out.domain_half_width = x_span;
  const std::vector<double> cmp_times{t_cmp};
  kernels::run_members(members, [&](std::size_t k) {
    SolverConfig local = cfg;
    local.kernel = members > 1 ? KernelMode::Serial : options.kernel;
    const auto u0 = merging_initial(triple, s1, s2, tau_list[k], grid.x_left, grid.dx, grid.n);
    at_cmp[k] = solve(u0, flux, local, tau_list[k], t_cmp, cmp_times).back().u;
  });

  SolverConfig last = cfg;
  last.kernel = options.kernel;
  SolveOptions so;
  so.crop = window.x;
  const auto times = window.snapshot_times();
  out.trajectory = solve(at_cmp.back(), flux, last, t_cmp, window.t.hi, times, so);

  auto& rep = out.cauchy;
  rep.taus = tau_list;
  rep.comparison_time = t_cmp;
  for (std::size_t k = 0; k + 1 < members; ++k) {
    rep.distances.push_back(l1_distance(at_cmp[k], at_cmp[k + 1]));
  }
  rep.strictly_decreasing = true;
  for (std::size_t k = 1; k < rep.distances.size(); ++k) {
    if (!(rep.distances[k] < rep.distances[k - 1])) rep.strictly_decreasing = false;
  }
  // Least squares of log d against |tau|.
  const std::size_t m = rep.distances.size();
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t k = 0; k < m; ++k) {
    const double x = std::abs(tau_list[k]);
    const double y = std::log(std::max(rep.distances[k], std::numeric_limits<double>::min()));
    sx += x, sy += y, sxx += x * x, sxy += x * y;
  }
  const double denom = m * sxx - sx * sx;
  rep.log_slope = m >= 2 && denom != 0.0 ? (m * sxy - sx * sy) / denom : 0.0;
  return out;
}

double default_z_truncation(int n, const Window& window) {
  const double xw = std::max(std::abs(window.x.lo), std::abs(window.x.hi));
  const double t_max = window.t.hi;
  // Largest inviscid state in the window: the cubic branch at the window edge,
  // widened for t > 0 where the branch root exceeds |x|^{1/3} by up to sqrt(t).
  const double u_max = std::abs(cubic_branch(std::min(t_max, 0.0), xw)) +
                       std::sqrt(std::max(t_max, 0.0));
  const double foot = n * u_max + u_max * u_max * u_max;
  return foot + xw + 10.0 * std::sqrt(n + std::max(t_max, 0.0)) + 5.0;
}

EternalZ eternal_Z(int n, const Window& window, const EternalZOptions& options) {
  if (n < 1) fail(ErrorKind::InvalidArgument, "eternal_Z needs n >= 1");
  if (window.t.lo < -n) fail(ErrorKind::InvalidArgument, "window starts before t = -n");
  const double x_req = options.x_max > 0.0 ? options.x_max : default_z_truncation(n, window);
  const auto grid = symmetric_grid(x_req, options.dx);
  const double x_max = -grid.x_left;
  if (x_max < std::max(std::abs(window.x.lo), std::abs(window.x.hi))) {
    fail(ErrorKind::InvalidArgument, "window exceeds the truncated domain");
  }

  const double t0 = -static_cast<double>(n);
  auto u0 = GridFunction::sample(grid.x_left, grid.dx, grid.n,
                                 [&](double x) { return z_value(t0, x); });
  SolverConfig cfg;
  cfg.viscosity = 1.0;
  cfg.flux_scheme = options.scheme;
  cfg.kernel = options.kernel;
  cfg.cfl_advection = options.cfl_advection;
  cfg.diffusion_number = options.diffusion_number;
  cfg.boundary = DirichletInTime{[x_max](double t) { return cubic_branch(t, -x_max); },
                                 [x_max](double t) { return cubic_branch(t, x_max); }};

  EternalZ out;
  out.n = n;
  out.window = window;
  out.x_max = x_max;
  SolveOptions so;
  so.crop = window.x;
  const auto times = window.snapshot_times();
  out.trajectory = solve(u0, burgers(), cfg, t0, window.t.hi, times, so);
  return out;
}

ZLimit eternal_Z_limit(const std::vector<int>& n_list, const Window& window, double tol,
                       const EternalZOptions& options) {
  if (n_list.size() < 3) fail(ErrorKind::InvalidArgument, "eternal_Z_limit needs >= 3 values of n");
  for (std::size_t k = 1; k < n_list.size(); ++k) {
    if (!(n_list[k] > n_list[k - 1])) fail(ErrorKind::InvalidArgument, "n_list must increase");
  }
  std::vector<EternalZ> runs(n_list.size());
  kernels::run_members(n_list.size(), [&](std::size_t k) {
    EternalZOptions local = options;
    if (n_list.size() > 1) local.kernel = KernelMode::Serial;
    runs[k] = eternal_Z(n_list[k], window, local);
  });

  ZLimit out;
  auto& rep = out.report;
  rep.n_list = n_list;
  rep.worst_monotone_margin = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k + 1 < runs.size(); ++k) {
    const auto& a = runs[k].trajectory;
    const auto& b = runs[k + 1].trajectory;
    double sup = 0.0;
    for (std::size_t s = 0; s < a.size(); ++s) {
      const auto& ua = a[s].u;
      const auto& ub = b[s].u;
      sup = std::max(sup, sup_distance(ua, ub));
      for (std::size_t i = 0; i < ua.size(); ++i) {
        if (ua.x(i) < -1e-9 * ua.dx()) continue;
        rep.worst_monotone_margin = std::min(rep.worst_monotone_margin, ub[i] - ua[i]);
        ++rep.samples;
      }
    }
    rep.successive_sup.push_back(sup);
  }
  out.limit = std::move(runs.back());
  if (rep.successive_sup.back() > tol) {
    std::ostringstream os;
    os << "Z^(n) not converged: last successive difference " << rep.successive_sup.back()
       << " > " << tol;
    fail(ErrorKind::NotConverged, os.str());
  }
  return out;
}

}  // namespace shockzoom
