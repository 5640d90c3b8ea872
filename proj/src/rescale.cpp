#include "shockzoom/rescale.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <sstream>

#include "shockzoom/error.hpp"

namespace shockzoom {

RescaleFrame RescaleFrame::type1(double eps, double tau, double xi) {
  return RescaleFrame{tau, xi, eps, 1.0, 1.0, 0.0, 0.0};
}

RescaleFrame RescaleFrame::type2(double eps, double tau, double xi) {
  return RescaleFrame{tau, xi, eps, 0.5, 0.75, 0.25, 0.0};
}

double RescaleFrame::physical_t(double t) const { return tau_eps + std::pow(eps, alpha) * t; }
double RescaleFrame::physical_x(double x) const { return xi_eps + std::pow(eps, beta) * x; }
double RescaleFrame::zoom_t(double t_phys) const { return (t_phys - tau_eps) / std::pow(eps, alpha); }
double RescaleFrame::zoom_x(double x_phys) const { return (x_phys - xi_eps) / std::pow(eps, beta); }
double RescaleFrame::zoom_value(double u) const { return (u - u_center) / std::pow(eps, gamma); }

TrajectoryField::TrajectoryField(Trajectory snapshots) : snaps_(std::move(snapshots)) {
  if (snaps_.empty()) fail(ErrorKind::InvalidArgument, "TrajectoryField needs snapshots");
  for (std::size_t k = 1; k < snaps_.size(); ++k) {
    if (!(snaps_[k].t > snaps_[k - 1].t)) {
      fail(ErrorKind::InvalidArgument, "snapshot times must increase strictly");
    }
    if (!snaps_[k].u.same_grid(snaps_[0].u)) {
      fail(ErrorKind::GridMismatch, "TrajectoryField snapshots must share one grid");
    }
  }
}

Interval TrajectoryField::t_range() const { return {snaps_.front().t, snaps_.back().t}; }

Interval TrajectoryField::x_range() const {
  return {snaps_.front().u.x_left(), snaps_.front().u.x_right()};
}

double TrajectoryField::operator()(double t, double x) const {
  const auto tr = t_range();
  const double slack = 1e-12 * std::max(1.0, std::abs(tr.hi - tr.lo));
  if (t < tr.lo - slack || t > tr.hi + slack) {
    std::ostringstream os;
    os << "t = " << t << " outside [" << tr.lo << ", " << tr.hi << "]";
    fail(ErrorKind::OutOfDomain, os.str());
  }
  if (snaps_.size() == 1) return snaps_[0].u.interpolate(x);
  t = std::clamp(t, tr.lo, tr.hi);
  auto it = std::upper_bound(snaps_.begin(), snaps_.end(), t,
                             [](double v, const Snapshot& s) { return v < s.t; });
  std::size_t k = static_cast<std::size_t>(it - snaps_.begin());
  if (k == 0) k = 1;
  if (k >= snaps_.size()) k = snaps_.size() - 1;
  const auto& a = snaps_[k - 1];
  const auto& b = snaps_[k];
  const double w = (t - a.t) / (b.t - a.t);
  return (1.0 - w) * a.u.interpolate(x) + w * b.u.interpolate(x);
}

Trajectory zoom_sample(const Evaluator& u, const RescaleFrame& frame,
                       std::span<const double> t_samples, const GridFunction& x_template) {
  Trajectory out;
  out.reserve(t_samples.size());
  for (double t : t_samples) {
    const double tp = frame.physical_t(t);
    GridFunction g = x_template;
    for (std::size_t i = 0; i < g.size(); ++i) {
      g[i] = frame.zoom_value(u(tp, frame.physical_x(g.x(i))));
    }
    out.push_back({t, std::move(g)});
  }
  return out;
}

FitResult fit_shift(const GridFunction& profile, const std::function<double(double)>& templ,
                    double midpoint) {
  std::vector<double> crossings;
  for (std::size_t i = 0; i + 1 < profile.size(); ++i) {
    const double a = profile[i] - midpoint;
    const double b = profile[i + 1] - midpoint;
    if (a >= 0.0 && b < 0.0) {
      crossings.push_back(profile.x(i) + profile.dx() * a / (a - b));
    }
  }
  if (crossings.empty()) {
    fail(ErrorKind::NoCrossing, "profile does not cross the midpoint downward");
  }
  const std::size_t m = crossings.size() / 2;
  std::nth_element(crossings.begin(), crossings.begin() + m, crossings.end());
  FitResult r;
  r.shift = crossings[m];
  if (crossings.size() % 2 == 0) {
    const double lower = *std::max_element(crossings.begin(), crossings.begin() + m);
    r.shift = 0.5 * (r.shift + lower);
  }
  const std::size_t n = profile.size();
  double l1 = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double e = std::abs(profile[i] - templ(profile.x(i) - r.shift));
    r.sup_error = std::max(r.sup_error, e);
    l1 += (i == 0 || i + 1 == n) ? 0.5 * e : e;
  }
  r.l1_error = l1 * profile.dx();
  return r;
}

FrameFit fit_frame_theorem2(const FormationPoint& point, const FluxModel& flux) {
  if (!(point.x_uuu < 0.0)) {
    fail(ErrorKind::Degenerate, "formation point needs x_uuu < 0");
  }
  const double scale = std::abs(point.x_uuu);
  if (std::abs(point.x_u) > 1e-6 * scale || std::abs(point.x_uu) > 1e-6 * scale) {
    fail(ErrorKind::Degenerate, "formation point needs x_u = x_uu = 0");
  }
  FrameFit fit;
  fit.c = std::cbrt(-6.0 / point.x_uuu);
  fit.sigma = flux.d2f(point.u_center) * fit.c;
  fit.lambda = flux.df(point.u_center);
  fit.tau_eps = point.tau;
  fit.xi_eps = point.xi;
  return fit;
}

WindowError window_error(const Trajectory& zoomed, const Evaluator& reference) {
  WindowError out;
  const std::size_t nt = zoomed.size();
  if (nt == 0) return out;
  std::vector<double> row(nt, 0.0);
  for (std::size_t k = 0; k < nt; ++k) {
    const auto& s = zoomed[k];
    const std::size_t n = s.u.size();
    double l1 = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double e = std::abs(s.u[i] - reference(s.t, s.u.x(i)));
      out.sup_error = std::max(out.sup_error, e);
      l1 += (i == 0 || i + 1 == n) ? 0.5 * e : e;
    }
    row[k] = l1 * s.u.dx();
  }
  if (nt == 1) {
    out.l1_error = row[0];
    return out;
  }
  for (std::size_t k = 0; k + 1 < nt; ++k) {
    out.l1_error += 0.5 * (row[k] + row[k + 1]) * (zoomed[k + 1].t - zoomed[k].t);
  }
  return out;
}

SpacetimeFit fit_spacetime_shift(const Trajectory& zoomed, const Evaluator& reference,
                                 double bound, int restarts) {
  // Traveling fronts make the two shifts nearly interchangeable, so the cost
  // has a long thin valley; Nelder-Mead follows it where coordinate search stalls.
  using P = std::array<double, 2>;
  auto cost = [&](const P& p) {
    if (std::abs(p[0]) > bound || std::abs(p[1]) > bound) {
      return std::numeric_limits<double>::infinity();
    }
    return window_error(zoomed,
                        [&](double t, double x) { return reference(t - p[0], x - p[1]); })
        .l1_error;
  };
  P best{0.0, 0.0};
  double best_cost = cost(best);
  double size = 0.25 * bound;
  for (int r = 0; r < restarts; ++r) {
    std::array<P, 3> v{best, P{best[0] + size, best[1]}, P{best[0], best[1] + size}};
    std::array<double, 3> fv{best_cost, cost(v[1]), cost(v[2])};
    for (int it = 0; it < 400; ++it) {
      std::array<int, 3> idx{0, 1, 2};
      std::sort(idx.begin(), idx.end(), [&](int a, int b) { return fv[a] < fv[b]; });
      const P lo = v[idx[0]], mid = v[idx[1]], hi = v[idx[2]];
      const double flo = fv[idx[0]], fmid = fv[idx[1]], fhi = fv[idx[2]];
      const double extent = std::max(std::hypot(mid[0] - lo[0], mid[1] - lo[1]),
                                     std::hypot(hi[0] - lo[0], hi[1] - lo[1]));
      if (extent < 1e-7) break;
      const P c{0.5 * (lo[0] + mid[0]), 0.5 * (lo[1] + mid[1])};
      auto along = [&](double k) { return P{c[0] + k * (hi[0] - c[0]), c[1] + k * (hi[1] - c[1])}; };
      std::array<P, 3> nv{lo, mid, hi};
      std::array<double, 3> nf{flo, fmid, fhi};
      const P refl = along(-1.0);
      const double fr = cost(refl);
      if (fr < flo) {
        const P exp = along(-2.0);
        const double fe = cost(exp);
        nv[2] = fe < fr ? exp : refl;
        nf[2] = std::min(fe, fr);
      } else if (fr < fmid) {
        nv[2] = refl, nf[2] = fr;
      } else {
        const P con = fr < fhi ? along(-0.5) : along(0.5);
        const double fc = cost(con);
        if (fc < std::min(fr, fhi)) {
          nv[2] = con, nf[2] = fc;
        } else {
          for (int k = 1; k < 3; ++k) {
            nv[k] = P{0.5 * (lo[0] + nv[k][0]), 0.5 * (lo[1] + nv[k][1])};
            nf[k] = cost(nv[k]);
          }
        }
      }
      v = nv;
      fv = nf;
    }
    for (int k = 0; k < 3; ++k) {
      if (fv[k] < best_cost) best_cost = fv[k], best = v[k];
    }
    size *= 0.25;
  }
  SpacetimeFit fit;
  fit.t_shift = best[0];
  fit.x_shift = best[1];
  fit.error = window_error(
      zoomed, [&](double t, double x) { return reference(t - fit.t_shift, x - fit.x_shift); });
  return fit;
}

RateFit convergence_rate(std::span<const double> eps, std::span<const double> errors) {
  if (eps.size() != errors.size()) fail(ErrorKind::InvalidArgument, "rate fit length mismatch");
  if (eps.size() < 3) fail(ErrorKind::InvalidArgument, "rate fit needs at least three points");
  const std::size_t n = eps.size();
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  std::vector<double> lx(n), ly(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (!(eps[i] > 0.0) || !(errors[i] > 0.0)) {
      fail(ErrorKind::NonPositive, "rate fit needs positive eps and errors");
    }
    lx[i] = std::log(eps[i]);
    ly[i] = std::log(errors[i]);
    sx += lx[i], sy += ly[i], sxx += lx[i] * lx[i], sxy += lx[i] * ly[i];
  }
  const double denom = n * sxx - sx * sx;
  if (denom == 0.0) fail(ErrorKind::InvalidArgument, "rate fit needs distinct eps");
  RateFit r;
  r.slope = (n * sxy - sx * sy) / denom;
  r.intercept = (sy - r.slope * sx) / n;
  double ss = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double e = ly[i] - (r.intercept + r.slope * lx[i]);
    ss += e * e;
  }
  r.residual = std::sqrt(ss / n);
  return r;
}

}  // namespace shockzoom
