#pragma once

#include <functional>
#include <span>
#include <vector>

#include "shockzoom/flux.hpp"
#include "shockzoom/grid.hpp"

namespace shockzoom {

/// (t, x) -> u.
using Evaluator = std::function<double(double, double)>;

/// Zoom transform U(t, x) = eps^{-gamma} [u(tau + eps^alpha t, xi + eps^beta x) - u_center].
struct RescaleFrame {
  double tau_eps = 0.0;
  double xi_eps = 0.0;
  double eps = 1.0;
  double alpha = 0.0;
  double beta = 0.0;
  double gamma = 0.0;
  double u_center = 0.0;

  /// Exponents (1, 1, 0): shock-scale zoom.
  static RescaleFrame type1(double eps, double tau, double xi);
  /// Exponents (1/2, 3/4, 1/4): shock-formation zoom.
  static RescaleFrame type2(double eps, double tau, double xi);

  double physical_t(double t) const;
  double physical_x(double x) const;
  double zoom_t(double t_phys) const;
  double zoom_x(double x_phys) const;
  double zoom_value(double u) const;
};

/// Bilinear (t, x) interpolation over snapshots sharing one grid.
class TrajectoryField {
 public:
  explicit TrajectoryField(Trajectory snapshots);

  /// Throws OutOfDomain outside [t_first, t_last] x [x_left, x_right].
  double operator()(double t, double x) const;
  Interval t_range() const;
  Interval x_range() const;
  const Trajectory& snapshots() const { return snaps_; }

 private:
  Trajectory snaps_;
};

/// Samples the zoomed field at every t in `t_samples` on the nodes of `x_template`.
Trajectory zoom_sample(const Evaluator& u, const RescaleFrame& frame,
                       std::span<const double> t_samples, const GridFunction& x_template);

struct FitResult {
  double shift = 0.0;
  double sup_error = 0.0;
  double l1_error = 0.0;
};

/// Shift c where the decreasing profile crosses `midpoint` (median of the
/// crossings when noise creates several), with errors against template(x - c).
/// Throws NoCrossing.
FitResult fit_shift(const GridFunction& profile, const std::function<double(double)>& templ,
                    double midpoint);

/// Formation point data: the local inverse x(tau, u) near u = u_center.
struct FormationPoint {
  double tau = 0.0;
  double xi = 0.0;
  double u_center = 0.0;
  double x_u = 0.0;
  double x_uu = 0.0;
  double x_uuu = 0.0;
};

struct FrameFit {
  double c = 1.0;
  double sigma = 1.0;
  double lambda = 0.0;
  double tau_eps = 0.0;
  double xi_eps = 0.0;
};

/// Normalizes c^3 x_uuu = -6, sigma = f''(u) c, lambda = f'(u). Throws
/// Degenerate when x_uuu >= 0 or when x_u, x_uu do not vanish.
FrameFit fit_frame_theorem2(const FormationPoint& point, const FluxModel& flux);

/// Errors of the zoomed snapshots against a reference evaluator: sup and the
/// space-time L1 norm (trapezoid in both variables).
struct WindowError {
  double sup_error = 0.0;
  double l1_error = 0.0;
};

WindowError window_error(const Trajectory& zoomed, const Evaluator& reference);

struct SpacetimeFit {
  double t_shift = 0.0;
  double x_shift = 0.0;
  WindowError error;
};

/// Minimizes the L1 window error against reference(t - t_shift, x - x_shift)
/// over |shifts| <= bound by restarted Nelder-Mead from the origin.
SpacetimeFit fit_spacetime_shift(const Trajectory& zoomed, const Evaluator& reference,
                                 double bound, int restarts = 3);

struct RateFit {
  double slope = 0.0;
  double intercept = 0.0;
  /// Root mean square of the log residuals.
  double residual = 0.0;
};

/// Least squares of log(error) against log(eps). Needs >= 3 points; throws
/// NonPositive on non-positive entries.
RateFit convergence_rate(std::span<const double> eps, std::span<const double> errors);

}  // namespace shockzoom
