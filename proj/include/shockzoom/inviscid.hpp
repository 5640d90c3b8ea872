#pragma once

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "shockzoom/flux.hpp"

namespace shockzoom {

/// Smooth initial profile with its derivative. `domain` is where the
/// derivative is certified by central differences (relative tolerance 1e-6)
/// and `state_range` bounds the values, which fixes the characteristic speeds.
class SmoothData {
 public:
  using Fn = std::function<double(double)>;

  SmoothData(Fn u0, Fn du0, Interval domain, Interval state_range,
             std::optional<Fn> antiderivative = std::nullopt);

  double u0(double x) const { return u0_(x); }
  double du0(double x) const { return du0_(x); }
  Interval domain() const { return domain_; }
  Interval state_range() const { return state_range_; }
  bool has_antiderivative() const { return antiderivative_.has_value(); }
  /// Any antiderivative of u0; only differences are used.
  double antiderivative(double x) const { return (*antiderivative_)(x); }

 private:
  Fn u0_, du0_;
  Interval domain_, state_range_;
  std::optional<Fn> antiderivative_;
};

/// Value at (t, x) carried by the unique characteristic x = xi + t f'(u0(xi)).
/// Throws NoBracket when no foot exists in the speed bracket and MultipleRoots
/// once characteristics have crossed.
double characteristic_value(const SmoothData& data, const FluxModel& flux, double t, double x);

/// [-f''(u0(xi)) u0'(xi)]^{-1} when u0'(xi) < 0, +infinity otherwise.
double blowup_time(const SmoothData& data, const FluxModel& flux, double xi);

/// u_minus for x < lambda t, u_plus for x >= lambda t.
double single_shock(const ShockData& shock, double t, double x);

/// Two Lax shocks u_minus | u_star | u_plus meeting at the origin: three states
/// for t < 0, one merged shock for t >= 0. Throws NotOrdered unless
/// u_minus > u_star > u_plus.
double two_shock(const FluxModel& flux, double u_minus, double u_star, double u_plus, double t,
                 double x);

/// Backward Burgers solution z(t, x), the real root of x = t z - z^3 for t <= 0,
/// with its first three x-derivatives.
struct ZPoint {
  double t = 0.0;
  double x = 0.0;
  double z = 0.0;
  double zx = 0.0;
  double zxx = 0.0;
  double zxxx = 0.0;
};

ZPoint z_eval(double t, double x);

/// Shorthand for z_eval(t, x).z.
double z_value(double t, double x);

struct BoundCheck {
  std::string name;
  double worst_margin = 0.0;  // >= 0 passes
  long violations = 0;
};

struct ZAuditReport {
  long nodes = 0;
  long violations = 0;
  double max_residual = 0.0;  // max |x - (t z - z^3)| / (1 + |x|)
  std::vector<BoundCheck> checks;
};

/// Checks the derivative bounds t^{-1} <= z_x < 0, the sign and size of z_xx
/// (|t|^{-5/2} and its sharp in-x maximum), |z_xxx| <= 36 t^{-4}, the two-sided
/// envelope of |z|, and the cubic residual, at every (t, x) node. All t < 0.
ZAuditReport z_bounds_audit(std::span<const double> t_grid, std::span<const double> x_grid);

/// Entropy solution of u_t + f(u)_x = 0 for t >= 0 from smooth data, through the
/// Lax-Oleinik minimization: among the characteristic feet y of (t, x) pick the
/// one minimizing U0(y) + t (u f'(u) - f(u)), u = u0(y), where U0 is an
/// antiderivative of u0. Valid across shocks.
class EntropySolution {
 public:
  /// `scan_step` must resolve the finest feature of the data.
  EntropySolution(SmoothData data, FluxModel flux, double scan_step);

  double operator()(double t, double x) const;
  /// Minimizing characteristic foot.
  double foot(double t, double x) const;
  /// Position of the largest jump of the foot map inside [lo, hi]; +infinity
  /// when the solution is continuous there.
  double locate_shock(double t, double lo, double hi) const;

  const SmoothData& data() const { return data_; }
  const FluxModel& flux() const { return flux_; }

 private:
  double primitive(double a, double b) const;

  SmoothData data_;
  FluxModel flux_;
  double scan_step_;
};

}  // namespace shockzoom
