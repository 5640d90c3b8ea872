#pragma once

#include <functional>
#include <string>
#include <vector>

namespace shockzoom {

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
  bool contains(double v) const { return v >= lo && v <= hi; }
  double length() const { return hi - lo; }
};

/// Uniformly convex flux f with analytic first and second derivatives.
///
/// The constructor certifies the model on `certified_range`: the convexity
/// bounds c1 <= f'' <= c2 hold at every sample, and df, d2f agree with central
/// differences of f, df to relative tolerance 1e-6. A model that fails the
/// certification throws InvalidArgument.
class FluxModel {
 public:
  using Fn = std::function<double(double)>;

  FluxModel(std::string name, Fn f, Fn df, Fn d2f, double c1, double c2,
            Interval certified_range);

  double f(double u) const { return f_(u); }
  double df(double u) const { return df_(u); }
  double d2f(double u) const { return d2f_(u); }
  double c1() const { return c1_; }
  double c2() const { return c2_; }
  const std::string& name() const { return name_; }
  Interval certified_range() const { return range_; }

  /// max |f'(u)| for u in [lo, hi]; f' is monotone so the endpoints suffice.
  double max_speed(double lo, double hi) const;

  /// Solves f'(u) = v by safeguarded Newton; f' is strictly increasing.
  double inverse_speed(double v) const;

 private:
  std::string name_;
  Fn f_, df_, d2f_;
  double c1_, c2_;
  Interval range_;
};

FluxModel burgers();
/// f(u) = u^2/2 + b u.
FluxModel burgers_plus_linear(double b = 1.0);
/// f(u) = u^2/2 + kappa u^4, certified on `range`; kappa must keep f'' >= c1 > 0.
FluxModel quartic_perturbed(double kappa, Interval range = {-2.0, 2.0});

/// Library lookup used by the CLI: "burgers", "burgers-linear" (params: b),
/// "quartic" (params: kappa, range_lo, range_hi).
FluxModel make_flux(const std::string& name, const std::vector<double>& params);

struct ShockData {
  double u_minus = 0.0;
  double u_plus = 0.0;
  double lambda = 0.0;
  /// Lax admissibility for convex flux: only downward jumps.
  bool is_lax() const { return u_minus > u_plus; }
};

/// Chord slope between the two states. Throws EqualStates when they coincide.
/// Non-Lax pairs are returned with is_lax() false; callers that need an
/// admissible shock use require_lax.
ShockData rankine_hugoniot(const FluxModel& flux, double u_minus, double u_plus);
void require_lax(const ShockData& shock);

/// Affine map u -> slope * u + intercept.
struct AffineMap {
  double slope = 0.0;
  double intercept = 0.0;
  double operator()(double u) const { return slope * u + intercept; }
};

/// The straight line through (u_plus, f(u_plus)) and (u_minus, f(u_minus)).
AffineMap chord(const FluxModel& flux, double u_minus, double u_plus);

}  // namespace shockzoom
