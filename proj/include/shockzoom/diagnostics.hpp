#pragma once

#include <functional>
#include <string>
#include <vector>

#include "shockzoom/flux.hpp"
#include "shockzoom/grid.hpp"
#include "shockzoom/rescale.hpp"
#include "shockzoom/solver.hpp"

namespace shockzoom {

/// Samples (u, f(u) - u_x) of a profile.
struct WCurve {
  std::vector<double> u;
  std::vector<double> w;
};

/// Centered differences inside, second order one-sided differences at the ends.
WCurve w_curve(const GridFunction& state, const FluxModel& flux);

/// sup |w - chord(u)| over the samples with u in `u_range`; 0 when none qualify.
double strip_deviation(const WCurve& curve, const AffineMap& chord, Interval u_range);

/// Signed distance-like margin of (u, w) to the boundary of the widened
/// region: u within [u_plus - delta1, u_minus + delta1] and
/// f(u) - delta1 - hull_slack <= w <= widened chord(u) + delta1. Non-negative
/// means inside. For convex f the two bounding curves are exactly the lower
/// and upper boundaries of the convex hull, so hull_slack defaults to 0.
double omega_margin(const FluxModel& flux, double u_minus, double u_plus, double delta1, double u,
                    double w, double hull_slack = 0.0);

struct OmegaReport {
  long inside = 0;
  long outside = 0;
  double worst_margin = 0.0;
  bool all_inside() const { return outside == 0; }
};

OmegaReport omega_membership(const WCurve& curve, const FluxModel& flux, double u_minus,
                             double u_plus, double delta1, double hull_slack = 0.0);

/// Fits the traveling wave between the two states to `state` by midpoint
/// crossing. Requires the strip deviation on [u_plus, u_minus] to be at most
/// delta (InvalidArgument otherwise) and the state to pass the midpoint by
/// min(delta, jump / 4) on both sides (NoCrossing otherwise).
FitResult lemma31_check(const GridFunction& state, const FluxModel& flux, double u_minus,
                        double u_plus, double delta);

struct PhaseTimes {
  double T1 = 0.0;
  double T2 = 0.0;
};

/// T1 = 8 (M - m)(b - a) / (c1 delta1^2) and
/// T2 = max{1 / (c1 delta1), [8 (M - m)(b - a) + 8 c1 + (u_minus - u_plus + 2 delta1)^2 c1] / (2 c1 delta1^2)}.
PhaseTimes phase_times(double M, double m, double a, double b, double c1, double delta1,
                       double u_minus, double u_plus);

/// One audited quantity; margin >= -tolerance passes.
struct AuditEntry {
  std::string check;
  double t = 0.0;
  double margin = 0.0;
  bool pass = true;
};

struct PhaseSetup {
  double u_minus = 1.0;
  double u_plus = -1.0;
  double a = -0.5;
  double b = 0.5;
  double m = -1.0;
  double M = 1.0;
  double delta0 = 0.0;
  double delta1 = 0.5;
  /// Margins down to -tolerance pass.
  double tolerance = 0.05;
  /// Audit continues until t_end_factor * T2.
  double t_end_factor = 1.25;
};

struct PhaseReport {
  PhaseTimes times;
  double c1 = 0.0;
  /// Worst margin of each check over its time range.
  std::vector<AuditEntry> entries;
  bool all_pass = false;
};

/// Checks the initial box conditions (InvalidArgument when violated, or when
/// delta1 is outside [2 delta0, 1]), evolves with unit viscosity and audits
/// range containment and almost-monotonicity for t >= T1 and membership in the
/// widened region for t > T2, after every step.
PhaseReport phase_audit(const GridFunction& initial, const FluxModel& flux, const PhaseSetup& setup,
                        const SolverConfig& cfg);

struct KuznetsovRow {
  double eps = 0.0;
  double l1_error = 0.0;
  double pointwise_error = 0.0;
  double pointwise_bound = 0.0;
};

struct KuznetsovReport {
  std::vector<KuznetsovRow> rows;
  RateFit rate;
  /// max over eps of l1_error / sqrt(eps).
  double c_star = 0.0;
  bool pointwise_pass = false;
};

/// L1 errors at t_check against `reference` for each eps, their log-log rate,
/// and the pointwise bound 2 C* eps^{1/6} on [x1 + eps^{1/3}, x2 - eps^{1/3}]
/// where [x1, x2] = `lipschitz` is a declared region of Lipschitz continuity.
/// Needs at least three eps values.
KuznetsovReport kuznetsov_audit(const GridFunction& initial, const FluxModel& flux,
                                const std::vector<double>& eps_list, double t_check,
                                const std::function<double(double)>& reference,
                                const SolverConfig& cfg, Interval lipschitz);

}  // namespace shockzoom
