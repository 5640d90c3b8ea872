#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <vector>

#include "shockzoom/flux.hpp"
#include "shockzoom/grid.hpp"
#include "shockzoom/solver.hpp"

namespace shockzoom {

/// Space-time observation window; snapshots are stored every `dt` (the last
/// one lands on t.hi) and cropped to `x`.
struct Window {
  Interval t;
  Interval x;
  double dt = 0.1;
  /// Explicit sorted snapshot times inside t; replaces the dt spacing when set.
  std::vector<double> times{};

  std::vector<double> snapshot_times() const;
};

/// Viscous shock profile S solving S' = f(S) - lambda S - C with S(0) at the
/// midpoint of the two states, sampled on [-half_width, half_width].
class TravelingWave {
 public:
  TravelingWave(FluxModel flux, ShockData shock, double C, GridFunction profile);

  const ShockData& shock() const { return shock_; }
  double C() const { return C_; }
  const GridFunction& profile() const { return profile_; }
  const FluxModel& flux() const { return flux_; }

  /// S(x): cubic Hermite between nodes, Runge-Kutta continuation beyond them.
  double operator()(double x) const;
  /// S'(x) from the profile equation.
  double slope(double x) const;

  /// Largest |f(S) - lambda S - S' - C| over interior nodes, S' by fourth
  /// order centered differences.
  double ode_residual() const;
  /// Distance between the points where S is 1% of the jump away from each
  /// end state.
  double transition_width() const;

 private:
  double rhs(double s) const { return flux_.f(s) - shock_.lambda * s - C_; }
  double continue_from(double x0, double s0, double x) const;

  FluxModel flux_;
  ShockData shock_;
  double C_;
  GridFunction profile_;
};

/// Integrates the profile equation by classical RK4 with steps no larger than
/// dx (and no larger than 0.01), storing samples every dx. Throws NotLax.
TravelingWave traveling_wave(const FluxModel& flux, double u_minus, double u_plus,
                             double half_width, double dx);

struct MergingTriple {
  double u_minus = 0.0;
  double u_star = 0.0;
  double u_plus = 0.0;
  double lambda1 = 0.0;
  double lambda2 = 0.0;
  double lambda_star = 0.0;
};

/// Builds the triple with lambda_star = (lambda1 + lambda2) / 2 unless given.
/// Throws NotOrdered unless u_minus > u_star > u_plus, InvalidArgument when
/// lambda_star is not strictly between the two speeds.
MergingTriple make_merging_triple(const FluxModel& flux, double u_minus, double u_star,
                                  double u_plus, std::optional<double> lambda_star = {});

/// 3 s^2 - 2 s^3 on [0, 1], clamped outside.
double smoothstep(double s);

using Blend = std::function<double(double)>;

/// theta(x - lambda* tau) S2(x - lambda2 tau) + (1 - theta(x - lambda* tau)) S1(x - lambda1 tau)
/// sampled on `n` nodes from x_left. Throws TauTooLate when |lambda1 - lambda2| |tau|
/// does not exceed the mean transition width of S1, S2 plus the unit blend width.
GridFunction merging_initial(const MergingTriple& triple, const TravelingWave& s1,
                             const TravelingWave& s2, double tau, double x_left, double dx,
                             std::size_t n, const Blend& blend = smoothstep);

struct MergingOptions {
  double dx = 0.05;
  /// Domain [-half_width, half_width]; 0 picks one that holds both profiles
  /// at the deepest tau with room for their tails.
  double half_width = 0.0;
  FluxScheme scheme = FluxScheme::Central;
  KernelMode kernel = KernelMode::Parallel;
};

struct CauchyReport {
  std::vector<double> taus;
  double comparison_time = 0.0;
  /// L1 distance between the runs started at taus[k] and taus[k + 1].
  std::vector<double> distances;
  bool strictly_decreasing = false;
  /// Least-squares slope of log(distance) against |taus[k]|.
  double log_slope = 0.0;
};

struct MergingW {
  MergingTriple triple;
  /// Window snapshots of the run started at the deepest tau.
  Trajectory trajectory;
  CauchyReport cauchy;
  double domain_half_width = 0.0;
};

/// Evolves merging_initial(tau) with unit viscosity for every tau in the
/// decreasing list and compares the runs at window.t.lo.
MergingW merging_W(const MergingTriple& triple, const FluxModel& flux,
                   const std::vector<double>& tau_list, const Window& window,
                   const MergingOptions& options = {});

struct EternalZOptions {
  double dx = 0.02;
  /// Truncation |x| <= x_max; 0 picks the default rule (see default_z_truncation).
  double x_max = 0.0;
  FluxScheme scheme = FluxScheme::Central;
  KernelMode kernel = KernelMode::Parallel;
  double cfl_advection = 0.5;
  double diffusion_number = 0.45;
};

struct EternalZ {
  int n = 0;
  Window window;
  double x_max = 0.0;
  Trajectory trajectory;
};

/// Half-width holding every backward characteristic foot of the window at
/// t = -n, padded by 10 sqrt(n + t_max) + 5 for viscous spreading.
double default_z_truncation(int n, const Window& window);

/// Solves Z_t + Z Z_x = Z_xx from z(-n, .) with Dirichlet values z(t, +-x_max).
EternalZ eternal_Z(int n, const Window& window, const EternalZOptions& options = {});

struct ZConvergenceReport {
  std::vector<int> n_list;
  /// sup over the window of |Z^(n_{k+1}) - Z^(n_k)|.
  std::vector<double> successive_sup;
  /// min over window nodes with x >= 0 of Z^(n_{k+1}) - Z^(n_k).
  double worst_monotone_margin = 0.0;
  long samples = 0;
};

struct ZLimit {
  EternalZ limit;
  ZConvergenceReport report;
};

/// Runs eternal_Z for every n (increasing, at least three) and returns the
/// largest as the limit surrogate. Throws NotConverged when the last
/// successive difference exceeds tol.
ZLimit eternal_Z_limit(const std::vector<int>& n_list, const Window& window, double tol,
                       const EternalZOptions& options = {});

}  // namespace shockzoom
