#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "shockzoom/diagnostics.hpp"
#include "shockzoom/flux.hpp"
#include "shockzoom/grid.hpp"
#include "shockzoom/inviscid.hpp"
#include "shockzoom/rescale.hpp"

namespace shockzoom {

enum class ScenarioKind { SingleShock, MergingShocks, ShockFormation };
enum class FrameKind { Type1, Type2 };

/// An initial datum together with its singular point and exact inviscid solution.
struct Scenario {
  std::string id;
  FluxModel flux;
  ScenarioKind kind = ScenarioKind::SingleShock;
  FrameKind frame_kind = FrameKind::Type1;
  double tau = 1.0;
  double xi = 0.0;

  std::function<double(double)> initial{};
  /// Present when the datum is smooth.
  std::optional<SmoothData> smooth{};
  /// Exact entropy solution u(t, x) for t >= 0.
  Evaluator reference{};
  /// Piecewise-constant pattern about (tau, xi): the asymptotic shock picture.
  Evaluator pattern{};

  double u_minus = 0.0;
  double u_star = 0.0;
  double u_plus = 0.0;
  /// Formation-point data for Type-2 scenarios.
  FormationPoint formation{};
  /// Construction checks; every margin must be non-negative.
  std::vector<AuditEntry> validity{};

  GridFunction sample(double x_left, double dx, std::size_t n) const;
  RescaleFrame frame(double eps) const;
  bool valid() const;
};

/// Ramp u_minus -> u_plus of tanh width `width` whose inviscid shock passes
/// through (1, lambda); width 0 gives Riemann data. Throws NotLax.
Scenario theorem1_single(const FluxModel& flux, double u_minus, double u_plus,
                         double width = 0.5);

/// Two ramps whose inviscid shocks meet at (1, 0); width 0 picks a twentieth of
/// the ramp separation. Throws NotOrdered.
Scenario theorem1_merging(const FluxModel& flux, double u_minus, double u_star, double u_plus,
                          double width = 0.0);

/// Data whose characteristics at t = tau trace x = xi - amplitude (u - u_center)^3,
/// held constant outside |x - xi| <= clamp. Throws Degenerate unless amplitude > 0.
Scenario theorem2_formation(const FluxModel& flux, double amplitude = 1.0, double clamp = 3.0,
                            double tau = 1.0, double xi = 0.0, double u_center = 0.0);

/// Lookup by id: "theorem1-single" (u_minus, u_plus, width), "theorem1-merging"
/// (u_minus, u_star, u_plus, width), "theorem2-formation" (amplitude, clamp).
Scenario make_scenario(const std::string& id, const FluxModel& flux,
                       const std::vector<double>& params);

}  // namespace shockzoom
