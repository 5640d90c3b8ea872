#pragma once

#include <cstddef>
#include <functional>
#include <span>

#include "shockzoom/flux.hpp"

namespace shockzoom::kernels {

enum class FluxScheme { Central, LocalLaxFriedrichs };

/// Inputs of the semi-discrete operator
///   L(u)_i = -(F_{i+1/2} - F_{i-1/2}) / dx + eps (u_{i+1} - 2 u_i + u_{i-1}) / dx^2.
///
/// Periodic grids store the closing node twice (u[n-1] == u[0]); the operator
/// is applied to nodes 0..n-2 only. Non-periodic grids leave the two end nodes
/// untouched (out[0] = out[n-1] = 0).
struct OperatorArgs {
  const FluxModel* flux = nullptr;
  double viscosity = 0.0;
  double dx = 1.0;
  FluxScheme scheme = FluxScheme::LocalLaxFriedrichs;
  bool periodic = false;
};

/// Scratch arrays sized n (node fluxes, node speeds) and n (interface fluxes).
struct Workspace {
  std::span<double> node_flux;
  std::span<double> node_speed;
  std::span<double> face_flux;
};

/// Reference implementation, single threaded.
void apply_operator_serial(std::span<const double> u, std::span<double> out,
                           const OperatorArgs& args, const Workspace& ws);

/// OpenMP implementation; bitwise identical to the serial one.
void apply_operator_parallel(std::span<const double> u, std::span<double> out,
                             const OperatorArgs& args, const Workspace& ws);

/// out = a * x + b * (y + dt * r), elementwise.
void combine_serial(std::span<const double> x, std::span<const double> y,
                    std::span<const double> r, double a, double b, double dt,
                    std::span<double> out);
void combine_parallel(std::span<const double> x, std::span<const double> y,
                      std::span<const double> r, double a, double b, double dt,
                      std::span<double> out);

/// Number of threads the parallel kernels use; capped by SHOCKZOOM_THREADS.
int thread_count();

/// Runs fn(0..count-1) as independent members in parallel. Kernels called
/// inside a member run on one thread. The exception of the lowest failing
/// index is rethrown after all members finish.
void run_members(std::size_t count, const std::function<void(std::size_t)>& fn);

}  // namespace shockzoom::kernels
