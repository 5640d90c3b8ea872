#include "shockzoom/kernels.hpp"

#include <cmath>
#include <cstdlib>
#include <cstddef>
#include <exception>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace shockzoom::kernels {

namespace {

// Below this size thread start-up costs more than the loop.
constexpr std::ptrdiff_t kParallelThreshold = 2048;

inline double face(const double* fu, const double* su, const double* u, std::ptrdiff_t i,
                   std::ptrdiff_t j, bool llf) {
  const double central = 0.5 * (fu[i] + fu[j]);
  if (!llf) return central;
  const double alpha = su[i] > su[j] ? su[i] : su[j];
  return central - 0.5 * alpha * (u[j] - u[i]);
}

inline double node_update(const double* u, const double* ff, std::ptrdiff_t i,
                          std::ptrdiff_t left, std::ptrdiff_t right, std::ptrdiff_t face_left,
                          double inv_dx, double nu) {
  return -(ff[i] - ff[face_left]) * inv_dx + nu * (u[right] - 2.0 * u[i] + u[left]);
}

}  // namespace

int thread_count() {
#ifdef _OPENMP
  int n = omp_get_max_threads();
  if (const char* env = std::getenv("SHOCKZOOM_THREADS")) {
    const int cap = std::atoi(env);
    if (cap > 0 && cap < n) n = cap;
  }
  return n;
#else
  return 1;
#endif
}

void apply_operator_serial(std::span<const double> u, std::span<double> out,
                           const OperatorArgs& args, const Workspace& ws) {
  const auto n = static_cast<std::ptrdiff_t>(u.size());
  const double* up = u.data();
  double* fu = ws.node_flux.data();
  double* su = ws.node_speed.data();
  double* ff = ws.face_flux.data();
  const bool llf = args.scheme == FluxScheme::LocalLaxFriedrichs;
  const double inv_dx = 1.0 / args.dx;
  const double nu = args.viscosity * inv_dx * inv_dx;
  const FluxModel& flux = *args.flux;

  for (std::ptrdiff_t i = 0; i < n; ++i) {
    fu[i] = flux.f(up[i]);
    su[i] = std::abs(flux.df(up[i]));
  }
  // ff[i] sits between nodes i and i+1.
  for (std::ptrdiff_t i = 0; i + 1 < n; ++i) ff[i] = face(fu, su, up, i, i + 1, llf);

  if (args.periodic) {
    const std::ptrdiff_t m = n - 1;  // distinct nodes
    out[0] = node_update(up, ff, 0, m - 1, 1, m - 1, inv_dx, nu);
    for (std::ptrdiff_t i = 1; i < m; ++i) {
      out[i] = node_update(up, ff, i, i - 1, i + 1, i - 1, inv_dx, nu);
    }
    out[m] = out[0];
  } else {
    out[0] = 0.0;
    out[n - 1] = 0.0;
    for (std::ptrdiff_t i = 1; i + 1 < n; ++i) {
      out[i] = node_update(up, ff, i, i - 1, i + 1, i - 1, inv_dx, nu);
    }
  }
}

void apply_operator_parallel(std::span<const double> u, std::span<double> out,
                             const OperatorArgs& args, const Workspace& ws) {
  const auto n = static_cast<std::ptrdiff_t>(u.size());
  const double* up = u.data();
  double* fu = ws.node_flux.data();
  double* su = ws.node_speed.data();
  double* ff = ws.face_flux.data();
  double* op = out.data();
  const bool llf = args.scheme == FluxScheme::LocalLaxFriedrichs;
  const double inv_dx = 1.0 / args.dx;
  const double nu = args.viscosity * inv_dx * inv_dx;
  const FluxModel& flux = *args.flux;
  const bool periodic = args.periodic;
  [[maybe_unused]] const int threads = thread_count();

#pragma omp parallel num_threads(threads) if (n >= kParallelThreshold)
  {
#pragma omp for schedule(static)
    for (std::ptrdiff_t i = 0; i < n; ++i) {
      fu[i] = flux.f(up[i]);
      su[i] = std::abs(flux.df(up[i]));
    }
#pragma omp for schedule(static)
    for (std::ptrdiff_t i = 0; i < n - 1; ++i) ff[i] = face(fu, su, up, i, i + 1, llf);

#pragma omp for schedule(static)
    for (std::ptrdiff_t i = 1; i < n - 1; ++i) {
      op[i] = node_update(up, ff, i, i - 1, i + 1, i - 1, inv_dx, nu);
    }
#pragma omp single
    {
      if (periodic) {
        const std::ptrdiff_t m = n - 1;
        op[0] = node_update(up, ff, 0, m - 1, 1, m - 1, inv_dx, nu);
        op[m] = op[0];
      } else {
        op[0] = 0.0;
        op[n - 1] = 0.0;
      }
    }
  }
}

void combine_serial(std::span<const double> x, std::span<const double> y,
                    std::span<const double> r, double a, double b, double dt,
                    std::span<double> out) {
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = a * x[i] + b * (y[i] + dt * r[i]);
}

void combine_parallel(std::span<const double> x, std::span<const double> y,
                      std::span<const double> r, double a, double b, double dt,
                      std::span<double> out) {
  const auto n = static_cast<std::ptrdiff_t>(out.size());
  const double* xp = x.data();
  const double* yp = y.data();
  const double* rp = r.data();
  double* op = out.data();
  [[maybe_unused]] const int threads = thread_count();
#pragma omp parallel for schedule(static) num_threads(threads) if (n >= kParallelThreshold)
  for (std::ptrdiff_t i = 0; i < n; ++i) op[i] = a * xp[i] + b * (yp[i] + dt * rp[i]);
}

void run_members(std::size_t count, const std::function<void(std::size_t)>& fn) {
  std::vector<std::exception_ptr> errors(count);
  const auto n = static_cast<std::ptrdiff_t>(count);
#pragma omp parallel for schedule(dynamic, 1) num_threads(thread_count()) if (n > 1)
  for (std::ptrdiff_t k = 0; k < n; ++k) {
    try {
      fn(static_cast<std::size_t>(k));
    } catch (...) {
      errors[static_cast<std::size_t>(k)] = std::current_exception();
    }
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

}  // namespace shockzoom::kernels
