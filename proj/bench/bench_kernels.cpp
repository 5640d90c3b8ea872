// Serial versus OpenMP timing of the semi-discrete operator.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <vector>

#include "shockzoom/kernels.hpp"

using namespace shockzoom;

namespace {

template <class Fn>
double best_seconds(int repeats, Fn&& fn) {
  double best = 1e300;
  for (int r = 0; r < 5; ++r) {
    const auto start = std::chrono::steady_clock::now();
    for (int k = 0; k < repeats; ++k) fn();
    const auto stop = std::chrono::steady_clock::now();
    best = std::min(best, std::chrono::duration<double>(stop - start).count() / repeats);
  }
  return best;
}

}  // namespace

int main() {
  const FluxModel flux = burgers();
  std::printf("threads %d\n", kernels::thread_count());
  std::printf("%10s %8s %14s %14s %8s %6s\n", "nodes", "scheme", "serial_us", "parallel_us",
              "speedup", "equal");
  for (std::size_t n : {1024u, 16384u, 262144u, 2097152u}) {
    std::vector<double> u(n), a(n), b(n), fu(n), su(n), ff(n);
    const double dx = 20.0 / static_cast<double>(n - 1);
    for (std::size_t i = 0; i < n; ++i) u[i] = -std::tanh(-10.0 + dx * static_cast<double>(i));
    const kernels::Workspace ws{fu, su, ff};
    for (auto scheme : {kernels::FluxScheme::Central, kernels::FluxScheme::LocalLaxFriedrichs}) {
      const kernels::OperatorArgs args{&flux, 0.01, dx, scheme, false};
      const int repeats = static_cast<int>(std::max<std::size_t>(1, 4000000 / n));
      const double ts = best_seconds(repeats, [&] { kernels::apply_operator_serial(u, a, args, ws); });
      const double tp = best_seconds(repeats, [&] { kernels::apply_operator_parallel(u, b, args, ws); });
      std::printf("%10zu %8s %14.2f %14.2f %8.2f %6s\n", n,
                  scheme == kernels::FluxScheme::Central ? "central" : "llf", ts * 1e6, tp * 1e6,
                  ts / tp, a == b ? "yes" : "no");
    }
  }
  return 0;
}
