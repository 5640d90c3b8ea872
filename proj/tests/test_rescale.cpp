#include <cmath>
#include <random>
#include <vector>

#include "doctest.h"
#include "shockzoom/error.hpp"
#include "shockzoom/inviscid.hpp"
#include "shockzoom/rescale.hpp"

using namespace shockzoom;

namespace {

const std::vector<double> kTimes{-2.0, -1.0, -0.5};

GridFunction x_template(double lo, double hi, std::size_t n) {
  return GridFunction::linspace(lo, hi, n, [](double) { return 0.0; });
}

}  // namespace

TEST_CASE("frame exponents and identity zoom") {
  const auto t1 = RescaleFrame::type1(0.1, 1.0, 2.0);
  CHECK(t1.alpha == 1.0);
  CHECK(t1.beta == 1.0);
  CHECK(t1.gamma == 0.0);
  const auto t2 = RescaleFrame::type2(0.1, 1.0, 2.0);
  CHECK(t2.alpha == 0.5);
  CHECK(t2.beta == 0.75);
  CHECK(t2.gamma == 0.25);
  CHECK(t2.zoom_t(t2.physical_t(-1.3)) == doctest::Approx(-1.3));
  CHECK(t2.zoom_x(t2.physical_x(0.7)) == doctest::Approx(0.7));

  const RescaleFrame id{0.0, 0.0, 1.0, 0.5, 0.75, 0.0, 0.0};
  Evaluator f = [](double t, double x) { return std::sin(t) * x; };
  const auto g = zoom_sample(f, id, kTimes, x_template(-1, 1, 21));
  for (const auto& s : g) {
    for (std::size_t i = 0; i < s.u.size(); ++i) CHECK(s.u[i] == f(s.t, s.u.x(i)));
  }
}

TEST_CASE("type-2 zoom of z returns z") {
  Evaluator z = [](double t, double x) { return z_value(t, x); };
  for (double delta : {0.5, 0.2}) {
    const auto frame = RescaleFrame::type2(std::pow(delta, 4), 0.0, 0.0);
    const auto g = zoom_sample(z, frame, kTimes, x_template(-4, 4, 33));
    for (const auto& s : g) {
      for (std::size_t i = 0; i < s.u.size(); ++i) {
        CHECK(s.u[i] == doctest::Approx(z_value(s.t, s.u.x(i))).epsilon(1e-10));
      }
    }
  }
}

TEST_CASE("type-1 zoom of a stationary shock is eps independent") {
  const ShockData sh{1.0, -1.0, 0.0};
  Evaluator u = [&](double t, double x) { return single_shock(sh, t, x); };
  const std::vector<double> ts{-0.5, 0.0, 0.5};
  const auto a = zoom_sample(u, RescaleFrame::type1(0.1, 1.0, 0.0), ts, x_template(-5, 5, 40));
  const auto b = zoom_sample(u, RescaleFrame::type1(0.001, 1.0, 0.0), ts, x_template(-5, 5, 40));
  for (std::size_t k = 0; k < ts.size(); ++k) CHECK(sup_distance(a[k].u, b[k].u) == 0.0);
}

TEST_CASE("fit_shift") {
  auto templ = [](double x) { return -std::tanh(x / 2); };
  const auto p = GridFunction::linspace(-20, 20, 801, [](double x) { return -std::tanh((x - 3) / 2); });
  const auto r = fit_shift(p, templ, 0.0);
  CHECK(r.shift == doctest::Approx(3.0).epsilon(1e-12));
  CHECK(r.sup_error <= 1e-10);
  CHECK(fit_shift(GridFunction::linspace(-20, 20, 801, templ), templ, 0.0).shift ==
        doctest::Approx(0.0).epsilon(1e-12));

  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> noise(-1e-3, 1e-3);
  auto noisy = p;
  for (auto& v : noisy.values()) v += noise(rng);
  const auto rn = fit_shift(noisy, templ, 0.0);
  CHECK(std::abs(rn.shift - 3.0) <= 5e-3);
  CHECK(rn.sup_error <= 2e-3);

  // Equivariance under translation by a non-node offset.
  const auto q = GridFunction::linspace(-20, 20, 801, [](double x) { return -std::tanh((x - 3.37) / 2); });
  CHECK(fit_shift(q, templ, 0.0).shift - r.shift == doctest::Approx(0.37).epsilon(1e-4));

  const auto flat = GridFunction::linspace(-1, 1, 11, [](double) { return 0.5; });
  try {
    fit_shift(flat, templ, 0.0);
    FAIL("expected NoCrossing");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NoCrossing);
  }
}

TEST_CASE("fit_frame_theorem2") {
  const auto b = burgers();
  auto canon = fit_frame_theorem2({1.0, 0.0, 0.0, 0.0, 0.0, -6.0}, b);
  CHECK(canon.c == doctest::Approx(1.0));
  CHECK(canon.sigma == doctest::Approx(1.0));
  CHECK(canon.lambda == doctest::Approx(0.0));

  const auto f8 = fit_frame_theorem2({1.0, 0.0, 0.0, 0.0, 0.0, -48.0}, b);
  CHECK(f8.c == doctest::Approx(0.5));
  CHECK(f8.sigma == doctest::Approx(0.5));
  CHECK(f8.lambda == doctest::Approx(0.0));
  // Oracle: near the formation time the inviscid solution solves x = s u - 8 u^3.
  for (double s : {-0.8, -0.3, -0.05}) {
    for (double x : {-2.0, -0.3, 0.0, 0.9}) {
      // Brute force: the cubic is monotone in u for s < 0; bisect.
      double lo = -10, hi = 10;
      for (int it = 0; it < 200; ++it) {
        const double m = 0.5 * (lo + hi);
        if (s * m - 8 * m * m * m - x > 0) lo = m; else hi = m;
      }
      CHECK(f8.c * z_value(f8.sigma * s, x - f8.lambda * s) ==
            doctest::Approx(0.5 * (lo + hi)).epsilon(1e-10));
    }
  }
  CHECK(fit_frame_theorem2({1.0, 0.0, 0.0, 0.0, 0.0, -6.0}, burgers_plus_linear(1.0)).lambda ==
        doctest::Approx(1.0));
  try {
    fit_frame_theorem2({1.0, 0.0, 0.0, 0.0, 0.0, 2.0}, b);
    FAIL("expected Degenerate");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Degenerate);
  }
}

TEST_CASE("convergence_rate") {
  const std::vector<double> eps{0.04, 0.02, 0.01, 0.005};
  std::vector<double> half, lin;
  for (double e : eps) half.push_back(std::sqrt(e)), lin.push_back(3 * e);
  const auto a = convergence_rate(eps, half);
  CHECK(a.slope == doctest::Approx(0.5));
  CHECK(a.residual <= 1e-12);
  const auto b = convergence_rate(eps, lin);
  CHECK(b.slope == doctest::Approx(1.0));
  CHECK(b.intercept == doctest::Approx(std::log(3.0)));
  std::vector<double> bad = lin;
  bad[2] = 0.0;
  try {
    convergence_rate(eps, bad);
    FAIL("expected NonPositive");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NonPositive);
  }
  CHECK_THROWS_AS(convergence_rate(std::span(eps).first(2), std::span(lin).first(2)), Error);
}

TEST_CASE("trajectory field interpolation and space-time fit") {
  auto f = [](double t, double x) { return -std::tanh((x - 0.3 * t) / 2) + 0.1 * t; };
  Trajectory snaps;
  for (int k = 0; k <= 200; ++k) {
    const double t = -10.0 + 0.1 * k;
    snaps.push_back({t, GridFunction::linspace(-15, 15, 601, [&](double x) { return f(t, x); })});
  }
  const TrajectoryField field(snaps);
  CHECK(field(0.05, 0.025) == doctest::Approx(f(0.05, 0.025)).epsilon(1e-3));
  CHECK_THROWS_AS(field(11.0, 0.0), Error);
  CHECK_THROWS_AS(field(0.0, 16.0), Error);

  // Zoomed data = reference shifted by (0.4, -0.7): the fit recovers it.
  Evaluator ref = [&](double t, double x) { return field(t, x); };
  std::vector<double> ts;
  for (int k = 0; k <= 20; ++k) ts.push_back(-5.0 + 0.5 * k);
  const auto zoomed = zoom_sample([&](double t, double x) { return f(t - 0.4, x + 0.7); },
                                  RescaleFrame::type1(1.0, 0.0, 0.0), ts, x_template(-5, 5, 101));
  const auto fit = fit_spacetime_shift(zoomed, ref, 2.0);
  CHECK(fit.t_shift == doctest::Approx(0.4).epsilon(1e-2));
  CHECK(fit.x_shift == doctest::Approx(-0.7).epsilon(1e-2));
  CHECK(fit.error.sup_error <= 5e-3);
  const auto exact = window_error(zoomed, [&](double t, double x) { return f(t - 0.4, x + 0.7); });
  CHECK(exact.sup_error == 0.0);
}
