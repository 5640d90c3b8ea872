#include <cmath>
#include <vector>

#include "doctest.h"
#include "shockzoom/error.hpp"
#include "shockzoom/inviscid.hpp"

using namespace shockzoom;

namespace {

SmoothData linear_data(double slope) {
  return SmoothData([=](double x) { return slope * x; }, [=](double) { return slope; },
                    {-5.0, 5.0}, {-20.0, 20.0});
}

// Brute-force oracle: scan xi for a residual sign change, then bisect.
double scan_root(const std::function<double(double)>& g, double lo, double hi) {
  const int n = 20000;
  double a = lo, ga = g(lo);
  for (int k = 1; k <= n; ++k) {
    double b = lo + (hi - lo) * k / n;
    const double gb = g(b);
    if ((ga <= 0) != (gb <= 0)) {
      for (int it = 0; it < 100; ++it) {
        const double m = 0.5 * (a + b);
        if ((g(m) <= 0) == (ga <= 0)) a = m; else b = m;
      }
      return 0.5 * (a + b);
    }
    a = b;
    ga = gb;
  }
  return NAN;
}

}  // namespace

TEST_CASE("characteristic_value on linear data") {
  const auto d = linear_data(-1.0);
  CHECK(characteristic_value(d, burgers(), 0.5, 0.0) == doctest::Approx(0.0));
  const double xi = scan_root([](double s) { return s - 0.5 * s - 0.25; }, -10.0, 10.0);
  CHECK(characteristic_value(d, burgers(), 0.5, 0.25) == doctest::Approx(-xi).epsilon(1e-12));
  CHECK(characteristic_value(d, burgers(), 0.5, 0.25) == doctest::Approx(-0.5));
  CHECK(characteristic_value(d, burgers(), 0.0, 1.7) == doctest::Approx(-1.7));
}

TEST_CASE("characteristic_value detects crossing") {
  // Steep tanh compresses at t = 0.1 and crosses by t = 2.
  SmoothData d([](double x) { return -std::tanh(10 * x); },
               [](double x) { return -10.0 / std::pow(std::cosh(10 * x), 2); }, {-2.0, 2.0},
               {-1.0, 1.0});
  try {
    characteristic_value(d, burgers(), 2.0, 0.0);
    FAIL("expected MultipleRoots");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::MultipleRoots);
  }
  CHECK_NOTHROW(characteristic_value(d, burgers(), 0.05, 0.3));
}

TEST_CASE("smooth data derivative is certified") {
  auto bad = [] {
    return SmoothData([](double x) { return x * x; }, [](double x) { return x; }, {-1.0, 1.0},
                      {0.0, 1.0});
  };
  CHECK_THROWS_AS(bad(), Error);
}

TEST_CASE("blowup_time") {
  CHECK(blowup_time(linear_data(-1.0), burgers(), 0.3) == doctest::Approx(1.0));
  CHECK(blowup_time(linear_data(-2.0), burgers(), 0.3) == doctest::Approx(0.5));
  CHECK(std::isinf(blowup_time(linear_data(0.0), burgers(), 0.3)));
  CHECK(std::isinf(blowup_time(linear_data(1.0), burgers(), 0.3)));
}

TEST_CASE("shock evaluators") {
  const ShockData s{1.0, -1.0, 0.0};
  CHECK(single_shock(s, 1.0, -1.0) == 1.0);
  CHECK(single_shock(s, 1.0, 0.5) == -1.0);
  CHECK(single_shock(s, 1.0, 0.0) == -1.0);
  const auto b = burgers();
  CHECK(two_shock(b, 1.0, 0.0, -1.0, -1.0, 0.0) == 0.0);
  CHECK(two_shock(b, 1.0, 0.0, -1.0, 1.0, 1.0) == -1.0);
  CHECK(two_shock(b, 1.0, 0.0, -1.0, -1.0, -10.0) == 1.0);
  CHECK(two_shock(b, 1.0, 0.0, -1.0, -1.0, 0.6) == -1.0);
  try {
    two_shock(b, 1.0, 2.0, -1.0, -1.0, 0.0);
    FAIL("expected NotOrdered");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NotOrdered);
  }
}

TEST_CASE("z_eval reference values") {
  CHECK(z_eval(0.0, 8.0).z == doctest::Approx(-2.0).epsilon(1e-14));
  const auto o = z_eval(-3.0, 0.0);
  CHECK(o.z == 0.0);
  CHECK(o.zxx == 0.0);
  CHECK(z_eval(-1.0, 2.0).z == doctest::Approx(-1.0).epsilon(1e-14));
  const auto p = z_eval(-1.0, 0.0);
  CHECK(p.zx == doctest::Approx(-1.0));
  CHECK(p.zxxx == doctest::Approx(6.0));
  CHECK_THROWS_AS(z_eval(0.5, 1.0), Error);
}

TEST_CASE("z derivatives match finite differences and symmetries") {
  for (double t : {-0.1, -1.0, -7.0}) {
    for (double x : {-30.0, -1.3, 0.2, 4.0, 100.0}) {
      const auto p = z_eval(t, x);
      const double h = 1e-4 * (1.0 + std::abs(x));
      CHECK(p.zx == doctest::Approx((z_value(t, x + h) - z_value(t, x - h)) / (2 * h)).epsilon(1e-6));
      CHECK(p.zxx == doctest::Approx((z_eval(t, x + h).zx - z_eval(t, x - h).zx) / (2 * h)).epsilon(1e-5));
      CHECK(p.zxxx == doctest::Approx((z_eval(t, x + h).zxx - z_eval(t, x - h).zxx) / (2 * h)).epsilon(1e-5));
      const auto m = z_eval(t, -x);
      CHECK(m.z == doctest::Approx(-p.z).epsilon(1e-14));
      CHECK(m.zx == doctest::Approx(p.zx).epsilon(1e-13));
      CHECK(m.zxx == doctest::Approx(-p.zxx).epsilon(1e-12));
      CHECK(m.zxxx == doctest::Approx(p.zxxx).epsilon(1e-12));
      for (double d : {0.5, 2.0}) {
        CHECK(z_value(d * d * t, d * d * d * x) / d == doctest::Approx(p.z).epsilon(1e-10));
      }
    }
  }
}

TEST_CASE("z residual stays small near the origin at large |t|") {
  for (double x : {1e-12, 1e-8, 1e-3, 0.5}) {
    const auto p = z_eval(-1000.0, x);
    CHECK(std::abs(x - (p.t * p.z - p.z * p.z * p.z)) <= 1e-10 * (1 + x));
    CHECK(p.z == doctest::Approx(-x / 1000.0).epsilon(1e-6));
  }
}

TEST_CASE("z_bounds_audit on the standard grid") {
  std::vector<double> ts, xs;
  for (int i = 0; i < 100; ++i) ts.push_back(-10.0 + 9.5 * i / 99.0);
  for (int j = 0; j < 100; ++j) xs.push_back(-50.0 + 100.0 * j / 99.0);
  const auto r = z_bounds_audit(ts, xs);
  CHECK(r.nodes == 10000);
  CHECK(r.violations == 0);
  CHECK(r.max_residual <= 1e-10);

  // The sharp bound is attained where 15 z^2 = -t.
  for (double t : {-0.5, -2.0, -9.0}) {
    const double z = -std::sqrt(-t / 15.0);
    const double x = t * z - z * z * z;
    const double sharp = std::pow(-t / 5.0, -2.5) / (std::sqrt(3.0) * 36.0);
    CHECK(std::abs(z_eval(t, x).zxx) == doctest::Approx(sharp).epsilon(1e-10));
    CHECK(sharp < std::pow(-t, -2.5));
  }
  const std::vector<double> bad{0.0};
  CHECK_THROWS_AS(z_bounds_audit(bad, xs), Error);
}

TEST_CASE("characteristics of cube-root data reproduce z") {
  // Data z(-1, x): smooth, decreasing, and the characteristic solution is z itself.
  SmoothData d([](double x) { return z_value(-1.0, x); }, [](double x) { return z_eval(-1.0, x).zx; },
               {-5.0, 5.0}, {-4.0, 4.0});
  for (double s : {0.2, 0.5, 0.9}) {
    for (double x : {-3.0, -0.4, 0.0, 1.1}) {
      CHECK(characteristic_value(d, burgers(), s, x) ==
            doctest::Approx(z_value(-1.0 + s, x)).epsilon(1e-10));
    }
  }
}

TEST_CASE("Lax-Oleinik entropy solution of a ramp") {
  // u0 = -tanh(x / w): shock at x = 0 for all t after breaking, states from characteristics.
  const double w = 0.5;
  SmoothData d([=](double x) { return -std::tanh(x / w); },
               [=](double x) { return -1.0 / (w * std::pow(std::cosh(x / w), 2)); }, {-3.0, 3.0},
               {-1.0, 1.0});
  EntropySolution e(d, burgers(), 0.01);
  const double t = 1.0;
  CHECK(e.locate_shock(t, -0.5, 0.6) == doctest::Approx(0.0).epsilon(1e-9));
  // Left of the shock the value is carried from a foot y with x = y + t u0(y).
  const double x = -0.2;
  const auto u = e(t, x);
  const double y = x - t * u;
  CHECK(u == doctest::Approx(-std::tanh(y / w)).epsilon(1e-10));
  CHECK(u > 0.0);
  // Smooth region before breaking agrees with characteristic_value.
  CHECK(e(0.3, 0.7) == doctest::Approx(characteristic_value(d, burgers(), 0.3, 0.7)).epsilon(1e-10));

  // Riemann-like asymmetric data: the shock moves at the chord speed.
  SmoothData r([](double x) { return 0.5 - 0.5 * std::tanh(x / 0.1); },
               [](double x) { return -0.5 / (0.1 * std::pow(std::cosh(x / 0.1), 2)); },
               {-2.0, 2.0}, {0.0, 1.0});
  EntropySolution er(r, burgers(), 0.005);
  CHECK(er.locate_shock(4.0, 1.0, 3.0) == doctest::Approx(2.0).epsilon(1e-2));
}
