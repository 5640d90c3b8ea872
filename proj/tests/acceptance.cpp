// Acceptance run: one PASS/FAIL line per criterion, with timing.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iterator>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "shockzoom/commands.hpp"
#include "shockzoom/config.hpp"
#include "shockzoom/diagnostics.hpp"
#include "shockzoom/error.hpp"
#include "shockzoom/experiment.hpp"
#include "shockzoom/inviscid.hpp"
#include "shockzoom/profiles.hpp"
#include "shockzoom/rescale.hpp"
#include "shockzoom/scenarios.hpp"
#include "shockzoom/solver.hpp"

using namespace shockzoom;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* format, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, format, args...);
  return buf;
}

/// Real root of x = t z - z^3 by bisection in long double; the map z -> t z - z^3
/// is strictly decreasing for t <= 0.
double cusp_root(double t, double x) {
  long double lo = -(std::cbrt(std::abs(x)) + 1.0L);
  long double hi = -lo;
  for (int it = 0; it < 200; ++it) {
    const long double mid = 0.5L * (lo + hi);
    const long double g = static_cast<long double>(t) * mid - mid * mid * mid - x;
    if (g > 0.0L) lo = mid; else hi = mid;
  }
  return static_cast<double>(0.5L * (lo + hi));
}

std::vector<double> linspace(double lo, double hi, std::size_t n) {
  std::vector<double> v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = lo + (hi - lo) * static_cast<double>(i) / (n - 1);
  return v;
}

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

int failures = 0;

void criterion(int id, const char* name, double budget_s, const std::function<Outcome()>& fn) {
  const auto start = std::chrono::steady_clock::now();
  Outcome out;
  try {
    out = fn();
  } catch (const std::exception& e) {
    out = {false, std::string("exception: ") + e.what()};
  }
  const double elapsed = seconds_since(start);
  if (budget_s > 0.0 && elapsed > budget_s) {
    out.pass = false;
    out.detail += fmt("; over the %.0f s budget", budget_s);
  }
  if (!out.pass) ++failures;
  std::printf("AC%02d %s  %-34s %8.2f s  %s\n", id, out.pass ? "PASS" : "FAIL", name, elapsed,
              out.detail.c_str());
  std::fflush(stdout);
}

// ---------------------------------------------------------------------------

Outcome traveling_wave_oracle() {
  const auto start = std::chrono::steady_clock::now();
  const auto tw = traveling_wave(burgers(), 1.0, -1.0, 20.0, 0.01);
  double worst = 0.0;
  for (double x : linspace(-20.0, 20.0, 8001)) {
    worst = std::max(worst, std::abs(tw(x) + std::tanh(x / 2.0)));
  }
  for (double x : linspace(-19.9975, 19.9975, 8000)) {
    worst = std::max(worst, std::abs(tw(x) + std::tanh(x / 2.0)));
  }
  const double elapsed = seconds_since(start);
  return {worst <= 1e-8 && elapsed < 1.0, fmt("max|S + tanh(x/2)| = %.3e", worst)};
}

struct CuspGrid {
  std::vector<double> t = linspace(-10.0, -0.5, 100);
  std::vector<double> x = linspace(-50.0, 50.0, 100);
};

Outcome cusp_bounds() {
  const CuspGrid g;
  const auto start = std::chrono::steady_clock::now();
  const auto rep = z_bounds_audit(g.t, g.x);
  const double elapsed = seconds_since(start);

  // Independent check from the bisection root and the implicit derivatives.
  long oracle_violations = 0;
  double worst_agreement = 0.0;
  auto require = [&](bool ok) { oracle_violations += ok ? 0 : 1; };
  for (double t : g.t) {
    for (double x : g.x) {
      const double z = cusp_root(t, x);
      const ZPoint p = z_eval(t, x);
      worst_agreement = std::max(worst_agreement, std::abs(p.z - z) / (1.0 + std::abs(z)));
      const double d = t - 3.0 * z * z;
      const double zx = 1.0 / d;
      const double zxx = 6.0 * z / (d * d * d);
      const double zxxx = 6.0 / std::pow(d, 4) - 108.0 / std::pow(d, 4) * z * z / (3.0 * z * z - t);
      const double slack = 1e-12;
      require(zx >= 1.0 / t * (1.0 + slack) && zx < 0.0);
      require(std::abs(zxx) < std::pow(-t, -2.5));
      require(x >= 0.0 ? zxx >= -slack : zxx <= slack);
      require(std::abs(zxxx) <= 36.0 / std::pow(t, 4) * (1.0 + slack));
      const double az = std::abs(z);
      const double lower = std::min(std::abs(x / (2.0 * t)), std::cbrt(std::abs(x) / 2.0));
      const double upper = std::min(std::abs(x / t), std::cbrt(std::abs(x)));
      require(az >= lower * (1.0 - slack) && az <= upper * (1.0 + slack));
    }
  }
  const bool pass = rep.nodes == 10000 && rep.violations == 0 && oracle_violations == 0 &&
                    worst_agreement <= 1e-12 && elapsed < 1.0;
  return {pass, fmt("nodes %ld, violations %ld, oracle violations %ld, |z - z_oracle| <= %.1e, "
                    "audit %.3f s",
                    rep.nodes, rep.violations, oracle_violations, worst_agreement, elapsed)};
}

Outcome cusp_residual() {
  const CuspGrid g;
  double worst = 0.0;
  for (double t : g.t) {
    for (double x : g.x) {
      const double z = z_eval(t, x).z;
      worst = std::max(worst, std::abs(x - (t * z - z * z * z)) / (1.0 + std::abs(x)));
    }
  }
  const auto rep = z_bounds_audit(g.t, g.x);
  return {worst <= 1e-10 && rep.max_residual <= 1e-10,
          fmt("max |x - (t z - z^3)| / (1 + |x|) = %.2e", worst)};
}

Outcome z_sandwich() {
  const double dx = 0.02;
  Window w{{-9.0, -1.0}, {-40.0, 40.0}, 1.0, {-9.0, -4.0, -1.0}};
  EternalZOptions zo;
  zo.dx = dx;
  zo.x_max = 40.0;
  const auto z = eternal_Z(16, w, zo);
  double lower = 1e300;
  double upper = 1e300;
  for (const auto& snap : z.trajectory) {
    const double band = 2.0 * std::pow(std::abs(snap.t), -1.5) + 5.0 * dx;
    for (std::size_t i = 0; i < snap.u.size(); ++i) {
      const double x = snap.u.x(i);
      const double s = x >= 0.0 ? 1.0 : -1.0;
      const double zz = s * cusp_root(snap.t, x);
      const double ZZ = s * snap.u[i];
      const double slack = 1e-12 * (1.0 + std::abs(zz));
      lower = std::min(lower, ZZ - zz + slack);
      upper = std::min(upper, zz + band - ZZ + slack);
    }
  }
  return {z.trajectory.size() == 3 && lower >= 0.0 && upper >= 0.0,
          fmt("worst lower margin %.2e, worst upper margin %.3e", lower, upper)};
}

Outcome z_monotone() {
  const std::vector<int> levels{4, 8, 16};
  Window w{{-4.0, -0.5}, {-10.0, 10.0}, 0.1, {}};
  EternalZOptions zo;
  zo.dx = 0.02;
  std::vector<TrajectoryField> fields;
  std::vector<Trajectory> runs;
  for (int n : levels) runs.push_back(eternal_Z(n, w, zo).trajectory);
  for (const auto& r : runs) fields.emplace_back(r);
  std::mt19937_64 gen(42);
  std::uniform_real_distribution<double> ut(-4.0, -0.5), ux(0.0, 10.0);
  double worst = 1e300;
  for (int k = 0; k < 100; ++k) {
    const double t = ut(gen);
    const double x = ux(gen);
    for (std::size_t j = 0; j + 1 < fields.size(); ++j) {
      worst = std::min(worst, fields[j + 1](t, x) - fields[j](t, x) + 1e-4);
    }
  }
  std::vector<double> sups;
  for (std::size_t j = 0; j + 1 < runs.size(); ++j) {
    double s = 0.0;
    for (std::size_t i = 0; i < runs[j].size(); ++i) {
      s = std::max(s, sup_distance(runs[j][i].u, runs[j + 1][i].u));
    }
    sups.push_back(s);
  }
  return {worst >= 0.0 && strictly_decreasing(sups),
          fmt("worst margin %.3e, successive sup %.4f > %.4f", worst, sups[0], sups[1])};
}

Outcome merging_cauchy() {
  const auto f = burgers();
  const auto triple = make_merging_triple(f, 1.0, 0.0, -1.0);
  Window w{{-10.0, 20.0}, {-30.0, 30.0}, 0.5, {}};
  MergingOptions mo;
  mo.dx = 0.05;
  const auto W = merging_W(triple, f, {-20.0, -30.0, -40.0}, w, mo);
  const auto& last = W.trajectory.back();
  const auto fit = fit_shift(last.u, [](double x) { return -std::tanh(x / 2.0); }, 0.0);
  const bool pass = W.cauchy.strictly_decreasing && W.cauchy.log_slope < 0.0 &&
                    fit.sup_error <= 0.05 * 2.0 && std::abs(last.t - 20.0) < 1e-9;
  return {pass, fmt("L1 distances %.3e > %.3e, log slope %.3f, fit at t = %.0f: sup %.2e",
                    W.cauchy.distances[0], W.cauchy.distances[1], W.cauchy.log_slope, last.t,
                    fit.sup_error)};
}

Outcome contraction_and_mass() {
  double worst_slack = 0.0;
  struct Case {
    Scenario s;
    Interval domain;
    double t_end;
  };
  const auto f = burgers();
  std::vector<Case> cases;
  cases.push_back({theorem1_single(f, 1.0, -1.0, 0.5), {-6.0, 6.0}, 1.2});
  cases.push_back({theorem1_merging(f, 1.0, 0.0, -1.0), {-3.0, 3.0}, 1.5});
  cases.push_back({theorem2_formation(f, 1.0, 3.0), {-5.0, 5.0}, 1.2});
  const std::vector<double> times = linspace(0.1, 1.0, 10);
  for (const auto& c : cases) {
    for (double shift : {0.1, -0.05}) {
      const std::size_t n = 2401;
      const auto u0 = GridFunction::linspace(c.domain.lo, c.domain.hi, n, c.s.initial);
      auto v0 = GridFunction::linspace(c.domain.lo, c.domain.hi, n,
                                       [&](double x) { return c.s.initial(x - shift); });
      v0[0] = u0[0];
      v0[n - 1] = u0[n - 1];
      SolverConfig cfg;
      cfg.viscosity = 0.02;
      cfg.boundary = clamp_to_ends(u0);
      std::vector<double> ts = times;
      for (double& t : ts) t *= c.t_end;
      const auto a = solve(u0, f, cfg, c.t_end, ts);
      const auto b = solve(v0, f, cfg, c.t_end, ts);
      const double d0 = l1_distance(u0, v0);
      for (std::size_t k = 0; k < a.size(); ++k) {
        worst_slack = std::max(worst_slack, (l1_distance(a[k].u, b[k].u) - d0) / d0);
      }
    }
  }
  // Periodic mass.
  const std::size_t n = 1025;
  const double dx = 2.0 * std::numbers::pi / (n - 1);
  auto p0 = GridFunction::sample(0.0, dx, n, [](double x) { return 4.0 * std::sin(x) + 0.3; });
  p0[n - 1] = p0[0];
  SolverConfig pc;
  pc.viscosity = 0.05;
  pc.boundary = Periodic{};
  const std::vector<double> pts{0.5, 1.0, 2.0};
  const auto traj = solve(p0, f, pc, 2.0, pts);
  double drift = 0.0;
  double m0 = 0.0;
  for (std::size_t i = 0; i + 1 < n; ++i) m0 += p0[i] * dx;
  for (const auto& s : traj) {
    double m = 0.0;
    for (std::size_t i = 0; i + 1 < n; ++i) m += s.u[i] * dx;
    drift = std::max(drift, std::abs(m - m0) / s.t);
  }
  return {worst_slack <= 1e-3 && drift <= 1e-10,
          fmt("worst relative L1 growth %.2e over 3 scenarios, mass drift %.2e per unit time",
              worst_slack, drift)};
}

Outcome oleinik_sine() {
  const std::size_t n = 1025;
  const double dx = 2.0 * std::numbers::pi / (n - 1);
  auto u0 = GridFunction::sample(0.0, dx, n, [](double x) { return 4.0 * std::sin(x); });
  u0[n - 1] = u0[0];
  SolverConfig cfg;
  cfg.viscosity = 1.0;
  cfg.boundary = Periodic{};
  const std::vector<double> times{0.5, 1.0, 2.0};
  const auto traj = solve(u0, burgers(), cfg, 2.0, times);
  int violations = 0;
  double worst = 1e300;
  for (const auto& s : traj) {
    double slope = -1e300;
    for (std::size_t i = 0; i + 1 < s.u.size(); ++i) slope = std::max(slope, (s.u[i + 1] - s.u[i]) / dx);
    const double margin = 1.0 / s.t + 2.0 * dx - slope;
    worst = std::min(worst, margin);
    if (margin < 0.0) ++violations;
  }
  const auto rep = oleinik_check(traj, 1.0, 2.0 * dx);
  return {violations == 0 && rep.violations == 0 && traj.size() == 3,
          fmt("violations %d, worst margin %.3f", violations, worst)};
}

Outcome kuznetsov_rate() {
  const auto f = burgers();
  const auto s = theorem1_single(f, 1.0, -1.0, 0.0);
  const auto u0 = GridFunction::linspace(-1.0, 1.0, 4096, s.initial);
  SolverConfig cfg;
  cfg.boundary = clamp_to_ends(u0);
  cfg.flux_scheme = FluxScheme::LocalLaxFriedrichs;
  // The Riemann solution between symmetric states is a standing shock.
  const auto riemann = [](double x) { return x < 0.0 ? 1.0 : -1.0; };
  const auto r = kuznetsov_audit(u0, f, {0.04, 0.02, 0.01, 0.005}, 1.0, riemann, cfg, {0.0, 1.0});
  std::string rows;
  for (const auto& row : r.rows) rows += fmt(" %.3e", row.l1_error);
  return {r.rate.slope >= 0.45, fmt("L1 slope %.3f; errors%s", r.rate.slope, rows.c_str())};
}

std::string sweep_detail(const SweepReport& r, bool use_l1) {
  std::string out = use_l1 ? "L1 errors" : "sup errors";
  for (const auto& row : r.rows) out += fmt(" %.3e", use_l1 ? row.l1_error : row.sup_error);
  return out;
}

Outcome zoom_single() {
  const auto s = theorem1_single(burgers(), 1.0, -1.0, 0.5);
  // Local state at the shock: u = tanh(u / w) with w = 0.5 along the characteristic
  // reaching x = 0- at t = 1.
  double lo = 0.5, hi = 1.0;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (std::tanh(2.0 * mid) > mid) lo = mid; else hi = mid;
  }
  const double a = 0.5 * (lo + hi);
  ZoomLimit limit;
  limit.kind = "closed-form wave";
  limit.field = [a](double, double x) { return -a * std::tanh(a * x / 2.0); };
  ZoomSweepOptions o;
  o.dx_zoom = 0.1;
  const auto r = zoom_sweep(s, {0.04, 0.02, 0.01}, o, limit);
  const double final_sup = r.rows.back().sup_error;
  return {r.sup_decreasing && final_sup <= 0.1 * 2.0,
          fmt("local state %.5f; %s", a, sweep_detail(r, false).c_str())};
}

Outcome zoom_merging() {
  const auto s = theorem1_merging(burgers(), 1.0, 0.0, -1.0);
  ZoomSweepOptions o;
  o.dx_zoom = 0.1;
  o.shift_bound = 2.0;
  const auto limit = zoom_limit(s, o);
  const auto r = zoom_sweep(s, {0.04, 0.02, 0.01}, o, limit);
  return {s.valid() && r.l1_decreasing, sweep_detail(r, true)};
}

Outcome zoom_formation() {
  const auto s = theorem2_formation(burgers(), 1.0, 3.0);
  ZoomSweepOptions o;
  o.window = Window{{-3.0, 1.0}, {-4.0, 4.0}, 0.1, {}};
  o.dx_zoom = 0.1;
  o.shift_bound = 0.0;
  o.z_levels = {64, 128, 256};
  const auto frame = s.frame(1e-2);
  const auto limit = zoom_limit(s, o);
  const auto r = zoom_sweep(s, {1e-2, 4e-3, 1.6e-3}, o, limit);
  const bool exponents = frame.alpha == 0.5 && frame.beta == 0.75 && frame.gamma == 0.25;
  return {s.valid() && exponents && r.sup_decreasing, sweep_detail(r, false)};
}

Outcome strip_linearity() {
  const auto f = burgers();
  const auto line = chord(f, 1.0, -1.0);
  auto perturbed = [](double amp) {
    return GridFunction::linspace(-15.0, 15.0, 3001, [amp](double x) {
      return -std::tanh(x / 2.0) + amp * std::exp(-(x - 1.0) * (x - 1.0));
    });
  };
  auto deviation = [&](double amp) {
    return strip_deviation(w_curve(perturbed(amp), f), line, {-1.0, 1.0});
  };
  std::vector<double> ratios;
  std::string detail = "sup_error/delta";
  for (double delta : {0.1, 0.05, 0.025}) {
    double amp = delta * 1e-3 / deviation(1e-3);
    for (int it = 0; it < 6; ++it) amp *= delta / deviation(amp);
    const auto fit = lemma31_check(perturbed(amp), f, 1.0, -1.0, delta);
    ratios.push_back(fit.sup_error / delta);
    detail += fmt(" %.3f", ratios.back());
  }
  const auto [lo, hi] = std::minmax_element(ratios.begin(), ratios.end());
  return {*hi / *lo <= 3.0, detail + fmt("; spread %.3f", *hi / *lo)};
}

Outcome phase_audit_check() {
  PhaseSetup setup;
  setup.delta0 = 0.05;
  setup.delta1 = 0.5;
  setup.tolerance = 0.1 * setup.delta1;
  const auto u0 = GridFunction::linspace(-100.0, 100.0, 2001, [](double x) { return -std::tanh(4.0 * x); });
  SolverConfig cfg;
  cfg.boundary = clamp_to_ends(u0);
  const auto r = phase_audit(u0, burgers(), setup, cfg);
  // 8 (M - m)(b - a) / (c1 delta1^2) and the larger of 1/(c1 delta1) and
  // [8 (M - m)(b - a) + 8 c1 + (u- - u+ + 2 delta1)^2 c1] / (2 c1 delta1^2).
  const double T1 = 8.0 * 2.0 * 1.0 / (1.0 * 0.25);
  const double T2 = std::max(1.0 / 0.5, (16.0 + 8.0 + 9.0) / (2.0 * 0.25));
  std::string detail = fmt("T1 %.1f, T2 %.1f;", r.times.T1, r.times.T2);
  for (const auto& e : r.entries) detail += fmt(" %s %.3f", e.check.c_str(), e.margin);
  const bool pass = r.all_pass && std::abs(r.times.T1 - T1) < 1e-12 &&
                    std::abs(r.times.T2 - T2) < 1e-12 && T1 == 64.0 && T2 == 66.0;
  return {pass, detail};
}

Outcome determinism() {
  namespace fs = std::filesystem;
  const fs::path root = fs::temp_directory_path() / "shockzoom-acceptance";
  fs::remove_all(root);
  Config cfg = Config::defaults();
  cfg.set("output.dir", (root / "out").string());
  cfg.set("scenario.id", "theorem1-merging");
  cfg.set("eps", "0.04,0.02,0.01");
  std::ostringstream log;
  auto read = [](const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    return std::string(std::istreambuf_iterator<char>(in), {});
  };
  std::vector<std::string> first;
  std::vector<fs::path> files;
  for (int pass = 0; pass < 2; ++pass) {
    fs::remove_all(root / "out");
    if (execute("run", cfg, log) != 0) return {false, "run reported failed assertions"};
    if (pass == 0) {
      for (const auto& e : fs::directory_iterator(root / "out")) files.push_back(e.path());
      std::sort(files.begin(), files.end());
      for (const auto& f : files) first.push_back(read(f));
    }
  }
  std::size_t same = 0;
  for (std::size_t i = 0; i < files.size(); ++i) same += read(files[i]) == first[i] ? 1 : 0;
  fs::remove_all(root);
  return {same == files.size() && files.size() >= 3,
          fmt("%zu of %zu files byte-identical", same, files.size())};
}

}  // namespace

int main() {
  criterion(1, "traveling-wave oracle", 1.0, traveling_wave_oracle);
  criterion(2, "cusp derivative bounds", 0.0, cusp_bounds);
  criterion(3, "cusp cubic residual", 0.0, cusp_residual);
  criterion(4, "eternal Z sandwich", 120.0, z_sandwich);
  criterion(5, "eternal Z monotone in n", 0.0, z_monotone);
  criterion(6, "merging Cauchy rate", 300.0, merging_cauchy);
  criterion(7, "L1 contraction and mass", 0.0, contraction_and_mass);
  criterion(8, "one-sided slope bound", 0.0, oleinik_sine);
  criterion(9, "vanishing-viscosity L1 rate", 600.0, kuznetsov_rate);
  criterion(10, "single-shock zoom", 0.0, zoom_single);
  criterion(11, "merging-shock zoom", 0.0, zoom_merging);
  criterion(12, "shock-formation zoom", 900.0, zoom_formation);
  criterion(13, "strip linearity", 0.0, strip_linearity);
  criterion(14, "invariant region phases", 0.0, phase_audit_check);
  criterion(15, "determinism", 0.0, determinism);
  std::printf("%d of 15 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
