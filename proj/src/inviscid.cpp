#include "shockzoom/inviscid.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "shockzoom/error.hpp"

namespace shockzoom {

namespace {

constexpr int kDataCheckSamples = 41;
constexpr int kCharacteristicScan = 257;
constexpr double kInf = std::numeric_limits<double>::infinity();

// Bisection to machine precision on a sign change of g over [a, b].
template <class G>
double bisect(const G& g, double a, double b) {
  double ga = g(a);
  for (int it = 0; it < 200; ++it) {
    const double m = 0.5 * (a + b);
    if (m <= a || m >= b) break;
    const double gm = g(m);
    if (gm == 0.0) return m;
    if ((gm > 0.0) == (ga > 0.0)) {
      a = m;
      ga = gm;
    } else {
      b = m;
    }
  }
  return 0.5 * (a + b);
}

double residual_scale(double x) { return 1.0 + std::abs(x); }

double bracket_speed(const SmoothData& data, const FluxModel& flux) {
  const auto r = data.state_range();
  return flux.max_speed(r.lo, r.hi);
}

}  // namespace

SmoothData::SmoothData(Fn u0, Fn du0, Interval domain, Interval state_range,
                       std::optional<Fn> antiderivative)
    : u0_(std::move(u0)),
      du0_(std::move(du0)),
      domain_(domain),
      state_range_(state_range),
      antiderivative_(std::move(antiderivative)) {
  if (!(domain_.hi > domain_.lo)) fail(ErrorKind::InvalidArgument, "data domain is empty");
  if (!(state_range_.hi >= state_range_.lo)) {
    fail(ErrorKind::InvalidArgument, "data state range is empty");
  }
  for (int k = 0; k < kDataCheckSamples; ++k) {
    // Offset samples so symmetric data are not probed only at special points.
    const double s = (k + 0.5) / kDataCheckSamples;
    const double x = domain_.lo + domain_.length() * s;
    const double h = 1e-5 * (1.0 + std::abs(x));
    const double fd = (u0_(x + h) - u0_(x - h)) / (2.0 * h);
    const double d = du0_(x);
    if (std::abs(fd - d) > 1e-6 * std::max(1.0, std::abs(d))) {
      std::ostringstream os;
      os << "initial data derivative disagrees with finite differences at x = " << x << " ("
         << d << " vs " << fd << ")";
      fail(ErrorKind::InvalidArgument, os.str());
    }
  }
}

double characteristic_value(const SmoothData& data, const FluxModel& flux, double t, double x) {
  if (t == 0.0) return data.u0(x);
  // Pad the bracket so feet carried at exactly the extreme speed stay inside.
  const double speed_reach = std::abs(t) * bracket_speed(data, flux);
  const double reach = speed_reach + 1e-6 * (1.0 + speed_reach);
  const double lo = x - reach;
  const double hi = x + reach;
  auto g = [&](double xi) { return xi + t * flux.df(data.u0(xi)) - x; };

  std::vector<std::pair<double, double>> brackets;
  double prev_x = lo;
  double prev_g = g(lo);
  if (prev_g == 0.0) brackets.emplace_back(lo, lo);
  for (int k = 1; k < kCharacteristicScan; ++k) {
    const double xk = lo + (hi - lo) * k / (kCharacteristicScan - 1);
    const double gk = g(xk);
    if (gk == 0.0) {
      brackets.emplace_back(xk, xk);
    } else if (prev_g != 0.0 && (gk > 0.0) != (prev_g > 0.0)) {
      brackets.emplace_back(prev_x, xk);
    }
    prev_x = xk;
    prev_g = gk;
  }
  if (brackets.empty()) {
    std::ostringstream os;
    os << "no characteristic foot for (t, x) = (" << t << ", " << x << ")";
    fail(ErrorKind::NoBracket, os.str());
  }
  if (brackets.size() > 1) {
    std::ostringstream os;
    os << brackets.size() << " characteristic feet for (t, x) = (" << t << ", " << x << ")";
    fail(ErrorKind::MultipleRoots, os.str());
  }
  auto [a, b] = brackets.front();
  double xi = a == b ? a : bisect(g, a, b);
  // Newton polish; skipped where the data derivative is singular.
  const double dg = 1.0 + t * flux.d2f(data.u0(xi)) * data.du0(xi);
  if (std::isfinite(dg) && dg != 0.0) {
    const double next = xi - g(xi) / dg;
    if (std::abs(g(next)) <= std::abs(g(xi))) xi = next;
  }
  return data.u0(xi);
}

double blowup_time(const SmoothData& data, const FluxModel& flux, double xi) {
  const double slope = data.du0(xi);
  if (!(slope < 0.0)) return kInf;
  return 1.0 / (-flux.d2f(data.u0(xi)) * slope);
}

double single_shock(const ShockData& shock, double t, double x) {
  return x < shock.lambda * t ? shock.u_minus : shock.u_plus;
}

double two_shock(const FluxModel& flux, double u_minus, double u_star, double u_plus, double t,
                 double x) {
  if (!(u_minus > u_star && u_star > u_plus)) {
    fail(ErrorKind::NotOrdered, "two_shock needs u_minus > u_star > u_plus");
  }
  if (t >= 0.0) return single_shock(rankine_hugoniot(flux, u_minus, u_plus), t, x);
  const double lambda1 = rankine_hugoniot(flux, u_minus, u_star).lambda;
  const double lambda2 = rankine_hugoniot(flux, u_star, u_plus).lambda;
  if (x < lambda1 * t) return u_minus;
  if (x < lambda2 * t) return u_star;
  return u_plus;
}

ZPoint z_eval(double t, double x) {
  if (t > 0.0) fail(ErrorKind::InvalidArgument, "z_eval needs t <= 0");
  ZPoint p;
  p.t = t;
  p.x = x;
  double z = 0.0;
  if (x != 0.0) {
    const double q = 0.5 * x;
    const double disc = q * q - t * t * t / 27.0;
    if (disc >= 0.0) {
      // The two cube roots multiply to t/3; take the one free of cancellation.
      const double s = std::cbrt(-q - std::copysign(std::sqrt(disc), q));
      z = s != 0.0 ? s + t / (3.0 * s) : 0.0;
    } else {
      // Unreachable for t <= 0; safeguarded Newton from the odd-symmetric guess.
      z = -std::cbrt(x);
      for (int it = 0; it < 100; ++it) {
        const double r = t * z - z * z * z - x;
        const double dz = r / (t - 3.0 * z * z);
        z -= dz;
        if (std::abs(dz) <= 1e-16 * (1.0 + std::abs(z))) break;
      }
    }
    const double dr = t - 3.0 * z * z;
    if (dr != 0.0) {
      const double polished = z - (t * z - z * z * z - x) / dr;
      if (std::abs(t * polished - polished * polished * polished - x) <=
          std::abs(t * z - z * z * z - x)) {
        z = polished;
      }
    }
  }
  p.z = z;
  const double d = t - 3.0 * z * z;
  if (d == 0.0) {
    p.zx = -kInf;
    p.zxx = 0.0;
    p.zxxx = kInf;
    return p;
  }
  const double d2 = d * d;
  const double d3 = d2 * d;
  p.zx = 1.0 / d;
  p.zxx = 6.0 * z / d3;
  p.zxxx = 6.0 * p.zx / d3 + 108.0 * z * z * p.zx / (d3 * d);
  return p;
}

double z_value(double t, double x) { return z_eval(t, x).z; }

ZAuditReport z_bounds_audit(std::span<const double> t_grid, std::span<const double> x_grid) {
  enum Check {
    kZxLower,
    kZxNegative,
    kZxxSign,
    kZxxBound,
    kZxxSharp,
    kZxxxBound,
    kEnvelopeLower,
    kEnvelopeUpper,
    kResidual,
    kCount
  };
  ZAuditReport report;
  report.checks = {{"zx_lower"},      {"zx_negative"},    {"zxx_sign"},
                   {"zxx_bound"},     {"zxx_sharp"},      {"zxxx_bound"},
                   {"envelope_lower"}, {"envelope_upper"}, {"residual"}};
  for (auto& c : report.checks) c.worst_margin = kInf;

  // Bounds can hold with equality on symmetry lines; allow round-off there.
  auto record = [&](Check which, double margin, double scale) {
    auto& c = report.checks[which];
    c.worst_margin = std::min(c.worst_margin, margin);
    if (margin < -1e-12 * std::max(scale, 1e-300)) ++c.violations;
  };

  for (double t : t_grid) {
    if (!(t < 0.0)) fail(ErrorKind::InvalidArgument, "z_bounds_audit needs t < 0");
    const double abs_t = -t;
    const double zxx_bound = std::pow(abs_t, -2.5);
    const double zxx_sharp = std::pow(abs_t / 5.0, -2.5) / (std::sqrt(3.0) * 36.0);
    const double zxxx_bound = 36.0 / (t * t * t * t);
    for (double x : x_grid) {
      const ZPoint p = z_eval(t, x);
      ++report.nodes;
      const double az = std::abs(p.z);
      record(kZxLower, p.zx - 1.0 / t, 1.0 / abs_t);
      // Strict inequality: a zero derivative counts as a violation.
      {
        auto& c = report.checks[kZxNegative];
        c.worst_margin = std::min(c.worst_margin, -p.zx);
        if (!(p.zx < 0.0)) ++c.violations;
      }
      record(kZxxSign, x >= 0.0 ? p.zxx : -p.zxx, zxx_bound);
      {
        auto& c = report.checks[kZxxBound];
        const double margin = zxx_bound - std::abs(p.zxx);
        c.worst_margin = std::min(c.worst_margin, margin);
        if (!(margin > 0.0)) ++c.violations;
      }
      record(kZxxSharp, zxx_sharp - std::abs(p.zxx), zxx_sharp);
      record(kZxxxBound, zxxx_bound - std::abs(p.zxxx), zxxx_bound);
      const double lower = std::min(std::abs(x / (2.0 * t)), std::cbrt(std::abs(x) / 2.0));
      const double upper = std::min(std::abs(x / t), std::cbrt(std::abs(x)));
      record(kEnvelopeLower, az - lower, std::max(lower, 1.0));
      record(kEnvelopeUpper, upper - az, std::max(upper, 1.0));
      const double res = std::abs(x - (t * p.z - p.z * p.z * p.z)) / residual_scale(x);
      report.max_residual = std::max(report.max_residual, res);
      {
        auto& c = report.checks[kResidual];
        const double margin = 1e-10 - res;
        c.worst_margin = std::min(c.worst_margin, margin);
        if (margin < 0.0) ++c.violations;
      }
    }
  }
  for (const auto& c : report.checks) report.violations += c.violations;
  return report;
}

EntropySolution::EntropySolution(SmoothData data, FluxModel flux, double scan_step)
    : data_(std::move(data)), flux_(std::move(flux)), scan_step_(scan_step) {
  if (!(scan_step_ > 0.0)) fail(ErrorKind::InvalidArgument, "scan step must be positive");
}

double EntropySolution::primitive(double a, double b) const {
  if (data_.has_antiderivative()) return data_.antiderivative(b) - data_.antiderivative(a);
  // Composite Simpson resolved at a quarter of the scan step.
  const double len = b - a;
  const int n = std::max(2, 2 * static_cast<int>(std::ceil(std::abs(len) / (0.5 * scan_step_))));
  const double h = len / n;
  double sum = data_.u0(a) + data_.u0(b);
  for (int i = 1; i < n; ++i) sum += (i % 2 ? 4.0 : 2.0) * data_.u0(a + i * h);
  return sum * h / 3.0;
}

double EntropySolution::foot(double t, double x) const {
  if (t < 0.0) fail(ErrorKind::InvalidArgument, "EntropySolution is defined for t >= 0");
  if (t == 0.0) return x;
  const double reach = t * bracket_speed(data_, flux_) + scan_step_;
  const double lo = x - reach;
  const double hi = x + reach;
  auto g = [&](double y) { return y + t * flux_.df(data_.u0(y)) - x; };
  const int n = std::max(16, static_cast<int>(std::ceil((hi - lo) / scan_step_)));

  std::vector<double> roots;
  double prev_y = lo;
  double prev_g = g(lo);
  if (prev_g == 0.0) roots.push_back(lo);
  for (int k = 1; k <= n; ++k) {
    const double y = lo + (hi - lo) * k / n;
    const double gy = g(y);
    if (gy == 0.0) {
      roots.push_back(y);
    } else if (prev_g != 0.0 && (gy > 0.0) != (prev_g > 0.0)) {
      roots.push_back(bisect(g, prev_y, y));
    }
    prev_y = y;
    prev_g = gy;
  }
  if (roots.empty()) {
    std::ostringstream os;
    os << "no characteristic foot for (t, x) = (" << t << ", " << x << ")";
    fail(ErrorKind::NoBracket, os.str());
  }
  if (roots.size() == 1) return roots.front();

  auto legendre = [&](double y) {
    const double u = data_.u0(y);
    return t * (u * flux_.df(u) - flux_.f(u));
  };
  double best = roots.front();
  double best_value = legendre(best);
  double acc = 0.0;
  for (std::size_t k = 1; k < roots.size(); ++k) {
    acc += primitive(roots[k - 1], roots[k]);
    const double value = acc + legendre(roots[k]);
    if (value < best_value) {
      best_value = value;
      best = roots[k];
    }
  }
  return best;
}

double EntropySolution::operator()(double t, double x) const { return data_.u0(foot(t, x)); }

double EntropySolution::locate_shock(double t, double lo, double hi) const {
  const int n = std::max(32, static_cast<int>(std::ceil((hi - lo) / scan_step_)));
  double best_jump = 0.0;
  double a = lo;
  double b = hi;
  double prev = foot(t, lo);
  for (int k = 1; k <= n; ++k) {
    const double x = lo + (hi - lo) * k / n;
    const double f = foot(t, x);
    if (f - prev > best_jump) {
      best_jump = f - prev;
      a = lo + (hi - lo) * (k - 1) / n;
      b = x;
    }
    prev = f;
  }
  if (best_jump <= 0.0) return kInf;
  // The foot jumps by O(1) across the shock and varies smoothly elsewhere.
  double fa = foot(t, a);
  double fb = foot(t, b);
  for (int it = 0; it < 80 && b - a > 1e-14 * (1.0 + std::abs(a)); ++it) {
    const double m = 0.5 * (a + b);
    const double fm = foot(t, m);
    if (fm - fa > fb - fm) {
      b = m;
      fb = fm;
    } else {
      a = m;
      fa = fm;
    }
  }
  return 0.5 * (a + b);
}

}  // namespace shockzoom
