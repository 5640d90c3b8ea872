#include "shockzoom/flux.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "shockzoom/error.hpp"

namespace shockzoom {

namespace {

constexpr int kCertifySamples = 65;
constexpr double kDerivativeRelTol = 1e-6;

bool close_rel(double a, double b, double tol) {
  return std::abs(a - b) <= tol * std::max(1.0, std::max(std::abs(a), std::abs(b)));
}

}  // namespace

FluxModel::FluxModel(std::string name, Fn f, Fn df, Fn d2f, double c1, double c2,
                     Interval certified_range)
    : name_(std::move(name)),
      f_(std::move(f)),
      df_(std::move(df)),
      d2f_(std::move(d2f)),
      c1_(c1),
      c2_(c2),
      range_(certified_range) {
  if (!(c1_ > 0.0) || !(c2_ >= c1_)) {
    fail(ErrorKind::InvalidArgument, "flux " + name_ + ": need 0 < c1 <= c2");
  }
  if (!(range_.hi > range_.lo)) {
    fail(ErrorKind::InvalidArgument, "flux " + name_ + ": empty certified range");
  }
  for (int k = 0; k < kCertifySamples; ++k) {
    const double u = range_.lo + range_.length() * k / (kCertifySamples - 1);
    const double curv = d2f_(u);
    if (curv < c1_ * (1.0 - 1e-12) || curv > c2_ * (1.0 + 1e-12)) {
      std::ostringstream os;
      os << "flux " << name_ << ": f''(" << u << ") = " << curv << " outside [" << c1_
         << ", " << c2_ << "]";
      fail(ErrorKind::InvalidArgument, os.str());
    }
    const double h = 1e-4 * (1.0 + std::abs(u));
    const double fd1 = (f_(u + h) - f_(u - h)) / (2.0 * h);
    const double fd2 = (df_(u + h) - df_(u - h)) / (2.0 * h);
    if (!close_rel(fd1, df_(u), kDerivativeRelTol) ||
        !close_rel(fd2, curv, kDerivativeRelTol)) {
      std::ostringstream os;
      os << "flux " << name_ << ": analytic derivatives disagree with finite differences at u = "
         << u;
      fail(ErrorKind::InvalidArgument, os.str());
    }
  }
}

double FluxModel::max_speed(double lo, double hi) const {
  return std::max(std::abs(df_(lo)), std::abs(df_(hi)));
}

double FluxModel::inverse_speed(double v) const {
  // Bracket by expanding from the certified range; f' is increasing.
  double lo = range_.lo;
  double hi = range_.hi;
  double width = std::max(1.0, range_.length());
  for (int k = 0; k < 200 && df_(lo) > v; ++k) lo -= width, width *= 2.0;
  width = std::max(1.0, range_.length());
  for (int k = 0; k < 200 && df_(hi) < v; ++k) hi += width, width *= 2.0;
  double u = 0.5 * (lo + hi);
  for (int it = 0; it < 200; ++it) {
    const double r = df_(u) - v;
    if (r > 0.0) hi = u; else lo = u;
    double next = u - r / d2f_(u);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (std::abs(next - u) <= 1e-15 * (1.0 + std::abs(u))) return next;
    u = next;
  }
  return u;
}

FluxModel burgers() {
  return FluxModel(
      "burgers", [](double u) { return 0.5 * u * u; }, [](double u) { return u; },
      [](double) { return 1.0; }, 1.0, 1.0, {-1e3, 1e3});
}

FluxModel burgers_plus_linear(double b) {
  return FluxModel(
      "burgers-linear", [b](double u) { return 0.5 * u * u + b * u; },
      [b](double u) { return u + b; }, [](double) { return 1.0; }, 1.0, 1.0, {-1e3, 1e3});
}

FluxModel quartic_perturbed(double kappa, Interval range) {
  const double umax2 = std::max(range.lo * range.lo, range.hi * range.hi);
  const double umin2 = (range.lo <= 0.0 && range.hi >= 0.0)
                           ? 0.0
                           : std::min(range.lo * range.lo, range.hi * range.hi);
  const double ends[2] = {1.0 + 12.0 * kappa * umin2, 1.0 + 12.0 * kappa * umax2};
  const double c1 = std::min(ends[0], ends[1]);
  const double c2 = std::max(ends[0], ends[1]);
  if (!(c1 > 0.0)) {
    fail(ErrorKind::InvalidArgument, "quartic flux: kappa too negative for the declared range");
  }
  return FluxModel(
      "quartic", [kappa](double u) { return 0.5 * u * u + kappa * u * u * u * u; },
      [kappa](double u) { return u + 4.0 * kappa * u * u * u; },
      [kappa](double u) { return 1.0 + 12.0 * kappa * u * u; }, c1, c2, range);
}

FluxModel make_flux(const std::string& name, const std::vector<double>& params) {
  auto param = [&](std::size_t i, double fallback) {
    return i < params.size() ? params[i] : fallback;
  };
  if (name == "burgers") return burgers();
  if (name == "burgers-linear") return burgers_plus_linear(param(0, 1.0));
  if (name == "quartic") {
    return quartic_perturbed(param(0, 0.01), {param(1, -2.0), param(2, 2.0)});
  }
  fail(ErrorKind::Config, "unknown flux '" + name + "'");
}

ShockData rankine_hugoniot(const FluxModel& flux, double u_minus, double u_plus) {
  if (u_minus == u_plus) fail(ErrorKind::EqualStates, "rankine_hugoniot needs distinct states");
  const double lambda = (flux.f(u_minus) - flux.f(u_plus)) / (u_minus - u_plus);
  return ShockData{u_minus, u_plus, lambda};
}

void require_lax(const ShockData& shock) {
  if (!shock.is_lax()) {
    std::ostringstream os;
    os << "states u- = " << shock.u_minus << ", u+ = " << shock.u_plus
       << " are not a downward jump";
    fail(ErrorKind::NotLax, os.str());
  }
}

AffineMap chord(const FluxModel& flux, double u_minus, double u_plus) {
  if (u_minus == u_plus) fail(ErrorKind::EqualStates, "chord needs distinct states");
  const double slope = (flux.f(u_minus) - flux.f(u_plus)) / (u_minus - u_plus);
  return AffineMap{slope, flux.f(u_plus) - slope * u_plus};
}

}  // namespace shockzoom
