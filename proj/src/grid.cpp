#include "shockzoom/grid.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "shockzoom/error.hpp"

namespace shockzoom {

GridFunction::GridFunction(double x_left, double dx, std::vector<double> values)
    : x_left_(x_left), dx_(dx), values_(std::move(values)) {
  if (!(dx_ > 0.0)) fail(ErrorKind::InvalidArgument, "grid spacing must be positive");
  if (values_.size() < 2) fail(ErrorKind::InvalidArgument, "grid needs at least two nodes");
  if (!all_finite()) fail(ErrorKind::InvalidArgument, "grid values must be finite");
}

GridFunction GridFunction::sample(double x_left, double dx, std::size_t n,
                                  const std::function<double(double)>& fn) {
  std::vector<double> v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = fn(x_left + static_cast<double>(i) * dx);
  return GridFunction(x_left, dx, std::move(v));
}

GridFunction GridFunction::linspace(double lo, double hi, std::size_t n,
                                    const std::function<double(double)>& fn) {
  if (n < 2) fail(ErrorKind::InvalidArgument, "linspace needs n >= 2");
  return sample(lo, (hi - lo) / static_cast<double>(n - 1), n, fn);
}

bool GridFunction::contains(double x) const {
  const double tol = 1e-9 * dx_;
  return x >= x_left_ - tol && x <= x_right() + tol;
}

double GridFunction::interpolate(double x) const {
  if (!contains(x)) {
    std::ostringstream os;
    os << "x = " << x << " outside [" << x_left_ << ", " << x_right() << "]";
    fail(ErrorKind::OutOfDomain, os.str());
  }
  const double s = (x - x_left_) / dx_;
  auto i = static_cast<std::ptrdiff_t>(std::floor(s));
  i = std::clamp<std::ptrdiff_t>(i, 0, static_cast<std::ptrdiff_t>(size()) - 2);
  const double w = s - static_cast<double>(i);
  const auto k = static_cast<std::size_t>(i);
  if (w == 0.0) return values_[k];
  return (1.0 - w) * values_[k] + w * values_[k + 1];
}

bool GridFunction::same_grid(const GridFunction& other) const {
  // Node positions built from different anchors agree only to round-off.
  return size() == other.size() && std::abs(dx_ - other.dx_) <= 1e-12 * dx_ &&
         std::abs(x_left_ - other.x_left_) <= 1e-9 * dx_;
}

GridFunction GridFunction::crop(double lo, double hi) const {
  const double tol = 1e-9 * dx_;
  auto first = static_cast<std::ptrdiff_t>(std::ceil((lo - x_left_) / dx_ - 1e-9));
  auto last = static_cast<std::ptrdiff_t>(std::floor((hi - x_left_) / dx_ + 1e-9));
  first = std::max<std::ptrdiff_t>(first, 0);
  last = std::min<std::ptrdiff_t>(last, static_cast<std::ptrdiff_t>(size()) - 1);
  if (last - first < 1 || x(static_cast<std::size_t>(first)) > hi + tol) {
    fail(ErrorKind::OutOfDomain, "crop window holds fewer than two nodes");
  }
  std::vector<double> v(values_.begin() + first, values_.begin() + last + 1);
  return GridFunction(x(static_cast<std::size_t>(first)), dx_, std::move(v));
}

double GridFunction::min() const { return *std::min_element(values_.begin(), values_.end()); }
double GridFunction::max() const { return *std::max_element(values_.begin(), values_.end()); }

bool GridFunction::all_finite() const {
  return std::all_of(values_.begin(), values_.end(), [](double v) { return std::isfinite(v); });
}

double mass(const GridFunction& state) {
  const auto v = state.values();
  double sum = 0.5 * (v.front() + v.back());
  for (std::size_t i = 1; i + 1 < v.size(); ++i) sum += v[i];
  return sum * state.dx();
}

double l1_distance(const GridFunction& a, const GridFunction& b) {
  if (!a.same_grid(b)) fail(ErrorKind::GridMismatch, "l1_distance needs identical grids");
  const std::size_t n = a.size();
  double sum = 0.5 * (std::abs(a[0] - b[0]) + std::abs(a[n - 1] - b[n - 1]));
  for (std::size_t i = 1; i + 1 < n; ++i) sum += std::abs(a[i] - b[i]);
  return sum * a.dx();
}

double sup_distance(const GridFunction& a, const GridFunction& b) {
  if (!a.same_grid(b)) fail(ErrorKind::GridMismatch, "sup_distance needs identical grids");
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

double max_forward_slope(const GridFunction& state) {
  double m = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i + 1 < state.size(); ++i) {
    m = std::max(m, (state[i + 1] - state[i]) / state.dx());
  }
  return m;
}

}  // namespace shockzoom
