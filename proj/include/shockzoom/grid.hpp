#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace shockzoom {

/// Uniformly sampled profile on [x_left, x_left + (n-1) dx].
class GridFunction {
 public:
  GridFunction() = default;
  GridFunction(double x_left, double dx, std::vector<double> values);

  /// Samples `fn` at n nodes starting at x_left.
  static GridFunction sample(double x_left, double dx, std::size_t n,
                             const std::function<double(double)>& fn);
  /// n nodes spanning [lo, hi] inclusive.
  static GridFunction linspace(double lo, double hi, std::size_t n,
                               const std::function<double(double)>& fn);

  double x_left() const { return x_left_; }
  double dx() const { return dx_; }
  double x_right() const { return x(size() - 1); }
  std::size_t size() const { return values_.size(); }
  double x(std::size_t i) const { return x_left_ + static_cast<double>(i) * dx_; }

  double operator[](std::size_t i) const { return values_[i]; }
  double& operator[](std::size_t i) { return values_[i]; }
  std::span<const double> values() const { return values_; }
  std::span<double> values() { return values_; }

  bool contains(double x) const;
  /// Linear interpolation; throws OutOfDomain outside [x_left, x_right].
  double interpolate(double x) const;
  /// Same size and spacing, nodes coinciding to 1e-9 dx.
  bool same_grid(const GridFunction& other) const;
  /// Sub-grid of nodes whose positions fall in [lo, hi].
  GridFunction crop(double lo, double hi) const;

  double min() const;
  double max() const;
  bool all_finite() const;

 private:
  double x_left_ = 0.0;
  double dx_ = 1.0;
  std::vector<double> values_;
};

struct Snapshot {
  double t = 0.0;
  GridFunction u;
};

using Trajectory = std::vector<Snapshot>;

/// Trapezoid rule of values * dx.
double mass(const GridFunction& state);

/// Trapezoid integral of |a - b|; throws GridMismatch on different grids.
double l1_distance(const GridFunction& a, const GridFunction& b);

/// sup |a - b| on a common grid.
double sup_distance(const GridFunction& a, const GridFunction& b);

/// max_i (u[i+1] - u[i]) / dx.
double max_forward_slope(const GridFunction& state);

}  // namespace shockzoom
