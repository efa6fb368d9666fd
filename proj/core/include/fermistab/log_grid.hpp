#pragma once

#include <functional>
#include <vector>

#include "fermistab/quadrature.hpp"

namespace fermistab {

/// Uniform grid in x = log p. Default range covers ten decades of momentum.
struct LogGrid {
  double x_min;
  double x_max;
  int n_points;

  LogGrid(double x_min_, double x_max_, int n_points_);

  double spacing() const { return (x_max - x_min) / (n_points - 1); }
  double x(int i) const { return x_min + spacing() * i; }

  static LogGrid standard() { return LogGrid(-12.0, 12.0, 4096); }
};

/// A radial momentum profile g(p) sampled on a LogGrid, optionally backed by
/// a closed-form evaluator for off-grid queries. Sampled-only profiles are
/// interpolated (cubic in log p) and vanish outside the grid range.
class RadialFunction {
 public:
  using Evaluator = std::function<double(double)>;

  static RadialFunction from_function(const LogGrid& grid, Evaluator g);
  static RadialFunction from_samples(const LogGrid& grid, std::vector<double> values);

  double operator()(double p) const;
  double at_x(double x) const;  // g(e^x)

  const LogGrid& grid() const { return grid_; }
  const std::vector<double>& values() const { return values_; }
  bool has_closed_form() const { return static_cast<bool>(closed_form_); }

  double x_lo() const { return grid_.x_min; }
  double x_hi() const { return grid_.x_max; }

  /// ∫ p² |g(p)|² dp over the grid support.
  double norm_sq(const QuadratureConfig& cfg = {}) const;

  /// ∫ p² sqrt(p²+1) |g(p)|² dp, the finiteness condition on charges.
  double weighted_norm(const QuadratureConfig& cfg = {}) const;

 private:
  RadialFunction(LogGrid grid, std::vector<double> values, Evaluator closed_form);
  double interpolate(double x) const;

  LogGrid grid_;
  std::vector<double> values_;
  Evaluator closed_form_;
};

}  // namespace fermistab
