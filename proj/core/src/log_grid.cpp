#include "fermistab/log_grid.hpp"

#include <cmath>
#include <utility>

#include "fermistab/errors.hpp"

namespace fermistab {

LogGrid::LogGrid(double x_min_, double x_max_, int n_points_)
    : x_min(x_min_), x_max(x_max_), n_points(n_points_) {
  if (!(x_min < x_max)) throw DomainError("LogGrid: requires x_min < x_max");
  if (n_points < 16) throw DomainError("LogGrid: requires n_points >= 16");
  if (!std::isfinite(x_min) || !std::isfinite(x_max))
    throw DomainError("LogGrid: bounds must be finite");
}

RadialFunction::RadialFunction(LogGrid grid, std::vector<double> values, Evaluator closed_form)
    : grid_(grid), values_(std::move(values)), closed_form_(std::move(closed_form)) {
  for (double v : values_) {
    if (!std::isfinite(v)) throw DomainError("RadialFunction: non-finite sample value");
  }
  // Finiteness gate on the weighted norm: trapezoid on the grid is enough to
  // reject profiles that blow up; exact values come from quadrature later.
  const double h = grid_.spacing();
  double acc = 0.0;
  for (int i = 0; i < grid_.n_points; ++i) {
    const double x = grid_.x(i);
    const double q = std::exp(2.0 * x) * values_[i];  // e^{2x} g
    if (q == 0.0) continue;
    const double w = (i == 0 || i == grid_.n_points - 1) ? 0.5 : 1.0;
    acc += w * q * q * std::sqrt(1.0 + std::exp(-2.0 * x));
  }
  acc *= h;
  if (!std::isfinite(acc))
    throw DomainError("RadialFunction: weighted norm is not finite on the grid");
}

RadialFunction RadialFunction::from_function(const LogGrid& grid, Evaluator g) {
  std::vector<double> values(grid.n_points);
  for (int i = 0; i < grid.n_points; ++i) values[i] = g(std::exp(grid.x(i)));
  return RadialFunction(grid, std::move(values), std::move(g));
}

RadialFunction RadialFunction::from_samples(const LogGrid& grid, std::vector<double> values) {
  if (static_cast<int>(values.size()) != grid.n_points)
    throw DomainError("RadialFunction: sample count does not match the grid");
  return RadialFunction(grid, std::move(values), nullptr);
}

double RadialFunction::interpolate(double x) const {
  if (x < grid_.x_min || x > grid_.x_max) return 0.0;
  const double h = grid_.spacing();
  const double u = (x - grid_.x_min) / h;
  const int i = std::min(static_cast<int>(u), grid_.n_points - 2);
  const double t = u - i;
  // Catmull-Rom on the uniform grid; clamp the stencil at the ends.
  const auto& v = values_;
  const double vm = v[std::max(i - 1, 0)];
  const double v0 = v[i];
  const double v1 = v[i + 1];
  const double vp = v[std::min(i + 2, grid_.n_points - 1)];
  const double a0 = -0.5 * vm + 1.5 * v0 - 1.5 * v1 + 0.5 * vp;
  const double a1 = vm - 2.5 * v0 + 2.0 * v1 - 0.5 * vp;
  const double a2 = -0.5 * vm + 0.5 * v1;
  return ((a0 * t + a1) * t + a2) * t + v0;
}

double RadialFunction::operator()(double p) const {
  if (!(p > 0.0)) throw DomainError("RadialFunction: momentum must be > 0");
  if (closed_form_) return closed_form_(p);
  return interpolate(std::log(p));
}

double RadialFunction::at_x(double x) const {
  if (closed_form_) return closed_form_(std::exp(x));
  return interpolate(x);
}

double RadialFunction::norm_sq(const QuadratureConfig& cfg) const {
  // ∫ p² g² dp = ∫ e^{3x} g(e^x)² dx, evaluated as (e^{1.5x} g)².
  auto integrand = [this](double x) {
    const double q = std::exp(1.5 * x) * at_x(x);
    return q * q;
  };
  return integrate_adaptive(integrand, x_lo(), x_hi(), cfg);
}

double RadialFunction::weighted_norm(const QuadratureConfig& cfg) const {
  auto integrand = [this](double x) {
    const double q = std::exp(2.0 * x) * at_x(x);
    if (q == 0.0) return 0.0;
    return q * q * std::sqrt(1.0 + std::exp(-2.0 * x));
  };
  return integrate_adaptive(integrand, x_lo(), x_hi(), cfg);
}

}  // namespace fermistab
