#pragma once

#include <complex>
#include <vector>

#include "fermistab/log_grid.hpp"

namespace fermistab {

/// The ♯-transform: g♯(k) = (2π)^{-1/2} ∫ dx e^{-ikx} e^{2x} g(e^x).
/// Direct trapezoid summation on the charge's log grid; for real g one has
/// g♯(-k) = conj(g♯(k)).
class MellinTransform {
 public:
  /// check_tol bounds the half-resolution discretisation error estimate
  /// relative to the transform scale; exceeding it raises GridTooCoarse.
  explicit MellinTransform(const RadialFunction& g, double check_tol = 1e-4);

  std::complex<double> operator()(double k) const;

  /// ∫ dk |g♯(k)|² = ∫ p³ |g(p)|² dp, by the grid-side Parseval sum.
  double norm_sq() const;

  double scale() const { return scale_; }

 private:
  std::vector<double> xs_;
  std::vector<double> fx_;  // trapezoid-weighted e^{2x} g(e^x)
  double h_;
  double check_tol_;
  double scale_;  // sum of |weighted values|, used as the error yardstick
};

std::complex<double> mellin_sharp(const RadialFunction& g, double k, double check_tol = 1e-4);

}  // namespace fermistab
