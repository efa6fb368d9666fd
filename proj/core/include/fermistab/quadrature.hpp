#pragma once

#include <functional>
#include <limits>
#include <vector>

namespace fermistab {

struct QuadratureConfig {
  double rel_tol = 1e-10;
  double abs_tol = 1e-14;
  int max_subdivisions = 2000;
  int base_order = 15;  // Gauss-Legendre nodes per panel

  void validate() const;  // throws DomainError on bad fields
};

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// Adaptive Gauss-Legendre quadrature of f over (a, b), b may be +inf.
/// Semi-infinite ranges are mapped to (0,1) by t = p/(1+p); a negative
/// lower bound with b = +inf is split at zero first.
double integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                          const QuadratureConfig& cfg = {});

/// Same engine seeded with explicit breakpoints, for integrands whose mass
/// could hide between the nodes of a single initial panel.
double integrate_adaptive(const std::function<double(double)>& f,
                          const std::vector<double>& breakpoints,
                          const QuadratureConfig& cfg = {});

/// Bracketed root finding: bisection with a secant acceleration step that
/// falls back to bisection whenever it leaves the bracket. Requires a sign
/// change on [lo, hi]; the result bracket width is at most tol.
double find_root(const std::function<double(double)>& f, double lo, double hi, double tol);

}  // namespace fermistab
