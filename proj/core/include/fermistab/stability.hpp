#pragma once

#include <string>

namespace fermistab {

/// Physical configuration: N unit-mass fermions plus one particle of mass m,
/// contact coupling alpha, spectral shift lambda > 0.
struct SystemParams {
  double m = 1.0;
  int n_fermions = 2;
  double alpha = 0.0;
  double lambda = 1.0;

  void validate() const;  // m > 0, N >= 2, lambda > 0
};

enum class Regime { StableProven, UnstableProven, Unresolved };

std::string to_string(Regime r);

struct StabilityReport {
  double lambda_mn = 0.0;  // Λ(m,N)
  double gamma_mn = 0.0;   // Γ(m,N)
  double m_star_2 = 0.0;
  double m_star_n = 0.0;
  Regime regime = Regime::Unresolved;
};

/// arcsin(1/(m+1)) evaluated as atan2(1, sqrt(m(m+2))); keeps full relative
/// precision as m -> 0 where the arcsin argument approaches 1.
double arcsin_inv_mp1(double m);

/// Λ(m,N) = (2/π)(N-1)(m+1)² [ (m(m+2))^{-1/2} - arcsin(1/(m+1)) ].
double lambda_param(double m, int N);

/// Γ(m,N) = (N-1)(m+1)² (m(m+2))^{-1/2} arcsin(1/(m+1)).
double gamma_param(double m, int N);

/// Residual of the equivalent critical equation in θ = arctan√(1+2/m):
/// cot 2θ + 2θ - (π/2)(1 - cos²2θ/(N-1)).
double theta_residual(double m, int N);

/// Unique root of Λ(m,N) = 1 (Λ is strictly decreasing in m).
double critical_mass(int N, double tol = 1e-10);

struct SpectralThreshold {
  double bound;       // lower bound on the form; 0 for alpha >= 0
  double lambda_min;  // shift that makes the charge form nonnegative
};

/// Requires Λ(m,N) < 1. For alpha < 0 the bound is -α²/(4π⁴(1-Λ)) and the
/// charge form is nonnegative once λ >= α²/(4π⁴(1-Λ)²).
SpectralThreshold spectral_threshold(const SystemParams& params);

StabilityReport classify(double m, int N, double tol = 1e-10);

}  // namespace fermistab
