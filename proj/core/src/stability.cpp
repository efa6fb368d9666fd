#include "fermistab/stability.hpp"

#include <cmath>

#include "fermistab/errors.hpp"
#include "fermistab/quadrature.hpp"

namespace fermistab {

void SystemParams::validate() const {
  if (!(m > 0.0)) throw DomainError("SystemParams: mass ratio m must be > 0");
  if (n_fermions < 2) throw DomainError("SystemParams: n_fermions must be >= 2");
  if (!(lambda > 0.0)) throw DomainError("SystemParams: lambda must be > 0");
}

std::string to_string(Regime r) {
  switch (r) {
    case Regime::StableProven: return "StableProven";
    case Regime::UnstableProven: return "UnstableProven";
    case Regime::Unresolved: return "Unresolved";
  }
  return "Unresolved";
}

double arcsin_inv_mp1(double m) {
  // sin θ = 1/(m+1), cos θ = sqrt(m(m+2))/(m+1)
  return std::atan2(1.0, std::sqrt(m * (m + 2.0)));
}

namespace {

void check_mn(double m, int N) {
  if (!(m > 0.0)) throw DomainError("mass ratio m must be > 0");
  if (N < 2) throw DomainError("fermion count N must be >= 2");
}

}  // namespace

double lambda_param(double m, int N) {
  check_mn(m, N);
  const double mp1 = m + 1.0;
  return 2.0 / M_PI * (N - 1) * mp1 * mp1 *
         (1.0 / std::sqrt(m * (m + 2.0)) - arcsin_inv_mp1(m));
}

double gamma_param(double m, int N) {
  check_mn(m, N);
  const double mp1 = m + 1.0;
  return (N - 1) * mp1 * mp1 / std::sqrt(m * (m + 2.0)) * arcsin_inv_mp1(m);
}

double theta_residual(double m, int N) {
  check_mn(m, N);
  const double theta = std::atan(std::sqrt(1.0 + 2.0 / m));  // in (π/4, π/2)
  const double c2 = std::cos(2.0 * theta);
  const double s2 = std::sin(2.0 * theta);
  return c2 / s2 + 2.0 * theta - 0.5 * M_PI * (1.0 - c2 * c2 / (N - 1));
}

double critical_mass(int N, double tol) {
  if (N < 2) throw DomainError("critical_mass: N must be >= 2");
  // Λ is decreasing with Λ(m) -> ∞ as m -> 0 and -> 0 as m -> ∞, so the
  // bracket below always straddles the root.
  return find_root([N](double m) { return lambda_param(m, N) - 1.0; }, 1e-4, 1e2, tol);
}

SpectralThreshold spectral_threshold(const SystemParams& params) {
  params.validate();
  const double lam = lambda_param(params.m, params.n_fermions);
  if (lam >= 1.0)
    throw UnstableRegime("spectral_threshold: requires Lambda(m,N) < 1");
  SpectralThreshold out{0.0, 0.0};
  if (params.alpha < 0.0) {
    const double pi4 = M_PI * M_PI * M_PI * M_PI;
    const double a2 = params.alpha * params.alpha;
    out.bound = -a2 / (4.0 * pi4 * (1.0 - lam));
    out.lambda_min = a2 / (4.0 * pi4 * (1.0 - lam) * (1.0 - lam));
  }
  return out;
}

StabilityReport classify(double m, int N, double tol) {
  check_mn(m, N);
  StabilityReport report;
  report.lambda_mn = lambda_param(m, N);
  report.gamma_mn = gamma_param(m, N);
  report.m_star_2 = critical_mass(2, tol);
  report.m_star_n = (N == 2) ? report.m_star_2 : critical_mass(N, tol);
  if (m > report.m_star_n) {
    report.regime = Regime::StableProven;
  } else if (m < report.m_star_2) {
    report.regime = Regime::UnstableProven;
  } else {
    report.regime = Regime::Unresolved;
  }
  return report;
}

}  // namespace fermistab
