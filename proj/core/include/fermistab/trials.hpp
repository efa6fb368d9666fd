#pragma once

#include <complex>
#include <functional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "fermistab/form_breakdown.hpp"
#include "fermistab/partial_wave.hpp"
#include "fermistab/vec3.hpp"

namespace fermistab {

/// Variational parameters of the trial family: dilation n, log-Gaussian
/// width gamma, bump scale beta (bump support sits inside (0, beta)), and
/// the azimuthal phase index of the first bump orbital.
struct TrialParams {
  double n = 1.0;
  double gamma = 0.5;
  double beta = 0.5;
  int ell = 2;

  void validate() const;  // n >= 1, 0 < gamma < 1, 0 < beta <= min(1, n), ell >= 1
};

/// c_γ² = 2 / (1 + erf(1/(2γ))), the normalisation of the trial profile.
double c_gamma_sq(double gamma);

/// Q_γ(p) = π^{-1/4} c_γ γ^{1/2} p^{-1} e^{-1/(8γ²)} e^{-γ²(log p)²/2} for
/// p >= 1, zero below.
double q_gamma(double p, double gamma);

/// ∫ p^{2+a} |Q_γ|² dp = ½ c_γ² (1 + erf((1+a)/(2γ))) e^{(2a+a²)/(4γ²)}.
double q_moment(double gamma, double a);

/// Log grid adapted to Q_γ(p/n): support starts at p = n and the weighted
/// integrands peak near log p = log n + 1/γ².
LogGrid q_gamma_grid(double gamma, double n = 1.0);

/// The (l=1, m_z=0) trial charge with radial profile n^{-3/2} Q_γ(k/n).
PartialWaveCharge trial_charge_q(const TrialParams& params);

/// Smooth radial bump on (0,1), normalised so that ∫ k² Ξ² dk = 1.
class BumpProfile {
 public:
  static const BumpProfile& standard();  // exp(-1/(u(1-u))) shape

  double operator()(double u) const;
  double density_max() const { return density_max_; }  // max of u² Ξ(u)²

 private:
  BumpProfile();
  double amplitude_ = 1.0;
  double density_max_ = 1.0;
};

/// One bump orbital (4π)^{-1/2} β^{-3/2} Ξ(k/β) e^{i l φ_k}.
struct BumpOrbital {
  double beta = 1.0;
  int ell = 1;
  std::function<double(double)> profile;  // Ξ on (0,1)

  double radial(double k) const;                  // (4π)^{-1/2} β^{-3/2} Ξ(k/β)
  std::complex<double> operator()(const Vec3& k) const;
};

/// Validates the profile (support inside (0,1), unit radial norm) and
/// builds the orbital. Throws BadProfile on violations beyond 1e-10.
BumpOrbital bump_charge_xi(double beta, int ell,
                           const std::function<double(double)>& profile);

/// Normalised Slater determinant of [Q_{n,γ}, Ξ_{β,ell}, ..., Ξ_{β,ell+N-3}].
class SlaterCharge {
 public:
  SlaterCharge(const TrialParams& params, int n_fermions);

  std::complex<double> evaluate(std::span<const Vec3> momenta) const;

  const TrialParams& params() const { return params_; }
  int n_fermions() const { return n_fermions_; }
  double q_radial(double k) const;           // n^{-3/2} Q_γ(k/n)
  std::complex<double> q_orbital(const Vec3& k) const;  // radial × Y_1^0
  const std::vector<BumpOrbital>& bumps() const { return bumps_; }

 private:
  TrialParams params_;
  int n_fermions_;
  std::vector<BumpOrbital> bumps_;
};

SlaterCharge slater_charge(const TrialParams& params, int n_fermions);

/// F₁[Q_{n,γ}] through the scaling identity: n (G^diag_{1/n²} + G^off_{1/n²,1})
/// on the unscaled profile Q_γ. freeze_zeta evaluates the leading ζ = 0 form
/// instead, which is exactly linear in n.
FormBreakdown f1_trial_energy(const TrialParams& params, double m, int N,
                              const QuadratureConfig& cfg = {}, bool freeze_zeta = false);

/// Same quantity without the scaling shortcut: the dilated profile
/// n^{-3/2} Q_γ(p/n) evaluated at ζ = 1. Used as the second route in tests.
FormBreakdown f1_trial_energy_direct(const TrialParams& params, double m, int N,
                                     const QuadratureConfig& cfg = {});

enum class ScanVerdict { Diverging, Bounded, Inconclusive };

std::string to_string(ScanVerdict v);

struct ScanPoint {
  double n = 0.0;
  double e_total = 0.0;
  double e_diag = 0.0;
  double e_off = 0.0;
};

struct ScanResult {
  ScanVerdict verdict = ScanVerdict::Inconclusive;
  std::vector<ScanPoint> points;
};

/// E(n) = F₁[Q_{n,γ}] along n_list. Diverging: every E < 0 and every
/// doubling ratio E(2n)/E(n) lies in [1.5, 2.5]; Bounded: every E >= 0.
ScanResult instability_scan(double m, int N, double gamma, const std::vector<double>& n_list,
                            const QuadratureConfig& cfg = {});

/// CSV rows m,N,gamma,n,E_total,E_diag,E_off,verdict for a set of per-gamma
/// scans, 17 significant digits, LF line endings.
std::string scan_to_csv(double m, int N,
                        const std::vector<std::pair<double, ScanResult>>& scans);

/// The closing energy estimate
/// 2π² n √(m(m+2))/(m+1) e^{3/(4γ²)} { 1 - Λ(m,2) + c_N [ α/n + √γ
///   + √(nβ) e^{9/(16γ²)} + (β²/n + β) e^{5/(4γ²)} ] }.
double analytic_bound(const TrialParams& params, double m, int N, double alpha, double c_n);

}  // namespace fermistab
