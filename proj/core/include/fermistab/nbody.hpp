#pragma once

#include <cstdint>
#include <vector>

#include "fermistab/form_breakdown.hpp"
#include "fermistab/monte_carlo.hpp"
#include "fermistab/partial_wave.hpp"
#include "fermistab/stability.hpp"
#include "fermistab/trials.hpp"
#include "fermistab/vec3.hpp"

namespace fermistab {

using MomentumConfig = std::vector<Vec3>;

/// G_λ(k_1..k_N) = [ Σ k_i² + (2/(m+1)) Σ_{i<j} k_i·k_j + λ ]^{-1}, evaluated
/// through the manifestly positive split (m/(m+1)) Σ k² + |Σ k|²/(m+1) + λ.
double green_g(const MomentumConfig& kvecs, double lambda, double m);

/// L_λ(k_1..k_{N-1}) = 2π² [ (m(m+2)/(m+1)²) Σ k² + (2m/(m+1)²) Σ_{i<j} k·k
/// + λ ]^{1/2}, same positive split.
double l_lambda(const MomentumConfig& kvecs, double lambda, double m);

/// D(K) for the N-2 spectator momenta (k_2..k_{N-1}).
double d_of_k(const MomentumConfig& kvecs, double m, int N);

/// Charge form at N = 2: alpha ||ξ||² + √λ F₁[Q] with Q(p) = λ^{3/4} ξ(√λ p).
/// Deterministic (quadrature); std_err = 0.
FormBreakdown phi_two_body(const PartialWaveCharge& xi, const SystemParams& params,
                           const QuadratureConfig& cfg = {});

/// Monte Carlo estimate of ||ξ||² for a Slater trial charge (N = 3).
MCEstimate slater_norm_mc(const SlaterCharge& xi, long long n_samples, std::uint64_t seed);

/// Charge form at N = 3 on a Slater trial charge: the 6-dimensional diagonal
/// and 9-dimensional off-diagonal integrals by importance sampling, with the
/// analytic alpha term (the determinant is normalised by construction).
FormBreakdown phi_slater_mc(const SlaterCharge& xi, const SystemParams& params,
                            long long n_samples, std::uint64_t seed);

struct RenormResidual {
  double integral = 0.0;  // ∫_{|s|<R} ds G_λ(spectators, s)
  double residual = 0.0;  // integral - 4πR + L_λ(spectators)
  double mu = 0.0;        // -(2π)³/(4πR + α)
};

/// Cutoff-regularised diagonal term: the ball integral of G_λ over one
/// momentum, its distance from the 4πR - L_λ asymptotics, and the coupling
/// μ(α,R) that cancels the linear divergence.
RenormResidual cutoff_renorm_residual(const MomentumConfig& spectators, double R,
                                      double lambda, double m, double alpha = 0.0,
                                      const QuadratureConfig& cfg = {});

}  // namespace fermistab
