#pragma once

#include <string>
#include <vector>

#include "fermistab/form_breakdown.hpp"
#include "fermistab/log_grid.hpp"
#include "fermistab/quadrature.hpp"

namespace fermistab {

/// One angular-momentum channel (l, m_z) of a charge on R³.
struct PartialWaveCharge {
  int l = 0;
  int m_z = 0;
  RadialFunction radial;

  void validate() const;  // l >= 0, |m_z| <= l
};

/// ∫_{-1}^{1} dy P_l(y) / (p² + q² + 2pq y/(m+1) + ζ).
double angular_kernel(int l, double p, double q, double zeta, double m,
                      const QuadratureConfig& cfg = {});

/// The ♯-diagonal symbol S_l(k) of the off-diagonal form at ζ = 0, through
/// the parity-split sinh/cosh representation; even in k, sign (-1)^l.
double s_kernel(int l, double k, double m, int N, const QuadratureConfig& cfg = {});

/// Closed forms of the extrema: S_0(0) (maximum of S_0) and S_1(0)
/// (minimum of S_1). Only l = 0 and l = 1 have closed forms.
double s_kernel_zero_closed(int l, double m, int N);

/// Series coefficients B_{l,k}; zero unless k >= l with k-l even. The
/// y-integral ∫ (1-y²)^l y^{k-l} dy is the Beta function B(j+1/2, l+1)
/// with j = (k-l)/2, evaluated through lgamma.
double b_coeff(int l, int k, double m, int N);

/// Diagonal form 2π² ∫ dp p² sqrt(m(m+2)p²/(m+1)² + ζ) |g(p)|².
double g_diag(const RadialFunction& g, double zeta, double m,
              const QuadratureConfig& cfg = {});

enum class OffMethod { Direct, Series, Mellin };

struct GOffOptions {
  OffMethod method = OffMethod::Direct;
  int series_k_max = 30;
  double series_rel_tol = 1e-6;  // truncation-tail budget, relative
  double mellin_k_max = 40.0;
  double mellin_grid_tol = 1e-4;
  double mellin_tail_rel = 1e-6;  // tail-bound budget, relative
  QuadratureConfig quad{};
};

/// Off-diagonal form in channel l by one of three routes:
///  Direct — double radial integral against angular_kernel (any ζ);
///  Series — Σ_k B_{l,k} ∫ dν ν^k e^{-ζν} |∫ dp g p^{2+k} e^{-νp²}|²;
///  Mellin — ∫ dk S_l(k) |g♯(k)|², ζ = 0 only.
double g_off(const RadialFunction& g, int l, double zeta, double m, int N,
             const GOffOptions& opts = {});

/// F_ζ over a list of channels: diagonal and off-diagonal parts summed per
/// channel (Direct method). Channels must be pairwise distinct.
FormBreakdown f_form(const std::vector<PartialWaveCharge>& charges, double zeta, double m,
                     int N, const QuadratureConfig& cfg = {});

/// Tabulated S_l(k) on k >= 0 for one (l, m, N).
struct KernelTable {
  int l = 0;
  double m = 1.0;
  int N = 2;
  std::vector<double> k_values;
  std::vector<double> s_values;

  static KernelTable build(int l, double m, int N, double k_max, int steps,
                           const QuadratureConfig& cfg = {});

  /// CSV with header l,m,N,k,S_l_k, one row per k, 17 significant digits.
  std::string to_csv() const;
};

}  // namespace fermistab
