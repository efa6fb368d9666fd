#include "fermistab/trials.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "fermistab/errors.hpp"
#include "fermistab/monte_carlo.hpp"
#include "fermistab/stability.hpp"

namespace fermistab {

void TrialParams::validate() const {
  if (!(n >= 1.0)) throw DomainError("TrialParams: n must be >= 1");
  if (!(gamma > 0.0 && gamma < 1.0)) throw DomainError("TrialParams: gamma must be in (0,1)");
  if (!(beta > 0.0 && beta <= 1.0)) throw DomainError("TrialParams: beta must be in (0,1]");
  if (beta > n) throw SupportOverlap("TrialParams: requires beta <= n");
  if (ell < 1) throw DomainError("TrialParams: ell must be >= 1");
}

double c_gamma_sq(double gamma) {
  if (!(gamma > 0.0 && gamma < 1.0)) throw DomainError("c_gamma_sq: gamma must be in (0,1)");
  return 2.0 / (1.0 + std::erf(1.0 / (2.0 * gamma)));
}

double q_gamma(double p, double gamma) {
  if (!(p > 0.0)) throw DomainError("q_gamma: momentum must be > 0");
  if (!(gamma > 0.0 && gamma < 1.0)) throw DomainError("q_gamma: gamma must be in (0,1)");
  if (p < 1.0) return 0.0;
  const double lp = std::log(p);
  return std::pow(M_PI, -0.25) * std::sqrt(c_gamma_sq(gamma)) * std::sqrt(gamma) / p *
         std::exp(-1.0 / (8.0 * gamma * gamma)) * std::exp(-0.5 * gamma * gamma * lp * lp);
}

double q_moment(double gamma, double a) {
  if (a < -1.0) throw DomainError("q_moment: requires a >= -1");
  const double c2 = c_gamma_sq(gamma);
  return 0.5 * c2 * (1.0 + std::erf((1.0 + a) / (2.0 * gamma))) *
         std::exp((2.0 * a + a * a) / (4.0 * gamma * gamma));
}

LogGrid q_gamma_grid(double gamma, double n) {
  // e^{2x} Q_γ peaks at x = 1/γ² and is Gaussian with width 1/γ in x; twelve
  // widths cover every weighted integrand used here to below double rounding.
  const double x0 = std::log(n);
  const double x_max = x0 + 1.0 / (gamma * gamma) + 12.0 / gamma;
  return LogGrid(x0, x_max, 8192);
}

PartialWaveCharge trial_charge_q(const TrialParams& params) {
  params.validate();
  const double n = params.n;
  const double gamma = params.gamma;
  const double scale = std::pow(n, -1.5);
  auto radial = [n, gamma, scale](double p) { return scale * q_gamma(p / n, gamma); };
  PartialWaveCharge charge{1, 0, RadialFunction::from_function(q_gamma_grid(gamma, n), radial)};
  return charge;
}

BumpProfile::BumpProfile() {
  auto shape = [](double u) {
    if (u <= 0.0 || u >= 1.0) return 0.0;
    return std::exp(-1.0 / (u * (1.0 - u)));
  };
  QuadratureConfig cfg;
  const double norm = integrate_adaptive(
      [&shape](double u) { return u * u * shape(u) * shape(u); }, 0.0, 1.0, cfg);
  amplitude_ = 1.0 / std::sqrt(norm);
  density_max_ = 0.0;
  for (int i = 1; i < 4096; ++i) {
    const double u = i / 4096.0;
    const double s = amplitude_ * shape(u);
    density_max_ = std::max(density_max_, u * u * s * s);
  }
  density_max_ *= 1.02;  // head-room over the grid maximum
}

double BumpProfile::operator()(double u) const {
  if (u <= 0.0 || u >= 1.0) return 0.0;
  return amplitude_ * std::exp(-1.0 / (u * (1.0 - u)));
}

const BumpProfile& BumpProfile::standard() {
  static const BumpProfile profile;
  return profile;
}

double BumpOrbital::radial(double k) const {
  return std::pow(4.0 * M_PI, -0.5) * std::pow(beta, -1.5) * profile(k / beta);
}

std::complex<double> BumpOrbital::operator()(const Vec3& k) const {
  const double kn = norm(k);
  if (!(kn > 0.0)) return 0.0;
  const double r = radial(kn);
  if (r == 0.0) return 0.0;
  const double phi = std::atan2(k.y, k.x);
  return r * std::polar(1.0, ell * phi);
}

BumpOrbital bump_charge_xi(double beta, int ell,
                           const std::function<double(double)>& profile) {
  if (!(beta > 0.0)) throw DomainError("bump_charge_xi: beta must be > 0");
  if (ell < 1) throw DomainError("bump_charge_xi: ell must be >= 1");
  if (!profile) throw BadProfile("bump_charge_xi: missing profile");
  if (std::abs(profile(0.0)) > 1e-10 || std::abs(profile(1.0)) > 1e-10 ||
      std::abs(profile(1e-9)) > 1e-6 || std::abs(profile(1.0 - 1e-9)) > 1e-6)
    throw BadProfile("bump_charge_xi: profile must be supported inside (0,1)");
  QuadratureConfig cfg;
  const double norm = integrate_adaptive(
      [&profile](double u) { return u * u * profile(u) * profile(u); }, 0.0, 1.0, cfg);
  if (std::abs(norm - 1.0) > 1e-10)
    throw BadProfile("bump_charge_xi: profile radial norm differs from 1");
  return BumpOrbital{beta, ell, profile};
}

SlaterCharge::SlaterCharge(const TrialParams& params, int n_fermions)
    : params_(params), n_fermions_(n_fermions) {
  params_.validate();
  if (n_fermions_ < 3) throw WrongN("SlaterCharge: requires N >= 3");
  if (params_.beta > params_.n)
    throw SupportOverlap("SlaterCharge: bump support must sit below the Q support");
  const BumpProfile& bp = BumpProfile::standard();
  auto profile = [&bp](double u) { return bp(u); };
  for (int j = 0; j < n_fermions_ - 2; ++j)
    bumps_.push_back(bump_charge_xi(params_.beta, params_.ell + j, profile));
}

double SlaterCharge::q_radial(double k) const {
  return std::pow(params_.n, -1.5) * q_gamma(k / params_.n, params_.gamma);
}

std::complex<double> SlaterCharge::q_orbital(const Vec3& k) const {
  const double kn = norm(k);
  if (!(kn > 0.0)) return 0.0;
  const double r = q_radial(kn);
  if (r == 0.0) return 0.0;
  return r * std::sqrt(3.0 / (4.0 * M_PI)) * (k.z / kn);  // Y_1^0 direction
}

std::complex<double> SlaterCharge::evaluate(std::span<const Vec3> momenta) const {
  const int d = n_fermions_ - 1;
  if (static_cast<int>(momenta.size()) != d)
    throw DomainError("SlaterCharge: expected N-1 momentum arguments");
  if (d == 2) {
    // [Q(k1)Ξ(k2) - Q(k2)Ξ(k1)] / √2
    const std::complex<double> det =
        q_orbital(momenta[0]) * bumps_[0](momenta[1]) -
        q_orbital(momenta[1]) * bumps_[0](momenta[0]);
    return det / std::sqrt(2.0);
  }
  // General path: LU with partial pivoting on the orbital matrix.
  std::vector<std::complex<double>> mat(static_cast<size_t>(d) * d);
  for (int i = 0; i < d; ++i) {
    mat[i * d] = q_orbital(momenta[i]);
    for (int j = 1; j < d; ++j) mat[i * d + j] = bumps_[j - 1](momenta[i]);
  }
  std::complex<double> det = 1.0;
  for (int col = 0; col < d; ++col) {
    int pivot = col;
    for (int r = col + 1; r < d; ++r)
      if (std::abs(mat[r * d + col]) > std::abs(mat[pivot * d + col])) pivot = r;
    if (pivot != col) {
      for (int j = 0; j < d; ++j) std::swap(mat[pivot * d + j], mat[col * d + j]);
      det = -det;
    }
    const std::complex<double> diag = mat[col * d + col];
    if (diag == 0.0) return 0.0;
    det *= diag;
    for (int r = col + 1; r < d; ++r) {
      const std::complex<double> f = mat[r * d + col] / diag;
      for (int j = col; j < d; ++j) mat[r * d + j] -= f * mat[col * d + j];
    }
  }
  double fact = 1.0;
  for (int j = 2; j <= d; ++j) fact *= j;
  return det / std::sqrt(fact);
}

SlaterCharge slater_charge(const TrialParams& params, int n_fermions) {
  return SlaterCharge(params, n_fermions);
}

FormBreakdown f1_trial_energy(const TrialParams& params, double m, int N,
                              const QuadratureConfig& cfg, bool freeze_zeta) {
  params.validate();
  const double gamma = params.gamma;
  const double n = params.n;
  const double zeta = freeze_zeta ? 0.0 : 1.0 / (n * n);
  auto radial = [gamma](double p) { return q_gamma(p, gamma); };
  const RadialFunction q = RadialFunction::from_function(q_gamma_grid(gamma), radial);
  GOffOptions opts;
  opts.quad = cfg;
  FormBreakdown out;
  out.diagonal = n * g_diag(q, zeta, m, cfg);
  out.off_diagonal = n * g_off(q, 1, zeta, m, N, opts);
  out.total = out.diagonal + out.off_diagonal;
  return out;
}

FormBreakdown f1_trial_energy_direct(const TrialParams& params, double m, int N,
                                     const QuadratureConfig& cfg) {
  params.validate();
  const PartialWaveCharge charge = trial_charge_q(params);
  GOffOptions opts;
  opts.quad = cfg;
  FormBreakdown out;
  out.diagonal = g_diag(charge.radial, 1.0, m, cfg);
  out.off_diagonal = g_off(charge.radial, charge.l, 1.0, m, N, opts);
  out.total = out.diagonal + out.off_diagonal;
  return out;
}

std::string to_string(ScanVerdict v) {
  switch (v) {
    case ScanVerdict::Diverging: return "Diverging";
    case ScanVerdict::Bounded: return "Bounded";
    case ScanVerdict::Inconclusive: return "Inconclusive";
  }
  return "Inconclusive";
}

ScanResult instability_scan(double m, int N, double gamma, const std::vector<double>& n_list,
                            const QuadratureConfig& cfg) {
  if (n_list.size() < 4) throw DomainError("instability_scan: n_list must have >= 4 entries");
  for (size_t i = 1; i < n_list.size(); ++i)
    if (!(n_list[i] > n_list[i - 1]))
      throw DomainError("instability_scan: n_list must be strictly increasing");

  ScanResult result;
  result.points.resize(n_list.size());
  parallel_for(static_cast<long long>(n_list.size()), [&](long long lo, long long hi) {
    for (long long i = lo; i < hi; ++i) {
      TrialParams p;
      p.n = n_list[i];
      p.gamma = gamma;
      p.beta = std::min(1.0, n_list[i]);
      const FormBreakdown fb = f1_trial_energy(p, m, N, cfg);
      result.points[i] = {n_list[i], fb.total, fb.diagonal, fb.off_diagonal};
    }
  });

  bool all_negative = true;
  bool all_nonnegative = true;
  for (const auto& pt : result.points) {
    all_negative = all_negative && pt.e_total < 0.0;
    all_nonnegative = all_nonnegative && pt.e_total >= 0.0;
  }
  bool ratios_ok = true;
  int n_pairs = 0;
  for (size_t i = 0; i < result.points.size(); ++i) {
    for (size_t j = i + 1; j < result.points.size(); ++j) {
      if (std::abs(result.points[j].n - 2.0 * result.points[i].n) <=
          1e-9 * result.points[i].n) {
        ++n_pairs;
        const double ratio = result.points[j].e_total / result.points[i].e_total;
        if (!(ratio >= 1.5 && ratio <= 2.5)) ratios_ok = false;
      }
    }
  }
  if (all_negative && n_pairs > 0 && ratios_ok) {
    result.verdict = ScanVerdict::Diverging;
  } else if (all_nonnegative) {
    result.verdict = ScanVerdict::Bounded;
  } else {
    result.verdict = ScanVerdict::Inconclusive;
  }
  return result;
}

std::string scan_to_csv(double m, int N,
                        const std::vector<std::pair<double, ScanResult>>& scans) {
  std::ostringstream os;
  os << "m,N,gamma,n,E_total,E_diag,E_off,verdict\n";
  for (const auto& [gamma, scan] : scans) {
    for (const auto& pt : scan.points) {
      os << format_g17(m) << ',' << N << ',' << format_g17(gamma) << ',' << format_g17(pt.n)
         << ',' << format_g17(pt.e_total) << ',' << format_g17(pt.e_diag) << ','
         << format_g17(pt.e_off) << ',' << to_string(scan.verdict) << '\n';
    }
  }
  return os.str();
}

double analytic_bound(const TrialParams& params, double m, int N, double alpha, double c_n) {
  params.validate();
  if (c_n < 0.0) throw DomainError("analytic_bound: c_n must be >= 0");
  const double n = params.n;
  const double gamma = params.gamma;
  const double beta = params.beta;
  const double g2 = gamma * gamma;
  const double lead = 2.0 * M_PI * M_PI * n * std::sqrt(m * (m + 2.0)) / (m + 1.0) *
                      std::exp(3.0 / (4.0 * g2));
  const double correction = alpha / n + std::sqrt(gamma) +
                            std::sqrt(n * beta) * std::exp(9.0 / (16.0 * g2)) +
                            (beta * beta / n + beta) * std::exp(5.0 / (4.0 * g2));
  (void)N;  // the paper's constant c_N absorbs the N dependence
  return lead * (1.0 - lambda_param(m, 2) + c_n * correction);
}

}  // namespace fermistab
