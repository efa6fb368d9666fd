#include "fermistab/nbody.hpp"

#include <cmath>

#include "fermistab/errors.hpp"

namespace fermistab {

namespace {

void check_lm(double lambda, double m) {
  if (!(lambda > 0.0)) throw DomainError("lambda must be > 0");
  if (!(m > 0.0)) throw DomainError("mass ratio m must be > 0");
}

}  // namespace

double green_g(const MomentumConfig& kvecs, double lambda, double m) {
  check_lm(lambda, m);
  if (kvecs.empty()) throw DomainError("green_g: needs at least one momentum");
  double sum_sq = 0.0;
  Vec3 total{};
  for (const Vec3& k : kvecs) {
    sum_sq += norm_sq(k);
    total = total + k;
  }
  const double denom = m / (m + 1.0) * sum_sq + norm_sq(total) / (m + 1.0) + lambda;
  return 1.0 / denom;
}

double l_lambda(const MomentumConfig& kvecs, double lambda, double m) {
  check_lm(lambda, m);
  if (kvecs.empty()) throw DomainError("l_lambda: needs at least one momentum");
  double sum_sq = 0.0;
  Vec3 total{};
  for (const Vec3& k : kvecs) {
    sum_sq += norm_sq(k);
    total = total + k;
  }
  const double mp1 = m + 1.0;
  const double arg = m / mp1 * sum_sq + m / (mp1 * mp1) * norm_sq(total) + lambda;
  return 2.0 * M_PI * M_PI * std::sqrt(arg);
}

double d_of_k(const MomentumConfig& kvecs, double m, int N) {
  if (!(m > 0.0)) throw DomainError("d_of_k: mass ratio m must be > 0");
  if (N < 3) throw DomainError("d_of_k: requires N >= 3");
  if (static_cast<int>(kvecs.size()) != N - 2)
    throw DomainError("d_of_k: expected N-2 spectator momenta");
  double sum_sq = 0.0;
  Vec3 total{};
  for (const Vec3& k : kvecs) {
    sum_sq += norm_sq(k);
    total = total + k;
  }
  const double mp1 = m + 1.0;
  return m / mp1 * sum_sq + m / (mp1 * (m + 2.0)) * norm_sq(total);
}

FormBreakdown phi_two_body(const PartialWaveCharge& xi, const SystemParams& params,
                           const QuadratureConfig& cfg) {
  params.validate();
  xi.validate();
  if (params.n_fermions != 2) throw WrongN("phi_two_body: requires N = 2");
  const double lambda = params.lambda;
  const double sqrt_lambda = std::sqrt(lambda);

  FormBreakdown out;
  out.alpha_term = params.alpha * xi.radial.norm_sq(cfg);

  // Q(p) = λ^{3/4} ξ(√λ p); the grid support shifts by -½ log λ.
  const RadialFunction original = xi.radial;
  const double amp = std::pow(lambda, 0.75);
  const double shift = 0.5 * std::log(lambda);
  const LogGrid grid(original.x_lo() - shift, original.x_hi() - shift,
                     original.grid().n_points);
  const RadialFunction rescaled = RadialFunction::from_function(
      grid, [original, amp, sqrt_lambda](double p) { return amp * original(sqrt_lambda * p); });

  GOffOptions opts;
  opts.quad = cfg;
  out.diagonal = sqrt_lambda * g_diag(rescaled, 1.0, params.m, cfg);
  out.off_diagonal = sqrt_lambda * g_off(rescaled, xi.l, 1.0, params.m, 2, opts);
  out.total = out.alpha_term + out.diagonal + out.off_diagonal;
  return out;
}

namespace {

// G_λ and L_λ specialised to the N = 3 sampling loops (no allocation).
inline double green3(const Vec3& s, const Vec3& t, const Vec3& k, double lambda, double m) {
  const double sum_sq = norm_sq(s) + norm_sq(t) + norm_sq(k);
  const Vec3 tot = s + t + k;
  return 1.0 / (m / (m + 1.0) * sum_sq + norm_sq(tot) / (m + 1.0) + lambda);
}

inline double l_lambda2(const Vec3& k1, const Vec3& k2, double lambda, double m) {
  const double mp1 = m + 1.0;
  const Vec3 tot = k1 + k2;
  const double arg =
      m / mp1 * (norm_sq(k1) + norm_sq(k2)) + m / (mp1 * mp1) * norm_sq(tot) + lambda;
  return 2.0 * M_PI * M_PI * std::sqrt(arg);
}

inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t tag) {
  SubstreamRng rng(seed, tag ^ 0xA5A5A5A5A5A5A5A5ULL);
  return rng.next_u64();
}

// Importance-sampling machinery for the Slater charge. Momentum magnitudes
// are log-normal in t = log(k/n) for the Q orbital and bump-shaped for Ξ;
// angles are uniform. Three flavours of the Q magnitude law are used:
//   plain  ~ p²|Q|²   (norm integrand, bounded weight)
//   tilt   ~ p³|Q|²   (diagonal integrand, cancels the L_λ growth)
//   wide   ~ log-normal with doubled variance (off-diagonal pair)
// The plain law applied to the diagonal or off-diagonal integrands leaves a
// heavy-tailed weight whose variance estimate is unusable at desk scale, so
// the tilted laws replace it there; every density below is exact.
struct SlaterSampling {
  const SlaterCharge* xi;
  double n, gamma, beta;
  double mu_plain, mu_tilt, sigma, sigma_wide;
  double q1n;        // ∫ k³ R_Q² dk = n q_moment(γ,1)
  double z_wide;     // truncated-Gaussian normalisation for the wide law
  double bump_max;   // rejection bound for u² Ξ(u)²

  explicit SlaterSampling(const SlaterCharge& charge)
      : xi(&charge),
        n(charge.params().n),
        gamma(charge.params().gamma),
        beta(charge.params().beta) {
    const double g2 = gamma * gamma;
    mu_plain = 0.5 / g2;
    mu_tilt = 1.0 / g2;
    sigma = 1.0 / (gamma * std::sqrt(2.0));
    sigma_wide = 1.0 / gamma;
    q1n = n * q_moment(gamma, 1.0);
    z_wide = sigma_wide * std::sqrt(0.5 * M_PI) *
             (1.0 + std::erf(mu_tilt / (sigma_wide * std::sqrt(2.0))));
    bump_max = BumpProfile::standard().density_max();
  }

  static Vec3 direction(SubstreamRng& rng, double k) {
    const double c = 2.0 * rng.uniform() - 1.0;
    const double s = std::sqrt(std::max(0.0, 1.0 - c * c));
    const double phi = 2.0 * M_PI * rng.uniform();
    return {k * s * std::cos(phi), k * s * std::sin(phi), k * c};
  }

  double trunc_gauss(SubstreamRng& rng, double mu, double sig) const {
    double t;
    do {
      t = mu + sig * rng.normal();
    } while (t < 0.0);
    return t;
  }

  Vec3 sample_q(SubstreamRng& rng, double mu, double sig) const {
    const double t = trunc_gauss(rng, mu, sig);
    return direction(rng, n * std::exp(t));
  }

  Vec3 sample_bump(SubstreamRng& rng) const {
    const BumpProfile& bp = BumpProfile::standard();
    double u;
    for (;;) {
      u = rng.uniform();
      const double s = bp(u);
      if (rng.uniform() * bump_max <= u * u * s * s) break;
    }
    return direction(rng, beta * u);
  }

  // Densities per d³k.
  double rho_q_plain(double k) const {
    const double r = xi->q_radial(k);
    return r * r / (4.0 * M_PI);
  }
  double rho_q_tilt(double k) const {
    const double r = xi->q_radial(k);
    return k * r * r / (4.0 * M_PI * q1n);
  }
  double rho_q_wide(double k) const {
    if (!(k >= n)) return 0.0;
    const double t = std::log(k / n);
    const double d = (t - mu_tilt) / sigma_wide;
    return std::exp(-0.5 * d * d) / (z_wide * 4.0 * M_PI * k * k * k);
  }
  double rho_bump(double k) const {
    const double r = xi->bumps()[0].radial(k);
    return r * r;
  }
};

Vec3 read_vec(std::span<const double> buf, int i) {
  return {buf[3 * i], buf[3 * i + 1], buf[3 * i + 2]};
}

void write_vec(std::span<double> buf, int i, const Vec3& v) {
  buf[3 * i] = v.x;
  buf[3 * i + 1] = v.y;
  buf[3 * i + 2] = v.z;
}

McSampler pair_sampler(const SlaterSampling& sp, bool tilt) {
  McSampler sampler;
  sampler.dim = 6;
  sampler.sample = [&sp, tilt](SubstreamRng& rng, std::span<double> buf) {
    const bool swap = rng.uniform() < 0.5;
    const Vec3 kq = tilt ? sp.sample_q(rng, sp.mu_tilt, sp.sigma)
                         : sp.sample_q(rng, sp.mu_plain, sp.sigma);
    const Vec3 kb = sp.sample_bump(rng);
    write_vec(buf, 0, swap ? kb : kq);
    write_vec(buf, 1, swap ? kq : kb);
  };
  sampler.density = [&sp, tilt](std::span<const double> buf) {
    const double k1 = norm(read_vec(buf, 0));
    const double k2 = norm(read_vec(buf, 1));
    const double rq1 = tilt ? sp.rho_q_tilt(k1) : sp.rho_q_plain(k1);
    const double rq2 = tilt ? sp.rho_q_tilt(k2) : sp.rho_q_plain(k2);
    return 0.5 * (rq1 * sp.rho_bump(k2) + sp.rho_bump(k1) * rq2);
  };
  return sampler;
}

McSampler triple_sampler(const SlaterSampling& sp) {
  McSampler sampler;
  sampler.dim = 9;
  sampler.sample = [&sp](SubstreamRng& rng, std::span<double> buf) {
    const bool swap = rng.uniform() < 0.5;
    if (!swap) {
      write_vec(buf, 0, sp.sample_q(rng, sp.mu_tilt, sp.sigma_wide));
      write_vec(buf, 1, sp.sample_q(rng, sp.mu_tilt, sp.sigma_wide));
      write_vec(buf, 2, sp.sample_bump(rng));
    } else {
      write_vec(buf, 0, sp.sample_bump(rng));
      write_vec(buf, 1, sp.sample_bump(rng));
      write_vec(buf, 2, sp.sample_q(rng, sp.mu_tilt, sp.sigma_wide));
    }
  };
  sampler.density = [&sp](std::span<const double> buf) {
    const double s = norm(read_vec(buf, 0));
    const double t = norm(read_vec(buf, 1));
    const double k = norm(read_vec(buf, 2));
    return 0.5 * (sp.rho_q_wide(s) * sp.rho_q_wide(t) * sp.rho_bump(k) +
                  sp.rho_bump(s) * sp.rho_bump(t) * sp.rho_q_wide(k));
  };
  return sampler;
}

}  // namespace

MCEstimate slater_norm_mc(const SlaterCharge& xi, long long n_samples, std::uint64_t seed) {
  SlaterSampling sp(xi);
  const McSampler sampler = pair_sampler(sp, /*tilt=*/false);
  auto integrand = [&xi](std::span<const double> buf) {
    const Vec3 k[2] = {read_vec(buf, 0), read_vec(buf, 1)};
    return std::norm(xi.evaluate(std::span<const Vec3>(k, 2)));
  };
  MCEstimate est = mc_integrate(sampler, integrand, n_samples, seed);
  est.seed = seed;
  return est;
}

FormBreakdown phi_slater_mc(const SlaterCharge& xi, const SystemParams& params,
                            long long n_samples, std::uint64_t seed) {
  params.validate();
  if (params.n_fermions > 3)
    throw UnsupportedN("phi_slater_mc: only N = 3 is supported at desk scale");
  if (params.n_fermions != 3 || xi.n_fermions() != 3)
    throw WrongN("phi_slater_mc: requires N = 3");
  const double lambda = params.lambda;
  const double m = params.m;

  SlaterSampling sp(xi);

  const McSampler diag_sampler = pair_sampler(sp, /*tilt=*/true);
  auto diag_integrand = [&xi, lambda, m](std::span<const double> buf) {
    const Vec3 k[2] = {read_vec(buf, 0), read_vec(buf, 1)};
    const double a2 = std::norm(xi.evaluate(std::span<const Vec3>(k, 2)));
    if (a2 == 0.0) return 0.0;
    return a2 * l_lambda2(k[0], k[1], lambda, m);
  };
  const MCEstimate diag = mc_integrate(diag_sampler, diag_integrand, n_samples,
                                       derive_seed(seed, 2));

  const McSampler off_sampler = triple_sampler(sp);
  auto off_integrand = [&xi, lambda, m](std::span<const double> buf) {
    const Vec3 s = read_vec(buf, 0);
    const Vec3 t = read_vec(buf, 1);
    const Vec3 k = read_vec(buf, 2);
    const Vec3 left[2] = {s, k};
    const Vec3 right[2] = {t, k};
    const std::complex<double> a = xi.evaluate(std::span<const Vec3>(left, 2));
    if (a == 0.0) return 0.0;
    const std::complex<double> b = xi.evaluate(std::span<const Vec3>(right, 2));
    if (b == 0.0) return 0.0;
    // (N-1) ∫ ξ̂*(s,·) ξ̂(t,·) G_λ, real by exchange symmetry.
    return 2.0 * (std::conj(a) * b).real() * green3(s, t, k, lambda, m);
  };
  const MCEstimate off = mc_integrate(off_sampler, off_integrand, n_samples,
                                      derive_seed(seed, 3));

  FormBreakdown out;
  out.alpha_term = params.alpha;  // ||ξ||² = 1 by construction
  out.diagonal = diag.mean;
  out.off_diagonal = off.mean;
  out.total = out.alpha_term + out.diagonal + out.off_diagonal;
  out.std_err = std::sqrt(diag.std_err * diag.std_err + off.std_err * off.std_err);
  out.n_samples = n_samples;
  out.seed = seed;
  return out;
}

RenormResidual cutoff_renorm_residual(const MomentumConfig& spectators, double R,
                                      double lambda, double m, double alpha,
                                      const QuadratureConfig& cfg) {
  check_lm(lambda, m);
  if (!(R > 0.0)) throw DomainError("cutoff_renorm_residual: R must be > 0");
  if (spectators.empty())
    throw DomainError("cutoff_renorm_residual: needs the N-1 spectator momenta");

  // Completing the square in the integrated momentum s:
  //   G_λ = 1 / ( |s + b|² + c ),  b = Σk/(m+1),  c = (L_λ/2π²)².
  Vec3 bsum{};
  for (const Vec3& k : spectators) bsum = bsum + k;
  const Vec3 bvec = (1.0 / (m + 1.0)) * bsum;
  const double b = norm(bvec);
  const double L = l_lambda(spectators, lambda, m);
  const double c = (L / (2.0 * M_PI * M_PI)) * (L / (2.0 * M_PI * M_PI));

  QuadratureConfig tight = cfg;
  tight.rel_tol = std::min(cfg.rel_tol, 1e-12);

  double integral;
  if (b == 0.0) {
    integral = integrate_adaptive(
        [c](double s) { return 4.0 * M_PI * s * s / (s * s + c); }, 0.0, R, tight);
  } else {
    // Angular part in closed form; radial quadrature only.
    integral = integrate_adaptive(
        [b, c](double s) {
          const double num = (s + b) * (s + b) + c;
          const double den = (s - b) * (s - b) + c;
          return M_PI * s / b * std::log(num / den);
        },
        0.0, R, tight);
  }

  RenormResidual out;
  out.integral = integral;
  out.residual = integral - 4.0 * M_PI * R + L;
  out.mu = -std::pow(2.0 * M_PI, 3) / (4.0 * M_PI * R + alpha);
  return out;
}

}  // namespace fermistab
