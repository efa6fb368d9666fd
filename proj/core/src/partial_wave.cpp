#include "fermistab/partial_wave.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <set>
#include <sstream>
#include <utility>

#include "fermistab/errors.hpp"
#include "fermistab/legendre.hpp"
#include "fermistab/mellin.hpp"
#include "fermistab/monte_carlo.hpp"
#include "fermistab/stability.hpp"

namespace fermistab {

void PartialWaveCharge::validate() const {
  if (l < 0) throw DomainError("PartialWaveCharge: l must be >= 0");
  if (std::abs(m_z) > l) throw DomainError("PartialWaveCharge: requires |m_z| <= l");
}

namespace {

void check_m(double m) {
  if (!(m > 0.0)) throw DomainError("mass ratio m must be > 0");
}

void check_n(int N) {
  if (N < 2) throw DomainError("fermion count N must be >= 2");
}

// ∫_{-1}^{1} P_l(y) / (A + B y) dy with A > B > 0, adaptive route.
double pole_integral_adaptive(int l, double A, double B, const QuadratureConfig& cfg) {
  auto f = [l, A, B](double y) { return legendre_p(l, y) / (A + B * y); };
  return integrate_adaptive(f, -1.0, 1.0, cfg);
}

// Fixed Gauss-Legendre table with P_l(y_i) w_i premultiplied. The integrand
// has a pole at y = -A/B with |A/B| >= m+1, so the node count is chosen from
// m (Bernstein-ellipse argument); below m = 0.03 the adaptive route is used.
struct AngularTable {
  std::vector<double> y;
  std::vector<double> plw;
};

const AngularTable& angular_table(int l, int nodes) {
  static std::mutex mu;
  static std::map<std::pair<int, int>, AngularTable> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto key = std::make_pair(l, nodes);
  auto it = cache.find(key);
  if (it == cache.end()) {
    // Nodes via the Legendre-polynomial Newton iteration (same as the
    // adaptive engine, duplicated here to keep the table self-contained).
    AngularTable t;
    t.y.resize(nodes);
    t.plw.resize(nodes);
    for (int i = 0; i < nodes; ++i) {
      double x = std::cos(M_PI * (i + 0.75) / (nodes + 0.5));
      double pp = 0.0;
      for (int itn = 0; itn < 100; ++itn) {
        double p0 = 1.0, p1 = x;
        for (int k = 1; k < nodes; ++k) {
          double p2 = ((2 * k + 1) * x * p1 - k * p0) / (k + 1);
          p0 = p1;
          p1 = p2;
        }
        pp = nodes * (x * p1 - p0) / (x * x - 1.0);
        double dx = p1 / pp;
        x -= dx;
        if (std::abs(dx) < 1e-15) break;
      }
      const double w = 2.0 / ((1.0 - x * x) * pp * pp);
      t.y[i] = x;
      t.plw[i] = w * legendre_p(l, x);
    }
    it = cache.emplace(key, std::move(t)).first;
  }
  return it->second;
}

int angular_nodes_for(double m) {
  if (m >= 0.3) return 64;
  if (m >= 0.08) return 96;
  if (m >= 0.03) return 192;
  return 0;  // adaptive fallback
}

double pole_integral_fast(const AngularTable& t, double A, double B) {
  double sum = 0.0;
  for (size_t i = 0; i < t.y.size(); ++i) sum += t.plw[i] / (A + B * t.y[i]);
  return sum;
}

// sinh(aκ)/sinh(bκ) and cosh(aκ)/cosh(bκ) for |a| < b, overflow-safe.
double sinh_ratio(double a, double kappa, double b) {
  double sign = 1.0;
  if (a < 0.0) {
    sign = -1.0;
    a = -a;
  }
  if (b * kappa < 20.0) return sign * std::sinh(a * kappa) / std::sinh(b * kappa);
  return sign * std::exp(kappa * (a - b)) * (-std::expm1(-2.0 * a * kappa)) /
         (-std::expm1(-2.0 * b * kappa));
}

double cosh_ratio(double a, double kappa, double b) {
  a = std::abs(a);
  if (b * kappa < 20.0) return std::cosh(a * kappa) / std::cosh(b * kappa);
  return std::exp(kappa * (a - b)) * (1.0 + std::exp(-2.0 * a * kappa)) /
         (1.0 + std::exp(-2.0 * b * kappa));
}

}  // namespace

double angular_kernel(int l, double p, double q, double zeta, double m,
                      const QuadratureConfig& cfg) {
  if (l < 0) throw DomainError("angular_kernel: l must be >= 0");
  if (!(p > 0.0) || !(q > 0.0)) throw DomainError("angular_kernel: p, q must be > 0");
  if (zeta < 0.0) throw DomainError("angular_kernel: zeta must be >= 0");
  check_m(m);
  // Scale out pq: denominator = pq [ (p²+q²+ζ)/(pq) + 2y/(m+1) ].
  const double A = (p * p + q * q + zeta) / (p * q);
  const double B = 2.0 / (m + 1.0);
  return pole_integral_adaptive(l, A, B, cfg) / (p * q);
}

double s_kernel(int l, double k, double m, int N, const QuadratureConfig& cfg) {
  if (l < 0) throw DomainError("s_kernel: l must be >= 0");
  check_m(m);
  check_n(N);
  const double kappa = std::abs(k);
  const double pref = M_PI * M_PI * (N - 1);
  const double b = 0.5 * M_PI;
  const double inv_mp1 = 1.0 / (m + 1.0);
  if (l % 2 == 1) {
    auto f = [&](double y) {
      const double z = y * inv_mp1;
      const double a = std::asin(z);
      const double r = (kappa == 0.0) ? (2.0 * a / M_PI) : sinh_ratio(a, kappa, b);
      return legendre_p(l, y) * r / std::sqrt(1.0 - z * z);
    };
    return -pref * integrate_adaptive(f, -1.0, 1.0, cfg);
  }
  auto f = [&](double y) {
    const double z = y * inv_mp1;
    const double a = std::asin(z);
    const double r = (kappa == 0.0) ? 1.0 : cosh_ratio(a, kappa, b);
    return legendre_p(l, y) * r / std::sqrt(1.0 - z * z);
  };
  return pref * integrate_adaptive(f, -1.0, 1.0, cfg);
}

double s_kernel_zero_closed(int l, double m, int N) {
  check_m(m);
  check_n(N);
  const double as = arcsin_inv_mp1(m);
  if (l == 0) return 2.0 * M_PI * M_PI * (N - 1) * (m + 1.0) * as;
  if (l == 1) return -4.0 * M_PI * (N - 1) * (m + 1.0) * (1.0 - std::sqrt(m * (m + 2.0)) * as);
  throw DomainError("s_kernel_zero_closed: closed forms exist only for l in {0, 1}");
}

double b_coeff(int l, int k, double m, int N) {
  if (l < 0 || k < 0) throw DomainError("b_coeff: l and k must be >= 0");
  check_m(m);
  check_n(N);
  if (k < l || (k - l) % 2 != 0) return 0.0;
  const int j = (k - l) / 2;
  // ∫_{-1}^{1} (1-y²)^l y^{2j} dy = B(j+1/2, l+1)
  const double ln_beta =
      std::lgamma(j + 0.5) + std::lgamma(l + 1.0) - std::lgamma(j + l + 1.5);
  // 2π(N-1)/(2^l l! k!) (-2/(m+1))^k with the l-th derivative of y^k giving
  // k!/(k-l)! y^{k-l}.
  const double ln_mag = std::log(2.0 * M_PI * (N - 1)) - l * std::log(2.0) -
                        std::lgamma(l + 1.0) + k * std::log(2.0 / (m + 1.0)) -
                        std::lgamma(k - l + 1.0);
  const double sign = (k % 2 == 0) ? 1.0 : -1.0;
  return sign * std::exp(ln_mag + ln_beta);
}

double g_diag(const RadialFunction& g, double zeta, double m, const QuadratureConfig& cfg) {
  if (zeta < 0.0) throw DomainError("g_diag: zeta must be >= 0");
  check_m(m);
  const double c1 = m * (m + 2.0) / ((m + 1.0) * (m + 1.0));
  auto integrand = [&](double x) {
    const double q = std::exp(2.0 * x) * g.at_x(x);
    if (q == 0.0) return 0.0;
    return q * q * std::sqrt(c1 + zeta * std::exp(-2.0 * x));
  };
  return 2.0 * M_PI * M_PI * integrate_adaptive(integrand, g.x_lo(), g.x_hi(), cfg);
}

namespace {

double g_off_direct(const RadialFunction& g, int l, double zeta, double m, int N,
                    const GOffOptions& o) {
  const double c = 2.0 / (m + 1.0);
  QuadratureConfig inner = o.quad;
  inner.rel_tol = std::max(0.1 * o.quad.rel_tol, 1e-13);
  QuadratureConfig angular = o.quad;
  angular.rel_tol = std::max(0.01 * o.quad.rel_tol, 1e-13);
  const int nodes = angular_nodes_for(m);
  const AngularTable* table = nodes > 0 ? &angular_table(l, nodes) : nullptr;

  auto kernel = [&](double x1, double x2) {
    double A = 2.0 * std::cosh(x1 - x2);
    if (zeta > 0.0) A += zeta * std::exp(-(x1 + x2));
    if (table) return pole_integral_fast(*table, A, c);
    return pole_integral_adaptive(l, A, c, angular);
  };
  auto outer_f = [&](double x1) {
    const double q1 = std::exp(2.0 * x1) * g.at_x(x1);
    if (q1 == 0.0) return 0.0;
    auto inner_f = [&](double x2) {
      const double q2 = std::exp(2.0 * x2) * g.at_x(x2);
      if (q2 == 0.0) return 0.0;
      return q2 * kernel(x1, x2);
    };
    return q1 * integrate_adaptive(inner_f, g.x_lo(), g.x_hi(), inner);
  };
  return 2.0 * M_PI * (N - 1) * integrate_adaptive(outer_f, g.x_lo(), g.x_hi(), o.quad);
}

double g_off_series(const RadialFunction& g, int l, double zeta, double m, int N,
                    const GOffOptions& o) {
  if (o.series_k_max < l) throw DomainError("g_off: Series requires k_max >= l");
  QuadratureConfig nu_cfg = o.quad;
  nu_cfg.rel_tol = std::max(1e-9, o.quad.rel_tol);
  QuadratureConfig u_cfg = nu_cfg;
  u_cfg.rel_tol *= 0.1;

  const double x_lo = g.x_lo();
  const double x_hi = g.x_hi();
  double sum = 0.0;
  double prev_mag = -1.0;
  double last_mag = -1.0;
  for (int k = l; k <= o.series_k_max; k += 2) {
    const double B = b_coeff(l, k, m, N);
    // The inner moment is rescaled by p = u/√ν, which keeps every factor
    // representable: I_k = ∫ dν e^{-ζν} ν^{-3} J(ν)² with
    // J(ν) = ∫ du u^{2+k} e^{-u²} g(u/√ν).
    auto J = [&](double nu) {
      const double sq = std::sqrt(nu);
      double u_lo = sq * std::exp(x_lo);
      double u_hi = sq * std::exp(x_hi);
      const double u_cut = std::sqrt(k + 45.0) + 3.0;
      u_hi = std::min(u_hi, u_cut);
      if (!(u_lo < u_hi)) return 0.0;
      auto f = [&](double u) {
        return std::pow(u, 2 + k) * std::exp(-u * u) * g(u / sq);
      };
      return integrate_adaptive(f, u_lo, u_hi, u_cfg);
    };
    auto nu_f = [&](double nu) {
      if (!(nu > 0.0)) return 0.0;
      const double Jv = J(nu);
      if (Jv == 0.0) return 0.0;
      const double damp = (zeta > 0.0) ? std::exp(-zeta * nu) : 1.0;
      return damp * Jv * Jv / (nu * nu * nu);
    };
    const double term = B * integrate_adaptive(nu_f, 0.0, kInf, nu_cfg);
    sum += term;
    prev_mag = last_mag;
    last_mag = std::abs(term);
  }
  // Geometric tail bound from the two last computed terms.
  if (last_mag > 0.0 && prev_mag > 0.0) {
    const double r = last_mag / prev_mag;
    const double budget = std::max(o.quad.abs_tol, o.series_rel_tol * std::abs(sum));
    if (r >= 0.9 || last_mag * r / (1.0 - r) > budget)
      throw TruncationWarning("g_off: Series tail bound exceeds tolerance; raise k_max");
  }
  return sum;
}

double g_off_mellin(const RadialFunction& g, int l, double zeta, double m, int N,
                    const GOffOptions& o) {
  if (zeta != 0.0) throw MethodMismatch("g_off: Mellin method requires zeta = 0");
  MellinTransform mt(g, o.mellin_grid_tol);
  QuadratureConfig kq = o.quad;
  kq.rel_tol = std::max(o.quad.rel_tol, 1e-11);

  double k_max = o.mellin_k_max;
  for (int attempt = 0; attempt < 2; ++attempt) {
    auto f = [&](double k) { return s_kernel(l, k, m, N, kq) * std::norm(mt(k)); };
    const double body = 2.0 * integrate_adaptive(f, 0.0, k_max, kq);

    // Tail bound: |S_l(k)| <= π²(N-1) cosh-ratio(a_max) ∫ dy / cos(arcsin ·),
    // an even envelope decaying like e^{-(π/2 - a_max)k}, times the g♯ mass
    // beyond k_max.
    const double a_max = arcsin_inv_mp1(m);
    const double env =
        M_PI * M_PI * (N - 1) * cosh_ratio(a_max, k_max, 0.5 * M_PI) * 2.0 * (m + 1.0) * a_max;
    QuadratureConfig loose = kq;
    loose.rel_tol = 1e-4;
    const double body_mass =
        2.0 * integrate_adaptive([&](double k) { return std::norm(mt(k)); }, 0.0, k_max, loose);
    const double tail_mass = std::max(0.0, mt.norm_sq() - body_mass);
    const double tail_bound = env * tail_mass;
    if (tail_bound <= std::max(o.quad.abs_tol, o.mellin_tail_rel * std::abs(body))) return body;
    k_max *= 2.0;
  }
  throw NonConvergence("g_off: Mellin tail bound did not fall below tolerance");
}

}  // namespace

double g_off(const RadialFunction& g, int l, double zeta, double m, int N,
             const GOffOptions& opts) {
  if (l < 0) throw DomainError("g_off: l must be >= 0");
  if (zeta < 0.0) throw DomainError("g_off: zeta must be >= 0");
  check_m(m);
  check_n(N);
  switch (opts.method) {
    case OffMethod::Direct:
      return g_off_direct(g, l, zeta, m, N, opts);
    case OffMethod::Series:
      return g_off_series(g, l, zeta, m, N, opts);
    case OffMethod::Mellin:
      return g_off_mellin(g, l, zeta, m, N, opts);
  }
  throw DomainError("g_off: unknown method");
}

FormBreakdown f_form(const std::vector<PartialWaveCharge>& charges, double zeta, double m,
                     int N, const QuadratureConfig& cfg) {
  check_m(m);
  check_n(N);
  std::set<std::pair<int, int>> seen;
  for (const auto& ch : charges) {
    ch.validate();
    if (!seen.emplace(ch.l, ch.m_z).second)
      throw DuplicateChannel("f_form: two charges share an (l, m_z) channel");
  }
  FormBreakdown out;
  GOffOptions opts;
  opts.quad = cfg;
  for (const auto& ch : charges) {
    out.diagonal += g_diag(ch.radial, zeta, m, cfg);
    out.off_diagonal += g_off(ch.radial, ch.l, zeta, m, N, opts);
  }
  out.total = out.alpha_term + out.diagonal + out.off_diagonal;
  return out;
}

KernelTable KernelTable::build(int l, double m, int N, double k_max, int steps,
                               const QuadratureConfig& cfg) {
  if (l < 0) throw DomainError("KernelTable: l must be >= 0");
  check_m(m);
  check_n(N);
  if (steps < 2) throw DomainError("KernelTable: steps must be >= 2");
  if (!(k_max > 0.0)) throw DomainError("KernelTable: k_max must be > 0");
  KernelTable t;
  t.l = l;
  t.m = m;
  t.N = N;
  t.k_values.resize(steps);
  t.s_values.resize(steps);
  parallel_for(steps, [&](long long lo, long long hi) {
    for (long long i = lo; i < hi; ++i) {
      const double k = k_max * static_cast<double>(i) / (steps - 1);
      t.k_values[i] = k;
      t.s_values[i] = s_kernel(l, k, m, N, cfg);
    }
  });
  // Uniform sign per parity, up to quadrature noise.
  double scale = 0.0;
  for (double s : t.s_values) scale = std::max(scale, std::abs(s));
  const double slack = 1e-10 * scale;
  for (double s : t.s_values) {
    if (l % 2 == 0 && s < -slack)
      throw NonConvergence("KernelTable: negative entry in an even channel");
    if (l % 2 == 1 && s > slack)
      throw NonConvergence("KernelTable: positive entry in an odd channel");
  }
  return t;
}

std::string KernelTable::to_csv() const {
  std::ostringstream os;
  os << "l,m,N,k,S_l_k\n";
  for (size_t i = 0; i < k_values.size(); ++i) {
    os << l << ',' << format_g17(m) << ',' << N << ',' << format_g17(k_values[i]) << ','
       << format_g17(s_values[i]) << '\n';
  }
  return os.str();
}

}  // namespace fermistab
