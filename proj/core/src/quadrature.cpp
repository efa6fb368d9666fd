#include "fermistab/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <queue>
#include <vector>

#include "fermistab/errors.hpp"
#include "fermistab/legendre.hpp"

namespace fermistab {

void QuadratureConfig::validate() const {
  if (!(rel_tol > 0.0)) throw DomainError("QuadratureConfig: rel_tol must be > 0");
  if (!(abs_tol >= 0.0)) throw DomainError("QuadratureConfig: abs_tol must be >= 0");
  if (max_subdivisions < 1) throw DomainError("QuadratureConfig: max_subdivisions must be >= 1");
  if (base_order < 2) throw DomainError("QuadratureConfig: base_order must be >= 2");
}

namespace {

struct GlRule {
  std::vector<double> x;  // nodes on (-1,1)
  std::vector<double> w;
};

// Nodes by Newton iteration on P_n, starting from the Chebyshev-like guess.
GlRule make_gl_rule(int n) {
  GlRule rule;
  rule.x.resize(n);
  rule.w.resize(n);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    double pp = 0.0;
    for (int it = 0; it < 100; ++it) {
      // P_n(x) and P_{n-1}(x) by the three-term recurrence
      double p0 = 1.0, p1 = x;
      for (int l = 1; l < n; ++l) {
        double p2 = ((2 * l + 1) * x * p1 - l * p0) / (l + 1);
        p0 = p1;
        p1 = p2;
      }
      pp = n * (x * p1 - p0) / (x * x - 1.0);
      double dx = p1 / pp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    rule.x[i] = -x;
    rule.x[n - 1 - i] = x;
    double w = 2.0 / ((1.0 - x * x) * pp * pp);
    rule.w[i] = w;
    rule.w[n - 1 - i] = w;
  }
  return rule;
}

const GlRule& gl_rule(int n) {
  static std::mutex mu;
  static std::map<int, GlRule> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, make_gl_rule(n)).first;
  return it->second;
}

double gl_panel(const std::function<double(double)>& f, double a, double b, const GlRule& rule) {
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  double sum = 0.0;
  for (size_t i = 0; i < rule.x.size(); ++i) sum += rule.w[i] * f(mid + half * rule.x[i]);
  return sum * half;
}

struct Segment {
  double a, b;
  double coarse;   // one-panel estimate
  double fine;     // two-half-panel estimate
  double fine_a;   // left half
  double fine_b;   // right half
  double err;
};

Segment make_segment(const std::function<double(double)>& f, double a, double b,
                     const GlRule& rule) {
  Segment s;
  s.a = a;
  s.b = b;
  s.coarse = gl_panel(f, a, b, rule);
  const double mid = 0.5 * (a + b);
  s.fine_a = gl_panel(f, a, mid, rule);
  s.fine_b = gl_panel(f, mid, b, rule);
  s.fine = s.fine_a + s.fine_b;
  s.err = std::abs(s.fine - s.coarse);
  if (!std::isfinite(s.fine) || !std::isfinite(s.coarse))
    throw NonConvergence("integrate_adaptive: integrand produced a non-finite value");
  return s;
}

double integrate_seeded(const std::function<double(double)>& f,
                        const std::vector<double>& pts, const QuadratureConfig& cfg) {
  const GlRule& rule = gl_rule(cfg.base_order);
  auto cmp = [](const Segment& l, const Segment& r) { return l.err < r.err; };
  std::priority_queue<Segment, std::vector<Segment>, decltype(cmp)> heap(cmp);

  double total = 0.0;
  double total_err = 0.0;
  for (size_t i = 0; i + 1 < pts.size(); ++i) {
    Segment s = make_segment(f, pts[i], pts[i + 1], rule);
    total += s.fine;
    total_err += s.err;
    heap.push(s);
  }

  int splits = 0;
  while (total_err > std::max(cfg.abs_tol, cfg.rel_tol * std::abs(total))) {
    if (splits >= cfg.max_subdivisions)
      throw NonConvergence("integrate_adaptive: max_subdivisions exhausted");
    Segment worst = heap.top();
    heap.pop();
    total -= worst.fine;
    total_err -= worst.err;
    const double mid = 0.5 * (worst.a + worst.b);
    Segment left = make_segment(f, worst.a, mid, rule);
    Segment right = make_segment(f, mid, worst.b, rule);
    total += left.fine + right.fine;
    total_err += left.err + right.err;
    heap.push(left);
    heap.push(right);
    ++splits;
  }
  return total;
}

double integrate_finite(const std::function<double(double)>& f, double a, double b,
                        const QuadratureConfig& cfg) {
  return integrate_seeded(f, {a, b}, cfg);
}

}  // namespace

double integrate_adaptive(const std::function<double(double)>& f,
                          const std::vector<double>& breakpoints,
                          const QuadratureConfig& cfg) {
  cfg.validate();
  if (breakpoints.size() < 2) throw InvalidRange("integrate_adaptive: need at least 2 breakpoints");
  for (size_t i = 0; i + 1 < breakpoints.size(); ++i)
    if (!(breakpoints[i] < breakpoints[i + 1]))
      throw InvalidRange("integrate_adaptive: breakpoints must be strictly increasing");
  if (!std::isfinite(breakpoints.front()) || !std::isfinite(breakpoints.back()))
    throw InvalidRange("integrate_adaptive: breakpoints must be finite");
  return integrate_seeded(f, breakpoints, cfg);
}

double integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                          const QuadratureConfig& cfg) {
  cfg.validate();
  if (!(a < b)) throw InvalidRange("integrate_adaptive: requires a < b");
  if (!std::isfinite(a)) throw InvalidRange("integrate_adaptive: lower bound must be finite");

  if (std::isinf(b)) {
    if (a < 0.0) {
      QuadratureConfig half = cfg;
      half.rel_tol = 0.5 * cfg.rel_tol;
      half.abs_tol = 0.5 * cfg.abs_tol;
      return integrate_finite(f, a, 0.0, half) + integrate_adaptive(f, 0.0, kInf, half);
    }
    // t = p/(1+p) maps [a, inf) to [a/(1+a), 1); dp = dt/(1-t)^2
    auto mapped = [&f](double t) {
      const double omt = 1.0 - t;
      const double p = t / omt;
      return f(p) / (omt * omt);
    };
    return integrate_finite(mapped, a / (1.0 + a), 1.0, cfg);
  }
  return integrate_finite(f, a, b, cfg);
}

double find_root(const std::function<double(double)>& f, double lo, double hi, double tol) {
  if (!(tol > 0.0)) throw DomainError("find_root: tol must be > 0");
  if (!(lo < hi)) throw InvalidRange("find_root: requires lo < hi");
  double flo = f(lo);
  double fhi = f(hi);
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  if (!(flo * fhi < 0.0)) throw NoSignChange("find_root: f(lo) and f(hi) have the same sign");

  // Bisection with a secant candidate; the bracket always shrinks, so the
  // bisection convergence guarantee is preserved.
  for (int it = 0; it < 2000 && (hi - lo) > tol; ++it) {
    double mid = 0.5 * (lo + hi);
    double cand = mid;
    const double denom = fhi - flo;
    if (denom != 0.0) {
      double sec = (lo * fhi - hi * flo) / denom;
      const double margin = 0.01 * (hi - lo);
      if (sec > lo + margin && sec < hi - margin && (it % 2 == 0)) cand = sec;
    }
    double fc = f(cand);
    if (fc == 0.0) return cand;
    if (flo * fc < 0.0) {
      hi = cand;
      fhi = fc;
    } else {
      lo = cand;
      flo = fc;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace fermistab
