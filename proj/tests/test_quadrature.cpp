#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "fermistab/errors.hpp"
#include "fermistab/legendre.hpp"
#include "fermistab/quadrature.hpp"

using namespace fermistab;

TEST_CASE("constant integrand over the unit interval") {
  CHECK(integrate_adaptive([](double) { return 1.0; }, 0.0, 1.0) == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("exponential tail over the half line") {
  const double v = integrate_adaptive([](double x) { return std::exp(-x); }, 0.0, kInf);
  CHECK(v == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("logarithm closed form at two quadrature orders") {
  auto f = [](double y) { return 1.0 / (2.0 + y); };
  QuadratureConfig lo;
  lo.base_order = 7;
  QuadratureConfig hi;
  hi.base_order = 21;
  const double expect = std::log(3.0);
  CHECK(integrate_adaptive(f, -1.0, 1.0, lo) == doctest::Approx(expect).epsilon(1e-12));
  CHECK(integrate_adaptive(f, -1.0, 1.0, hi) == doctest::Approx(expect).epsilon(1e-12));
}

TEST_CASE("polynomials up to degree 2n-1 are exact on one panel") {
  QuadratureConfig cfg;
  cfg.base_order = 5;  // exact through degree 9
  for (int deg = 0; deg <= 9; ++deg) {
    const double v = integrate_adaptive([deg](double x) { return std::pow(x, deg); }, 0.0, 1.0, cfg);
    CHECK(v == doctest::Approx(1.0 / (deg + 1)).epsilon(1e-13));
  }
}

TEST_CASE("invalid ranges and configs are rejected") {
  CHECK_THROWS_AS(integrate_adaptive([](double) { return 1.0; }, 1.0, 1.0), InvalidRange);
  CHECK_THROWS_AS(integrate_adaptive([](double) { return 1.0; }, 2.0, 1.0), InvalidRange);
  QuadratureConfig bad;
  bad.rel_tol = 0.0;
  CHECK_THROWS_AS(integrate_adaptive([](double) { return 1.0; }, 0.0, 1.0, bad), DomainError);
}

TEST_CASE("non-convergence surfaces instead of a silent wrong answer") {
  QuadratureConfig cfg;
  cfg.max_subdivisions = 2;
  cfg.rel_tol = 1e-14;
  cfg.abs_tol = 0.0;
  // 1/sqrt(x) is integrable but needs many panels near zero.
  CHECK_THROWS_AS(
      integrate_adaptive([](double x) { return 1.0 / std::sqrt(x + 1e-14); }, 0.0, 1.0, cfg),
      NonConvergence);
}

TEST_CASE("find_root linear, sqrt2 and pi/2") {
  CHECK(find_root([](double x) { return x - 1.0; }, 0.0, 2.0, 1e-12) ==
        doctest::Approx(1.0).epsilon(1e-12));
  CHECK(find_root([](double x) { return x * x - 2.0; }, 1.0, 2.0, 1e-12) ==
        doctest::Approx(std::sqrt(2.0)).epsilon(1e-11));
  CHECK(find_root([](double x) { return std::cos(x); }, 1.0, 2.0, 1e-12) ==
        doctest::Approx(M_PI / 2.0).epsilon(1e-11));
}

TEST_CASE("find_root requires a sign change") {
  CHECK_THROWS_AS(find_root([](double x) { return x * x + 1.0; }, -1.0, 1.0, 1e-10), NoSignChange);
}

TEST_CASE("legendre values and domain") {
  CHECK(legendre_p(0, 0.3) == doctest::Approx(1.0));
  CHECK(legendre_p(1, 0.5) == doctest::Approx(0.5));
  CHECK(legendre_p(2, 0.5) == doctest::Approx(-0.125));
  CHECK_THROWS_AS(legendre_p(1, 1.5), DomainError);
  CHECK_THROWS_AS(legendre_p(-1, 0.0), DomainError);
}

TEST_CASE("legendre recurrence residual through l = 40") {
  for (int l = 1; l <= 40; ++l) {
    for (int i = 0; i <= 20; ++i) {
      const double y = -1.0 + 0.1 * i;
      const double res = (l + 1) * legendre_p(l + 1, y) - (2 * l + 1) * y * legendre_p(l, y) +
                         l * legendre_p(l - 1, y);
      CHECK(std::abs(res) < 1e-12);
    }
  }
}

TEST_CASE("legendre orthogonality by quadrature") {
  for (int l = 0; l <= 12; ++l) {
    for (int lp = l; lp <= 12; ++lp) {
      const double v = integrate_adaptive(
          [l, lp](double y) { return legendre_p(l, y) * legendre_p(lp, y); }, -1.0, 1.0);
      const double expect = (l == lp) ? 2.0 / (2 * l + 1) : 0.0;
      CHECK(std::abs(v - expect) < 1e-10);
    }
  }
}
