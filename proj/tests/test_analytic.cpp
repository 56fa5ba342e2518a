#include <doctest.h>

#include <cmath>
#include <numbers>

#include "speclab/analytic.hpp"
#include "speclab/errors.hpp"

using namespace speclab;
using std::numbers::pi;

TEST_CASE("gamma oracles") {
  CHECK(speclab::gamma(1.0) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(speclab::gamma(0.5) == doctest::Approx(std::sqrt(pi)).epsilon(1e-14));
  CHECK(speclab::gamma(2.5) == doctest::Approx(1.3293403882).epsilon(1e-10));
  // half-integer recursion from Gamma(1/2)
  double g = std::sqrt(pi);
  for (int k = 0; k < 40; ++k) {
    CHECK(speclab::gamma(k + 0.5) == doctest::Approx(g).epsilon(1e-13));
    g *= k + 0.5;
  }
  CHECK(log_gamma(200.5) == doctest::Approx(std::lgamma(200.5)).epsilon(1e-14));
  CHECK(std::exp(log_beta(2.0, 0.5)) == doctest::Approx(4.0 / 3.0).epsilon(1e-14));
  CHECK_THROWS_AS(speclab::gamma(0.0), DomainError);
  CHECK_THROWS_AS(speclab::gamma(-1.5), DomainError);
  CHECK_THROWS_AS(log_gamma(0.0), DomainError);
}

TEST_CASE("double factorial") {
  CHECK(double_factorial(-1) == 1);
  CHECK(double_factorial(0) == 1);
  CHECK(double_factorial(5) == 15);
  CHECK(double_factorial(8) == 384);
  CHECK_THROWS_AS(double_factorial(-2), DomainError);
  CHECK_THROWS_AS(double_factorial(200), NumericError);
}

TEST_CASE("weyl constant") {
  CHECK(weyl_constant(2) == doctest::Approx(1.0 / (4.0 * pi)).epsilon(1e-14));
  CHECK(weyl_constant(3) == doctest::Approx(1.0 / (6.0 * pi * pi)).epsilon(1e-14));
  CHECK(weyl_constant(4) == doctest::Approx(1.0 / (32.0 * pi * pi)).epsilon(1e-14));
  for (int n = 2; n <= 8; ++n)
    CHECK(weyl_constant(n) == doctest::Approx(ball_volume(n) / std::pow(2.0 * pi, n)).epsilon(1e-13));
  CHECK_THROWS_AS(weyl_constant(1), DomainError);
  CHECK(sphere_area(0) == 2.0);
  CHECK(sphere_area(2) == doctest::Approx(4.0 * pi).epsilon(1e-15));
}

TEST_CASE("multi-index") {
  const MultiIndex a{1, 0}, b{0, 2};
  CHECK((a + b) == MultiIndex{1, 2});
  CHECK((a + b).order() == 3);
  CHECK(same_parity(MultiIndex{1, 2}, MultiIndex{3, 0}));
  CHECK_FALSE(same_parity(a, b));
  CHECK_THROWS_AS(same_parity(MultiIndex{1}, MultiIndex{1, 0}), DomainError);
  CHECK_THROWS_AS(MultiIndex({1, -1}), DomainError);
  CHECK(MultiIndex::zero(3) == MultiIndex{0, 0, 0});
}

TEST_CASE("derivative weyl constant") {
  CHECK(deriv_weyl_constant(2, {1, 0}, {1, 0}) == doctest::Approx(1.0 / (16.0 * pi)).epsilon(1e-14));
  CHECK(deriv_weyl_constant(2, {1, 0}, {0, 0}) == 0.0);
  for (int n = 2; n <= 5; ++n)
    CHECK(std::abs(deriv_weyl_constant(n, MultiIndex::zero(n), MultiIndex::zero(n)) - weyl_constant(n)) <= 1e-13);
  CHECK_THROWS_AS(deriv_weyl_constant(2, {1, 0}, {1, 0, 0}), DomainError);

  // closed form against ball moments, all same-parity pairs with |alpha + beta| <= 6
  for (int n = 2; n <= 3; ++n) {
    std::vector<std::vector<int>> indices;
    std::vector<int> cur(n, 0);
    const auto gen = [&](auto&& self, int j, int left) -> void {
      if (j == n) {
        indices.push_back(cur);
        return;
      }
      for (int v = 0; v <= left; ++v) {
        cur[j] = v;
        self(self, j + 1, left - v);
      }
    };
    gen(gen, 0, 6);
    int checked = 0;
    for (const auto& av : indices)
      for (const auto& bv : indices) {
        const MultiIndex alpha(av), beta(bv);
        if ((alpha + beta).order() > 6) continue;
        const double x = deriv_weyl_constant(n, alpha, beta);
        const double y = deriv_weyl_constant_moment(n, alpha, beta);
        CHECK(std::abs(x - y) <= 1e-12 * std::max(1.0, std::abs(y)));
        if (!same_parity(alpha, beta)) CHECK(x == 0.0);
        ++checked;
      }
    CHECK(checked > 50);
  }
  CHECK(ball_moment({2, 0}) == doctest::Approx(pi / 4.0).epsilon(1e-14));
  CHECK(ball_moment({1, 0}) == 0.0);
}

TEST_CASE("gegenbauer values") {
  CHECK(gegenbauer(2, 0.5, 1.0) == doctest::Approx(1.0));
  CHECK(std::abs(gegenbauer(3, 0.5, std::sqrt(3.0 / 5.0))) < 1e-15);
  CHECK(gegenbauer(1, 1.0, 0.3) == doctest::Approx(0.6).epsilon(1e-15));
  CHECK(gegenbauer(0, 2.5, -0.7) == 1.0);
  CHECK_THROWS_AS(gegenbauer(2, 0.5, 1.5), DomainError);
  CHECK_THROWS_AS(gegenbauer(2, 0.5, -1.0000001), DomainError);
  CHECK_THROWS_AS(gegenbauer(-1, 0.5, 0.0), DomainError);
  CHECK(gegenbauer_at_one(10, 1.0) == doctest::Approx(11.0));
  CHECK(gegenbauer_at_one(7, 0.5) == doctest::Approx(1.0));
  CHECK(gegenbauer_at_one(7, 1.5) == doctest::Approx(gegenbauer(7, 1.5, 1.0)).epsilon(1e-13));

  std::vector<double> all(9);
  gegenbauer_all(8, 1.5, 0.37, all);
  for (int m = 0; m <= 8; ++m) CHECK(all[m] == doctest::Approx(gegenbauer(m, 1.5, 0.37)).epsilon(1e-14));

  const double h = 1e-6;
  for (double t : {-0.8, 0.1, 0.55})
    CHECK(gegenbauer_derivative(6, 0.5, t) ==
          doctest::Approx((gegenbauer(6, 0.5, t + h) - gegenbauer(6, 0.5, t - h)) / (2 * h)).epsilon(1e-7));
}

TEST_CASE("gegenbauer zeros") {
  const auto z1 = gegenbauer_zeros(1, 0.5);
  REQUIRE(z1.size() == 1);
  CHECK(z1[0] == 0.0);
  const auto z2 = gegenbauer_zeros(2, 0.5);
  REQUIRE(z2.size() == 2);
  CHECK(z2[0] == doctest::Approx(-1.0 / std::sqrt(3.0)).epsilon(1e-15));
  CHECK(z2[1] == doctest::Approx(1.0 / std::sqrt(3.0)).epsilon(1e-15));
  const auto z3 = gegenbauer_zeros(3, 0.5);
  REQUIRE(z3.size() == 3);
  CHECK(z3[1] == 0.0);
  CHECK(z3[2] == doctest::Approx(std::sqrt(3.0 / 5.0)).epsilon(1e-15));
  CHECK_THROWS_AS(gegenbauer_zeros(0, 0.5), DomainError);

  SUBCASE("strict interlacing up to degree 500") {
    for (double nu : {0.5, 1.0}) {
      std::vector<double> prev = gegenbauer_zeros(1, nu);
      for (int m = 2; m <= 500; ++m) {
        const std::vector<double> cur = gegenbauer_zeros(m, nu);
        REQUIRE(cur.size() == static_cast<std::size_t>(m));
        bool ok = cur.front() > -1.0 && cur.back() < 1.0;
        for (int i = 0; i < m - 1; ++i) ok = ok && cur[i] < prev[i] && prev[i] < cur[i + 1];
        if (!ok) FAIL("interlacing fails at degree " << m << " nu " << nu);
        prev = cur;
      }
    }
  }

  SUBCASE("large degree converges") {
    const auto z = gegenbauer_zeros(2000, 0.5);
    CHECK(z.size() == 2000);
    for (std::size_t i = 1; i < z.size(); ++i) CHECK(z[i] > z[i - 1]);
    for (std::size_t i = 0; i < z.size(); ++i) CHECK(z[i] == -z[z.size() - 1 - i]);
  }
}

TEST_CASE("gauss-legendre rule") {
  const auto& r1 = gauss_legendre_rule(1);
  CHECK(r1.nodes == std::vector<double>{0.0});
  CHECK(r1.weights[0] == doctest::Approx(2.0));
  const auto& r2 = gauss_legendre_rule(2);
  CHECK(r2.nodes[1] == doctest::Approx(1.0 / std::sqrt(3.0)).epsilon(1e-15));
  CHECK(r2.weights[0] == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(gauss_legendre_rule(5).integrate([](double t) { return t * t * t * t; }) ==
        doctest::Approx(0.4).epsilon(1e-15));
  CHECK(gauss_legendre_rule(40).integrate([](double x) { return std::sin(x); }, 0.0, pi) ==
        doctest::Approx(2.0).epsilon(1e-14));
  CHECK(&gauss_legendre_rule(40) == &gauss_legendre_rule(40));
  CHECK_THROWS_AS(gauss_legendre_rule(0), DomainError);
  CHECK_THROWS_AS(gauss_legendre_rule(5001), DomainError);
}

TEST_CASE("bessel functions") {
  CHECK(bessel_j0(0.0) == 1.0);
  CHECK(bessel_j1(0.0) == 0.0);
  CHECK(bessel_j0(1.0) == doctest::Approx(0.7651976865579666).epsilon(1e-14));
  CHECK(bessel_j1(1.0) == doctest::Approx(0.4400505857449335).epsilon(1e-14));
  CHECK(bessel_j0(20.0) == doctest::Approx(0.1670246643405831).epsilon(1e-12));
  CHECK(bessel_j1(20.0) == doctest::Approx(0.0668331241758501).epsilon(1e-12));
  // continuity across the series / asymptotic switch at 12
  CHECK(std::abs(bessel_j0(12.0 - 1e-12) - bessel_j0(12.0 + 1e-12)) < 1e-11);
  CHECK(std::abs(bessel_j1(12.0 - 1e-12) - bessel_j1(12.0 + 1e-12)) < 1e-11);
  CHECK(bessel_j3half(2.0) == doctest::Approx(std::sqrt(2.0 / (pi * 2.0)) * (std::sin(2.0) / 2.0 - std::cos(2.0))));
}

TEST_CASE("phi kernel") {
  for (int n = 2; n <= 5; ++n) CHECK(std::abs(phi_kernel(n, 0.0).value - weyl_constant(n)) <= 1e-12);
  CHECK(phi_kernel(2, 1.0).n == 2);
  CHECK(phi_kernel(2, 1.0).tau == 1.0);
  CHECK_THROWS_AS(phi_kernel(2, -0.1), DomainError);
  CHECK_THROWS_AS(phi_kernel(1, 1.0), DomainError);
  CHECK_THROWS_AS(phi_kernel_bessel(4, 1.0), DomainError);

  for (int n = 2; n <= 3; ++n) {
    double worst = 0.0;
    for (int k = 0; k <= 3000; ++k) {
      const double tau = 0.01 * k;
      worst = std::max(worst, std::abs(phi_kernel(n, tau).value - phi_kernel_bessel(n, tau)));
    }
    CHECK(worst <= 1e-9);
  }
  CHECK(std::abs(phi_kernel(2, 3.831706).value) < 1e-8);
}

TEST_CASE("phi kernel zeros") {
  CHECK(phi_kernel_zero(3, 1) == doctest::Approx(4.493409).epsilon(1e-6));
  CHECK(phi_kernel_zero(3, 2) == doctest::Approx(7.725253).epsilon(1e-6));
  CHECK(phi_kernel_zero(2, 1) == doctest::Approx(3.831706).epsilon(1e-6));
  for (int i = 1; i <= 10; ++i) {
    const double t = phi_kernel_zero(3, i);
    CHECK(std::abs(std::tan(t) - t) / (1.0 + t * t) <= 1e-10);
  }
  CHECK_THROWS_AS(phi_kernel_zero(2, 200), RangeError);
  CHECK_THROWS_AS(phi_kernel_zero(2, 0), DomainError);
}

TEST_CASE("epsilon exponent") {
  CHECK(epsilon_exponent(2, LpExponent::infinity()) == doctest::Approx(0.5));
  CHECK(epsilon_exponent(2, LpExponent::finite(6.0)) == doctest::Approx(1.0 / 6.0));
  CHECK(epsilon_exponent(2, LpExponent::finite(2.0)) == 0.0);
  CHECK(epsilon_exponent(2, LpExponent::finite(4.0)) == doctest::Approx(0.125));
  CHECK_THROWS_AS(epsilon_exponent(2, LpExponent::finite(1.5)), DomainError);
  CHECK_THROWS_AS(LpExponent::finite(0.5), DomainError);
  CHECK_THROWS_AS(LpExponent::infinity().value(), DomainError);
  CHECK(LpExponent::infinity().reciprocal() == 0.0);

  for (int n = 2; n <= 5; ++n) {
    const double pc = critical_exponent(n);
    const double a = (n - 1) / 2.0 - n / pc;
    const double b = (0.25 - 0.5 / pc) * (n - 1);
    CHECK(std::abs(a - b) <= 1e-15);
    CHECK(epsilon_exponent(n, LpExponent::finite(pc)) == doctest::Approx(a).epsilon(1e-15));
    double prev = -1.0;
    for (double p = 2.0; p <= 100.0; p += 0.25) {
      const double e = epsilon_exponent(n, LpExponent::finite(p));
      CHECK(e >= prev);
      prev = e;
    }
    CHECK(epsilon_exponent(n, LpExponent::infinity()) >= prev);
  }
}
