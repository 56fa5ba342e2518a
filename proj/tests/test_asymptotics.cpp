#include <doctest.h>

#include <cmath>
#include <numbers>

#include "speclab/asymptotics.hpp"
#include "speclab/errors.hpp"
#include "speclab/parallel.hpp"
#include "speclab/sphere.hpp"

using namespace speclab;
using std::numbers::pi;

namespace {

std::vector<std::pair<double, double>> power_law(double exponent, double c) {
  std::vector<std::pair<double, double>> s;
  for (double x = 10.0; x <= 400.0; x *= 1.37) s.emplace_back(x, c * std::pow(x, exponent));
  return s;
}

const std::vector<double> kShortGrid = {50.0, 100.0, 150.0, 200.0, 250.0, 300.0};

}  // namespace

TEST_CASE("fit_scaling recovers exact power laws") {
  const std::vector<std::pair<double, double>> sq = {{10, 100}, {20, 400}, {40, 1600}};
  const ScalingFit f = fit_scaling(sq);
  CHECK(std::abs(f.exponent - 2.0) <= 1e-12);
  CHECK(f.max_residual <= 1e-12);
  CHECK(f.points == 3);
  for (double e : {0.5, 1.0, 2.0, 3.5}) {
    const ScalingFit g = fit_scaling(power_law(e, 0.3));
    CHECK(std::abs(g.exponent - e) <= 1e-12);
    CHECK(std::abs(g.log_constant - std::log(0.3)) <= 1e-11);
    std::vector<std::pair<double, double>> refit;
    for (double x : {7.0, 30.0, 90.0, 500.0}) refit.emplace_back(x, std::exp(g.log_constant) * std::pow(x, g.exponent));
    CHECK(std::abs(fit_scaling(refit).exponent - g.exponent) <= 1e-12);
  }
  CHECK_THROWS_AS(fit_scaling(std::vector<std::pair<double, double>>{{1, 1}, {2, 2}}), DomainError);
  CHECK_THROWS_AS(fit_scaling(std::vector<std::pair<double, double>>{{1, 1}, {2, 0}, {3, 3}}), DomainError);
  CHECK_THROWS_AS(fit_scaling(std::vector<std::pair<double, double>>{{1, 1}, {2, -2}, {3, 3}}), DomainError);
  CHECK_THROWS_AS(fit_scaling(std::vector<std::pair<double, double>>{{1, 1}, {1, 2}, {3, 3}}), DomainError);
  CHECK_THROWS_AS(fit_scaling(std::vector<std::pair<double, double>>{{0, 1}, {2, 2}, {3, 3}}), DomainError);
}

TEST_CASE("grids") {
  CHECK(default_torus_grid().size() == 11);
  CHECK(default_torus_grid().front() == 50.0);
  CHECK(default_degree_grid().size() == 20);
  CHECK(default_tau_grid().front() == 0.5);
  CHECK(default_tau_grid().back() == 6.0);
  const std::vector<int> d = {20, 40};
  CHECK(pinned_sphere_grid(2, d)[1] == std::sqrt(40.0 * 41.0));
  CHECK(parse_manifold("sphere") == Manifold::sphere);
  CHECK(parse_family("highest-weight") == Family::highest_weight);
  CHECK_THROWS_AS(parse_manifold("klein"), DomainError);
}

TEST_CASE("weyl probe") {
  const ProbeResult torus = probe_weyl(Manifold::torus, 2, default_torus_grid());
  CHECK(torus.rows.size() == 11);
  CHECK(*torus.rows.back().ratio == doctest::Approx(1.0 / (4 * pi)).epsilon(0.01));
  REQUIRE(torus.fit);
  CHECK(torus.fit->exponent == doctest::Approx(2.0).epsilon(0.01));
  for (const ProbeRow& row : torus.rows) CHECK((std::isfinite(*row.ratio) && *row.ratio > 0.0));

  const double l50 = sphere::pinned_lambda(2, 50);
  const ProbeResult sphere = probe_weyl(Manifold::sphere, 2, std::vector<double>{l50});
  // e(x,x,lambda_M) = (M+1)^2/(4 pi) and lambda_M^2 = M(M+1)
  CHECK(*sphere.rows[0].ratio * 4 * pi == doctest::Approx(51.0 / 50.0).epsilon(1e-12));

  CHECK_THROWS_AS(probe_weyl(Manifold::torus, 2, std::vector<double>{0.0, 10.0}), DomainError);
  CHECK_THROWS_AS(probe_weyl(Manifold::torus, 2, std::vector<double>{}), DomainError);
  CHECK_THROWS_AS(probe_weyl(Manifold::torus, 2, std::vector<double>{20.0, 10.0}), DomainError);
  CHECK_THROWS_AS(probe_weyl(Manifold::torus, 2, std::vector<double>{2000.0}), ResourceError);
}

TEST_CASE("offdiag and difference probes") {
  for (Manifold m : {Manifold::torus, Manifold::sphere}) {
    const std::vector<double> grid =
        m == Manifold::torus ? kShortGrid : pinned_sphere_grid(2, std::vector<int>{50, 100, 200, 400});
    const ProbeResult weyl = probe_weyl(m, 2, grid);
    const ProbeResult off0 = probe_offdiag(m, 2, 0.0, grid);
    const ProbeResult off2 = probe_offdiag(m, 2, 2.0, grid);
    const ProbeResult diff = probe_difference(m, 2, 2.0, grid);
    const ProbeResult diff0 = probe_difference(m, 2, 0.0, grid);
    for (std::size_t i = 0; i < grid.size(); ++i) {
      CHECK(off0.rows[i].raw == weyl.rows[i].raw);
      CHECK(diff.rows[i].raw == 2.0 * (weyl.rows[i].raw - off2.rows[i].raw));
      CHECK(diff0.rows[i].raw == 0.0);
    }
    const double phi0 = phi_kernel(2, 0.0).value;
    CHECK(std::abs(*off2.rows.back().ratio - phi_kernel(2, 2.0).value) <= 0.02 * phi0);
    CHECK(std::abs(*diff.rows.back().ratio - 2 * (phi0 - phi_kernel(2, 2.0).value)) <= 0.02 * 2 * phi0);

    const ProbeResult zero = probe_offdiag(m, 2, phi_kernel_zero(2, 1), grid);
    CHECK(*zero.predicted_limit == 0.0);
    for (const ProbeRow& row : zero.rows) {
      CHECK_FALSE(row.ratio.has_value());
      CHECK(std::abs(row.extras[0]) <= 0.02 * phi0);
    }
    const ProbeResult half = probe_difference(m, 2, 0.5, grid);
    CHECK(diff.rows.back().raw >= half.rows.back().raw);
  }
  CHECK_THROWS_AS(probe_offdiag(Manifold::torus, 2, -1.0, kShortGrid), DomainError);
  ProbeOptions axis;
  axis.direction = {1.0, 0.0};
  const ProbeResult a = probe_offdiag(Manifold::torus, 2, 2.0, kShortGrid, axis);
  CHECK(a.rows.size() == kShortGrid.size());
  axis.direction = {1.0};
  CHECK_THROWS_AS(probe_offdiag(Manifold::torus, 2, 2.0, kShortGrid, axis), DomainError);
}

TEST_CASE("derivative probe") {
  const ProbeResult d = probe_derivative(2, {1, 0}, {1, 0}, default_torus_grid());
  CHECK(*d.rows.back().ratio == doctest::Approx(1.0 / (16 * pi)).epsilon(0.01));
  const ProbeResult odd = probe_derivative(2, {1, 0}, {0, 0}, default_torus_grid());
  for (const ProbeRow& row : odd.rows) CHECK(row.raw == 0.0);
  CHECK_FALSE(odd.fit.has_value());
  const ProbeResult w = probe_derivative(2, {0, 0}, {0, 0}, kShortGrid);
  const ProbeResult weyl = probe_weyl(Manifold::torus, 2, kShortGrid);
  for (std::size_t i = 0; i < kShortGrid.size(); ++i) CHECK(w.rows[i].raw == doctest::Approx(weyl.rows[i].raw).epsilon(1e-15));
  CHECK_THROWS_AS(probe_derivative(2, {1, 0, 0}, {1, 0}, kShortGrid), DomainError);
}

TEST_CASE("band probe") {
  const ProbeResult b = probe_band(Manifold::torus, 2, default_torus_grid());
  REQUIRE(b.fit);
  CHECK(std::abs(b.fit->exponent - 1.0) <= 0.1);
  const ProbeResult s = probe_band(Manifold::sphere, 2, std::vector<double>{0.2, 10.0, 20.0, 30.0, 40.0});
  CHECK(s.rows[0].raw == 0.0);
  CHECK(s.rows[1].raw == doctest::Approx(21.0 / (4 * pi)).epsilon(1e-14));
  CHECK(s.rows[1].raw / 10.0 == doctest::Approx(0.167).epsilon(0.01));
}

TEST_CASE("hoelder probe") {
  const ProbeResult h = probe_hoelder(Manifold::torus, 2, 0.5, default_tau_grid(), default_torus_grid());
  REQUIRE(h.fit);
  CHECK(std::abs(h.fit->exponent - 2.0) <= 0.1);
  const ProbeResult h0 = probe_hoelder(Manifold::torus, 2, 0.01, default_tau_grid(), default_torus_grid());
  REQUIRE(h0.fit);
  CHECK(h0.fit->exponent == doctest::Approx(1.0).epsilon(0.1));
  // small tau: the quotient vanishes
  const std::vector<double> tiny = {1e-4};
  const ProbeResult t = probe_hoelder(Manifold::torus, 2, 0.5, tiny, std::vector<double>{100.0});
  const ProbeResult big = probe_hoelder(Manifold::torus, 2, 0.5, default_tau_grid(), std::vector<double>{100.0});
  CHECK(t.rows[0].raw < 0.01 * big.rows[0].raw);
  CHECK_THROWS_AS(probe_hoelder(Manifold::torus, 2, 1.0, default_tau_grid(), kShortGrid), DomainError);
  CHECK_THROWS_AS(probe_hoelder(Manifold::torus, 2, 0.5, std::vector<double>{20.0}, kShortGrid), DomainError);
}

TEST_CASE("lp probe") {
  const auto degrees = default_degree_grid();
  const ProbeResult z = probe_lp(2, Family::zonal, LpExponent::infinity(), 0.0, degrees);
  CHECK(z.fit->exponent == doctest::Approx(0.5).epsilon(0.02));
  const ProbeResult z1 = probe_lp(2, Family::zonal, LpExponent::infinity(), 1.0, degrees);
  CHECK(z1.fit->exponent == doctest::Approx(1.5).epsilon(0.02));
  const ProbeResult q = probe_lp(2, Family::highest_weight, LpExponent::finite(4.0), 0.0, degrees);
  CHECK(q.fit->exponent == doctest::Approx(0.125).epsilon(0.05));
  // outside the extremal range the probe still reports
  const ProbeResult off = probe_lp(2, Family::highest_weight, LpExponent::finite(10.0), 0.0, degrees);
  CHECK(off.rows.size() == degrees.size());
  const ProbeResult qinf = probe_lp(2, Family::highest_weight, LpExponent::infinity(), 0.0, std::vector<int>{20, 40});
  CHECK(qinf.rows[0].raw > 0.0);
  CHECK_THROWS_AS(probe_lp(2, Family::zonal, LpExponent::finite(4.0), -1.0, degrees), DomainError);
  CHECK_THROWS_AS(probe_lp(2, Family::zonal, LpExponent::finite(4.0), 0.0, std::vector<int>{0, 5}), DomainError);
}

TEST_CASE("cksigma probe") {
  const std::vector<int> degrees = {20, 60, 100, 140, 180, 220};
  const ProbeResult g = probe_cksigma(2, 1.0, degrees);
  CHECK(g.fit->exponent == doctest::Approx(1.5).epsilon(0.02));
  const ProbeResult h = probe_cksigma(2, 0.5, degrees);
  CHECK(h.fit->exponent == doctest::Approx(1.0).epsilon(0.05));
  const ProbeResult s0 = probe_cksigma(2, 0.0, degrees);
  for (const ProbeRow& row : s0.rows) CHECK(*row.ratio == doctest::Approx(1.0).epsilon(1e-12));
  CHECK_THROWS_AS(probe_cksigma(2, 1.5, degrees), DomainError);
}

TEST_CASE("nodal probe") {
  const ProbeResult r = probe_nodal(2, std::vector<int>{3, 299, 300});
  CHECK(r.rows[0].raw == doctest::Approx(2.3719).epsilon(1e-4));
  CHECK(std::abs(r.rows[1].extras[1] - 1.0) <= 1e-10);
  CHECK(std::abs(r.rows[2].raw - bessel_j0_first_zero()) <= 0.005 * bessel_j0_first_zero());
  CHECK(r.rows[1].extras[2] == doctest::Approx(r.rows[1].extras[0]).epsilon(1e-12));
  CHECK(*r.predicted_limit == doctest::Approx(2.404826).epsilon(1e-6));
  CHECK_THROWS_AS(probe_nodal(3, std::vector<int>{3}), DomainError);
}

TEST_CASE("smoothed probe") {
  const ProbeResult s = probe_smoothed(2, torus::make_window(4.0), default_torus_grid());
  REQUIRE(s.fit);
  CHECK(std::abs(s.fit->exponent - 1.0) <= 0.1);
  CHECK(*s.predicted_limit == doctest::Approx(1.0 / 3.0).epsilon(1e-14));
}

TEST_CASE("bessel oracles") {
  CHECK(bessel_j0_first_zero() == doctest::Approx(2.404826).epsilon(1e-6));
  CHECK(bessel_j0_first_trough() == doctest::Approx(0.402759).epsilon(1e-6));
  CHECK(bessel_j1_max() == doctest::Approx(0.581865).epsilon(1e-6));
}

TEST_CASE("probes are independent of thread count") {
  set_worker_threads(1);
  const ProbeResult a = probe_offdiag(Manifold::torus, 2, 2.0, default_torus_grid());
  const ProbeResult c = probe_lp(2, Family::zonal, LpExponent::infinity(), 0.0, std::vector<int>{20, 40, 60, 80});
  set_worker_threads(4);
  const ProbeResult b = probe_offdiag(Manifold::torus, 2, 2.0, default_torus_grid());
  const ProbeResult d = probe_lp(2, Family::zonal, LpExponent::infinity(), 0.0, std::vector<int>{20, 40, 60, 80});
  CHECK(a == b);
  CHECK(c == d);
}
