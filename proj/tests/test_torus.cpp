#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <numbers>

#include "speclab/errors.hpp"
#include "speclab/parallel.hpp"
#include "speclab/torus.hpp"

using namespace speclab;
using namespace speclab::torus;
using std::numbers::pi;

namespace {

std::int64_t brute_count(int n, double lambda) {
  const int c = static_cast<int>(std::ceil(lambda));
  const std::int64_t r2 = squared_radius_floor(lambda);
  std::int64_t count = 0;
  if (n == 2) {
    for (int a = -c; a <= c; ++a)
      for (int b = -c; b <= c; ++b) count += (a * a + b * b <= r2);
  } else {
    for (int a = -c; a <= c; ++a)
      for (int b = -c; b <= c; ++b)
        for (int d = -c; d <= c; ++d) count += (a * a + b * b + d * d <= r2);
  }
  return count;
}

std::filesystem::path scratch(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / ("speclab_torus_" + name);
  std::filesystem::remove_all(dir);
  return dir;
}

}  // namespace

TEST_CASE("lattice enumeration oracles") {
  const LatticeEnumeration one = scan_lattice(2, 1.0);
  CHECK(one.size() == 5);
  CHECK(scan_lattice(2, 5.0).size() == 81);
  CHECK(scan_lattice(3, 2.0).size() == 33);

  const LatticeEnumeration l = scan_lattice(2, 7.3);
  bool sorted = true, has_origin = false;
  for (std::size_t i = 0; i < l.size(); ++i) {
    const auto p = l.point(i);
    has_origin = has_origin || (p[0] == 0 && p[1] == 0);
    if (i > 0) {
      const auto q = l.point(i - 1);
      sorted = sorted && std::lexicographical_compare(q.begin(), q.end(), p.begin(), p.end());
    }
    CHECK(l.norm2(i) == p[0] * p[0] + p[1] * p[1]);
  }
  CHECK(sorted);
  CHECK(has_origin);
  // closed under k -> -k: lexicographic order reverses under negation
  for (std::size_t i = 0; i < l.size(); ++i) {
    const auto p = l.point(i);
    const auto q = l.point(l.size() - 1 - i);
    CHECK(p[0] == -q[0]);
    CHECK(p[1] == -q[1]);
  }
}

TEST_CASE("radius limits") {
  CHECK(radius_limit(2) == 1500.0);
  CHECK(radius_limit(3) == 200.0);
  CHECK_THROWS_AS(scan_lattice(2, 1500.5), ResourceError);
  CHECK_THROWS_AS(scan_lattice(3, 201.0), ResourceError);
  CHECK_THROWS_AS(eigenvalue_count(3, 250.0), ResourceError);
  CHECK_THROWS_AS(scan_lattice(2, -1.0), DomainError);
  CHECK_THROWS_AS(scan_lattice(4, 2.0), DomainError);
  try {
    scan_lattice(2, 2000.0);
  } catch (const ResourceError& e) {
    CHECK(std::string(e.what()).find("1500") != std::string::npos);
  }
}

TEST_CASE("squared radius snapping") {
  CHECK(squared_radius_floor(5.0) == 25);
  CHECK(squared_radius_floor(std::sqrt(2.0)) == 2);
  CHECK(squared_radius_floor(std::sqrt(110.0)) == 110);
  CHECK(squared_radius_floor(4.99) == 24);
  CHECK(squared_radius_floor(0.0) == 0);
}

TEST_CASE("eigenvalue count") {
  CHECK(eigenvalue_count(2, 0.0) == 1);
  CHECK(eigenvalue_count(2, 5.0) == 81);
  const auto n100 = eigenvalue_count(2, 100.0);
  CHECK(std::abs(static_cast<double>(n100) - pi * 1e4) < 4.0 * std::pow(100.0, 2.0 / 3.0));
  for (int lam = 0; lam <= 50; ++lam) {
    CHECK(eigenvalue_count(2, lam + 0.37) == brute_count(2, lam + 0.37));
    CHECK(eigenvalue_count(2, std::sqrt(lam)) == brute_count(2, std::sqrt(lam)));
  }
  for (int lam = 0; lam <= 50; lam += 5) CHECK(eigenvalue_count(3, lam + 0.5) == brute_count(3, lam + 0.5));
}

TEST_CASE("cache round trip") {
  const auto dir = scratch("cache");
  const auto a = enumerate_lattice(2, 23.5, dir);
  const auto file = dir / cache_file_name(2, 23.5);
  CHECK(std::filesystem::exists(file));
  CHECK(cache_file_name(2, 23.5) == "lattice_n2_R23.5.txt");
  const LatticeEnumeration b = read_lattice_file(2, 23.5, file);
  CHECK(b == *a);
  CHECK(b == scan_lattice(2, 23.5));
  const auto c = enumerate_lattice(2, 23.5, dir);
  CHECK(c.get() == a.get());

  const auto other = scratch("cache_write");
  write_lattice_file(scan_lattice(3, 4.0), other / "x.txt");
  CHECK(read_lattice_file(3, 4.0, other / "x.txt") == scan_lattice(3, 4.0));
  CHECK_THROWS_AS(read_lattice_file(3, 4.0, other / "missing.txt"), ResourceError);
  CHECK_THROWS_AS(write_lattice_file(scan_lattice(2, 2.0), "/proc/speclab/none.txt"), ResourceError);

  const auto bypass = enumerate_lattice(2, 9.0, std::filesystem::path());
  CHECK(bypass->size() == scan_lattice(2, 9.0).size());
}

TEST_CASE("default cache directory") {
  setenv("SPECLAB_CACHE", "/tmp/speclab_cache_probe", 1);
  CHECK(default_cache_dir() == std::filesystem::path("/tmp/speclab_cache_probe"));
  unsetenv("SPECLAB_CACHE");
  CHECK(default_cache_dir() == std::filesystem::path("cache"));
}

TEST_CASE("displacement") {
  const Displacement u({4.0, -4.0});
  CHECK(u.components()[0] == doctest::Approx(4.0 - 2 * pi));
  CHECK(u.components()[1] == doctest::Approx(-4.0 + 2 * pi));
  const Displacement v({pi, -pi});
  CHECK(v.components()[0] == doctest::Approx(pi));
  CHECK(v.components()[1] == doctest::Approx(pi));
  const auto d = default_direction(2);
  const Displacement w = Displacement::along(d, 0.01);
  CHECK(w.norm() == doctest::Approx(0.01).epsilon(1e-14));
  CHECK(w.components()[0] == doctest::Approx(0.01 * std::cos(1.0)));
  CHECK(default_direction(3).size() == 3);
  CHECK_THROWS_AS(Displacement::along(std::vector<double>{0.0, 0.0}, 1.0), DomainError);
}

TEST_CASE("spectral function") {
  const Displacement zero({0.0, 0.0});
  CHECK(spectral_function(2, zero, 5.0) == doctest::Approx(81.0 / (4 * pi * pi)).epsilon(1e-14));
  CHECK(spectral_function(2, Displacement({0.3, 1.1}), 0.0) == doctest::Approx(1.0 / (4 * pi * pi)));
  CHECK_THROWS_AS(spectral_function(3, zero, 5.0), DomainError);

  const auto dir = default_direction(2);
  const double lambda = 300.0;
  const double e = spectral_function(2, Displacement::along(dir, 2.0 / lambda), lambda);
  CHECK(std::abs(e / (lambda * lambda) - phi_kernel(2, 2.0).value) <= 0.02 * phi_kernel(2, 0.0).value);

  double prev = 0.0;
  for (double l = 0.0; l <= 60.0; l += 0.7) {
    const double diag = spectral_function(2, zero, l);
    CHECK(diag >= prev);
    prev = diag;
    for (double t : {0.1, 0.9, 2.5}) {
      const double off = spectral_function(2, Displacement::along(dir, t), l);
      CHECK(std::abs(off) <= diag + 1e-12);
      CHECK(2.0 * (diag - off) >= -1e-12);
    }
  }
}

TEST_CASE("derivative sums") {
  const auto lattice = enumerate_lattice(2, 61.0, std::filesystem::path());
  for (double l : {0.0, 5.0, 17.5, 60.0}) {
    CHECK(derivative_diagonal_sum(*lattice, {0, 0}, {0, 0}, l) ==
          doctest::Approx(eigenvalue_count(2, l) / (4 * pi * pi)).epsilon(1e-14));
    CHECK(derivative_diagonal_sum(*lattice, {1, 0}, {0, 0}, l) == 0.0);
    CHECK(derivative_diagonal_sum(*lattice, {2, 1}, {1, 1}, l) == 0.0);
    for (const auto& [a, b] : std::vector<std::pair<MultiIndex, MultiIndex>>{{{2, 0}, {0, 2}}, {{3, 1}, {1, 1}}})
      CHECK(derivative_diagonal_sum(*lattice, a, b, l) == derivative_diagonal_sum(*lattice, b, a, l));
  }
  const double l = 300.0;
  const double v = derivative_diagonal_sum(2, {1, 0}, {1, 0}, l);
  CHECK(v / std::pow(l, 4) == doctest::Approx(1.0 / (16 * pi)).epsilon(0.01));
  CHECK_THROWS_AS(derivative_diagonal_sum(*lattice, {4, 4}, {0, 0}, 10.0), DomainError);
  CHECK(lattice_moment(*lattice, {2, 0}, 1.0) == 2);
}

TEST_CASE("band sums") {
  CHECK(band_diagonal_sum(2, 4.0) == doctest::Approx((81.0 - 49.0) / (4 * pi * pi)).epsilon(1e-14));
  CHECK(band_diagonal_sum(2, 0.0) == doctest::Approx(4.0 / (4 * pi * pi)).epsilon(1e-14));
  CHECK(band_diagonal_sum(2, 250.0) / 250.0 == doctest::Approx(1.0 / (2 * pi)).epsilon(0.05));
  const auto lattice = enumerate_lattice(2, 40.0, std::filesystem::path());
  const auto dir = default_direction(2);
  CHECK(band_kernel(*lattice, Displacement::along(dir, 0.0), 20.0) ==
        doctest::Approx(band_diagonal_sum(2, 20.0)).epsilon(1e-13));
}

TEST_CASE("smoothing window") {
  const SmoothingWindow w = make_window(4.0);
  CHECK(w.shape == "sinc4");
  CHECK(w(0.0) == 1.0);
  CHECK(w.truncation() == 1000.0);
  for (double s = -50.0; s <= 50.0; s += 0.01) CHECK(w(s) >= 0.0);
  for (double eps : {0.5, 1.0, 2.0, 4.0})
    for (double s = -1.0; s <= 1.0; s += 0.01) CHECK(make_window(eps)(s) >= 0.25);
  CHECK(std::pow(4.0 / (w.eps * w.truncation()), 4) <= 1e-12 * (1 + 1e-12));
  CHECK_THROWS_AS(make_window(0.0), DomainError);
  CHECK_THROWS_AS(make_window(-1.0), DomainError);
}

TEST_CASE("smoothed sums") {
  const SmoothingWindow w = make_window(4.0);
  CHECK(std::isfinite(smoothed_diagonal_sum(2, 0.0, w)));
  CHECK(smoothed_diagonal_sum(2, 0.0, w) > 0.0);
  const double a = smoothed_diagonal_sum(2, 100.0, w);
  const double b = smoothed_diagonal_sum(2, 200.0, w);
  CHECK(b / a == doctest::Approx(2.0).epsilon(0.15));

  double rho_min = 1.0;
  for (double s = -1.0; s <= 0.0; s += 1e-3) rho_min = std::min(rho_min, w(s));
  for (double l = 50.0; l <= 300.0; l += 25.0) CHECK(smoothed_diagonal_sum(2, l, w) >= rho_min * band_diagonal_sum(2, l));

  // the sinc^4 mass shrinks as eps grows, so the value decreases in eps
  double prev = smoothed_diagonal_sum(2, 100.0, make_window(3.0));
  for (double eps : {4.0, 6.0, 8.0, 12.0}) {
    const double v = smoothed_diagonal_sum(2, 100.0, make_window(eps));
    CHECK(v < prev);
    prev = v;
  }
  CHECK_THROWS_AS(smoothed_diagonal_sum(2, 300.0, make_window(1.0)), ResourceError);
  CHECK(shell_histogram(2, 25)[25] == 12);
}

TEST_CASE("deterministic parallel sums") {
  const auto term = [](std::size_t i) { return 1.0 / (1.0 + static_cast<double>(i) * 0.37); };
  set_worker_threads(1);
  const double a = deterministic_sum(100000, term);
  const double e1 = spectral_function(2, Displacement::along(default_direction(2), 0.01), 250.0);
  set_worker_threads(4);
  const double b = deterministic_sum(100000, term);
  const double e4 = spectral_function(2, Displacement::along(default_direction(2), 0.01), 250.0);
  CHECK(a == b);
  CHECK(e1 == e4);
  CHECK(worker_threads() == 4);
  CHECK_THROWS_AS(set_worker_threads(0), DomainError);
}
