#include "speclab/sphere.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "speclab/errors.hpp"
#include "speclab/parallel.hpp"
#include "speclab/torus.hpp"

namespace speclab::sphere {

namespace {

constexpr double kPi = std::numbers::pi;

void require_model(int n) {
  if (n != 2 && n != 3) throw DomainError("sphere: dimension must be 2 or 3, got " + std::to_string(n));
}

void require_degree(int m, int min_m = 0) {
  if (m < min_m) throw DomainError("sphere: degree must be >= " + std::to_string(min_m));
}

void require_cos(double c) {
  if (!(std::abs(c) <= 1.0)) throw DomainError("sphere: cos(theta) must lie in [-1, 1]");
}

std::uint64_t binomial(int k, int r) {
  if (r < 0 || k < r) return 0;
  r = std::min(r, k - r);
  unsigned __int128 c = 1;
  for (int i = 0; i < r; ++i) {
    c = c * static_cast<unsigned __int128>(k - i) / static_cast<unsigned __int128>(i + 1);
    if (c > static_cast<unsigned __int128>(UINT64_MAX))
      throw NumericError("multiplicity overflows 64 bits");
  }
  return static_cast<std::uint64_t>(c);
}

// Integer m(m+n-1), compared against floor(lambda^2).
std::int64_t level_square(int n, int m) {
  return static_cast<std::int64_t>(m) * (static_cast<std::int64_t>(m) + n - 1);
}

// sqrt((m+nu)/(nu |S^n| C_m(1))): the factor turning C_m^nu(cos theta) into Z_m.
double zonal_scale(int n, int m) {
  const double nu = gegenbauer_index(n);
  return std::sqrt((m + nu) / (nu * sphere_area(n) * gegenbauer_at_one(m, nu)));
}

// Sum of addition kernels for degrees in [first, last].
double kernel_sum(int n, double c, int first, int last) {
  if (last < first) return 0.0;
  const double nu = gegenbauer_index(n);
  std::vector<double> values(static_cast<std::size_t>(last) + 1);
  gegenbauer_all(last, nu, c, values);
  double sum = 0.0;
  for (int m = first; m <= last; ++m) sum += (m + nu) / nu * values[static_cast<std::size_t>(m)];
  return sum / sphere_area(n);
}

template <class F>
double golden_section_max(F&& f, double a, double b) {
  const double ratio = 0.5 * (std::sqrt(5.0) - 1.0);
  double x1 = b - ratio * (b - a);
  double x2 = a + ratio * (b - a);
  double f1 = f(x1);
  double f2 = f(x2);
  for (int it = 0; it < 200 && (b - a) > 1e-14 * std::max(1.0, std::abs(b)); ++it) {
    if (f1 < f2) {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + ratio * (b - a);
      f2 = f(x2);
    } else {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - ratio * (b - a);
      f1 = f(x1);
    }
  }
  return std::max(f1, f2);
}

struct GridBest {
  double value = -1.0;
  std::size_t index = 0;
};

// Deterministic argmax of g(i) over [0, count): ties go to the smallest index.
template <class G>
GridBest grid_argmax(std::size_t count, G&& g) {
  std::vector<GridBest> partials((count + kChunkSize - 1) / kChunkSize);
  for_each_chunk(count, [&](std::size_t c, std::size_t begin, std::size_t end) {
    GridBest best{-std::numeric_limits<double>::infinity(), begin};
    for (std::size_t i = begin; i < end; ++i) {
      const double v = g(i);
      if (v > best.value) best = {v, i};
    }
    partials[c] = best;
  });
  GridBest best{-std::numeric_limits<double>::infinity(), 0};
  for (const GridBest& p : partials)
    if (p.value > best.value) best = p;
  return best;
}

// Extremum of f over [0, pi]: grid scan then golden-section refinement of the bracketing cells.
template <class F>
double refined_max(int points, F&& f) {
  const auto theta = [&](std::size_t i) { return i == static_cast<std::size_t>(points) ? kPi : kPi * static_cast<double>(i) / points; };
  const GridBest best = grid_argmax(static_cast<std::size_t>(points) + 1, [&](std::size_t i) { return f(theta(i)); });
  const double lo = theta(best.index == 0 ? 0 : best.index - 1);
  const double hi = theta(std::min<std::size_t>(best.index + 1, static_cast<std::size_t>(points)));
  return std::max(best.value, golden_section_max(f, lo, hi));
}

int scan_points(int m) { return std::max(400, 40 * m); }

}  // namespace

std::uint64_t multiplicity(int n, int m) {
  if (n < 1) throw DomainError("sphere: dimension must be >= 1");
  require_degree(m);
  // Harmonic polynomials of degree m in n+1 variables: C(m+n, n) - C(m+n-2, n).
  const std::uint64_t all = binomial(m + n, n);
  const std::uint64_t lower = binomial(m + n - 2, n);
  return all - lower;
}

EigenLevel eigen_level(int n, int m) {
  if (n < 2) throw DomainError("sphere: dimension must be >= 2");
  require_degree(m);
  return EigenLevel{n, m, std::sqrt(static_cast<double>(level_square(n, m))), multiplicity(n, m)};
}

double gegenbauer_index(int n) { return 0.5 * (n - 1); }

int max_degree(int n, double lambda) {
  require_model(n);
  if (!(lambda >= 0.0)) throw DomainError("sphere: lambda must be non-negative");
  const std::int64_t bound = torus::squared_radius_floor(lambda);
  auto m = static_cast<int>(std::sqrt(static_cast<double>(bound)));
  while (m > 0 && level_square(n, m) > bound) --m;
  while (level_square(n, m + 1) <= bound) ++m;
  return m;
}

double pinned_lambda(int n, int degree) {
  require_model(n);
  require_degree(degree);
  return std::sqrt(static_cast<double>(level_square(n, degree)));
}

double addition_kernel(int n, int m, double cos_theta) {
  require_model(n);
  require_degree(m);
  require_cos(cos_theta);
  const double nu = gegenbauer_index(n);
  return (m + nu) / nu * gegenbauer(m, nu, cos_theta) / sphere_area(n);
}

double spectral_function(int n, double cos_theta, double lambda) {
  require_cos(cos_theta);
  return kernel_sum(n, cos_theta, 0, max_degree(n, lambda));
}

double band_kernel(int n, double cos_theta, double lambda) {
  require_cos(cos_theta);
  return kernel_sum(n, cos_theta, max_degree(n, lambda) + 1, max_degree(n, lambda + 1.0));
}

double zonal_eval(int n, int m, double theta) {
  require_model(n);
  require_degree(m);
  if (!(theta >= 0.0 && theta <= kPi)) throw DomainError("zonal_eval: theta must lie in [0, pi]");
  return zonal_scale(n, m) * gegenbauer(m, gegenbauer_index(n), std::cos(theta));
}

double zonal_derivative(int n, int m, double theta) {
  require_model(n);
  require_degree(m);
  if (!(theta >= 0.0 && theta <= kPi)) throw DomainError("zonal_derivative: theta must lie in [0, pi]");
  return -zonal_scale(n, m) * std::sin(theta) * gegenbauer_derivative(m, gegenbauer_index(n), std::cos(theta));
}

double hw_log_norm_power(int n, int m, double r) {
  require_model(n);
  require_degree(m, 0);
  if (!(r >= 2.0) || std::isinf(r)) throw DomainError("hw_norm: r must be a finite value >= 2");
  // |Q_m| = sin^m psi, psi the angle from the subspace orthogonal to the (x_1, x_2)-plane.
  return std::log(2.0 * kPi * sphere_area(n - 2) * 0.5) + log_beta(0.5 * (m * r + 2.0), 0.5 * (n - 1));
}

double hw_norm(int n, int m, double r) {
  return std::exp(hw_log_norm_power(n, m, r) / r - hw_log_norm_power(n, m, 2.0) / 2.0);
}

double hw_norm_power_quadrature(int n, int m, double r) {
  require_model(n);
  require_degree(m, 0);
  if (!(r >= 2.0) || std::isinf(r)) throw DomainError("hw_norm: r must be a finite value >= 2");
  const int order = static_cast<int>(std::ceil(0.5 * (m * r + n))) + 16;
  if (order > 5000) throw ResourceError("hw_norm quadrature order " + std::to_string(order) + " exceeds 5000");
  const QuadratureRule& rule = gauss_legendre_rule(order);
  // t = cos(psi): sin^{mr+1} psi cos^{n-2} psi dpsi = (1-t^2)^{mr/2} t^{n-2} dt on [0, 1].
  const double integral = rule.integrate(
      [&](double t) { return std::pow((1.0 - t) * (1.0 + t), 0.5 * m * r) * std::pow(t, n - 2); }, 0.0, 1.0);
  return 2.0 * kPi * sphere_area(n - 2) * integral;
}

double zonal_norm(int n, int m, LpExponent r) {
  require_model(n);
  require_degree(m);
  if (r.is_infinite()) return zonal_eval(n, m, 0.0);
  const double p = r.value();
  if (p < 2.0) throw DomainError("zonal_norm: r must be >= 2");
  const int order = static_cast<int>(std::ceil(2.0 * m * std::max(p, 2.0))) + 16;
  if (order > 5000)
    throw ResourceError("zonal_norm: quadrature order " + std::to_string(order) + " exceeds the cap 5000");
  const QuadratureRule& rule = gauss_legendre_rule(order);
  const double nu = gegenbauer_index(n);
  const double scale = zonal_scale(n, m);
  double integral = 0.0;
  if (n == 2) {
    // Polynomial in t = cos(theta).
    integral = rule.integrate([&](double t) { return std::pow(std::abs(scale * gegenbauer(m, nu, t)), p); });
  } else {
    // sin^{n-1} theta is not polynomial in cos(theta) for odd n; integrate in theta instead.
    integral = rule.integrate(
        [&](double th) {
          return std::pow(std::abs(scale * gegenbauer(m, nu, std::cos(th))), p) * std::pow(std::sin(th), n - 1);
        },
        0.0, kPi);
  }
  return std::pow(sphere_area(n - 1) * integral, 1.0 / p);
}

double zonal_gradient_sup(int n, int m) {
  require_model(n);
  require_degree(m, 1);
  return refined_max(scan_points(m), [&](double th) { return std::abs(zonal_derivative(n, m, th)); });
}

double zonal_holder_sup(int n, int m, double delta) {
  require_model(n);
  require_degree(m, 1);
  if (!(delta > 0.0 && delta < 1.0)) throw DomainError("zonal_holder_sup: delta must lie in (0, 1)");
  const double lambda = pinned_lambda(n, m);
  const double step = 0.05 / lambda;
  const auto cells = static_cast<std::size_t>(std::ceil(kPi / step));
  const double h = kPi / static_cast<double>(cells);
  const double nu = gegenbauer_index(n);
  const double scale = zonal_scale(n, m);
  std::vector<double> z(cells + 1);
  parallel_for(cells + 1, [&](std::size_t i) {
    const double c = i == cells ? -1.0 : std::cos(h * static_cast<double>(i));
    z[i] = scale * gegenbauer(m, nu, c);
  });
  const auto min_sep = static_cast<std::size_t>(std::ceil(0.1 / lambda / h - 1e-9));
  const auto max_sep = static_cast<std::size_t>(std::floor(10.0 / lambda / h + 1e-9));
  std::vector<double> weight(max_sep + 1, 0.0);
  for (std::size_t j = std::max<std::size_t>(min_sep, 1); j <= max_sep; ++j)
    weight[j] = std::pow(h * static_cast<double>(j), -delta);
  const GridBest best = grid_argmax(cells + 1, [&](std::size_t i) {
    double local = 0.0;
    for (std::size_t j = std::max<std::size_t>(min_sep, 1); j <= max_sep && i + j <= cells; ++j)
      local = std::max(local, std::abs(z[i] - z[i + j]) * weight[j]);
    return local;
  });
  return best.value;
}

NodalGap nodal_gap_zonal(int n, int m) {
  require_model(n);
  require_degree(m, 1);
  const std::vector<double> zeros = gegenbauer_zeros(m, gegenbauer_index(n));
  const double theta = std::acos(zeros.back());
  return NodalGap{theta, theta, pinned_lambda(n, m) * theta};
}

double nadirashvili_ratio(int n, int m) {
  require_model(n);
  require_degree(m, 1);
  const double top = refined_max(scan_points(m), [&](double th) { return zonal_eval(n, m, th); });
  const double bottom = refined_max(scan_points(m), [&](double th) { return -zonal_eval(n, m, th); });
  return top / bottom;
}

double sobolev_scale(double lambda, double s) {
  if (!(s >= 0.0)) throw DomainError("sobolev_scale: s must be non-negative");
  if (!(lambda >= 0.0)) throw DomainError("sobolev_scale: lambda must be non-negative");
  return std::pow(1.0 + lambda * lambda, 0.5 * s);
}

}  // namespace speclab::sphere
