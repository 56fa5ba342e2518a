#pragma once

// Exact spectral objects on the round sphere S^n (n = 2 fully, n = 3 for levels, kernels and
// zonal objects). Degree-m harmonics have eigenvalue m(m+n-1); the degree-m reproducing kernel
// is a Gegenbauer polynomial in cos(geodesic distance), normalized by its diagonal
// d(n,m)/|S^n|.

#include <cstdint>

#include "speclab/analytic.hpp"

namespace speclab::sphere {

struct EigenLevel {
  int n = 2;
  int m = 0;
  /// lambda_m = sqrt(m(m+n-1)).
  double eigenvalue = 0.0;
  std::uint64_t multiplicity = 1;
};

/// d(n,m) = (2m+n-1)(m+n-2)!/(m!(n-1)!) in exact integer arithmetic; NumericError on overflow.
std::uint64_t multiplicity(int n, int m);
EigenLevel eigen_level(int n, int m);

/// Gegenbauer index (n-1)/2 of the sphere S^n.
double gegenbauer_index(int n);

/// Largest degree M with lambda_M <= lambda (ties by exact integer comparison).
int max_degree(int n, double lambda);
/// lambda_M, used to pin probe grids to the spectrum.
double pinned_lambda(int n, int degree);

/// Degree-m addition kernel at cos(theta): (d(n,m)/|S^n|) C_m^nu(c)/C_m^nu(1).
double addition_kernel(int n, int m, double cos_theta);

/// e(x, y, lambda): sum of addition kernels over levels with lambda_m <= lambda.
double spectral_function(int n, double cos_theta, double lambda);
/// Band kernel over levels with lambda_m in (lambda, lambda + 1].
double band_kernel(int n, double cos_theta, double lambda);

/// L_2-normalized zonal harmonic Z_m at colatitude theta in [0, pi].
double zonal_eval(int n, int m, double theta);
/// d/dtheta Z_m(theta).
double zonal_derivative(int n, int m, double theta);

/// ||Q_m||_r / ||Q_m||_2 from the closed Beta form (computed in log space).
double hw_norm(int n, int m, double r);
/// log ||Q_m||_r^r from the closed Beta form.
double hw_log_norm_power(int n, int m, double r);
/// ||Q_m||_r^r by Gauss-Legendre quadrature in t = cos(psi); cross-check of the closed form.
double hw_norm_power_quadrature(int n, int m, double r);

/// ||Z_m||_r / ||Z_m||_2 (= ||Z_m||_r since Z_m is L_2-normalized). r = inf gives Z_m(0).
double zonal_norm(int n, int m, LpExponent r);

/// sup over theta of |dZ_m/dtheta|: grid of >= 40m points, then golden-section refinement.
double zonal_gradient_sup(int n, int m);

/// Max over meridian pairs at separation theta in [0.1/lambda_m, 10/lambda_m] of
/// |Z_m(a) - Z_m(a + theta)| / theta^delta.
double zonal_holder_sup(int n, int m, double delta);

struct NodalGap {
  double theta_first_zero = 0.0;
  /// Inner radius of the polar nodal domain, a geodesic cap around the pole.
  double inner_radius_polar_cap = 0.0;
  double product_with_eigenvalue = 0.0;
};

NodalGap nodal_gap_zonal(int n, int m);

/// max Z_m / |min Z_m| over the sphere.
double nadirashvili_ratio(int n, int m);

/// (1 + lambda^2)^{s/2}, the exact action of (1 + Laplacian)^{s/2} on an eigenfunction.
double sobolev_scale(double lambda, double s);

}  // namespace speclab::sphere
