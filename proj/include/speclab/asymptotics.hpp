#pragma once

// Experiment engine: sweeps lambda or degree grids, forms the normalized ratios the
// asymptotic laws predict, and fits growth exponents.

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "speclab/analytic.hpp"
#include "speclab/torus.hpp"

namespace speclab {

enum class Manifold { torus, sphere };
enum class Family { zonal, highest_weight };

std::string_view to_string(Manifold m);
std::string_view to_string(Family f);
Manifold parse_manifold(std::string_view text);
Family parse_family(std::string_view text);

/// Least-squares fit of log(value) = exponent * log(abscissa) + log_constant.
struct ScalingFit {
  double exponent = 0.0;
  double log_constant = 0.0;
  /// Largest |residual| in log space.
  double max_residual = 0.0;
  int points = 0;
};

struct ProbeRow {
  double abscissa = 0.0;
  double raw = 0.0;
  std::optional<double> ratio;
  /// Values of ProbeResult::extra_columns, in order.
  std::vector<double> extras;

  friend bool operator==(const ProbeRow&, const ProbeRow&) = default;
};

struct ProbeResult {
  std::string probe;
  /// Ordered parameter record; numeric values are written with 17 significant digits.
  std::vector<std::pair<std::string, std::string>> parameters;
  std::vector<std::string> extra_columns;
  std::vector<ProbeRow> rows;
  std::optional<double> predicted_limit;
  std::optional<double> predicted_exponent;
  /// Name of the extra column used as fit abscissa; empty means the abscissa itself.
  std::string fit_column;
  std::optional<ScalingFit> fit;

  friend bool operator==(const ProbeResult& a, const ProbeResult& b);
};

/// Requires >= 3 samples with distinct positive abscissae and positive values.
ScalingFit fit_scaling(std::span<const std::pair<double, double>> samples);

/// Fit over rows with positive raw values after discarding the smallest 20% of abscissae.
/// Empty when fewer than 3 usable rows remain.
std::optional<ScalingFit> fit_rows(const ProbeResult& result);

/// Fraction of the smallest abscissae dropped before exponent fits.
inline constexpr double kPreasymptoticFraction = 0.2;

/// Default torus grid {50, 75, ..., 300}.
std::vector<double> default_torus_grid();
/// Degrees {20, 40, ..., 400}.
std::vector<int> default_degree_grid();
/// lambda_M for each degree M.
std::vector<double> pinned_sphere_grid(int n, std::span<const int> degrees);

/// Tau grid {0.5, 1.0, ..., 6.0} for the Hoelder quotient.
std::vector<double> default_tau_grid();

/// |Phi_n(tau)| below this fraction of Phi_n(0) counts as a zero of the kernel.
inline constexpr double kPhiZeroTolerance = 1e-6;

struct ProbeOptions {
  /// Probe direction on the torus; empty means the generic default.
  std::vector<double> direction;
};

ProbeResult probe_weyl(Manifold manifold, int n, std::span<const double> lambdas, const ProbeOptions& options = {});
ProbeResult probe_offdiag(Manifold manifold, int n, double tau, std::span<const double> lambdas,
                          const ProbeOptions& options = {});
ProbeResult probe_difference(Manifold manifold, int n, double tau, std::span<const double> lambdas,
                             const ProbeOptions& options = {});
ProbeResult probe_derivative(int n, const MultiIndex& alpha, const MultiIndex& beta, std::span<const double> lambdas);
ProbeResult probe_band(Manifold manifold, int n, std::span<const double> lambdas);
ProbeResult probe_hoelder(Manifold manifold, int n, double delta, std::span<const double> taus,
                          std::span<const double> lambdas, const ProbeOptions& options = {});
ProbeResult probe_lp(int n, Family family, LpExponent r, double s, std::span<const int> degrees);
ProbeResult probe_cksigma(int n, double sigma, std::span<const int> degrees);
ProbeResult probe_nodal(int n, std::span<const int> degrees);
ProbeResult probe_smoothed(int n, const torus::SmoothingWindow& window, std::span<const double> lambdas);

/// First positive zero of J_0, located by bisection.
double bessel_j0_first_zero();
/// |min J_0| = |J_0(j_{1,1})|, the depth of the first trough of J_0.
double bessel_j0_first_trough();
/// max |J_1|, attained at the first zero of J_1'.
double bessel_j1_max();

}  // namespace speclab
