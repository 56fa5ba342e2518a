#include "speclab/asymptotics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>

#include "speclab/errors.hpp"
#include "speclab/sphere.hpp"

namespace speclab {

namespace {

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string list(std::span<const double> values) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out += ',';
    out += num(values[i]);
  }
  return out;
}

std::string index_text(const MultiIndex& index) {
  std::string out;
  for (int j = 0; j < index.size(); ++j) {
    if (j) out += ',';
    out += std::to_string(index[j]);
  }
  return out;
}

void require_grid(std::span<const double> grid) {
  if (grid.empty()) throw DomainError("probe grid must be non-empty");
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!(grid[i] > 0.0) || !std::isfinite(grid[i]))
      throw DomainError("probe grid values must be positive and finite (got " + num(grid[i]) + ")");
    if (i && !(grid[i] > grid[i - 1])) throw DomainError("probe grid must be strictly increasing");
  }
}

void require_degrees(std::span<const int> degrees) {
  if (degrees.empty()) throw DomainError("degree grid must be non-empty");
  for (std::size_t i = 0; i < degrees.size(); ++i) {
    if (degrees[i] < 1) throw DomainError("degree grid values must be >= 1");
    if (i && degrees[i] <= degrees[i - 1]) throw DomainError("degree grid must be strictly increasing");
  }
}

std::vector<double> direction_or_default(int n, const ProbeOptions& options) {
  if (options.direction.empty()) return torus::default_direction(n);
  if (static_cast<int>(options.direction.size()) != n)
    throw DomainError("probe direction must have " + std::to_string(n) + " components");
  return options.direction;
}

ProbeResult make_result(std::string probe, Manifold manifold, int n) {
  ProbeResult r;
  r.probe = std::move(probe);
  r.parameters.emplace_back("manifold", std::string(to_string(manifold)));
  r.parameters.emplace_back("n", std::to_string(n));
  return r;
}

// Fills ratio = raw / abscissa^exponent unless the predicted limit is exactly zero.
void normalize(ProbeResult& result, double exponent) {
  result.predicted_exponent = exponent;
  const bool zero_limit = result.predicted_limit && *result.predicted_limit == 0.0;
  for (ProbeRow& row : result.rows) {
    if (zero_limit)
      row.ratio.reset();
    else
      row.ratio = row.raw / std::pow(row.abscissa, exponent);
  }
}

void finish(ProbeResult& result) {
  std::sort(result.rows.begin(), result.rows.end(),
            [](const ProbeRow& a, const ProbeRow& b) { return a.abscissa < b.abscissa; });
  result.fit = fit_rows(result);
}

double max_lambda(std::span<const double> lambdas) { return *std::max_element(lambdas.begin(), lambdas.end()); }

// e(x, y, lambda) at geodesic distance dist for each lambda in the grid.
std::vector<double> spectral_values(Manifold manifold, int n, std::span<const double> lambdas, double tau,
                                    const ProbeOptions& options) {
  std::vector<double> out(lambdas.size());
  if (manifold == Manifold::torus) {
    const auto lattice = torus::enumerate_lattice(n, max_lambda(lambdas));
    const std::vector<double> direction = direction_or_default(n, options);
    for (std::size_t i = 0; i < lambdas.size(); ++i) {
      const auto u = torus::Displacement::along(direction, tau / lambdas[i]);
      out[i] = torus::spectral_function(*lattice, u, lambdas[i]);
    }
  } else {
    for (std::size_t i = 0; i < lambdas.size(); ++i) {
      const double theta = tau / lambdas[i];
      if (theta > std::numbers::pi) throw DomainError("sphere probe: tau/lambda exceeds pi");
      out[i] = sphere::spectral_function(n, std::cos(theta), lambdas[i]);
    }
  }
  return out;
}

template <class F>
double bisect(F&& f, double lo, double hi) {
  double flo = f(lo);
  for (int it = 0; it < 200 && hi - lo > 1e-15 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double fm = f(mid);
    if ((fm < 0) == (flo < 0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace

std::string_view to_string(Manifold m) { return m == Manifold::torus ? "torus" : "sphere"; }
std::string_view to_string(Family f) { return f == Family::zonal ? "zonal" : "highest-weight"; }

Manifold parse_manifold(std::string_view text) {
  if (text == "torus") return Manifold::torus;
  if (text == "sphere") return Manifold::sphere;
  throw DomainError("unknown manifold '" + std::string(text) + "' (expected torus or sphere)");
}

Family parse_family(std::string_view text) {
  if (text == "zonal") return Family::zonal;
  if (text == "highest-weight" || text == "hw") return Family::highest_weight;
  throw DomainError("unknown family '" + std::string(text) + "' (expected zonal or highest-weight)");
}

bool operator==(const ProbeResult& a, const ProbeResult& b) {
  const auto same_fit = [](const std::optional<ScalingFit>& x, const std::optional<ScalingFit>& y) {
    if (x.has_value() != y.has_value()) return false;
    if (!x) return true;
    return x->exponent == y->exponent && x->log_constant == y->log_constant && x->max_residual == y->max_residual &&
           x->points == y->points;
  };
  return a.probe == b.probe && a.parameters == b.parameters && a.extra_columns == b.extra_columns &&
         a.rows == b.rows && a.predicted_limit == b.predicted_limit && a.predicted_exponent == b.predicted_exponent &&
         a.fit_column == b.fit_column && same_fit(a.fit, b.fit);
}

// ---------------------------------------------------------------------------
// Fitting

ScalingFit fit_scaling(std::span<const std::pair<double, double>> samples) {
  if (samples.size() < 3) throw DomainError("fit_scaling: at least 3 samples required");
  std::vector<double> xs;
  std::vector<double> ys;
  for (const auto& [x, y] : samples) {
    if (!(x > 0.0)) throw DomainError("fit_scaling: abscissae must be positive");
    if (!(y > 0.0)) throw DomainError("fit_scaling: values must be positive (filter zero crossings first)");
    xs.push_back(std::log(x));
    ys.push_back(std::log(y));
  }
  std::vector<double> sorted = xs;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
    throw DomainError("fit_scaling: abscissae must be distinct");
  const double count = static_cast<double>(xs.size());
  double mx = 0.0;
  double my = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= count;
  my /= count;
  double sxx = 0.0;
  double sxy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
  }
  ScalingFit fit;
  fit.exponent = sxy / sxx;
  fit.log_constant = my - fit.exponent * mx;
  fit.points = static_cast<int>(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i)
    fit.max_residual = std::max(fit.max_residual, std::abs(ys[i] - fit.log_constant - fit.exponent * xs[i]));
  return fit;
}

std::optional<ScalingFit> fit_rows(const ProbeResult& result) {
  std::size_t column = 0;
  const bool use_extra = !result.fit_column.empty();
  if (use_extra) {
    const auto it = std::find(result.extra_columns.begin(), result.extra_columns.end(), result.fit_column);
    if (it == result.extra_columns.end()) throw DomainError("fit column '" + result.fit_column + "' not present");
    column = static_cast<std::size_t>(it - result.extra_columns.begin());
  }
  std::vector<std::pair<double, double>> samples;
  for (const ProbeRow& row : result.rows) {
    const double x = use_extra ? row.extras.at(column) : row.abscissa;
    if (row.raw > 0.0 && x > 0.0) samples.emplace_back(x, row.raw);
  }
  std::sort(samples.begin(), samples.end());
  const auto drop = static_cast<std::size_t>(std::floor(kPreasymptoticFraction * static_cast<double>(samples.size())));
  samples.erase(samples.begin(), samples.begin() + static_cast<std::ptrdiff_t>(drop));
  if (samples.size() < 3) return std::nullopt;
  return fit_scaling(samples);
}

// ---------------------------------------------------------------------------
// Grids

std::vector<double> default_torus_grid() {
  std::vector<double> g;
  for (int l = 50; l <= 300; l += 25) g.push_back(l);
  return g;
}

std::vector<int> default_degree_grid() {
  std::vector<int> g;
  for (int m = 20; m <= 400; m += 20) g.push_back(m);
  return g;
}

std::vector<double> pinned_sphere_grid(int n, std::span<const int> degrees) {
  std::vector<double> g;
  for (int m : degrees) g.push_back(sphere::pinned_lambda(n, m));
  return g;
}

std::vector<double> default_tau_grid() {
  std::vector<double> g;
  for (int k = 1; k <= 12; ++k) g.push_back(0.5 * k);
  return g;
}

// ---------------------------------------------------------------------------
// Probes

ProbeResult probe_weyl(Manifold manifold, int n, std::span<const double> lambdas, const ProbeOptions& options) {
  require_grid(lambdas);
  ProbeResult r = make_result("weyl", manifold, n);
  const std::vector<double> values = spectral_values(manifold, n, lambdas, 0.0, options);
  for (std::size_t i = 0; i < lambdas.size(); ++i) r.rows.push_back({lambdas[i], values[i], {}, {}});
  r.predicted_limit = weyl_constant(n);
  normalize(r, n);
  finish(r);
  return r;
}

ProbeResult probe_offdiag(Manifold manifold, int n, double tau, std::span<const double> lambdas,
                          const ProbeOptions& options) {
  require_grid(lambdas);
  if (!(tau >= 0.0)) throw DomainError("offdiag: tau must be non-negative");
  ProbeResult r = make_result("offdiag", manifold, n);
  r.parameters.emplace_back("tau", num(tau));
  r.extra_columns = {"scaled"};
  const std::vector<double> values = spectral_values(manifold, n, lambdas, tau, options);
  for (std::size_t i = 0; i < lambdas.size(); ++i)
    r.rows.push_back({lambdas[i], values[i], {}, {values[i] / std::pow(lambdas[i], n)}});
  const double phi = phi_kernel(n, tau).value;
  r.predicted_limit = std::abs(phi) <= kPhiZeroTolerance * weyl_constant(n) ? 0.0 : phi;
  normalize(r, n);
  finish(r);
  return r;
}

ProbeResult probe_difference(Manifold manifold, int n, double tau, std::span<const double> lambdas,
                             const ProbeOptions& options) {
  require_grid(lambdas);
  if (!(tau >= 0.0)) throw DomainError("difference: tau must be non-negative");
  ProbeResult r = make_result("difference", manifold, n);
  r.parameters.emplace_back("tau", num(tau));
  const std::vector<double> diag = spectral_values(manifold, n, lambdas, 0.0, options);
  const std::vector<double> off = spectral_values(manifold, n, lambdas, tau, options);
  for (std::size_t i = 0; i < lambdas.size(); ++i) r.rows.push_back({lambdas[i], 2.0 * (diag[i] - off[i]), {}, {}});
  r.predicted_limit = 2.0 * (phi_kernel(n, 0.0).value - phi_kernel(n, tau).value);
  normalize(r, n);
  finish(r);
  return r;
}

ProbeResult probe_derivative(int n, const MultiIndex& alpha, const MultiIndex& beta, std::span<const double> lambdas) {
  require_grid(lambdas);
  if (alpha.size() != n || beta.size() != n) throw DomainError("deriv: multi-index length must equal n");
  ProbeResult r = make_result("deriv", Manifold::torus, n);
  r.parameters.emplace_back("alpha", index_text(alpha));
  r.parameters.emplace_back("beta", index_text(beta));
  const auto lattice = torus::enumerate_lattice(n, max_lambda(lambdas));
  for (double lambda : lambdas)
    r.rows.push_back({lambda, torus::derivative_diagonal_sum(*lattice, alpha, beta, lambda), {}, {}});
  r.predicted_limit = deriv_weyl_constant(n, alpha, beta);
  normalize(r, n + (alpha + beta).order());
  finish(r);
  return r;
}

ProbeResult probe_band(Manifold manifold, int n, std::span<const double> lambdas) {
  require_grid(lambdas);
  ProbeResult r = make_result("band", manifold, n);
  r.extra_columns = {"sqrt_scaled"};
  std::vector<double> values(lambdas.size());
  if (manifold == Manifold::torus) {
    const auto lattice = torus::enumerate_lattice(n, max_lambda(lambdas) + 1.0);
    for (std::size_t i = 0; i < lambdas.size(); ++i) values[i] = torus::band_diagonal_sum(*lattice, lambdas[i]);
  } else {
    for (std::size_t i = 0; i < lambdas.size(); ++i) values[i] = sphere::band_kernel(n, 1.0, lambdas[i]);
  }
  for (std::size_t i = 0; i < lambdas.size(); ++i)
    r.rows.push_back({lambdas[i], values[i], {}, {std::sqrt(values[i]) / std::pow(lambdas[i], 0.5 * (n - 1))}});
  // Unit band of the local Weyl law: n c_n lambda^{n-1}.
  r.predicted_limit = n * weyl_constant(n);
  normalize(r, n - 1);
  finish(r);
  return r;
}

ProbeResult probe_hoelder(Manifold manifold, int n, double delta, std::span<const double> taus,
                          std::span<const double> lambdas, const ProbeOptions& options) {
  require_grid(lambdas);
  require_grid(taus);
  if (!(delta > 0.0 && delta < 1.0)) throw DomainError("hoelder: delta must lie in (0, 1)");
  if (taus.back() > 10.0) throw DomainError("hoelder: tau grid must lie in (0, 10]");
  ProbeResult r = make_result("hoelder", manifold, n);
  r.parameters.emplace_back("delta", num(delta));
  r.parameters.emplace_back("tau_grid", list(taus));
  r.extra_columns = {"argmax_tau"};

  std::shared_ptr<const torus::LatticeEnumeration> lattice;
  std::vector<double> direction;
  if (manifold == Manifold::torus) {
    lattice = torus::enumerate_lattice(n, max_lambda(lambdas) + 1.0);
    direction = direction_or_default(n, options);
  }
  const auto band = [&](double lambda, double dist) {
    if (manifold == Manifold::torus)
      return torus::band_kernel(*lattice, torus::Displacement::along(direction, dist), lambda);
    return sphere::band_kernel(n, std::cos(dist), lambda);
  };
  for (double lambda : lambdas) {
    const double at_zero = band(lambda, 0.0);
    double best = -1.0;
    double best_tau = taus.front();
    for (double tau : taus) {
      const double dist = tau / lambda;
      if (manifold == Manifold::sphere && dist > std::numbers::pi) continue;
      const double quotient = 2.0 * (at_zero - band(lambda, dist)) / std::pow(dist, 2.0 * delta);
      if (quotient > best) {
        best = quotient;
        best_tau = tau;
      }
    }
    r.rows.push_back({lambda, best, {}, {best_tau}});
  }
  normalize(r, (n - 1) + 2.0 * delta);
  finish(r);
  return r;
}

ProbeResult probe_lp(int n, Family family, LpExponent r_exp, double s, std::span<const int> degrees) {
  require_degrees(degrees);
  if (!(s >= 0.0)) throw DomainError("lp: s must be non-negative");
  if (!r_exp.is_infinite() && r_exp.value() < 2.0) throw DomainError("lp: r must be >= 2");
  ProbeResult r = make_result("lp", Manifold::sphere, n);
  r.parameters.emplace_back("family", std::string(to_string(family)));
  r.parameters.emplace_back("r", r_exp.is_infinite() ? "inf" : num(r_exp.value()));
  r.parameters.emplace_back("s", num(s));
  r.extra_columns = {"lambda"};
  r.fit_column = "lambda";
  const double exponent = s + epsilon_exponent(n, r_exp);
  for (int m : degrees) {
    const double lambda = sphere::pinned_lambda(n, m);
    double norm_ratio = 0.0;
    if (family == Family::zonal) {
      norm_ratio = sphere::zonal_norm(n, m, r_exp);
    } else {
      if (r_exp.is_infinite()) {
        // |Q_m| peaks at 1 on the great circle of the (x_1, x_2)-plane.
        norm_ratio = std::exp(-sphere::hw_log_norm_power(n, m, 2.0) / 2.0);
      } else {
        norm_ratio = sphere::hw_norm(n, m, r_exp.value());
      }
    }
    const double raw = sphere::sobolev_scale(lambda, s) * norm_ratio;
    r.rows.push_back({static_cast<double>(m), raw, raw / std::pow(lambda, exponent), {lambda}});
  }
  r.predicted_exponent = exponent;
  finish(r);
  return r;
}

ProbeResult probe_cksigma(int n, double sigma, std::span<const int> degrees) {
  require_degrees(degrees);
  if (n != 2) throw DomainError("cksigma: only n = 2 is supported");
  if (!(sigma >= 0.0 && sigma <= 1.0)) throw DomainError("cksigma: sigma must lie in [0, 1]");
  ProbeResult r = make_result("cksigma", Manifold::sphere, n);
  r.parameters.emplace_back("sigma", num(sigma));
  r.extra_columns = {"lambda", "sup_norm"};
  r.fit_column = "lambda";
  for (int m : degrees) {
    const double lambda = sphere::pinned_lambda(n, m);
    const double sup = sphere::zonal_norm(n, m, LpExponent::infinity());
    double proxy = sup;
    if (sigma == 1.0)
      proxy = sphere::zonal_gradient_sup(n, m);
    else if (sigma > 0.0)
      proxy = sphere::zonal_holder_sup(n, m, sigma);
    r.rows.push_back({static_cast<double>(m), proxy, proxy / (std::pow(lambda, sigma) * sup), {lambda, sup}});
  }
  r.predicted_exponent = sigma + 0.5 * (n - 1);
  finish(r);
  return r;
}

ProbeResult probe_nodal(int n, std::span<const int> degrees) {
  require_degrees(degrees);
  if (n != 2) throw DomainError("nodal: only n = 2 is supported");
  ProbeResult r = make_result("nodal", Manifold::sphere, n);
  r.extra_columns = {"theta_first_zero", "nadirashvili_ratio", "antipodal_inner_radius", "parity"};
  for (int m : degrees) {
    const sphere::NodalGap gap = sphere::nodal_gap_zonal(n, m);
    const double ratio = sphere::nadirashvili_ratio(n, m);
    const std::vector<double> zeros = gegenbauer_zeros(m, sphere::gegenbauer_index(n));
    const double antipodal = std::numbers::pi - std::acos(zeros.front());
    r.rows.push_back({static_cast<double>(m), gap.product_with_eigenvalue, gap.product_with_eigenvalue,
                      {gap.theta_first_zero, ratio, antipodal, static_cast<double>(m % 2)}});
  }
  r.predicted_limit = bessel_j0_first_zero();
  r.predicted_exponent = 0.0;
  finish(r);
  return r;
}

ProbeResult probe_smoothed(int n, const torus::SmoothingWindow& window, std::span<const double> lambdas) {
  require_grid(lambdas);
  ProbeResult r = make_result("smoothed", Manifold::torus, n);
  r.parameters.emplace_back("window", window.shape);
  r.parameters.emplace_back("eps", num(window.eps));
  for (double lambda : lambdas) r.rows.push_back({lambda, torus::smoothed_diagonal_sum(n, lambda, window), {}, {}});
  // (2 pi)^{-n} |S^{n-1}| lambda^{n-1} times the window mass 8 pi/(3 eps).
  r.predicted_limit = std::pow(2.0 * std::numbers::pi, -n) * sphere_area(n - 1) * 8.0 * std::numbers::pi / (3.0 * window.eps);
  normalize(r, n - 1);
  finish(r);
  return r;
}

// ---------------------------------------------------------------------------
// Bessel oracles

double bessel_j0_first_zero() {
  return bisect([](double x) { return bessel_j0(x); }, 2.0, 3.0);
}

double bessel_j0_first_trough() {
  const double x = bisect([](double t) { return bessel_j1(t); }, 3.0, 4.5);
  return std::abs(bessel_j0(x));
}

double bessel_j1_max() {
  const double x = bisect([](double t) { return bessel_j0(t) - bessel_j1(t) / t; }, 1.0, 2.5);
  return bessel_j1(x);
}

}  // namespace speclab
