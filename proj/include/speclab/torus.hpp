#pragma once

// Exact spectral sums on the flat torus T^n = R^n/(2 pi Z)^n. The eigenbasis is
// (2 pi)^{-n/2} exp(i<k, x>), k in Z^n, with eigenvalue |k|^2, so every sum below is a
// finite lattice sum.

#include <cstdint>
#include <filesystem>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "speclab/analytic.hpp"

namespace speclab::torus {

/// Largest admissible enumeration radius for dimension n (1500 for n=2, 200 for n=3).
double radius_limit(int n);

/// floor(R^2); R^2 within rounding of an integer snaps to it, and lattice points with |k| = R
/// are included.
std::int64_t squared_radius_floor(double radius);

/// Integer vectors k with |k| <= R, sorted lexicographically.
class LatticeEnumeration {
 public:
  LatticeEnumeration(int n, double radius, std::vector<std::int32_t> coords);

  int dimension() const { return n_; }
  double radius() const { return radius_; }
  std::size_t size() const { return norms_.size(); }

  std::span<const std::int32_t> point(std::size_t i) const {
    return {coords_.data() + i * static_cast<std::size_t>(n_), static_cast<std::size_t>(n_)};
  }
  /// |k|^2 of point i.
  std::int64_t norm2(std::size_t i) const { return norms_[i]; }
  std::span<const std::int32_t> coords() const { return coords_; }

  friend bool operator==(const LatticeEnumeration& a, const LatticeEnumeration& b) {
    return a.n_ == b.n_ && a.coords_ == b.coords_;
  }

 private:
  int n_;
  double radius_;
  std::vector<std::int32_t> coords_;
  std::vector<std::int64_t> norms_;
};

/// Cache directory: SPECLAB_CACHE, else ./cache.
std::filesystem::path default_cache_dir();
/// File name lattice_n{n}_R{R}.txt.
std::string cache_file_name(int n, double radius);

void write_lattice_file(const LatticeEnumeration& lattice, const std::filesystem::path& file);
LatticeEnumeration read_lattice_file(int n, double radius, const std::filesystem::path& file);

/// Fresh enumeration, no cache involved. ResourceError beyond radius_limit.
LatticeEnumeration scan_lattice(int n, double radius);

/// Enumeration through the disk cache at cache_dir (created on demand). An empty path
/// bypasses the disk. Results are also memoized in-process and shared between callers.
std::shared_ptr<const LatticeEnumeration> enumerate_lattice(int n, double radius,
                                                            const std::filesystem::path& cache_dir);
std::shared_ptr<const LatticeEnumeration> enumerate_lattice(int n, double radius);

/// x - y on the torus, components reduced to (-pi, pi].
class Displacement {
 public:
  explicit Displacement(std::vector<double> u);

  /// distance * direction/|direction|, reduced.
  static Displacement along(std::span<const double> direction, double distance);

  std::span<const double> components() const { return u_; }
  int dimension() const { return static_cast<int>(u_.size()); }
  double norm() const;

 private:
  std::vector<double> u_;
};

/// Generic non-lattice probe direction for n = 2 or 3.
std::vector<double> default_direction(int n);

/// rho(s) = (sin(eps s/4)/(eps s/4))^4, whose Fourier transform is supported in [-eps, eps].
struct SmoothingWindow {
  std::string shape = "sinc4";
  double eps = 4.0;

  double operator()(double s) const;
  /// T with (4/(eps T))^4 <= 1e-12, beyond which terms are dropped.
  double truncation() const { return 4.0e3 / eps; }
};

SmoothingWindow make_window(double eps);

/// N(lambda) = #{k : |k| <= lambda}.
std::int64_t eigenvalue_count(int n, double lambda);
std::int64_t eigenvalue_count(const LatticeEnumeration& lattice, double lambda);

/// e(x, y, lambda) = (2 pi)^{-n} sum_{|k| <= lambda} cos<k, u>.
double spectral_function(int n, const Displacement& u, double lambda);
double spectral_function(const LatticeEnumeration& lattice, const Displacement& u, double lambda);

/// Band kernel (2 pi)^{-n} sum_{lambda < |k| <= lambda + 1} cos<k, u>.
double band_kernel(const LatticeEnumeration& lattice, const Displacement& u, double lambda);

/// Exact integer sum over |k| <= lambda of prod_j k_j^{gamma_j}.
__int128 lattice_moment(const LatticeEnumeration& lattice, const MultiIndex& gamma, double lambda);

/// sum_{lambda_j <= lambda} d^alpha e_j(x) conj(d^beta e_j(x)); exactly 0 when the parities differ.
double derivative_diagonal_sum(int n, const MultiIndex& alpha, const MultiIndex& beta, double lambda);
double derivative_diagonal_sum(const LatticeEnumeration& lattice, const MultiIndex& alpha,
                               const MultiIndex& beta, double lambda);

/// Diagonal band sum over lambda_j in (lambda, lambda + 1]: (N(lambda+1) - N(lambda))/(2 pi)^n.
double band_diagonal_sum(int n, double lambda);
double band_diagonal_sum(const LatticeEnumeration& lattice, double lambda);

/// Multiplicity of each squared radius r2 = 0..R2 among lattice points, scanned without storing points.
std::vector<std::int64_t> shell_histogram(int n, std::int64_t max_norm2);

/// (2 pi)^{-n} sum_k rho(lambda - |k|) over |k| <= lambda + T.
double smoothed_diagonal_sum(int n, double lambda, const SmoothingWindow& window);

}  // namespace speclab::torus
