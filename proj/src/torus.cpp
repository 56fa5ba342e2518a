#include "speclab/torus.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <mutex>
#include <numbers>
#include <sstream>
#include <system_error>

#include "speclab/errors.hpp"
#include "speclab/parallel.hpp"

namespace speclab::torus {

namespace {

constexpr double kPi = std::numbers::pi;

void require_supported(int n) {
  if (n != 2 && n != 3) throw DomainError("torus: dimension must be 2 or 3, got " + std::to_string(n));
}

void require_radius(int n, double radius) {
  require_supported(n);
  if (!(radius >= 0.0)) throw DomainError("torus: radius must be non-negative");
  if (radius > radius_limit(n)) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "torus: radius %.17g exceeds the n=%d enumeration limit %g", radius, n,
                  radius_limit(n));
    throw ResourceError(buf);
  }
}

std::int64_t isqrt(std::int64_t v) {
  if (v < 0) return -1;
  auto r = static_cast<std::int64_t>(std::sqrt(static_cast<double>(v)));
  while (r * r > v) --r;
  while ((r + 1) * (r + 1) <= v) ++r;
  return r;
}

double volume_factor(int n) { return std::pow(2.0 * kPi, -n); }

// Points are stored in enumeration order, which is lexicographic, so any point set filtered
// by |k| stays lexicographic.
template <class Visit>
void visit_lattice(int n, std::int64_t r2, Visit&& visit) {
  const std::int64_t outer = isqrt(r2);
  if (n == 2) {
    for (std::int64_t x = -outer; x <= outer; ++x) {
      const std::int64_t ymax = isqrt(r2 - x * x);
      for (std::int64_t y = -ymax; y <= ymax; ++y) visit(std::array<std::int64_t, 3>{x, y, 0});
    }
    return;
  }
  for (std::int64_t x = -outer; x <= outer; ++x) {
    const std::int64_t rx = r2 - x * x;
    const std::int64_t ymax = isqrt(rx);
    for (std::int64_t y = -ymax; y <= ymax; ++y) {
      const std::int64_t zmax = isqrt(rx - y * y);
      for (std::int64_t z = -zmax; z <= zmax; ++z) visit(std::array<std::int64_t, 3>{x, y, z});
    }
  }
}

double dot(std::span<const std::int32_t> k, std::span<const double> u) {
  double s = 0.0;
  for (std::size_t j = 0; j < k.size(); ++j) s += k[j] * u[j];
  return s;
}

}  // namespace

double radius_limit(int n) {
  require_supported(n);
  return n == 2 ? 1500.0 : 200.0;
}

std::int64_t squared_radius_floor(double radius) {
  if (!(radius >= 0.0)) throw DomainError("squared radius of a negative radius");
  const double r2 = radius * radius;
  const double nearest = std::round(r2);
  if (std::abs(r2 - nearest) <= 1e-9 * std::max(1.0, r2)) return static_cast<std::int64_t>(nearest);
  return static_cast<std::int64_t>(std::floor(r2));
}

// ---------------------------------------------------------------------------
// LatticeEnumeration

LatticeEnumeration::LatticeEnumeration(int n, double radius, std::vector<std::int32_t> coords)
    : n_(n), radius_(radius), coords_(std::move(coords)) {
  require_supported(n);
  if (coords_.size() % static_cast<std::size_t>(n) != 0)
    throw DomainError("lattice coordinates are not a whole number of points");
  norms_.resize(coords_.size() / static_cast<std::size_t>(n));
  for (std::size_t i = 0; i < norms_.size(); ++i) {
    std::int64_t s = 0;
    for (std::int32_t c : point(i)) s += static_cast<std::int64_t>(c) * c;
    norms_[i] = s;
  }
}

LatticeEnumeration scan_lattice(int n, double radius) {
  require_radius(n, radius);
  std::vector<std::int32_t> coords;
  visit_lattice(n, squared_radius_floor(radius), [&](const std::array<std::int64_t, 3>& k) {
    for (int j = 0; j < n; ++j) coords.push_back(static_cast<std::int32_t>(k[static_cast<std::size_t>(j)]));
  });
  return LatticeEnumeration(n, radius, std::move(coords));
}

std::filesystem::path default_cache_dir() {
  if (const char* env = std::getenv("SPECLAB_CACHE"); env != nullptr && *env != '\0') return env;
  return "cache";
}

std::string cache_file_name(int n, double radius) {
  char buf[96];
  std::snprintf(buf, sizeof buf, "lattice_n%d_R%.17g.txt", n, radius);
  return buf;
}

void write_lattice_file(const LatticeEnumeration& lattice, const std::filesystem::path& file) {
  // Write to a sibling temporary and rename, so readers never observe a partial file.
  std::filesystem::path tmp = file;
  tmp += ".tmp";
  if (file.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(file.parent_path(), ec);
  }
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw ResourceError("cannot write lattice cache file " + tmp.string());
    std::string line;
    for (std::size_t i = 0; i < lattice.size(); ++i) {
      line.clear();
      const auto k = lattice.point(i);
      for (std::size_t j = 0; j < k.size(); ++j) {
        if (j) line.push_back(' ');
        line += std::to_string(k[j]);
      }
      line.push_back('\n');
      out.write(line.data(), static_cast<std::streamsize>(line.size()));
    }
    if (!out) throw ResourceError("failed while writing lattice cache file " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, file, ec);
  if (ec) throw ResourceError("cannot move lattice cache into place: " + ec.message());
}

LatticeEnumeration read_lattice_file(int n, double radius, const std::filesystem::path& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw ResourceError("cannot read lattice cache file " + file.string());
  std::vector<std::int32_t> coords;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream fields(line);
    int count = 0;
    std::int32_t v = 0;
    while (fields >> v) {
      coords.push_back(v);
      ++count;
    }
    if (count != n) throw ResourceError("malformed lattice cache line in " + file.string() + ": '" + line + "'");
  }
  return LatticeEnumeration(n, radius, std::move(coords));
}

std::shared_ptr<const LatticeEnumeration> enumerate_lattice(int n, double radius,
                                                            const std::filesystem::path& cache_dir) {
  require_radius(n, radius);
  // One lock serializes both the memo and cache-file creation (single writer).
  static std::mutex mutex;
  static std::map<std::pair<int, double>, std::shared_ptr<const LatticeEnumeration>> memo;
  std::lock_guard lock(mutex);
  const auto key = std::make_pair(n, radius);
  if (auto it = memo.find(key); it != memo.end()) return it->second;

  std::shared_ptr<const LatticeEnumeration> result;
  if (cache_dir.empty()) {
    result = std::make_shared<const LatticeEnumeration>(scan_lattice(n, radius));
  } else {
    const auto file = cache_dir / cache_file_name(n, radius);
    if (std::filesystem::exists(file)) {
      result = std::make_shared<const LatticeEnumeration>(read_lattice_file(n, radius, file));
    } else {
      auto fresh = std::make_shared<const LatticeEnumeration>(scan_lattice(n, radius));
      std::error_code ec;
      std::filesystem::create_directories(cache_dir, ec);
      if (ec) throw ResourceError("cannot create cache directory " + cache_dir.string() + ": " + ec.message());
      write_lattice_file(*fresh, file);
      result = std::move(fresh);
    }
  }
  // Keep the memo small: enumerations near the limit hold tens of megabytes.
  if (memo.size() >= 8) memo.clear();
  memo.emplace(key, result);
  return result;
}

std::shared_ptr<const LatticeEnumeration> enumerate_lattice(int n, double radius) {
  return enumerate_lattice(n, radius, default_cache_dir());
}

// ---------------------------------------------------------------------------
// Displacement and window

Displacement::Displacement(std::vector<double> u) : u_(std::move(u)) {
  require_supported(static_cast<int>(u_.size()));
  for (double& c : u_) {
    if (!std::isfinite(c)) throw DomainError("displacement components must be finite");
    // Reduce to (-pi, pi].
    c = std::remainder(c, 2.0 * kPi);
    if (c <= -kPi) c += 2.0 * kPi;
  }
}

Displacement Displacement::along(std::span<const double> direction, double distance) {
  double norm = 0.0;
  for (double c : direction) norm += c * c;
  norm = std::sqrt(norm);
  if (!(norm > 0.0)) throw DomainError("probe direction must be non-zero");
  std::vector<double> u(direction.begin(), direction.end());
  for (double& c : u) c *= distance / norm;
  return Displacement(std::move(u));
}

double Displacement::norm() const {
  double s = 0.0;
  for (double c : u_) s += c * c;
  return std::sqrt(s);
}

std::vector<double> default_direction(int n) {
  require_supported(n);
  if (n == 2) return {std::cos(1.0), std::sin(1.0)};
  return {std::cos(1.0) * std::sin(1.0), std::sin(1.0) * std::sin(1.0), std::cos(1.0)};
}

double SmoothingWindow::operator()(double s) const {
  const double x = 0.25 * eps * s;
  if (std::abs(x) < 1e-8) return 1.0;
  const double sinc = std::sin(x) / x;
  const double sq = sinc * sinc;
  return sq * sq;
}

SmoothingWindow make_window(double eps) {
  if (!(eps > 0.0) || !std::isfinite(eps)) throw DomainError("smoothing window eps must be positive");
  return SmoothingWindow{"sinc4", eps};
}

// ---------------------------------------------------------------------------
// Spectral sums

std::int64_t eigenvalue_count(const LatticeEnumeration& lattice, double lambda) {
  const std::int64_t r2 = squared_radius_floor(lambda);
  std::int64_t count = 0;
  for (std::size_t i = 0; i < lattice.size(); ++i) count += lattice.norm2(i) <= r2 ? 1 : 0;
  return count;
}

std::int64_t eigenvalue_count(int n, double lambda) {
  return static_cast<std::int64_t>(enumerate_lattice(n, lambda)->size());
}

double spectral_function(const LatticeEnumeration& lattice, const Displacement& u, double lambda) {
  if (u.dimension() != lattice.dimension()) throw DomainError("displacement dimension mismatch");
  if (lambda > lattice.radius() + 1e-12) throw DomainError("lambda exceeds the enumeration radius");
  const std::int64_t r2 = squared_radius_floor(lambda);
  const auto comps = u.components();
  const double sum = deterministic_sum(lattice.size(), [&](std::size_t i) {
    return lattice.norm2(i) <= r2 ? std::cos(dot(lattice.point(i), comps)) : 0.0;
  });
  return volume_factor(lattice.dimension()) * sum;
}

double spectral_function(int n, const Displacement& u, double lambda) {
  return spectral_function(*enumerate_lattice(n, lambda), u, lambda);
}

double band_kernel(const LatticeEnumeration& lattice, const Displacement& u, double lambda) {
  if (u.dimension() != lattice.dimension()) throw DomainError("displacement dimension mismatch");
  if (lambda + 1.0 > lattice.radius() + 1e-12) throw DomainError("lambda + 1 exceeds the enumeration radius");
  const std::int64_t lo = squared_radius_floor(lambda);
  const std::int64_t hi = squared_radius_floor(lambda + 1.0);
  const auto comps = u.components();
  const double sum = deterministic_sum(lattice.size(), [&](std::size_t i) {
    const std::int64_t k2 = lattice.norm2(i);
    return (k2 > lo && k2 <= hi) ? std::cos(dot(lattice.point(i), comps)) : 0.0;
  });
  return volume_factor(lattice.dimension()) * sum;
}

__int128 lattice_moment(const LatticeEnumeration& lattice, const MultiIndex& gamma, double lambda) {
  if (gamma.size() != lattice.dimension()) throw DomainError("multi-index length must equal n");
  if (gamma.order() > 6) throw DomainError("lattice_moment: |alpha + beta| must be <= 6");
  const std::int64_t r2 = squared_radius_floor(lambda);
  __int128 total = 0;
  for (std::size_t i = 0; i < lattice.size(); ++i) {
    if (lattice.norm2(i) > r2) continue;
    const auto k = lattice.point(i);
    __int128 term = 1;
    for (int j = 0; j < gamma.size(); ++j)
      for (int e = 0; e < gamma[j]; ++e) term *= k[static_cast<std::size_t>(j)];
    total += term;
  }
  return total;
}

double derivative_diagonal_sum(const LatticeEnumeration& lattice, const MultiIndex& alpha,
                               const MultiIndex& beta, double lambda) {
  const int n = lattice.dimension();
  if (alpha.size() != n || beta.size() != n) throw DomainError("multi-index length must equal n");
  if (lambda > lattice.radius() + 1e-12) throw DomainError("lambda exceeds the enumeration radius");
  const __int128 moment = lattice_moment(lattice, alpha + beta, lambda);
  if (!same_parity(alpha, beta)) {
    // k -> reflection in an odd coordinate pairs the terms; the exact sum cancels.
    if (moment != 0) throw NumericError("parity-mismatched lattice moment did not cancel");
    return 0.0;
  }
  const double sign = ((alpha.order() - beta.order()) / 2) % 2 == 0 ? 1.0 : -1.0;
  return sign * volume_factor(n) * static_cast<double>(moment);
}

double derivative_diagonal_sum(int n, const MultiIndex& alpha, const MultiIndex& beta, double lambda) {
  return derivative_diagonal_sum(*enumerate_lattice(n, lambda), alpha, beta, lambda);
}

double band_diagonal_sum(const LatticeEnumeration& lattice, double lambda) {
  if (!(lambda >= 0.0)) throw DomainError("band: lambda must be non-negative");
  if (lambda + 1.0 > lattice.radius() + 1e-12) throw DomainError("lambda + 1 exceeds the enumeration radius");
  const std::int64_t lo = squared_radius_floor(lambda);
  const std::int64_t hi = squared_radius_floor(lambda + 1.0);
  std::int64_t count = 0;
  for (std::size_t i = 0; i < lattice.size(); ++i) {
    const std::int64_t k2 = lattice.norm2(i);
    count += (k2 > lo && k2 <= hi) ? 1 : 0;
  }
  return volume_factor(lattice.dimension()) * static_cast<double>(count);
}

double band_diagonal_sum(int n, double lambda) {
  if (!(lambda >= 0.0)) throw DomainError("band: lambda must be non-negative");
  return band_diagonal_sum(*enumerate_lattice(n, lambda + 1.0), lambda);
}

std::vector<std::int64_t> shell_histogram(int n, std::int64_t max_norm2) {
  require_radius(n, std::sqrt(static_cast<double>(max_norm2)));
  std::vector<std::int64_t> counts(static_cast<std::size_t>(max_norm2) + 1, 0);
  visit_lattice(n, max_norm2, [&](const std::array<std::int64_t, 3>& k) {
    counts[static_cast<std::size_t>(k[0] * k[0] + k[1] * k[1] + k[2] * k[2])] += 1;
  });
  return counts;
}

double smoothed_diagonal_sum(int n, double lambda, const SmoothingWindow& window) {
  require_supported(n);
  if (!(lambda >= 0.0)) throw DomainError("smoothed sum: lambda must be non-negative");
  if (window.shape != "sinc4") throw DomainError("unknown smoothing window shape '" + window.shape + "'");
  const double reach = lambda + window.truncation();
  if (reach > radius_limit(n)) {
    char buf[200];
    std::snprintf(buf, sizeof buf,
                  "smoothed sum: truncation radius %.6g (lambda + 4000/eps) exceeds the n=%d limit %g", reach, n,
                  radius_limit(n));
    throw ResourceError(buf);
  }
  const std::vector<std::int64_t> shells = shell_histogram(n, squared_radius_floor(reach));
  const double sum = deterministic_sum(shells.size(), [&](std::size_t r2) {
    return shells[r2] == 0 ? 0.0 : static_cast<double>(shells[r2]) * window(lambda - std::sqrt(static_cast<double>(r2)));
  });
  return volume_factor(n) * sum;
}

}  // namespace speclab::torus
