#include "speclab/analytic.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <numeric>
#include <string>

#include "speclab/errors.hpp"

namespace speclab {

namespace {

constexpr double kPi = std::numbers::pi;

void require_dimension(int n, int min_n) {
  if (n < min_n)
    throw DomainError("dimension n=" + std::to_string(n) + " must be >= " + std::to_string(min_n));
}

// Bessel J_nu by its power series; accurate for moderate x.
double bessel_series(double nu, double x) {
  const double half = 0.5 * x;
  const double q = -half * half;
  double term = std::pow(half, nu) / std::tgamma(nu + 1.0);
  double sum = term;
  for (int k = 1; k < 200; ++k) {
    term *= q / (k * (k + nu));
    sum += term;
    if (std::abs(term) < 1e-17 * std::max(1.0, std::abs(sum))) break;
  }
  return sum;
}

// Hankel asymptotic expansion, truncated at the smallest term.
double bessel_hankel(double nu, double x) {
  const double mu = 4.0 * nu * nu;
  const double chi = x - (0.5 * nu + 0.25) * kPi;
  double p = 1.0;
  double q = 0.0;
  double term = 1.0;
  double prev = std::numeric_limits<double>::infinity();
  for (int k = 1; k < 60; ++k) {
    const double odd = 2.0 * k - 1.0;
    term *= (mu - odd * odd) / (k * 8.0 * x);
    if (std::abs(term) >= prev) break;
    prev = std::abs(term);
    // a_k/x^k contributes to P (even k) or Q (odd k) with alternating sign.
    const double sign = ((k / 2) % 2 == 0) ? 1.0 : -1.0;
    if (k % 2 == 0)
      p += sign * term;
    else
      q += sign * term;
    if (prev < 1e-17) break;
  }
  return std::sqrt(2.0 / (kPi * x)) * (p * std::cos(chi) - q * std::sin(chi));
}

constexpr double kBesselSwitch = 12.0;

double newton_gegenbauer(int m, double nu, double x, double lo, double hi) {
  double best = x;
  double best_f = std::numeric_limits<double>::infinity();
  double prev_step = std::numeric_limits<double>::infinity();
  for (int it = 0; it < 100; ++it) {
    const double f = gegenbauer(m, nu, x);
    const double df = gegenbauer_derivative(m, nu, x);
    if (f == 0.0) return x;
    if (std::abs(f) < best_f) {
      best = x;
      best_f = std::abs(f);
    }
    double next = x - f / df;
    if (!(next > lo && next < hi)) {
      // Newton left the bracket; shrink it and bisect instead.
      const double flo = gegenbauer(m, nu, lo);
      if ((flo < 0) == (f < 0))
        lo = x;
      else
        hi = x;
      next = 0.5 * (lo + hi);
    }
    const double step = std::abs(next - x);
    x = next;
    if (step <= 4.0 * std::numeric_limits<double>::epsilon() * std::max(std::abs(x), 1e-3)) return x;
    // Rounding floor reached: steps stop shrinking.
    if (step < 1e-13 && step >= prev_step) {
      return std::abs(gegenbauer(m, nu, x)) < best_f ? x : best;
    }
    prev_step = step;
  }
  throw NumericError("gegenbauer_zeros: Newton iteration did not converge for degree " +
                     std::to_string(m));
}

// Eigenvalues of the Jacobi matrix of the monic Gegenbauer recurrence.
std::vector<double> jacobi_eigenvalues(int m, double nu) {
  if (m == 0) return {};
  if (m == 1) return {0.0};
  Eigen::VectorXd diag = Eigen::VectorXd::Zero(m);
  Eigen::VectorXd sub(m - 1);
  for (int k = 1; k < m; ++k) {
    const double b = k * (k + 2.0 * nu - 1.0) / (4.0 * (k + nu) * (k + nu - 1.0));
    sub[k - 1] = std::sqrt(b);
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
  solver.computeFromTridiagonal(diag, sub, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw NumericError("gegenbauer_zeros: Jacobi eigensolve failed");
  std::vector<double> out(solver.eigenvalues().data(), solver.eigenvalues().data() + m);
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

// ---------------------------------------------------------------------------
// MultiIndex

MultiIndex::MultiIndex(std::vector<int> entries) : entries_(std::move(entries)) {
  if (entries_.empty()) throw DomainError("multi-index must have length >= 1");
  for (int e : entries_)
    if (e < 0) throw DomainError("multi-index entries must be non-negative");
}

MultiIndex::MultiIndex(std::initializer_list<int> entries) : MultiIndex(std::vector<int>(entries)) {}

MultiIndex MultiIndex::zero(int n) {
  if (n < 1) throw DomainError("multi-index must have length >= 1");
  return MultiIndex(std::vector<int>(static_cast<std::size_t>(n), 0));
}

int MultiIndex::order() const { return std::accumulate(entries_.begin(), entries_.end(), 0); }

MultiIndex operator+(const MultiIndex& a, const MultiIndex& b) {
  if (a.size() != b.size()) throw DomainError("multi-index lengths differ");
  std::vector<int> sum(a.entries_.size());
  for (std::size_t j = 0; j < sum.size(); ++j) sum[j] = a.entries_[j] + b.entries_[j];
  return MultiIndex(std::move(sum));
}

bool same_parity(const MultiIndex& alpha, const MultiIndex& beta) {
  if (alpha.size() != beta.size()) throw DomainError("multi-index lengths differ");
  for (int j = 0; j < alpha.size(); ++j)
    if ((alpha[j] - beta[j]) % 2 != 0) return false;
  return true;
}

// ---------------------------------------------------------------------------
// LpExponent

LpExponent LpExponent::finite(double p) {
  if (!(p >= 1.0) || std::isinf(p)) throw DomainError("Lebesgue exponent must be a finite p >= 1");
  LpExponent e;
  e.infinite_ = false;
  e.p_ = p;
  return e;
}

double LpExponent::value() const {
  if (infinite_) throw DomainError("Lebesgue exponent is infinite");
  return p_;
}

// ---------------------------------------------------------------------------
// Gamma family

double gamma(double x) {
  if (!(x > 0.0)) throw DomainError("gamma: argument must be positive");
  return std::tgamma(x);
}

double log_gamma(double x) {
  if (!(x > 0.0)) throw DomainError("log_gamma: argument must be positive");
  int sign = 0;
  return ::lgamma_r(x, &sign);
}

double log_beta(double a, double b) { return log_gamma(a) + log_gamma(b) - log_gamma(a + b); }

std::uint64_t double_factorial(int k) {
  if (k < -1) throw DomainError("double_factorial: k must be >= -1");
  std::uint64_t result = 1;
  for (int j = k; j > 1; j -= 2) {
    if (__builtin_mul_overflow(result, static_cast<std::uint64_t>(j), &result))
      throw NumericError("double_factorial: " + std::to_string(k) + "!! overflows 64 bits");
  }
  return result;
}

double sphere_area(int k) {
  if (k < 0) throw DomainError("sphere_area: k must be >= 0");
  if (k == 0) return 2.0;
  if (k == 1) return 2.0 * kPi;
  return 2.0 * kPi / (k - 1) * sphere_area(k - 2);
}

double ball_volume(int k) {
  if (k < 0) throw DomainError("ball_volume: k must be >= 0");
  if (k == 0) return 1.0;
  return sphere_area(k - 1) / k;
}

double weyl_constant(int n) {
  require_dimension(n, 2);
  return 1.0 / (std::pow(2.0, n) * std::pow(kPi, 0.5 * n) * gamma(1.0 + 0.5 * n));
}

double deriv_weyl_constant(int n, const MultiIndex& alpha, const MultiIndex& beta) {
  require_dimension(n, 1);
  if (alpha.size() != n || beta.size() != n)
    throw DomainError("deriv_weyl_constant: multi-index length must equal n");
  if (!same_parity(alpha, beta)) return 0.0;
  const MultiIndex gamma_index = alpha + beta;
  double numerator = 1.0;
  for (int j = 0; j < n; ++j) numerator *= static_cast<double>(double_factorial(gamma_index[j] - 1));
  const int total = gamma_index.order();
  const double sign = ((alpha.order() - beta.order()) / 2) % 2 == 0 ? 1.0 : -1.0;
  const double denominator = std::pow(kPi, 0.5 * n) * std::pow(2.0, n + 0.5 * total) *
                             gamma(0.5 * (total + n) + 1.0);
  return sign * numerator / denominator;
}

double ball_moment(const MultiIndex& gamma_index) {
  // Peel one coordinate at a time: the slice of B_k at x_1 = s is a (k-1)-ball of radius
  // sqrt(1 - s^2), which contributes (1 - s^2)^{(k-1+|rest|)/2}.
  const int n = gamma_index.size();
  double moment = 1.0;
  int rest = 0;
  for (int k = 1; k <= n; ++k) {
    const int a = gamma_index[n - k];
    if (a % 2 != 0) return 0.0;
    const double b = 0.5 * (k - 1 + rest);
    moment *= std::exp(log_beta(0.5 * (a + 1), b + 1.0));
    rest += a;
  }
  return moment;
}

double deriv_weyl_constant_moment(int n, const MultiIndex& alpha, const MultiIndex& beta) {
  require_dimension(n, 1);
  if (alpha.size() != n || beta.size() != n)
    throw DomainError("deriv_weyl_constant_moment: multi-index length must equal n");
  if (!same_parity(alpha, beta)) return 0.0;
  const double sign = ((alpha.order() - beta.order()) / 2) % 2 == 0 ? 1.0 : -1.0;
  return sign * ball_moment(alpha + beta) / std::pow(2.0 * kPi, n);
}

// ---------------------------------------------------------------------------
// Gegenbauer

double gegenbauer(int m, double nu, double t) {
  if (m < 0) throw DomainError("gegenbauer: degree must be >= 0");
  if (!(nu > 0.0)) throw DomainError("gegenbauer: nu must be positive");
  if (!(std::abs(t) <= 1.0)) throw DomainError("gegenbauer: |t| must be <= 1");
  if (m == 0) return 1.0;
  double prev = 1.0;
  double cur = 2.0 * nu * t;
  for (int k = 1; k < m; ++k) {
    const double next = (2.0 * (k + nu) * t * cur - (k + 2.0 * nu - 1.0) * prev) / (k + 1);
    prev = cur;
    cur = next;
  }
  return cur;
}

void gegenbauer_all(int max_degree, double nu, double t, std::span<double> out) {
  if (max_degree < 0) throw DomainError("gegenbauer_all: degree must be >= 0");
  if (!(nu > 0.0)) throw DomainError("gegenbauer_all: nu must be positive");
  if (!(std::abs(t) <= 1.0)) throw DomainError("gegenbauer_all: |t| must be <= 1");
  if (out.size() < static_cast<std::size_t>(max_degree) + 1)
    throw DomainError("gegenbauer_all: output span too small");
  out[0] = 1.0;
  if (max_degree == 0) return;
  out[1] = 2.0 * nu * t;
  for (int k = 1; k < max_degree; ++k)
    out[k + 1] = (2.0 * (k + nu) * t * out[k] - (k + 2.0 * nu - 1.0) * out[k - 1]) / (k + 1);
}

double gegenbauer_at_one(int m, double nu) {
  if (m < 0) throw DomainError("gegenbauer_at_one: degree must be >= 0");
  if (!(nu > 0.0)) throw DomainError("gegenbauer_at_one: nu must be positive");
  double value = 1.0;
  for (int k = 0; k < m; ++k) value *= (k + 2.0 * nu) / (k + 1.0);
  return value;
}

double gegenbauer_derivative(int m, double nu, double t) {
  if (m == 0) {
    if (!(std::abs(t) <= 1.0)) throw DomainError("gegenbauer_derivative: |t| must be <= 1");
    return 0.0;
  }
  return 2.0 * nu * gegenbauer(m - 1, nu + 1.0, t);
}

std::vector<double> gegenbauer_zeros(int m, double nu) {
  if (m < 1) throw DomainError("gegenbauer_zeros: degree must be >= 1");
  if (!(nu > 0.0)) throw DomainError("gegenbauer_zeros: nu must be positive");

  // Brackets: the zeros of degree m-1 strictly interlace those of degree m.
  std::vector<double> edges = jacobi_eigenvalues(m - 1, nu);
  for (double& z : edges) z = newton_gegenbauer(m - 1, nu, z, -1.0, 1.0);
  edges.insert(edges.begin(), -1.0);
  edges.push_back(1.0);

  const std::vector<double> guesses = jacobi_eigenvalues(m, nu);
  std::vector<double> zeros(static_cast<std::size_t>(m));
  for (int i = 0; i < m; ++i) {
    const double lo = edges[static_cast<std::size_t>(i)];
    const double hi = edges[static_cast<std::size_t>(i) + 1];
    double x = guesses[static_cast<std::size_t>(i)];
    if (!(x > lo && x < hi)) x = 0.5 * (lo + hi);
    zeros[static_cast<std::size_t>(i)] = newton_gegenbauer(m, nu, x, lo, hi);
  }
  // Odd-degree polynomials have an exact zero at the origin.
  if (m % 2 == 1) zeros[static_cast<std::size_t>(m / 2)] = 0.0;
  // Symmetrize: C_m^nu(-t) = (-1)^m C_m^nu(t).
  for (int i = 0; i < m / 2; ++i) {
    const double a = 0.5 * (zeros[static_cast<std::size_t>(m - 1 - i)] - zeros[static_cast<std::size_t>(i)]);
    zeros[static_cast<std::size_t>(i)] = -a;
    zeros[static_cast<std::size_t>(m - 1 - i)] = a;
  }
  return zeros;
}

const QuadratureRule& gauss_legendre_rule(int order) {
  if (order < 1 || order > 5000)
    throw DomainError("gauss_legendre_rule: order must lie in [1, 5000], got " + std::to_string(order));
  static std::mutex mutex;
  static std::map<int, std::unique_ptr<QuadratureRule>> cache;
  std::lock_guard lock(mutex);
  auto& slot = cache[order];
  if (!slot) {
    auto rule = std::make_unique<QuadratureRule>();
    rule->nodes = gegenbauer_zeros(order, 0.5);
    rule->weights.resize(rule->nodes.size());
    for (std::size_t i = 0; i < rule->nodes.size(); ++i) {
      const double t = rule->nodes[i];
      const double dp = gegenbauer_derivative(order, 0.5, t);
      rule->weights[i] = 2.0 / ((1.0 - t) * (1.0 + t) * dp * dp);
    }
    slot = std::move(rule);
  }
  return *slot;
}

// ---------------------------------------------------------------------------
// Bessel and the ball kernel

double bessel_j0(double x) {
  x = std::abs(x);
  return x < kBesselSwitch ? bessel_series(0.0, x) : bessel_hankel(0.0, x);
}

double bessel_j1(double x) {
  const double s = x < 0 ? -1.0 : 1.0;
  x = std::abs(x);
  return s * (x < kBesselSwitch ? bessel_series(1.0, x) : bessel_hankel(1.0, x));
}

double bessel_j3half(double x) {
  if (!(x > 0.0)) throw DomainError("bessel_j3half: argument must be positive");
  if (x < 1e-3) return bessel_series(1.5, x);
  return std::sqrt(2.0 / (kPi * x)) * (std::sin(x) / x - std::cos(x));
}

PhiValue phi_kernel(int n, double tau) {
  require_dimension(n, 2);
  if (!(tau >= 0.0)) throw DomainError("phi_kernel: tau must be non-negative");
  // With t = sin(phi): integral of cos(tau t)(1-t^2)^{(n-1)/2} dt over [-1, 1]
  // becomes the analytic integrand cos(tau sin phi) cos^n phi over [-pi/2, pi/2].
  const int order = std::min(5000, 48 + 2 * static_cast<int>(std::ceil(tau)));
  const QuadratureRule& rule = gauss_legendre_rule(order);
  const double integral = rule.integrate(
      [&](double phi) { return std::cos(tau * std::sin(phi)) * std::pow(std::cos(phi), n); },
      -0.5 * kPi, 0.5 * kPi);
  return {n, tau, ball_volume(n - 1) * integral / std::pow(2.0 * kPi, n)};
}

double phi_kernel_bessel(int n, double tau) {
  if (!(tau >= 0.0)) throw DomainError("phi_kernel_bessel: tau must be non-negative");
  if (n == 2) {
    if (tau == 0.0) return 1.0 / (4.0 * kPi);
    return bessel_j1(tau) / (2.0 * kPi * tau);
  }
  if (n == 3) {
    if (tau == 0.0) return 1.0 / (6.0 * kPi * kPi);
    if (tau < 1e-3) return std::pow(2.0 * kPi * tau, -1.5) * bessel_j3half(tau);
    return (std::sin(tau) - tau * std::cos(tau)) / (2.0 * kPi * kPi * tau * tau * tau);
  }
  throw DomainError("phi_kernel_bessel: closed form available only for n in {2, 3}");
}

double phi_kernel_zero(int n, int i) {
  if (n != 2 && n != 3) throw DomainError("phi_kernel_zero: n must be 2 or 3");
  if (i < 1) throw DomainError("phi_kernel_zero: index is 1-based");
  constexpr double kStep = 0.1;
  constexpr double kLimit = 200.0;
  int found = 0;
  double a = kStep;
  double fa = phi_kernel_bessel(n, a);
  for (int k = 2; k * kStep <= kLimit + 1e-9; ++k) {
    const double b = k * kStep;
    const double fb = phi_kernel_bessel(n, b);
    if ((fa < 0) != (fb < 0) || fb == 0.0) {
      if (++found == i) {
        double lo = a;
        double hi = b;
        double flo = fa;
        while (hi - lo > 1e-11) {
          const double mid = 0.5 * (lo + hi);
          if (mid <= lo || mid >= hi) break;
          const double fm = phi_kernel_bessel(n, mid);
          if (fm == 0.0) return mid;
          if ((fm < 0) == (flo < 0)) {
            lo = mid;
            flo = fm;
          } else {
            hi = mid;
          }
        }
        return 0.5 * (lo + hi);
      }
    }
    a = b;
    fa = fb;
  }
  throw RangeError("phi_kernel_zero: zero #" + std::to_string(i) + " of Phi_" + std::to_string(n) +
                   " lies beyond tau = 200");
}

// ---------------------------------------------------------------------------
// Norm-growth exponent

double epsilon_exponent(int n, LpExponent p) {
  require_dimension(n, 2);
  const double inv = p.reciprocal();
  if (!p.is_infinite() && p.value() < 2.0) throw DomainError("epsilon_exponent: p must be >= 2");
  const double point_branch = 0.5 * (n - 1) - n * inv;
  const double tube_branch = (0.25 - 0.5 * inv) * (n - 1);
  return std::max(point_branch, tube_branch);
}

double critical_exponent(int n) {
  require_dimension(n, 2);
  return 2.0 * (n + 1) / (n - 1);
}

}  // namespace speclab
