#pragma once

// Manifold-independent special functions, universal constants and quadrature.

#include <cstdint>
#include <initializer_list>
#include <span>
#include <vector>

namespace speclab {

/// Non-negative integer multi-index alpha = (alpha_1, ..., alpha_n).
class MultiIndex {
 public:
  MultiIndex() = default;
  explicit MultiIndex(std::vector<int> entries);
  MultiIndex(std::initializer_list<int> entries);

  /// All-zero index of length n.
  static MultiIndex zero(int n);

  int size() const { return static_cast<int>(entries_.size()); }
  int order() const;
  int operator[](int j) const { return entries_[static_cast<std::size_t>(j)]; }
  std::span<const int> entries() const { return entries_; }

  friend MultiIndex operator+(const MultiIndex& a, const MultiIndex& b);
  friend bool operator==(const MultiIndex&, const MultiIndex&) = default;

 private:
  std::vector<int> entries_;
};

/// alpha = beta (mod 2) componentwise. Lengths must agree.
bool same_parity(const MultiIndex& alpha, const MultiIndex& beta);

/// Gauss rule on [-1, 1].
struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;

  int order() const { return static_cast<int>(nodes.size()); }

  /// Integral over [a, b] of f, by affine map of the rule.
  template <class F>
  double integrate(F&& f, double a = -1.0, double b = 1.0) const {
    const double half = 0.5 * (b - a);
    const double mid = 0.5 * (b + a);
    double sum = 0.0;
    for (std::size_t i = 0; i < nodes.size(); ++i) sum += weights[i] * f(mid + half * nodes[i]);
    return half * sum;
  }
};

struct PhiValue {
  int n = 2;
  double tau = 0.0;
  double value = 0.0;
};

/// Lebesgue exponent p in [1, inf]. Infinity is its own state, never a float sentinel.
class LpExponent {
 public:
  static LpExponent finite(double p);
  static LpExponent infinity() { return LpExponent(); }

  bool is_infinite() const { return infinite_; }
  /// Throws DomainError when infinite.
  double value() const;
  /// 1/p, which is 0 for p = inf.
  double reciprocal() const { return infinite_ ? 0.0 : 1.0 / p_; }

 private:
  LpExponent() = default;
  bool infinite_ = true;
  double p_ = 0.0;
};

double gamma(double x);
double log_gamma(double x);
double log_beta(double a, double b);

/// k!! with (-1)!! = 0!! = 1. Throws NumericError on overflow.
std::uint64_t double_factorial(int k);

/// Area of the unit sphere S^k in R^{k+1}; |S^0| = 2.
double sphere_area(int k);
/// Volume of the unit ball in R^k; |B_0| = 1.
double ball_volume(int k);

/// Local Weyl constant 1/(2^n pi^{n/2} Gamma(1+n/2)) = |B_n|/(2 pi)^n.
double weyl_constant(int n);

/// Leading constant of the derivative Weyl law, from the double-factorial closed form.
/// Zero exactly when alpha and beta differ in parity.
double deriv_weyl_constant(int n, const MultiIndex& alpha, const MultiIndex& beta);

/// (2 pi)^{-n} (-1)^{(|alpha|-|beta|)/2} times the ball moment of x^{alpha+beta}, the moment
/// being built from iterated one-dimensional Beta integrals. Independent route to the above.
double deriv_weyl_constant_moment(int n, const MultiIndex& alpha, const MultiIndex& beta);

/// Integral over the unit ball B_n of x^gamma by iterated Beta integrals (0 unless all even).
double ball_moment(const MultiIndex& gamma);

/// Gegenbauer polynomial C_m^nu(t) by three-term recurrence; nu = 1/2 is Legendre.
double gegenbauer(int m, double nu, double t);
/// C_0^nu(t), ..., C_M^nu(t) into out (size M+1) in one recurrence pass.
void gegenbauer_all(int max_degree, double nu, double t, std::span<double> out);
/// C_m^nu(1) = Gamma(m + 2 nu)/(m! Gamma(2 nu)).
double gegenbauer_at_one(int m, double nu);
/// d/dt C_m^nu(t) = 2 nu C_{m-1}^{nu+1}(t).
double gegenbauer_derivative(int m, double nu, double t);

/// All m zeros of C_m^nu, ascending, each polished inside the bracket formed by the
/// interlacing zeros of degree m-1.
std::vector<double> gegenbauer_zeros(int m, double nu);

/// Gauss-Legendre rule of order N (1 <= N <= 5000). Rules are cached; the reference is stable.
const QuadratureRule& gauss_legendre_rule(int order);

/// Bessel functions used as an independent check of the kernel Phi_n.
double bessel_j0(double x);
double bessel_j1(double x);
double bessel_j3half(double x);

/// Phi_n(tau), the normalized Fourier transform of the unit-ball indicator, by quadrature.
PhiValue phi_kernel(int n, double tau);
/// Closed Bessel form of Phi_n, available for n in {2, 3}.
double phi_kernel_bessel(int n, double tau);
/// i-th positive zero of Phi_n (n in {2, 3}); RangeError past tau = 200.
double phi_kernel_zero(int n, int i);

/// Growth exponent of the unit-band projector from L_2 into L_p on an n-manifold.
double epsilon_exponent(int n, LpExponent p);
/// p = 2(n+1)/(n-1), where the two branches of epsilon_exponent meet.
double critical_exponent(int n);

}  // namespace speclab
