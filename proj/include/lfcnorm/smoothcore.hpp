#ifndef LFCNORM_SMOOTHCORE_HPP
#define LFCNORM_SMOOTHCORE_HPP

#include <cstddef>
#include <span>
#include <stdexcept>

namespace lfcnorm {

struct CalibrationFailed : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Smoothed p-th power phi(t) = (t^2 + mu^2)^(p/2) - mu^p: even, convex
/// for p >= 1, infinitely differentiable, phi(0) = 0 exactly. Bounds:
///   |t|^p - mu^p <= phi(t) always,
///   phi(t) <= |t|^p       for p <= 2,
///   phi(t) <= (|t|+mu)^p  for every p.
class SmoothedPower {
 public:
  SmoothedPower(double p, double mu);
  double operator()(double t) const;
  double derivative(double t) const;
  double p() const { return p_; }
  double mu() const { return mu_; }

 private:
  double p_;
  double mu_;
  double mu2_;     // mu^2
  double mu_pow_;  // (mu^2)^(p/2), same expression as the evaluation path
};

/// Largest dyadic mu = 2^-j whose closed-form calibration certificate
/// holds:
///   p <= 2 : (1 + k·mu^p)^(1/p) <= 1 + theta_k
///   p > 2  : additionally mu·k^(1/p) < 1/2 and
///            (1 + k·mu^p)^(1/p) / (1 - mu·k^(1/p)) <= 1 + theta_k.
/// Throws CalibrationFailed when no j <= 80 works (e.g. theta_k = 0).
double calibrate_smoothing(std::size_t k, double theta_k, double p);

/// A smooth norm on k coordinates trapped between ||.||_p/(1+theta_k) and
/// ||.||_p: the Minkowski gauge of {sum_i phi(v_i) <= 1} times a
/// correction factor (1 for p <= 2, 1 - mu·k^(1/p) for p > 2).
/// Zero coordinates contribute nothing, so zero-padding is harmless.
class SmoothFiniteNorm {
 public:
  SmoothFiniteNorm(std::size_t dim, SmoothedPower phi, double correction);
  /// Calibrated instance realizing the two-sided bound for this k.
  static SmoothFiniteNorm calibrated(std::size_t k, double theta_k, double p);

  /// The unique lambda >= 0 with sum_i phi(v_i/lambda) = 1 (0 for v = 0),
  /// by monotone bisection to relative tolerance rel_tol.
  double gauge(std::span<const double> v, double rel_tol) const;
  /// correction · gauge(v); the calibrated value satisfies the sandwich.
  double value(std::span<const double> v, double rel_tol) const;

  std::size_t dim() const { return dim_; }
  double correction() const { return correction_; }
  const SmoothedPower& phi() const { return phi_; }

 private:
  std::size_t dim_;
  SmoothedPower phi_;
  double correction_;
};

/// Even convex bump rho(t) = (((t^2 - a^2)_+ / (1 - a^2)))^m with
/// a = 1 - theta^2: identically 0 on [-a, a], equal to 1 at |t| = 1,
/// strictly increasing past a, and C^(m-1) at the joints.
class BumpFunction {
 public:
  BumpFunction(double theta, int order_m);
  double operator()(double t) const;
  /// Derivatives up to order 2 in closed form; one-sided (outer) values
  /// at |t| = a where the order exceeds the smoothness.
  double derivative(double t, int order) const;
  double lower_edge() const { return a_; }
  int order() const { return m_; }

 private:
  double a_;   // 1 - theta^2
  double a2_;  // a^2
  double den_; // 1 - a^2
  int m_;
};

}  // namespace lfcnorm

#endif  // LFCNORM_SMOOTHCORE_HPP
