#include "lfcnorm/smoothcore.hpp"

#include <cmath>
#include <limits>

namespace lfcnorm {

SmoothedPower::SmoothedPower(double p, double mu) : p_(p), mu_(mu) {
  if (!(p >= 1.0)) throw std::invalid_argument("smoothed power: p >= 1");
  if (!(mu > 0.0) || !std::isfinite(mu))
    throw std::invalid_argument("smoothed power: mu > 0");
  mu2_ = mu * mu;
  mu_pow_ = std::pow(mu2_, p_ / 2.0);
}

double SmoothedPower::operator()(double t) const {
  return std::pow(t * t + mu2_, p_ / 2.0) - mu_pow_;
}

double SmoothedPower::derivative(double t) const {
  return p_ * t * std::pow(t * t + mu2_, p_ / 2.0 - 1.0);
}

double calibrate_smoothing(std::size_t k, double theta_k, double p) {
  if (k < 1) throw std::invalid_argument("calibrate: k >= 1");
  if (!(p >= 1.0)) throw std::invalid_argument("calibrate: p >= 1");
  if (!std::isfinite(theta_k) || theta_k < 0.0)
    throw std::invalid_argument("calibrate: theta_k must be >= 0");
  const double kd = static_cast<double>(k);
  // conditions evaluated in log form so tiny widths cannot saturate the
  // left side to exactly 1 and fake a certificate
  const double budget = std::log1p(theta_k);
  for (int j = 0; j <= 80; ++j) {
    const double mu = std::ldexp(1.0, -j);
    const double inflate = std::log1p(kd * std::pow(mu, p)) / p;
    if (p <= 2.0) {
      if (inflate <= budget) return mu;
    } else {
      const double shrink = mu * std::pow(kd, 1.0 / p);
      if (shrink < 0.5 && inflate - std::log1p(-shrink) <= budget) return mu;
    }
  }
  throw CalibrationFailed("no dyadic smoothing width certifies the bound");
}

SmoothFiniteNorm::SmoothFiniteNorm(std::size_t dim, SmoothedPower phi,
                                   double correction)
    : dim_(dim), phi_(phi), correction_(correction) {
  if (dim < 1) throw std::invalid_argument("smooth norm: dim >= 1");
  if (!(correction > 0.0))
    throw std::invalid_argument("smooth norm: correction must be positive");
}

SmoothFiniteNorm SmoothFiniteNorm::calibrated(std::size_t k, double theta_k,
                                              double p) {
  const double mu = calibrate_smoothing(k, theta_k, p);
  const double correction =
      p <= 2.0 ? 1.0
               : 1.0 - mu * std::pow(static_cast<double>(k), 1.0 / p);
  return SmoothFiniteNorm(k, SmoothedPower(p, mu), correction);
}

double SmoothFiniteNorm::gauge(std::span<const double> v,
                               double rel_tol) const {
  if (v.size() > dim_)
    throw std::invalid_argument("gauge: vector longer than dim");
  if (!(rel_tol > 0.0)) throw std::invalid_argument("gauge: rel_tol > 0");
  double vmax = 0.0;
  for (double t : v) {
    if (!std::isfinite(t))
      throw std::invalid_argument("gauge: non-finite component");
    vmax = std::max(vmax, std::abs(t));
  }
  if (vmax == 0.0) return 0.0;

  auto level = [&](double lambda) {
    double acc = 0.0;
    for (double t : v) acc += phi_(t / lambda);
    return acc;
  };

  // level is strictly decreasing in lambda for v != 0; bracket a sign
  // change around the unit level and bisect.
  double hi = vmax;
  while (level(hi) > 1.0) hi *= 2.0;
  double lo = hi;
  while (lo > std::numeric_limits<double>::min() && level(lo) < 1.0)
    lo *= 0.5;
  if (level(lo) == 1.0) return lo;
  while (hi - lo > rel_tol * hi) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;  // interval at float resolution
    if (level(mid) < 1.0)
      hi = mid;
    else
      lo = mid;
  }
  return 0.5 * (lo + hi);
}

double SmoothFiniteNorm::value(std::span<const double> v,
                               double rel_tol) const {
  return correction_ * gauge(v, rel_tol);
}

BumpFunction::BumpFunction(double theta, int order_m) : m_(order_m) {
  if (!(theta > 0.0) || !(theta < 1.0))
    throw std::invalid_argument("bump: theta in (0,1)");
  if (order_m < 2) throw std::invalid_argument("bump: order >= 2");
  a_ = 1.0 - theta * theta;
  a2_ = a_ * a_;
  den_ = 1.0 - a2_;
}

namespace {
double ipow(double base, int n) {
  double r = 1.0;
  for (int i = 0; i < n; ++i) r *= base;
  return r;
}
}  // namespace

double BumpFunction::operator()(double t) const {
  const double num = t * t - a2_;
  if (num <= 0.0) return 0.0;
  return ipow(num / den_, m_);
}

double BumpFunction::derivative(double t, int order) const {
  if (order < 0 || order > 2)
    throw std::invalid_argument("bump: derivative order in {0,1,2}");
  if (order == 0) return (*this)(t);
  const double num = t * t - a2_;
  if (num < 0.0) return 0.0;
  // at |t| = a the formulas give the outer one-sided limits
  const double u = num / den_;
  const double du = 2.0 * t / den_;
  if (order == 1) return m_ * ipow(u, m_ - 1) * du;
  const double ddu = 2.0 / den_;
  return m_ * (m_ - 1) * ipow(u, m_ - 2) * du * du + m_ * ipow(u, m_ - 1) * ddu;
}

}  // namespace lfcnorm
