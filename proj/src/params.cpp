#include "lfcnorm/params.hpp"

#include <cmath>
#include <cstdio>
#include <cstring>
#include <limits>

namespace lfcnorm {

namespace {

constexpr double kLn3 = 1.0986122886681098;  // std::log(3.0)

double closed_delta(double delta_star, long k) {
  // delta_k = delta* · ln3 / ln(k+2); equals delta* exactly at k = 1.
  return delta_star * (kLn3 / std::log(static_cast<double>(k) + 2.0));
}

// theta_{k+1} = min(0.9·theta_k, 0.45·(delta_k - delta_{k+1})/(1 + delta_k)).
// The 0.45 fraction keeps the ratio bound strict, the 0.9 factor forces
// strict monotonicity even where the delta gaps flatten out.
double next_theta(double theta_k, double delta_k, double delta_k1) {
  const double gap_cap = 0.45 * (delta_k - delta_k1) / (1.0 + delta_k);
  return std::min(0.9 * theta_k, gap_cap);
}

void fnv_mix(std::uint64_t& h, double v) {
  std::uint64_t bits;
  std::memcpy(&bits, &v, sizeof bits);
  for (int i = 0; i < 8; ++i) {
    h ^= (bits >> (8 * i)) & 0xffu;
    h *= 0x100000001b3ULL;
  }
}

}  // namespace

void Config::validate() const {
  if (!(p >= 1.0) || !std::isfinite(p))
    throw std::invalid_argument("config: p must be >= 1");
  if (!(q > 0.0) || !(q < p))
    throw std::invalid_argument("config: q must lie in (0, p)");
  if (!(epsilon > 0.0) || !std::isfinite(epsilon))
    throw std::invalid_argument("config: epsilon must be positive");
  if (smoothness_order < 2)
    throw std::invalid_argument("config: smoothness_order must be >= 2");
  if (k_max < 2) throw std::invalid_argument("config: k_max must be >= 2");
  if (!(bisect_tol > 0.0) || bisect_tol > 1e-6)
    throw std::invalid_argument("config: bisect_tol must lie in (0, 1e-6]");
}

ParamSchedule::ParamSchedule(std::vector<double> delta,
                             std::vector<double> theta, double epsilon)
    : kind_(Kind::Explicit),
      eps_(epsilon),
      delta_arr_(std::move(delta)),
      theta_arr_(std::move(theta)) {
  if (delta_arr_.size() != theta_arr_.size() || delta_arr_.size() < 2)
    throw std::invalid_argument(
        "schedule: delta and theta need equal length >= 2");
  horizon_ = static_cast<long>(delta_arr_.size()) - 1;
}

double ParamSchedule::delta(long k) const {
  if (k < 0) throw std::out_of_range("schedule: k < 0");
  if (kind_ == Kind::Closed) return closed_delta(delta_star_, k);
  if (k >= static_cast<long>(delta_arr_.size()))
    throw std::out_of_range("schedule: k beyond explicit horizon");
  return delta_arr_[static_cast<std::size_t>(k)];
}

double ParamSchedule::theta(long k) const {
  if (k < 0) throw std::out_of_range("schedule: k < 0");
  if (kind_ == Kind::Explicit) {
    if (k >= static_cast<long>(theta_arr_.size()))
      throw std::out_of_range("schedule: k beyond explicit horizon");
    return theta_arr_[static_cast<std::size_t>(k)];
  }
  const long memo_top = static_cast<long>(theta_memo_.size()) - 1;
  if (k <= memo_top) return theta_memo_[static_cast<std::size_t>(k)];
  // Past the memo, replay the recursion statelessly; the memo itself is
  // never touched after construction, so concurrent reads stay safe.
  double th = theta_memo_.back();
  for (long j = memo_top; j < k; ++j)
    th = next_theta(th, closed_delta(delta_star_, j),
                    closed_delta(delta_star_, j + 1));
  return th;
}

std::string ParamSchedule::digest() const {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (long k = 0; k <= horizon_; ++k) fnv_mix(h, delta(k));
  for (long k = 0; k <= horizon_; ++k) fnv_mix(h, theta(k));
  fnv_mix(h, eps_);
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx",
                static_cast<unsigned long long>(h));
  return std::string(buf);
}

ParamSchedule build_schedule(const Config& config) {
  config.validate();
  const double eps = config.epsilon;
  const double dstar = std::min(eps / 8.0, 0.1);
  const double d0 = closed_delta(dstar, 0);
  const double d1 = closed_delta(dstar, 1);

  double theta0 =
      std::min({eps / 8.0, 0.45 * (d0 - d1) / (1.0 + d0), 0.05});

  for (int attempt = 0; attempt <= 64; ++attempt, theta0 *= 0.5) {
    ParamSchedule s;
    s.kind_ = ParamSchedule::Kind::Closed;
    s.eps_ = eps;
    s.delta_star_ = dstar;
    s.horizon_ = config.k_max;
    s.theta_memo_.resize(static_cast<std::size_t>(config.k_max) + 1);
    s.theta_memo_[0] = theta0;
    for (long k = 0; k < config.k_max; ++k)
      s.theta_memo_[static_cast<std::size_t>(k) + 1] = next_theta(
          s.theta_memo_[static_cast<std::size_t>(k)],
          closed_delta(dstar, k), closed_delta(dstar, k + 1));

    bool ok = theta0 > 0.0 && theta0 < 0.5;
    for (long k = 0; ok && k <= config.k_max; ++k) {
      const double th = s.theta(k);
      if (!(th > 0.0) || (k > 0 && !(th < s.theta(k - 1)))) ok = false;
      if (!((1.0 + s.delta(k + 1)) / (1.0 + s.delta(k)) <
            1.0 - 2.0 * s.theta(k + 1)))
        ok = false;
    }
    const double th1 = s.theta(1);
    if (!((1.0 + th1) / (1.0 - th1) * (1.0 + d1) * (1.0 + d1) <=
          1.0 + eps))
      ok = false;
    if (ok) return s;
  }
  throw ScheduleInfeasible(
      "no feasible theta_0 after 64 halvings; epsilon too small for the "
      "fixed delta sequence");
}

std::vector<ScheduleViolation> validate_schedule(const ParamSchedule& s,
                                                 long k_hi) {
  if (k_hi < 1) throw std::invalid_argument("validate_schedule: k_hi >= 1");
  std::vector<ScheduleViolation> out;
  auto flag = [&out](const char* ineq, long k, std::string detail) {
    out.push_back({ineq, k, std::move(detail)});
  };

  const double d1ln3 = s.delta(1) * kLn3;
  for (long k = 0; k <= k_hi; ++k) {
    const double dk = s.delta(k);
    const double tk = s.theta(k);
    if (!(dk > 0.0)) flag("delta positive", k, "delta_k <= 0");
    if (!(tk > 0.0)) flag("theta positive", k, "theta_k <= 0");
    if (k > 0) {
      if (!(dk < s.delta(k - 1)))
        flag("delta decreasing", k, "delta_k >= delta_{k-1}");
      if (!(tk < s.theta(k - 1)))
        flag("theta decreasing", k, "theta_k >= theta_{k-1}");
      // ratio bound: (1+delta_k)/(1+delta_{k-1}) < 1 - 2 theta_k
      if (!((1.0 + dk) / (1.0 + s.delta(k - 1)) < 1.0 - 2.0 * tk))
        flag("ratio bound", k,
             "(1+delta_k)/(1+delta_{k-1}) >= 1 - 2 theta_k");
    }
    // log-form check: delta_k · ln(k+2) must match delta_1 · ln 3
    const double ratio = dk * std::log(static_cast<double>(k) + 2.0) / d1ln3;
    if (!(std::abs(ratio - 1.0) <= 1e-6))
      flag("delta log form", k, "delta_k·ln(k+2) drifts from delta_1·ln3");
  }

  const double t1 = s.theta(1);
  const double d1 = s.delta(1);
  if (!((1.0 + t1) / (1.0 - t1) * (1.0 + d1) * (1.0 + d1) <=
        1.0 + s.epsilon()))
    flag("budget bound", 1,
         "(1+theta_1)/(1-theta_1)·(1+delta_1)^2 > 1+epsilon");
  return out;
}

double delta_power_gap(const ParamSchedule& s, double p, long k) {
  if (k < 2) throw std::invalid_argument("delta_power_gap: k >= 2 required");
  return std::pow(1.0 + s.delta(k), p) - std::pow(1.0 + s.delta(k + 1), p);
}

}  // namespace lfcnorm
