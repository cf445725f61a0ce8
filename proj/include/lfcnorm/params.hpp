#ifndef LFCNORM_PARAMS_HPP
#define LFCNORM_PARAMS_HPP

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace lfcnorm {

/// Thrown when no positive theta_0 can satisfy the coupling inequality
/// after the halving fallback is exhausted.
struct ScheduleInfeasible : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Global configuration shared by the library and the CLI.
struct Config {
  double p = 2.0;                 // exponent of the target norm, p >= 1
  double q = 1.0;                 // decay class exponent, 0 < q < p
  double epsilon = 0.1;           // approximation budget of the final norm
  int smoothness_order = 4;       // polynomial order of the bump functions, >= 2
  long k_max = 100;               // precompute horizon for the schedules
  double bisect_tol = 1e-10;      // relative tolerance bound for all bisections
  std::uint64_t seed = 0x5eedbeefULL;

  /// Throws std::invalid_argument on any violated field constraint.
  void validate() const;
};

/// The decreasing weight sequences delta_k and theta_k plus the budget
/// epsilon. Immutable after construction; all accessors are const and
/// safe to call concurrently.
///
/// Two kinds exist: the closed-form schedule produced by build_schedule
/// (delta_k = delta*·ln3/ln(k+2), theta by a capped geometric recursion,
/// both total maps extendable past k_max), and explicit schedules backed
/// by plain arrays, used for validation tests and imports.
class ParamSchedule {
 public:
  /// Explicit schedule over [0, delta.size()-1]; delta and theta must
  /// have equal length >= 2. Accessing beyond the arrays throws.
  ParamSchedule(std::vector<double> delta, std::vector<double> theta,
                double epsilon);

  double delta(long k) const;
  double theta(long k) const;
  double epsilon() const { return eps_; }
  /// Horizon the schedule was materialized to (k_max for built schedules,
  /// array length - 1 for explicit ones).
  long horizon() const { return horizon_; }
  bool closed_form() const { return kind_ == Kind::Closed; }

  /// FNV-1a hash over delta/theta up to the horizon plus epsilon;
  /// 16 hex digits. Embedded in reports so results from different
  /// schedules cannot be compared silently.
  std::string digest() const;

 private:
  enum class Kind { Closed, Explicit };

  ParamSchedule() = default;
  friend ParamSchedule build_schedule(const Config& config);

  Kind kind_ = Kind::Explicit;
  double eps_ = 0.0;
  long horizon_ = 0;
  // closed form
  double delta_star_ = 0.0;
  std::vector<double> theta_memo_;  // filled to horizon_ at construction
  // explicit
  std::vector<double> delta_arr_;
  std::vector<double> theta_arr_;
};

/// Builds the default closed-form schedule for the given configuration
/// and verifies the coupling inequalities up to k_max, halving theta_0
/// until they hold. Throws ScheduleInfeasible after 64 halvings.
ParamSchedule build_schedule(const Config& config);

/// One failed schedule check, naming the inequality and the index.
struct ScheduleViolation {
  std::string inequality;  // e.g. "delta decreasing", "ratio bound", ...
  long k = -1;
  std::string detail;
};

/// Re-checks every schedule invariant up to k_hi. Empty result means the
/// schedule is valid at that horizon.
std::vector<ScheduleViolation> validate_schedule(const ParamSchedule& s,
                                                 long k_hi);

/// (1+delta_k)^p - (1+delta_{k+1})^p. For the closed-form schedule this
/// gap is asymptotic to p·delta_1·ln3 / (k·(ln k)^2) as k grows.
double delta_power_gap(const ParamSchedule& s, double p, long k);

}  // namespace lfcnorm

#endif  // LFCNORM_PARAMS_HPP
