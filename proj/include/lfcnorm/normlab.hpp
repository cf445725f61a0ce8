#ifndef LFCNORM_NORMLAB_HPP
#define LFCNORM_NORMLAB_HPP

#include <memory>
#include <mutex>
#include <optional>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "lfcnorm/params.hpp"
#include "lfcnorm/smoothcore.hpp"
#include "lfcnorm/vectors.hpp"

namespace lfcnorm {

struct NuTooLarge : std::domain_error {
  using std::domain_error::domain_error;
};

struct DomainExceeded : std::domain_error {
  using std::domain_error::domain_error;
};

/// Certificate of local finite dependence at a point x with aux norm <= 1:
/// the settle index k0, every subset of supp(x) of size <= k0 whose
/// weighted p-mass exceeds the stability threshold 1 - 2·theta, and the
/// aux-norm radius theta_{k0+1} of the neighbourhood on which all other
/// finite sets stay uniformly below their bump supports.
struct LocalityWitness {
  long settle_index = 1;
  std::vector<std::vector<std::string>> sets;  // sorted label lists
  double radius = 0.0;
};

struct FinalNormInfo {
  double value = 0.0;
  long outer_iters = 0;   // level-set bisection steps
  long probe_count = 0;   // bump-sum evaluations
  bool lower_bracket_hit = false;
  bool monotone_ok = true;  // probes consistent with a non-increasing level
};

struct GradientCheckReport {
  std::vector<std::string> labels;
  std::vector<double> grad;  // fine-step central differences at x
  double max_richardson_rel = 0.0;
  double max_scaling_rel = 0.0;  // grad(2x) vs grad(x)
  bool ok = false;
};

struct CalibrationEntry {
  std::size_t k = 0;
  double mu = 0.0;
  double correction = 1.0;
};

struct NormReport {
  double p_norm = 0.0;
  double nu = 0.0;
  std::optional<double> psi;  // absent when x lies outside the bump domain
  double final_norm = 0.0;
  long active_count = 0;
  long bisect_iters = 0;
  std::string schedule_digest;
  std::vector<CalibrationEntry> calibrations;
};

/// Evaluates every quantity of the construction for one (schedule, p,
/// bump order, tolerance) choice. Calibrated smooth norms and bumps are
/// cached per coordinate count; all evaluation methods are const and
/// deterministic, so two evaluators with equal parameters produce
/// bitwise identical results.
class NormEvaluator {
 public:
  NormEvaluator(const ParamSchedule& s, double p, int bump_order,
                double bisect_tol);

  const ParamSchedule& schedule() const { return sched_; }
  double exponent() const { return p_; }

  /// Requires aux_norm(x) <= 1, else NuTooLarge. Branch-and-bound over
  /// the sorted profile; subsets off the support can never reach the
  /// threshold when the aux norm is at most 1.
  LocalityWitness active_sets(const SparseVector& x) const;
  /// Exhaustive oracle, |supp| <= 20.
  LocalityWitness active_sets_exhaustive(const SparseVector& x) const;

  /// Sum over nonempty A of supp(x) of
  ///   bump_{|A|}((1+delta)^2 (1+theta) ||Ax||_{s,A}),
  /// by branch-and-bound; only summands whose argument clears the bump
  /// edge contribute. Requires aux_norm(x) <= 1 + 1e-9 (DomainExceeded).
  double bump_sum(const SparseVector& x) const;
  /// Exhaustive oracle with the identical per-subset evaluation and
  /// summation order; |supp| <= 14 (SupportTooLarge).
  double bump_sum_exhaustive(const SparseVector& x) const;

  /// Minkowski functional of {bump_sum <= 1 - theta_1}: the smooth norm
  /// approximating the p-norm. 0 for the zero vector.
  double final_norm(const SparseVector& x) const;
  FinalNormInfo final_norm_info(const SparseVector& x) const;

  /// Samples y with aux_norm(y - x) < radius and checks the uniform bound
  ///   (1+delta)^2 ||Ay||_{s,A} <= 1 - theta_{|A|}
  /// for every candidate set A outside the witness family with
  /// |A| <= |supp(x)| + 2. Requires aux_norm(x) <= 1.
  bool neighborhood_bound_verify(const SparseVector& x, int samples,
                                 std::mt19937_64& rng) const;

  /// Samples y in the witness ball, rewrites every coordinate outside the
  /// union of the witness sets with fresh perturbations still inside the
  /// ball, and requires bitwise equal bump sums. Requires
  /// aux_norm(x) <= 1.
  bool locality_verify(const SparseVector& x, int samples,
                       std::mt19937_64& rng) const;

  /// Central finite differences of final_norm at steps h and h/2 plus a
  /// scaling check of the gradient at 2x. Requires x != 0.
  GradientCheckReport gradient_check(const SparseVector& x) const;

  NormReport report(const SparseVector& x) const;

  /// Calibrated smooth norm / bump for sets of k coordinates.
  const SmoothFiniteNorm& smooth_norm(std::size_t k) const;
  const BumpFunction& bump(std::size_t k) const;
  /// Calibrated smooth-norm value at the library's internal tolerance.
  double smooth_value(std::size_t k, std::span<const double> v) const;
  double internal_tol() const { return tol_int_; }

 private:
  struct ScaledView;
  struct BumpSumResult {
    double sum = 0.0;
    double noise = 0.0;  // sensitivity bound w.r.t. the gauge tolerance
  };

  double bump_summand(std::size_t k, double psum, std::span<const double> mags,
                      double* noise) const;
  BumpSumResult bump_sum_core(const ScaledView& view, bool exhaustive) const;
  bool set_violates(std::size_t k, double psum) const;
  LocalityWitness active_sets_impl(const SparseVector& x,
                                   bool exhaustive) const;
  SparseVector draw_in_ball(const SparseVector& x, double radius,
                            std::mt19937_64& rng) const;

  ParamSchedule sched_;
  double p_;
  int order_;
  double tol_cfg_;
  double tol_int_;  // bisections run tighter than the configured bound

  mutable std::mutex bank_mu_;
  mutable std::vector<std::unique_ptr<SmoothFiniteNorm>> norms_;
  mutable std::vector<std::unique_ptr<BumpFunction>> bumps_;
};

/// Convenience wrappers with the signature (x, schedule, p, ...).
LocalityWitness active_sets(const SparseVector& x, const ParamSchedule& s,
                            double p);
double bump_sum(const SparseVector& x, const ParamSchedule& s, double p,
                int bump_order);
double final_norm(const SparseVector& x, const ParamSchedule& s,
                  const Config& cfg);

}  // namespace lfcnorm

#endif  // LFCNORM_NORMLAB_HPP
