#ifndef LFCNORM_VECTORS_HPP
#define LFCNORM_VECTORS_HPP

#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "lfcnorm/params.hpp"

namespace lfcnorm {

struct SupportTooLarge : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// Thrown by settle_index_for_decay when the scanned horizon ends before
/// the step inequality stabilizes.
struct NotReached : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// A finitely supported vector: finite map from opaque labels to nonzero
/// finite values. Immutable after construction.
class SparseVector {
 public:
  SparseVector() = default;
  /// Validates: finite nonzero values, unique labels.
  explicit SparseVector(
      const std::vector<std::pair<std::string, double>>& entries);

  const std::map<std::string, double>& entries() const { return entries_; }
  std::size_t support_size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }
  /// 0.0 for labels outside the support.
  double value(const std::string& label) const;

  /// alpha == 0 yields the zero vector.
  SparseVector scaled(double alpha) const;
  /// Entrywise sum; entries cancelling to exact zero are dropped.
  SparseVector plus(const SparseVector& other) const;

  bool operator==(const SparseVector&) const = default;

 private:
  std::map<std::string, double> entries_;
};

/// Support of x rearranged by non-increasing magnitude (ties broken by
/// label order) with the p-th powers and their prefix sums. All heavy
/// computations run off this view.
class SortedProfile {
 public:
  SortedProfile(const SparseVector& x, double p);

  std::size_t size() const { return labels_.size(); }
  double exponent() const { return p_; }
  const std::vector<std::string>& labels() const { return labels_; }
  const std::vector<double>& magnitudes() const { return mags_; }
  /// |x(gamma_j)|^p by rank (0-based).
  const std::vector<double>& powers() const { return powers_; }
  /// Sum of the top-k powers; prefix(0) == 0, prefix(n) == ||x||_p^p.
  double prefix(std::size_t k) const { return prefix_[k]; }

 private:
  double p_;
  std::vector<std::string> labels_;
  std::vector<double> mags_;
  std::vector<double> powers_;
  std::vector<double> prefix_;  // length n+1
};

/// (sum |x(gamma)|^r)^(1/r); 0 for the empty vector. Requires r > 0.
double p_norm(const SparseVector& x, double r);

/// Weight (1+delta_k)^2 of a k-element set. Kept as one shared
/// expression so every enumeration route produces identical doubles.
inline double aux_weight(const ParamSchedule& s, long k) {
  const double b = 1.0 + s.delta(k);
  return b * b;
}

/// The auxiliary norm: max over 1 <= k <= |supp| of
/// (1+delta_k)^2 · (top-k p-mass)^(1/p). The max over all finite sets of
/// a fixed size is attained on the top-k coordinates and padding past the
/// support only shrinks the weight, so scanning prefixes is exact.
double aux_norm(const SparseVector& x, const ParamSchedule& s, double p);
double aux_norm(const SortedProfile& pr, const ParamSchedule& s);

/// Exhaustive oracle for aux_norm over every nonempty subset of the
/// support. Requires |supp| <= 20.
double aux_norm_exhaustive(const SparseVector& x, const ParamSchedule& s,
                           double p);

/// envelope(k) = (1+delta_k) · (top-min(k,n) p-mass)^(1/p).
double envelope(const SparseVector& x, const ParamSchedule& s, double p,
                long k);
double envelope(const SortedProfile& pr, const ParamSchedule& s, long k);

/// Smallest k0 >= 1 with envelope(k+1) <= envelope(k) for all k >= k0.
/// Past the support the ratio is (1+delta_{k+1})/(1+delta_k) < 1, so the
/// scan over [1, n] is exhaustive.
long envelope_settle_index(const SparseVector& x, const ParamSchedule& s,
                           double p);
long envelope_settle_index(const SortedProfile& pr, const ParamSchedule& s);

struct EnvelopeStep {
  long k = 0;
  bool holds = false;  // step k -> k+1 is non-increasing
};

/// For each k in [1, n-1], the closed-form test
///   |x(gamma_{k+1})|^p <= ((1+delta_k)^p - (1+delta_{k+1})^p)
///                          / (1+delta_{k+1})^p · (top-k p-mass),
/// which is algebraically equivalent to envelope(k+1) <= envelope(k).
std::vector<EnvelopeStep> envelope_decrease_scan(const SparseVector& x,
                                                 const ParamSchedule& s,
                                                 double p);

struct TailBound {
  double lhs = 0.0;  // k · |x(gamma_k)|^q
  double rhs = 0.0;  // ||x||_q^q
};

/// Chebyshev-style bound: the k-th largest magnitude satisfies
/// k·|x(gamma_k)|^q <= ||x||_q^q. Requires 1 <= k <= n.
TailBound sorted_tail_bound(const SparseVector& x, double q, std::size_t k);

/// Power-law coordinate model |x(gamma_j)| = c·j^(-alpha), the analytic
/// stand-in for genuinely infinite supports. Requires alpha·q > 1.
struct DecayModel {
  DecayModel(double c, double alpha, double q);
  double c;
  double alpha;
  double q;
  double coordinate(long j) const;  // c·j^(-alpha), j >= 1
};

/// Scans k in [2, k_hi] on the model coordinates and returns the first k
/// from which the envelope step inequality holds at every scanned index.
/// Throws NotReached when it still fails at k_hi.
long settle_index_for_decay(const DecayModel& d, double p, double q,
                            const ParamSchedule& s, long k_hi);

}  // namespace lfcnorm

#endif  // LFCNORM_VECTORS_HPP
