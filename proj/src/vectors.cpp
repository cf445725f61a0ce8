#include "lfcnorm/vectors.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace lfcnorm {

SparseVector::SparseVector(
    const std::vector<std::pair<std::string, double>>& entries) {
  for (const auto& [label, v] : entries) {
    if (!std::isfinite(v))
      throw std::invalid_argument("vector entry '" + label +
                                  "' is not finite");
    if (v == 0.0)
      throw std::invalid_argument("vector entry '" + label + "' is zero");
    if (!entries_.emplace(label, v).second)
      throw std::invalid_argument("duplicate vector label '" + label + "'");
  }
}

double SparseVector::value(const std::string& label) const {
  auto it = entries_.find(label);
  return it == entries_.end() ? 0.0 : it->second;
}

SparseVector SparseVector::scaled(double alpha) const {
  if (!std::isfinite(alpha)) throw std::invalid_argument("scale not finite");
  SparseVector out;
  if (alpha == 0.0) return out;
  for (const auto& [label, v] : entries_) out.entries_.emplace(label, alpha * v);
  return out;
}

SparseVector SparseVector::plus(const SparseVector& other) const {
  SparseVector out;
  out.entries_ = entries_;
  for (const auto& [label, v] : other.entries_) {
    auto [it, inserted] = out.entries_.emplace(label, v);
    if (!inserted) {
      it->second += v;
      if (it->second == 0.0) out.entries_.erase(it);
    }
  }
  return out;
}

SortedProfile::SortedProfile(const SparseVector& x, double p) : p_(p) {
  if (!(p > 0.0)) throw std::invalid_argument("profile: p must be positive");
  const auto& m = x.entries();
  std::vector<const std::pair<const std::string, double>*> ptrs;
  ptrs.reserve(m.size());
  for (const auto& e : m) ptrs.push_back(&e);
  std::sort(ptrs.begin(), ptrs.end(), [](const auto* a, const auto* b) {
    const double ma = std::abs(a->second), mb = std::abs(b->second);
    if (ma != mb) return ma > mb;
    return a->first < b->first;
  });
  labels_.reserve(ptrs.size());
  mags_.reserve(ptrs.size());
  powers_.reserve(ptrs.size());
  prefix_.reserve(ptrs.size() + 1);
  prefix_.push_back(0.0);
  double acc = 0.0;
  for (const auto* e : ptrs) {
    labels_.push_back(e->first);
    const double mag = std::abs(e->second);
    mags_.push_back(mag);
    powers_.push_back(std::pow(mag, p_));
    acc += powers_.back();
    prefix_.push_back(acc);
  }
}

double p_norm(const SparseVector& x, double r) {
  if (!(r > 0.0)) throw std::invalid_argument("p_norm: r must be positive");
  double acc = 0.0;
  for (const auto& [label, v] : x.entries()) acc += std::pow(std::abs(v), r);
  return acc == 0.0 ? 0.0 : std::pow(acc, 1.0 / r);
}

double aux_norm(const SortedProfile& pr, const ParamSchedule& s) {
  double best = 0.0;
  for (std::size_t k = 1; k <= pr.size(); ++k) {
    const double cand = aux_weight(s, static_cast<long>(k)) *
                        std::pow(pr.prefix(k), 1.0 / pr.exponent());
    best = std::max(best, cand);
  }
  return best;
}

double aux_norm(const SparseVector& x, const ParamSchedule& s, double p) {
  return aux_norm(SortedProfile(x, p), s);
}

double aux_norm_exhaustive(const SparseVector& x, const ParamSchedule& s,
                           double p) {
  const SortedProfile pr(x, p);
  const std::size_t n = pr.size();
  if (n > 20) throw SupportTooLarge("aux_norm_exhaustive: support > 20");
  double best = 0.0;
  // DFS over subsets in rank order; partial p-sums accumulate left to
  // right exactly like the prefix sums do.
  auto rec = [&](auto&& self, std::size_t first, double sum,
                 std::size_t count) -> void {
    for (std::size_t r = first; r < n; ++r) {
      const double sum2 = sum + pr.powers()[r];
      const std::size_t c2 = count + 1;
      const double cand = aux_weight(s, static_cast<long>(c2)) *
                          std::pow(sum2, 1.0 / p);
      best = std::max(best, cand);
      self(self, r + 1, sum2, c2);
    }
  };
  rec(rec, 0, 0.0, 0);
  return best;
}

double envelope(const SortedProfile& pr, const ParamSchedule& s, long k) {
  if (k < 1) throw std::invalid_argument("envelope: k >= 1 required");
  const std::size_t top = std::min<std::size_t>(static_cast<std::size_t>(k),
                                                pr.size());
  if (top == 0) return 0.0;
  return (1.0 + s.delta(k)) * std::pow(pr.prefix(top), 1.0 / pr.exponent());
}

double envelope(const SparseVector& x, const ParamSchedule& s, double p,
                long k) {
  return envelope(SortedProfile(x, p), s, k);
}

long envelope_settle_index(const SortedProfile& pr, const ParamSchedule& s) {
  const long n = static_cast<long>(pr.size());
  long settle = 1;
  for (long k = 1; k + 1 <= n; ++k)
    if (envelope(pr, s, k + 1) > envelope(pr, s, k)) settle = k + 1;
  return settle;
}

long envelope_settle_index(const SparseVector& x, const ParamSchedule& s,
                           double p) {
  return envelope_settle_index(SortedProfile(x, p), s);
}

std::vector<EnvelopeStep> envelope_decrease_scan(const SparseVector& x,
                                                 const ParamSchedule& s,
                                                 double p) {
  const SortedProfile pr(x, p);
  const std::size_t n = pr.size();
  std::vector<EnvelopeStep> out;
  if (n < 2) return out;
  out.reserve(n - 1);
  for (std::size_t k = 1; k + 1 <= n; ++k) {
    const double wk = std::pow(1.0 + s.delta(static_cast<long>(k)), p);
    const double wk1 = std::pow(1.0 + s.delta(static_cast<long>(k) + 1), p);
    const double rhs = (wk - wk1) / wk1 * pr.prefix(k);
    out.push_back({static_cast<long>(k), pr.powers()[k] <= rhs});
  }
  return out;
}

TailBound sorted_tail_bound(const SparseVector& x, double q, std::size_t k) {
  const SortedProfile pr(x, q);
  if (k < 1 || k > pr.size())
    throw std::invalid_argument("sorted_tail_bound: k out of range");
  TailBound tb;
  tb.lhs = static_cast<double>(k) * pr.powers()[k - 1];
  tb.rhs = pr.prefix(pr.size());
  return tb;
}

DecayModel::DecayModel(double c_, double alpha_, double q_)
    : c(c_), alpha(alpha_), q(q_) {
  if (!(c > 0.0)) throw std::invalid_argument("decay model: c must be > 0");
  if (!(q > 0.0)) throw std::invalid_argument("decay model: q must be > 0");
  if (!(alpha * q > 1.0))
    throw std::invalid_argument("decay model: alpha*q must exceed 1");
}

double DecayModel::coordinate(long j) const {
  return c * std::pow(static_cast<double>(j), -alpha);
}

long settle_index_for_decay(const DecayModel& d, double p, double q,
                            const ParamSchedule& s, long k_hi) {
  if (!(q < p)) throw std::invalid_argument("settle_index_for_decay: q < p");
  if (d.q != q)
    throw std::invalid_argument("settle_index_for_decay: model q mismatch");
  if (k_hi < 2)
    throw std::invalid_argument("settle_index_for_decay: k_hi >= 2");
  // prefix p-sum of the model coordinates, grown incrementally
  double prefix =
      std::pow(d.coordinate(1), p) + std::pow(d.coordinate(2), p);
  long last_fail = 1;
  for (long k = 2; k <= k_hi; ++k) {
    const double wk = std::pow(1.0 + s.delta(k), p);
    const double wk1 = std::pow(1.0 + s.delta(k + 1), p);
    const double rhs = (wk - wk1) / wk1 * prefix;
    const double lhs = std::pow(d.coordinate(k + 1), p);
    if (!(lhs <= rhs)) last_fail = k;
    prefix += lhs;
  }
  if (last_fail == k_hi)
    throw NotReached("envelope step inequality still failing at k_hi");
  return std::max<long>(2, last_fail + 1);
}

}  // namespace lfcnorm
