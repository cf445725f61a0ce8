#include "lfcnorm/normlab.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace lfcnorm {

namespace {

constexpr double kDomainSlack = 1e-9;
// Inflation applied to branch-and-bound completion bounds so that float
// drift between a prefix-difference and a left-fold sum can never prune a
// subtree holding a contributing subset.
constexpr double kPruneMargin = 1e-12;

std::vector<std::string> sorted_labels(std::vector<std::string> v) {
  std::sort(v.begin(), v.end());
  return v;
}

}  // namespace

// Sorted profile magnitudes rescaled by a ray factor; rank order is
// scale-invariant, so the view reuses the profile's ordering.
struct NormEvaluator::ScaledView {
  ScaledView(const SortedProfile& pr, double scale) : p(pr.exponent()) {
    const std::size_t n = pr.size();
    mags.reserve(n);
    powers.reserve(n);
    prefix.reserve(n + 1);
    prefix.push_back(0.0);
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      mags.push_back(pr.magnitudes()[i] * scale);
      powers.push_back(std::pow(mags.back(), p));
      acc += powers.back();
      prefix.push_back(acc);
    }
  }

  std::size_t size() const { return mags.size(); }

  double aux_norm(const ParamSchedule& s) const {
    double best = 0.0;
    for (std::size_t k = 1; k <= size(); ++k)
      best = std::max(best, aux_weight(s, static_cast<long>(k)) *
                                std::pow(prefix[k], 1.0 / p));
    return best;
  }

  double p;
  std::vector<double> mags;
  std::vector<double> powers;
  std::vector<double> prefix;
};

NormEvaluator::NormEvaluator(const ParamSchedule& s, double p, int bump_order,
                             double bisect_tol)
    : sched_(s), p_(p), order_(bump_order), tol_cfg_(bisect_tol) {
  if (!(p >= 1.0)) throw std::invalid_argument("evaluator: p >= 1");
  if (bump_order < 2) throw std::invalid_argument("evaluator: order >= 2");
  if (!(bisect_tol > 0.0) || bisect_tol > 1e-6)
    throw std::invalid_argument("evaluator: bisect_tol in (0, 1e-6]");
  // Run bisections a factor below the configured bound; the configured
  // value stays an upper bound on the delivered error.
  tol_int_ = bisect_tol / 4.0;
}

const SmoothFiniteNorm& NormEvaluator::smooth_norm(std::size_t k) const {
  if (k < 1) throw std::invalid_argument("smooth_norm: k >= 1");
  std::lock_guard<std::mutex> lock(bank_mu_);
  if (norms_.size() <= k) norms_.resize(k + 1);
  if (!norms_[k])
    norms_[k] = std::make_unique<SmoothFiniteNorm>(SmoothFiniteNorm::calibrated(
        k, sched_.theta(static_cast<long>(k)), p_));
  return *norms_[k];
}

const BumpFunction& NormEvaluator::bump(std::size_t k) const {
  std::lock_guard<std::mutex> lock(bank_mu_);
  if (bumps_.size() <= k) bumps_.resize(k + 1);
  if (!bumps_[k])
    bumps_[k] = std::make_unique<BumpFunction>(
        sched_.theta(static_cast<long>(k)), order_);
  return *bumps_[k];
}

double NormEvaluator::smooth_value(std::size_t k,
                                   std::span<const double> v) const {
  return smooth_norm(k).value(v, tol_int_);
}

// One bump-sum summand: zero unless the argument clears the bump edge.
// The cheap gate uses ||Ax||_{s,A} <= ||Ax||_p to skip the gauge; both
// enumeration routes call this single function so their sums agree
// bitwise. When noise is supplied, it accumulates an interval bound on
// the summand's sensitivity to the gauge tolerance.
double NormEvaluator::bump_summand(std::size_t k, double psum,
                                   std::span<const double> mags,
                                   double* noise) const {
  const long kl = static_cast<long>(k);
  const double factor = aux_weight(sched_, kl) * (1.0 + sched_.theta(kl));
  const BumpFunction& rho = bump(k);
  const double edge = rho.lower_edge();
  const double upper = factor * std::pow(psum, 1.0 / p_);
  if (!(upper > edge)) return 0.0;
  const double arg = factor * smooth_value(k, mags);
  if (!(arg > edge)) {
    if (noise) *noise += rho(arg * (1.0 + 4.0 * tol_int_));
    return 0.0;
  }
  if (noise)
    *noise += rho(arg * (1.0 + 4.0 * tol_int_)) -
              rho(arg * (1.0 - 4.0 * tol_int_));
  return rho(arg);
}

NormEvaluator::BumpSumResult NormEvaluator::bump_sum_core(
    const ScaledView& view, bool exhaustive) const {
  BumpSumResult res;
  const std::size_t n = view.size();
  if (n == 0) return res;
  const double nu = view.aux_norm(sched_);
  if (!(nu <= 1.0 + kDomainSlack))
    throw DomainExceeded("bump_sum: aux norm beyond 1 + 1e-9");

  std::vector<double> path;
  path.reserve(n);

  // Subtree bound: no completion of the current subset to any size can
  // clear its bump edge. Completions take the next consecutive ranks,
  // the largest remaining magnitudes.
  auto prunable = [&](std::size_t rank, double psum,
                      std::size_t count) -> bool {
    const std::size_t rem = n - rank - 1;
    for (std::size_t k = count + 1; k <= count + rem; ++k) {
      const long kl = static_cast<long>(k);
      const double factor =
          aux_weight(sched_, kl) * (1.0 + sched_.theta(kl));
      const double bound_sum =
          psum + (view.prefix[rank + 1 + (k - count)] - view.prefix[rank + 1]);
      const double bound =
          factor * std::pow(bound_sum, 1.0 / p_) * (1.0 + kPruneMargin);
      if (bound > bump(k).lower_edge()) return false;
    }
    return true;
  };

  auto rec = [&](auto&& self, std::size_t first, double psum,
                 std::size_t count) -> void {
    for (std::size_t r = first; r < n; ++r) {
      const double psum2 = psum + view.powers[r];
      path.push_back(view.mags[r]);
      const double s = bump_summand(count + 1, psum2, path, &res.noise);
      if (s != 0.0) res.sum += s;
      if (r + 1 < n && (exhaustive || !prunable(r, psum2, count + 1)))
        self(self, r + 1, psum2, count + 1);
      path.pop_back();
    }
  };
  rec(rec, 0, 0.0, 0);
  return res;
}

double NormEvaluator::bump_sum(const SparseVector& x) const {
  const SortedProfile pr(x, p_);
  return bump_sum_core(ScaledView(pr, 1.0), /*exhaustive=*/false).sum;
}

double NormEvaluator::bump_sum_exhaustive(const SparseVector& x) const {
  if (x.support_size() > 14)
    throw SupportTooLarge("bump_sum_exhaustive: support > 14");
  const SortedProfile pr(x, p_);
  return bump_sum_core(ScaledView(pr, 1.0), /*exhaustive=*/true).sum;
}

bool NormEvaluator::set_violates(std::size_t k, double psum) const {
  const long kl = static_cast<long>(k);
  return aux_weight(sched_, kl) * std::pow(psum, 1.0 / p_) >
         1.0 - 2.0 * sched_.theta(kl);
}

LocalityWitness NormEvaluator::active_sets_impl(const SparseVector& x,
                                                bool exhaustive) const {
  const SortedProfile pr(x, p_);
  if (!(aux_norm(pr, sched_) <= 1.0))
    throw NuTooLarge("active_sets: aux norm exceeds 1");
  const long k0 = envelope_settle_index(pr, sched_);
  const std::size_t n = pr.size();

  LocalityWitness w;
  w.settle_index = k0;
  w.radius = sched_.theta(k0 + 1);

  auto prunable = [&](std::size_t rank, double psum,
                      std::size_t count) -> bool {
    const std::size_t rem = n - rank - 1;
    const std::size_t top =
        std::min<std::size_t>(static_cast<std::size_t>(k0), count + rem);
    for (std::size_t k = count + 1; k <= top; ++k) {
      const long kl = static_cast<long>(k);
      const double bound_sum =
          psum + (pr.prefix(rank + 1 + (k - count)) - pr.prefix(rank + 1));
      const double bound = aux_weight(sched_, kl) *
                           std::pow(bound_sum, 1.0 / p_) *
                           (1.0 + kPruneMargin);
      if (bound > 1.0 - 2.0 * sched_.theta(kl)) return false;
    }
    return true;
  };

  std::vector<std::string> path;
  auto rec = [&](auto&& self, std::size_t first, double psum,
                 std::size_t count) -> void {
    for (std::size_t r = first; r < n; ++r) {
      const double psum2 = psum + pr.powers()[r];
      path.push_back(pr.labels()[r]);
      if (set_violates(count + 1, psum2))
        w.sets.push_back(sorted_labels(path));
      if (r + 1 < n && count + 1 < static_cast<std::size_t>(k0) &&
          (exhaustive || !prunable(r, psum2, count + 1)))
        self(self, r + 1, psum2, count + 1);
      path.pop_back();
    }
  };
  rec(rec, 0, 0.0, 0);
  return w;
}

LocalityWitness NormEvaluator::active_sets(const SparseVector& x) const {
  return active_sets_impl(x, /*exhaustive=*/false);
}

LocalityWitness NormEvaluator::active_sets_exhaustive(
    const SparseVector& x) const {
  if (x.support_size() > 20)
    throw SupportTooLarge("active_sets_exhaustive: support > 20");
  return active_sets_impl(x, /*exhaustive=*/true);
}

FinalNormInfo NormEvaluator::final_norm_info(const SparseVector& x) const {
  FinalNormInfo info;
  if (x.empty()) return info;
  const SortedProfile pr(x, p_);
  const double nu = aux_norm(pr, sched_);
  const double th1 = sched_.theta(1);
  const double level = 1.0 - th1;

  struct Probe {
    double lambda, value, noise;
  };
  std::vector<Probe> probes;
  auto sum_at = [&](double lambda) {
    ++info.probe_count;
    const BumpSumResult r = bump_sum_core(ScaledView(pr, 1.0 / lambda), false);
    probes.push_back({lambda, r.sum, r.noise});
    return r.sum;
  };

  // Bracket from the two level-set inclusions: strictly inside the aux
  // ball the sum exceeds the level, and once the aux norm drops to
  // (1-theta_1)/(1+theta_1) the sum vanishes.
  double lo = nu * (1.0 - 1e-12);
  double hi = nu * ((1.0 + th1) / (1.0 - th1));
  if (!(sum_at(hi) <= level)) {
    hi *= 1.0 + 1e-9;
    if (!(sum_at(hi) <= level))
      throw std::logic_error("final_norm: upper bracket invalid");
  }
  if (!(sum_at(lo) > level)) {
    // the level crossing sits within one part in 1e12 of the aux norm
    info.lower_bracket_hit = true;
    info.value = lo;
    return info;
  }
  while (hi - lo > tol_int_ * hi) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    ++info.outer_iters;
    if (sum_at(mid) <= level)
      hi = mid;
    else
      lo = mid;
  }
  info.value = 0.5 * (lo + hi);

  std::sort(probes.begin(), probes.end(),
            [](const Probe& a, const Probe& b) { return a.lambda < b.lambda; });
  for (std::size_t i = 1; i < probes.size(); ++i) {
    const double slack = probes[i].noise + probes[i - 1].noise +
                         1e-12 * (1.0 + probes[i - 1].value);
    if (probes[i].value > probes[i - 1].value + slack)
      info.monotone_ok = false;
  }
  return info;
}

double NormEvaluator::final_norm(const SparseVector& x) const {
  return final_norm_info(x).value;
}

SparseVector NormEvaluator::draw_in_ball(const SparseVector& x, double radius,
                                         std::mt19937_64& rng) const {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_real_distribution<double> mag(0.1, 1.0);
  std::vector<std::pair<std::string, double>> entries;
  for (const auto& [label, v] : x.entries()) {
    (void)v;
    if (unit(rng) < 0.7)
      entries.emplace_back(label, (unit(rng) < 0.5 ? -1.0 : 1.0) * mag(rng));
  }
  const int extra = static_cast<int>(rng() % 3);
  for (int i = 0; i < extra; ++i) {
    std::string label = "~z" + std::to_string(rng() % 1000);
    while (x.entries().count(label) > 0) label += "'";
    bool dup = false;
    for (const auto& e : entries) dup = dup || e.first == label;
    if (!dup)
      entries.emplace_back(label, (unit(rng) < 0.5 ? -1.0 : 1.0) * mag(rng));
  }
  if (entries.empty()) return SparseVector();
  SparseVector d(entries);
  const double dn = aux_norm(d, sched_, p_);
  const double target = radius * (0.05 + 0.90 * unit(rng));
  return d.scaled(target / dn);
}

bool NormEvaluator::neighborhood_bound_verify(const SparseVector& x,
                                              int samples,
                                              std::mt19937_64& rng) const {
  const LocalityWitness w = active_sets(x);
  std::set<std::vector<std::string>> family(w.sets.begin(), w.sets.end());
  const std::size_t cap = x.support_size() + 2;

  for (int s = 0; s < samples; ++s) {
    const SparseVector d = draw_in_ball(x, w.radius, rng);
    const SparseVector y = x.plus(d);

    std::vector<std::string> ground;
    for (const auto& [label, v] : x.entries()) {
      (void)v;
      ground.push_back(label);
    }
    for (const auto& [label, v] : y.entries()) {
      (void)v;
      if (x.entries().count(label) == 0) ground.push_back(label);
    }
    std::sort(ground.begin(), ground.end());

    const std::size_t g = ground.size();
    std::vector<std::string> chosen;
    std::vector<double> vals;
    bool ok = true;
    auto rec = [&](auto&& self, std::size_t first) -> void {
      if (!ok) return;
      if (!chosen.empty() && family.count(chosen) == 0) {
        const std::size_t k = chosen.size();
        const double value = smooth_value(k, vals);
        if (!(aux_weight(sched_, static_cast<long>(k)) * value <=
              1.0 - sched_.theta(static_cast<long>(k)))) {
          ok = false;
          return;
        }
      }
      if (chosen.size() >= cap) return;
      for (std::size_t r = first; r < g; ++r) {
        chosen.push_back(ground[r]);
        vals.push_back(std::abs(y.value(ground[r])));
        self(self, r + 1);
        chosen.pop_back();
        vals.pop_back();
        if (!ok) return;
      }
    };
    rec(rec, 0);
    if (!ok) return false;
  }
  return true;
}

bool NormEvaluator::locality_verify(const SparseVector& x, int samples,
                                    std::mt19937_64& rng) const {
  const LocalityWitness w = active_sets(x);
  std::set<std::string> witness_union;
  for (const auto& set : w.sets) witness_union.insert(set.begin(), set.end());
  const double nu_x = aux_norm(x, sched_, p_);
  // keep every sample inside the bump-sum domain as well as the ball
  const double radius =
      std::min(w.radius, std::max(0.0, (1.0 - nu_x) * 0.999));
  if (radius <= 0.0) return true;  // no room to perturb at the sphere
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_real_distribution<double> mag(0.1, 1.0);

  for (int s = 0; s < samples; ++s) {
    const SparseVector d = draw_in_ball(x, radius, rng);
    const SparseVector y = x.plus(d);
    const double full = bump_sum(y);

    // keep the on-witness part of the perturbation, redraw the rest
    std::vector<std::pair<std::string, double>> kept, outside;
    for (const auto& [label, v] : d.entries())
      if (witness_union.count(label) > 0) kept.emplace_back(label, v);
    const SparseVector d_kept(kept);
    const double headroom = radius - aux_norm(d_kept, sched_, p_);

    for (const auto& [label, v] : d.entries()) {
      (void)v;
      if (witness_union.count(label) == 0)
        outside.emplace_back(label,
                             (unit(rng) < 0.5 ? -1.0 : 1.0) * mag(rng));
    }
    std::string fresh = "~w" + std::to_string(rng() % 1000);
    while (x.entries().count(fresh) > 0 || d.entries().count(fresh) > 0)
      fresh += "'";
    outside.emplace_back(fresh, (unit(rng) < 0.5 ? -1.0 : 1.0) * mag(rng));

    SparseVector d_out(outside);
    const double out_norm = aux_norm(d_out, sched_, p_);
    d_out = d_out.scaled(headroom * (0.05 + 0.85 * unit(rng)) / out_norm);

    const SparseVector y2 = x.plus(d_kept).plus(d_out);
    const double rewritten = bump_sum(y2);
    if (full != rewritten) return false;
  }
  return true;
}

GradientCheckReport NormEvaluator::gradient_check(const SparseVector& x) const {
  if (x.empty())
    throw std::invalid_argument("gradient_check: x must be nonzero");
  // tighter bisections: finite differences divide out the step, which
  // amplifies function noise a thousandfold at the smallest steps
  NormEvaluator tight(sched_, p_, order_, std::min(tol_cfg_, 4e-12));
  auto f = [&tight](const SparseVector& v) { return tight.final_norm(v); };

  GradientCheckReport rep;
  const double f0 = f(x);
  const std::size_t n = x.support_size();
  double mu_min = tight.smooth_norm(1).phi().mu();
  for (std::size_t k = 2; k <= n; ++k)
    mu_min = std::min(mu_min, tight.smooth_norm(k).phi().mu());
  const double floor = mu_min * f0;

  std::vector<double> grad_h, grad_h2, grad_2x;
  const SparseVector x2 = x.scaled(2.0);
  for (const auto& [label, v] : x.entries()) {
    const double h = 1e-5 * std::max(std::abs(v), floor);
    auto shift = [&](const SparseVector& base, double step) {
      return base.plus(SparseVector({{label, step}}));
    };
    const double gh = (f(shift(x, h)) - f(shift(x, -h))) / (2.0 * h);
    const double gh2 = (f(shift(x, h / 2)) - f(shift(x, -h / 2))) / h;
    const double g2 = (f(shift(x2, h)) - f(shift(x2, -h))) / (2.0 * h);
    rep.labels.push_back(label);
    grad_h.push_back(gh);
    grad_h2.push_back(gh2);
    grad_2x.push_back(g2);
  }

  double gmax = 0.0;
  for (double g : grad_h2) gmax = std::max(gmax, std::abs(g));
  for (std::size_t i = 0; i < grad_h.size(); ++i) {
    const double scale = std::max(
        {std::abs(grad_h[i]), std::abs(grad_h2[i]), 0.01 * gmax, 1e-300});
    rep.max_richardson_rel = std::max(
        rep.max_richardson_rel, std::abs(grad_h[i] - grad_h2[i]) / scale);
    rep.max_scaling_rel = std::max(
        rep.max_scaling_rel, std::abs(grad_2x[i] - grad_h2[i]) / scale);
  }
  rep.grad = grad_h2;
  rep.ok = rep.max_richardson_rel <= 1e-4 && rep.max_scaling_rel <= 1e-4;
  return rep;
}

NormReport NormEvaluator::report(const SparseVector& x) const {
  NormReport rep;
  rep.schedule_digest = sched_.digest();
  rep.p_norm = p_norm(x, p_);
  rep.nu = aux_norm(x, sched_, p_);
  if (rep.nu <= 1.0 + kDomainSlack) rep.psi = bump_sum(x);
  const FinalNormInfo info = final_norm_info(x);
  rep.final_norm = info.value;
  rep.bisect_iters = info.outer_iters;
  if (!x.empty()) {
    const SparseVector unit =
        rep.nu <= 1.0 ? x : x.scaled((1.0 - 1e-12) / rep.nu);
    rep.active_count = static_cast<long>(active_sets(unit).sets.size());
    for (std::size_t k = 1; k <= x.support_size(); ++k) {
      const SmoothFiniteNorm& nrm = smooth_norm(k);
      rep.calibrations.push_back({k, nrm.phi().mu(), nrm.correction()});
    }
  }
  return rep;
}

LocalityWitness active_sets(const SparseVector& x, const ParamSchedule& s,
                            double p) {
  return NormEvaluator(s, p, 4, 1e-10).active_sets(x);
}

double bump_sum(const SparseVector& x, const ParamSchedule& s, double p,
                int bump_order) {
  return NormEvaluator(s, p, bump_order, 1e-10).bump_sum(x);
}

double final_norm(const SparseVector& x, const ParamSchedule& s,
                  const Config& cfg) {
  return NormEvaluator(s, cfg.p, cfg.smoothness_order, cfg.bisect_tol)
      .final_norm(x);
}

}  // namespace lfcnorm
