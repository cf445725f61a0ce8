// Acceptance suite: one line per criterion, nonzero exit when any fails.
// Criteria run at their full prescribed sample counts and tolerances; the
// two heavyweight ones also report wall time against their targets.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "lfcnorm/combinatorics.hpp"
#include "lfcnorm/normlab.hpp"
#include "lfcnorm/params.hpp"
#include "lfcnorm/smoothcore.hpp"
#include "lfcnorm/vectors.hpp"
#include "lfcnorm/verify.hpp"

using namespace lfcnorm;

namespace {

int failures = 0;

void report(int id, const std::string& name, bool passed,
            const std::string& detail = "") {
  std::printf("[%s] criterion %2d: %s%s%s\n", passed ? "PASS" : "FAIL", id,
              name.c_str(), detail.empty() ? "" : " — ", detail.c_str());
  if (!passed) ++failures;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
      .count();
}

Config base_config(double p) {
  Config cfg;
  cfg.p = p;
  cfg.q = p / 2.0;
  cfg.epsilon = 0.1;
  return cfg;
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

// 1. approximation sandwich across the p grid
void criterion_sandwich() {
  const auto t0 = std::chrono::steady_clock::now();
  std::mt19937_64 rng(101);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  int bad = 0, total = 0;
  std::string detail;
  for (double p : {1.0, 1.5, 2.0, 2.5, 3.0}) {
    const Config cfg = base_config(p);
    const ParamSchedule s = build_schedule(cfg);
    NormEvaluator ev(s, p, cfg.smoothness_order, cfg.bisect_tol);
    const double slack = cfg.bisect_tol + 1e-9;
    for (int c = 0; c < 200; ++c) {
      const SparseVector x =
          random_vector(rng, 1, 10).scaled(0.2 + 4.0 * unit(rng));
      const double pn = p_norm(x, p);
      const double f = ev.final_norm(x);
      ++total;
      if (!(f >= pn * (1.0 - slack) && f <= 1.1 * pn * (1.0 + slack))) {
        ++bad;
        if (detail.empty())
          detail = "p=" + fmt(p) + " pn=" + fmt(pn) + " f=" + fmt(f);
      }
    }
  }
  const double dt = seconds_since(t0);
  report(1, "approximation sandwich ||x||_p <= f(x) <= 1.1||x||_p",
         bad == 0 && dt < 60.0,
         std::to_string(bad) + "/" + std::to_string(total) + " violations, " +
             fmt(dt) + "s (target <60s)" +
             (detail.empty() ? "" : "; " + detail));
}

// 2. exact vanishing strictly inside the small aux ball
void criterion_vanishing() {
  std::mt19937_64 rng(102);
  const Config cfg = base_config(2.0);
  const ParamSchedule s = build_schedule(cfg);
  NormEvaluator ev(s, 2.0, cfg.smoothness_order, cfg.bisect_tol);
  const double th1 = s.theta(1);
  const double target = 0.999 * (1.0 - th1) / (1.0 + th1);
  int bad = 0;
  for (int c = 0; c < 200; ++c) {
    const SparseVector x =
        scale_to_aux(random_vector(rng, 1, 10), s, 2.0, target);
    if (ev.bump_sum(x) != 0.0) ++bad;
  }
  report(2, "bump sum vanishes exactly at nu = 0.999(1-t1)/(1+t1)", bad == 0,
         std::to_string(bad) + "/200 nonzero");
}

// 3. oracle equivalence, bitwise
void criterion_oracle() {
  const auto t0 = std::chrono::steady_clock::now();
  std::mt19937_64 rng(103);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const Config cfg = base_config(2.0);
  const ParamSchedule s = build_schedule(cfg);
  NormEvaluator ev(s, 2.0, cfg.smoothness_order, cfg.bisect_tol);
  int bad = 0;
  for (int c = 0; c < 500; ++c) {
    const double target =
        unit(rng) < 0.5 ? 0.99 + 0.0099 * unit(rng) : 0.2 + 0.79 * unit(rng);
    const SparseVector x =
        scale_to_aux(random_vector(rng, 1, 10), s, 2.0, target);
    if (aux_norm(x, s, 2.0) != aux_norm_exhaustive(x, s, 2.0)) ++bad;
    if (ev.bump_sum(x) != ev.bump_sum_exhaustive(x)) ++bad;
    const LocalityWitness fast = ev.active_sets(x);
    const LocalityWitness slow = ev.active_sets_exhaustive(x);
    if (!(fast.settle_index == slow.settle_index && fast.radius == slow.radius &&
          fast.sets == slow.sets))
      ++bad;
  }
  const double dt = seconds_since(t0);
  report(3, "oracle equivalence (aux norm, bump sum, active sets)",
         bad == 0 && dt < 120.0,
         std::to_string(bad) + " mismatches over 500 vectors, " + fmt(dt) +
             "s (target <120s)");
}

// 4. uniform bound off the witness family in the whole neighbourhood
void criterion_neighborhood() {
  std::mt19937_64 rng(104);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const Config cfg = base_config(2.0);
  const ParamSchedule s = build_schedule(cfg);
  NormEvaluator ev(s, 2.0, cfg.smoothness_order, cfg.bisect_tol);
  const double th1 = s.theta(1);
  int bad = 0;
  for (int c = 0; c < 100; ++c) {
    const double target = (0.2 + 0.8 * unit(rng)) * (1.0 - 3.0 * th1);
    const SparseVector x =
        scale_to_aux(random_vector(rng, 1, 6), s, 2.0, target);
    if (!ev.neighborhood_bound_verify(x, 20, rng)) ++bad;
  }
  report(4, "uniform bound off the witness family (100 x, 20 samples)",
         bad == 0, std::to_string(bad) + " failing points");
}

// 5. bitwise locality of the bump sum
void criterion_locality() {
  std::mt19937_64 rng(105);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const Config cfg = base_config(2.0);
  const ParamSchedule s = build_schedule(cfg);
  NormEvaluator ev(s, 2.0, cfg.smoothness_order, cfg.bisect_tol);
  const double th1 = s.theta(1);
  int bad = 0;
  for (int c = 0; c < 100; ++c) {
    const double target = (0.2 + 0.8 * unit(rng)) * (1.0 - 3.0 * th1);
    const SparseVector x =
        scale_to_aux(random_vector(rng, 1, 6), s, 2.0, target);
    if (!ev.locality_verify(x, 20, rng)) ++bad;
  }
  report(5, "bump sum bitwise-blind outside the witness union", bad == 0,
         std::to_string(bad) + " failing points");
}

// 6. norm axioms at bisection accuracy
void criterion_axioms() {
  std::mt19937_64 rng(106);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const Config cfg = base_config(1.5);
  const ParamSchedule s = build_schedule(cfg);
  NormEvaluator ev(s, 1.5, cfg.smoothness_order, cfg.bisect_tol);
  int bad_h = 0, bad_t = 0;
  for (int c = 0; c < 200; ++c) {
    const SparseVector x =
        random_vector(rng, 1, 8).scaled(0.25 + 3.0 * unit(rng));
    const double alpha = (unit(rng) < 0.5 ? -1.0 : 1.0) * (0.3 + 3.0 * unit(rng));
    const double f = ev.final_norm(x);
    const double fa = ev.final_norm(x.scaled(alpha));
    if (!(std::abs(fa - std::abs(alpha) * f) <=
          2.0 * cfg.bisect_tol * std::max(fa, std::abs(alpha) * f)))
      ++bad_h;

    // same-support partner for the triangle inequality
    std::vector<std::pair<std::string, double>> entries;
    for (const auto& [label, v] : x.entries()) {
      (void)v;
      entries.emplace_back(label,
                           (unit(rng) < 0.5 ? -1.0 : 1.0) * (0.05 + unit(rng)));
    }
    const SparseVector y(entries);
    const double fy = ev.final_norm(y);
    const double fxy = ev.final_norm(x.plus(y));
    if (!(fxy <= (f + fy) * (1.0 + 4.0 * cfg.bisect_tol))) ++bad_t;
  }
  report(6, "norm axioms (homogeneity 2tol, triangle 4tol, 200 each)",
         bad_h == 0 && bad_t == 0,
         std::to_string(bad_h) + " homogeneity, " + std::to_string(bad_t) +
             " triangle violations");
}

// 7. richardson-consistent gradients plus scaling invariance
void criterion_gradient() {
  std::mt19937_64 rng(107);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  int bad = 0;
  double worst_r = 0.0, worst_s = 0.0;
  for (double p : {1.5, 2.5}) {
    const Config cfg = base_config(p);
    const ParamSchedule s = build_schedule(cfg);
    NormEvaluator ev(s, p, cfg.smoothness_order, cfg.bisect_tol);
    for (int c = 0; c < 50; ++c) {
      const SparseVector x =
          random_vector(rng, 2, 5).scaled(0.4 + 2.0 * unit(rng));
      const GradientCheckReport rep = ev.gradient_check(x);
      worst_r = std::max(worst_r, rep.max_richardson_rel);
      worst_s = std::max(worst_s, rep.max_scaling_rel);
      if (!rep.ok) ++bad;
    }
  }
  report(7, "gradient checks at p in {1.5, 2.5} (50 points each)", bad == 0,
         std::to_string(bad) + " failing points, worst richardson " +
             fmt(worst_r) + ", worst scaling " + fmt(worst_s));
}

// 8. envelope machinery: settle index, step scan, decay model
void criterion_envelope() {
  std::mt19937_64 rng(108);
  const Config cfg = base_config(2.0);
  const ParamSchedule s = build_schedule(cfg);
  int bad = 0;
  for (int c = 0; c < 500; ++c) {
    const double p = 1.0 + 0.5 * static_cast<double>(rng() % 5);
    const SparseVector x = random_vector(rng, 1, 10);
    const long n = static_cast<long>(x.support_size());

    // independent envelope: own sort, own prefix sums, own formula
    std::vector<std::pair<double, std::string>> order;
    for (const auto& [label, v] : x.entries())
      order.emplace_back(std::abs(v), label);
    std::sort(order.begin(), order.end(), [](const auto& a, const auto& b) {
      if (a.first != b.first) return a.first > b.first;
      return a.second < b.second;
    });
    std::vector<double> env(static_cast<std::size_t>(n) + 1, 0.0);
    double mass = 0.0;
    for (long k = 1; k <= n; ++k) {
      mass += std::pow(order[static_cast<std::size_t>(k) - 1].first, p);
      env[static_cast<std::size_t>(k)] =
          (1.0 + s.delta(k)) * std::pow(mass, 1.0 / p);
    }
    long brute = 1;
    for (long k = 1; k < n; ++k)
      if (env[static_cast<std::size_t>(k) + 1] >
          env[static_cast<std::size_t>(k)])
        brute = k + 1;
    if (envelope_settle_index(x, s, p) != brute) ++bad;
    for (const auto& step : envelope_decrease_scan(x, s, p))
      if (step.holds != (env[static_cast<std::size_t>(step.k) + 1] <=
                         env[static_cast<std::size_t>(step.k)]))
        ++bad;
  }
  long decay_index = -1;
  try {
    decay_index =
        settle_index_for_decay(DecayModel(1.0, 1.1, 1.0), 2.0, 1.0, s, 100000);
  } catch (const NotReached&) {
  }
  report(8, "envelope settle index, step scan, power-law decay model",
         bad == 0 && decay_index > 0,
         std::to_string(bad) + " mismatches; decay settle index " +
             std::to_string(decay_index));
}

// 9. first-order gap asymptote at k = 1e6
void criterion_asymptote() {
  const Config cfg = base_config(2.0);
  const ParamSchedule s = build_schedule(cfg);
  const long k = 1000000;
  const double lk = std::log(static_cast<double>(k));
  const double c = s.delta(1) * std::log(3.0);
  int bad = 0;
  std::string detail;
  for (double p : {1.0, 1.5, 2.0, 3.0}) {
    const double ratio = delta_power_gap(s, p, k) /
                         (p * c / (static_cast<double>(k) * lk * lk));
    if (!(ratio >= 0.95 && ratio <= 1.05)) ++bad;
    detail += (detail.empty() ? "" : ", ") + fmt(ratio);
  }
  report(9, "power-gap asymptote within 5% at k=1e6", bad == 0,
         "ratios " + detail);
}

// 10. sunflower extraction
void criterion_sunflower() {
  std::mt19937_64 rng(110);
  int bad = 0;
  for (int c = 0; c < 200; ++c) {
    const std::size_t k = 1 + rng() % 3;
    const std::size_t r = 2 + rng() % 3;
    const std::size_t count =
        static_cast<std::size_t>(erdos_rado_bound(k, r)) + 1 + rng() % 15;
    // universe large enough to host `count` distinct k-sets
    const int universe = k == 3 ? 14 : (k == 2 ? 16 : 40);
    std::set<std::vector<std::string>> seen;
    while (seen.size() < count) {
      std::set<int> pick;
      while (pick.size() < k)
        pick.insert(static_cast<int>(rng() % universe));
      std::vector<std::string> ls;
      for (int i : pick) ls.push_back("u" + std::to_string(i));
      std::sort(ls.begin(), ls.end());
      seen.insert(ls);
    }
    const SetFamily f(
        std::vector<std::vector<std::string>>(seen.begin(), seen.end()));
    const auto sf = find_sunflower(f, r);
    bool ok = sf.has_value() && sf->petal_indices.size() >= r &&
              sf->root.size() <= k - 1;
    if (ok) {
      for (std::size_t i = 0; ok && i < sf->petal_indices.size(); ++i)
        for (std::size_t j = i + 1; ok && j < sf->petal_indices.size(); ++j) {
          std::vector<std::string> inter;
          const auto& a = f.sets()[sf->petal_indices[i]];
          const auto& b = f.sets()[sf->petal_indices[j]];
          std::set_intersection(a.begin(), a.end(), b.begin(), b.end(),
                                std::back_inserter(inter));
          ok = inter == sf->root;
        }
    }
    if (!ok) ++bad;
  }

  // small-family oracle agreement via an r-subset scan
  int bad_small = 0;
  for (int c = 0; c < 50; ++c) {
    const std::size_t k = 1 + rng() % 3;
    const std::size_t r = 2 + rng() % 3;
    const int universe = 4 + static_cast<int>(rng() % 5);
    std::set<std::vector<std::string>> seen;
    const std::size_t want = 2 + rng() % 17;
    for (int tries = 0; tries < 400 && seen.size() < want; ++tries) {
      std::set<int> pick;
      while (pick.size() < k)
        pick.insert(static_cast<int>(rng() % universe));
      std::vector<std::string> ls;
      for (int i : pick) ls.push_back("u" + std::to_string(i));
      std::sort(ls.begin(), ls.end());
      seen.insert(ls);
    }
    if (seen.size() < 2) continue;
    const SetFamily f(
        std::vector<std::vector<std::string>>(seen.begin(), seen.end()));
    const auto& sets = f.sets();
    auto inter = [](const std::vector<std::string>& a,
                    const std::vector<std::string>& b) {
      std::vector<std::string> out;
      std::set_intersection(a.begin(), a.end(), b.begin(), b.end(),
                            std::back_inserter(out));
      return out;
    };
    std::vector<std::size_t> pick;
    auto rec = [&](auto&& self, std::size_t next) -> bool {
      if (pick.size() == r) {
        const auto root = inter(sets[pick[0]], sets[pick[1]]);
        for (std::size_t i = 0; i < r; ++i)
          for (std::size_t j = i + 1; j < r; ++j)
            if (inter(sets[pick[i]], sets[pick[j]]) != root) return false;
        return true;
      }
      for (std::size_t m = next; m < sets.size(); ++m) {
        pick.push_back(m);
        if (self(self, m + 1)) return true;
        pick.pop_back();
      }
      return false;
    };
    const bool exists = rec(rec, 0);
    if (find_sunflower(f, r).has_value() != exists) ++bad_small;
  }
  report(10, "sunflower extraction above the bound + small-family oracle",
         bad == 0 && bad_small == 0,
         std::to_string(bad) + " large, " + std::to_string(bad_small) +
             " small failures");
}

// 11. finite-dimensional sandwich on 1000 sphere directions per pair
void criterion_finite_sandwich() {
  std::mt19937_64 rng(111);
  std::normal_distribution<double> gauss(0.0, 1.0);
  int bad = 0;
  long total = 0;
  for (double p : {1.0, 1.5, 2.0, 2.5, 3.0}) {
    const Config cfg = base_config(p);
    const ParamSchedule s = build_schedule(cfg);
    for (std::size_t k = 1; k <= 8; ++k) {
      const double theta_k = s.theta(static_cast<long>(k));
      const SmoothFiniteNorm nrm = SmoothFiniteNorm::calibrated(k, theta_k, p);
      const double slack = 2.0 * cfg.bisect_tol;
      for (int d = 0; d < 1000; ++d) {
        std::vector<double> v(k);
        double mass = 0.0;
        for (auto& t : v) {
          t = gauss(rng);
          if (t == 0.0) t = 0.4;
          mass += std::pow(std::abs(t), p);
        }
        const double norm = std::pow(mass, 1.0 / p);
        for (auto& t : v) t /= norm;
        const double val = nrm.value(v, cfg.bisect_tol / 4.0);
        ++total;
        if (!(val >= 1.0 / (1.0 + theta_k) * (1.0 - slack) &&
              val <= 1.0 + slack))
          ++bad;
      }
    }
  }
  report(11, "finite-dim sandwich on p-sphere directions", bad == 0,
         std::to_string(bad) + "/" + std::to_string(total) + " violations");
}

}  // namespace

int main() {
  const auto t0 = std::chrono::steady_clock::now();
  criterion_sandwich();
  criterion_vanishing();
  criterion_oracle();
  criterion_neighborhood();
  criterion_locality();
  criterion_axioms();
  criterion_gradient();
  criterion_envelope();
  criterion_asymptote();
  criterion_sunflower();
  criterion_finite_sandwich();
  std::printf("acceptance: %s (%d failing) in %.1fs\n",
              failures == 0 ? "ALL CRITERIA PASS" : "FAILURES PRESENT",
              failures, seconds_since(t0));
  return failures == 0 ? 0 : 1;
}
