#include "lfcnorm/verify.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include "lfcnorm/combinatorics.hpp"
#include "lfcnorm/smoothcore.hpp"

namespace lfcnorm {

namespace {

std::string fmt(double v) {
  std::ostringstream ss;
  ss.precision(17);
  ss << v;
  return ss.str();
}

void record(SuiteResult& res, const std::string& name, bool passed,
            const std::string& detail = "") {
  res.checks.push_back({name, passed, detail});
}

// Counts failures across a sampled property so one summary line lands in
// the suite result instead of hundreds.
struct Tally {
  int total = 0;
  int failed = 0;
  std::string first_failure;

  void add(bool ok, const std::string& detail) {
    ++total;
    if (!ok) {
      ++failed;
      if (first_failure.empty()) first_failure = detail;
    }
  }
  void flush(SuiteResult& res, const std::string& name) const {
    std::ostringstream ss;
    ss << failed << "/" << total << " failures";
    if (!first_failure.empty()) ss << "; first: " << first_failure;
    record(res, name, failed == 0 && total > 0, ss.str());
  }
};

}  // namespace

bool SuiteResult::passed() const {
  if (checks.empty()) return false;
  for (const auto& c : checks)
    if (!c.passed) return false;
  return true;
}

SparseVector random_vector(std::mt19937_64& rng, int n_lo, int n_hi) {
  static const char* kPool[] = {
      "a01", "a02", "a03", "b04", "b05", "b06", "c07", "c08",
      "c09", "d10", "d11", "d12", "e13", "e14", "e15", "f16",
      "f17", "f18", "g19", "g20", "h21", "h22", "h23", "h24"};
  constexpr int kPoolSize = 24;
  const int n =
      n_lo + static_cast<int>(rng() % static_cast<unsigned>(n_hi - n_lo + 1));
  std::vector<int> idx(kPoolSize);
  for (int i = 0; i < kPoolSize; ++i) idx[i] = i;
  std::shuffle(idx.begin(), idx.end(), rng);
  std::uniform_real_distribution<double> mag(0.05, 2.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<std::pair<std::string, double>> entries;
  for (int i = 0; i < n; ++i)
    entries.emplace_back(kPool[idx[static_cast<std::size_t>(i)]],
                         (unit(rng) < 0.5 ? -1.0 : 1.0) * mag(rng));
  return SparseVector(entries);
}

SparseVector scale_to_aux(const SparseVector& x, const ParamSchedule& s,
                          double p, double target) {
  const double nu = aux_norm(x, s, p);
  if (nu == 0.0) throw std::invalid_argument("scale_to_aux: zero vector");
  return x.scaled(target / nu);
}

SuiteResult suite_schedule(const Config& cfg) {
  SuiteResult res{"schedule", {}};
  const ParamSchedule s = build_schedule(cfg);

  const auto violations = validate_schedule(s, cfg.k_max);
  record(res, "validator empty", violations.empty(),
         violations.empty() ? ""
                            : violations.front().inequality + " at k=" +
                                  std::to_string(violations.front().k));

  const double t1 = s.theta(1), d1 = s.delta(1);
  const double budget = (1.0 + t1) / (1.0 - t1) * (1.0 + d1) * (1.0 + d1);
  record(res, "budget bound", budget <= 1.0 + cfg.epsilon, fmt(budget));

  // first-order gap asymptotics at k = 1e6
  Tally gap;
  const double dstar_ln3 = s.delta(1) * std::log(3.0);
  const long k = 1000000;
  const double lk = std::log(static_cast<double>(k));
  for (double p : {1.0, 1.5, 2.0, 3.0}) {
    const double g = delta_power_gap(s, p, k);
    const double asymptote = p * dstar_ln3 / (static_cast<double>(k) * lk * lk);
    const double ratio = g / asymptote;
    gap.add(std::abs(ratio - 1.0) <= 0.05, "p=" + fmt(p) + " ratio=" + fmt(ratio));
  }
  gap.flush(res, "power gap asymptote (5% at k=1e6)");
  return res;
}

SuiteResult suite_oracle(const Config& cfg, int cases) {
  SuiteResult res{"oracle", {}};
  const ParamSchedule s = build_schedule(cfg);
  NormEvaluator ev(s, cfg.p, cfg.smoothness_order, cfg.bisect_tol);
  std::mt19937_64 rng(cfg.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  Tally nu_eq, psi_eq, family_eq;
  for (int c = 0; c < cases; ++c) {
    SparseVector x = random_vector(rng, 1, 10);
    // bias half the cases toward the sphere, where sets activate
    const double target =
        unit(rng) < 0.5 ? 0.99 + 0.0095 * unit(rng) : 0.2 + 0.79 * unit(rng);
    x = scale_to_aux(x, s, cfg.p, target);

    const double fast = aux_norm(x, s, cfg.p);
    const double slow = aux_norm_exhaustive(x, s, cfg.p);
    nu_eq.add(fast == slow, "case " + std::to_string(c) + ": " + fmt(fast) +
                                " vs " + fmt(slow));

    const double psi_fast = ev.bump_sum(x);
    const double psi_slow = ev.bump_sum_exhaustive(x);
    psi_eq.add(psi_fast == psi_slow, "case " + std::to_string(c) + ": " +
                                         fmt(psi_fast) + " vs " +
                                         fmt(psi_slow));

    const LocalityWitness wf = ev.active_sets(x);
    const LocalityWitness ws = ev.active_sets_exhaustive(x);
    const bool same = wf.settle_index == ws.settle_index &&
                      wf.radius == ws.radius && wf.sets == ws.sets;
    family_eq.add(same, "case " + std::to_string(c) + ": family " +
                            std::to_string(wf.sets.size()) + " vs " +
                            std::to_string(ws.sets.size()));
  }
  nu_eq.flush(res, "aux norm equals exhaustive oracle (bitwise)");
  psi_eq.flush(res, "bump sum equals exhaustive oracle (bitwise)");
  family_eq.flush(res, "active sets equal exhaustive enumeration");
  return res;
}

SuiteResult suite_sandwich(const Config& cfg, int cases_per_p) {
  SuiteResult res{"sandwich", {}};
  std::mt19937_64 rng(cfg.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  for (double p : {1.0, 1.5, 2.0, 2.5, 3.0}) {
    Config c = cfg;
    c.p = p;
    c.q = p / 2.0;
    const ParamSchedule s = build_schedule(c);
    NormEvaluator ev(s, p, c.smoothness_order, c.bisect_tol);
    const double slack = c.bisect_tol + 1e-9;
    const double th1 = s.theta(1);

    Tally outer, chain, vanish;
    for (int i = 0; i < cases_per_p; ++i) {
      const SparseVector x =
          random_vector(rng, 1, 10).scaled(0.25 + 3.0 * unit(rng));
      const double pn = p_norm(x, p);
      const double nu = aux_norm(x, s, p);
      const double f = ev.final_norm(x);

      const bool lo = f >= pn * (1.0 - slack);
      const bool hi = f <= (1.0 + c.epsilon) * pn * (1.0 + slack);
      outer.add(lo && hi, "p=" + fmt(p) + " pn=" + fmt(pn) + " f=" + fmt(f));

      const bool c1 = nu <= f * (1.0 + slack);
      const bool c2 = f <= nu * (1.0 + th1) / (1.0 - th1) * (1.0 + slack);
      chain.add(c1 && c2, "p=" + fmt(p) + " nu=" + fmt(nu) + " f=" + fmt(f));

      // bump sum vanishes strictly inside the small aux ball
      const SparseVector z = scale_to_aux(
          x, s, p, 0.999 * (1.0 - th1) / (1.0 + th1) * (0.2 + 0.8 * unit(rng)));
      vanish.add(ev.bump_sum(z) == 0.0, "p=" + fmt(p));
    }
    outer.flush(res, "p-norm sandwich (p=" + fmt(p) + ")");
    chain.flush(res, "aux chain (p=" + fmt(p) + ")");
    vanish.flush(res, "vanishing region (p=" + fmt(p) + ")");
  }
  return res;
}

SuiteResult suite_lfc(const Config& cfg, int points, int samples) {
  SuiteResult res{"lfc", {}};
  const ParamSchedule s = build_schedule(cfg);
  NormEvaluator ev(s, cfg.p, cfg.smoothness_order, cfg.bisect_tol);
  std::mt19937_64 rng(cfg.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double th1 = s.theta(1);

  Tally nbhd, local;
  for (int i = 0; i < points; ++i) {
    const double target = (0.2 + 0.8 * unit(rng)) * (1.0 - 3.0 * th1);
    const SparseVector x =
        scale_to_aux(random_vector(rng, 1, 6), s, cfg.p, target);
    nbhd.add(ev.neighborhood_bound_verify(x, samples, rng),
             "point " + std::to_string(i));
    local.add(ev.locality_verify(x, samples, rng),
              "point " + std::to_string(i));
  }
  nbhd.flush(res, "uniform bound off the witness family");
  local.flush(res, "bump sum blind outside the witness union");
  return res;
}

SuiteResult suite_smoothness(const Config& cfg, int grad_points,
                             int sphere_dirs) {
  SuiteResult res{"smoothness", {}};
  const ParamSchedule s = build_schedule(cfg);
  std::mt19937_64 rng(cfg.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::normal_distribution<double> gauss(0.0, 1.0);

  // gradient consistency of the final norm at cfg.p
  {
    NormEvaluator ev(s, cfg.p, cfg.smoothness_order, cfg.bisect_tol);
    Tally grad;
    for (int i = 0; i < grad_points; ++i) {
      const SparseVector x =
          random_vector(rng, 2, 5).scaled(0.5 + unit(rng));
      const GradientCheckReport rep = ev.gradient_check(x);
      grad.add(rep.ok, "point " + std::to_string(i) + " richardson=" +
                           fmt(rep.max_richardson_rel) + " scaling=" +
                           fmt(rep.max_scaling_rel));
    }
    grad.flush(res, "finite-difference gradient consistency (1e-4)");
  }

  // finite-dimensional sandwich on random p-sphere directions
  {
    Tally sphere;
    for (double p : {1.0, 1.5, 2.0, 2.5, 3.0}) {
      Config c = cfg;
      c.p = p;
      c.q = p / 2.0;
      const ParamSchedule sp = build_schedule(c);
      for (std::size_t k = 1; k <= 8; ++k) {
        const double theta_k = sp.theta(static_cast<long>(k));
        const SmoothFiniteNorm nrm =
            SmoothFiniteNorm::calibrated(k, theta_k, p);
        const double slack = 2.0 * cfg.bisect_tol;
        for (int d = 0; d < sphere_dirs; ++d) {
          std::vector<double> v(k);
          double mass = 0.0;
          for (auto& t : v) {
            t = gauss(rng);
            if (t == 0.0) t = 0.5;
            mass += std::pow(std::abs(t), p);
          }
          const double norm = std::pow(mass, 1.0 / p);
          for (auto& t : v) t /= norm;
          const double val = nrm.value(v, cfg.bisect_tol / 4.0);
          const bool ok = val >= 1.0 / (1.0 + theta_k) * (1.0 - slack) &&
                          val <= 1.0 + slack;
          if (!ok)
            sphere.add(false, "p=" + fmt(p) + " k=" + std::to_string(k) +
                                  " val=" + fmt(val));
          else
            sphere.add(true, "");
        }
      }
    }
    sphere.flush(res, "finite-dim sandwich on sphere directions");
  }

  // bump shape on a grid
  {
    const BumpFunction rho(s.theta(3), cfg.smoothness_order);
    Tally shape;
    double prev = 0.0;
    for (int i = 0; i <= 2000; ++i) {
      const double t = 2.0 * static_cast<double>(i) / 2000.0;
      const double v = rho(t);
      shape.add((v <= 1.0) == (t <= 1.0),
                "level-set mismatch at t=" + fmt(t));
      shape.add(v >= prev, "not monotone at t=" + fmt(t));
      if (i >= 2) {
        const double h = 2.0 / 2000.0;
        const double second = rho(t) - 2.0 * rho(t - h) + rho(t - 2.0 * h);
        shape.add(second >= -1e-9 * (1.0 + rho(t)),
                  "not convex at t=" + fmt(t));
      }
      prev = v;
    }
    shape.flush(res, "bump level set, monotonicity, convexity");
  }

  // gauge derivative against the implicit-function formula
  {
    Tally ift;
    NormEvaluator ev(s, cfg.p, cfg.smoothness_order, cfg.bisect_tol);
    for (int i = 0; i < 25; ++i) {
      const std::size_t k = 1 + rng() % 5;
      const SmoothFiniteNorm& nrm = ev.smooth_norm(k);
      std::vector<double> v(k);
      for (auto& t : v) t = 0.2 + 1.8 * unit(rng);
      const double lambda = nrm.gauge(v, 1e-13);
      double denom = 0.0;
      for (double t : v) denom += nrm.phi().derivative(t / lambda) * t;
      for (std::size_t j = 0; j < k; ++j) {
        const double analytic =
            nrm.phi().derivative(v[j] / lambda) * lambda / denom;
        const double h = 1e-4 * std::max(std::abs(v[j]), 0.1 * lambda);
        std::vector<double> vp = v, vm = v;
        vp[j] += h;
        vm[j] -= h;
        const double fd =
            (nrm.gauge(vp, 1e-13) - nrm.gauge(vm, 1e-13)) / (2.0 * h);
        ift.add(std::abs(fd - analytic) <=
                    1e-5 * std::max({std::abs(fd), std::abs(analytic), 1e-6}),
                "k=" + std::to_string(k) + " fd=" + fmt(fd) + " ift=" +
                    fmt(analytic));
      }
    }
    ift.flush(res, "gauge gradient matches implicit-function formula");
  }
  return res;
}

namespace {

// independent oracle: scan all r-subsets for pairwise-equal intersections
bool brute_has_sunflower(const SetFamily& f, std::size_t r) {
  const auto& sets = f.sets();
  std::vector<std::size_t> pick;
  auto inter = [](const std::vector<std::string>& a,
                  const std::vector<std::string>& b) {
    std::vector<std::string> out;
    std::set_intersection(a.begin(), a.end(), b.begin(), b.end(),
                          std::back_inserter(out));
    return out;
  };
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
  return rec(rec, 0);
}

bool sunflower_valid(const SetFamily& f, const Sunflower& s, std::size_t r) {
  if (s.petal_indices.size() < r) return false;
  const auto& sets = f.sets();
  for (std::size_t i = 0; i < s.petal_indices.size(); ++i)
    for (std::size_t j = i + 1; j < s.petal_indices.size(); ++j) {
      std::vector<std::string> inter;
      const auto& a = sets[s.petal_indices[i]];
      const auto& b = sets[s.petal_indices[j]];
      std::set_intersection(a.begin(), a.end(), b.begin(), b.end(),
                            std::back_inserter(inter));
      if (inter != s.root) return false;
    }
  return true;
}

SetFamily random_family(std::mt19937_64& rng, std::size_t k,
                        std::size_t count, int universe) {
  std::set<std::vector<std::string>> seen;
  std::vector<std::vector<std::string>> sets;
  while (sets.size() < count) {
    std::set<int> pickidx;
    while (pickidx.size() < k)
      pickidx.insert(static_cast<int>(rng() % static_cast<unsigned>(universe)));
    std::vector<std::string> labels;
    for (int i : pickidx) labels.push_back("u" + std::to_string(i));
    std::sort(labels.begin(), labels.end());
    if (seen.insert(labels).second) sets.push_back(labels);
  }
  return SetFamily(std::move(sets));
}

}  // namespace

SuiteResult suite_combinatorics(const Config& cfg, int families,
                                int small_families) {
  SuiteResult res{"combinatorics", {}};
  std::mt19937_64 rng(cfg.seed);

  record(res, "bound k=1,r=2", erdos_rado_bound(1, 2) == 1, "");
  record(res, "bound k=2,r=3", erdos_rado_bound(2, 3) == 8, "");
  record(res, "bound k=3,r=3", erdos_rado_bound(3, 3) == 48, "");

  Tally above;
  for (int i = 0; i < families; ++i) {
    const std::size_t k = 1 + rng() % 3;
    const std::size_t r = 2 + rng() % 3;
    const std::int64_t bound = erdos_rado_bound(k, r);
    const std::size_t count =
        static_cast<std::size_t>(bound) + 1 + rng() % 20;
    // universe large enough to host `count` distinct k-sets
    const int universe = k == 3 ? 14 : (k == 2 ? 16 : 40);
    const SetFamily f = random_family(rng, k, count, universe);
    const auto s = find_sunflower(f, r);
    bool ok = s.has_value() && sunflower_valid(f, *s, r);
    if (ok && s->petal_indices.size() >= 2)
      ok = s->root.size() <= k - 1;
    above.add(ok, "family " + std::to_string(i) + " k=" + std::to_string(k) +
                      " r=" + std::to_string(r));
  }
  above.flush(res, "families above the bound always yield a sunflower");

  Tally small;
  for (int i = 0; i < small_families; ++i) {
    const std::size_t k = 1 + rng() % 3;
    const std::size_t r = 2 + rng() % 3;
    const std::size_t count = 2 + rng() % 17;  // <= 18
    const int universe = 3 + static_cast<int>(rng() % 8);
    long combos = 1;  // C(universe, k) lower guard
    for (std::size_t j = 0; j < k; ++j) combos = combos * (universe - static_cast<int>(j));
    if (static_cast<long>(count) > combos / static_cast<long>(k == 3 ? 6 : (k == 2 ? 2 : 1)))
      continue;  // universe too small for distinct sets
    const SetFamily f = random_family(rng, k, count, universe);
    const auto s = find_sunflower(f, r);
    const bool exists = brute_has_sunflower(f, r);
    bool ok = s.has_value() == exists;
    if (ok && s.has_value()) ok = sunflower_valid(f, *s, r);
    small.add(ok, "family " + std::to_string(i));
  }
  small.flush(res, "oracle agreement on small families");
  return res;
}

std::vector<std::string> suite_names() {
  return {"sandwich", "lfc", "oracle", "smoothness", "combinatorics",
          "schedule"};
}

SuiteResult run_suite(const std::string& name, const Config& cfg) {
  if (name == "schedule") return suite_schedule(cfg);
  if (name == "oracle") return suite_oracle(cfg, 500);
  if (name == "sandwich") return suite_sandwich(cfg, 200);
  if (name == "lfc") return suite_lfc(cfg, 100, 20);
  if (name == "smoothness") return suite_smoothness(cfg, 10, 1000);
  if (name == "combinatorics") return suite_combinatorics(cfg, 200, 50);
  throw std::invalid_argument("unknown suite: " + name);
}

}  // namespace lfcnorm
