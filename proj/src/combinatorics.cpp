#include "lfcnorm/combinatorics.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <stdexcept>

namespace lfcnorm {

namespace {

using LabelSet = std::vector<std::string>;  // sorted

bool disjoint(const LabelSet& a, const LabelSet& b) {
  auto ia = a.begin();
  auto ib = b.begin();
  while (ia != a.end() && ib != b.end()) {
    if (*ia < *ib)
      ++ia;
    else if (*ib < *ia)
      ++ib;
    else
      return false;
  }
  return true;
}

LabelSet intersect(const LabelSet& a, const LabelSet& b) {
  LabelSet out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(),
                        std::back_inserter(out));
  return out;
}

bool contains_all(const LabelSet& big, const LabelSet& sub) {
  return std::includes(big.begin(), big.end(), sub.begin(), sub.end());
}

LabelSet difference(const LabelSet& a, const LabelSet& b) {
  LabelSet out;
  std::set_difference(a.begin(), a.end(), b.begin(), b.end(),
                      std::back_inserter(out));
  return out;
}

struct Entry {
  std::size_t index;  // position in the original family
  LabelSet rest;      // labels not yet absorbed into the root
};

// Recursive phase: greedy disjoint collection, else restrict to the most
// popular element (ties by label order) and recurse.
std::optional<Sunflower> recursive_phase(const std::vector<Entry>& entries,
                                         std::size_t r, LabelSet root) {
  std::vector<std::size_t> chosen;
  std::set<std::string> used;
  for (std::size_t i = 0; i < entries.size(); ++i) {
    bool free = true;
    for (const auto& label : entries[i].rest) free = free && used.count(label) == 0;
    if (free) {
      chosen.push_back(i);
      used.insert(entries[i].rest.begin(), entries[i].rest.end());
    }
  }
  if (chosen.size() >= r) {
    Sunflower s;
    s.root = std::move(root);
    for (std::size_t i : chosen) s.petal_indices.push_back(entries[i].index);
    return s;
  }
  if (entries.empty() || entries.front().rest.empty()) return std::nullopt;

  std::map<std::string, std::size_t> count;
  for (const auto& e : entries)
    for (const auto& label : e.rest) ++count[label];
  const auto popular = std::max_element(
      count.begin(), count.end(), [](const auto& a, const auto& b) {
        return a.second < b.second;  // ties resolve to the earlier label
      });
  if (popular->second < r) return std::nullopt;

  std::vector<Entry> restricted;
  for (const auto& e : entries) {
    if (std::binary_search(e.rest.begin(), e.rest.end(), popular->first))
      restricted.push_back({e.index, difference(e.rest, {popular->first})});
  }
  root.push_back(popular->first);
  std::sort(root.begin(), root.end());
  return recursive_phase(restricted, r, std::move(root));
}

// Complete fallback: any sunflower's root is the intersection of two of
// its petals, so scanning all pairwise intersections (plus each on its
// own) and packing disjoint residuals decides existence exactly.
std::optional<Sunflower> exhaustive_phase(const SetFamily& f, std::size_t r) {
  const auto& sets = f.sets();
  std::set<LabelSet> candidates;
  for (std::size_t i = 0; i < sets.size(); ++i)
    for (std::size_t j = i + 1; j < sets.size(); ++j)
      candidates.insert(intersect(sets[i], sets[j]));

  for (const auto& root : candidates) {
    std::vector<std::size_t> members;
    for (std::size_t i = 0; i < sets.size(); ++i)
      if (contains_all(sets[i], root)) members.push_back(i);
    if (members.size() < r) continue;

    // depth-first packing of pairwise disjoint residuals
    std::vector<std::size_t> picked;
    auto rec = [&](auto&& self, std::size_t next) -> bool {
      if (picked.size() == r) return true;
      for (std::size_t m = next; m < members.size(); ++m) {
        const LabelSet rest = difference(sets[members[m]], root);
        bool ok = true;
        for (std::size_t q : picked)
          ok = ok && disjoint(rest, difference(sets[members[q]], root));
        if (ok) {
          picked.push_back(m);
          if (self(self, m + 1)) return true;
          picked.pop_back();
        }
      }
      return false;
    };
    if (rec(rec, 0)) {
      Sunflower s;
      s.root = root;
      for (std::size_t m : picked) s.petal_indices.push_back(members[m]);
      return s;
    }
  }
  return std::nullopt;
}

}  // namespace

SetFamily::SetFamily(std::vector<std::vector<std::string>> sets)
    : sets_(std::move(sets)) {
  if (sets_.empty()) throw std::invalid_argument("set family: empty");
  for (auto& s : sets_) std::sort(s.begin(), s.end());
  k_ = sets_.front().size();
  std::set<LabelSet> seen;
  for (const auto& s : sets_) {
    if (s.size() != k_)
      throw std::invalid_argument("set family: mixed cardinalities");
    if (std::adjacent_find(s.begin(), s.end()) != s.end())
      throw std::invalid_argument("set family: repeated label in a set");
    if (!seen.insert(s).second)
      throw std::invalid_argument("set family: duplicate set");
  }
}

std::optional<Sunflower> find_sunflower(const SetFamily& family,
                                        std::size_t r) {
  if (r < 2) throw std::invalid_argument("find_sunflower: r >= 2");
  std::vector<Entry> entries;
  entries.reserve(family.size());
  for (std::size_t i = 0; i < family.size(); ++i)
    entries.push_back({i, family.sets()[i]});
  if (auto s = recursive_phase(entries, r, {})) return s;
  return exhaustive_phase(family, r);
}

std::int64_t erdos_rado_bound(std::size_t k, std::size_t r) {
  if (k < 1 || r < 2) throw std::invalid_argument("bound: k >= 1, r >= 2");
  constexpr std::int64_t kMax = INT64_MAX;
  __int128 acc = 1;
  for (std::size_t i = 2; i <= k; ++i) {
    acc *= static_cast<__int128>(i);
    if (acc > kMax) throw std::overflow_error("k!·(r-1)^k exceeds 2^63-1");
  }
  for (std::size_t i = 0; i < k; ++i) {
    acc *= static_cast<__int128>(r - 1);
    if (acc > kMax) throw std::overflow_error("k!·(r-1)^k exceeds 2^63-1");
  }
  return static_cast<std::int64_t>(acc);
}

}  // namespace lfcnorm
