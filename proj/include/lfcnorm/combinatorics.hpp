#ifndef LFCNORM_COMBINATORICS_HPP
#define LFCNORM_COMBINATORICS_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace lfcnorm {

/// A family of pairwise distinct label sets, all of one cardinality k.
/// Sets are stored with sorted labels; family order is preserved.
class SetFamily {
 public:
  explicit SetFamily(std::vector<std::vector<std::string>> sets);

  const std::vector<std::vector<std::string>>& sets() const { return sets_; }
  std::size_t size() const { return sets_.size(); }
  std::size_t cardinality() const { return k_; }

 private:
  std::vector<std::vector<std::string>> sets_;
  std::size_t k_ = 0;
};

/// Petals indexed into the family; every pairwise intersection equals
/// the root. With >= 2 distinct k-sets the root has at most k-1 labels.
struct Sunflower {
  std::vector<std::string> root;  // sorted
  std::vector<std::size_t> petal_indices;
};

/// Finds a sunflower with at least r petals (r >= 2) if one exists.
/// Strategy: greedy disjoint scan; otherwise restrict to the most
/// popular element and recurse. When the recursion fails, an exhaustive
/// pass over candidate roots (pairwise intersections) settles existence,
/// so a `nullopt` result genuinely means no sunflower. Families larger
/// than k!·(r-1)^k always succeed in the recursive phase.
std::optional<Sunflower> find_sunflower(const SetFamily& family,
                                        std::size_t r);

/// k!·(r-1)^k; throws std::overflow_error past 2^63 - 1.
std::int64_t erdos_rado_bound(std::size_t k, std::size_t r);

}  // namespace lfcnorm

#endif  // LFCNORM_COMBINATORICS_HPP
