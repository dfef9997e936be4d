#pragma once

// Brute-force facts about small finite groups, computed from the
// multiplication table alone.

#include <bitset>
#include <cstdint>
#include <vector>

#include <json.hpp>

#include "residua/group.h"
#include "residua/ordinal.h"

namespace residua {

inline constexpr std::size_t kOracleCap = 128;

using ElementSet = std::bitset<kOracleCap>;

/// Multiplication table of a finite group with at most kOracleCap elements,
/// indexed in the order of `group->elements()`.
class CayleyTable {
 public:
  explicit CayleyTable(GroupPtr group);

  const GroupPtr& group() const noexcept { return group_; }
  std::size_t order() const noexcept { return elements_.size(); }
  const std::vector<Element>& elements() const noexcept { return elements_; }
  std::size_t mul(std::size_t a, std::size_t b) const { return mul_[a * order() + b]; }
  std::size_t inv(std::size_t a) const { return inv_[a]; }
  std::size_t identity() const noexcept { return identity_; }

  ElementSet generate(const ElementSet& gens) const;
  bool is_subgroup(const ElementSet& s) const;
  ElementSet whole() const;
  ElementSet trivial() const;
  std::vector<Element> to_elements(const ElementSet& s) const;

 private:
  GroupPtr group_;
  std::vector<Element> elements_;
  std::vector<std::uint8_t> mul_;
  std::vector<std::uint8_t> inv_;
  std::size_t identity_ = 0;
};

struct SubgroupLattice {
  CayleyTable table;
  std::vector<ElementSet> subgroups;       // by order, then by element bits
  std::vector<std::vector<bool>> contains; // contains[i][j]: subgroup j lies in subgroup i

  std::size_t index_of(const ElementSet& s) const;
  nlohmann::json to_json() const;
};

/// Every subgroup: cyclic subgroups closed under pairwise joins.
SubgroupLattice all_subgroups(const GroupPtr& g);

/// Every subgroup by testing every subset for closure; only for order <= 12.
std::vector<ElementSet> subgroups_by_subset_scan(const CayleyTable& t);

/// Intersection of all subgroups of index < k.
std::vector<Element> core_up_to_index(const GroupPtr& g, std::uint64_t k);

/// Least kappa admitting a strictly descending chain from g to 1 with every
/// index below kappa; 1 for the trivial group.
std::uint64_t min_kappa(const GroupPtr& g);

/// 0 for the trivial group, 1 for any other finite group.
Ordinal depth_exact_finite(const GroupPtr& g);

/// Strictly descending chains g = H_0 > H_1 > ... > H_m = 1 with m <= max_len.
std::vector<std::vector<std::vector<Element>>> chain_enumerate(const GroupPtr& g, std::uint64_t max_len);

}  // namespace residua
