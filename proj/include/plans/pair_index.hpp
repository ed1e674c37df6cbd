#pragma once

#include <cstddef>
#include <cstdint>
#include <utility>

namespace plans {

/// Unordered item pair (i <= j).
struct ItemPair {
  std::size_t i = 0;
  std::size_t j = 0;
  friend bool operator==(const ItemPair&, const ItemPair&) = default;
};

constexpr ItemPair make_pair_ordered(std::size_t a, std::size_t b) {
  return a <= b ? ItemPair{a, b} : ItemPair{b, a};
}

/// Number of unordered pairs over k items, diagonal included: k(k+1)/2.
constexpr std::size_t pair_count(std::size_t k) { return k * (k + 1) / 2; }

/// Flat arm id of the unordered pair {a, b} among k items. Ids follow the
/// lexicographic order of (i, j) with i <= j.
constexpr std::size_t pair_to_arm(std::size_t a, std::size_t b, std::size_t k) {
  const ItemPair p = make_pair_ordered(a, b);
  return p.i * k - p.i * (p.i - 1) / 2 + (p.j - p.i);
}

constexpr ItemPair arm_to_pair(std::size_t arm, std::size_t k) {
  std::size_t i = 0;
  while (i < k && arm >= k - i) {
    arm -= k - i;
    ++i;
  }
  return ItemPair{i, i + arm};
}

}  // namespace plans
