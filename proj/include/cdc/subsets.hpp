#pragma once

#include <compare>
#include <cstdint>
#include <initializer_list>
#include <string>
#include <vector>

namespace cdc {

// A set of 1-based node indices kept sorted strictly ascending. Ordering is
// lexicographic on the member list, which matches enumeration order below.
class NodeSubset {
 public:
  NodeSubset() = default;
  explicit NodeSubset(std::vector<int> members);  // validates
  static NodeSubset of(std::initializer_list<int> members);

  int size() const { return static_cast<int>(members_.size()); }
  bool empty() const { return members_.empty(); }
  bool contains(int k) const;
  int index_of(int k) const;  // 0-based position, -1 if absent
  const std::vector<int>& members() const { return members_; }

  NodeSubset with(int k) const;
  NodeSubset without(int k) const;
  bool subset_of(const NodeSubset& o) const;

  std::uint32_t bitmask() const;  // members must be <= 32
  static NodeSubset from_bitmask(std::uint32_t mask);

  auto begin() const { return members_.begin(); }
  auto end() const { return members_.end(); }
  auto operator<=>(const NodeSubset&) const = default;

  std::string to_string() const;  // "{1,2,4}"

 private:
  std::vector<int> members_;
};

// Exact binomial coefficient; 0 when k < 0 or k > n. Arguments must keep the
// result within int64 (n <= 61 is always safe).
std::int64_t binom(int n, int k);

// All size-`size` subsets of {1..K} in lexicographic order of member lists.
std::vector<NodeSubset> enumerate_subsets(int K, int size);

// Position of s within enumerate_subsets(K, s.size()), and its inverse.
std::int64_t subset_rank(const NodeSubset& s, int K);
NodeSubset subset_unrank(std::int64_t rank, int K, int size);

// All size-`size` subsets of S's members, in lexicographic order.
std::vector<NodeSubset> subsets_within(const NodeSubset& S, int size);

// The size-r subsets of S containing node k, in lexicographic order.
std::vector<NodeSubset> subsets_containing(int k, const NodeSubset& S, int r);

// 1-based positions, within subsets_containing(k, S, r), of the subsets that
// do NOT contain node j. j and k must be distinct members of S.
std::vector<int> complement_indices(int j, int k, const NodeSubset& S, int r);

}  // namespace cdc
