#include "cdc/subsets.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace cdc {

NodeSubset::NodeSubset(std::vector<int> members) : members_(std::move(members)) {
  for (std::size_t i = 0; i < members_.size(); ++i) {
    if (members_[i] < 1)
      throw std::invalid_argument("NodeSubset: node indices are 1-based");
    if (i > 0 && members_[i] <= members_[i - 1])
      throw std::invalid_argument("NodeSubset: members must be strictly ascending");
  }
}

NodeSubset NodeSubset::of(std::initializer_list<int> members) {
  return NodeSubset(std::vector<int>(members));
}

bool NodeSubset::contains(int k) const {
  return std::binary_search(members_.begin(), members_.end(), k);
}

int NodeSubset::index_of(int k) const {
  auto it = std::lower_bound(members_.begin(), members_.end(), k);
  if (it == members_.end() || *it != k) return -1;
  return static_cast<int>(it - members_.begin());
}

NodeSubset NodeSubset::with(int k) const {
  if (contains(k)) return *this;
  std::vector<int> m = members_;
  m.insert(std::upper_bound(m.begin(), m.end(), k), k);
  return NodeSubset(std::move(m));
}

NodeSubset NodeSubset::without(int k) const {
  std::vector<int> m;
  m.reserve(members_.size());
  for (int v : members_)
    if (v != k) m.push_back(v);
  return NodeSubset(std::move(m));
}

bool NodeSubset::subset_of(const NodeSubset& o) const {
  return std::includes(o.members_.begin(), o.members_.end(), members_.begin(),
                       members_.end());
}

std::uint32_t NodeSubset::bitmask() const {
  std::uint32_t mask = 0;
  for (int v : members_) {
    if (v > 32) throw std::invalid_argument("NodeSubset: bitmask needs members <= 32");
    mask |= 1u << (v - 1);
  }
  return mask;
}

NodeSubset NodeSubset::from_bitmask(std::uint32_t mask) {
  std::vector<int> m;
  for (int v = 1; v <= 32; ++v)
    if ((mask >> (v - 1)) & 1) m.push_back(v);
  return NodeSubset(std::move(m));
}

std::string NodeSubset::to_string() const {
  std::string s = "{";
  for (std::size_t i = 0; i < members_.size(); ++i) {
    if (i != 0) s += ',';
    s += std::to_string(members_[i]);
  }
  s += '}';
  return s;
}

std::int64_t binom(int n, int k) {
  if (n < 0) throw std::invalid_argument("binom: negative n");
  if (k < 0 || k > n) return 0;
  if (n > 61) throw std::overflow_error("binom: n too large for int64 guarantee");
  k = std::min(k, n - k);
  unsigned __int128 r = 1;
  for (int i = 1; i <= k; ++i) r = r * static_cast<unsigned>(n - k + i) / static_cast<unsigned>(i);
  return static_cast<std::int64_t>(r);
}

std::vector<NodeSubset> enumerate_subsets(int K, int size) {
  if (K < 0) throw std::invalid_argument("enumerate_subsets: negative K");
  if (size < 0 || size > K)
    throw std::invalid_argument("enumerate_subsets: size out of range");
  std::vector<NodeSubset> out;
  out.reserve(static_cast<std::size_t>(binom(K, size)));
  std::vector<int> cur(size);
  for (int i = 0; i < size; ++i) cur[i] = i + 1;
  while (true) {
    out.emplace_back(cur);
    // Advance to the next combination in lexicographic order.
    int i = size - 1;
    while (i >= 0 && cur[i] == K - (size - 1 - i)) --i;
    if (i < 0) break;
    ++cur[i];
    for (int j = i + 1; j < size; ++j) cur[j] = cur[j - 1] + 1;
  }
  return out;
}

std::int64_t subset_rank(const NodeSubset& s, int K) {
  const int k = s.size();
  std::int64_t rank = 0;
  int prev = 0;
  for (int i = 0; i < k; ++i) {
    const int c = s.members()[i];
    if (c > K) throw std::invalid_argument("subset_rank: member exceeds K");
    // Count combinations that branch below c at position i.
    for (int v = prev + 1; v < c; ++v) rank += binom(K - v, k - 1 - i);
    prev = c;
  }
  return rank;
}

NodeSubset subset_unrank(std::int64_t rank, int K, int size) {
  if (rank < 0 || rank >= binom(K, size))
    throw std::out_of_range("subset_unrank: rank out of range");
  std::vector<int> m;
  m.reserve(size);
  int v = 1;
  for (int i = 0; i < size; ++i) {
    while (true) {
      const std::int64_t block = binom(K - v, size - 1 - i);
      if (rank < block) break;
      rank -= block;
      ++v;
    }
    m.push_back(v++);
  }
  return NodeSubset(std::move(m));
}

std::vector<NodeSubset> subsets_within(const NodeSubset& S, int size) {
  if (size < 0 || size > S.size())
    throw std::invalid_argument("subsets_within: size out of range");
  const auto& mem = S.members();
  std::vector<NodeSubset> out;
  out.reserve(static_cast<std::size_t>(binom(S.size(), size)));
  // Combinations of indices into the sorted member list preserve lex order.
  for (const NodeSubset& idx : enumerate_subsets(S.size(), size)) {
    std::vector<int> m;
    m.reserve(size);
    for (int i : idx) m.push_back(mem[i - 1]);
    out.emplace_back(std::move(m));
  }
  return out;
}

std::vector<NodeSubset> subsets_containing(int k, const NodeSubset& S, int r) {
  if (!S.contains(k))
    throw std::invalid_argument("subsets_containing: k is not a member of S");
  if (r < 1 || r > S.size())
    throw std::invalid_argument("subsets_containing: r out of range");
  // Inserting the common element k preserves lexicographic order.
  std::vector<NodeSubset> out;
  for (const NodeSubset& base : subsets_within(S.without(k), r - 1))
    out.push_back(base.with(k));
  return out;
}

std::vector<int> complement_indices(int j, int k, const NodeSubset& S, int r) {
  if (j == k) throw std::invalid_argument("complement_indices: j == k");
  if (!S.contains(j) || !S.contains(k))
    throw std::invalid_argument("complement_indices: j and k must be members of S");
  std::vector<int> out;
  const std::vector<NodeSubset> subs = subsets_containing(k, S, r);
  for (std::size_t i = 0; i < subs.size(); ++i)
    if (!subs[i].contains(j)) out.push_back(static_cast<int>(i) + 1);
  return out;
}

}  // namespace cdc
