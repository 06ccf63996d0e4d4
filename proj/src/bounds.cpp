#include "cdc/bounds.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace cdc {

namespace {

void check_node_count(int node_count) {
  if (node_count < 1) {
    throw std::invalid_argument("node count must be at least 1, got " +
                                std::to_string(node_count));
  }
}

void check_replication(int reduce_replication, int node_count) {
  if (reduce_replication < 1 || reduce_replication > node_count) {
    throw std::invalid_argument(
        "reduce replication must lie in [1, " + std::to_string(node_count) +
        "], got " + std::to_string(reduce_replication));
  }
}

}  // namespace

ReplicationProfile::ReplicationProfile(int node_count,
                                       std::vector<std::int64_t> counts)
    : node_count_(node_count), counts_(std::move(counts)) {
  check_node_count(node_count_);
  if (counts_.size() != static_cast<std::size_t>(node_count_)) {
    throw std::invalid_argument(
        "replication profile needs one count per degree 1..." +
        std::to_string(node_count_) + ", got " +
        std::to_string(counts_.size()) + " entries");
  }
  for (int j = 1; j <= node_count_; ++j) {
    const std::int64_t c = counts_[static_cast<std::size_t>(j - 1)];
    if (c < 0) {
      throw std::invalid_argument("negative file count " + std::to_string(c) +
                                  " at replication degree " +
                                  std::to_string(j));
    }
    file_count_ += c;
  }
  if (file_count_ == 0) {
    throw std::invalid_argument("replication profile covers no files");
  }
}

std::int64_t ReplicationProfile::count(int holders) const {
  if (holders < 1 || holders > node_count_) {
    throw std::out_of_range("replication degree " + std::to_string(holders) +
                            " outside [1, " + std::to_string(node_count_) +
                            "]");
  }
  return counts_[static_cast<std::size_t>(holders - 1)];
}

Rational ReplicationProfile::computation_load() const {
  BigInt weighted = 0;
  for (int j = 1; j <= node_count_; ++j) {
    weighted += BigInt(j) * counts_[static_cast<std::size_t>(j - 1)];
  }
  return Rational(weighted, BigInt(file_count_));
}

ReplicationProfile replication_profile(const FileAssignment& fa,
                                       int node_count,
                                       std::int64_t file_count) {
  if (fa.node_count() != node_count) {
    throw std::invalid_argument("assignment is over " +
                                std::to_string(fa.node_count()) +
                                " nodes, expected " +
                                std::to_string(node_count));
  }
  if (fa.file_count() != file_count) {
    throw std::invalid_argument(
        "assignment covers " + std::to_string(fa.file_count()) +
        " files, expected " + std::to_string(file_count));
  }
  std::vector<std::int64_t> counts(static_cast<std::size_t>(node_count), 0);
  for (std::int64_t n = 1; n <= file_count; ++n) {
    const int degree = fa.holders_of(n).size();
    counts[static_cast<std::size_t>(degree - 1)] += 1;
  }
  return ReplicationProfile(node_count, std::move(counts));
}

Rational uncoded_load(const Rational& computation_load, int node_count) {
  check_node_count(node_count);
  if (computation_load < 1 || computation_load > node_count) {
    throw std::invalid_argument("computation load " +
                                to_fraction_string(computation_load) +
                                " outside [1, " + std::to_string(node_count) +
                                "]");
  }
  return Rational(1) - computation_load / node_count;
}

Rational coded_load(int computation_load, int reduce_replication,
                    int node_count) {
  check_node_count(node_count);
  check_replication(reduce_replication, node_count);
  if (computation_load < 1 || computation_load > node_count) {
    throw std::invalid_argument("computation load " +
                                std::to_string(computation_load) +
                                " outside [1, " + std::to_string(node_count) +
                                "]");
  }
  const int r = computation_load;
  const int s = reduce_replication;
  const int k = node_count;
  const int lo = std::max(r + 1, s);
  const int hi = std::min(r + s, k);
  BigInt numerator = 0;
  for (int size = lo; size <= hi; ++size) {
    numerator += BigInt(size) * binom_big(k, size) *
                 binom_big(size - 2, r - 1) * binom_big(r, size - s);
  }
  const BigInt denominator = BigInt(r) * binom_big(k, r) * binom_big(k, s);
  return Rational(numerator, denominator);
}

Rational coded_load_envelope(const Rational& computation_load,
                             int reduce_replication, int node_count) {
  check_node_count(node_count);
  check_replication(reduce_replication, node_count);
  if (computation_load < 1 || computation_load > node_count) {
    throw std::invalid_argument("computation load " +
                                to_fraction_string(computation_load) +
                                " outside [1, " + std::to_string(node_count) +
                                "]");
  }
  const BigInt floor_big =
      numerator(computation_load) / denominator(computation_load);
  const int lo = floor_big.convert_to<int>();
  if (computation_load == lo) {
    return coded_load(lo, reduce_replication, node_count);
  }
  const Rational weight_hi = computation_load - lo;  // in (0, 1)
  const Rational at_lo = coded_load(lo, reduce_replication, node_count);
  const Rational at_hi = coded_load(lo + 1, reduce_replication, node_count);
  return (Rational(1) - weight_hi) * at_lo + weight_hi * at_hi;
}

Rational load_lower_bound_single(const ReplicationProfile& profile) {
  const int k = profile.node_count();
  Rational bound = 0;
  for (int j = 1; j <= k; ++j) {
    const std::int64_t files = profile.count(j);
    if (files == 0 || j == k) continue;
    bound += Rational(files, profile.file_count()) *
             Rational(k - j, static_cast<std::int64_t>(k) * j);
  }
  return bound;
}

Rational load_lower_bound(const ReplicationProfile& profile,
                          int reduce_replication) {
  const int k = profile.node_count();
  const int s = reduce_replication;
  check_replication(s, k);
  const BigInt groups = binom_big(k, s);
  Rational bound = 0;
  for (int j = 1; j <= k; ++j) {
    const std::int64_t files = profile.count(j);
    if (files == 0) continue;
    Rational inner = 0;
    for (int size = std::max(j, s); size <= std::min(j + s, k); ++size) {
      if (size == j) continue;  // zero term; at size 1 also avoids 0/0
      const BigInt ways = binom_big(k - j, size - j) * binom_big(j, size - s);
      inner += Rational(ways * (size - j), groups * (size - 1));
    }
    bound += Rational(files, profile.file_count()) * inner;
  }
  return bound;
}

CoverageIdentity coverage_identity(int node_count, int computation_load,
                                   int reduce_replication) {
  check_node_count(node_count);
  check_replication(reduce_replication, node_count);
  const int r = computation_load;
  const int s = reduce_replication;
  const int k = node_count;
  if (r < 1 || r >= k) {
    throw std::invalid_argument("computation load " + std::to_string(r) +
                                " outside [1, " + std::to_string(k - 1) +
                                "] (a full-replication job decodes nothing)");
  }
  CoverageIdentity result;
  for (int size = std::max(r + 1, s); size <= std::min(r + s, k); ++size) {
    result.lhs += binom_big(s - 1, size - r - 1) * binom_big(k - s, size - s);
  }
  result.rhs = binom_big(k - 1, r);
  result.equal = result.lhs == result.rhs;
  return result;
}

}  // namespace cdc
