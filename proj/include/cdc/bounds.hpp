#pragma once

#include <cstdint>
#include <vector>

#include "cdc/placement.hpp"
#include "cdc/rational.hpp"

namespace cdc {

// Histogram of file replication degrees for one assignment: count(j) files are
// mapped by exactly j nodes. The converse bounds below depend on an assignment
// only through this histogram.
class ReplicationProfile {
 public:
  // counts[j-1] = number of files held by exactly j nodes; must sum to a
  // positive file count and have one entry per node.
  ReplicationProfile(int node_count, std::vector<std::int64_t> counts);

  int node_count() const { return node_count_; }
  std::int64_t file_count() const { return file_count_; }
  std::int64_t count(int holders) const;  // 1-based degree
  Rational computation_load() const;      // sum j*count(j) / file_count

 private:
  int node_count_ = 0;
  std::vector<std::int64_t> counts_;
  std::int64_t file_count_ = 0;
};

// Profile of an existing assignment. file_count is the expected number of
// files and must match the assignment.
ReplicationProfile replication_profile(const FileAssignment& fa,
                                       int node_count,
                                       std::int64_t file_count);

// Shuffle load of the plain scheme (every missing value unicast): 1 - r/K.
Rational uncoded_load(const Rational& computation_load, int node_count);

// Shuffle load of the coded scheme at integer computation load r and reduce
// replication s on K nodes. Zero when r = K; (1/r)(1 - r/K) when s = 1.
Rational coded_load(int computation_load, int reduce_replication,
                    int node_count);

// Coded load extended to fractional r by linear interpolation between the
// neighbouring integer points (the achievable time-sharing envelope).
Rational coded_load_envelope(const Rational& computation_load,
                             int reduce_replication, int node_count);

// Lower bound on the shuffle load of ANY scheme over an assignment with this
// profile when each output is reduced at one node.
Rational load_lower_bound_single(const ReplicationProfile& profile);

// Same bound generalized to outputs reduced at `reduce_replication` nodes.
// Coincides with load_lower_bound_single at replication 1, and with
// coded_load(r, s, K) when the profile is concentrated at degree r.
Rational load_lower_bound(const ReplicationProfile& profile,
                          int reduce_replication);

// Both sides of the delivery-count identity: summed over round sizes, the
// values a node decodes equal the values it is missing, (K-1 choose r) per
// batch. Holds for every 1 <= r < K and 1 <= s <= K.
struct CoverageIdentity {
  BigInt lhs = 0;
  BigInt rhs = 0;
  bool equal = false;
};
CoverageIdentity coverage_identity(int node_count, int computation_load,
                                   int reduce_replication);

}  // namespace cdc
