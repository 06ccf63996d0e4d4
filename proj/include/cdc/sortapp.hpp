#pragma once

#include <cstdint>
#include <vector>

#include "cdc/bits.hpp"
#include "cdc/engine.hpp"
#include "cdc/rational.hpp"

namespace cdc {

// Distributed sort of fixed-width records (big-endian unsigned key + opaque
// value). Each node owns one contiguous key range, so the partition count
// equals the node count and every output is reduced at a single node.
struct SortConfig {
  int node_count = 0;        // K; also the number of key ranges
  int computation_load = 1;  // r, integer
  std::int64_t record_count = 0;
  int key_bytes = 10;
  int value_bytes = 90;
  std::uint64_t seed = 0;
  EngineOptions engine;

  int record_width() const { return key_bytes + value_bytes; }
  void validate() const;
};

// record_count records of uniform random bytes, reproducible from the seed.
Bytes generate_records(const SortConfig& config);

// The key domain [0, domain_max] cut into near-equal contiguous ranges; range
// i spans [floor(i*D/Q), floor((i+1)*D/Q)) with D = domain_max + 1.
class KeyPartition {
 public:
  int range_count() const { return range_count_; }
  int key_bytes() const { return key_bytes_; }
  BigInt range_begin(int index) const;  // inclusive; 0-based index
  BigInt range_end(int index) const;    // exclusive
  // Range holding a big-endian key of key_bytes() bytes. Keys beyond
  // domain_max clamp into the last range.
  int range_of(const std::uint8_t* key) const;

 private:
  friend KeyPartition partition_key_domain(const BigInt& domain_max,
                                           int key_bytes, int range_count);
  int key_bytes_ = 0;
  int range_count_ = 0;
  BigInt domain_size_ = 0;
  std::vector<BigInt> splits_;  // interior boundaries b_1..b_{Q-1}
  std::vector<Bytes> split_bytes_;  // the same, fixed-width big-endian
};

// Throws when there are more ranges than keys or the domain overflows the key
// width.
KeyPartition partition_key_domain(const BigInt& domain_max, int key_bytes,
                                  int range_count);

// Splits a file of whole records into one group per key range, each encoded as
// a fixed group_bytes buffer: u32 LE record count, the records in input order,
// zero fill. Group q holds exactly the records whose key falls in range q.
std::vector<Bytes> hash_records_into_groups(const Bytes& file_contents,
                                            const KeyPartition& partition,
                                            int key_bytes, int value_bytes,
                                            std::size_t group_bytes);

// Inverse of the group encoding plus a stable sort by key: concatenates the
// records of all non-padding groups in file order, then orders them by
// big-endian key, preserving input order on ties. Returns the bare records.
Bytes merge_sort_groups(const std::vector<Bytes>& groups,
                        const std::vector<bool>& is_padding, int key_bytes,
                        int value_bytes);

// Oracle: the same stable order computed directly on one machine.
Bytes single_machine_sort(const Bytes& records, int key_bytes, int value_bytes);

struct SortStrategyOutcome {
  LoadReport report;
  Rational useful_load = 0;  // report.load() scaled by the useful density
};

struct SortRunResult {
  std::int64_t value_bits = 0;   // group size chosen from the largest group
  Rational useful_density = 0;   // record payload bits / (Q * padded N * T)
  SortStrategyOutcome coded;
  SortStrategyOutcome uncoded;
  Bytes sorted;                  // coded pipeline output, all ranges in order
  bool matches_oracle = false;   // both pipelines equal the single-machine run
};

// Full pipeline, run twice (coded and plain shuffle) on identical data:
// generate records, deal them over (K choose r) files, map into key-range
// groups, shuffle, sort each range at its owner, and verify against the
// single-machine oracle. Groups are padded to a common size, so the report
// carries both the engine-exact padded load and the useful-bit load.
SortRunResult run_coded_sort(const SortConfig& config);

}  // namespace cdc
