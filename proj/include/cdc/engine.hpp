#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cdc/bits.hpp"
#include "cdc/codec.hpp"
#include "cdc/placement.hpp"
#include "cdc/rational.hpp"
#include "cdc/store.hpp"

namespace cdc {

enum class ShuffleStrategy { kCoded, kUncoded, kRandomPlacementCoded };
std::string to_string(ShuffleStrategy s);

struct EngineOptions {
  int workers = 0;  // OpenMP thread count; 0 = library default, 1 = serial
};

// User-supplied Map and Reduce. map_fn must be deterministic and return one
// value per function, each exactly ceil(value_bits/8) bytes with zero pad
// bits. reduce_fn receives one value per padded file in file order together
// with padding markers.
struct JobFunctions {
  std::function<std::vector<Bytes>(std::int64_t file, const Bytes& contents)> map_fn;
  std::function<Bytes(int function, const std::vector<Bytes>& values,
                      const std::vector<bool>& is_padding)>
      reduce_fn;
};

// Exact accounting of one shuffle. The headline load normalizes by the
// unpadded file count (Q*N*T); the padded normalization is carried alongside.
struct LoadReport {
  ShuffleStrategy strategy = ShuffleStrategy::kCoded;
  int node_count = 0;
  int function_count = 0;
  int reduce_replication = 1;
  Rational computation_load = 0;
  std::int64_t file_count = 0;         // N, before padding
  std::int64_t padded_file_count = 0;  // N-bar
  std::int64_t value_bits = 0;
  std::int64_t total_bits = 0;
  std::size_t message_count = 0;
  // (shuffle subset size, bits); subset size 0 collects uncoded traffic.
  std::vector<std::pair<int, std::int64_t>> bits_per_round;
  std::vector<std::int64_t> bits_per_sender;  // index 1..K, slot 0 unused

  Rational load() const;
  Rational load_padded_norm() const;
  static std::string csv_header();
  std::string csv_row() const;
};

struct ShuffleResult {
  std::vector<MulticastMessage> log;
  LoadReport report;
};

// Checks that value_bits yields whole-byte segments in every shuffle round
// (and that GF(2^8) can supply enough distinct coefficients). Throws naming
// the smallest valid value_bits multiple. With variable_batch_sizes set, the
// check covers arbitrary per-batch file counts (random placement).
void validate_value_bits(const JobSpec& spec, bool variable_batch_sizes = false);

// Runs Map everywhere it is placed. inputs holds the N real files; padding
// files materialize as all-zero values without calling map_fn.
IntermediateStore run_map_phase(const JobSpec& spec, const FileAssignment& files,
                                const JobFunctions& jf, const std::vector<Bytes>& inputs,
                                const EngineOptions& opts = {});

// Executes the chosen shuffle, delivers every needed value, and returns the
// multicast log in canonical order (rounds by ascending subset size, subsets
// lexicographic, senders ascending, message index ascending) plus the exact
// load accounting. Multicasting bits to any receiver set costs those bits
// once, on the sender.
ShuffleResult run_shuffle(const JobSpec& spec, const FileAssignment& files,
                          const ReduceAssignment& reduces, IntermediateStore& store,
                          ShuffleStrategy strategy, const EngineOptions& opts = {});

// Runs Reduce at every owner. Result is indexed by node (1-based; index 0
// unused) mapping function -> output bytes.
std::vector<std::map<int, Bytes>> run_reduce_phase(const JobSpec& spec,
                                                   const ReduceAssignment& reduces,
                                                   const IntermediateStore& store,
                                                   const JobFunctions& jf,
                                                   const EngineOptions& opts = {});

struct OracleReport {
  bool ok = true;
  std::string detail;  // first divergence, human readable
};

// Recomputes the whole job single-machine and compares. With a store supplied
// the comparison also covers intermediate values, locating the first
// divergent (function, file) pair; otherwise it locates the function.
OracleReport verify_against_oracle(const JobSpec& spec, const JobFunctions& jf,
                                   const std::vector<Bytes>& inputs,
                                   const std::vector<std::map<int, Bytes>>& outputs,
                                   const IntermediateStore* store = nullptr);

struct JobResult {
  FileAssignment files;
  ReduceAssignment reduces;
  IntermediateStore store;
  ShuffleResult shuffle;
  std::vector<std::map<int, Bytes>> outputs;
};

// Placement + map + shuffle + reduce in one call. The seed only matters for
// the random-placement strategy.
JobResult run_job(const JobSpec& spec, const JobFunctions& jf,
                  const std::vector<Bytes>& inputs, ShuffleStrategy strategy,
                  std::uint64_t seed = 0, const EngineOptions& opts = {});

}  // namespace cdc
