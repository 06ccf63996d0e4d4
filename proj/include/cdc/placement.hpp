#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "cdc/rational.hpp"
#include "cdc/subsets.hpp"

namespace cdc {

// Parameters of one distributed map/shuffle/reduce job.
//
//   node_count          K   workers
//   function_count      Q   outputs; must be a multiple of (K choose s)
//   file_count          N   real input files before padding
//   computation_load    r   number of nodes each file is mapped at (rational;
//                           non-integer loads run as two split sub-jobs)
//   reduce_replication  s   number of nodes computing each output
//   value_bits          T   size of one intermediate value, in bits
struct JobSpec {
  int node_count = 0;
  int function_count = 0;
  std::int64_t file_count = 0;
  Rational computation_load = 0;
  int reduce_replication = 1;
  std::int64_t value_bits = 0;

  bool load_is_integer() const;
  int load_int() const;  // throws when the load is fractional
  void validate() const;
};

// pad_files: number of files after padding N up to a multiple of (K choose r),
// and the per-batch file count.
struct PaddedFiles {
  std::int64_t padded_count = 0;  // smallest multiple of (K choose r) >= N
  std::int64_t batch_size = 0;    // files dealt to each size-r subset
};
PaddedFiles pad_files(std::int64_t file_count, int node_count, int load);

// Which nodes map which files. Built either by the canonical batch dealing or
// from arbitrary per-file holder sets (random placement, custom layouts).
class FileAssignment {
 public:
  // holder_sets[n-1] is the set of nodes mapping file n; none may be empty.
  static FileAssignment from_holder_sets(int node_count,
                                         std::vector<NodeSubset> holder_sets);

  int node_count() const { return node_count_; }
  std::int64_t file_count() const { return static_cast<std::int64_t>(holders_.size()); }
  const NodeSubset& holders_of(std::int64_t file) const;   // 1-based
  const std::vector<std::int64_t>& files_of(int node) const;  // sorted
  // Files grouped by their exact holder set, keys in lexicographic order.
  const std::map<NodeSubset, std::vector<std::int64_t>>& batches() const {
    return batches_;
  }
  // Stable textual form (sorted keys) for fingerprinting and goldens.
  std::string to_canonical_json() const;

 private:
  int node_count_ = 0;
  std::vector<NodeSubset> holders_;                        // by file, 1-based
  std::vector<std::vector<std::int64_t>> per_node_;        // by node, 1-based
  std::map<NodeSubset, std::vector<std::int64_t>> batches_;
};

// Which nodes reduce which output functions.
class ReduceAssignment {
 public:
  static ReduceAssignment from_owner_sets(int node_count,
                                          std::vector<NodeSubset> owner_sets);

  int node_count() const { return node_count_; }
  int function_count() const { return static_cast<int>(owners_.size()); }
  const NodeSubset& owners_of(int function) const;  // 1-based
  const std::vector<int>& functions_of(int node) const;
  const std::map<NodeSubset, std::vector<int>>& batches() const { return batches_; }
  std::string to_canonical_json() const;

 private:
  int node_count_ = 0;
  std::vector<NodeSubset> owners_;            // by function, 1-based
  std::vector<std::vector<int>> per_node_;    // by node, 1-based
  std::map<NodeSubset, std::vector<int>> batches_;
};

// Canonical placement: pad to N-bar files, then deal consecutive runs of
// batch_size files to the size-r subsets in lexicographic order. Every node
// ends up with r*N-bar/K files.
FileAssignment assign_map_tasks(const JobSpec& spec);

// Same dealing for output functions over size-s subsets. Q must be divisible
// by (K choose s); unlike files, functions are never padded.
ReduceAssignment assign_reduce_tasks(const JobSpec& spec);

// Independent uniform size-r holder set for every file (no padding).
// Identical seeds give identical assignments.
FileAssignment random_placement(const JobSpec& spec, std::uint64_t seed);

// A fractional computation load r splits the job in two: files I1 run at
// floor(r), files I2 at ceil(r). |I1| is ceil(r)-r of the files rounded DOWN
// to a multiple of (K choose floor(r)); the remainder pads up independently.
struct SplitJob {
  bool degenerate = false;  // integer load: sub1 is the whole job
  Rational alpha = 0;       // ceil(r) - r
  JobSpec sub1;             // load floor(r), file_count |I1|
  JobSpec sub2;             // load ceil(r), file_count N - |I1|
  std::int64_t files_in_sub1 = 0;  // real files 1..files_in_sub1 go to sub1
};
SplitJob split_noninteger_r(const JobSpec& spec);

}  // namespace cdc
