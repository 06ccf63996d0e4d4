#include "cdc/placement.hpp"

#include <nlohmann/json.hpp>

#include <random>
#include <stdexcept>

namespace cdc {

bool JobSpec::load_is_integer() const {
  return denominator(computation_load) == 1;
}

int JobSpec::load_int() const {
  if (!load_is_integer())
    throw std::invalid_argument("JobSpec: computation load is not an integer");
  return numerator(computation_load).convert_to<int>();
}

void JobSpec::validate() const {
  if (node_count < 1 || node_count > 32)
    throw std::invalid_argument("JobSpec: node_count must be in [1, 32]");
  if (computation_load < 1 || computation_load > node_count)
    throw std::invalid_argument("JobSpec: computation load must be in [1, K]");
  if (reduce_replication < 1 || reduce_replication > node_count)
    throw std::invalid_argument("JobSpec: reduce replication must be in [1, K]");
  if (function_count < 1)
    throw std::invalid_argument("JobSpec: function_count must be positive");
  if (file_count < 1)
    throw std::invalid_argument("JobSpec: file_count must be positive");
  if (value_bits < 1)
    throw std::invalid_argument("JobSpec: value_bits must be positive");
}

PaddedFiles pad_files(std::int64_t file_count, int node_count, int load) {
  if (file_count < 1) throw std::invalid_argument("pad_files: need at least one file");
  if (load < 1 || load > node_count)
    throw std::invalid_argument("pad_files: load out of range");
  const std::int64_t subsets = binom(node_count, load);
  const std::int64_t batch = (file_count + subsets - 1) / subsets;
  return PaddedFiles{subsets * batch, batch};
}

FileAssignment FileAssignment::from_holder_sets(int node_count,
                                                std::vector<NodeSubset> holder_sets) {
  FileAssignment fa;
  fa.node_count_ = node_count;
  fa.per_node_.assign(node_count + 1, {});
  fa.holders_.resize(holder_sets.size() + 1);  // slot 0 unused
  for (std::size_t i = 0; i < holder_sets.size(); ++i) {
    const std::int64_t file = static_cast<std::int64_t>(i) + 1;
    NodeSubset& h = fa.holders_[file];
    h = std::move(holder_sets[i]);
    if (h.empty())
      throw std::invalid_argument("FileAssignment: file " + std::to_string(file) +
                                  " has no holder");
    for (int k : h) {
      if (k > node_count)
        throw std::invalid_argument("FileAssignment: holder exceeds node count");
      fa.per_node_[k].push_back(file);
    }
    fa.batches_[h].push_back(file);
  }
  fa.holders_.erase(fa.holders_.begin());  // shift to 0-based storage
  return fa;
}

const NodeSubset& FileAssignment::holders_of(std::int64_t file) const {
  if (file < 1 || file > file_count())
    throw std::out_of_range("FileAssignment: file index out of range");
  return holders_[file - 1];
}

const std::vector<std::int64_t>& FileAssignment::files_of(int node) const {
  if (node < 1 || node > node_count_)
    throw std::out_of_range("FileAssignment: node index out of range");
  return per_node_[node];
}

std::string FileAssignment::to_canonical_json() const {
  nlohmann::json j;
  j["node_count"] = node_count_;
  j["file_count"] = file_count();
  nlohmann::json b = nlohmann::json::object();
  for (const auto& [subset, files] : batches_) b[subset.to_string()] = files;
  j["batches"] = b;
  return j.dump();
}

ReduceAssignment ReduceAssignment::from_owner_sets(int node_count,
                                                   std::vector<NodeSubset> owner_sets) {
  ReduceAssignment ra;
  ra.node_count_ = node_count;
  ra.per_node_.assign(node_count + 1, {});
  ra.owners_.reserve(owner_sets.size());
  for (std::size_t i = 0; i < owner_sets.size(); ++i) {
    const int fn = static_cast<int>(i) + 1;
    NodeSubset h = std::move(owner_sets[i]);
    if (h.empty())
      throw std::invalid_argument("ReduceAssignment: function " + std::to_string(fn) +
                                  " has no owner");
    for (int k : h) {
      if (k > node_count)
        throw std::invalid_argument("ReduceAssignment: owner exceeds node count");
      ra.per_node_[k].push_back(fn);
    }
    ra.batches_[h].push_back(fn);
    ra.owners_.push_back(std::move(h));
  }
  return ra;
}

const NodeSubset& ReduceAssignment::owners_of(int function) const {
  if (function < 1 || function > function_count())
    throw std::out_of_range("ReduceAssignment: function index out of range");
  return owners_[function - 1];
}

const std::vector<int>& ReduceAssignment::functions_of(int node) const {
  if (node < 1 || node > node_count_)
    throw std::out_of_range("ReduceAssignment: node index out of range");
  return per_node_[node];
}

std::string ReduceAssignment::to_canonical_json() const {
  nlohmann::json j;
  j["node_count"] = node_count_;
  j["function_count"] = function_count();
  nlohmann::json b = nlohmann::json::object();
  for (const auto& [subset, fns] : batches_) b[subset.to_string()] = fns;
  j["batches"] = b;
  return j.dump();
}

FileAssignment assign_map_tasks(const JobSpec& spec) {
  spec.validate();
  const int r = spec.load_int();
  const PaddedFiles pf = pad_files(spec.file_count, spec.node_count, r);
  std::vector<NodeSubset> holders;
  holders.reserve(pf.padded_count);
  for (const NodeSubset& s : enumerate_subsets(spec.node_count, r))
    for (std::int64_t i = 0; i < pf.batch_size; ++i) holders.push_back(s);
  return FileAssignment::from_holder_sets(spec.node_count, std::move(holders));
}

ReduceAssignment assign_reduce_tasks(const JobSpec& spec) {
  spec.validate();
  const std::int64_t subsets = binom(spec.node_count, spec.reduce_replication);
  if (spec.function_count % subsets != 0)
    throw std::invalid_argument(
        "assign_reduce_tasks: function count " + std::to_string(spec.function_count) +
        " is not a multiple of " + std::to_string(subsets) +
        " (outputs are never padded); nearest valid counts are " +
        std::to_string((spec.function_count / subsets) * subsets) + " and " +
        std::to_string(((spec.function_count / subsets) + 1) * subsets));
  const std::int64_t batch = spec.function_count / subsets;
  std::vector<NodeSubset> owners;
  owners.reserve(spec.function_count);
  for (const NodeSubset& s : enumerate_subsets(spec.node_count, spec.reduce_replication))
    for (std::int64_t i = 0; i < batch; ++i) owners.push_back(s);
  return ReduceAssignment::from_owner_sets(spec.node_count, std::move(owners));
}

namespace {
// Unbiased bounded draw, stable across platforms (std distributions are not).
std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t n) {
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                              std::numeric_limits<std::uint64_t>::max() % n;
  std::uint64_t v;
  do {
    v = rng();
  } while (v >= limit);
  return v % n;
}
}  // namespace

FileAssignment random_placement(const JobSpec& spec, std::uint64_t seed) {
  spec.validate();
  const int r = spec.load_int();
  const std::int64_t subsets = binom(spec.node_count, r);
  std::mt19937_64 rng(seed);
  std::vector<NodeSubset> holders;
  holders.reserve(spec.file_count);
  for (std::int64_t i = 0; i < spec.file_count; ++i)
    holders.push_back(subset_unrank(
        static_cast<std::int64_t>(uniform_below(rng, static_cast<std::uint64_t>(subsets))),
        spec.node_count, r));
  return FileAssignment::from_holder_sets(spec.node_count, std::move(holders));
}

SplitJob split_noninteger_r(const JobSpec& spec) {
  spec.validate();
  SplitJob out;
  if (spec.load_is_integer()) {
    out.degenerate = true;
    out.alpha = 0;
    out.sub1 = spec;
    out.sub2 = spec;
    out.sub2.file_count = 0;
    out.files_in_sub1 = spec.file_count;
    return out;
  }
  const BigInt num = numerator(spec.computation_load);
  const BigInt den = denominator(spec.computation_load);
  const int r1 = static_cast<int>((num / den).convert_to<std::int64_t>());  // floor
  const int r2 = r1 + 1;
  out.alpha = Rational(r2) - spec.computation_load;

  // Files at the lower load: alpha*N rounded down to a full batch multiple.
  const std::int64_t group1 = binom(spec.node_count, r1);
  const Rational scaled = out.alpha * spec.file_count;
  const BigInt target = numerator(scaled) / denominator(scaled);  // floor
  std::int64_t files1 = (target.convert_to<std::int64_t>() / group1) * group1;
  if (files1 > spec.file_count) files1 = (spec.file_count / group1) * group1;

  out.sub1 = spec;
  out.sub1.computation_load = r1;
  out.sub1.file_count = files1;
  out.sub2 = spec;
  out.sub2.computation_load = r2;
  out.sub2.file_count = spec.file_count - files1;
  out.files_in_sub1 = files1;
  if (out.sub2.file_count == 0)
    throw std::invalid_argument("split_noninteger_r: no files left at the upper load");
  return out;
}

}  // namespace cdc
