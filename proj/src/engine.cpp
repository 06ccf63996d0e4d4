#include "cdc/engine.hpp"

#include <algorithm>
#include <atomic>
#include <numeric>
#include <stdexcept>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace cdc {

namespace {

int thread_count(const EngineOptions& opts) {
#ifdef _OPENMP
  return opts.workers > 0 ? opts.workers : omp_get_max_threads();
#else
  (void)opts;
  return 1;
#endif
}

// Rethrows the first exception captured inside a parallel region.
class ErrorCollector {
 public:
  void capture() {
#ifdef _OPENMP
#pragma omp critical(cdc_error_collector)
#endif
    {
      if (!error_) error_ = std::current_exception();
      armed_.store(true, std::memory_order_release);
    }
  }
  bool armed() const { return armed_.load(std::memory_order_acquire); }
  void rethrow_if_set() const {
    if (error_) std::rethrow_exception(error_);
  }

 private:
  std::exception_ptr error_;
  std::atomic<bool> armed_{false};
};

std::int64_t functions_per_owner_set(const JobSpec& spec) {
  const std::int64_t owner_sets = binom(spec.node_count, spec.reduce_replication);
  if (spec.function_count % owner_sets != 0)
    throw std::invalid_argument("function count must be a multiple of (K choose s)");
  return spec.function_count / owner_sets;
}

}  // namespace

std::string to_string(ShuffleStrategy s) {
  switch (s) {
    case ShuffleStrategy::kCoded: return "coded";
    case ShuffleStrategy::kUncoded: return "uncoded";
    case ShuffleStrategy::kRandomPlacementCoded: return "random_placement_coded";
  }
  return "?";
}

Rational LoadReport::load() const {
  return Rational(BigInt(total_bits),
                  BigInt(function_count) * file_count * value_bits);
}

Rational LoadReport::load_padded_norm() const {
  return Rational(BigInt(total_bits),
                  BigInt(function_count) * padded_file_count * value_bits);
}

std::string LoadReport::csv_header() {
  return "strategy,K,r,s,Q,N,T,total_bits,load_num,load_den";
}

std::string LoadReport::csv_row() const {
  const Rational l = load();
  std::string r;
  r += to_string(strategy);
  r += ',' + std::to_string(node_count);
  r += ',' + to_fraction_string(computation_load);
  r += ',' + std::to_string(reduce_replication);
  r += ',' + std::to_string(function_count);
  r += ',' + std::to_string(file_count);
  r += ',' + std::to_string(value_bits);
  r += ',' + std::to_string(total_bits);
  r += ',' + numerator(l).str();
  r += ',' + denominator(l).str();
  return r;
}

void validate_value_bits(const JobSpec& spec, bool variable_batch_sizes) {
  spec.validate();
  const int r = spec.load_int();
  const int s = spec.reduce_replication;
  const int K = spec.node_count;
  if (r == K) return;  // nothing is shuffled
  const std::int64_t eta2 = functions_per_owner_set(spec);
  const std::int64_t eta1 =
      variable_batch_sizes ? 1 : pad_files(spec.file_count, K, r).batch_size;

  const int lo = std::max(r + 1, s);
  const int hi = std::min(r + s, K);
  std::int64_t t_multiple = 1;
  for (int sz = lo; sz <= hi; ++sz) {
    const std::int64_t per_set = binom(r, sz - s) * eta1 * eta2;  // values per exclusive set
    const std::int64_t granule = 8ll * r;
    const std::int64_t need = granule / std::gcd(granule, per_set);
    t_multiple = std::lcm(t_multiple, need);
    const std::int64_t coeffs = binom(sz - 1, r - 1);
    if (coeffs > 255)
      throw std::invalid_argument(
          "validate_value_bits: round with " + std::to_string(sz) +
          " nodes needs " + std::to_string(coeffs) +
          " distinct coefficients; GF(2^8) offers only 255");
  }
  if (spec.value_bits % t_multiple != 0)
    throw std::invalid_argument(
        "validate_value_bits: value_bits=" + std::to_string(spec.value_bits) +
        " does not produce whole-byte segments in every round; use a multiple of " +
        std::to_string(t_multiple));
}

IntermediateStore run_map_phase(const JobSpec& spec, const FileAssignment& files,
                                const JobFunctions& jf, const std::vector<Bytes>& inputs,
                                const EngineOptions& opts) {
  spec.validate();
  if (!jf.map_fn) throw std::invalid_argument("run_map_phase: map_fn not set");
  if (static_cast<std::int64_t>(inputs.size()) != spec.file_count)
    throw std::invalid_argument("run_map_phase: expected one input per real file");
  if (files.node_count() != spec.node_count)
    throw std::invalid_argument("run_map_phase: assignment node count mismatch");
  if (files.file_count() < spec.file_count)
    throw std::invalid_argument("run_map_phase: assignment misses real files");

  IntermediateStore store(spec.node_count, spec.function_count, files.file_count(),
                          spec.value_bits);
  const Bytes zero_value(static_cast<std::size_t>(store.value_bytes()), 0);

  // Flatten (node, file) placements into independent tasks.
  std::vector<std::pair<int, std::int64_t>> tasks;
  for (int k = 1; k <= spec.node_count; ++k)
    for (std::int64_t n : files.files_of(k)) tasks.emplace_back(k, n);

  ErrorCollector errors;
  const int nt = thread_count(opts);
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic, 16) num_threads(nt)
#endif
  for (std::ptrdiff_t t = 0; t < static_cast<std::ptrdiff_t>(tasks.size()); ++t) {
    if (errors.armed()) continue;
    try {
      const auto [node, file] = tasks[static_cast<std::size_t>(t)];
      if (file > spec.file_count) {
        // Padding file: all-zero values, map_fn not consulted.
        for (int q = 1; q <= spec.function_count; ++q)
          store.put(node, q, file, zero_value, IntermediateStore::Provenance::kMapped);
        continue;
      }
      const std::vector<Bytes> values = jf.map_fn(file, inputs[file - 1]);
      if (static_cast<int>(values.size()) != spec.function_count)
        throw std::invalid_argument("map_fn returned wrong number of values");
      for (int q = 1; q <= spec.function_count; ++q)
        store.put(node, q, file, values[q - 1], IntermediateStore::Provenance::kMapped);
    } catch (...) {
      errors.capture();
    }
  }
  errors.rethrow_if_set();
  (void)nt;
  return store;
}

namespace {

struct RoundSubset {
  int size = 0;
  NodeSubset subset;
};

LoadReport make_report(const JobSpec& spec, const FileAssignment& files,
                       ShuffleStrategy strategy) {
  LoadReport rep;
  rep.strategy = strategy;
  rep.node_count = spec.node_count;
  rep.function_count = spec.function_count;
  rep.reduce_replication = spec.reduce_replication;
  rep.computation_load = spec.computation_load;
  rep.file_count = spec.file_count;
  rep.padded_file_count = files.file_count();
  rep.value_bits = spec.value_bits;
  rep.bits_per_sender.assign(spec.node_count + 1, 0);
  return rep;
}

ShuffleResult run_uncoded_shuffle(const JobSpec& spec, const FileAssignment& files,
                                  const ReduceAssignment& reduces,
                                  IntermediateStore& store) {
  ShuffleResult res;
  res.report = make_report(spec, files, ShuffleStrategy::kUncoded);
  std::int64_t bits = 0;
  for (int q = 1; q <= spec.function_count; ++q) {
    const NodeSubset& owners = reduces.owners_of(q);
    for (std::int64_t n = 1; n <= files.file_count(); ++n) {
      const NodeSubset& holders = files.holders_of(n);
      std::vector<int> requesters;
      for (int k : owners)
        if (!holders.contains(k)) requesters.push_back(k);
      if (requesters.empty()) continue;
      const int sender = holders.members().front();  // lowest-index holder
      const auto payload = store.value(sender, q, n);
      MulticastMessage m;
      m.sender = static_cast<std::uint16_t>(sender);
      m.subset = NodeSubset(std::move(requesters));
      m.index = 0;
      m.payload.bytes.assign(payload.begin(), payload.end());
      m.payload.bits = static_cast<std::uint64_t>(spec.value_bits);
      for (int k : m.subset)
        store.put(k, q, n, payload, IntermediateStore::Provenance::kDecoded);
      bits += spec.value_bits;
      res.report.bits_per_sender[sender] += spec.value_bits;
      res.report.message_count += 1;
      res.log.push_back(std::move(m));
    }
  }
  res.report.total_bits = bits;
  if (bits > 0) res.report.bits_per_round.emplace_back(0, bits);
  return res;
}

ShuffleResult run_coded_shuffle(const JobSpec& spec, const FileAssignment& files,
                                const ReduceAssignment& reduces,
                                IntermediateStore& store, ShuffleStrategy strategy,
                                const EngineOptions& opts) {
  const bool allow_ragged = strategy == ShuffleStrategy::kRandomPlacementCoded;
  validate_value_bits(spec, allow_ragged);
  const int r = spec.load_int();
  const int s = spec.reduce_replication;
  const int K = spec.node_count;

  ShuffleResult res;
  res.report = make_report(spec, files, strategy);
  if (r == K) return res;  // every node maps everything

  const GaloisField field{FieldSpec::gf256()};
  const std::int64_t eta1 = allow_ragged ? -1 : pad_files(spec.file_count, K, r).batch_size;
  const std::int64_t eta2 = functions_per_owner_set(spec);

  std::vector<RoundSubset> all;
  for (int sz = std::max(r + 1, s); sz <= std::min(r + s, K); ++sz)
    for (NodeSubset& sub : enumerate_subsets(K, sz)) all.push_back({sz, std::move(sub)});

  const int nt = thread_count(opts);
  ErrorCollector errors;

  // Phase A: exclusive sets, segments and coded messages, one task per subset.
  std::vector<std::vector<ExclusiveSet>> sets_by_subset(all.size());
  std::vector<std::vector<SegmentGroup>> groups_by_subset(all.size());
  std::vector<std::vector<MulticastMessage>> msgs_by_subset(all.size());
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic) num_threads(nt)
#endif
  for (std::ptrdiff_t t = 0; t < static_cast<std::ptrdiff_t>(all.size()); ++t) {
    if (errors.armed()) continue;
    try {
      const NodeSubset& S = all[static_cast<std::size_t>(t)].subset;
      auto sets = build_exclusive_sets(S, r, files, reduces);
      std::vector<SegmentGroup> groups;
      groups.reserve(sets.size());
      for (const ExclusiveSet& es : sets) {
        if (!allow_ragged) {
          const std::int64_t expect =
              binom(r, S.size() - s) * eta1 * eta2;
          if (static_cast<std::int64_t>(es.entries.size()) != expect)
            throw std::runtime_error("coded shuffle: exclusive set " +
                                     es.owner_subset.to_string() + " within " +
                                     S.to_string() + " has " +
                                     std::to_string(es.entries.size()) +
                                     " values, expected " + std::to_string(expect));
        }
        // Lowest owner's copy; all holders computed identical values.
        groups.push_back(segment(es, store, es.owner_subset.members().front()));
      }
      std::vector<MulticastMessage> msgs;
      for (int k : S) {
        std::vector<SegmentGroup> mine;
        for (const SegmentGroup& g : groups)
          if (g.owner_subset.contains(k)) mine.push_back(g);
        std::vector<MulticastMessage> mk = encode_node_messages(k, S, mine, field);
        for (MulticastMessage& m : mk) msgs.push_back(std::move(m));
      }
      sets_by_subset[static_cast<std::size_t>(t)] = std::move(sets);
      groups_by_subset[static_cast<std::size_t>(t)] = std::move(groups);
      msgs_by_subset[static_cast<std::size_t>(t)] = std::move(msgs);
    } catch (...) {
      errors.capture();
    }
  }
  errors.rethrow_if_set();

  // Phase B: every member of S decodes every other sender's batch.
  std::vector<std::pair<std::size_t, int>> tasks;  // (subset idx, receiver)
  for (std::size_t i = 0; i < all.size(); ++i)
    for (int j : all[i].subset) tasks.emplace_back(i, j);
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic) num_threads(nt)
#endif
  for (std::ptrdiff_t t = 0; t < static_cast<std::ptrdiff_t>(tasks.size()); ++t) {
    if (errors.armed()) continue;
    try {
      const auto [si, receiver] = tasks[static_cast<std::size_t>(t)];
      const NodeSubset& S = all[si].subset;
      const auto& sets = sets_by_subset[si];
      const auto& groups = groups_by_subset[si];
      const auto& msgs = msgs_by_subset[si];

      // Recovered segments per owner subset, indexed by owner position.
      std::map<NodeSubset, std::vector<BitString>> recovered;
      for (int sender : S) {
        if (sender == receiver) continue;
        std::vector<MulticastMessage> batch;
        for (const MulticastMessage& m : msgs)
          if (m.sender == sender) batch.push_back(m);
        if (batch.empty()) continue;  // sender had only empty segments

        std::vector<SegmentGroup> known;
        for (const SegmentGroup& g : groups)
          if (g.owner_subset.contains(sender) && g.owner_subset.contains(receiver))
            known.push_back(g);
        std::vector<BitString> segs =
            decode_messages(receiver, sender, S, r, batch, known, field);

        const std::vector<NodeSubset> subs = subsets_containing(sender, S, r);
        const std::vector<int> positions = complement_indices(receiver, sender, S, r);
        for (std::size_t i = 0; i < positions.size(); ++i) {
          const NodeSubset& owner = subs[static_cast<std::size_t>(positions[i] - 1)];
          auto [it, inserted] = recovered.try_emplace(owner);
          if (inserted) it->second.resize(static_cast<std::size_t>(r));
          // Trim the zero padding added for ragged groups.
          const SegmentGroup* g = nullptr;
          for (const SegmentGroup& cand : groups)
            if (cand.owner_subset == owner) {
              g = &cand;
              break;
            }
          BitString seg = std::move(segs[i]);
          seg.resize_bits(g->segment_bits);
          it->second[static_cast<std::size_t>(owner.index_of(sender))] = std::move(seg);
        }
      }

      // Reassemble each foreign group and deliver its values.
      for (const ExclusiveSet& es : sets) {
        if (es.owner_subset.contains(receiver) || es.entries.empty()) continue;
        const auto it = recovered.find(es.owner_subset);
        if (it == recovered.end())
          throw std::runtime_error("coded shuffle: nothing recovered for group " +
                                   es.owner_subset.to_string());
        BitString whole;
        for (const BitString& seg : it->second) whole.append(seg);
        const std::uint64_t tbits = static_cast<std::uint64_t>(spec.value_bits);
        if (whole.bits != tbits * es.entries.size())
          throw std::runtime_error("coded shuffle: reassembled group has wrong size");
        for (std::size_t e = 0; e < es.entries.size(); ++e) {
          const BitString v = whole.slice(e * tbits, tbits);
          store.put(receiver, es.entries[e].function, es.entries[e].file, v.bytes,
                    IntermediateStore::Provenance::kDecoded);
        }
      }
    } catch (...) {
      errors.capture();
    }
  }
  errors.rethrow_if_set();

  // Canonical log order: rounds ascend, subsets lexicographic within a round
  // (enumeration order), senders ascending, indices ascending.
  std::map<int, std::int64_t> round_bits;
  for (std::size_t i = 0; i < all.size(); ++i) {
    for (MulticastMessage& m : msgs_by_subset[i]) {
      const std::int64_t bits = static_cast<std::int64_t>(m.payload.bits);
      res.report.total_bits += bits;
      res.report.bits_per_sender[m.sender] += bits;
      round_bits[all[i].size] += bits;
      res.report.message_count += 1;
      res.log.push_back(std::move(m));
    }
  }
  for (const auto& [sz, bits] : round_bits) res.report.bits_per_round.emplace_back(sz, bits);
  return res;
}

}  // namespace

ShuffleResult run_shuffle(const JobSpec& spec, const FileAssignment& files,
                          const ReduceAssignment& reduces, IntermediateStore& store,
                          ShuffleStrategy strategy, const EngineOptions& opts) {
  spec.validate();
  if (files.file_count() != store.file_count() ||
      spec.function_count != store.function_count() ||
      spec.node_count != store.node_count())
    throw std::invalid_argument("run_shuffle: store does not match job");
  if (reduces.node_count() != spec.node_count ||
      reduces.function_count() != spec.function_count)
    throw std::invalid_argument("run_shuffle: reduce assignment does not match job");

  ShuffleResult res = strategy == ShuffleStrategy::kUncoded
                          ? run_uncoded_shuffle(spec, files, reduces, store)
                          : run_coded_shuffle(spec, files, reduces, store, strategy, opts);

  // Every node must now hold every value its functions need.
  for (int k = 1; k <= spec.node_count; ++k)
    for (int q : reduces.functions_of(k))
      for (std::int64_t n = 1; n <= files.file_count(); ++n)
        if (!store.has(k, q, n))
          throw std::runtime_error("run_shuffle: value (" + std::to_string(q) + "," +
                                   std::to_string(n) + ") unreachable at node " +
                                   std::to_string(k));
  return res;
}

std::vector<std::map<int, Bytes>> run_reduce_phase(const JobSpec& spec,
                                                   const ReduceAssignment& reduces,
                                                   const IntermediateStore& store,
                                                   const JobFunctions& jf,
                                                   const EngineOptions& opts) {
  if (!jf.reduce_fn) throw std::invalid_argument("run_reduce_phase: reduce_fn not set");
  const std::int64_t n_padded = store.file_count();
  std::vector<bool> is_padding(static_cast<std::size_t>(n_padded), false);
  for (std::int64_t n = spec.file_count + 1; n <= n_padded; ++n)
    is_padding[static_cast<std::size_t>(n - 1)] = true;

  std::vector<std::pair<int, int>> tasks;  // (node, function)
  for (int k = 1; k <= spec.node_count; ++k)
    for (int q : reduces.functions_of(k)) tasks.emplace_back(k, q);

  std::vector<std::map<int, Bytes>> out(static_cast<std::size_t>(spec.node_count) + 1);
  std::vector<Bytes> results(tasks.size());
  ErrorCollector errors;
  const int nt = thread_count(opts);
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic) num_threads(nt)
#endif
  for (std::ptrdiff_t t = 0; t < static_cast<std::ptrdiff_t>(tasks.size()); ++t) {
    if (errors.armed()) continue;
    try {
      const auto [node, q] = tasks[static_cast<std::size_t>(t)];
      std::vector<Bytes> values;
      values.reserve(static_cast<std::size_t>(n_padded));
      for (std::int64_t n = 1; n <= n_padded; ++n) {
        const auto v = store.value(node, q, n);
        values.emplace_back(v.begin(), v.end());
      }
      results[static_cast<std::size_t>(t)] = jf.reduce_fn(q, values, is_padding);
    } catch (...) {
      errors.capture();
    }
  }
  errors.rethrow_if_set();
  (void)nt;
  for (std::size_t t = 0; t < tasks.size(); ++t)
    out[static_cast<std::size_t>(tasks[t].first)][tasks[t].second] = std::move(results[t]);
  return out;
}

OracleReport verify_against_oracle(const JobSpec& spec, const JobFunctions& jf,
                                   const std::vector<Bytes>& inputs,
                                   const std::vector<std::map<int, Bytes>>& outputs,
                                   const IntermediateStore* store) {
  const std::int64_t n_padded = store != nullptr
                                    ? store->file_count()
                                    : pad_files(spec.file_count, spec.node_count,
                                                spec.load_is_integer() ? spec.load_int() : 1)
                                          .padded_count;
  // Direct single-machine evaluation.
  const std::size_t value_bytes = static_cast<std::size_t>((spec.value_bits + 7) / 8);
  std::vector<std::vector<Bytes>> by_file;  // [file-1][q-1]
  by_file.reserve(static_cast<std::size_t>(n_padded));
  for (std::int64_t n = 1; n <= n_padded; ++n) {
    if (n <= spec.file_count) {
      by_file.push_back(jf.map_fn(n, inputs[static_cast<std::size_t>(n - 1)]));
    } else {
      by_file.emplace_back(static_cast<std::size_t>(spec.function_count),
                           Bytes(value_bytes, 0));
    }
  }

  if (store != nullptr) {
    for (int k = 1; k <= store->node_count(); ++k)
      for (int q = 1; q <= spec.function_count; ++q)
        for (std::int64_t n = 1; n <= n_padded; ++n) {
          if (!store->has(k, q, n)) continue;
          const auto got = store->value(k, q, n);
          const Bytes& want = by_file[static_cast<std::size_t>(n - 1)]
                                     [static_cast<std::size_t>(q - 1)];
          if (!std::equal(got.begin(), got.end(), want.begin(), want.end()))
            return {false, "intermediate value (" + std::to_string(q) + "," +
                               std::to_string(n) + ") diverges at node " +
                               std::to_string(k)};
        }
  }

  std::vector<bool> is_padding(static_cast<std::size_t>(n_padded), false);
  for (std::int64_t n = spec.file_count + 1; n <= n_padded; ++n)
    is_padding[static_cast<std::size_t>(n - 1)] = true;
  std::vector<bool> seen(static_cast<std::size_t>(spec.function_count) + 1, false);
  for (int q = 1; q <= spec.function_count; ++q) {
    std::vector<Bytes> values;
    values.reserve(static_cast<std::size_t>(n_padded));
    for (std::int64_t n = 1; n <= n_padded; ++n)
      values.push_back(by_file[static_cast<std::size_t>(n - 1)]
                              [static_cast<std::size_t>(q - 1)]);
    const Bytes want = jf.reduce_fn(q, values, is_padding);
    for (std::size_t node = 1; node < outputs.size(); ++node) {
      const auto it = outputs[node].find(q);
      if (it == outputs[node].end()) continue;
      seen[static_cast<std::size_t>(q)] = true;
      if (it->second != want)
        return {false, "output " + std::to_string(q) + " diverges at node " +
                           std::to_string(node)};
    }
  }
  for (int q = 1; q <= spec.function_count; ++q)
    if (!seen[static_cast<std::size_t>(q)])
      return {false, "output " + std::to_string(q) + " was not computed by any node"};
  return {true, ""};
}

JobResult run_job(const JobSpec& spec, const JobFunctions& jf,
                  const std::vector<Bytes>& inputs, ShuffleStrategy strategy,
                  std::uint64_t seed, const EngineOptions& opts) {
  FileAssignment fa = strategy == ShuffleStrategy::kRandomPlacementCoded
                          ? random_placement(spec, seed)
                          : assign_map_tasks(spec);
  ReduceAssignment ra = assign_reduce_tasks(spec);
  IntermediateStore store = run_map_phase(spec, fa, jf, inputs, opts);
  ShuffleResult shuffle = run_shuffle(spec, fa, ra, store, strategy, opts);
  std::vector<std::map<int, Bytes>> outputs =
      run_reduce_phase(spec, ra, store, jf, opts);
  return JobResult{std::move(fa), std::move(ra), std::move(store), std::move(shuffle),
                   std::move(outputs)};
}

}  // namespace cdc
