#include "cdc/sortapp.hpp"

#include <algorithm>
#include <cstring>
#include <numeric>
#include <random>
#include <stdexcept>
#include <string>

#include "cdc/subsets.hpp"

namespace cdc {

namespace {

constexpr std::int64_t kMaxGroupRecords = 0xFFFFFFFFll;

std::uint32_t read_u32_le(const std::uint8_t* p) {
  return static_cast<std::uint32_t>(p[0]) |
         (static_cast<std::uint32_t>(p[1]) << 8) |
         (static_cast<std::uint32_t>(p[2]) << 16) |
         (static_cast<std::uint32_t>(p[3]) << 24);
}

void write_u32_le(std::uint8_t* p, std::uint32_t v) {
  p[0] = static_cast<std::uint8_t>(v);
  p[1] = static_cast<std::uint8_t>(v >> 8);
  p[2] = static_cast<std::uint8_t>(v >> 16);
  p[3] = static_cast<std::uint8_t>(v >> 24);
}

// Stable sort of fixed-width records by their big-endian key prefix.
Bytes sort_record_buffer(const Bytes& records, int key_bytes, int width) {
  const std::size_t count = records.size() / static_cast<std::size_t>(width);
  std::vector<std::uint32_t> order(count);
  std::iota(order.begin(), order.end(), 0u);
  const std::uint8_t* base = records.data();
  std::stable_sort(order.begin(), order.end(),
                   [&](std::uint32_t a, std::uint32_t b) {
                     return std::memcmp(base + static_cast<std::size_t>(a) * width,
                                        base + static_cast<std::size_t>(b) * width,
                                        static_cast<std::size_t>(key_bytes)) < 0;
                   });
  Bytes out(records.size());
  for (std::size_t i = 0; i < count; ++i) {
    std::memcpy(out.data() + i * static_cast<std::size_t>(width),
                base + static_cast<std::size_t>(order[i]) * width,
                static_cast<std::size_t>(width));
  }
  return out;
}

std::int64_t round_up_multiple(std::int64_t value, std::int64_t quantum) {
  return (value + quantum - 1) / quantum * quantum;
}

}  // namespace

void SortConfig::validate() const {
  if (node_count < 1 || node_count > 30) {
    throw std::invalid_argument("node count must lie in [1, 30], got " +
                                std::to_string(node_count));
  }
  if (computation_load < 1 || computation_load > node_count) {
    throw std::invalid_argument("computation load must lie in [1, " +
                                std::to_string(node_count) + "], got " +
                                std::to_string(computation_load));
  }
  if (record_count < 0 || record_count > kMaxGroupRecords) {
    throw std::invalid_argument("record count must lie in [0, 2^32), got " +
                                std::to_string(record_count));
  }
  if (key_bytes < 1 || value_bytes < 0) {
    throw std::invalid_argument("records need at least a 1-byte key");
  }
}

Bytes generate_records(const SortConfig& config) {
  config.validate();
  std::mt19937_64 rng(config.seed);
  Bytes records(static_cast<std::size_t>(config.record_count) *
                static_cast<std::size_t>(config.record_width()));
  for (auto& b : records) b = static_cast<std::uint8_t>(rng() & 0xFF);
  return records;
}

BigInt KeyPartition::range_begin(int index) const {
  if (index < 0 || index >= range_count_) {
    throw std::out_of_range("range index " + std::to_string(index) +
                            " outside [0, " + std::to_string(range_count_) +
                            ")");
  }
  return index == 0 ? BigInt(0) : splits_[static_cast<std::size_t>(index - 1)];
}

BigInt KeyPartition::range_end(int index) const {
  if (index < 0 || index >= range_count_) {
    throw std::out_of_range("range index " + std::to_string(index) +
                            " outside [0, " + std::to_string(range_count_) +
                            ")");
  }
  return index == range_count_ - 1 ? domain_size_
                                   : splits_[static_cast<std::size_t>(index)];
}

int KeyPartition::range_of(const std::uint8_t* key) const {
  int lo = 0;
  int hi = static_cast<int>(split_bytes_.size());  // answer in [lo, hi]
  while (lo < hi) {
    const int mid = (lo + hi) / 2;
    if (std::memcmp(split_bytes_[static_cast<std::size_t>(mid)].data(), key,
                    static_cast<std::size_t>(key_bytes_)) <= 0) {
      lo = mid + 1;  // split <= key: key is at or past range mid+1
    } else {
      hi = mid;
    }
  }
  return lo;
}

KeyPartition partition_key_domain(const BigInt& domain_max, int key_bytes,
                                  int range_count) {
  if (key_bytes < 1 || key_bytes > 64) {
    throw std::invalid_argument("key width must lie in [1, 64] bytes, got " +
                                std::to_string(key_bytes));
  }
  if (range_count < 1) {
    throw std::invalid_argument("need at least one key range");
  }
  if (domain_max < 0 || domain_max >> (8 * key_bytes) != 0) {
    throw std::invalid_argument("domain maximum does not fit in " +
                                std::to_string(key_bytes) + " bytes");
  }
  const BigInt domain_size = domain_max + 1;
  if (range_count > domain_size) {
    throw std::invalid_argument("cannot split a domain of " +
                                domain_size.str() + " keys into " +
                                std::to_string(range_count) + " ranges");
  }
  KeyPartition p;
  p.key_bytes_ = key_bytes;
  p.range_count_ = range_count;
  p.domain_size_ = domain_size;
  for (int i = 1; i < range_count; ++i) {
    BigInt split = BigInt(i) * domain_size / range_count;
    Bytes be(static_cast<std::size_t>(key_bytes), 0);
    BigInt rest = split;
    for (int b = key_bytes - 1; b >= 0 && rest != 0; --b) {
      be[static_cast<std::size_t>(b)] =
          static_cast<std::uint8_t>(rest & 0xFF);
      rest >>= 8;
    }
    p.splits_.push_back(std::move(split));
    p.split_bytes_.push_back(std::move(be));
  }
  return p;
}

std::vector<Bytes> hash_records_into_groups(const Bytes& file_contents,
                                            const KeyPartition& partition,
                                            int key_bytes, int value_bytes,
                                            std::size_t group_bytes) {
  const int width = key_bytes + value_bytes;
  if (key_bytes != partition.key_bytes()) {
    throw std::invalid_argument("partition was built for " +
                                std::to_string(partition.key_bytes()) +
                                "-byte keys, records carry " +
                                std::to_string(key_bytes));
  }
  if (file_contents.size() % static_cast<std::size_t>(width) != 0) {
    throw std::invalid_argument(
        "torn record: file holds " + std::to_string(file_contents.size()) +
        " bytes, record width is " + std::to_string(width));
  }
  if (group_bytes < 4) {
    throw std::invalid_argument("group buffer too small for its length prefix");
  }
  const std::size_t count = file_contents.size() / static_cast<std::size_t>(width);
  const int ranges = partition.range_count();

  std::vector<std::vector<std::uint32_t>> members(
      static_cast<std::size_t>(ranges));
  for (std::size_t i = 0; i < count; ++i) {
    const int q = partition.range_of(file_contents.data() +
                                     i * static_cast<std::size_t>(width));
    members[static_cast<std::size_t>(q)].push_back(
        static_cast<std::uint32_t>(i));
  }

  std::vector<Bytes> groups(static_cast<std::size_t>(ranges));
  for (int q = 0; q < ranges; ++q) {
    const auto& m = members[static_cast<std::size_t>(q)];
    const std::size_t need = 4 + m.size() * static_cast<std::size_t>(width);
    if (need > group_bytes) {
      throw std::invalid_argument(
          "group for range " + std::to_string(q + 1) + " needs " +
          std::to_string(need) + " bytes but the group size is " +
          std::to_string(group_bytes));
    }
    Bytes out(group_bytes, 0);
    write_u32_le(out.data(), static_cast<std::uint32_t>(m.size()));
    std::uint8_t* dst = out.data() + 4;
    for (const std::uint32_t i : m) {
      std::memcpy(dst,
                  file_contents.data() + static_cast<std::size_t>(i) * width,
                  static_cast<std::size_t>(width));
      dst += width;
    }
    groups[static_cast<std::size_t>(q)] = std::move(out);
  }
  return groups;
}

Bytes merge_sort_groups(const std::vector<Bytes>& groups,
                        const std::vector<bool>& is_padding, int key_bytes,
                        int value_bytes) {
  const int width = key_bytes + value_bytes;
  Bytes all;
  for (std::size_t n = 0; n < groups.size(); ++n) {
    if (n < is_padding.size() && is_padding[n]) continue;
    const Bytes& g = groups[n];
    if (g.size() < 4) {
      throw std::invalid_argument("group " + std::to_string(n + 1) +
                                  " lacks a length prefix");
    }
    const std::uint32_t count = read_u32_le(g.data());
    const std::size_t need =
        4 + static_cast<std::size_t>(count) * static_cast<std::size_t>(width);
    if (need > g.size()) {
      throw std::invalid_argument(
          "group " + std::to_string(n + 1) + " claims " +
          std::to_string(count) + " records but holds only " +
          std::to_string(g.size()) + " bytes");
    }
    all.insert(all.end(), g.begin() + 4,
               g.begin() + static_cast<std::ptrdiff_t>(need));
  }
  return sort_record_buffer(all, key_bytes, width);
}

Bytes single_machine_sort(const Bytes& records, int key_bytes,
                          int value_bytes) {
  const int width = key_bytes + value_bytes;
  if (records.size() % static_cast<std::size_t>(width) != 0) {
    throw std::invalid_argument(
        "torn record: buffer holds " + std::to_string(records.size()) +
        " bytes, record width is " + std::to_string(width));
  }
  return sort_record_buffer(records, key_bytes, width);
}

SortRunResult run_coded_sort(const SortConfig& config) {
  config.validate();
  const int k = config.node_count;
  const int r = config.computation_load;
  const int width = config.record_width();

  const std::int64_t files = binom(k, r);
  const Bytes records = generate_records(config);

  // Deal records to files in contiguous runs, longer runs first.
  const std::int64_t per_file = config.record_count / files;
  const std::int64_t extra = config.record_count % files;
  std::vector<Bytes> inputs;
  inputs.reserve(static_cast<std::size_t>(files));
  const std::uint8_t* cursor = records.data();
  for (std::int64_t n = 0; n < files; ++n) {
    const std::int64_t count = per_file + (n < extra ? 1 : 0);
    const std::size_t bytes =
        static_cast<std::size_t>(count) * static_cast<std::size_t>(width);
    inputs.emplace_back(cursor, cursor + bytes);
    cursor += bytes;
  }

  const BigInt domain_max = (BigInt(1) << (8 * config.key_bytes)) - 1;
  const KeyPartition partition =
      partition_key_domain(domain_max, config.key_bytes, k);

  // Size every group to the largest one, keeping segments whole bytes.
  std::int64_t max_group_records = 0;
  for (const Bytes& file : inputs) {
    std::vector<std::int64_t> counts(static_cast<std::size_t>(k), 0);
    const std::size_t n_rec = file.size() / static_cast<std::size_t>(width);
    for (std::size_t i = 0; i < n_rec; ++i) {
      const int q =
          partition.range_of(file.data() + i * static_cast<std::size_t>(width));
      counts[static_cast<std::size_t>(q)] += 1;
    }
    for (const std::int64_t c : counts)
      max_group_records = std::max(max_group_records, c);
  }
  const std::int64_t raw_bits = 8 * (4 + max_group_records * width);
  const std::int64_t value_bits = round_up_multiple(raw_bits, 8 * r);

  JobSpec spec;
  spec.node_count = k;
  spec.function_count = k;
  spec.file_count = files;
  spec.computation_load = r;
  spec.reduce_replication = 1;
  spec.value_bits = value_bits;

  const std::size_t group_bytes = static_cast<std::size_t>(value_bits / 8);
  JobFunctions jf;
  jf.map_fn = [&partition, &config, group_bytes](std::int64_t,
                                                 const Bytes& contents) {
    return hash_records_into_groups(contents, partition, config.key_bytes,
                                    config.value_bytes, group_bytes);
  };
  jf.reduce_fn = [&config](int, const std::vector<Bytes>& values,
                           const std::vector<bool>& is_padding) {
    return merge_sort_groups(values, is_padding, config.key_bytes,
                             config.value_bytes);
  };

  SortRunResult result;
  result.value_bits = value_bits;
  // Every record lands in exactly one group, so the useful payload is the
  // record bytes themselves; the prefixes and zero fill are padding cost.
  result.useful_density =
      Rational(BigInt(config.record_count) * width * 8,
               BigInt(k) * files * value_bits);

  Bytes uncoded_sorted;
  for (const ShuffleStrategy strategy :
       {ShuffleStrategy::kCoded, ShuffleStrategy::kUncoded}) {
    JobResult job = run_job(spec, jf, inputs, strategy, 0, config.engine);
    Bytes sorted;
    for (int q = 1; q <= k; ++q) {
      const int owner = job.reduces.owners_of(q).members().front();
      const Bytes& run = job.outputs[static_cast<std::size_t>(owner)].at(q);
      sorted.insert(sorted.end(), run.begin(), run.end());
    }
    SortStrategyOutcome outcome;
    outcome.report = job.shuffle.report;
    outcome.useful_load = outcome.report.load() * result.useful_density;
    if (strategy == ShuffleStrategy::kCoded) {
      result.coded = std::move(outcome);
      result.sorted = std::move(sorted);
    } else {
      result.uncoded = std::move(outcome);
      uncoded_sorted = std::move(sorted);
    }
  }

  const Bytes oracle =
      single_machine_sort(records, config.key_bytes, config.value_bytes);
  result.matches_oracle =
      result.sorted == oracle && uncoded_sorted == oracle;
  return result;
}

}  // namespace cdc
