#include "cdc/codec.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <string>

#include "cdc/kernels.hpp"

namespace cdc {

std::vector<ExclusiveSet> build_exclusive_sets(const NodeSubset& shuffle_subset,
                                               int load,
                                               const FileAssignment& files,
                                               const ReduceAssignment& reduces) {
  if (load < 1 || load > shuffle_subset.size())
    throw std::invalid_argument("build_exclusive_sets: load out of range");

  // Functions that could appear for some owner subset: reduced by nobody
  // outside S. Checked once, then narrowed per owner subset.
  std::vector<int> inside;
  for (int q = 1; q <= reduces.function_count(); ++q)
    if (reduces.owners_of(q).subset_of(shuffle_subset)) inside.push_back(q);

  std::vector<ExclusiveSet> out;
  for (const NodeSubset& owner : subsets_within(shuffle_subset, load)) {
    ExclusiveSet es;
    es.shuffle_subset = shuffle_subset;
    es.owner_subset = owner;
    // Files mapped by exactly this owner set.
    const auto it = files.batches().find(owner);
    if (it != files.batches().end()) {
      for (int q : inside) {
        bool needed_by_rest = true;
        for (int k : shuffle_subset)
          if (!owner.contains(k) && !reduces.owners_of(q).contains(k)) {
            needed_by_rest = false;
            break;
          }
        if (!needed_by_rest) continue;
        for (std::int64_t n : it->second) es.entries.push_back({q, n});
      }
    }
    out.push_back(std::move(es));
  }
  return out;
}

SegmentGroup segment(const ExclusiveSet& es, const IntermediateStore& store,
                     int reader_node) {
  const int load = es.owner_subset.size();
  SegmentGroup g;
  g.shuffle_subset = es.shuffle_subset;
  g.owner_subset = es.owner_subset;

  BitString all;
  for (const ExclusiveSetEntry& e : es.entries) {
    const auto v = store.value(reader_node, e.function, e.file);
    BitString b;
    b.bytes.assign(v.begin(), v.end());
    b.bits = static_cast<std::uint64_t>(store.value_bits());
    all.append(b);
  }
  if (all.bits % load != 0) {
    const std::uint64_t need =
        static_cast<std::uint64_t>(load) /
        std::gcd(static_cast<std::uint64_t>(load),
                 static_cast<std::uint64_t>(es.entries.size()));
    throw std::invalid_argument(
        "segment: " + std::to_string(all.bits) + " concatenated bits not divisible by load " +
        std::to_string(load) + "; smallest fix is value_bits a multiple of " +
        std::to_string(need));
  }
  g.segment_bits = all.bits / load;
  g.segments.reserve(load);
  for (int i = 0; i < load; ++i)
    g.segments.push_back(all.slice(static_cast<std::uint64_t>(i) * g.segment_bits,
                                   g.segment_bits));
  return g;
}

namespace {

void check_alpha_capacity(const GaloisField& field, std::size_t needed) {
  const std::uint64_t nonzero =
      (field.spec().m == 32) ? 0xFFFFFFFFull : (std::uint64_t)field.order() - 1;
  if (needed > nonzero)
    throw std::invalid_argument(
        "field too small: need " + std::to_string(needed) +
        " distinct nonzero coefficients but GF(2^" + std::to_string(field.spec().m) +
        ") has only " + std::to_string(nonzero));
}

}  // namespace

std::vector<MulticastMessage> encode_node_messages(int sender,
                                                   const NodeSubset& shuffle_subset,
                                                   const std::vector<SegmentGroup>& groups,
                                                   const GaloisField& field) {
  if (groups.empty())
    throw std::invalid_argument("encode_node_messages: no segment groups");
  const int load = groups[0].owner_subset.size();
  const std::size_t n1 = groups.size();
  const std::int64_t n2 = binom(shuffle_subset.size() - 2, load - 1);
  if (static_cast<std::int64_t>(n1) !=
      binom(shuffle_subset.size() - 1, load - 1))
    throw std::invalid_argument("encode_node_messages: wrong group count for subset");

  // The sender's own segment from each group, padded to a common length.
  std::uint64_t max_bits = 0;
  std::vector<const BitString*> mine(n1);
  for (std::size_t i = 0; i < n1; ++i) {
    const int pos = groups[i].owner_subset.index_of(sender);
    if (pos < 0)
      throw std::invalid_argument("encode_node_messages: sender not in owner subset");
    mine[i] = &groups[i].segments[pos];
    max_bits = std::max(max_bits, mine[i]->bits);
  }
  if (max_bits == 0) return {};
  check_alpha_capacity(field, n1);

  std::vector<MulticastMessage> out;
  out.reserve(static_cast<std::size_t>(n2));
  if (n2 == 1) {
    // Plain XOR of the segments; no field multiplication involved.
    BitString acc = BitString::zeros(max_bits);
    for (const BitString* s : mine) acc.xor_with(*s);
    out.push_back({static_cast<std::uint16_t>(sender), shuffle_subset, 1, std::move(acc)});
    return out;
  }

  if (field.spec().m != 8)
    throw std::invalid_argument("encode_node_messages: coded path expects GF(2^8)");
  for (const BitString* s : mine)
    if (s->bits % 8 != 0)
      throw std::invalid_argument(
          "encode_node_messages: segment bit counts must be whole bytes for "
          "word-wise coding (adjust value_bits)");

  const std::size_t nbytes = max_bits / 8;
  for (std::int64_t i = 0; i < n2; ++i) {
    BitString acc = BitString::zeros(max_bits);
    for (std::size_t j = 0; j < n1; ++j) {
      // Coefficient alpha_j^i with alpha_j = j+1: the first n1 nonzero elements.
      const std::uint32_t coeff = field.pow(static_cast<std::uint32_t>(j + 1),
                                            static_cast<std::uint64_t>(i));
      kernels::axpy_gf256(field.mul_row256(static_cast<std::uint8_t>(coeff)),
                          acc.bytes.data(), mine[j]->bytes.data(),
                          std::min<std::size_t>(mine[j]->bytes.size(), nbytes));
    }
    out.push_back({static_cast<std::uint16_t>(sender), shuffle_subset,
                   static_cast<std::uint16_t>(i + 1), std::move(acc)});
  }
  return out;
}

std::vector<BitString> decode_messages(int receiver, int sender,
                                       const NodeSubset& shuffle_subset, int load,
                                       std::span<const MulticastMessage> received,
                                       const std::vector<SegmentGroup>& known_groups,
                                       const GaloisField& field) {
  const std::vector<NodeSubset> subs = subsets_containing(sender, shuffle_subset, load);
  const std::vector<int> unknown = complement_indices(receiver, sender, shuffle_subset, load);
  const std::size_t n1 = subs.size();
  const std::size_t n2 = unknown.size();
  if (received.size() != n2)
    throw std::invalid_argument("decode_messages: expected " + std::to_string(n2) +
                                " messages, got " + std::to_string(received.size()));
  if (known_groups.size() != n1 - n2)
    throw std::invalid_argument("decode_messages: expected " + std::to_string(n1 - n2) +
                                " known groups");
  const std::uint64_t msg_bits = received[0].payload.bits;
  for (const MulticastMessage& m : received)
    if (m.payload.bits != msg_bits || m.sender != sender)
      throw std::invalid_argument("decode_messages: inconsistent message batch");

  // The sender's segment from each known group, by position in `subs`.
  std::vector<const BitString*> known_by_pos(n1, nullptr);
  {
    std::size_t gi = 0;
    for (std::size_t p = 0; p < n1; ++p) {
      if (std::find(unknown.begin(), unknown.end(), static_cast<int>(p) + 1) !=
          unknown.end())
        continue;
      if (gi >= known_groups.size()) break;
      if (known_groups[gi].owner_subset != subs[p])
        throw std::invalid_argument("decode_messages: known groups out of order");
      const int pos = known_groups[gi].owner_subset.index_of(sender);
      known_by_pos[p] = &known_groups[gi].segments[pos];
      ++gi;
    }
    if (gi != known_groups.size())
      throw std::invalid_argument("decode_messages: stray known group");
  }

  if (n2 == 1) {
    // XOR fast path: peel the known segments off the single message.
    BitString acc = received[0].payload;
    for (const BitString* s : known_by_pos)
      if (s != nullptr) acc.xor_with(*s);  // shorter segments are zero-padded
    return {std::move(acc)};
  }

  if (field.spec().m != 8)
    throw std::invalid_argument("decode_messages: coded path expects GF(2^8)");
  if (msg_bits % 8 != 0)
    throw std::invalid_argument("decode_messages: message bits must be whole bytes");
  check_alpha_capacity(field, n1);
  const std::size_t nbytes = msg_bits / 8;

  // Y_i = X_i - sum over known positions of alpha_p^i * segment_p.
  std::vector<BitString> y;
  y.reserve(n2);
  for (std::size_t i = 0; i < n2; ++i) {
    BitString acc = received[i].payload;  // index order is 1..n2
    if (received[i].index != i + 1)
      throw std::invalid_argument("decode_messages: messages out of index order");
    for (std::size_t p = 0; p < n1; ++p) {
      if (known_by_pos[p] == nullptr) continue;
      if (known_by_pos[p]->bits % 8 != 0)
        throw std::invalid_argument("decode_messages: segment bits must be whole bytes");
      const std::uint32_t coeff =
          field.pow(static_cast<std::uint32_t>(p + 1), static_cast<std::uint64_t>(i));
      kernels::axpy_gf256(field.mul_row256(static_cast<std::uint8_t>(coeff)),
                          acc.bytes.data(), known_by_pos[p]->bytes.data(),
                          std::min<std::size_t>(known_by_pos[p]->bytes.size(), nbytes));
    }
    y.push_back(std::move(acc));
  }

  // Solve the n2 x n2 system with the unknown positions' coefficients.
  std::vector<std::uint32_t> alphas;
  alphas.reserve(n2);
  for (int p : unknown) alphas.push_back(static_cast<std::uint32_t>(p));
  const std::vector<std::uint32_t> inv = vandermonde_inverse(field, alphas, n2);

  std::vector<BitString> out;
  out.reserve(n2);
  for (std::size_t j = 0; j < n2; ++j) {
    BitString acc = BitString::zeros(msg_bits);
    for (std::size_t i = 0; i < n2; ++i) {
      const std::uint32_t c = inv[j * n2 + i];
      if (c == 0) continue;
      kernels::axpy_gf256(field.mul_row256(static_cast<std::uint8_t>(c)),
                          acc.bytes.data(), y[i].bytes.data(), nbytes);
    }
    out.push_back(std::move(acc));
  }
  return out;
}

namespace {
void put_u16(Bytes& out, std::uint16_t v) {
  out.push_back(static_cast<std::uint8_t>(v & 0xFF));
  out.push_back(static_cast<std::uint8_t>(v >> 8));
}
void put_u32(Bytes& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>((v >> (8 * i)) & 0xFF));
}
std::uint16_t get_u16(std::span<const std::uint8_t> d, std::size_t& off) {
  const std::uint16_t v = static_cast<std::uint16_t>(d[off] | (d[off + 1] << 8));
  off += 2;
  return v;
}
std::uint32_t get_u32(std::span<const std::uint8_t> d, std::size_t& off) {
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(d[off + i]) << (8 * i);
  off += 4;
  return v;
}
}  // namespace

void serialize_message(const MulticastMessage& m, Bytes& out) {
  put_u16(out, m.sender);
  put_u32(out, m.subset.bitmask());
  put_u16(out, m.index);
  put_u32(out, static_cast<std::uint32_t>(m.payload.byte_size()));
  out.insert(out.end(), m.payload.bytes.begin(), m.payload.bytes.end());
}

Bytes serialize_log(const std::vector<MulticastMessage>& log) {
  Bytes out;
  for (const MulticastMessage& m : log) serialize_message(m, out);
  return out;
}

std::vector<MulticastMessage> deserialize_log(std::span<const std::uint8_t> data) {
  std::vector<MulticastMessage> log;
  std::size_t off = 0;
  while (off < data.size()) {
    if (data.size() - off < 12)
      throw std::invalid_argument("deserialize_log: truncated header");
    MulticastMessage m;
    m.sender = get_u16(data, off);
    m.subset = NodeSubset::from_bitmask(get_u32(data, off));
    m.index = get_u16(data, off);
    const std::uint32_t len = get_u32(data, off);
    if (data.size() - off < len)
      throw std::invalid_argument("deserialize_log: truncated payload");
    m.payload = BitString::from_bytes(Bytes(data.begin() + off, data.begin() + off + len));
    off += len;
    log.push_back(std::move(m));
  }
  return log;
}

}  // namespace cdc
