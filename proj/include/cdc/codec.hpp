#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "cdc/bits.hpp"
#include "cdc/gf.hpp"
#include "cdc/placement.hpp"
#include "cdc/store.hpp"
#include "cdc/subsets.hpp"

namespace cdc {

// The values exchanged within one shuffle subset S on behalf of one exact
// mapper set: every (function, file) pair whose file is mapped by precisely
// owner_subset and whose function is reduced by all of S \ owner_subset and
// by nobody outside S.
struct ExclusiveSetEntry {
  int function = 0;
  std::int64_t file = 0;
};
struct ExclusiveSet {
  NodeSubset shuffle_subset;  // S
  NodeSubset owner_subset;    // the exact mapper set inside S
  std::vector<ExclusiveSetEntry> entries;  // (function, file) ascending
};

// One exclusive set per size-r subset of S, in lexicographic order of the
// owner subsets. Entries may be empty under non-canonical placements.
std::vector<ExclusiveSet> build_exclusive_sets(const NodeSubset& shuffle_subset,
                                               int load,
                                               const FileAssignment& files,
                                               const ReduceAssignment& reduces);

// The concatenation of an exclusive set's values split into |owner_subset|
// equal segments, one per owner in ascending node order.
struct SegmentGroup {
  NodeSubset shuffle_subset;
  NodeSubset owner_subset;
  std::vector<BitString> segments;
  std::uint64_t segment_bits = 0;
};

// Reads the values from reader_node's store copy (it must hold them all).
// Throws when the concatenated bit count is not divisible by the load.
SegmentGroup segment(const ExclusiveSet& es, const IntermediateStore& store,
                     int reader_node);

// One multicast transmission. For coded shuffles `subset` is the shuffle
// subset S and `index` numbers the sender's messages from 1; the uncoded
// strategy uses the receiver set and index 0.
struct MulticastMessage {
  std::uint16_t sender = 0;
  NodeSubset subset;
  std::uint16_t index = 0;
  BitString payload;
};

// Sender's coded messages for subset S. `groups` must be the sender's segment
// groups for subsets_containing(sender, S, r), in that order. Segments are
// zero-padded to the longest before coding; the j-th segment is weighted by
// powers of the j-th nonzero field element. Returns an empty vector when
// every segment is empty.
std::vector<MulticastMessage> encode_node_messages(int sender,
                                                   const NodeSubset& shuffle_subset,
                                                   const std::vector<SegmentGroup>& groups,
                                                   const GaloisField& field);

// Inverts encode_node_messages at a receiver: strips the receiver's known
// segments (its groups for owner subsets containing both nodes, lex order)
// and solves for the rest. Returns the unknown segments, zero-padded to the
// message length, ordered by complement_indices(receiver, sender, S, load).
std::vector<BitString> decode_messages(int receiver, int sender,
                                       const NodeSubset& shuffle_subset, int load,
                                       std::span<const MulticastMessage> received,
                                       const std::vector<SegmentGroup>& known_groups,
                                       const GaloisField& field);

// Wire format: sender u16 | subset bitmask u32 | index u16 | payload bytes
// u32 | payload, all little-endian. Logs are records back to back.
void serialize_message(const MulticastMessage& m, Bytes& out);
Bytes serialize_log(const std::vector<MulticastMessage>& log);
std::vector<MulticastMessage> deserialize_log(std::span<const std::uint8_t> data);

}  // namespace cdc
