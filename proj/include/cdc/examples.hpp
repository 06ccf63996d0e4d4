#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "cdc/bits.hpp"
#include "cdc/engine.hpp"
#include "cdc/rational.hpp"

namespace cdc {

// Expected number of messages of one size within one round.
struct MessageShape {
  int subset_size = 0;
  std::size_t count = 0;
  std::int64_t bits_each = 0;
};

// A small job with hand-computed results: deterministic map values, the exact
// final load, the per-round message census, and the full multicast log the
// canonical schedule must emit, byte for byte.
struct ExampleFixture {
  std::string name;
  JobSpec spec;
  std::vector<Bytes> inputs;
  JobFunctions functions;
  Rational expected_load;
  std::vector<MessageShape> expected_shape;
  Bytes golden_log;
};

// Three nodes, three outputs, six files, every file mapped twice, each output
// reduced once: one three-node exchange round of plain XOR messages.
ExampleFixture example1_fixture();

// Four nodes, six outputs, six files, every file mapped twice, every output
// reduced twice: three-node rounds of whole-value XORs plus one four-node
// round of half-size coded messages.
ExampleFixture example2_fixture();

struct FixtureReport {
  std::string name;
  bool pass = false;
  std::string detail;  // first mismatch, human readable
  Rational measured_load = 0;
  std::size_t message_count = 0;
  Bytes log_bytes;
};

// Runs the fixture through the engine, checks outputs against the
// single-machine oracle, the exact load, the message census, and the golden
// log; then reruns with a different worker count and demands a byte-identical
// log.
FixtureReport replay_example(const ExampleFixture& fixture,
                             const EngineOptions& opts = {});

// "0x"-free hex with optional whitespace -> bytes ("12ab" -> {0x12, 0xAB}).
Bytes bytes_from_hex(const std::string& hex);

}  // namespace cdc
