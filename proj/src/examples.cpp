#include "cdc/examples.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <stdexcept>
#include <utility>

#include "cdc/codec.hpp"

namespace cdc {

namespace {

// Synthetic intermediate values that encode their own coordinates: one byte
// (function<<4)|file, optionally followed by ((function+8)<<4)|file. Keeps
// every value distinct and hand-checkable in hex dumps.
JobFunctions coordinate_functions(int function_count, int bytes_per_value) {
  JobFunctions jf;
  jf.map_fn = [function_count, bytes_per_value](std::int64_t file,
                                                const Bytes&) {
    std::vector<Bytes> values;
    values.reserve(static_cast<std::size_t>(function_count));
    for (int q = 1; q <= function_count; ++q) {
      Bytes v;
      v.push_back(static_cast<std::uint8_t>((q << 4) | file));
      if (bytes_per_value == 2)
        v.push_back(static_cast<std::uint8_t>(((q + 8) << 4) | file));
      values.push_back(std::move(v));
    }
    return values;
  };
  jf.reduce_fn = [](int, const std::vector<Bytes>& values,
                    const std::vector<bool>& is_padding) {
    Bytes out;
    for (std::size_t i = 0; i < values.size(); ++i) {
      if (is_padding[i]) continue;
      out.insert(out.end(), values[i].begin(), values[i].end());
    }
    return out;
  };
  return jf;
}

std::vector<Bytes> index_byte_inputs(std::int64_t file_count) {
  std::vector<Bytes> inputs;
  for (std::int64_t n = 1; n <= file_count; ++n)
    inputs.push_back(Bytes{static_cast<std::uint8_t>(n)});
  return inputs;
}

}  // namespace

Bytes bytes_from_hex(const std::string& hex) {
  Bytes out;
  int hi = -1;
  for (const char c : hex) {
    if (std::isspace(static_cast<unsigned char>(c))) continue;
    int digit;
    if (c >= '0' && c <= '9') digit = c - '0';
    else if (c >= 'a' && c <= 'f') digit = c - 'a' + 10;
    else if (c >= 'A' && c <= 'F') digit = c - 'A' + 10;
    else throw std::invalid_argument(std::string("bad hex digit '") + c + "'");
    if (hi < 0) {
      hi = digit;
    } else {
      out.push_back(static_cast<std::uint8_t>((hi << 4) | digit));
      hi = -1;
    }
  }
  if (hi >= 0) throw std::invalid_argument("odd number of hex digits");
  return out;
}

ExampleFixture example1_fixture() {
  ExampleFixture fx;
  fx.name = "example1";
  fx.spec.node_count = 3;
  fx.spec.function_count = 3;
  fx.spec.file_count = 6;
  fx.spec.computation_load = 2;
  fx.spec.reduce_replication = 1;
  fx.spec.value_bits = 8;
  fx.inputs = index_byte_inputs(6);
  fx.functions = coordinate_functions(3, 1);
  fx.expected_load = Rational(1, 6);
  fx.expected_shape = {{3, 3, 8}};
  // One round over all three nodes; each node XORs the two half-batches it
  // alone shares with each peer: 0x31^0x23, 0x32^0x15, 0x24^0x16.
  fx.golden_log = bytes_from_hex(
      "0100 07000000 0100 01000000 12"
      "0200 07000000 0100 01000000 27"
      "0300 07000000 0100 01000000 32");
  return fx;
}

ExampleFixture example2_fixture() {
  ExampleFixture fx;
  fx.name = "example2";
  fx.spec.node_count = 4;
  fx.spec.function_count = 6;
  fx.spec.file_count = 6;
  fx.spec.computation_load = 2;
  fx.spec.reduce_replication = 2;
  fx.spec.value_bits = 16;
  fx.inputs = index_byte_inputs(6);
  fx.functions = coordinate_functions(6, 2);
  fx.expected_load = Rational(4, 9);
  fx.expected_shape = {{3, 12, 16}, {4, 8, 8}};
  // Size-3 rounds carry whole-value XORs (e.g. {1,2,3}: 0x21A1^0x12 92,
  // 0x41C1^0x1494, 0x42C2^0x24A4); the four-node round splits each value in
  // half and sends two field-weighted combinations per sender.
  fx.golden_log = bytes_from_hex(
      "0100 07000000 0100 02000000 3333"
      "0200 07000000 0100 02000000 5555"
      "0300 07000000 0100 02000000 6666"
      "0100 0B000000 0100 02000000 2222"
      "0200 0B000000 0100 02000000 4444"
      "0400 0B000000 0100 02000000 6666"
      "0100 0D000000 0100 02000000 1111"
      "0300 0D000000 0100 02000000 4444"
      "0400 0D000000 0100 02000000 5555"
      "0200 0E000000 0100 02000000 1111"
      "0300 0E000000 0100 02000000 2222"
      "0400 0E000000 0100 02000000 3333"
      "0100 0F000000 0100 01000000 70"
      "0100 0F000000 0200 01000000 00"
      "0200 0F000000 0100 01000000 F0"
      "0200 0F000000 0200 01000000 E6"
      "0300 0F000000 0100 01000000 70"
      "0300 0F000000 0200 01000000 9B"
      "0400 0F000000 0100 01000000 F0"
      "0400 0F000000 0200 01000000 33");
  return fx;
}

FixtureReport replay_example(const ExampleFixture& fixture,
                             const EngineOptions& opts) {
  FixtureReport report;
  report.name = fixture.name;

  JobResult job = run_job(fixture.spec, fixture.functions, fixture.inputs,
                          ShuffleStrategy::kCoded, 0, opts);
  report.measured_load = job.shuffle.report.load();
  report.message_count = job.shuffle.log.size();
  report.log_bytes = serialize_log(job.shuffle.log);

  const OracleReport oracle = verify_against_oracle(
      fixture.spec, fixture.functions, fixture.inputs, job.outputs, &job.store);
  if (!oracle.ok) {
    report.detail = "oracle mismatch: " + oracle.detail;
    return report;
  }

  if (report.measured_load != fixture.expected_load) {
    report.detail = "load " + to_fraction_string(report.measured_load) +
                    ", expected " + to_fraction_string(fixture.expected_load);
    return report;
  }

  std::map<std::pair<int, std::int64_t>, std::size_t> census;
  for (const MulticastMessage& m : job.shuffle.log)
    census[{m.subset.size(), static_cast<std::int64_t>(m.payload.bits)}] += 1;
  for (const MessageShape& want : fixture.expected_shape) {
    const auto it = census.find({want.subset_size, want.bits_each});
    const std::size_t got = it == census.end() ? 0 : it->second;
    if (got != want.count) {
      report.detail = "expected " + std::to_string(want.count) + " messages of " +
                      std::to_string(want.bits_each) + " bits in size-" +
                      std::to_string(want.subset_size) + " rounds, got " +
                      std::to_string(got);
      return report;
    }
  }
  std::size_t expected_total = 0;
  for (const MessageShape& want : fixture.expected_shape)
    expected_total += want.count;
  if (report.message_count != expected_total) {
    report.detail = "message count " + std::to_string(report.message_count) +
                    ", expected " + std::to_string(expected_total);
    return report;
  }

  if (report.log_bytes != fixture.golden_log) {
    const auto mismatch =
        std::mismatch(report.log_bytes.begin(), report.log_bytes.end(),
                      fixture.golden_log.begin(), fixture.golden_log.end());
    report.detail =
        "log diverges from golden at byte " +
        std::to_string(mismatch.first - report.log_bytes.begin()) + " of " +
        std::to_string(fixture.golden_log.size());
    return report;
  }

  // Same job under a different worker count must shuffle identically.
  EngineOptions other = opts;
  other.workers = opts.workers == 1 ? 4 : 1;
  JobResult replay = run_job(fixture.spec, fixture.functions, fixture.inputs,
                             ShuffleStrategy::kCoded, 0, other);
  if (serialize_log(replay.shuffle.log) != report.log_bytes) {
    report.detail = "log changed between worker counts " +
                    std::to_string(opts.workers) + " and " +
                    std::to_string(other.workers);
    return report;
  }

  report.pass = true;
  report.detail = "ok";
  return report;
}

}  // namespace cdc
