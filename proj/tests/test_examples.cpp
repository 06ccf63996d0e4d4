#include "cdc/examples.hpp"

#include <map>

#include "cdc/codec.hpp"
#include "doctest.h"

using cdc::Bytes;
using cdc::Rational;

TEST_CASE("hex helper round trips and rejects junk") {
  CHECK(cdc::bytes_from_hex("12ab") == Bytes{0x12, 0xAB});
  CHECK(cdc::bytes_from_hex(" 01\n02\t0 3 ") == Bytes{0x01, 0x02, 0x03});
  CHECK(cdc::bytes_from_hex("").empty());
  CHECK_THROWS(cdc::bytes_from_hex("0g"));
  CHECK_THROWS(cdc::bytes_from_hex("123"));
}

TEST_CASE("three-node walkthrough replays byte for byte") {
  const auto fx = cdc::example1_fixture();
  CHECK(fx.expected_load == Rational(1, 6));
  CHECK(fx.golden_log.size() == 39);  // 3 messages, 13 bytes each

  const auto report = cdc::replay_example(fx);
  INFO(report.detail);
  CHECK(report.pass);
  CHECK(report.measured_load == Rational(1, 6));
  CHECK(report.message_count == 3);
  CHECK(report.log_bytes == fx.golden_log);

  // Every message is a one-byte XOR among all three nodes.
  const auto msgs = cdc::deserialize_log(fx.golden_log);
  REQUIRE(msgs.size() == 3);
  for (std::size_t i = 0; i < 3; ++i) {
    CHECK(msgs[i].sender == i + 1);
    CHECK(msgs[i].subset == cdc::NodeSubset::of({1, 2, 3}));
    CHECK(msgs[i].index == 1);
    CHECK(msgs[i].payload.bytes.size() == 1);
  }
  CHECK(msgs[0].payload.bytes == Bytes{0x12});
  CHECK(msgs[1].payload.bytes == Bytes{0x27});
  CHECK(msgs[2].payload.bytes == Bytes{0x32});
}

TEST_CASE("four-node cascaded walkthrough replays byte for byte") {
  const auto fx = cdc::example2_fixture();
  CHECK(fx.expected_load == Rational(4, 9));
  CHECK(fx.golden_log.size() == 272);  // 12 * 14 + 8 * 13

  const auto report = cdc::replay_example(fx);
  INFO(report.detail);
  CHECK(report.pass);
  CHECK(report.measured_load == Rational(4, 9));
  CHECK(report.message_count == 20);

  // Census: twelve 16-bit messages in three-node rounds, then eight 8-bit
  // coded messages in the four-node round, two per sender.
  const auto msgs = cdc::deserialize_log(fx.golden_log);
  REQUIRE(msgs.size() == 20);
  std::map<int, int> by_size;
  for (const auto& m : msgs) ++by_size[m.subset.size()];
  CHECK(by_size[3] == 12);
  CHECK(by_size[4] == 8);
  for (std::size_t i = 0; i < 12; ++i) {
    CHECK(msgs[i].subset.size() == 3);
    CHECK(msgs[i].payload.bytes.size() == 2);
    CHECK(msgs[i].index == 1);
  }
  std::map<int, std::vector<int>> indices_by_sender;
  for (std::size_t i = 12; i < 20; ++i) {
    CHECK(msgs[i].subset == cdc::NodeSubset::of({1, 2, 3, 4}));
    CHECK(msgs[i].payload.bytes.size() == 1);
    indices_by_sender[msgs[i].sender].push_back(msgs[i].index);
  }
  for (int sender = 1; sender <= 4; ++sender)
    CHECK(indices_by_sender[sender] == std::vector<int>{1, 2});
}

TEST_CASE("replay surfaces fixture violations") {
  auto fx = cdc::example1_fixture();
  fx.expected_load = Rational(1, 5);
  const auto wrong_load = cdc::replay_example(fx);
  CHECK_FALSE(wrong_load.pass);
  CHECK(wrong_load.detail.find("load") != std::string::npos);

  fx = cdc::example1_fixture();
  fx.golden_log[13] ^= 0x01;  // second message, sender byte
  const auto wrong_log = cdc::replay_example(fx);
  CHECK_FALSE(wrong_log.pass);
  CHECK(wrong_log.detail.find("byte") != std::string::npos);

  fx = cdc::example1_fixture();
  fx.expected_shape = {{3, 2, 8}};
  const auto wrong_shape = cdc::replay_example(fx);
  CHECK_FALSE(wrong_shape.pass);
}
