#include "cdc/sortapp.hpp"

#include <vector>

#include "cdc/bounds.hpp"
#include "doctest.h"

using cdc::BigInt;
using cdc::Bytes;
using cdc::Rational;
using cdc::SortConfig;

TEST_CASE("key domains split into near-equal contiguous ranges") {
  const auto p = cdc::partition_key_domain(BigInt(100), 1, 4);
  CHECK(p.range_count() == 4);
  CHECK(p.range_begin(0) == 0);
  CHECK(p.range_begin(1) == 25);  // floor(101/4)
  CHECK(p.range_begin(2) == 50);  // floor(202/4)
  CHECK(p.range_begin(3) == 75);  // floor(303/4)
  CHECK(p.range_end(0) == 25);
  CHECK(p.range_end(2) == 75);
  CHECK(p.range_end(3) == 101);

  const auto at = [&p](std::uint8_t key) { return p.range_of(&key); };
  CHECK(at(0) == 0);
  CHECK(at(24) == 0);
  CHECK(at(25) == 1);
  CHECK(at(49) == 1);
  CHECK(at(50) == 2);
  CHECK(at(75) == 3);
  CHECK(at(100) == 3);
  CHECK(at(255) == 3);  // beyond the domain: clamps into the last range

  const auto whole = cdc::partition_key_domain(BigInt(100), 1, 1);
  CHECK(whole.range_begin(0) == 0);
  CHECK(whole.range_end(0) == 101);

  CHECK_THROWS_WITH(cdc::partition_key_domain(BigInt(2), 1, 4),
                    doctest::Contains("cannot split a domain of 3 keys"));
  CHECK_THROWS_WITH(cdc::partition_key_domain(BigInt(256), 1, 2),
                    doctest::Contains("does not fit in 1 bytes"));
  CHECK_THROWS(cdc::partition_key_domain(BigInt(10), 0, 2));
}

TEST_CASE("records hash into fixed-size groups preserving input order") {
  const auto p = cdc::partition_key_domain(BigInt(99), 1, 4);
  // Five (key, value) records; keys 10 and 10 again must stay in input order.
  const Bytes contents{10, 'a', 60, 'b', 30, 'c', 99, 'd', 10, 'e'};
  const auto groups = cdc::hash_records_into_groups(contents, p, 1, 1, 8);
  REQUIRE(groups.size() == 4);
  CHECK(groups[0] == Bytes{2, 0, 0, 0, 10, 'a', 10, 'e'});
  CHECK(groups[1] == Bytes{1, 0, 0, 0, 30, 'c', 0, 0});
  CHECK(groups[2] == Bytes{1, 0, 0, 0, 60, 'b', 0, 0});
  CHECK(groups[3] == Bytes{1, 0, 0, 0, 99, 'd', 0, 0});

  const Bytes torn{10, 'a', 60};
  CHECK_THROWS_WITH(cdc::hash_records_into_groups(torn, p, 1, 1, 8),
                    doctest::Contains("torn record"));
  CHECK_THROWS_WITH(cdc::hash_records_into_groups(contents, p, 1, 1, 6),
                    doctest::Contains("group for range 1 needs 8 bytes"));
}

TEST_CASE("merging groups undoes the encoding and sorts stably") {
  const auto p = cdc::partition_key_domain(BigInt(99), 1, 2);
  const Bytes contents{70, 'x', 20, 'y', 70, 'z'};
  const auto groups = cdc::hash_records_into_groups(contents, p, 1, 1, 10);
  const Bytes merged =
      cdc::merge_sort_groups(groups, {false, false}, 1, 1);
  CHECK(merged == Bytes{20, 'y', 70, 'x', 70, 'z'});

  // Padding groups are skipped even if their bytes are garbage.
  auto with_pad = groups;
  with_pad.push_back(Bytes{0xFF, 0xFF, 0xFF, 0xFF});
  const Bytes same = cdc::merge_sort_groups(with_pad, {false, false, true}, 1, 1);
  CHECK(same == merged);

  CHECK_THROWS_WITH(
      cdc::merge_sort_groups({Bytes{9, 0, 0, 0, 1, 2}}, {false}, 1, 1),
      doctest::Contains("claims 9 records"));
}

TEST_CASE("stable sort keeps equal keys in input order") {
  const Bytes records{5, 'a', 5, 'b', 5, 'c', 5, 'd'};
  CHECK(cdc::single_machine_sort(records, 1, 1) == records);
}

TEST_CASE("end-to-end sort matches the single-machine oracle") {
  SortConfig config;
  config.node_count = 4;
  config.computation_load = 2;
  config.record_count = 100;
  config.key_bytes = 2;
  config.value_bytes = 3;
  config.seed = 7;

  const auto result = cdc::run_coded_sort(config);
  CHECK(result.matches_oracle);
  CHECK(result.sorted.size() == 100 * 5);
  CHECK(result.sorted ==
        cdc::single_machine_sort(cdc::generate_records(config), 2, 3));
  CHECK(result.coded.report.load() == cdc::coded_load(2, 1, 4));
  CHECK(result.coded.report.load() == Rational(1, 4));
  CHECK(result.uncoded.report.load() == Rational(1, 2));
  // Same density scales both, so the useful-bit comparison stays strict.
  CHECK(result.useful_density > 0);
  CHECK(result.useful_density <= 1);
  CHECK(result.coded.useful_load ==
        result.coded.report.load() * result.useful_density);
  CHECK(result.coded.useful_load < result.uncoded.useful_load);
}

TEST_CASE("single-byte keys force heavy duplication and still verify") {
  SortConfig config;
  config.node_count = 3;
  config.computation_load = 2;
  config.record_count = 300;
  config.key_bytes = 1;
  config.value_bytes = 2;
  config.seed = 11;
  const auto result = cdc::run_coded_sort(config);
  CHECK(result.matches_oracle);
}

TEST_CASE("degenerate loads behave at both ends") {
  SortConfig config;
  config.node_count = 4;
  config.record_count = 60;
  config.key_bytes = 2;
  config.value_bytes = 2;
  config.seed = 3;

  config.computation_load = 1;
  const auto r1 = cdc::run_coded_sort(config);
  CHECK(r1.matches_oracle);
  CHECK(r1.coded.report.load() == r1.uncoded.report.load());
  CHECK(r1.coded.report.load() == Rational(3, 4));

  config.computation_load = 4;
  const auto r4 = cdc::run_coded_sort(config);
  CHECK(r4.matches_oracle);
  CHECK(r4.coded.report.load() == 0);
  CHECK(r4.uncoded.report.load() == 0);
}

TEST_CASE("empty jobs and bad configurations are rejected or trivial") {
  SortConfig config;
  config.node_count = 2;
  config.computation_load = 1;
  config.record_count = 0;
  config.key_bytes = 1;
  config.value_bytes = 1;
  const auto empty = cdc::run_coded_sort(config);
  CHECK(empty.matches_oracle);
  CHECK(empty.sorted.empty());

  SortConfig bad = config;
  bad.computation_load = 3;
  CHECK_THROWS_WITH(bad.validate(), doctest::Contains("computation load"));
  bad = config;
  bad.node_count = 31;
  CHECK_THROWS_WITH(bad.validate(), doctest::Contains("node count"));
  bad = config;
  bad.key_bytes = 0;
  CHECK_THROWS_WITH(bad.validate(), doctest::Contains("1-byte key"));
}
