#include "cdc/placement.hpp"

#include <string>

#include "doctest.h"

using cdc::FileAssignment;
using cdc::JobSpec;
using cdc::NodeSubset;
using cdc::Rational;

namespace {

JobSpec make_spec(int K, int Q, std::int64_t N, Rational r, int s,
                  std::int64_t T = 64) {
  JobSpec spec;
  spec.node_count = K;
  spec.function_count = Q;
  spec.file_count = N;
  spec.computation_load = r;
  spec.reduce_replication = s;
  spec.value_bits = T;
  return spec;
}

}  // namespace

TEST_CASE("JobSpec validation") {
  CHECK_NOTHROW(make_spec(4, 6, 6, 2, 2).validate());
  CHECK_THROWS(make_spec(0, 6, 6, 2, 2).validate());
  CHECK_THROWS(make_spec(4, 6, 6, 5, 2).validate());       // r > K
  CHECK_THROWS(make_spec(4, 6, 6, Rational(1, 2), 2).validate());  // r < 1
  CHECK_THROWS(make_spec(4, 6, 6, 2, 0).validate());       // s < 1
  CHECK_THROWS(make_spec(4, 6, 6, 2, 5).validate());       // s > K
  CHECK_THROWS(make_spec(4, 6, 0, 2, 2).validate());
  CHECK_THROWS(make_spec(4, 0, 6, 2, 2).validate());
  CHECK_THROWS(make_spec(4, 6, 6, 2, 2, 0).validate());

  const JobSpec frac = make_spec(4, 4, 48, Rational(5, 2), 1);
  CHECK_NOTHROW(frac.validate());
  CHECK_FALSE(frac.load_is_integer());
  CHECK_THROWS(frac.load_int());
  CHECK(make_spec(4, 6, 6, 2, 2).load_int() == 2);
}

TEST_CASE("pad_files rounds N up to whole batches") {
  const auto p1 = cdc::pad_files(6, 4, 2);
  CHECK(p1.padded_count == 6);
  CHECK(p1.batch_size == 1);
  const auto p2 = cdc::pad_files(2520, 10, 3);
  CHECK(p2.padded_count == 2520);
  CHECK(p2.batch_size == 21);
  const auto p3 = cdc::pad_files(7, 4, 2);
  CHECK(p3.padded_count == 12);
  CHECK(p3.batch_size == 2);
  const auto p4 = cdc::pad_files(1, 3, 3);
  CHECK(p4.padded_count == 1);
  CHECK(p4.batch_size == 1);
}

TEST_CASE("canonical map placement deals batches lexicographically") {
  const FileAssignment fa = cdc::assign_map_tasks(make_spec(3, 3, 6, 2, 1, 8));
  CHECK(fa.file_count() == 6);
  CHECK(fa.batches().at(NodeSubset::of({1, 2})) ==
        std::vector<std::int64_t>{1, 2});
  CHECK(fa.batches().at(NodeSubset::of({1, 3})) ==
        std::vector<std::int64_t>{3, 4});
  CHECK(fa.batches().at(NodeSubset::of({2, 3})) ==
        std::vector<std::int64_t>{5, 6});
  CHECK(fa.files_of(1) == std::vector<std::int64_t>{1, 2, 3, 4});
  CHECK(fa.files_of(3) == std::vector<std::int64_t>{3, 4, 5, 6});
  CHECK(fa.holders_of(5) == NodeSubset::of({2, 3}));

  // Every node maps r*N/K files.
  for (int k = 1; k <= 3; ++k) CHECK(fa.files_of(k).size() == 4);
}

TEST_CASE("padding files extend the last batches") {
  const FileAssignment fa = cdc::assign_map_tasks(make_spec(4, 4, 7, 2, 1, 16));
  CHECK(fa.file_count() == 12);
  CHECK(fa.batches().size() == 6);
  for (const auto& [subset, files] : fa.batches()) CHECK(files.size() == 2);
}

TEST_CASE("reduce placement matches the four-node worked layout") {
  const auto ra = cdc::assign_reduce_tasks(make_spec(4, 6, 6, 2, 2, 16));
  CHECK(ra.function_count() == 6);
  CHECK(ra.functions_of(1) == std::vector<int>{1, 2, 3});
  CHECK(ra.functions_of(2) == std::vector<int>{1, 4, 5});
  CHECK(ra.functions_of(3) == std::vector<int>{2, 4, 6});
  CHECK(ra.functions_of(4) == std::vector<int>{3, 5, 6});
  CHECK(ra.owners_of(1) == NodeSubset::of({1, 2}));
  CHECK(ra.owners_of(6) == NodeSubset::of({3, 4}));
}

TEST_CASE("function counts must divide into whole batches") {
  CHECK_THROWS_WITH(cdc::assign_reduce_tasks(make_spec(4, 5, 6, 2, 2, 16)),
                    doctest::Contains("6"));
  CHECK_NOTHROW(cdc::assign_reduce_tasks(make_spec(4, 12, 6, 2, 2, 16)));
}

TEST_CASE("from_holder_sets validates and groups batches") {
  std::vector<NodeSubset> holders{NodeSubset::of({1}), NodeSubset::of({1, 3}),
                                  NodeSubset::of({1})};
  const FileAssignment fa = FileAssignment::from_holder_sets(3, holders);
  CHECK(fa.batches().at(NodeSubset::of({1})) ==
        std::vector<std::int64_t>{1, 3});
  CHECK(fa.files_of(3) == std::vector<std::int64_t>{2});
  CHECK(fa.files_of(2).empty());

  holders.push_back(NodeSubset());
  CHECK_THROWS(FileAssignment::from_holder_sets(3, holders));
  CHECK_THROWS(FileAssignment::from_holder_sets(2, {NodeSubset::of({1, 3})}));
}

TEST_CASE("canonical json is stable and readable") {
  const FileAssignment fa = cdc::assign_map_tasks(make_spec(3, 3, 6, 2, 1, 8));
  const std::string j = fa.to_canonical_json();
  CHECK(j == cdc::assign_map_tasks(make_spec(3, 3, 6, 2, 1, 8)).to_canonical_json());
  CHECK(j.find("\"{1,2}\":[1,2]") != std::string::npos);
  CHECK(j.find("\"{2,3}\":[5,6]") != std::string::npos);
  const auto ra = cdc::assign_reduce_tasks(make_spec(4, 6, 6, 2, 2, 16));
  CHECK(ra.to_canonical_json().find("\"{3,4}\":[6]") != std::string::npos);
}

TEST_CASE("random placement is seeded and uniform-size") {
  const JobSpec spec = make_spec(6, 6, 24, 2, 1, 16);
  const FileAssignment a = cdc::random_placement(spec, 99);
  const FileAssignment b = cdc::random_placement(spec, 99);
  const FileAssignment c = cdc::random_placement(spec, 100);
  CHECK(a.to_canonical_json() == b.to_canonical_json());
  CHECK(a.to_canonical_json() != c.to_canonical_json());
  CHECK(a.file_count() == 24);
  for (std::int64_t n = 1; n <= 24; ++n) CHECK(a.holders_of(n).size() == 2);
}

TEST_CASE("fractional loads split into two integer sub-jobs") {
  const cdc::SplitJob split =
      cdc::split_noninteger_r(make_spec(4, 4, 48, Rational(5, 2), 1, 48));
  CHECK_FALSE(split.degenerate);
  CHECK(split.alpha == Rational(1, 2));
  CHECK(split.files_in_sub1 == 24);
  CHECK(split.sub1.computation_load == Rational(2));
  CHECK(split.sub1.file_count == 24);
  CHECK(split.sub2.computation_load == Rational(3));
  CHECK(split.sub2.file_count == 24);
  CHECK(split.sub1.function_count == 4);

  // |I1| rounds DOWN to a whole number of size-2 batches: alpha*N = 25.2
  // would give 25, C(4,2)=6 forces 24.
  const cdc::SplitJob rounded =
      cdc::split_noninteger_r(make_spec(4, 4, 42, Rational(12, 5), 1, 48));
  CHECK(rounded.alpha == Rational(3, 5));  // ceil(r) - r
  CHECK(rounded.files_in_sub1 == 24);      // floor(25.2) -> 24
  CHECK(rounded.sub2.file_count == 18);

  const cdc::SplitJob whole =
      cdc::split_noninteger_r(make_spec(4, 4, 48, 2, 1, 48));
  CHECK(whole.degenerate);
  CHECK(whole.sub1.file_count == 48);
}
