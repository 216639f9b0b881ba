// Copyright 2026 The permflow Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <doctest.h>

#include <map>
#include <set>

#include "permflow/partitions.hpp"

using namespace permflow;

TEST_CASE("singleton paired subsets have exactly one partition") {
  const auto parts = paired_partitions(PairedSubset{{2}, {5}});
  REQUIRE(parts.size() == 1);
  CHECK(parts[0].blocks == std::vector<PairedSubset>{PairedSubset{{2}, {5}}});
}

TEST_CASE("pairs of two-element sets have the three matched partitions") {
  const auto parts = paired_partitions(PairedSubset{{0, 1}, {0, 1}});
  std::set<std::string> got;
  for (const auto& p : parts) got.insert(p.to_string());
  CHECK(got == std::set<std::string>{"{0,1}>{0,1}", "{0}>{0}|{1}>{1}", "{0}>{1}|{1}>{0}"});

  // Non-contiguous ground sets work the same way.
  CHECK(paired_partitions(PairedSubset{{1, 3}, {0, 5}}).size() == 3);
}

TEST_CASE("three-element enumeration has the 1 + 9 + 6 shape split") {
  const auto parts = paired_partitions(PairedSubset{{0, 1, 2}, {0, 1, 2}});
  CHECK(parts.size() == 16);
  std::map<int, int> by_block_count;
  for (const auto& p : parts) ++by_block_count[p.block_count()];
  CHECK(by_block_count[1] == 1);
  CHECK(by_block_count[2] == 9);
  CHECK(by_block_count[3] == 6);
}

TEST_CASE("enumeration is valid, duplicate-free, and matches the counting oracle") {
  // Counts derived from the shape-sum formula: 1, 3, 16, 131, 1496.
  const std::vector<std::uint64_t> expected{1, 3, 16, 131, 1496};
  for (int n = 1; n <= 5; ++n) {
    CHECK(count_paired_partitions(n) == expected[static_cast<std::size_t>(n - 1)]);

    const VertexSet ground = full_vertex_set(std::max(2, n));
    const PairedSubset whole{VertexSet(ground.begin(), ground.begin() + n),
                             VertexSet(ground.begin(), ground.begin() + n)};
    std::set<std::string> seen;
    std::uint64_t total = 0;
    for_each_paired_partition(whole, [&](const PairedPartition& p) {
      ++total;
      CHECK(p.well_formed_for(whole));
      CHECK(seen.insert(p.to_string()).second);  // canonical form is unique
      for (std::size_t i = 1; i < p.blocks.size(); ++i)
        CHECK(p.blocks[i - 1].s1.front() < p.blocks[i].s1.front());
    });
    CHECK(total == expected[static_cast<std::size_t>(n - 1)]);
  }
}

TEST_CASE("partition caps are enforced") {
  const VertexSet seven = full_vertex_set(7);
  CHECK_THROWS_AS(paired_partitions(PairedSubset{seven, seven}), CapExceeded);
  Caps raised;
  raised.partition_cap = 7;
  CHECK_NOTHROW(for_each_paired_partition(PairedSubset{seven, seven},
                                          [](const PairedPartition&) {}, raised));
  CHECK_THROWS_AS(count_paired_partitions(9), CapExceeded);
}

TEST_CASE("covering partitions of the two-vertex set, context {0}") {
  const auto covers = s_covering_partitions(2, {0});
  REQUIRE(covers.size() == 3);
  std::set<std::string> got;
  for (const auto& sc : covers) got.insert(sc.to_string());
  CHECK(got == std::set<std::string>{"{0,1}>{0,1}", "{0}>{0}|c:{1}>{1}", "{0}>{1}|c:{1}>{0}"});
}

TEST_CASE("with the full context every partition qualifies and none has a complement") {
  for (int n : {2, 3, 4}) {
    const auto covers = s_covering_partitions(n, full_vertex_set(n));
    CHECK(covers.size() == count_paired_partitions(n));
    for (const auto& sc : covers) CHECK_FALSE(sc.complement_block.has_value());
  }
}

TEST_CASE("covering classification matches the brute-force filter") {
  const int n = 3;
  const VertexSet s{0, 1};
  const auto covers = s_covering_partitions(n, s);

  // Filter oracle: count partitions with at most one block disjoint from S.
  const VertexSet all = full_vertex_set(n);
  std::uint64_t expected = 0;
  std::set<std::string> qualifying;
  for_each_paired_partition(PairedSubset{all, all}, [&](const PairedPartition& p) {
    int missing = 0;
    for (const auto& block : p.blocks)
      if (set_intersection(block.s1, s).empty()) ++missing;
    if (missing <= 1) {
      ++expected;
      qualifying.insert(p.to_string());
    }
  });
  CHECK(covers.size() == expected);

  for (const auto& sc : covers) {
    // Stripping the designation recovers a valid partition of the whole.
    const PairedPartition p = sc.as_partition();
    CHECK(p.well_formed_for(PairedSubset{all, all}));
    CHECK(qualifying.count(p.to_string()) == 1);

    // The complement is the unique S-disjoint block; covering intersections
    // partition S.
    VertexSet covered;
    for (const auto& block : sc.covering_blocks) {
      const VertexSet hit = set_intersection(block.s1, s);
      CHECK_FALSE(hit.empty());
      CHECK(set_intersection(covered, hit).empty());
      covered = set_union(covered, hit);
    }
    CHECK(covered == s);
    if (sc.complement_block) CHECK(set_intersection(sc.complement_block->s1, s).empty());
  }
}
