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

#ifndef PERMFLOW_PARTITIONS_HPP_
#define PERMFLOW_PARTITIONS_HPP_

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "permflow/common.hpp"
#include "permflow/ordered_pairs.hpp"

namespace permflow {

// A simultaneous partition of both components of a paired subset into blocks
// of matched cardinality. Blocks are kept in canonical order: ascending
// minimum of the first component. No block is empty.
struct PairedPartition {
  std::vector<PairedSubset> blocks;

  int block_count() const { return static_cast<int>(blocks.size()); }
  // Full validation against the partitioned whole.
  bool well_formed_for(const PairedSubset& whole) const;

  bool operator==(const PairedPartition& other) const { return blocks == other.blocks; }

  // Text form: blocks joined with '|', e.g. "{0}>{1}|{1,2}>{0,2}".
  std::string to_string() const;
};

// A paired partition of the full paired vertex set, split into the blocks
// that meet the context set S in their first component and the single block
// (if any) that misses S entirely.
struct SCoveringPartition {
  std::vector<PairedSubset> covering_blocks;
  std::optional<PairedSubset> complement_block;

  PairedPartition as_partition() const;
  std::string to_string() const;
};

// Every paired partition of vs, exactly once, in a deterministic canonical
// order. The callback form is the engine; the vector form materializes it.
void for_each_paired_partition(const PairedSubset& vs,
                               const std::function<void(const PairedPartition&)>& fn,
                               const Caps& caps = {});
std::vector<PairedPartition> paired_partitions(const PairedSubset& vs, const Caps& caps = {});

// Paired partitions of the full n-vertex paired set that admit the covering /
// complement designation for S: at most one block disjoint from S, all other
// blocks' first components tracing out a partition of S.
std::vector<SCoveringPartition> s_covering_partitions(int n_vertices, const VertexSet& s,
                                                      const Caps& caps = {});

// Counting oracle: sum over integer-partition shapes of n of
// (set partitions of that shape)^2 times the product of multiplicities'
// factorials. Matches the enumeration cardinality.
std::uint64_t count_paired_partitions(int n, const Caps& caps = {});

}  // namespace permflow

#endif  // PERMFLOW_PARTITIONS_HPP_
