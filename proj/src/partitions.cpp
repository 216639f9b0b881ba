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

#include "permflow/partitions.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

#include "permflow/indexing.hpp"

namespace permflow {

namespace {

// Sorted-vector subset picked out by a bitmask.
VertexSet masked(const VertexSet& items, std::uint32_t mask) {
  VertexSet out;
  for (std::size_t i = 0; i < items.size(); ++i)
    if (mask & (1u << i)) out.push_back(items[i]);
  return out;
}

struct PartitionEnumerator {
  const std::function<void(const PairedPartition&)>& fn;
  PairedPartition current;

  void recurse(const VertexSet& rest1, const VertexSet& rest2) {
    if (rest1.empty()) {
      fn(current);
      return;
    }
    // The least remaining source anchors the next block; choosing its
    // companions from the tail keeps the enumeration canonical.
    const VertexSet tail(rest1.begin() + 1, rest1.end());
    const auto tail_size = static_cast<std::uint32_t>(tail.size());
    for (std::uint32_t mask = 0; mask < (1u << tail_size); ++mask) {
      VertexSet block1{rest1.front()};
      const VertexSet companions = masked(tail, mask);
      block1.insert(block1.end(), companions.begin(), companions.end());
      const int k = static_cast<int>(block1.size());

      // Matched-size choices from the second component, in lexicographic order.
      const int n2 = static_cast<int>(rest2.size());
      const std::uint64_t choices = binomial(n2, k);
      for (std::uint64_t c = 0; c < choices; ++c) {
        const std::vector<VertexId> picks = combination_unrank(c, k, n2);
        VertexSet block2;
        block2.reserve(static_cast<std::size_t>(k));
        for (const VertexId p : picks) block2.push_back(rest2[static_cast<std::size_t>(p)]);
        current.blocks.push_back(PairedSubset{block1, block2});
        recurse(set_difference(rest1, block1), set_difference(rest2, block2));
        current.blocks.pop_back();
      }
    }
  }
};

}  // namespace

bool PairedPartition::well_formed_for(const PairedSubset& whole) const {
  VertexSet seen1, seen2;
  for (const PairedSubset& block : blocks) {
    if (!block.well_formed()) return false;
    if (!set_intersection(seen1, block.s1).empty()) return false;
    if (!set_intersection(seen2, block.s2).empty()) return false;
    seen1 = set_union(seen1, block.s1);
    seen2 = set_union(seen2, block.s2);
  }
  return seen1 == whole.s1 && seen2 == whole.s2;
}

std::string PairedPartition::to_string() const {
  std::ostringstream out;
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    if (i > 0) out << '|';
    out << blocks[i].to_string();
  }
  return out.str();
}

PairedPartition SCoveringPartition::as_partition() const {
  PairedPartition p;
  p.blocks = covering_blocks;
  if (complement_block) p.blocks.push_back(*complement_block);
  std::sort(p.blocks.begin(), p.blocks.end(),
            [](const PairedSubset& a, const PairedSubset& b) { return a.s1.front() < b.s1.front(); });
  return p;
}

std::string SCoveringPartition::to_string() const {
  std::string text;
  for (std::size_t i = 0; i < covering_blocks.size(); ++i) {
    if (i > 0) text += '|';
    text += covering_blocks[i].to_string();
  }
  if (complement_block) text += "|c:" + complement_block->to_string();
  return text;
}

void for_each_paired_partition(const PairedSubset& vs,
                               const std::function<void(const PairedPartition&)>& fn,
                               const Caps& caps) {
  if (!vs.well_formed()) throw std::invalid_argument("paired partitions: malformed paired subset");
  if (vs.size() > caps.partition_cap)
    throw CapExceeded("paired partitions: cardinality " + std::to_string(vs.size()) +
                      " exceeds the partition cap of " + std::to_string(caps.partition_cap));
  PartitionEnumerator enumerator{fn, {}};
  enumerator.recurse(vs.s1, vs.s2);
}

std::vector<PairedPartition> paired_partitions(const PairedSubset& vs, const Caps& caps) {
  std::vector<PairedPartition> out;
  for_each_paired_partition(
      vs, [&out](const PairedPartition& p) { out.push_back(p); }, caps);
  return out;
}

std::vector<SCoveringPartition> s_covering_partitions(int n_vertices, const VertexSet& s,
                                                      const Caps& caps) {
  if (s.empty() || !is_sorted_unique(s) || s.front() < 0 || s.back() >= n_vertices)
    throw std::invalid_argument("s-covering partitions: context set must be a nonempty subset");
  const VertexSet all = full_vertex_set(n_vertices);
  std::vector<SCoveringPartition> out;
  for_each_paired_partition(
      PairedSubset{all, all},
      [&](const PairedPartition& p) {
        SCoveringPartition sc;
        for (const PairedSubset& block : p.blocks) {
          if (set_intersection(block.s1, s).empty()) {
            if (sc.complement_block) return;  // two blocks miss S: not S-covering
            sc.complement_block = block;
          } else {
            sc.covering_blocks.push_back(block);
          }
        }
        out.push_back(std::move(sc));
      },
      caps);
  return out;
}

namespace {

// Walk integer partitions of n as descending part lists.
void visit_shapes(int n, int max_part, std::vector<int>& shape,
                  const std::function<void(const std::vector<int>&)>& fn) {
  if (n == 0) {
    fn(shape);
    return;
  }
  for (int part = std::min(n, max_part); part >= 1; --part) {
    shape.push_back(part);
    visit_shapes(n - part, part, shape, fn);
    shape.pop_back();
  }
}

}  // namespace

std::uint64_t count_paired_partitions(int n, const Caps& caps) {
  if (n < 1) throw std::invalid_argument("count_paired_partitions: need n >= 1");
  if (n > caps.count_cap)
    throw CapExceeded("count_paired_partitions: n exceeds the counting cap of " +
                      std::to_string(caps.count_cap));
  std::uint64_t total = 0;
  std::vector<int> shape;
  visit_shapes(n, n, shape, [&](const std::vector<int>& parts) {
    // Set partitions of shape lambda: n! / (prod_j (j!)^{m_j} * prod_j m_j!),
    // where m_j is the multiplicity of part size j.
    std::uint64_t part_factorials = 1;
    std::uint64_t multiplicities = 1;
    int run = 0;
    for (std::size_t i = 0; i < parts.size(); ++i) {
      part_factorials *= factorial(parts[i]);
      run = (i > 0 && parts[i] == parts[i - 1]) ? run + 1 : 1;
      multiplicities *= static_cast<std::uint64_t>(run);
    }
    const std::uint64_t shape_count = factorial(n) / (part_factorials * multiplicities);
    total += shape_count * shape_count * multiplicities;
  });
  return total;
}

}  // namespace permflow
