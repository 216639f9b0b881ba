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

#ifndef PERMFLOW_ORDERED_PAIRS_HPP_
#define PERMFLOW_ORDERED_PAIRS_HPP_

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "permflow/common.hpp"
#include "permflow/lattice.hpp"

namespace permflow {

// An ordered paired set: a sequence of (source, target) vertex pairs whose
// sources are strictly increasing in the standard ordering and whose targets
// are distinct. A full one (sources = every vertex) is a group element: the
// permutation sending each source to its target.
//
// The empty sequence is representable -- it is what restriction to a disjoint
// set produces -- but is rejected by the group and marginal operations.
struct OrderedPair {
  std::vector<std::pair<VertexId, VertexId>> pairs;

  int size() const { return static_cast<int>(pairs.size()); }
  bool empty() const { return pairs.empty(); }

  VertexSet sources() const;
  std::vector<VertexId> targets() const;   // in sequence order
  VertexSet target_set() const;            // sorted

  // Structural invariants (sources strictly increasing, targets distinct).
  // Holds vacuously for the empty sequence.
  bool well_formed() const;
  bool is_full(int n_vertices) const;

  bool operator==(const OrderedPair& other) const { return pairs == other.pairs; }
  bool operator<(const OrderedPair& other) const { return pairs < other.pairs; }

  // Canonical text form "0>1,1>0,2>2" (src>dst, sources ascending).
  std::string to_string() const;
  static OrderedPair from_string(const std::string& text);

  static OrderedPair from_sequences(const std::vector<VertexId>& sources,
                                    const std::vector<VertexId>& targets);
};

// Two equally sized unordered vertex subsets, each kept sorted.
struct PairedSubset {
  VertexSet s1;
  VertexSet s2;

  int size() const { return static_cast<int>(s1.size()); }
  bool well_formed() const;

  bool operator==(const PairedSubset& other) const {
    return s1 == other.s1 && s2 == other.s2;
  }
  bool operator<(const PairedSubset& other) const {
    return s1 != other.s1 ? s1 < other.s1 : s2 < other.s2;
  }

  // Text form "{0,1}>{2,3}", sets ascending.
  std::string to_string() const;
  static PairedSubset from_string(const std::string& text);
};

// The permutation i -> target(i) described by a full ordered pair.
std::vector<VertexId> as_permutation(const OrderedPair& o, int n_vertices);

// Dense index of a full ordered pair: Lehmer-code lexicographic rank of its
// target sequence. rank(identity) = 0.
std::uint64_t rank(const OrderedPair& o);
OrderedPair unrank(std::uint64_t r, int n_vertices);

OrderedPair identity_pair(int n_vertices);
OrderedPair inverse(const OrderedPair& o);

// Whether o's pairs occur, in order, as a subsequence of s's pairs.
bool is_subsequence(const OrderedPair& o, const OrderedPair& s);

// Keeps exactly the pairs whose source lies in the sorted set s; may be empty.
OrderedPair restrict_to(const OrderedPair& o, const VertexSet& s);

// Group adjacency: one neighbor per lattice edge, obtained by swapping the
// edge's endpoints inside the target sequence.
std::vector<OrderedPair> neighbors_full(const OrderedPair& o, const Lattice& lattice);

// Partial adjacency: swaps of edges with both endpoints among the targets,
// plus replacement of a target by a vacant lattice neighbor.
std::vector<OrderedPair> neighbors_partial(const OrderedPair& o, const Lattice& lattice);

// All ordered pairs over a paired subset: sources fixed in standard order,
// targets running over every ordering of s2. |s1|! results.
std::vector<OrderedPair> orderings_of(const PairedSubset& vs);

}  // namespace permflow

#endif  // PERMFLOW_ORDERED_PAIRS_HPP_
