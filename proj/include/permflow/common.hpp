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

#ifndef PERMFLOW_COMMON_HPP_
#define PERMFLOW_COMMON_HPP_

#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace permflow {

using VertexId = int;

// Vertex sets are kept as sorted, duplicate-free vectors throughout.
using VertexSet = std::vector<VertexId>;

// Thrown when a request exceeds a configured combinatorial size cap.
// The CLI maps this to exit code 3.
class CapExceeded : public std::runtime_error {
 public:
  explicit CapExceeded(const std::string& what) : std::runtime_error(what) {}
};

// Hard size limits for the factorial- and Bell-sized enumerations.
// Defaults are desk-scale; callers may raise them explicitly.
struct Caps {
  std::uint64_t factorial_cap = 40320;  // largest n! state space evolved
  std::uint64_t spectral_cap = 5040;    // largest n! dense eigensolve
  int partition_cap = 6;                // largest paired-subset cardinality enumerated
  int permanent_cap = 20;               // largest matrix order for the permanent
  int count_cap = 8;                    // largest n for the partition counting oracle
};

enum class Method {
  kExactSpectral,  // eigendecomposition of the symmetric generator
  kOde,            // fixed-step classical 4th-order integration
};

std::string to_string(Method m);
Method method_from_string(const std::string& name);

inline bool is_sorted_unique(const VertexSet& s) {
  return std::adjacent_find(s.begin(), s.end(),
                            [](VertexId a, VertexId b) { return a >= b; }) == s.end();
}

inline bool set_contains(const VertexSet& s, VertexId v) {
  return std::binary_search(s.begin(), s.end(), v);
}

VertexSet set_union(const VertexSet& a, const VertexSet& b);
VertexSet set_intersection(const VertexSet& a, const VertexSet& b);
VertexSet set_difference(const VertexSet& a, const VertexSet& b);

// 𝒱 \ S for the n-vertex set {0, ..., n-1}.
VertexSet complement(const VertexSet& s, int n_vertices);

VertexSet full_vertex_set(int n_vertices);

std::string vertex_set_to_string(const VertexSet& s);
VertexSet vertex_set_from_string(const std::string& text);

}  // namespace permflow

#endif  // PERMFLOW_COMMON_HPP_
