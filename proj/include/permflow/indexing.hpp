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

#ifndef PERMFLOW_INDEXING_HPP_
#define PERMFLOW_INDEXING_HPP_

#include <cstdint>
#include <span>
#include <vector>

#include "permflow/common.hpp"

namespace permflow {

// Dense combinatorial indexing: every table in the library is an Eigen vector
// addressed through one of these lexicographic ranks.

std::uint64_t factorial(int n);                 // n <= 20
std::uint64_t falling_factorial(int n, int k);  // n!/(n-k)!
std::uint64_t binomial(int n, int k);

// Lehmer-code lexicographic rank of a permutation of {0, ..., n-1}.
// The identity has rank 0; (n-1, ..., 1, 0) has rank n!-1.
std::uint64_t permutation_rank(std::span<const VertexId> perm);
std::vector<VertexId> permutation_unrank(std::uint64_t r, int n);

// Lexicographic rank of a length-k sequence of distinct values in [0, n).
std::uint64_t arrangement_rank(std::span<const VertexId> arr, int n);
std::vector<VertexId> arrangement_unrank(std::uint64_t r, int k, int n);

// Lexicographic rank of a sorted k-subset of [0, n).
std::uint64_t combination_rank(std::span<const VertexId> subset, int n);
std::vector<VertexId> combination_unrank(std::uint64_t r, int k, int n);

}  // namespace permflow

#endif  // PERMFLOW_INDEXING_HPP_
