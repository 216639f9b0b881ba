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

// Independent reference routes used only by the tests. Nothing here shares
// code with the implementation paths it checks.

#ifndef PERMFLOW_TESTS_ORACLES_HPP_
#define PERMFLOW_TESTS_ORACLES_HPP_

#include <Eigen/Dense>
#include <algorithm>
#include <numeric>
#include <vector>

#include "permflow/common.hpp"
#include "permflow/indexing.hpp"
#include "permflow/lattice.hpp"
#include "permflow/ordered_pairs.hpp"

namespace permflow::testing {

// Matrix exponential by scaling-and-squaring of a plain Taylor series.
inline Eigen::MatrixXd expm_taylor(const Eigen::MatrixXd& a, double t) {
  Eigen::MatrixXd at = t * a;
  int squarings = 0;
  double norm = at.cwiseAbs().rowwise().sum().maxCoeff();
  while (norm > 0.5) {
    at *= 0.5;
    norm *= 0.5;
    ++squarings;
  }
  Eigen::MatrixXd result = Eigen::MatrixXd::Identity(a.rows(), a.cols());
  Eigen::MatrixXd term = result;
  for (int k = 1; k <= 30; ++k) {
    term = (term * at) / static_cast<double>(k);
    result += term;
  }
  for (int s = 0; s < squarings; ++s) result = result * result;
  return result;
}

// Permanent as the plain sum over all permutations.
inline double permanent_by_enumeration(const Eigen::MatrixXd& m) {
  const int n = static_cast<int>(m.rows());
  std::vector<int> perm(static_cast<std::size_t>(n));
  std::iota(perm.begin(), perm.end(), 0);
  double total = 0.0;
  do {
    double prod = 1.0;
    for (int i = 0; i < n; ++i) prod *= m(i, perm[static_cast<std::size_t>(i)]);
    total += prod;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return total;
}

// Partial-move adjacency decided from the target-sequence difference alone:
// either two positions swap lattice-adjacent values, or one position moves
// to a lattice-adjacent value.
inline bool partial_adjacent(const OrderedPair& a, const OrderedPair& b, const Lattice& lattice) {
  if (a.sources() != b.sources()) return false;
  std::vector<int> changed;
  for (int i = 0; i < a.size(); ++i) {
    if (a.pairs[static_cast<std::size_t>(i)].second != b.pairs[static_cast<std::size_t>(i)].second)
      changed.push_back(i);
  }
  const auto is_edge = [&lattice](VertexId x, VertexId y) {
    return set_contains(lattice.adjacency[static_cast<std::size_t>(x)], y);
  };
  if (changed.size() == 2) {
    const auto& [i, j] = std::pair(changed[0], changed[1]);
    const VertexId ai = a.pairs[static_cast<std::size_t>(i)].second;
    const VertexId aj = a.pairs[static_cast<std::size_t>(j)].second;
    return b.pairs[static_cast<std::size_t>(i)].second == aj &&
           b.pairs[static_cast<std::size_t>(j)].second == ai && is_edge(ai, aj);
  }
  if (changed.size() == 1) {
    const int i = changed[0];
    return is_edge(a.pairs[static_cast<std::size_t>(i)].second,
                   b.pairs[static_cast<std::size_t>(i)].second);
  }
  return false;
}

// Every ordered pair with the given sorted sources and targets drawn from
// the n-vertex set.
inline std::vector<OrderedPair> all_ordered_pairs(const VertexSet& sources, int n_vertices) {
  const int k = static_cast<int>(sources.size());
  std::vector<OrderedPair> out;
  const std::uint64_t count = falling_factorial(n_vertices, k);
  out.reserve(count);
  for (std::uint64_t r = 0; r < count; ++r)
    out.push_back(OrderedPair::from_sequences(sources, arrangement_unrank(r, k, n_vertices)));
  return out;
}

}  // namespace permflow::testing

#endif  // PERMFLOW_TESTS_ORACLES_HPP_
