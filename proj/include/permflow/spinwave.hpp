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

#ifndef PERMFLOW_SPINWAVE_HPP_
#define PERMFLOW_SPINWAVE_HPP_

#include <Eigen/Dense>
#include <iosfwd>
#include <vector>

#include "permflow/common.hpp"
#include "permflow/evolve.hpp"
#include "permflow/lattice.hpp"

namespace permflow {

// A function on the unordered subsets of the vertex set with the same
// cardinality as a context set, stored densely in combination-rank order.
// This is the fixed-magnon-number sector the ordered marginals project onto.
struct SubsetFunction {
  int n_vertices = 0;
  VertexSet context;  // sorted s
  double t = 0.0;
  Eigen::VectorXd values;  // length C(n, |s|)

  VertexSet key(Eigen::Index idx) const;
  Eigen::Index index_of(const VertexSet& subset) const;
  double value_of(const VertexSet& subset) const { return values(index_of(subset)); }
};

// Sums an ordered marginal over the orderings of each target set.
SubsetFunction forgetful(const MarginalTable& m);

// All sets reachable by moving one member to a vacant lattice neighbor.
std::vector<VertexSet> subset_neighbors(const VertexSet& subset, const Lattice& lattice);

// Right-hand side of the vacancy-hop heat equation on subsets.
Eigen::VectorXd spinwave_generator_apply(const SubsetFunction& f, const Lattice& lattice);

// Dense symmetric generator over combination indices.
Eigen::MatrixXd spinwave_generator_matrix(const Lattice& lattice, int cardinality);

SubsetFunction evolve_subsets(const SubsetFunction& f0, const Lattice& lattice, double t,
                              Method method = Method::kExactSpectral);

// Commuting-diagram check: group evolution, marginalization, and projection
// against projection at time zero followed by subset-hop evolution.
double verify_forgetful(GroupEvolution& ge, const VertexSet& s, double t);
double verify_forgetful(const Lattice& lattice, const VertexSet& s, double t,
                        Method method = Method::kExactSpectral, const Caps& caps = {});

// Complementary-sector identity: max over subsets of the difference between
// the projected function at s and the one at the complement of s, evaluated
// at complementary arguments. Both sides run the full pipeline.
double verify_duality(GroupEvolution& ge, const VertexSet& s, double t);
double verify_duality(const Lattice& lattice, const VertexSet& s, double t,
                      Method method = Method::kExactSpectral, const Caps& caps = {});

// CSV export with columns (subset as sorted comma list, value).
void write_subset_csv(const SubsetFunction& f, std::ostream& out);

}  // namespace permflow

#endif  // PERMFLOW_SPINWAVE_HPP_
