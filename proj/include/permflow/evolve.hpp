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

#ifndef PERMFLOW_EVOLVE_HPP_
#define PERMFLOW_EVOLVE_HPP_

#include <Eigen/Dense>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>

#include "permflow/common.hpp"
#include "permflow/lattice.hpp"
#include "permflow/ordered_pairs.hpp"

namespace permflow {

// A function on the permutation group at a fixed time, stored densely over
// all n! group elements in rank order.
struct DistributionTable {
  int n_vertices = 0;
  double t = 0.0;
  Eigen::VectorXd values;  // length n!, indexed by rank

  std::int64_t states() const { return values.size(); }
};

// An ordered-pair marginal over a context set S: one value per injection of
// S into the vertex set, stored densely in arrangement-rank order of the
// target sequence.
struct MarginalTable {
  int n_vertices = 0;
  VertexSet subset;  // sorted S
  double t = 0.0;
  Eigen::VectorXd values;  // length n!/(n-|S|)!

  OrderedPair key(Eigen::Index idx) const;
  Eigen::Index index_of(const OrderedPair& o) const;
  double value_of(const OrderedPair& o) const { return values(index_of(o)); }
};

// Point mass at the identity.
DistributionTable initial_delta(int n_vertices);

// Precomputed group adjacency: entry (state, edge) is the rank reached by
// swapping that edge's endpoints in the state's target sequence.
struct GroupNeighbors {
  int n_vertices = 0;
  std::int64_t states = 0;
  int edge_count = 0;
  std::vector<std::int64_t> table;  // states * edge_count, row-major by state

  std::int64_t at(std::int64_t state, int edge) const {
    return table[static_cast<std::size_t>(state) * static_cast<std::size_t>(edge_count) +
                 static_cast<std::size_t>(edge)];
  }
};

GroupNeighbors build_group_neighbors(const Lattice& lattice, const Caps& caps = {});

// Right-hand side of the group heat equation at the table's current state.
Eigen::VectorXd generator_apply(const DistributionTable& c, const Lattice& lattice,
                                const Caps& caps = {});

// Exact evolution workspace for one lattice: holds the neighbor table and,
// for the spectral method, a single eigendecomposition reused across times.
// Evolution from the delta start is cached per requested time.
class GroupEvolution {
 public:
  GroupEvolution(const Lattice& lattice, Method method, const Caps& caps = {});

  const Lattice& lattice() const { return lattice_; }
  Method method() const { return method_; }

  // Distribution at time t from the delta-at-identity start; cached.
  const DistributionTable& at(double t);

  DistributionTable evolve_from(const DistributionTable& c0, double t) const;

 private:
  Eigen::VectorXd flow(const Eigen::VectorXd& v0, double t) const;

  Lattice lattice_;
  Method method_;
  Caps caps_;
  GroupNeighbors nbrs_;
  Eigen::MatrixXd eigvecs_;  // spectral method only
  Eigen::VectorXd eigvals_;
  std::map<double, DistributionTable> delta_cache_;
};

// One-shot evolution of an arbitrary initial table.
DistributionTable evolve(const DistributionTable& c0, const Lattice& lattice, double t,
                         Method method = Method::kExactSpectral, const Caps& caps = {});

// Sum of C over the full states containing o as a subsequence.
double marginalize(const DistributionTable& c, const OrderedPair& o);

// The whole marginal over context set s, accumulated in one pass over the
// full table in rank order.
MarginalTable marginal_table(const DistributionTable& c, const VertexSet& s);

// Right-hand side of the marginal heat equation (swap and hop moves).
Eigen::VectorXd marginal_generator_apply(const MarginalTable& m, const Lattice& lattice);

// Dense symmetric generator of the marginal flow, indexed like the table.
Eigen::MatrixXd marginal_generator_matrix(const Lattice& lattice, const VertexSet& s);

MarginalTable evolve_marginal(const MarginalTable& m0, const Lattice& lattice, double t,
                              Method method = Method::kExactSpectral);

// Commuting-diagram check: evolve-then-marginalize against
// marginalize-then-evolve, from the delta start. Returns the max residual.
double verify_marginal_heat(GroupEvolution& ge, const VertexSet& s, double t);
double verify_marginal_heat(const Lattice& lattice, const VertexSet& s, double t,
                            Method method = Method::kExactSpectral, const Caps& caps = {});

// CSV export with columns (state text form, value), quoted first column.
void write_distribution_csv(const DistributionTable& c, std::ostream& out);
void write_marginal_csv(const MarginalTable& m, std::ostream& out);

}  // namespace permflow

#endif  // PERMFLOW_EVOLVE_HPP_
