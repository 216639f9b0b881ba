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

#ifndef PERMFLOW_POLYMER_HPP_
#define PERMFLOW_POLYMER_HPP_

#include <Eigen/Dense>
#include <bit>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>

#include "permflow/common.hpp"
#include "permflow/evolve.hpp"
#include "permflow/lattice.hpp"
#include "permflow/ordered_pairs.hpp"
#include "permflow/partitions.hpp"

namespace permflow {

// Polymer weights u(o_k, t), keyed by ordered pair. Absent keys mean zero.
struct UTable {
  double t = 0.0;
  std::map<OrderedPair, double> entries;

  double value(const OrderedPair& key) const {
    const auto it = entries.find(key);
    return it == entries.end() ? 0.0 : it->second;
  }
};

// Boundary weights w(vs, t) attached to complement blocks. The absent
// complement always carries weight 1 and is never stored.
struct WTable {
  std::map<PairedSubset, double> entries;
};

// A candidate solution of the expansion equations. Many solutions exist;
// the label names which construction produced this one.
struct PolymerSolution {
  UTable u;
  WTable w;
  std::string label;
};

enum class EvalMode {
  kLiteral,  // inner sums enumerate every ordering and filter
  kReduced,  // inner sums enumerate only the consistent completions
};

// How the complement block of a covering partition enters the marginal
// expansion: through its boundary weight only, or additionally as an
// unconstrained factor inside the block product. The boundary-weight-only
// reading is the one under which the expansion reproduces the marginals for
// every u table; the other reading stays available for comparison.
enum class ComplementMode {
  kWeightOnly,
  kInProduct,
};

// w for a complement block: 1 when absent, the stored value when present in
// the table, otherwise derived from u.
double boundary_weight(const PolymerSolution& sol, const std::optional<PairedSubset>& block,
                       const Caps& caps = {});

// The group-function expansion: sum over paired partitions of the full
// paired vertex set of block products of constrained u sums.
double eval_c_expansion(const PolymerSolution& sol, const OrderedPair& o_full,
                        EvalMode mode = EvalMode::kReduced, const Caps& caps = {});

// The marginal expansion over S-covering partitions.
double eval_marginal_expansion(const PolymerSolution& sol, int n_vertices, const VertexSet& s,
                               const OrderedPair& o, EvalMode mode = EvalMode::kReduced,
                               ComplementMode complement_mode = ComplementMode::kWeightOnly,
                               const Caps& caps = {});

// Boundary weight from the u table alone: sum over paired partitions of vs
// of block products of unconstrained u sums.
double derive_w(const UTable& u, const PairedSubset& vs, const Caps& caps = {});

// The solution supported on full ordered pairs only: u = C there, all other
// u zero. Reproduces C and every marginal exactly.
PolymerSolution trivial_solution(const DistributionTable& c);

// First inductive step: u on singletons equals c * g(t), boundary weight 1
// on the complements of singletons, everything else zero / derived. A
// diagnostic object, not an exact solution.
PolymerSolution rank1_solution(const HeatKernel& g, double c);

// Exact permanent by inclusion-exclusion over column subsets with a
// Gray-code walk, one column toggled per step.
template <typename Derived>
double permanent(const Eigen::MatrixBase<Derived>& m, int cap = 20) {
  const Eigen::Index n = m.rows();
  if (n != m.cols()) throw std::invalid_argument("permanent: matrix must be square");
  if (n > cap)
    throw CapExceeded("permanent: order " + std::to_string(n) + " exceeds the cap of " +
                      std::to_string(cap));
  if (n == 0) return 1.0;

  Eigen::VectorXd row_sums = Eigen::VectorXd::Zero(n);
  double total = 0.0;
  std::uint64_t gray = 0;
  const std::uint64_t subsets = std::uint64_t{1} << n;
  for (std::uint64_t k = 1; k < subsets; ++k) {
    const std::uint64_t next = k ^ (k >> 1);
    const std::uint64_t toggled = gray ^ next;
    const int j = std::countr_zero(toggled);
    if (next & toggled)
      row_sums += m.col(j).template cast<double>();
    else
      row_sums -= m.col(j).template cast<double>();
    gray = next;
    const double prod = row_sums.prod();
    total += (std::popcount(gray) & 1) ? -prod : prod;
  }
  return (n & 1) ? -total : total;
}

// Independent route for cross-checks: the plain sum over all permutations.
double permanent_reference(const Eigen::MatrixXd& m, int cap = 10);

// The positive constant making the all-singletons expansion of the delta
// start sum to one: permanent(g)^(-1/n).
double solve_c(const HeatKernel& g);

// The value the same constraint forces on a uniform kernel: (n!/n^n)^(-1/n).
// Approaches e from below as n grows.
double c_asymptotic(int n);

struct McPermanentEstimate {
  double estimate = 0.0;
  double std_error = 0.0;
  std::int64_t samples = 0;
};

// Unbiased permanent estimator: n! times the mean of the diagonal product
// over uniformly sampled permutations. Byte-reproducible for a fixed seed.
McPermanentEstimate mc_estimate_permanent(const HeatKernel& g, std::int64_t samples,
                                          std::uint64_t seed);

// The optional vanishing-sum condition: the unconstrained u sum over a
// paired subset of cardinality > 1. A solution satisfies the condition when
// this returns zero.
double check_sum_condition(const UTable& u, const PairedSubset& vs);

// Max |expansion - exact| over all full states.
double expansion_residual(const PolymerSolution& sol, const DistributionTable& c_exact,
                          EvalMode mode = EvalMode::kReduced, const Caps& caps = {});

// Max |expansion - exact| over a whole marginal table.
double marginal_expansion_residual(const PolymerSolution& sol, const MarginalTable& exact,
                                   EvalMode mode = EvalMode::kReduced,
                                   ComplementMode complement_mode = ComplementMode::kWeightOnly,
                                   const Caps& caps = {});

// Line-oriented serialization: "u: <ordered pair> = <value>" and
// "w: <paired subset> = <value>", lexicographically sorted.
void write_solution(const PolymerSolution& sol, std::ostream& out);
PolymerSolution read_solution(std::istream& in);

}  // namespace permflow

#endif  // PERMFLOW_POLYMER_HPP_
