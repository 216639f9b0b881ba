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

#include "permflow/spinwave.hpp"

#include <algorithm>
#include <ostream>
#include <stdexcept>

#include "permflow/indexing.hpp"
#include "permflow/numerics.hpp"

namespace permflow {

VertexSet SubsetFunction::key(Eigen::Index idx) const {
  return combination_unrank(static_cast<std::uint64_t>(idx),
                            static_cast<int>(context.size()), n_vertices);
}

Eigen::Index SubsetFunction::index_of(const VertexSet& subset) const {
  if (subset.size() != context.size())
    throw std::invalid_argument("subset function: argument cardinality mismatch");
  return static_cast<Eigen::Index>(combination_rank(subset, n_vertices));
}

SubsetFunction forgetful(const MarginalTable& m) {
  SubsetFunction f;
  f.n_vertices = m.n_vertices;
  f.context = m.subset;
  f.t = m.t;
  const int k = static_cast<int>(m.subset.size());
  f.values = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(binomial(m.n_vertices, k)));
  // Each injection lands on its unordered image; summation order is the
  // fixed arrangement-rank order.
  for (Eigen::Index idx = 0; idx < m.values.size(); ++idx) {
    VertexSet image = m.key(idx).target_set();
    f.values(f.index_of(image)) += m.values(idx);
  }
  return f;
}

std::vector<VertexSet> subset_neighbors(const VertexSet& subset, const Lattice& lattice) {
  if (!is_sorted_unique(subset))
    throw std::invalid_argument("subset neighbors: subset must be sorted and distinct");
  std::vector<VertexSet> out;
  for (const VertexId v : subset) {
    for (const VertexId w : neighbors(lattice, v)) {
      if (set_contains(subset, w)) continue;
      VertexSet moved = set_difference(subset, {v});
      moved.insert(std::lower_bound(moved.begin(), moved.end(), w), w);
      out.push_back(std::move(moved));
    }
  }
  return out;
}

Eigen::VectorXd spinwave_generator_apply(const SubsetFunction& f, const Lattice& lattice) {
  if (f.n_vertices != lattice.n)
    throw std::invalid_argument("spinwave generator: function does not match the lattice");
  Eigen::VectorXd out(f.values.size());
  for (Eigen::Index idx = 0; idx < f.values.size(); ++idx) {
    const VertexSet subset = f.key(idx);
    double acc = 0.0;
    int degree = 0;
    for (const VertexSet& nbr : subset_neighbors(subset, lattice)) {
      acc += f.values(f.index_of(nbr));
      ++degree;
    }
    out(idx) = acc - degree * f.values(idx);
  }
  return out;
}

Eigen::MatrixXd spinwave_generator_matrix(const Lattice& lattice, int cardinality) {
  const auto size = static_cast<Eigen::Index>(binomial(lattice.n, cardinality));
  Eigen::MatrixXd gen = Eigen::MatrixXd::Zero(size, size);
  for (Eigen::Index idx = 0; idx < size; ++idx) {
    const VertexSet subset =
        combination_unrank(static_cast<std::uint64_t>(idx), cardinality, lattice.n);
    for (const VertexSet& nbr : subset_neighbors(subset, lattice)) {
      gen(idx, static_cast<Eigen::Index>(combination_rank(nbr, lattice.n))) += 1.0;
      gen(idx, idx) -= 1.0;
    }
  }
  return gen;
}

SubsetFunction evolve_subsets(const SubsetFunction& f0, const Lattice& lattice, double t,
                              Method method) {
  if (t < 0.0) throw std::invalid_argument("evolution time must be nonnegative");
  const Eigen::MatrixXd gen =
      spinwave_generator_matrix(lattice, static_cast<int>(f0.context.size()));
  SubsetFunction f = f0;
  f.t = f0.t + t;
  switch (method) {
    case Method::kExactSpectral:
      f.values = expm_symmetric_apply(gen, t, f0.values);
      break;
    case Method::kOde: {
      const int max_degree = std::max(1, static_cast<int>(-gen.diagonal().minCoeff()));
      f.values = rk4_flow(Eigen::VectorXd(f0.values), t, ode_step_size(max_degree),
                          [&gen](const Eigen::VectorXd& v) -> Eigen::VectorXd { return gen * v; });
      break;
    }
  }
  return f;
}

double verify_forgetful(GroupEvolution& ge, const VertexSet& s, double t) {
  const SubsetFunction direct = forgetful(marginal_table(ge.at(t), s));
  const SubsetFunction evolved =
      evolve_subsets(forgetful(marginal_table(ge.at(0.0), s)), ge.lattice(), t, ge.method());
  return (direct.values - evolved.values).cwiseAbs().maxCoeff();
}

double verify_forgetful(const Lattice& lattice, const VertexSet& s, double t, Method method,
                        const Caps& caps) {
  GroupEvolution ge(lattice, method, caps);
  return verify_forgetful(ge, s, t);
}

double verify_duality(GroupEvolution& ge, const VertexSet& s, double t) {
  const int n = ge.lattice().n;
  if (s.empty() || static_cast<int>(s.size()) >= n)
    throw std::invalid_argument(
        "duality: context cardinality must lie strictly between 0 and the vertex count");
  const SubsetFunction side = forgetful(marginal_table(ge.at(t), s));
  const SubsetFunction dual = forgetful(marginal_table(ge.at(t), complement(s, n)));
  double worst = 0.0;
  for (Eigen::Index idx = 0; idx < side.values.size(); ++idx) {
    const VertexSet mirrored = complement(side.key(idx), n);
    worst = std::max(worst, std::abs(side.values(idx) - dual.value_of(mirrored)));
  }
  return worst;
}

double verify_duality(const Lattice& lattice, const VertexSet& s, double t, Method method,
                      const Caps& caps) {
  GroupEvolution ge(lattice, method, caps);
  return verify_duality(ge, s, t);
}

void write_subset_csv(const SubsetFunction& f, std::ostream& out) {
  out << "subset,value\n";
  for (Eigen::Index idx = 0; idx < f.values.size(); ++idx) {
    out << '"' << vertex_set_to_string(f.key(idx)) << "\"," << format_g17(f.values(idx)) << '\n';
  }
}

}  // namespace permflow
