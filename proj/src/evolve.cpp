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

#include "permflow/evolve.hpp"

#include <algorithm>
#include <numeric>
#include <ostream>
#include <stdexcept>

#include "permflow/indexing.hpp"
#include "permflow/numerics.hpp"

namespace permflow {

namespace {

// Sanity bound guarding factorial() overflow before the cap check applies.
std::uint64_t checked_states(int n_vertices, std::uint64_t cap, const char* what) {
  if (n_vertices < 2 || n_vertices > 20)
    throw std::invalid_argument(std::string(what) + ": vertex count out of [2, 20]");
  const std::uint64_t states = factorial(n_vertices);
  if (states > cap)
    throw CapExceeded(std::string(what) + ": " + std::to_string(n_vertices) +
                      "! = " + std::to_string(states) + " states exceeds the cap of " +
                      std::to_string(cap));
  return states;
}

Eigen::VectorXd neighbor_sum_minus_degree(const GroupNeighbors& nbrs,
                                          const Eigen::VectorXd& values) {
  Eigen::VectorXd out(values.size());
  const double degree = static_cast<double>(nbrs.edge_count);
  for (std::int64_t r = 0; r < nbrs.states; ++r) {
    double acc = 0.0;
    for (int e = 0; e < nbrs.edge_count; ++e) acc += values(nbrs.at(r, e));
    out(r) = acc - degree * values(r);
  }
  return out;
}

Eigen::MatrixXd group_generator_matrix(const GroupNeighbors& nbrs) {
  Eigen::MatrixXd gen = Eigen::MatrixXd::Zero(nbrs.states, nbrs.states);
  for (std::int64_t r = 0; r < nbrs.states; ++r) {
    for (int e = 0; e < nbrs.edge_count; ++e) gen(r, nbrs.at(r, e)) += 1.0;
    gen(r, r) -= static_cast<double>(nbrs.edge_count);
  }
  return gen;
}

}  // namespace

DistributionTable initial_delta(int n_vertices) {
  if (n_vertices < 2) throw std::invalid_argument("initial delta: need at least 2 vertices");
  DistributionTable c;
  c.n_vertices = n_vertices;
  c.t = 0.0;
  c.values = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(factorial(n_vertices)));
  c.values(0) = 1.0;  // identity has rank 0
  return c;
}

GroupNeighbors build_group_neighbors(const Lattice& lattice, const Caps& caps) {
  GroupNeighbors nbrs;
  nbrs.n_vertices = lattice.n;
  nbrs.states =
      static_cast<std::int64_t>(checked_states(lattice.n, caps.factorial_cap, "group neighbors"));
  nbrs.edge_count = lattice.edge_count();
  nbrs.table.resize(static_cast<std::size_t>(nbrs.states) *
                    static_cast<std::size_t>(nbrs.edge_count));

  // Walk the permutations in rank (= lexicographic) order.
  std::vector<VertexId> perm(static_cast<std::size_t>(lattice.n));
  std::vector<int> position(static_cast<std::size_t>(lattice.n));
  std::iota(perm.begin(), perm.end(), 0);
  std::vector<VertexId> swapped;
  for (std::int64_t r = 0; r < nbrs.states; ++r) {
    for (int i = 0; i < lattice.n; ++i) position[static_cast<std::size_t>(perm[static_cast<std::size_t>(i)])] = i;
    for (int e = 0; e < nbrs.edge_count; ++e) {
      const auto [a, b] = lattice.edges[static_cast<std::size_t>(e)];
      swapped = perm;
      std::swap(swapped[static_cast<std::size_t>(position[static_cast<std::size_t>(a)])],
                swapped[static_cast<std::size_t>(position[static_cast<std::size_t>(b)])]);
      nbrs.table[static_cast<std::size_t>(r) * static_cast<std::size_t>(nbrs.edge_count) +
                 static_cast<std::size_t>(e)] =
          static_cast<std::int64_t>(permutation_rank(swapped));
    }
    std::next_permutation(perm.begin(), perm.end());
  }
  return nbrs;
}

Eigen::VectorXd generator_apply(const DistributionTable& c, const Lattice& lattice,
                                const Caps& caps) {
  const GroupNeighbors nbrs = build_group_neighbors(lattice, caps);
  if (c.states() != nbrs.states)
    throw std::invalid_argument("generator_apply: table size does not match the lattice");
  return neighbor_sum_minus_degree(nbrs, c.values);
}

GroupEvolution::GroupEvolution(const Lattice& lattice, Method method, const Caps& caps)
    : lattice_(lattice), method_(method), caps_(caps) {
  nbrs_ = build_group_neighbors(lattice_, caps_);
  if (method_ == Method::kExactSpectral) {
    if (static_cast<std::uint64_t>(nbrs_.states) > caps_.spectral_cap)
      throw CapExceeded("exact-spectral evolution: " + std::to_string(nbrs_.states) +
                        " states exceeds the spectral cap of " +
                        std::to_string(caps_.spectral_cap));
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(group_generator_matrix(nbrs_));
    eigvecs_ = es.eigenvectors();
    eigvals_ = es.eigenvalues();
  }
}

Eigen::VectorXd GroupEvolution::flow(const Eigen::VectorXd& v0, double t) const {
  if (t == 0.0) return v0;
  if (method_ == Method::kExactSpectral) {
    const Eigen::ArrayXd scale = (t * eigvals_.array()).exp();
    const Eigen::VectorXd coeffs = eigvecs_.transpose() * v0;
    return eigvecs_ * (scale * coeffs.array()).matrix();
  }
  const double h = ode_step_size(nbrs_.edge_count);
  return rk4_flow(Eigen::VectorXd(v0), t, h, [this](const Eigen::VectorXd& v) {
    return neighbor_sum_minus_degree(nbrs_, v);
  });
}

const DistributionTable& GroupEvolution::at(double t) {
  if (t < 0.0) throw std::invalid_argument("evolution time must be nonnegative");
  auto it = delta_cache_.find(t);
  if (it == delta_cache_.end()) {
    DistributionTable c = initial_delta(lattice_.n);
    c.values = flow(c.values, t);
    c.t = t;
    it = delta_cache_.emplace(t, std::move(c)).first;
  }
  return it->second;
}

DistributionTable GroupEvolution::evolve_from(const DistributionTable& c0, double t) const {
  if (t < 0.0) throw std::invalid_argument("evolution time must be nonnegative");
  if (c0.states() != nbrs_.states)
    throw std::invalid_argument("evolve: table size does not match the lattice");
  DistributionTable c = c0;
  c.values = flow(c0.values, t);
  c.t = c0.t + t;
  return c;
}

DistributionTable evolve(const DistributionTable& c0, const Lattice& lattice, double t,
                         Method method, const Caps& caps) {
  GroupEvolution ge(lattice, method, caps);
  return ge.evolve_from(c0, t);
}

OrderedPair MarginalTable::key(Eigen::Index idx) const {
  return OrderedPair::from_sequences(
      subset, arrangement_unrank(static_cast<std::uint64_t>(idx),
                                 static_cast<int>(subset.size()), n_vertices));
}

Eigen::Index MarginalTable::index_of(const OrderedPair& o) const {
  if (o.sources() != subset)
    throw std::invalid_argument("marginal table: key sources must equal the context set");
  const std::vector<VertexId> dst = o.targets();
  return static_cast<Eigen::Index>(arrangement_rank(dst, n_vertices));
}

double marginalize(const DistributionTable& c, const OrderedPair& o) {
  if (o.empty() || !o.well_formed())
    throw std::invalid_argument("marginalize: need a nonempty well-formed ordered pair");
  const int n = c.n_vertices;
  double acc = 0.0;
  for (std::int64_t r = 0; r < c.states(); ++r) {
    if (is_subsequence(o, unrank(static_cast<std::uint64_t>(r), n)))
      acc += c.values(static_cast<Eigen::Index>(r));
  }
  return acc;
}

MarginalTable marginal_table(const DistributionTable& c, const VertexSet& s) {
  if (s.empty() || !is_sorted_unique(s))
    throw std::invalid_argument("marginal table: context set must be nonempty, sorted, distinct");
  if (s.front() < 0 || s.back() >= c.n_vertices)
    throw std::invalid_argument("marginal table: context set outside the vertex set");
  MarginalTable m;
  m.n_vertices = c.n_vertices;
  m.subset = s;
  m.t = c.t;
  const int k = static_cast<int>(s.size());
  m.values = Eigen::VectorXd::Zero(
      static_cast<Eigen::Index>(falling_factorial(c.n_vertices, k)));

  // One pass over the full table: each full state lands in exactly one cell.
  std::vector<VertexId> perm(static_cast<std::size_t>(c.n_vertices));
  std::iota(perm.begin(), perm.end(), 0);
  std::vector<VertexId> dst(static_cast<std::size_t>(k));
  for (std::int64_t r = 0; r < c.states(); ++r) {
    for (int i = 0; i < k; ++i)
      dst[static_cast<std::size_t>(i)] = perm[static_cast<std::size_t>(s[static_cast<std::size_t>(i)])];
    m.values(static_cast<Eigen::Index>(arrangement_rank(dst, c.n_vertices))) +=
        c.values(static_cast<Eigen::Index>(r));
    std::next_permutation(perm.begin(), perm.end());
  }
  return m;
}

Eigen::VectorXd marginal_generator_apply(const MarginalTable& m, const Lattice& lattice) {
  if (m.n_vertices != lattice.n)
    throw std::invalid_argument("marginal generator: table does not match the lattice");
  Eigen::VectorXd out(m.values.size());
  for (Eigen::Index idx = 0; idx < m.values.size(); ++idx) {
    const OrderedPair o = m.key(idx);
    double acc = 0.0;
    int degree = 0;
    for (const OrderedPair& nbr : neighbors_partial(o, lattice)) {
      acc += m.values(m.index_of(nbr));
      ++degree;
    }
    out(idx) = acc - degree * m.values(idx);
  }
  return out;
}

Eigen::MatrixXd marginal_generator_matrix(const Lattice& lattice, const VertexSet& s) {
  const int k = static_cast<int>(s.size());
  const auto size = static_cast<Eigen::Index>(falling_factorial(lattice.n, k));
  MarginalTable probe;
  probe.n_vertices = lattice.n;
  probe.subset = s;
  probe.values = Eigen::VectorXd::Zero(size);
  Eigen::MatrixXd gen = Eigen::MatrixXd::Zero(size, size);
  for (Eigen::Index idx = 0; idx < size; ++idx) {
    const OrderedPair o = probe.key(idx);
    for (const OrderedPair& nbr : neighbors_partial(o, lattice)) {
      gen(idx, probe.index_of(nbr)) += 1.0;
      gen(idx, idx) -= 1.0;
    }
  }
  return gen;
}

MarginalTable evolve_marginal(const MarginalTable& m0, const Lattice& lattice, double t,
                              Method method) {
  if (t < 0.0) throw std::invalid_argument("evolution time must be nonnegative");
  const Eigen::MatrixXd gen = marginal_generator_matrix(lattice, m0.subset);
  MarginalTable m = m0;
  m.t = m0.t + t;
  switch (method) {
    case Method::kExactSpectral:
      m.values = expm_symmetric_apply(gen, t, m0.values);
      break;
    case Method::kOde: {
      const int max_degree = static_cast<int>(-gen.diagonal().minCoeff());
      m.values = rk4_flow(Eigen::VectorXd(m0.values), t, ode_step_size(max_degree),
                          [&gen](const Eigen::VectorXd& v) -> Eigen::VectorXd { return gen * v; });
      break;
    }
  }
  return m;
}

double verify_marginal_heat(GroupEvolution& ge, const VertexSet& s, double t) {
  const MarginalTable direct = marginal_table(ge.at(t), s);
  const MarginalTable evolved = evolve_marginal(marginal_table(ge.at(0.0), s), ge.lattice(), t,
                                                ge.method());
  return (direct.values - evolved.values).cwiseAbs().maxCoeff();
}

double verify_marginal_heat(const Lattice& lattice, const VertexSet& s, double t,
                            Method method, const Caps& caps) {
  GroupEvolution ge(lattice, method, caps);
  return verify_marginal_heat(ge, s, t);
}

void write_distribution_csv(const DistributionTable& c, std::ostream& out) {
  out << "state,value\n";
  for (std::int64_t r = 0; r < c.states(); ++r) {
    out << '"' << unrank(static_cast<std::uint64_t>(r), c.n_vertices).to_string() << "\","
        << format_g17(c.values(static_cast<Eigen::Index>(r))) << '\n';
  }
}

void write_marginal_csv(const MarginalTable& m, std::ostream& out) {
  out << "state,value\n";
  for (Eigen::Index idx = 0; idx < m.values.size(); ++idx) {
    out << '"' << m.key(idx).to_string() << "\"," << format_g17(m.values(idx)) << '\n';
  }
}

}  // namespace permflow
