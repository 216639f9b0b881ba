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

#include "permflow/lattice.hpp"

#include <algorithm>
#include <ostream>
#include <stdexcept>

#include "permflow/numerics.hpp"

namespace permflow {

int LatticeSpec::vertex_count() const {
  if (dims.empty()) throw std::invalid_argument("lattice spec: dims must be nonempty");
  long long n = 1;
  for (int extent : dims) {
    if (extent < 1) throw std::invalid_argument("lattice spec: every extent must be >= 1");
    n *= extent;
    if (n > (1 << 30)) throw std::invalid_argument("lattice spec: vertex count overflow");
  }
  if (n < 2) throw std::invalid_argument("lattice spec: need at least 2 vertices");
  return static_cast<int>(n);
}

Lattice build_lattice(const LatticeSpec& spec) {
  Lattice lattice;
  lattice.spec = spec;
  lattice.n = spec.vertex_count();

  // Row-major strides; the last axis varies fastest.
  const int d = spec.dimension();
  std::vector<int> stride(static_cast<std::size_t>(d), 1);
  for (int a = d - 2; a >= 0; --a)
    stride[static_cast<std::size_t>(a)] =
        stride[static_cast<std::size_t>(a + 1)] * spec.dims[static_cast<std::size_t>(a + 1)];

  lattice.adjacency.assign(static_cast<std::size_t>(lattice.n), {});
  for (VertexId v = 0; v < lattice.n; ++v) {
    const std::vector<int> coords = vertex_coordinates(lattice, v);
    for (int a = 0; a < d; ++a) {
      if (coords[static_cast<std::size_t>(a)] + 1 < spec.dims[static_cast<std::size_t>(a)]) {
        const VertexId w = v + stride[static_cast<std::size_t>(a)];
        lattice.edges.push_back({v, w});
        lattice.adjacency[static_cast<std::size_t>(v)].push_back(w);
        lattice.adjacency[static_cast<std::size_t>(w)].push_back(v);
      }
    }
  }
  std::sort(lattice.edges.begin(), lattice.edges.end());
  for (auto& nbrs : lattice.adjacency) std::sort(nbrs.begin(), nbrs.end());
  return lattice;
}

int Lattice::max_degree() const {
  std::size_t deg = 0;
  for (const auto& nbrs : adjacency) deg = std::max(deg, nbrs.size());
  return static_cast<int>(deg);
}

std::vector<int> vertex_coordinates(const Lattice& lattice, VertexId v) {
  if (v < 0 || v >= lattice.n) throw std::invalid_argument("vertex out of range");
  const int d = lattice.spec.dimension();
  std::vector<int> coords(static_cast<std::size_t>(d));
  int rest = v;
  for (int a = d - 1; a >= 0; --a) {
    const int extent = lattice.spec.dims[static_cast<std::size_t>(a)];
    coords[static_cast<std::size_t>(a)] = rest % extent;
    rest /= extent;
  }
  return coords;
}

VertexId vertex_at(const Lattice& lattice, const std::vector<int>& coords) {
  const int d = lattice.spec.dimension();
  if (static_cast<int>(coords.size()) != d)
    throw std::invalid_argument("coordinate dimension mismatch");
  VertexId v = 0;
  for (int a = 0; a < d; ++a) {
    const int extent = lattice.spec.dims[static_cast<std::size_t>(a)];
    const int c = coords[static_cast<std::size_t>(a)];
    if (c < 0 || c >= extent) throw std::invalid_argument("coordinate out of range");
    v = v * extent + c;
  }
  return v;
}

const std::vector<VertexId>& neighbors(const Lattice& lattice, VertexId v) {
  if (v < 0 || v >= lattice.n) throw std::invalid_argument("vertex out of range");
  return lattice.adjacency[static_cast<std::size_t>(v)];
}

Eigen::MatrixXd lattice_generator(const Lattice& lattice) {
  Eigen::MatrixXd gen = Eigen::MatrixXd::Zero(lattice.n, lattice.n);
  for (const auto& [a, b] : lattice.edges) {
    gen(a, b) += 1.0;
    gen(b, a) += 1.0;
    gen(a, a) -= 1.0;
    gen(b, b) -= 1.0;
  }
  return gen;
}

HeatKernel heat_kernel(const Lattice& lattice, double t, Method method) {
  if (t < 0.0) throw std::invalid_argument("heat kernel: time must be nonnegative");
  HeatKernel kernel;
  kernel.t = t;
  const Eigen::MatrixXd gen = lattice_generator(lattice);
  switch (method) {
    case Method::kExactSpectral:
      kernel.g = expm_symmetric(gen, t);
      break;
    case Method::kOde: {
      const double h = ode_step_size(lattice.max_degree());
      kernel.g = rk4_flow(Eigen::MatrixXd(Eigen::MatrixXd::Identity(lattice.n, lattice.n)),
                          t, h,
                          [&gen](const Eigen::MatrixXd& g) -> Eigen::MatrixXd { return gen * g; });
      break;
    }
  }
  return kernel;
}

void write_kernel_csv(const HeatKernel& kernel, std::ostream& out) {
  for (Eigen::Index i = 0; i < kernel.g.rows(); ++i) {
    for (Eigen::Index j = 0; j < kernel.g.cols(); ++j) {
      if (j > 0) out << ',';
      out << format_g17(kernel.g(i, j));
    }
    out << '\n';
  }
}

}  // namespace permflow
