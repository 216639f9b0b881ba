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

#ifndef PERMFLOW_LATTICE_HPP_
#define PERMFLOW_LATTICE_HPP_

#include <Eigen/Dense>
#include <array>
#include <iosfwd>
#include <vector>

#include "permflow/common.hpp"

namespace permflow {

// A finite rectangular lattice in d dimensions with open boundaries.
struct LatticeSpec {
  std::vector<int> dims;  // per-axis extents, all >= 1

  int dimension() const { return static_cast<int>(dims.size()); }
  // Total vertex count; throws on an invalid spec.
  int vertex_count() const;
};

// Vertices carry the fixed standard ordering: row-major over coordinates,
// with the last axis varying fastest. This ordering is not configurable so
// that serialized tables are reproducible.
struct Lattice {
  LatticeSpec spec;
  int n = 0;                                     // vertex count
  std::vector<std::array<VertexId, 2>> edges;    // nearest-neighbor pairs, a < b
  std::vector<std::vector<VertexId>> adjacency;  // sorted neighbor lists

  int edge_count() const { return static_cast<int>(edges.size()); }
  int max_degree() const;
};

Lattice build_lattice(const LatticeSpec& spec);

std::vector<int> vertex_coordinates(const Lattice& lattice, VertexId v);
VertexId vertex_at(const Lattice& lattice, const std::vector<int>& coords);

const std::vector<VertexId>& neighbors(const Lattice& lattice, VertexId v);

// Single-particle heat kernel: g(t) solves dg/dt = (A - D) g with g(0) = I,
// unit rate per lattice edge. Symmetric and doubly stochastic.
struct HeatKernel {
  double t = 0.0;
  Eigen::MatrixXd g;
};

HeatKernel heat_kernel(const Lattice& lattice, double t,
                       Method method = Method::kExactSpectral);

// The symmetric generator A - D of the single-particle flow.
Eigen::MatrixXd lattice_generator(const Lattice& lattice);

// One row per source vertex, comma-separated, 17 significant digits.
void write_kernel_csv(const HeatKernel& kernel, std::ostream& out);

}  // namespace permflow

#endif  // PERMFLOW_LATTICE_HPP_
