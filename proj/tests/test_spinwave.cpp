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

#include <doctest.h>

#include <set>
#include <sstream>

#include "permflow/indexing.hpp"
#include "permflow/numerics.hpp"
#include "permflow/spinwave.hpp"

using namespace permflow;

namespace {

std::vector<VertexSet> subsets_of_size(int n, int k) {
  std::vector<VertexSet> out;
  for (std::uint64_t r = 0; r < binomial(n, k); ++r) out.push_back(combination_unrank(r, k, n));
  return out;
}

}  // namespace

TEST_CASE("forgetful projection: delta start, kernel identity, unit mass") {
  const Lattice square = build_lattice(LatticeSpec{{2, 2}});
  GroupEvolution ge(square, Method::kExactSpectral);

  // At t = 0 the projection is the indicator of the context set itself.
  const SubsetFunction start = forgetful(marginal_table(ge.at(0.0), {1, 2}));
  for (Eigen::Index idx = 0; idx < start.values.size(); ++idx) {
    CHECK(start.values(idx) == (start.key(idx) == VertexSet{1, 2} ? 1.0 : 0.0));
  }

  // Single-vertex contexts reproduce heat-kernel columns.
  const HeatKernel g = heat_kernel(square, 1.0);
  for (VertexId i = 0; i < 4; ++i) {
    const SubsetFunction f = forgetful(marginal_table(ge.at(1.0), {i}));
    for (VertexId j = 0; j < 4; ++j) {
      CHECK(std::abs(f.value_of({j}) - g.g(j, i)) < 1e-8);
    }
  }

  // Total mass one at every time, constant in t.
  for (const VertexSet& s : {VertexSet{0}, {0, 3}, {0, 1, 2}}) {
    for (double t : {0.0, 0.5, 2.0}) {
      const SubsetFunction f = forgetful(marginal_table(ge.at(t), s));
      CHECK(std::abs(f.values.sum() - 1.0) < 1e-9);
    }
  }
}

TEST_CASE("subset neighbors hop one member to a vacant adjacent vertex") {
  const Lattice chain = build_lattice(LatticeSpec{{2}});
  CHECK(subset_neighbors({0}, chain) == std::vector<VertexSet>{{1}});

  const Lattice square = build_lattice(LatticeSpec{{2, 2}});
  const auto nbrs = subset_neighbors({0, 1}, square);
  CHECK(std::set<VertexSet>(nbrs.begin(), nbrs.end()) ==
        std::set<VertexSet>{{1, 2}, {0, 3}});

  CHECK(subset_neighbors({0, 1, 2, 3}, square).empty());
}

TEST_CASE("subset-hop generator: constants, single particle, conservation") {
  const Lattice square = build_lattice(LatticeSpec{{2, 2}});

  SubsetFunction uniform;
  uniform.n_vertices = 4;
  uniform.context = {0, 1};
  uniform.values = Eigen::VectorXd::Constant(6, 1.0 / 6.0);
  CHECK(spinwave_generator_apply(uniform, square).cwiseAbs().maxCoeff() == 0.0);

  SubsetFunction single;
  single.n_vertices = 4;
  single.context = {2};
  SeededRng rng(5);
  single.values = Eigen::VectorXd::NullaryExpr(4, [&](Eigen::Index) { return rng.next_unit(); });
  const Eigen::VectorXd expected = lattice_generator(square) * single.values;
  CHECK((spinwave_generator_apply(single, square) - expected).cwiseAbs().maxCoeff() < 1e-13);

  SubsetFunction random_f;
  random_f.n_vertices = 4;
  random_f.context = {0, 3};
  random_f.values = Eigen::VectorXd::NullaryExpr(6, [&](Eigen::Index) { return rng.next_unit(); });
  CHECK(std::abs(spinwave_generator_apply(random_f, square).sum()) < 1e-13);
}

TEST_CASE("forgetful projection commutes with the subset-hop evolution") {
  const Lattice square = build_lattice(LatticeSpec{{2, 2}});
  GroupEvolution sq(square, Method::kExactSpectral);
  CHECK(verify_forgetful(sq, {0}, 1.0) < 1e-8);
  CHECK(verify_forgetful(sq, {0, 1}, 1.0) < 1e-7);
  CHECK(verify_forgetful(sq, {0, 1, 2, 3}, 1.5) < 1e-12);  // single-cell sector

  const Lattice rect = build_lattice(LatticeSpec{{2, 3}});
  GroupEvolution re(rect, Method::kExactSpectral);
  for (int k = 1; k <= 5; ++k) {
    for (const VertexSet& s : subsets_of_size(6, k)) {
      CHECK(verify_forgetful(re, s, 0.25) < 1e-7);
    }
  }
}

TEST_CASE("complement helper") {
  CHECK(complement({}, 4) == VertexSet{0, 1, 2, 3});
  CHECK(complement({0, 1, 2, 3}, 4) == VertexSet{});
  CHECK(complement({0, 3}, 4) == VertexSet{1, 2});
}

TEST_CASE("duality between complementary sectors") {
  const Lattice square = build_lattice(LatticeSpec{{2, 2}});
  GroupEvolution sq(square, Method::kExactSpectral);
  CHECK(verify_duality(sq, {2}, 1.0) < 1e-9);
  CHECK(verify_duality(sq, {0, 1}, 0.5) < 1e-9);
  CHECK(verify_duality(sq, {1}, 0.0) == 0.0);  // indicators mirror exactly

  CHECK_THROWS_AS(verify_duality(sq, {}, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(verify_duality(sq, {0, 1, 2, 3}, 1.0), std::invalid_argument);

  const Lattice rect = build_lattice(LatticeSpec{{2, 3}});
  GroupEvolution re(rect, Method::kExactSpectral);
  for (int k = 1; k <= 5; ++k) {
    for (const VertexSet& s : subsets_of_size(6, k)) {
      CHECK(verify_duality(re, s, 0.5) < 1e-9);
    }
  }
}

TEST_CASE("subset csv export") {
  const Lattice square = build_lattice(LatticeSpec{{2, 2}});
  GroupEvolution ge(square, Method::kExactSpectral);
  std::ostringstream out;
  write_subset_csv(forgetful(marginal_table(ge.at(0.0), {0, 2})), out);
  const std::string text = out.str();
  CHECK(text.rfind("subset,value\n", 0) == 0);
  CHECK(text.find("\"0,2\",1\n") != std::string::npos);
  CHECK(text.find("\"0,1\",0\n") != std::string::npos);
}
