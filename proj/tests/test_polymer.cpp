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

#include <cmath>
#include <sstream>

#include "oracles.hpp"
#include "permflow/evolve.hpp"
#include "permflow/indexing.hpp"
#include "permflow/numerics.hpp"
#include "permflow/polymer.hpp"

using namespace permflow;

namespace {

// Sparse u table with random support across key sizes, values in [-1, 1].
PolymerSolution random_solution(int n_vertices, std::uint64_t seed, int support) {
  SeededRng rng(seed);
  PolymerSolution sol;
  sol.label = "fuzz";
  const VertexSet all = full_vertex_set(n_vertices);
  for (int e = 0; e < support; ++e) {
    const int size = 1 + static_cast<int>(rng.next_below(static_cast<std::uint64_t>(n_vertices)));
    VertexSet sources;
    while (static_cast<int>(sources.size()) < size) {
      const auto v = static_cast<VertexId>(rng.next_below(static_cast<std::uint64_t>(n_vertices)));
      if (!set_contains(sources, v))
        sources.insert(std::lower_bound(sources.begin(), sources.end(), v), v);
    }
    std::vector<VertexId> pool = all;
    rng.shuffle(pool);
    std::vector<VertexId> targets(pool.begin(), pool.begin() + size);
    sol.u.entries[OrderedPair::from_sequences(sources, targets)] = rng.next_signed_unit();
  }
  return sol;
}

std::vector<VertexSet> nonempty_subsets(int n) {
  std::vector<VertexSet> out;
  for (int k = 1; k <= n; ++k)
    for (std::uint64_t r = 0; r < binomial(n, k); ++r)
      out.push_back(combination_unrank(r, k, n));
  return out;
}

}  // namespace

TEST_CASE("trivial solution reproduces the group function exactly") {
  for (const auto& dims : {std::vector<int>{3}, {2, 2}}) {
    const Lattice lattice = build_lattice(LatticeSpec{dims});
    GroupEvolution ge(lattice, Method::kExactSpectral);
    const DistributionTable& c = ge.at(0.9);
    const PolymerSolution sol = trivial_solution(c);
    for (EvalMode mode : {EvalMode::kLiteral, EvalMode::kReduced}) {
      CHECK(expansion_residual(sol, c, mode) <= 1e-12);
    }
    // All-zero u gives zero everywhere, so the residual is the sup of |C|.
    PolymerSolution zero;
    CHECK(expansion_residual(zero, c) == doctest::Approx(c.values.cwiseAbs().maxCoeff()));
  }
}

TEST_CASE("trivial solution reproduces every marginal exactly") {
  const Lattice square = build_lattice(LatticeSpec{{2, 2}});
  GroupEvolution ge(square, Method::kExactSpectral);
  const DistributionTable& c = ge.at(0.6);
  const PolymerSolution sol = trivial_solution(c);
  for (const VertexSet& s : nonempty_subsets(4)) {
    const MarginalTable exact = marginal_table(c, s);
    CHECK(marginal_expansion_residual(sol, exact, EvalMode::kReduced,
                                      ComplementMode::kWeightOnly) <= 1e-12);
  }
  // Boundary weights of the trivial solution: absent complement carries 1,
  // proper paired subsets derive to zero.
  CHECK(boundary_weight(sol, std::nullopt) == 1.0);
  CHECK(boundary_weight(sol, PairedSubset{{0, 1}, {2, 3}}) == 0.0);
  CHECK(derive_w(sol.u, PairedSubset{{0, 1, 2, 3}, {0, 1, 2, 3}}) ==
        doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("with the full context the marginal expansion is the group expansion") {
  const int n = 3;
  const PolymerSolution sol = random_solution(n, 2024, 14);
  const VertexSet all = full_vertex_set(n);
  for (std::uint64_t r = 0; r < factorial(n); ++r) {
    const OrderedPair o = unrank(r, n);
    const double via_marginal =
        eval_marginal_expansion(sol, n, all, o, EvalMode::kReduced, ComplementMode::kWeightOnly);
    CHECK(via_marginal == doctest::Approx(eval_c_expansion(sol, o)).epsilon(1e-12));
  }
}

TEST_CASE("literal and reduced inner sums agree on random tables") {
  for (int n : {3, 4}) {
    for (std::uint64_t seed = 1; seed <= 50; ++seed) {
      const PolymerSolution sol = random_solution(n, seed * 31 + n, 12);
      for (std::uint64_t r = 0; r < factorial(n); ++r) {
        const OrderedPair o = unrank(r, n);
        const double literal = eval_c_expansion(sol, o, EvalMode::kLiteral);
        const double reduced = eval_c_expansion(sol, o, EvalMode::kReduced);
        CHECK(std::abs(literal - reduced) <= 1e-12);
      }
    }
  }
  // Same agreement for the marginal expansion.
  const int n = 3;
  const PolymerSolution sol = random_solution(n, 777, 16);
  for (const VertexSet& s : nonempty_subsets(n)) {
    const int k = static_cast<int>(s.size());
    for (std::uint64_t a = 0; a < falling_factorial(n, k); ++a) {
      const OrderedPair o = OrderedPair::from_sequences(s, arrangement_unrank(a, k, n));
      for (ComplementMode cm : {ComplementMode::kWeightOnly, ComplementMode::kInProduct}) {
        const double literal = eval_marginal_expansion(sol, n, s, o, EvalMode::kLiteral, cm);
        const double reduced = eval_marginal_expansion(sol, n, s, o, EvalMode::kReduced, cm);
        CHECK(std::abs(literal - reduced) <= 1e-12);
      }
    }
  }
}

// The discriminating identity: summing the group expansion over the full
// states containing a key must reproduce the marginal expansion, for any u
// table, when the complement enters through its boundary weight only. The
// in-product reading breaks the identity.
TEST_CASE("complement handling: weight-only satisfies the marginal identity") {
  const int n = 3;
  for (std::uint64_t seed : {11ull, 12ull, 13ull}) {
    const PolymerSolution sol = random_solution(n, seed, 15);  // w derived via u
    double worst_weight_only = 0.0;
    double worst_in_product = 0.0;
    for (const VertexSet& s : nonempty_subsets(n)) {
      const int k = static_cast<int>(s.size());
      for (std::uint64_t a = 0; a < falling_factorial(n, k); ++a) {
        const OrderedPair o = OrderedPair::from_sequences(s, arrangement_unrank(a, k, n));
        double via_group = 0.0;
        for (std::uint64_t r = 0; r < factorial(n); ++r) {
          const OrderedPair full = unrank(r, n);
          if (restrict_to(full, s) == o) via_group += eval_c_expansion(sol, full);
        }
        const double weight_only = eval_marginal_expansion(sol, n, s, o, EvalMode::kReduced,
                                                           ComplementMode::kWeightOnly);
        const double in_product = eval_marginal_expansion(sol, n, s, o, EvalMode::kReduced,
                                                          ComplementMode::kInProduct);
        worst_weight_only = std::max(worst_weight_only, std::abs(weight_only - via_group));
        worst_in_product = std::max(worst_in_product, std::abs(in_product - via_group));
      }
    }
    CHECK(worst_weight_only <= 1e-10);
    CHECK(worst_in_product > 1e-3);  // the other reading is measurably different
  }
}

TEST_CASE("rank-1 weights at time zero are the identity matching") {
  const Lattice square = build_lattice(LatticeSpec{{2, 2}});
  const PolymerSolution sol = rank1_solution(heat_kernel(square, 0.0), 1.0);
  for (VertexId i = 0; i < 4; ++i) {
    for (VertexId j = 0; j < 4; ++j) {
      CHECK(sol.u.value(OrderedPair::from_sequences({i}, {j})) == (i == j ? 1.0 : 0.0));
    }
  }
  CHECK(eval_c_expansion(sol, identity_pair(4)) == 1.0);
  // Boundary weight pinned to 1 on singleton complements.
  CHECK(boundary_weight(sol, PairedSubset{{0, 1, 2}, {0, 2, 3}}) == 1.0);
}

TEST_CASE("rank-1 expansion on the two-site lattice: matching products and residual") {
  const Lattice chain = build_lattice(LatticeSpec{{2}});
  const HeatKernel g = heat_kernel(chain, 0.5);
  const PolymerSolution sol = rank1_solution(g, 1.0);

  // Only the partition matching the target survives the containment
  // constraint, so each state evaluates to its own diagonal product.
  CHECK(eval_c_expansion(sol, identity_pair(2)) ==
        doctest::Approx(g.g(0, 0) * g.g(1, 1)).epsilon(1e-14));
  CHECK(eval_c_expansion(sol, unrank(1, 2)) ==
        doctest::Approx(g.g(0, 1) * g.g(1, 0)).epsilon(1e-14));

  // Against the exact evolution the defect is order one; reported, no gate.
  GroupEvolution ge(chain, Method::kExactSpectral);
  const double residual = expansion_residual(sol, ge.at(0.5));
  const double expected = std::abs(g.g(0, 0) * g.g(1, 1) - 0.5 * (1.0 + std::exp(-1.0)));
  CHECK(residual == doctest::Approx(expected).epsilon(1e-10));
  MESSAGE("rank-1 residual on the two-site lattice at t=0.5: ", residual);

  // Singleton boundary weights derive back to the u entries themselves.
  CHECK(derive_w(sol.u, PairedSubset{{0}, {1}}) == doctest::Approx(g.g(0, 1)).epsilon(1e-14));
}

TEST_CASE("sum condition: trivial carries the mass, rank-1 vanishes, size guard") {
  const Lattice square = build_lattice(LatticeSpec{{2, 2}});
  GroupEvolution ge(square, Method::kExactSpectral);
  const PolymerSolution trivial = trivial_solution(ge.at(1.0));
  const VertexSet all = full_vertex_set(4);
  CHECK(check_sum_condition(trivial.u, PairedSubset{all, all}) ==
        doctest::Approx(1.0).epsilon(1e-12));

  const PolymerSolution rank1 = rank1_solution(heat_kernel(square, 1.0), 1.3);
  CHECK(check_sum_condition(rank1.u, PairedSubset{{0, 1}, {2, 3}}) == 0.0);

  PolymerSolution zero;
  CHECK(check_sum_condition(zero.u, PairedSubset{{0, 1}, {0, 1}}) == 0.0);
  CHECK_THROWS_AS(check_sum_condition(zero.u, PairedSubset{{0}, {1}}), std::invalid_argument);
}

TEST_CASE("permanent: frozen values and the cross-route check") {
  CHECK(permanent(Eigen::MatrixXd::Identity(4, 4)) == 1.0);
  CHECK(permanent(Eigen::MatrixXd::Ones(2, 2)) == 2.0);
  CHECK(std::abs(permanent(Eigen::MatrixXd::Constant(3, 3, 1.0 / 3.0)) - 2.0 / 9.0) <= 1e-15);
  CHECK(permanent(Eigen::MatrixXd(0, 0)) == 1.0);
  CHECK_THROWS_AS(permanent(Eigen::MatrixXd::Ones(21, 21)), CapExceeded);
  CHECK_THROWS_AS(permanent(Eigen::MatrixXd::Ones(2, 3)), std::invalid_argument);

  SeededRng rng(4242);
  for (int trial = 0; trial < 60; ++trial) {
    const int n = 2 + static_cast<int>(rng.next_below(5));
    Eigen::MatrixXd m(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) m(i, j) = rng.next_signed_unit();
    const double expected = testing::permanent_by_enumeration(m);
    const double scale = std::max(1.0, std::abs(expected));
    CHECK(std::abs(permanent(m) - expected) / scale <= 1e-12);
    CHECK(std::abs(permanent_reference(m) - expected) / scale <= 1e-12);
  }
}

TEST_CASE("solve-c: identity at t=0, uniform limits, reported monotonicity") {
  const Lattice square = build_lattice(LatticeSpec{{2, 2}});
  CHECK(solve_c(heat_kernel(square, 0.0)) == 1.0);

  const Lattice chain = build_lattice(LatticeSpec{{2}});
  CHECK(solve_c(heat_kernel(chain, 50.0)) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-9));

  // Long-time values against the uniform-kernel formula.
  for (const auto& dims : {std::vector<int>{2}, {2, 2}, {2, 3}, {2, 4}}) {
    const Lattice lattice = build_lattice(LatticeSpec{dims});
    CHECK(std::abs(solve_c(heat_kernel(lattice, 50.0)) - c_asymptotic(lattice.n)) <= 1e-6);
  }

  // Observed (not proved) monotonicity on a fine grid.
  double prev = 0.0;
  for (double t = 0.0; t <= 50.0 + 1e-9; t += 0.25) {
    const double c = solve_c(heat_kernel(square, t));
    CHECK(c >= prev - 1e-9);
    prev = c;
  }
}

TEST_CASE("c-asymptotic: frozen values and approach to e") {
  CHECK(c_asymptotic(1) == 1.0);
  // Frozen from exact rational arithmetic: (4!/4^4)^(-1/4), (8!/8^8)^(-1/8).
  CHECK(c_asymptotic(4) == doctest::Approx(1.8072040072196898).epsilon(1e-12));
  CHECK(c_asymptotic(8) == doctest::Approx(2.1252005594420327).epsilon(1e-12));
  double prev = 0.0;
  for (int n = 1; n <= 60; ++n) {
    const double c = c_asymptotic(n);
    CHECK(c > prev);
    CHECK(c < std::exp(1.0));
    prev = c;
  }
}

TEST_CASE("monte-carlo permanent: determinism, coverage, degenerate start") {
  const Lattice square = build_lattice(LatticeSpec{{2, 2}});
  const HeatKernel g = heat_kernel(square, 1.0);

  const McPermanentEstimate a = mc_estimate_permanent(g, 20000, 31337);
  const McPermanentEstimate b = mc_estimate_permanent(g, 20000, 31337);
  CHECK(a.estimate == b.estimate);
  CHECK(a.std_error == b.std_error);

  // Coverage over 100 seeds: at most one 4-sigma miss expected.
  const Lattice rect = build_lattice(LatticeSpec{{2, 3}});
  const HeatKernel g6 = heat_kernel(rect, 1.0);
  const double exact = permanent(g6.g);
  int misses = 0;
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    const McPermanentEstimate est = mc_estimate_permanent(g6, 20000, seed);
    if (std::abs(est.estimate - exact) > 4.0 * est.std_error) ++misses;
  }
  CHECK(misses <= 1);

  // Identity start: the sampler almost always draws zero products, and the
  // standard error matches the Bernoulli closed form.
  const HeatKernel g0 = heat_kernel(square, 0.0);
  const McPermanentEstimate est0 = mc_estimate_permanent(g0, 100000, 2718);
  const double p = 1.0 / 24.0;
  const double analytic = 24.0 * std::sqrt(p * (1.0 - p) / 100000.0);
  CHECK(est0.std_error == doctest::Approx(analytic).epsilon(0.15));
  CHECK(std::abs(est0.estimate - 1.0) <= 5.0 * est0.std_error);

  CHECK_THROWS_AS(mc_estimate_permanent(g, 0, 1), std::invalid_argument);
}

TEST_CASE("solution files round-trip through the sorted line format") {
  const Lattice chain = build_lattice(LatticeSpec{{2}});
  PolymerSolution sol = rank1_solution(heat_kernel(chain, 0.5), 1.25);
  sol.w.entries[PairedSubset{{0, 1}, {0, 1}}] = -0.5;

  std::ostringstream out;
  write_solution(sol, out);
  const std::string text = out.str();
  CHECK(text.find("u: 0>0 = ") != std::string::npos);
  CHECK(text.find("w: {0,1}>{0,1} = -0.5") != std::string::npos);

  std::istringstream in(text);
  const PolymerSolution back = read_solution(in);
  CHECK(back.u.entries == sol.u.entries);
  CHECK(back.w.entries == sol.w.entries);

  // Lines come out sorted.
  std::string prev;
  std::string line;
  std::istringstream again(text);
  while (std::getline(again, line)) {
    CHECK(prev <= line);
    prev = line;
  }

  std::istringstream bad("q: 0>0 = 1\n");
  CHECK_THROWS_AS(read_solution(bad), std::invalid_argument);
}

TEST_CASE("stored boundary weights take precedence over derivation") {
  PolymerSolution sol;
  sol.u.entries[OrderedPair::from_string("0>1")] = 0.75;
  const PairedSubset vs{{0}, {1}};
  CHECK(boundary_weight(sol, vs) == 0.75);  // derived from u
  sol.w.entries[vs] = 2.5;
  CHECK(boundary_weight(sol, vs) == 2.5);  // stored value wins
}
