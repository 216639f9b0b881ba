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

#include "permflow/polymer.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>

#include "permflow/indexing.hpp"
#include "permflow/numerics.hpp"

namespace permflow {

namespace {

// Literal transcription of the marginal constraint: sum of u over the
// orderings of a block whose restriction to the context set is a
// subsequence of the target.
double literal_block_sum(const UTable& u, const PairedSubset& block, const VertexSet& s,
                         const OrderedPair& o) {
  double acc = 0.0;
  for (const OrderedPair& ok : orderings_of(block)) {
    if (is_subsequence(restrict_to(ok, s), o)) acc += u.value(ok);
  }
  return acc;
}

// Same sum built from the other end: the constraint pins the targets of the
// covered sources to `forced`, so only the completions over the remaining
// sources are enumerated.
double reduced_block_sum(const UTable& u, const PairedSubset& block, const OrderedPair& forced) {
  for (const auto& [src, dst] : forced.pairs) {
    if (!set_contains(block.s2, dst)) return 0.0;
  }
  const VertexSet forced_sources = forced.sources();
  const VertexSet free_sources = set_difference(block.s1, forced_sources);
  if (free_sources.empty()) return u.value(forced);
  const VertexSet free_targets = set_difference(block.s2, forced.target_set());

  double acc = 0.0;
  std::vector<VertexId> assignment = free_targets;
  do {
    OrderedPair ok;
    std::size_t fi = 0, vi = 0;
    while (fi < forced.pairs.size() || vi < free_sources.size()) {
      if (fi < forced.pairs.size() &&
          (vi >= free_sources.size() || forced.pairs[fi].first < free_sources[vi])) {
        ok.pairs.push_back(forced.pairs[fi++]);
      } else {
        ok.pairs.emplace_back(free_sources[vi], assignment[vi]);
        ++vi;
      }
    }
    acc += u.value(ok);
  } while (std::next_permutation(assignment.begin(), assignment.end()));
  return acc;
}

// Unconstrained sum of u over all orderings of a block.
double free_block_sum(const UTable& u, const PairedSubset& block) {
  double acc = 0.0;
  for (const OrderedPair& ok : orderings_of(block)) acc += u.value(ok);
  return acc;
}

}  // namespace

double boundary_weight(const PolymerSolution& sol, const std::optional<PairedSubset>& block,
                       const Caps& caps) {
  if (!block) return 1.0;
  const auto it = sol.w.entries.find(*block);
  if (it != sol.w.entries.end()) return it->second;
  return derive_w(sol.u, *block, caps);
}

double eval_c_expansion(const PolymerSolution& sol, const OrderedPair& o_full, EvalMode mode,
                        const Caps& caps) {
  const int n = o_full.size();
  if (n == 0 || !o_full.is_full(n))
    throw std::invalid_argument("c expansion: target must be a full ordered pair");
  const VertexSet all = full_vertex_set(n);
  double total = 0.0;
  for_each_paired_partition(
      PairedSubset{all, all},
      [&](const PairedPartition& p) {
        double product = 1.0;
        for (const PairedSubset& block : p.blocks) {
          double factor;
          if (mode == EvalMode::kLiteral) {
            factor = 0.0;
            for (const OrderedPair& ok : orderings_of(block)) {
              if (is_subsequence(ok, o_full)) factor += sol.u.value(ok);
            }
          } else {
            // A full state contains exactly one candidate per source set:
            // its restriction. It must map the block onto the block.
            const OrderedPair ok = restrict_to(o_full, block.s1);
            factor = (ok.target_set() == block.s2) ? sol.u.value(ok) : 0.0;
          }
          product *= factor;
          if (product == 0.0) break;
        }
        total += product;
      },
      caps);
  return total;
}

double eval_marginal_expansion(const PolymerSolution& sol, int n_vertices, const VertexSet& s,
                               const OrderedPair& o, EvalMode mode,
                               ComplementMode complement_mode, const Caps& caps) {
  if (o.empty() || o.sources() != s)
    throw std::invalid_argument("marginal expansion: target must map the context set");
  double total = 0.0;
  for (const SCoveringPartition& sc : s_covering_partitions(n_vertices, s, caps)) {
    double product = 1.0;
    for (const PairedSubset& block : sc.covering_blocks) {
      if (mode == EvalMode::kLiteral) {
        product *= literal_block_sum(sol.u, block, s, o);
      } else {
        const VertexSet covered = set_intersection(block.s1, s);
        product *= reduced_block_sum(sol.u, block, restrict_to(o, covered));
      }
      if (product == 0.0) break;
    }
    if (product != 0.0 && sc.complement_block && complement_mode == ComplementMode::kInProduct) {
      // The complement's restriction to S is empty, so its constraint is
      // vacuous: an unconstrained u sum enters the product.
      product *= free_block_sum(sol.u, *sc.complement_block);
    }
    if (product == 0.0) continue;
    total += product * boundary_weight(sol, sc.complement_block, caps);
  }
  return total;
}

double derive_w(const UTable& u, const PairedSubset& vs, const Caps& caps) {
  if (!vs.well_formed()) throw std::invalid_argument("derive_w: malformed paired subset");
  double total = 0.0;
  for_each_paired_partition(
      vs,
      [&](const PairedPartition& p) {
        double product = 1.0;
        for (const PairedSubset& block : p.blocks) {
          product *= free_block_sum(u, block);
          if (product == 0.0) break;
        }
        total += product;
      },
      caps);
  return total;
}

PolymerSolution trivial_solution(const DistributionTable& c) {
  PolymerSolution sol;
  sol.label = "trivial";
  sol.u.t = c.t;
  for (std::int64_t r = 0; r < c.states(); ++r) {
    sol.u.entries[unrank(static_cast<std::uint64_t>(r), c.n_vertices)] =
        c.values(static_cast<Eigen::Index>(r));
  }
  // No stored w: derived weights vanish on proper subsets and the absent
  // complement carries 1, which is exactly the trivial convention.
  return sol;
}

PolymerSolution rank1_solution(const HeatKernel& g, double c) {
  const int n = static_cast<int>(g.g.rows());
  PolymerSolution sol;
  sol.label = "rank1";
  sol.u.t = g.t;
  for (VertexId i = 0; i < n; ++i) {
    for (VertexId j = 0; j < n; ++j) {
      sol.u.entries[OrderedPair::from_sequences({i}, {j})] = c * g.g(i, j);
    }
  }
  // Boundary weight pinned to one on every complement of a singleton.
  const VertexSet all = full_vertex_set(n);
  if (n >= 2) {
    for (VertexId i = 0; i < n; ++i) {
      for (VertexId j = 0; j < n; ++j) {
        sol.w.entries[PairedSubset{set_difference(all, {i}), set_difference(all, {j})}] = 1.0;
      }
    }
  }
  return sol;
}

double permanent_reference(const Eigen::MatrixXd& m, int cap) {
  const int n = static_cast<int>(m.rows());
  if (n != m.cols()) throw std::invalid_argument("permanent: matrix must be square");
  if (n > cap)
    throw CapExceeded("permanent_reference: order exceeds the cap of " + std::to_string(cap));
  if (n == 0) return 1.0;
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

double solve_c(const HeatKernel& g) {
  const int n = static_cast<int>(g.g.rows());
  const double p = permanent(g.g);
  if (!(p > 0.0)) throw std::invalid_argument("solve_c: kernel permanent is not positive");
  return std::pow(p, -1.0 / n);
}

double c_asymptotic(int n) {
  if (n < 1) throw std::invalid_argument("c_asymptotic: need n >= 1");
  // (n!/n^n)^(-1/n) through logarithms; exact 1 at n = 1.
  const double log_ratio = std::lgamma(static_cast<double>(n) + 1.0) -
                           static_cast<double>(n) * std::log(static_cast<double>(n));
  return std::exp(-log_ratio / n);
}

McPermanentEstimate mc_estimate_permanent(const HeatKernel& g, std::int64_t samples,
                                          std::uint64_t seed) {
  const int n = static_cast<int>(g.g.rows());
  if (samples < 1) throw std::invalid_argument("mc permanent: need at least one sample");
  SeededRng rng(seed);
  std::vector<VertexId> perm(static_cast<std::size_t>(n));
  std::iota(perm.begin(), perm.end(), 0);

  double sum = 0.0;
  double sum_sq = 0.0;
  for (std::int64_t k = 0; k < samples; ++k) {
    rng.shuffle(perm);
    double prod = 1.0;
    for (int i = 0; i < n; ++i) prod *= g.g(i, perm[static_cast<std::size_t>(i)]);
    sum += prod;
    sum_sq += prod * prod;
  }
  const double scale = static_cast<double>(factorial(n));
  const double mean = sum / static_cast<double>(samples);
  const double variance =
      samples > 1 ? std::max(0.0, (sum_sq - static_cast<double>(samples) * mean * mean) /
                                      static_cast<double>(samples - 1))
                  : 0.0;
  McPermanentEstimate est;
  est.estimate = scale * mean;
  est.std_error = scale * std::sqrt(variance / static_cast<double>(samples));
  est.samples = samples;
  return est;
}

double check_sum_condition(const UTable& u, const PairedSubset& vs) {
  if (vs.size() <= 1)
    throw std::invalid_argument(
        "sum condition: applies only to paired subsets of cardinality > 1");
  return free_block_sum(u, vs);
}

double expansion_residual(const PolymerSolution& sol, const DistributionTable& c_exact,
                          EvalMode mode, const Caps& caps) {
  double worst = 0.0;
  for (std::int64_t r = 0; r < c_exact.states(); ++r) {
    const OrderedPair o = unrank(static_cast<std::uint64_t>(r), c_exact.n_vertices);
    worst = std::max(worst, std::abs(eval_c_expansion(sol, o, mode, caps) -
                                     c_exact.values(static_cast<Eigen::Index>(r))));
  }
  return worst;
}

double marginal_expansion_residual(const PolymerSolution& sol, const MarginalTable& exact,
                                   EvalMode mode, ComplementMode complement_mode,
                                   const Caps& caps) {
  double worst = 0.0;
  for (Eigen::Index idx = 0; idx < exact.values.size(); ++idx) {
    const double value = eval_marginal_expansion(sol, exact.n_vertices, exact.subset,
                                                 exact.key(idx), mode, complement_mode, caps);
    worst = std::max(worst, std::abs(value - exact.values(idx)));
  }
  return worst;
}

void write_solution(const PolymerSolution& sol, std::ostream& out) {
  std::vector<std::string> lines;
  lines.reserve(sol.u.entries.size() + sol.w.entries.size());
  for (const auto& [key, value] : sol.u.entries)
    lines.push_back("u: " + key.to_string() + " = " + format_g17(value));
  for (const auto& [key, value] : sol.w.entries)
    lines.push_back("w: " + key.to_string() + " = " + format_g17(value));
  std::sort(lines.begin(), lines.end());
  for (const std::string& line : lines) out << line << '\n';
}

PolymerSolution read_solution(std::istream& in) {
  PolymerSolution sol;
  sol.label = "file";
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto first = line.find_first_not_of(" \t");
    if (first == std::string::npos || line[first] == '#') continue;
    const std::size_t colon = line.find(':');
    const std::size_t eq = line.rfind('=');
    if (colon == std::string::npos || eq == std::string::npos || eq < colon)
      throw std::invalid_argument("solution line " + std::to_string(lineno) +
                                  ": expected 'u: <key> = <value>' or 'w: <key> = <value>'");
    const std::string kind = line.substr(first, colon - first);
    std::string key = line.substr(colon + 1, eq - colon - 1);
    key.erase(0, key.find_first_not_of(" \t"));
    key.erase(key.find_last_not_of(" \t") + 1);
    const double value = std::stod(line.substr(eq + 1));
    if (kind == "u") {
      sol.u.entries[OrderedPair::from_string(key)] = value;
    } else if (kind == "w") {
      sol.w.entries[PairedSubset::from_string(key)] = value;
    } else {
      throw std::invalid_argument("solution line " + std::to_string(lineno) +
                                  ": unknown entry kind '" + kind + "'");
    }
  }
  return sol;
}

}  // namespace permflow
