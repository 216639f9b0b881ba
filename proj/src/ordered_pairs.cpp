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

#include "permflow/ordered_pairs.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "permflow/indexing.hpp"

namespace permflow {

VertexSet OrderedPair::sources() const {
  VertexSet out;
  out.reserve(pairs.size());
  for (const auto& [src, dst] : pairs) out.push_back(src);
  return out;
}

std::vector<VertexId> OrderedPair::targets() const {
  std::vector<VertexId> out;
  out.reserve(pairs.size());
  for (const auto& [src, dst] : pairs) out.push_back(dst);
  return out;
}

VertexSet OrderedPair::target_set() const {
  VertexSet out = targets();
  std::sort(out.begin(), out.end());
  return out;
}

bool OrderedPair::well_formed() const {
  for (std::size_t i = 1; i < pairs.size(); ++i)
    if (pairs[i - 1].first >= pairs[i].first) return false;
  VertexSet dsts = target_set();
  return is_sorted_unique(dsts);
}

bool OrderedPair::is_full(int n_vertices) const {
  if (size() != n_vertices) return false;
  for (int i = 0; i < n_vertices; ++i)
    if (pairs[static_cast<std::size_t>(i)].first != i) return false;
  return well_formed();
}

std::string OrderedPair::to_string() const {
  std::ostringstream out;
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    if (i > 0) out << ',';
    out << pairs[i].first << '>' << pairs[i].second;
  }
  return out.str();
}

OrderedPair OrderedPair::from_string(const std::string& text) {
  OrderedPair o;
  if (text.empty()) return o;
  std::istringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    const std::size_t sep = item.find('>');
    if (sep == std::string::npos)
      throw std::invalid_argument("ordered pair: expected src>dst in '" + item + "'");
    o.pairs.emplace_back(std::stoi(item.substr(0, sep)), std::stoi(item.substr(sep + 1)));
  }
  if (!o.well_formed())
    throw std::invalid_argument("ordered pair: sources must ascend and targets be distinct in '" +
                                text + "'");
  return o;
}

OrderedPair OrderedPair::from_sequences(const std::vector<VertexId>& sources,
                                        const std::vector<VertexId>& targets) {
  if (sources.size() != targets.size())
    throw std::invalid_argument("ordered pair: source/target length mismatch");
  OrderedPair o;
  o.pairs.reserve(sources.size());
  for (std::size_t i = 0; i < sources.size(); ++i)
    o.pairs.emplace_back(sources[i], targets[i]);
  if (!o.well_formed())
    throw std::invalid_argument("ordered pair: sources must ascend and targets be distinct");
  return o;
}

bool PairedSubset::well_formed() const {
  return !s1.empty() && s1.size() == s2.size() && is_sorted_unique(s1) && is_sorted_unique(s2);
}

std::string PairedSubset::to_string() const {
  return "{" + vertex_set_to_string(s1) + "}>{" + vertex_set_to_string(s2) + "}";
}

PairedSubset PairedSubset::from_string(const std::string& text) {
  const std::size_t open1 = text.find('{');
  const std::size_t close1 = text.find('}');
  const std::size_t open2 = text.find('{', close1 == std::string::npos ? 0 : close1);
  const std::size_t close2 = text.rfind('}');
  if (open1 == std::string::npos || close1 == std::string::npos ||
      open2 == std::string::npos || close2 == std::string::npos || close2 <= open2)
    throw std::invalid_argument("paired subset: expected {..}>{..} in '" + text + "'");
  PairedSubset vs;
  vs.s1 = vertex_set_from_string(text.substr(open1 + 1, close1 - open1 - 1));
  vs.s2 = vertex_set_from_string(text.substr(open2 + 1, close2 - open2 - 1));
  if (!vs.well_formed())
    throw std::invalid_argument("paired subset: components must be nonempty, equal size");
  return vs;
}

std::vector<VertexId> as_permutation(const OrderedPair& o, int n_vertices) {
  if (!o.is_full(n_vertices))
    throw std::invalid_argument("as_permutation: ordered pair is not full");
  return o.targets();
}

std::uint64_t rank(const OrderedPair& o) {
  const int n = o.size();
  if (!o.is_full(n) || n == 0)
    throw std::invalid_argument("rank: ordered pair is not full");
  const std::vector<VertexId> perm = o.targets();
  return permutation_rank(perm);
}

OrderedPair unrank(std::uint64_t r, int n_vertices) {
  return OrderedPair::from_sequences(full_vertex_set(n_vertices),
                                     permutation_unrank(r, n_vertices));
}

OrderedPair identity_pair(int n_vertices) {
  const VertexSet all = full_vertex_set(n_vertices);
  return OrderedPair::from_sequences(all, all);
}

OrderedPair inverse(const OrderedPair& o) {
  const int n = o.size();
  if (!o.is_full(n) || n == 0) throw std::invalid_argument("inverse: ordered pair is not full");
  std::vector<VertexId> inv(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i)
    inv[static_cast<std::size_t>(o.pairs[static_cast<std::size_t>(i)].second)] = i;
  return OrderedPair::from_sequences(full_vertex_set(n), inv);
}

bool is_subsequence(const OrderedPair& o, const OrderedPair& s) {
  std::size_t i = 0;
  for (const auto& pair : s.pairs) {
    if (i < o.pairs.size() && pair == o.pairs[i]) ++i;
  }
  return i == o.pairs.size();
}

OrderedPair restrict_to(const OrderedPair& o, const VertexSet& s) {
  OrderedPair out;
  for (const auto& pair : o.pairs)
    if (set_contains(s, pair.first)) out.pairs.push_back(pair);
  return out;
}

std::vector<OrderedPair> neighbors_full(const OrderedPair& o, const Lattice& lattice) {
  const int n = o.size();
  if (!o.is_full(lattice.n) || n != lattice.n)
    throw std::invalid_argument("neighbors_full: ordered pair is not full on this lattice");
  std::vector<int> position(static_cast<std::size_t>(lattice.n));
  for (int i = 0; i < n; ++i)
    position[static_cast<std::size_t>(o.pairs[static_cast<std::size_t>(i)].second)] = i;

  std::vector<OrderedPair> out;
  out.reserve(lattice.edges.size());
  for (const auto& [a, b] : lattice.edges) {
    OrderedPair nbr = o;
    std::swap(nbr.pairs[static_cast<std::size_t>(position[static_cast<std::size_t>(a)])].second,
              nbr.pairs[static_cast<std::size_t>(position[static_cast<std::size_t>(b)])].second);
    out.push_back(std::move(nbr));
  }
  return out;
}

std::vector<OrderedPair> neighbors_partial(const OrderedPair& o, const Lattice& lattice) {
  if (!o.well_formed()) throw std::invalid_argument("neighbors_partial: malformed ordered pair");
  std::vector<int> position(static_cast<std::size_t>(lattice.n), -1);
  for (int i = 0; i < o.size(); ++i) {
    const VertexId dst = o.pairs[static_cast<std::size_t>(i)].second;
    if (dst < 0 || dst >= lattice.n)
      throw std::invalid_argument("neighbors_partial: target outside the lattice");
    position[static_cast<std::size_t>(dst)] = i;
  }

  std::vector<OrderedPair> out;
  // Swaps along edges whose endpoints are both occupied.
  for (const auto& [a, b] : lattice.edges) {
    const int pa = position[static_cast<std::size_t>(a)];
    const int pb = position[static_cast<std::size_t>(b)];
    if (pa < 0 || pb < 0) continue;
    OrderedPair nbr = o;
    std::swap(nbr.pairs[static_cast<std::size_t>(pa)].second,
              nbr.pairs[static_cast<std::size_t>(pb)].second);
    out.push_back(std::move(nbr));
  }
  // Hops of one occupied target to a vacant lattice neighbor.
  for (int i = 0; i < o.size(); ++i) {
    const VertexId v = o.pairs[static_cast<std::size_t>(i)].second;
    for (const VertexId w : neighbors(lattice, v)) {
      if (position[static_cast<std::size_t>(w)] >= 0) continue;
      OrderedPair nbr = o;
      nbr.pairs[static_cast<std::size_t>(i)].second = w;
      out.push_back(std::move(nbr));
    }
  }
  return out;
}

std::vector<OrderedPair> orderings_of(const PairedSubset& vs) {
  if (!vs.well_formed()) throw std::invalid_argument("orderings_of: malformed paired subset");
  std::vector<OrderedPair> out;
  out.reserve(factorial(vs.size()));
  std::vector<VertexId> targets = vs.s2;  // sorted start = lexicographic first
  do {
    out.push_back(OrderedPair::from_sequences(vs.s1, targets));
  } while (std::next_permutation(targets.begin(), targets.end()));
  return out;
}

}  // namespace permflow
