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

#include "permflow/common.hpp"

#include <numeric>
#include <sstream>

namespace permflow {

std::string to_string(Method m) {
  switch (m) {
    case Method::kExactSpectral:
      return "exact-spectral";
    case Method::kOde:
      return "ode";
  }
  return "unknown";
}

Method method_from_string(const std::string& name) {
  if (name == "exact-spectral") return Method::kExactSpectral;
  if (name == "ode") return Method::kOde;
  throw std::invalid_argument("unknown method '" + name +
                              "' (expected exact-spectral or ode)");
}

VertexSet set_union(const VertexSet& a, const VertexSet& b) {
  VertexSet out;
  out.reserve(a.size() + b.size());
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

VertexSet set_intersection(const VertexSet& a, const VertexSet& b) {
  VertexSet out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(),
                        std::back_inserter(out));
  return out;
}

VertexSet set_difference(const VertexSet& a, const VertexSet& b) {
  VertexSet out;
  std::set_difference(a.begin(), a.end(), b.begin(), b.end(),
                      std::back_inserter(out));
  return out;
}

VertexSet complement(const VertexSet& s, int n_vertices) {
  return set_difference(full_vertex_set(n_vertices), s);
}

VertexSet full_vertex_set(int n_vertices) {
  VertexSet all(static_cast<std::size_t>(n_vertices));
  std::iota(all.begin(), all.end(), 0);
  return all;
}

std::string vertex_set_to_string(const VertexSet& s) {
  std::ostringstream out;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (i > 0) out << ',';
    out << s[i];
  }
  return out.str();
}

VertexSet vertex_set_from_string(const std::string& text) {
  VertexSet out;
  std::istringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    if (item.empty()) throw std::invalid_argument("empty element in vertex set '" + text + "'");
    std::size_t pos = 0;
    int v = std::stoi(item, &pos);
    if (pos != item.size()) throw std::invalid_argument("bad vertex '" + item + "'");
    out.push_back(v);
  }
  std::sort(out.begin(), out.end());
  if (!is_sorted_unique(out))
    throw std::invalid_argument("duplicate vertex in set '" + text + "'");
  return out;
}

}  // namespace permflow
