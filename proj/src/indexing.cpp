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

#include "permflow/indexing.hpp"

#include <stdexcept>

namespace permflow {

std::uint64_t factorial(int n) {
  if (n < 0 || n > 20) throw std::invalid_argument("factorial: n out of [0, 20]");
  std::uint64_t f = 1;
  for (int i = 2; i <= n; ++i) f *= static_cast<std::uint64_t>(i);
  return f;
}

std::uint64_t falling_factorial(int n, int k) {
  if (k < 0 || k > n) throw std::invalid_argument("falling_factorial: need 0 <= k <= n");
  std::uint64_t f = 1;
  for (int i = 0; i < k; ++i) f *= static_cast<std::uint64_t>(n - i);
  return f;
}

std::uint64_t binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  k = std::min(k, n - k);
  std::uint64_t c = 1;
  for (int i = 0; i < k; ++i) {
    c = c * static_cast<std::uint64_t>(n - i) / static_cast<std::uint64_t>(i + 1);
  }
  return c;
}

std::uint64_t permutation_rank(std::span<const VertexId> perm) {
  return arrangement_rank(perm, static_cast<int>(perm.size()));
}

std::vector<VertexId> permutation_unrank(std::uint64_t r, int n) {
  return arrangement_unrank(r, n, n);
}

std::uint64_t arrangement_rank(std::span<const VertexId> arr, int n) {
  const int k = static_cast<int>(arr.size());
  if (k > n) throw std::invalid_argument("arrangement_rank: sequence longer than ground set");
  std::vector<bool> used(static_cast<std::size_t>(n), false);
  std::uint64_t r = 0;
  for (int i = 0; i < k; ++i) {
    const VertexId v = arr[static_cast<std::size_t>(i)];
    if (v < 0 || v >= n || used[static_cast<std::size_t>(v)])
      throw std::invalid_argument("arrangement_rank: values must be distinct in [0, n)");
    int smaller_free = 0;
    for (VertexId w = 0; w < v; ++w)
      if (!used[static_cast<std::size_t>(w)]) ++smaller_free;
    r += static_cast<std::uint64_t>(smaller_free) * falling_factorial(n - i - 1, k - i - 1);
    used[static_cast<std::size_t>(v)] = true;
  }
  return r;
}

std::vector<VertexId> arrangement_unrank(std::uint64_t r, int k, int n) {
  if (k < 0 || k > n) throw std::invalid_argument("arrangement_unrank: need 0 <= k <= n");
  if (r >= falling_factorial(n, k))
    throw std::invalid_argument("arrangement_unrank: rank out of range");
  std::vector<bool> used(static_cast<std::size_t>(n), false);
  std::vector<VertexId> out(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i) {
    const std::uint64_t block = falling_factorial(n - i - 1, k - i - 1);
    int skip = static_cast<int>(r / block);
    r %= block;
    for (VertexId v = 0; v < n; ++v) {
      if (used[static_cast<std::size_t>(v)]) continue;
      if (skip == 0) {
        out[static_cast<std::size_t>(i)] = v;
        used[static_cast<std::size_t>(v)] = true;
        break;
      }
      --skip;
    }
  }
  return out;
}

std::uint64_t combination_rank(std::span<const VertexId> subset, int n) {
  const int k = static_cast<int>(subset.size());
  std::uint64_t r = 0;
  VertexId prev = -1;
  for (int i = 0; i < k; ++i) {
    const VertexId v = subset[static_cast<std::size_t>(i)];
    if (v <= prev || v >= n)
      throw std::invalid_argument("combination_rank: subset must be sorted, distinct, in [0, n)");
    for (VertexId w = prev + 1; w < v; ++w)
      r += binomial(n - 1 - w, k - 1 - i);
    prev = v;
  }
  return r;
}

std::vector<VertexId> combination_unrank(std::uint64_t r, int k, int n) {
  if (k < 0 || k > n) throw std::invalid_argument("combination_unrank: need 0 <= k <= n");
  if (r >= binomial(n, k))
    throw std::invalid_argument("combination_unrank: rank out of range");
  std::vector<VertexId> out(static_cast<std::size_t>(k));
  VertexId v = 0;
  for (int i = 0; i < k; ++i) {
    for (;; ++v) {
      const std::uint64_t below = binomial(n - 1 - v, k - 1 - i);
      if (r < below) break;
      r -= below;
    }
    out[static_cast<std::size_t>(i)] = v++;
  }
  return out;
}

}  // namespace permflow
