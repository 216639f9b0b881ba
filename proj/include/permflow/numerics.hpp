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

#ifndef PERMFLOW_NUMERICS_HPP_
#define PERMFLOW_NUMERICS_HPP_

#include <Eigen/Dense>
#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

namespace permflow {

// exp(t*L) for a symmetric generator L, through its eigendecomposition.
Eigen::MatrixXd expm_symmetric(const Eigen::MatrixXd& generator, double t);

// exp(t*L)*v0 without forming the full exponential.
Eigen::VectorXd expm_symmetric_apply(const Eigen::MatrixXd& generator, double t,
                                     const Eigen::VectorXd& v0);

// Fixed step size for the classical 4th-order scheme: small enough that the
// global error sits well below every acceptance tolerance, and comfortably
// inside the stability region for generators with row degree <= max_degree.
inline double ode_step_size(int max_degree) {
  return std::min(0.01, 0.1 / std::max(1, max_degree));
}

// Integrates v' = apply(v) from 0 to t with equal steps of size <= max_step.
// State may be a vector or a matrix.
template <typename State, typename ApplyFn>
State rk4_flow(State v, double t, double max_step, ApplyFn&& apply) {
  if (t <= 0.0) return v;
  const int steps = static_cast<int>(std::ceil(t / max_step));
  const double h = t / steps;
  for (int i = 0; i < steps; ++i) {
    State k1 = apply(v);
    State k2 = apply(v + (0.5 * h) * k1);
    State k3 = apply(v + (0.5 * h) * k2);
    State k4 = apply(v + h * k3);
    v += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }
  return v;
}

// mt19937_64 engine with hand-rolled draws, so that sampled experiments are
// byte-reproducible for a fixed seed independently of the standard library's
// distribution implementations.
class SeededRng {
 public:
  explicit SeededRng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  // Uniform in [0, n) by rejection.
  std::uint64_t next_below(std::uint64_t n) {
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t x;
    do {
      x = engine_();
    } while (x >= limit);
    return x % n;
  }

  // Uniform in [0, 1) with 53 random bits.
  double next_unit() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  // Uniform in [-1, 1).
  double next_signed_unit() { return 2.0 * next_unit() - 1.0; }

  template <typename T>
  void shuffle(std::vector<T>& xs) {
    for (std::size_t i = xs.size(); i > 1; --i) {
      std::swap(xs[i - 1], xs[next_below(i)]);
    }
  }

 private:
  std::mt19937_64 engine_;
};

// Shortest faithful decimal form used by every serialized number: 17
// significant digits round-trip any double exactly.
std::string format_g17(double x);

}  // namespace permflow

#endif  // PERMFLOW_NUMERICS_HPP_
