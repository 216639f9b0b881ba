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

#include "permflow/numerics.hpp"

#include <cstdio>
#include <string>

namespace permflow {

Eigen::MatrixXd expm_symmetric(const Eigen::MatrixXd& generator, double t) {
  if (t == 0.0) return Eigen::MatrixXd::Identity(generator.rows(), generator.cols());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(generator);
  const Eigen::VectorXd scale = (t * es.eigenvalues().array()).exp();
  const Eigen::MatrixXd raw =
      es.eigenvectors() * scale.asDiagonal() * es.eigenvectors().transpose();
  return 0.5 * (raw + raw.transpose());  // exact symmetry, not 1-ulp symmetry
}

Eigen::VectorXd expm_symmetric_apply(const Eigen::MatrixXd& generator, double t,
                                     const Eigen::VectorXd& v0) {
  if (t == 0.0) return v0;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(generator);
  const Eigen::ArrayXd scale = (t * es.eigenvalues().array()).exp();
  const Eigen::VectorXd coeffs = es.eigenvectors().transpose() * v0;
  return es.eigenvectors() * (scale * coeffs.array()).matrix();
}

std::string format_g17(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

}  // namespace permflow
