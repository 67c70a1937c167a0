#pragma once

#include <random>

#include "quadadapt/se3.hpp"
#include "quadadapt/types.hpp"

namespace quadadapt::testing {

inline Vector3 random_vector(std::mt19937_64& rng, double scale = 1.0) {
  std::uniform_real_distribution<double> u(-scale, scale);
  return {u(rng), u(rng), u(rng)};
}

/// Uniform on SO(3) via a normalized Gaussian quaternion.
inline Matrix3 random_rotation(std::mt19937_64& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  Eigen::Quaterniond q(n(rng), n(rng), n(rng), n(rng));
  return q.normalized().toRotationMatrix();
}

inline Matrix3 random_rotation(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  return random_rotation(rng);
}

inline MatrixX random_matrix(std::mt19937_64& rng, Eigen::Index rows, Eigen::Index cols,
                             double scale = 1.0) {
  std::uniform_real_distribution<double> u(-scale, scale);
  MatrixX M(rows, cols);
  for (Eigen::Index i = 0; i < M.size(); ++i) M(i) = u(rng);
  return M;
}

}  // namespace quadadapt::testing
