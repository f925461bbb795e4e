#pragma once

#include "ggmtest/rng.hpp"
#include "ggmtest/types.hpp"

namespace testing {

/// Random SPD matrix B B^T + p I with standard normal B.
inline ggm::Matrix random_spd(std::size_t p, std::uint64_t seed) {
  ggm::Rng rng(seed);
  ggm::Matrix b(static_cast<Eigen::Index>(p), static_cast<Eigen::Index>(p));
  for (Eigen::Index i = 0; i < b.rows(); ++i)
    for (Eigen::Index j = 0; j < b.cols(); ++j) b(i, j) = rng.normal();
  ggm::Matrix a = b * b.transpose() + static_cast<double>(p) * ggm::Matrix::Identity(b.rows(), b.rows());
  return (a + a.transpose()) * 0.5;
}

inline ggm::Matrix normal_matrix(std::size_t rows, std::size_t cols, std::uint64_t seed) {
  ggm::Rng rng(seed);
  ggm::Matrix y(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  for (Eigen::Index i = 0; i < y.rows(); ++i)
    for (Eigen::Index j = 0; j < y.cols(); ++j) y(i, j) = rng.normal();
  return y;
}

inline double max_rel_diff(const ggm::Matrix& a, const ggm::Matrix& b) {
  return (a - b).cwiseAbs().maxCoeff() / std::max(1.0, b.cwiseAbs().maxCoeff());
}

}  // namespace testing
