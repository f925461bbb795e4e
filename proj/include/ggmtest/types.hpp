#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace ggm {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

enum class ErrorKind {
  InvalidArgument,
  InsufficientSample,
  DegenerateSample,
  GenerationFailure,
  Io,
  Parse,
  Config,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

/// Number of unordered vertex pairs, p(p-1)/2.
constexpr std::size_t pair_count(std::size_t p) noexcept { return p < 2 ? 0 : p * (p - 1) / 2; }

/// Unordered pair with 0-based vertices, i < j.
struct VertexPair {
  std::size_t i = 0;
  std::size_t j = 0;
  friend bool operator==(const VertexPair&, const VertexPair&) = default;
};

/// Position of (i, j), i < j, in the row-major upper-triangle ordering
/// (0,1), (0,2), ..., (0,p-1), (1,2), ...
constexpr std::size_t pair_index(std::size_t p, std::size_t i, std::size_t j) noexcept {
  return i * p - i * (i + 1) / 2 + (j - i - 1);
}

std::vector<VertexPair> all_pairs(std::size_t p);

/// Set of undirected edges over p vertices, stored as a presence mask in
/// pair_index order.
class EdgeSet {
 public:
  EdgeSet() = default;
  explicit EdgeSet(std::size_t p) : p_(p), present_(pair_count(p), false) {}

  static EdgeSet complete(std::size_t p);

  std::size_t dim() const noexcept { return p_; }
  std::size_t size() const noexcept;
  bool empty() const noexcept { return size() == 0; }

  bool contains(std::size_t i, std::size_t j) const;
  bool contains_index(std::size_t k) const { return present_.at(k); }
  void insert(std::size_t i, std::size_t j);
  void insert_index(std::size_t k) { present_.at(k) = true; }

  /// Pairs in pair_index order.
  std::vector<VertexPair> pairs() const;
  const std::vector<bool>& mask() const noexcept { return present_; }

  friend bool operator==(const EdgeSet&, const EdgeSet&) = default;

  bool is_subset_of(const EdgeSet& other) const;

 private:
  std::size_t p_ = 0;
  std::vector<bool> present_;
};

/// One p-value per unordered pair, in pair_index order.
class EdgePValues {
 public:
  EdgePValues() = default;
  EdgePValues(std::size_t p, std::vector<double> values);

  std::size_t dim() const noexcept { return p_; }
  std::size_t size() const noexcept { return values_.size(); }
  double at(std::size_t i, std::size_t j) const;
  double operator[](std::size_t k) const { return values_[k]; }
  const std::vector<double>& values() const noexcept { return values_; }

 private:
  std::size_t p_ = 0;
  std::vector<double> values_;
};

/// n x p data matrix; entries must be finite.
class ObservationMatrix {
 public:
  ObservationMatrix() = default;
  explicit ObservationMatrix(Matrix values);

  std::size_t rows() const noexcept { return static_cast<std::size_t>(values_.rows()); }
  std::size_t cols() const noexcept { return static_cast<std::size_t>(values_.cols()); }
  const Matrix& values() const noexcept { return values_; }

 private:
  Matrix values_;
};

struct CovarianceMatrix {
  Matrix values;
  Vector mean;  // sample mean for sample covariances, zero for model covariances
};

struct ConcentrationMatrix {
  Matrix values;
};

struct PartialCorrelationMatrix {
  Matrix values;
};

}  // namespace ggm
