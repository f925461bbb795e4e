#pragma once

#include "ggmtest/types.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace ggm {

/// Parameters of a random sparse concentration matrix. Exactly one of
/// `edges` (exact count) and `density` (fraction of all pairs) is set.
struct GeneratorSpec {
  std::size_t p = 2;
  std::optional<std::size_t> edges;
  std::optional<double> density;
  double rho_min = 0.2;
  double rho_max = 0.55;
  std::uint64_t seed = 0;
  bool random_sign = false;

  /// m, with density converted by round-half-up of q * C(p, 2).
  std::size_t edge_count() const;

  /// All violated constraints, empty when valid.
  std::vector<std::string> violations() const;
  void validate() const;
};

struct TrueModel {
  ConcentrationMatrix concentration;
  CovarianceMatrix covariance;
  EdgeSet edges;
  GeneratorSpec spec;
  bool repaired = false;
  double delta = 0.0;

  std::size_t dim() const noexcept { return static_cast<std::size_t>(concentration.values.rows()); }
  const Vector& mean() const noexcept { return covariance.mean; }
};

struct RepairResult {
  ConcentrationMatrix matrix;
  double delta = 0.0;
};

inline constexpr double kRepairStep = 0.05;
inline constexpr int kRepairIterations = 100;
inline constexpr double kMinEigenvalue = 1e-6;

/// Shrinks a unit-diagonal symmetric matrix toward the identity,
/// K' = (K + delta I) / (1 + delta), with delta the first value of
/// 0, 0.05, ..., 5 giving a minimum eigenvalue of at least 1e-6. The zero
/// pattern and the unit diagonal are kept. Throws
/// ErrorKind::GenerationFailure when the schedule is exhausted.
RepairResult repair_positive_definite(const Matrix& k);

TrueModel generate_model(const GeneratorSpec& spec);

/// Builds a model around a given concentration matrix (fixtures, model
/// files). Throws ErrorKind::InvalidArgument unless k is symmetric and
/// positive definite.
TrueModel model_from_concentration(const Matrix& k, GeneratorSpec spec = {}, bool repaired = false, double delta = 0.0);

CovarianceMatrix covariance_from_concentration(const ConcentrationMatrix& k);

/// n rows drawn i.i.d. from N(0, sigma) as L z, L the lower Cholesky factor.
ObservationMatrix sample_mvn(const CovarianceMatrix& sigma, std::size_t n, std::uint64_t seed);

}  // namespace ggm
