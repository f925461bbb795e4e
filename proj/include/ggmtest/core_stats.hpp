#pragma once

#include "ggmtest/types.hpp"

#include <cstddef>

namespace ggm {

/// Degrees of freedom used for the partial-correlation t test.
enum class DfRule {
  NMinusP,       // df = n - p
  NMinusPMinus2, // df = n - p - 2
};

const char* to_string(DfRule rule) noexcept;
bool parse_df_rule(const std::string& text, DfRule& out) noexcept;
std::size_t degrees_of_freedom(std::size_t n, std::size_t p, DfRule rule);

/// Pivot threshold for Cholesky factorizations, relative to trace/p.
inline constexpr double kPivotTolerance = 1e-10;

/// Values of |r| this close to 1 are treated as an infinite t statistic.
inline constexpr double kUnitCorrelationTolerance = 1e-12;

Vector sample_mean(const ObservationMatrix& data);

/// Unbiased sample covariance (denominator n - 1). Requires n >= 2.
CovarianceMatrix sample_covariance(const ObservationMatrix& data);

/// Inverse of a symmetric positive definite matrix through its Cholesky
/// factor, symmetrized. Throws ErrorKind::DegenerateSample when a pivot is not
/// above kPivotTolerance * trace / p.
Matrix spd_inverse(const Matrix& a);

/// Lower Cholesky factor with the same pivot check as spd_inverse.
Matrix cholesky_lower(const Matrix& a);

ConcentrationMatrix concentration_from_covariance(const CovarianceMatrix& s);

/// rho_ij = k_ij / sqrt(k_ii k_jj). No sign flip is applied; every test
/// downstream is two-sided in |r|.
PartialCorrelationMatrix partial_correlations(const ConcentrationMatrix& k);

/// Two-sided Student t tail probability 2 (1 - F(|t|; df)).
double student_t_two_sided(double t, double df);

/// Two-sided p-value for each pair from t = r sqrt(df) / sqrt(1 - r^2).
/// Throws ErrorKind::InsufficientSample when n < p + 2.
EdgePValues edge_pvalues(const PartialCorrelationMatrix& r, std::size_t n, DfRule rule = DfRule::NMinusP);

/// Pairs whose concentration entry exceeds tol in magnitude.
EdgeSet edges_from_concentration(const ConcentrationMatrix& k, double tol = 1e-12);

/// Full pipeline from data to raw per-edge p-values.
EdgePValues raw_pvalues(const ObservationMatrix& data, DfRule rule = DfRule::NMinusP);

}  // namespace ggm
