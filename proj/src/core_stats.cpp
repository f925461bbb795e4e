#include "ggmtest/core_stats.hpp"

#include <boost/math/distributions/students_t.hpp>

#include <algorithm>
#include <cmath>
#include <sstream>

namespace ggm {

const char* to_string(DfRule rule) noexcept {
  return rule == DfRule::NMinusP ? "n-p" : "n-p-2";
}

bool parse_df_rule(const std::string& text, DfRule& out) noexcept {
  if (text == "n-p") {
    out = DfRule::NMinusP;
    return true;
  }
  if (text == "n-p-2") {
    out = DfRule::NMinusPMinus2;
    return true;
  }
  return false;
}

std::size_t degrees_of_freedom(std::size_t n, std::size_t p, DfRule rule) {
  if (n < p + 2) {
    std::ostringstream msg;
    msg << "insufficient sample: n = " << n << " but n >= p + 2 = " << p + 2 << " is required";
    throw Error(ErrorKind::InsufficientSample, msg.str());
  }
  const std::size_t df = rule == DfRule::NMinusP ? n - p : n - p - 2;
  if (df < 1) {
    std::ostringstream msg;
    msg << "insufficient sample: df rule " << to_string(rule) << " leaves no degrees of freedom at n = " << n;
    throw Error(ErrorKind::InsufficientSample, msg.str());
  }
  return df;
}

Vector sample_mean(const ObservationMatrix& data) {
  return data.values().colwise().mean().transpose();
}

CovarianceMatrix sample_covariance(const ObservationMatrix& data) {
  const auto n = data.rows();
  if (n < 2) throw Error(ErrorKind::InsufficientSample, "sample covariance needs at least 2 observations");
  CovarianceMatrix out;
  out.mean = sample_mean(data);
  const Matrix centered = data.values().rowwise() - out.mean.transpose();
  Matrix s = (centered.transpose() * centered) / static_cast<double>(n - 1);
  out.values = (s + s.transpose()) * 0.5;
  return out;
}

Matrix cholesky_lower(const Matrix& a) {
  if (a.rows() != a.cols() || a.rows() == 0)
    throw Error(ErrorKind::InvalidArgument, "cholesky needs a non-empty square matrix");
  const double scale = a.trace() / static_cast<double>(a.rows());
  Eigen::LLT<Matrix> llt(a);
  if (!(scale > 0.0) || llt.info() != Eigen::Success)
    throw Error(ErrorKind::DegenerateSample, "matrix is not positive definite");
  Matrix l = llt.matrixL();
  for (Eigen::Index i = 0; i < l.rows(); ++i) {
    const double pivot = l(i, i) * l(i, i);
    if (!(pivot > kPivotTolerance * scale)) {
      std::ostringstream msg;
      msg << "degenerate sample: Cholesky pivot " << i + 1 << " is " << pivot << ", below tolerance";
      throw Error(ErrorKind::DegenerateSample, msg.str());
    }
  }
  return l;
}

Matrix spd_inverse(const Matrix& a) {
  const Matrix l = cholesky_lower(a);
  const auto p = a.rows();
  Matrix inv = Matrix::Identity(p, p);
  l.triangularView<Eigen::Lower>().solveInPlace(inv);
  l.transpose().triangularView<Eigen::Upper>().solveInPlace(inv);
  return (inv + inv.transpose()) * 0.5;
}

ConcentrationMatrix concentration_from_covariance(const CovarianceMatrix& s) {
  return {spd_inverse(s.values)};
}

PartialCorrelationMatrix partial_correlations(const ConcentrationMatrix& k) {
  const auto p = k.values.rows();
  const Vector d = k.values.diagonal().cwiseSqrt();
  Matrix r(p, p);
  for (Eigen::Index i = 0; i < p; ++i) {
    r(i, i) = 1.0;
    for (Eigen::Index j = i + 1; j < p; ++j) {
      const double v = std::clamp(k.values(i, j) / (d(i) * d(j)), -1.0, 1.0);
      r(i, j) = v;
      r(j, i) = v;
    }
  }
  return {r};
}

double student_t_two_sided(double t, double df) {
  if (!(df >= 1.0)) throw Error(ErrorKind::InvalidArgument, "degrees of freedom must be >= 1");
  if (std::isnan(t)) throw Error(ErrorKind::InvalidArgument, "t statistic is NaN");
  const double a = std::fabs(t);
  if (std::isinf(a)) return 0.0;
  if (a == 0.0) return 1.0;
  const boost::math::students_t_distribution<double> dist(df);
  return std::clamp(2.0 * boost::math::cdf(boost::math::complement(dist, a)), 0.0, 1.0);
}

EdgePValues edge_pvalues(const PartialCorrelationMatrix& r, std::size_t n, DfRule rule) {
  const auto p = static_cast<std::size_t>(r.values.rows());
  const double df = static_cast<double>(degrees_of_freedom(n, p, rule));
  const double root_df = std::sqrt(df);
  std::vector<double> out;
  out.reserve(pair_count(p));
  for (std::size_t i = 0; i < p; ++i) {
    for (std::size_t j = i + 1; j < p; ++j) {
      const double v = r.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
      if (!(std::fabs(v) <= 1.0)) throw Error(ErrorKind::InvalidArgument, "partial correlation outside [-1, 1]");
      const double a = std::fabs(v);
      if (a >= 1.0 - kUnitCorrelationTolerance) {
        out.push_back(0.0);
        continue;
      }
      const double t = v * root_df / std::sqrt(1.0 - v * v);
      out.push_back(student_t_two_sided(t, df));
    }
  }
  return EdgePValues(p, std::move(out));
}

EdgeSet edges_from_concentration(const ConcentrationMatrix& k, double tol) {
  if (!(tol >= 0.0)) throw Error(ErrorKind::InvalidArgument, "tolerance must be non-negative");
  const auto p = static_cast<std::size_t>(k.values.rows());
  EdgeSet edges(p);
  for (std::size_t i = 0; i < p; ++i)
    for (std::size_t j = i + 1; j < p; ++j)
      if (std::fabs(k.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j))) > tol) edges.insert(i, j);
  return edges;
}

EdgePValues raw_pvalues(const ObservationMatrix& data, DfRule rule) {
  degrees_of_freedom(data.rows(), data.cols(), rule);
  const auto s = sample_covariance(data);
  return edge_pvalues(partial_correlations(concentration_from_covariance(s)), data.rows(), rule);
}

}  // namespace ggm
