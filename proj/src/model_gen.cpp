#include "ggmtest/model_gen.hpp"

#include "ggmtest/core_stats.hpp"
#include "ggmtest/rng.hpp"

#include <cmath>
#include <numeric>
#include <sstream>

namespace ggm {

std::size_t GeneratorSpec::edge_count() const {
  if (edges) return *edges;
  if (density) return static_cast<std::size_t>(std::floor(*density * static_cast<double>(pair_count(p)) + 0.5));
  return 0;
}

std::vector<std::string> GeneratorSpec::violations() const {
  std::vector<std::string> out;
  if (p < 2) out.push_back("p must be at least 2");
  if (edges && density) out.push_back("give either an edge count or a density, not both");
  if (density && !(*density >= 0.0 && *density <= 1.0)) out.push_back("density q must lie in [0, 1]");
  if (edges && *edges > pair_count(p)) {
    std::ostringstream msg;
    msg << "edge count " << *edges << " exceeds C(p, 2) = " << pair_count(p);
    out.push_back(msg.str());
  }
  if (!(rho_min > 0.0)) out.push_back("rho_min must be positive");
  if (!(rho_max < 1.0)) out.push_back("rho_max must be below 1");
  if (!(rho_min <= rho_max)) out.push_back("rho_min must not exceed rho_max");
  return out;
}

void GeneratorSpec::validate() const {
  const auto v = violations();
  if (v.empty()) return;
  std::string msg = "invalid generator spec:";
  for (const auto& s : v) msg += "\n  " + s;
  throw Error(ErrorKind::InvalidArgument, msg);
}

namespace {

double min_eigenvalue(const Matrix& a) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(a, Eigen::EigenvaluesOnly);
  return solver.eigenvalues().minCoeff();
}

bool is_symmetric(const Matrix& a) {
  const double scale = std::max(1.0, a.cwiseAbs().maxCoeff());
  return a.rows() == a.cols() && (a - a.transpose()).cwiseAbs().maxCoeff() <= 1e-12 * scale;
}

}  // namespace

RepairResult repair_positive_definite(const Matrix& k) {
  if (k.rows() == 0 || !is_symmetric(k)) throw Error(ErrorKind::InvalidArgument, "repair needs a symmetric matrix");
  for (Eigen::Index i = 0; i < k.rows(); ++i)
    if (k(i, i) != 1.0) throw Error(ErrorKind::InvalidArgument, "repair needs a unit diagonal");

  const auto p = k.rows();
  for (int step = 0; step <= kRepairIterations; ++step) {
    const double delta = kRepairStep * step;
    Matrix candidate = (k + delta * Matrix::Identity(p, p)) / (1.0 + delta);
    candidate.diagonal().setOnes();
    if (min_eigenvalue(candidate) >= kMinEigenvalue) return {{std::move(candidate)}, delta};
  }
  std::ostringstream msg;
  msg << "could not make the concentration matrix positive definite with delta <= "
      << kRepairStep * kRepairIterations;
  throw Error(ErrorKind::GenerationFailure, msg.str());
}

CovarianceMatrix covariance_from_concentration(const ConcentrationMatrix& k) {
  CovarianceMatrix out;
  out.values = spd_inverse(k.values);
  out.mean = Vector::Zero(k.values.rows());
  return out;
}

TrueModel model_from_concentration(const Matrix& k, GeneratorSpec spec, bool repaired, double delta) {
  if (k.rows() < 1 || !is_symmetric(k)) throw Error(ErrorKind::InvalidArgument, "concentration matrix must be symmetric");
  TrueModel model;
  model.concentration.values = (k + k.transpose()) * 0.5;
  try {
    model.covariance = covariance_from_concentration(model.concentration);
  } catch (const Error&) {
    throw Error(ErrorKind::InvalidArgument, "concentration matrix is not positive definite");
  }
  model.edges = edges_from_concentration(model.concentration, 1e-12);
  spec.p = static_cast<std::size_t>(k.rows());
  model.spec = spec;
  model.repaired = repaired;
  model.delta = delta;
  return model;
}

TrueModel generate_model(const GeneratorSpec& spec) {
  spec.validate();
  const std::size_t p = spec.p;
  const std::size_t total = pair_count(p);
  const std::size_t m = spec.edge_count();

  Rng rng(spec.seed);
  // Partial Fisher-Yates: the first m slots are a uniform m-subset.
  std::vector<std::size_t> slots(total);
  std::iota(slots.begin(), slots.end(), std::size_t{0});
  for (std::size_t a = 0; a < m; ++a) {
    const auto b = a + static_cast<std::size_t>(rng.index(total - a));
    std::swap(slots[a], slots[b]);
  }

  const auto pairs = all_pairs(p);
  Matrix k = Matrix::Identity(static_cast<Eigen::Index>(p), static_cast<Eigen::Index>(p));
  for (std::size_t a = 0; a < m; ++a) {
    const auto [i, j] = pairs[slots[a]];
    double v = rng.uniform(spec.rho_min, spec.rho_max);
    if (spec.random_sign && rng.uniform01() < 0.5) v = -v;
    k(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = v;
    k(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i)) = v;
  }

  auto repaired = repair_positive_definite(k);
  return model_from_concentration(repaired.matrix.values, spec, repaired.delta > 0.0, repaired.delta);
}

ObservationMatrix sample_mvn(const CovarianceMatrix& sigma, std::size_t n, std::uint64_t seed) {
  if (n < 1) throw Error(ErrorKind::InvalidArgument, "sample size must be at least 1");
  const Matrix l = cholesky_lower(sigma.values);
  const auto p = l.rows();
  Rng rng(seed);
  Matrix z(static_cast<Eigen::Index>(n), p);
  for (Eigen::Index r = 0; r < z.rows(); ++r)
    for (Eigen::Index c = 0; c < p; ++c) z(r, c) = rng.normal();
  Matrix y = z * l.transpose();
  if (sigma.mean.size() == p) y.rowwise() += sigma.mean.transpose();
  return ObservationMatrix(std::move(y));
}

}  // namespace ggm
