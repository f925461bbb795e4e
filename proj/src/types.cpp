#include "ggmtest/types.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace ggm {

std::vector<VertexPair> all_pairs(std::size_t p) {
  std::vector<VertexPair> out;
  out.reserve(pair_count(p));
  for (std::size_t i = 0; i < p; ++i)
    for (std::size_t j = i + 1; j < p; ++j) out.push_back({i, j});
  return out;
}

EdgeSet EdgeSet::complete(std::size_t p) {
  EdgeSet s(p);
  std::fill(s.present_.begin(), s.present_.end(), true);
  return s;
}

std::size_t EdgeSet::size() const noexcept {
  return static_cast<std::size_t>(std::count(present_.begin(), present_.end(), true));
}

bool EdgeSet::contains(std::size_t i, std::size_t j) const {
  if (i == j || i >= p_ || j >= p_) return false;
  if (i > j) std::swap(i, j);
  return present_[pair_index(p_, i, j)];
}

void EdgeSet::insert(std::size_t i, std::size_t j) {
  if (i == j) throw Error(ErrorKind::InvalidArgument, "self-loop is not a valid edge");
  if (i >= p_ || j >= p_) throw Error(ErrorKind::InvalidArgument, "edge vertex out of range");
  if (i > j) std::swap(i, j);
  present_[pair_index(p_, i, j)] = true;
}

std::vector<VertexPair> EdgeSet::pairs() const {
  std::vector<VertexPair> out;
  std::size_t k = 0;
  for (std::size_t i = 0; i < p_; ++i)
    for (std::size_t j = i + 1; j < p_; ++j, ++k)
      if (present_[k]) out.push_back({i, j});
  return out;
}

bool EdgeSet::is_subset_of(const EdgeSet& other) const {
  if (p_ != other.p_) return false;
  for (std::size_t k = 0; k < present_.size(); ++k)
    if (present_[k] && !other.present_[k]) return false;
  return true;
}

EdgePValues::EdgePValues(std::size_t p, std::vector<double> values) : p_(p), values_(std::move(values)) {
  if (values_.size() != pair_count(p)) {
    std::ostringstream msg;
    msg << "expected " << pair_count(p) << " p-values for p = " << p << ", got " << values_.size();
    throw Error(ErrorKind::InvalidArgument, msg.str());
  }
  for (double v : values_)
    if (!(v >= 0.0 && v <= 1.0)) throw Error(ErrorKind::InvalidArgument, "p-value outside [0, 1]");
}

double EdgePValues::at(std::size_t i, std::size_t j) const {
  if (i > j) std::swap(i, j);
  if (i == j || j >= p_) throw Error(ErrorKind::InvalidArgument, "invalid vertex pair");
  return values_[pair_index(p_, i, j)];
}

ObservationMatrix::ObservationMatrix(Matrix values) : values_(std::move(values)) {
  if (values_.rows() < 1 || values_.cols() < 1)
    throw Error(ErrorKind::InvalidArgument, "observation matrix must be non-empty");
  if (!values_.allFinite()) throw Error(ErrorKind::InvalidArgument, "observation matrix has non-finite entries");
}

}  // namespace ggm
