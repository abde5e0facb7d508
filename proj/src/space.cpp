#include "hierlab/space.hpp"

#include <cmath>
#include <numbers>

#include "hierlab/errors.hpp"

namespace hierlab {

ModelSpace ModelSpace::with_cutoff(int cutoff, double s, double sigma) {
  if (cutoff < 0) throw ContractViolation("cutoff must be nonnegative");
  return with_modes(2 * cutoff + 1, s, sigma);
}

ModelSpace ModelSpace::with_modes(int modes, double s, double sigma) {
  if (modes < 1) throw ContractViolation("model space needs at least one mode");
  std::vector<int> labels;
  labels.reserve(static_cast<std::size_t>(modes));
  labels.push_back(0);
  for (int k = 1; static_cast<int>(labels.size()) < modes; ++k) {
    labels.push_back(k);
    if (static_cast<int>(labels.size()) < modes) labels.push_back(-k);
  }
  return ModelSpace(std::move(labels), s, sigma);
}

ModelSpace::ModelSpace(std::vector<int> labels, double s, double sigma)
    : labels_(std::move(labels)), s_(s), sigma_(sigma) {
  for (int l : labels_) max_abs_ = std::max(max_abs_, std::abs(l));
  index_by_offset_.assign(static_cast<std::size_t>(2 * max_abs_ + 1), -1);
  const int m = dim();
  weights_.resize(m);
  frequencies_.resize(m);
  for (int i = 0; i < m; ++i) {
    index_by_offset_[static_cast<std::size_t>(labels_[i] + max_abs_)] = i;
    const double w = 2.0 * std::numbers::pi * labels_[i];
    weights_(i) = 1.0 + w * w;
    frequencies_(i) = weights_(i) - 1.0;
  }
}

int ModelSpace::index_of(int label) const noexcept {
  if (label < -max_abs_ || label > max_abs_) return -1;
  return index_by_offset_[static_cast<std::size_t>(label + max_abs_)];
}

double ModelSpace::scale_norm(const StateVector& x, double tau) const {
  double sum = 0.0;
  for (int i = 0; i < dim(); ++i) sum += std::pow(weights_(i), tau) * std::norm(x(i));
  return std::sqrt(sum);
}

StateVector ModelSpace::propagate(const StateVector& x, double t) const {
  StateVector out(x.size());
  for (int i = 0; i < dim(); ++i) out(i) = std::polar(1.0, -t * frequencies_(i)) * x(i);
  return out;
}

StateVector ModelSpace::basis_vector(int index) const {
  StateVector e = StateVector::Zero(dim());
  e(index) = 1.0;
  return e;
}

}  // namespace hierlab
