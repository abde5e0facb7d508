#pragma once

#include <Eigen/Dense>
#include <complex>
#include <span>
#include <vector>

namespace hierlab {

using Complex = std::complex<double>;
using StateVector = Eigen::VectorXcd;

// Truncated Fourier modes on the one-dimensional torus with A = 1 - Laplacian.
// Basis index i carries label 0, 1, -1, 2, -2, ... so index 0 is the zero mode.
class ModelSpace {
 public:
  static ModelSpace with_cutoff(int cutoff, double s = 1.0, double sigma = 1.0);
  static ModelSpace with_modes(int modes, double s = 1.0, double sigma = 1.0);

  int dim() const noexcept { return static_cast<int>(labels_.size()); }
  std::span<const int> labels() const noexcept { return labels_; }
  int label(int index) const { return labels_.at(index); }
  // -1 when the label is not retained.
  int index_of(int label) const noexcept;
  int max_abs_label() const noexcept { return max_abs_; }

  double weight(int index) const { return weights_(index); }
  double frequency(int index) const { return frequencies_(index); }
  const Eigen::VectorXd& weights() const noexcept { return weights_; }
  const Eigen::VectorXd& frequencies() const noexcept { return frequencies_; }

  double s() const noexcept { return s_; }
  double sigma() const noexcept { return sigma_; }

  double scale_norm(const StateVector& x, double tau) const;
  // (U(t)x)_k = exp(-i t omega_k) x_k
  StateVector propagate(const StateVector& x, double t) const;
  StateVector basis_vector(int index) const;

 private:
  ModelSpace(std::vector<int> labels, double s, double sigma);

  std::vector<int> labels_;
  std::vector<int> index_by_offset_;
  int max_abs_ = 0;
  Eigen::VectorXd weights_;
  Eigen::VectorXd frequencies_;
  double s_;
  double sigma_;
};

}  // namespace hierlab
