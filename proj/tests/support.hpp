#pragma once

// Hand-rolled generators for property tests. Every generator draws from an explicit
// Rng so failures reproduce from the printed seed.

#include <Eigen/Dense>
#include <cmath>
#include <vector>

#include "hierlab/measures.hpp"
#include "hierlab/rng.hpp"
#include "hierlab/space.hpp"

namespace hierlab::testing {

inline StateVector random_state(Rng& rng, int dim, double norm) {
  StateVector x(dim);
  for (int i = 0; i < dim; ++i) x(i) = rng.complex_normal();
  return x * (norm / x.norm());
}

inline StateVector random_ball_state(Rng& rng, int dim) {
  return random_state(rng, dim, rng.uniform(0.05, 1.0));
}

inline AtomicMeasure random_measure(Rng& rng, int dim, int atoms, bool on_sphere = false) {
  std::vector<Atom> out;
  double total = 0.0;
  for (int i = 0; i < atoms; ++i) {
    const double w = rng.uniform(0.1, 1.0);
    total += w;
    out.push_back(Atom{w, on_sphere ? random_state(rng, dim, 1.0) : random_ball_state(rng, dim)});
  }
  for (auto& a : out) a.weight /= total;
  return AtomicMeasure(std::move(out));
}

inline Eigen::MatrixXcd random_matrix(Rng& rng, int rows, int cols) {
  Eigen::MatrixXcd m(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) m(i, j) = rng.complex_normal();
  return m;
}

inline Eigen::MatrixXcd random_positive(Rng& rng, int dim) {
  const Eigen::MatrixXcd b = random_matrix(rng, dim, dim);
  return b * b.adjoint();
}

inline double max_abs(const Eigen::MatrixXcd& m) { return m.cwiseAbs().maxCoeff(); }

}  // namespace hierlab::testing
