#pragma once

#include <vector>

#include "hierlab/dynamics.hpp"
#include "hierlab/symtensor.hpp"

namespace hierlab {

inline constexpr int kDefaultSectorCapacity = 500;

// (1/2) sum_{k,p,q} W_q a+_{k+q} a+_{p-q} a_p a_k on the order-particle sector, i.e. the sum
// of W(x_i - x_j) over pairs; momenta outside the cutoff are dropped.
Eigen::MatrixXcd pair_interaction(const ModelSpace& space, const PairPotential& w, int order);

// sum_j alpha_j omega_j on the order-particle sector.
Eigen::VectorXd free_energies(const ModelSpace& space, int order);

struct NBodyState {
  int particles = 0;
  Eigen::VectorXcd amplitudes;
};

NBodyState product_state(const StateVector& phi, int particles);

// H = sum omega a+a + (1/n) sum_{i<j} W(x_i - x_j), with a cached eigendecomposition.
class NBodyHamiltonian {
 public:
  NBodyHamiltonian(const ModelSpace& space, PairPotential w, int particles,
                   int capacity = kDefaultSectorCapacity);

  const Eigen::MatrixXcd& matrix() const noexcept { return matrix_; }
  int particles() const noexcept { return particles_; }
  const ModelSpace& space() const noexcept { return space_; }
  const PairPotential& potential() const noexcept { return potential_; }

  NBodyState evolve(const NBodyState& state, double t) const;
  double energy(const NBodyState& state) const;

 private:
  ModelSpace space_;
  PairPotential potential_;
  int particles_;
  Eigen::MatrixXcd matrix_;
  Eigen::VectorXd eigenvalues_;
  Eigen::MatrixXcd eigenvectors_;
};

// k-particle reduced density matrix, trace 1, from correlators <a+^beta a^alpha>.
SymOperator marginal(const NBodyState& state, int modes, int k);

// The three BBGKY terms (free, intra-cluster, collision) as -i [ ... ].
Eigen::MatrixXcd bbgky_right_side(const NBodyHamiltonian& h, const SymOperator& rho_k,
                                  const SymOperator& rho_k1);

struct BbgkyCurve {
  std::vector<double> times;
  std::vector<double> values;
  double max = 0;
};

// Centered difference of rho^(k) with step dt against the BBGKY right side, at each sample time.
BbgkyCurve bbgky_residual(const NBodyHamiltonian& h, const NBodyState& initial, int k,
                          const std::vector<double>& sample_times, double dt);

struct ChaosRow {
  int n = 0;
  int k = 0;
  double epsilon = 0;
  double runtime_ms = 0;
};

std::vector<ChaosRow> chaos_experiment(const ModelSpace& space, const StateVector& phi0,
                                       const PairPotential& w, const std::vector<int>& n_list,
                                       int k, double t1, double hartree_dt = 1e-4,
                                       int capacity = kDefaultSectorCapacity);

}  // namespace hierlab
