#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "hierlab/definetti.hpp"
#include "hierlab/dynamics.hpp"
#include "hierlab/measures.hpp"

namespace hierlab {

struct HierarchyTrajectory {
  std::vector<double> times;
  std::vector<Hierarchy> hierarchies;
  std::vector<AtomicMeasure> measures;
  double radius_bound = 1.0;
};

HierarchyTrajectory lift_trajectory(std::span<const double> times,
                                    std::span<const AtomicMeasure> measures, int max_order,
                                    double radius_bound);

// sum_i w_i |x_i^k><x_i^{j-1} (x) v(t,x_i) (x) x_i^{k-j}|, compressed to the symmetric power.
// Inner products are conjugate-linear in the bra.
SymOperator c_plus(const AtomicMeasure& mu, double t, int j, int k, const VectorField& vf);
SymOperator c_minus(const AtomicMeasure& mu, double t, int j, int k, const VectorField& vf);

// The same operators on the full k-fold tensor power, before compression.
Eigen::MatrixXcd c_plus_full(const AtomicMeasure& mu, double t, int j, int k,
                             const VectorField& vf);

// sum_j (C+ + C-), built with the fast symmetric path.
Eigen::MatrixXcd hierarchy_generator(const AtomicMeasure& mu, double t, int k,
                                     const VectorField& vf);

struct ResidualCurve {
  std::vector<double> times;
  std::vector<double> values;
  double max = 0;
};

// ||W [gamma_t - gamma_t0 - int sum_j (C+ + C-)] W||_tr with W = (A^{-sigma/2})^{(x)k}.
ResidualCurve hierarchy_residual(const HierarchyTrajectory& traj, const ModelSpace& space,
                                 const VectorField& vf, int k);

struct KernelCorrespondence {
  double defect = 0;          // Tr_{k+1}[V_{j,k+1} gamma] vs i C-(v = -i g)
  double reversed_order_defect = 0;  // vs sum_i w_i |x^k><..g..|, ket and bra swapped
};

// Both sides on the full k-fold tensor power; gamma^(k+1) is phi(mu)^(k+1).
KernelCorrespondence kernel_correspondence_check(const AtomicMeasure& mu,
                                                 const ModelSpace& space,
                                                 const PairPotential& potential, int j, int k);

struct A1Report {
  bool holds = false;
  double worst_ratio = 0;       // max_{t,k} ||gamma||_{s}^{1/2k} / R
  bool atoms_hold = false;
  double worst_atom_ratio = 0;  // max scale_norm(x, s) / R
  bool consistent = false;
};

A1Report a1_check(const HierarchyTrajectory& traj, const ModelSpace& space, double s, double R);

// Both sides of 2k C(2k-1, k) = k C(2k, k) in exact integer arithmetic.
std::pair<std::uint64_t, std::uint64_t> central_binomial_identity(int k);
std::uint64_t binomial(int n, int k);

}  // namespace hierlab
