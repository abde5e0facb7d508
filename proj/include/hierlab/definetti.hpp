#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "hierlab/measures.hpp"
#include "hierlab/symtensor.hpp"

namespace hierlab {

// Components gamma^(1..max_order) on the symmetric powers of C^modes.
struct Hierarchy {
  int modes = 0;
  std::vector<SymOperator> levels;

  int max_order() const noexcept { return static_cast<int>(levels.size()); }
  const SymOperator& level(int k) const { return levels.at(static_cast<std::size_t>(k - 1)); }
};

// gamma^(k) = sum_i w_i |x_i^k><x_i^k|
Hierarchy phi(const AtomicMeasure& mu, int max_order);

// max_k ||gamma^(k) - eta^(k)||_tr
double hierarchy_distance(const Hierarchy& a, const Hierarchy& b);

struct SphereReport {
  bool on_sphere = false;        // all stored traces equal 1
  bool first_level_verdict = false;
  bool consistent = false;       // the two verdicts agree
  std::vector<double> traces;
};
SphereReport sphere_concentration_test(const Hierarchy& gamma, double tol = 1e-10);

struct CompatibilityReport {
  bool compatible = false;
  std::vector<double> defects;  // defects[k-1] = ||Tr gamma^(k+1) - gamma^(k)||_tr
};
CompatibilityReport trace_compatibility_test(const Hierarchy& gamma, double tol = 1e-10);

// x + (sqrt(1 - sum_{j != n}|x_j|^2) - x_n) e_n
StateVector psi_lift(const StateVector& x, int lift_mode);
AtomicMeasure psi_lift(const AtomicMeasure& mu, int lift_mode);

struct LiftingRow {
  int lift_mode = 0;
  double zero_mode_pairing = 0;     // |Tr[K (gamma_n - gamma)]|, K = |e_0^k><e_0^k|
  double zero_mode_trace_norm = 0;  // ||K (gamma_n - gamma)||_tr
  double trace_gap = 0;             // |Tr gamma_n - Tr gamma|
  double trace_norm_distance = 0;   // ||gamma_n - gamma||_tr
  double compressed_defect = 0;     // ||P (gamma_n - gamma) P||_tr, P away from lift mode
};
std::vector<LiftingRow> weak_star_lifting_demo(const AtomicMeasure& mu, int order,
                                               std::span<const int> lift_modes);

// Finite-rank test family on the order-k symmetric power: every |e_a><e_b| when k <= 2,
// plus ten seeded random contractions.
std::vector<Eigen::MatrixXcd> weak_star_test_family(int modes, int order,
                                                    std::uint64_t seed = 0xA11CE);

double weak_star_defect(const SymOperator& a, const SymOperator& b,
                        std::span<const Eigen::MatrixXcd> family);

struct KadecKleeLevel {
  int order = 0;
  std::vector<double> weak_star;
  std::vector<double> trace_gap;
  std::vector<double> trace_norm;
  bool premises_vanish = false;
  bool conclusion_vanishes = false;
  bool consistent = false;  // premises vanish implies conclusion vanishes
};
std::vector<KadecKleeLevel> kadec_klee_experiment(std::span<const Hierarchy> sequence,
                                                  const Hierarchy& limit);

// Recovers a measure with at most two nonzero atoms from gamma^(1), gamma^(2).
std::optional<AtomicMeasure> reconstruct_two_atoms(const Hierarchy& gamma, double tol = 1e-9);

}  // namespace hierlab
