#pragma once

#include <functional>
#include <span>
#include <vector>

#include "hierlab/space.hpp"
#include "json.hpp"

namespace hierlab {

inline constexpr int kDefaultGaugeNodes = 32;

struct Atom {
  double weight;
  StateVector point;
};

// mu = sum_i w_i * (U(1)-orbit average of delta_{x_i}). Atoms store orbit representatives.
class AtomicMeasure {
 public:
  // Weights are renormalized if |sum w - 1| <= 1e-9 and rejected otherwise.
  // Atoms must satisfy |x| <= radius + 1e-12.
  explicit AtomicMeasure(std::vector<Atom> atoms, double radius = 1.0);

  static AtomicMeasure dirac(StateVector point, double radius = 1.0);

  std::span<const Atom> atoms() const noexcept { return atoms_; }
  int size() const noexcept { return static_cast<int>(atoms_.size()); }
  int dim() const noexcept { return dim_; }
  double radius() const noexcept { return radius_; }

 private:
  std::vector<Atom> atoms_;
  int dim_ = 0;
  double radius_;
};

using StateMap = std::function<StateVector(const StateVector&)>;

// sum_i w_i |<y, x_i>|^{2k}
double moment(const AtomicMeasure& mu, const StateVector& y, int k);

// Gauge-quadratured sum_i w_i (1/N) sum_j exp(2 i pi Re<y, e^{i theta_j} x_i>).
Complex characteristic(const AtomicMeasure& mu, const StateVector& y,
                       int gauge_nodes = kDefaultGaugeNodes);

// Throws ContractViolation when f fails the sampled equivariance check.
AtomicMeasure pushforward(const AtomicMeasure& mu, const StateMap& f);

double weak_narrow_defect(const AtomicMeasure& mu, const AtomicMeasure& nu,
                          std::span<const StateVector> tests, int k_max);

// Weight of atoms whose energy on basis indices >= first_tail_index is >= eps.
double tightness_defect(const AtomicMeasure& mu, int first_tail_index, double eps);

AtomicMeasure rotate_atoms(const AtomicMeasure& mu, std::span<const double> phases);
AtomicMeasure mixture(const AtomicMeasure& mu, const AtomicMeasure& nu, double t);

nlohmann::json to_json(const AtomicMeasure& mu);
AtomicMeasure measure_from_json(const nlohmann::json& j, double radius = 1.0);

}  // namespace hierlab
