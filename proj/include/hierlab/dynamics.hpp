#pragma once

#include <functional>
#include <string>
#include <vector>

#include "hierlab/space.hpp"

namespace hierlab {

// Real even Fourier coefficients of a pair potential, stored by |lag|; zero beyond.
class PairPotential {
 public:
  PairPotential() = default;
  explicit PairPotential(std::vector<double> by_abs_lag) : coefficients_(std::move(by_abs_lag)) {}
  // Full list over lags -L..L; throws ContractViolation if not even.
  static PairPotential from_symmetric(const std::vector<double>& lags_minus_to_plus);
  static PairPotential constant(double value, int max_lag);

  double at(int lag) const noexcept;
  int max_lag() const noexcept { return static_cast<int>(coefficients_.size()) - 1; }
  bool is_zero() const noexcept;
  const std::vector<double>& coefficients() const noexcept { return coefficients_; }

 private:
  std::vector<double> coefficients_;
};

class Nonlinearity {
 public:
  enum class Kind { zero, cubic, hartree };

  static Nonlinearity zero() { return Nonlinearity(Kind::zero, 0.0, {}); }
  static Nonlinearity cubic(double lambda) { return Nonlinearity(Kind::cubic, lambda, {}); }
  static Nonlinearity hartree(PairPotential potential) {
    return Nonlinearity(Kind::hartree, 0.0, std::move(potential));
  }

  Kind kind() const noexcept { return kind_; }
  double coupling() const noexcept { return coupling_; }
  // Cubic is the constant potential lambda on every lag the space can produce.
  PairPotential potential(const ModelSpace& space) const;

  // c_j = sum_p u_p conj(u_{p-j}),  g_k = sum_j V_j c_j u_{k-j}, truncated to retained modes.
  StateVector apply(const ModelSpace& space, const StateVector& u) const;

  std::string describe() const;

 private:
  Nonlinearity(Kind kind, double coupling, PairPotential potential)
      : kind_(kind), coupling_(coupling), potential_(std::move(potential)) {}

  Kind kind_;
  double coupling_;
  PairPotential potential_;
};

// sum_k omega_k |u_k|^2 + 1/2 sum_j V_j |c_j|^2, conserved by the truncated flow.
double hamiltonian(const ModelSpace& space, const Nonlinearity& g, const StateVector& u);

// sqrt(|u|^2 + H(u)): bounds the Z_1 norm along the flow when every V_j >= 0.
// Throws ContractViolation for a potential with a negative coefficient.
double energy_radius(const ModelSpace& space, const Nonlinearity& g, const StateVector& u);

// Time-dependent field x' = v(t, x).
class VectorField {
 public:
  using Function = std::function<StateVector(double, const StateVector&)>;

  VectorField(std::string name, Function f, bool conserves_mass)
      : name_(std::move(name)), f_(std::move(f)), conserves_mass_(conserves_mass) {}

  // v(t,x) = -i U(-t) g(U(t) x)
  static VectorField interaction_picture(const ModelSpace& space, const Nonlinearity& g);
  static VectorField zero();
  // v(t,x) = i x
  static VectorField phase_generator();

  StateVector operator()(double t, const StateVector& x) const { return f_(t, x); }
  const std::string& name() const noexcept { return name_; }
  bool conserves_mass() const noexcept { return conserves_mass_; }

 private:
  std::string name_;
  Function f_;
  bool conserves_mass_;
};

// max over a few phases of ||v(t, e^{i th} x) - e^{i th} v(t, x)||
double equivariance_defect(const VectorField& vf, double t, const StateVector& x);

struct FlowResult {
  std::vector<double> times;
  std::vector<StateVector> states;
  double step = 0;
  double mass_drift = 0;
  double duhamel_residual = 0;
};

// Fixed-step RK4 on ceil((t1-t0)/dt) equal steps. Throws IntegratorAccuracyError when a
// mass-conserving field drifts by more than mass_tolerance.
FlowResult flow(const StateVector& x0, double t0, double t1, const VectorField& vf, double dt,
                double mass_tolerance = 1e-6);

// Physical-picture solution U(t) x(t) of i u' = -u'' + g(u) from the interaction-picture flow.
StateVector physical_solution(const ModelSpace& space, const Nonlinearity& g,
                              const StateVector& u0, double t1, double dt);

}  // namespace hierlab
