#include "hierlab/dynamics.hpp"

#include <cmath>
#include <sstream>

#include "hierlab/errors.hpp"
#include "hierlab/quadrature.hpp"

namespace hierlab {

PairPotential PairPotential::from_symmetric(const std::vector<double>& lags) {
  if (lags.size() % 2 == 0) throw ContractViolation("symmetric lag list must have odd length");
  const int max_lag = static_cast<int>(lags.size() / 2);
  std::vector<double> by_abs(static_cast<std::size_t>(max_lag + 1));
  for (int j = 0; j <= max_lag; ++j) {
    const double plus = lags[static_cast<std::size_t>(max_lag + j)];
    const double minus = lags[static_cast<std::size_t>(max_lag - j)];
    if (plus != minus) throw ContractViolation("pair potential coefficients must be even");
    by_abs[static_cast<std::size_t>(j)] = plus;
  }
  return PairPotential(std::move(by_abs));
}

PairPotential PairPotential::constant(double value, int max_lag) {
  return PairPotential(std::vector<double>(static_cast<std::size_t>(max_lag + 1), value));
}

double PairPotential::at(int lag) const noexcept {
  const auto a = static_cast<std::size_t>(std::abs(lag));
  return a < coefficients_.size() ? coefficients_[a] : 0.0;
}

bool PairPotential::is_zero() const noexcept {
  for (double c : coefficients_)
    if (c != 0.0) return false;
  return true;
}

PairPotential Nonlinearity::potential(const ModelSpace& space) const {
  switch (kind_) {
    case Kind::zero: return PairPotential();
    case Kind::cubic: return PairPotential::constant(coupling_, 2 * space.max_abs_label());
    case Kind::hartree: return potential_;
  }
  return PairPotential();
}

StateVector Nonlinearity::apply(const ModelSpace& space, const StateVector& u) const {
  const int m = space.dim();
  StateVector g = StateVector::Zero(m);
  if (kind_ == Kind::zero) return g;
  const PairPotential v = potential(space);
  const int max_lag = 2 * space.max_abs_label();
  for (int lag = -max_lag; lag <= max_lag; ++lag) {
    const double vj = v.at(lag);
    if (vj == 0.0) continue;
    Complex density = 0.0;
    for (int p = 0; p < m; ++p) {
      const int q = space.index_of(space.label(p) - lag);
      if (q >= 0) density += u(p) * std::conj(u(q));
    }
    if (density == 0.0) continue;
    for (int k = 0; k < m; ++k) {
      const int src = space.index_of(space.label(k) - lag);
      if (src >= 0) g(k) += vj * density * u(src);
    }
  }
  return g;
}

double hamiltonian(const ModelSpace& space, const Nonlinearity& g, const StateVector& u) {
  const int m = space.dim();
  double kinetic = 0.0;
  for (int k = 0; k < m; ++k) kinetic += space.frequencies()(k) * std::norm(u(k));
  if (g.kind() == Nonlinearity::Kind::zero) return kinetic;
  const PairPotential v = g.potential(space);
  const int max_lag = 2 * space.max_abs_label();
  double interaction = 0.0;
  for (int lag = -max_lag; lag <= max_lag; ++lag) {
    Complex density = 0.0;
    for (int p = 0; p < m; ++p) {
      const int q = space.index_of(space.label(p) - lag);
      if (q >= 0) density += u(p) * std::conj(u(q));
    }
    interaction += v.at(lag) * std::norm(density);
  }
  return kinetic + 0.5 * interaction;
}

double energy_radius(const ModelSpace& space, const Nonlinearity& g, const StateVector& u) {
  for (int lag = 0; lag <= 2 * space.max_abs_label(); ++lag)
    if (g.potential(space).at(lag) < 0.0)
      throw ContractViolation("energy radius needs a nonnegative potential");
  return std::sqrt(u.squaredNorm() + hamiltonian(space, g, u));
}

std::string Nonlinearity::describe() const {
  std::ostringstream os;
  switch (kind_) {
    case Kind::zero: os << "zero"; break;
    case Kind::cubic: os << "cubic(lambda=" << coupling_ << ")"; break;
    case Kind::hartree: {
      os << "hartree(Vhat=";
      for (std::size_t i = 0; i < potential_.coefficients().size(); ++i)
        os << (i ? "," : "") << potential_.coefficients()[i];
      os << ")";
      break;
    }
  }
  return os.str();
}

VectorField VectorField::interaction_picture(const ModelSpace& space, const Nonlinearity& g) {
  return VectorField(
      "interaction:" + g.describe(),
      [space, g](double t, const StateVector& x) -> StateVector {
        const StateVector u = space.propagate(x, t);
        return Complex(0.0, -1.0) * space.propagate(g.apply(space, u), -t);
      },
      true);
}

VectorField VectorField::zero() {
  return VectorField(
      "zero", [](double, const StateVector& x) -> StateVector { return StateVector::Zero(x.size()); },
      true);
}

VectorField VectorField::phase_generator() {
  return VectorField(
      "phase", [](double, const StateVector& x) -> StateVector { return Complex(0.0, 1.0) * x; },
      true);
}

double equivariance_defect(const VectorField& vf, double t, const StateVector& x) {
  const StateVector base = vf(t, x);
  double worst = 0.0;
  for (double th : {0.4, 1.9, -2.6}) {
    const Complex phase = std::polar(1.0, th);
    worst = std::max(worst, (vf(t, phase * x) - phase * base).norm());
  }
  return worst;
}

FlowResult flow(const StateVector& x0, double t0, double t1, const VectorField& vf, double dt,
                double mass_tolerance) {
  if (!(dt > 0.0) || !(t1 > t0)) throw ContractViolation("flow needs t1 > t0 and dt > 0");
  if (dt > (t1 - t0) * (1.0 + 1e-12)) throw ContractViolation("flow step exceeds the interval");
  const auto steps = static_cast<std::size_t>(std::ceil((t1 - t0) / dt - 1e-9));
  const double h = (t1 - t0) / static_cast<double>(steps);
  FlowResult r;
  r.step = h;
  r.times.reserve(steps + 1);
  r.states.reserve(steps + 1);
  r.times.push_back(t0);
  r.states.push_back(x0);
  StateVector x = x0;
  for (std::size_t n = 0; n < steps; ++n) {
    const double t = t0 + h * static_cast<double>(n);
    const StateVector k1 = vf(t, x);
    const StateVector k2 = vf(t + 0.5 * h, x + (0.5 * h) * k1);
    const StateVector k3 = vf(t + 0.5 * h, x + (0.5 * h) * k2);
    const StateVector k4 = vf(t + h, x + h * k3);
    x += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    r.times.push_back(t0 + h * static_cast<double>(n + 1));
    r.states.push_back(x);
  }
  const double m0 = x0.norm();
  for (const auto& s : r.states) r.mass_drift = std::max(r.mass_drift, std::abs(s.norm() - m0));
  if (vf.conserves_mass() && r.mass_drift > mass_tolerance) {
    std::ostringstream os;
    os << "mass drift " << r.mass_drift << " exceeds " << mass_tolerance << "; reduce dt";
    throw IntegratorAccuracyError(os.str());
  }
  std::vector<StateVector> rates;
  rates.reserve(r.states.size());
  for (std::size_t i = 0; i < r.states.size(); ++i) rates.push_back(vf(r.times[i], r.states[i]));
  if (rates.size() >= 2) {
    const auto integral = cumulative_integral<StateVector>(
        rates, h, StateVector::Zero(x0.size()));
    r.duhamel_residual = (r.states.back() - x0 - integral.back()).norm();
  }
  return r;
}

StateVector physical_solution(const ModelSpace& space, const Nonlinearity& g,
                              const StateVector& u0, double t1, double dt) {
  if (t1 == 0.0) return u0;
  const FlowResult r = flow(u0, 0.0, t1, VectorField::interaction_picture(space, g), dt);
  return space.propagate(r.states.back(), t1);
}

}  // namespace hierlab
