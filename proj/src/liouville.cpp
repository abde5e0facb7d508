#include "hierlab/liouville.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "hierlab/errors.hpp"
#include "hierlab/quadrature.hpp"
#include "hierlab/rng.hpp"

namespace hierlab {

namespace {
constexpr double kPi = std::numbers::pi;
constexpr double kSliceSlack = 1e-6;  // mass drift allowed when slicing the flow into measures
}  // namespace

Transport liouville_from_flow(const AtomicMeasure& mu0, const VectorField& vf, double t0,
                              double t1, double dt) {
  Transport out;
  std::vector<FlowResult> flows;
  flows.reserve(static_cast<std::size_t>(mu0.size()));
  for (const auto& a : mu0.atoms()) flows.push_back(flow(a.point, t0, t1, vf, dt));
  const auto& times = flows.front().times;
  out.paths.times = times;
  for (int i = 0; i < mu0.size(); ++i) {
    const auto& a = mu0.atoms()[static_cast<std::size_t>(i)];
    out.paths.paths.push_back(Path{a.weight, a.point, flows[static_cast<std::size_t>(i)].states});
  }
  out.trajectory.times = times;
  out.trajectory.generated_by = "rk4:" + vf.name();
  out.trajectory.measures.reserve(times.size());
  for (std::size_t n = 0; n < times.size(); ++n) {
    std::vector<Atom> atoms;
    for (int i = 0; i < mu0.size(); ++i)
      atoms.push_back(Atom{mu0.atoms()[static_cast<std::size_t>(i)].weight,
                           flows[static_cast<std::size_t>(i)].states[n]});
    out.trajectory.measures.emplace_back(std::move(atoms), mu0.radius() + kSliceSlack);
  }
  return out;
}

namespace {

std::vector<Complex> gauge_phases(int nodes) {
  std::vector<Complex> p;
  for (int j = 0; j < nodes; ++j) p.push_back(std::polar(1.0, 2.0 * kPi * j / nodes));
  return p;
}

}  // namespace

ResidualCurve characteristic_residual(const MeasureTrajectory& traj, const VectorField& vf,
                                      const StateVector& y, int gauge_nodes) {
  const double h = uniform_step(traj.times);
  const auto phases = gauge_phases(gauge_nodes);
  const std::size_t n = traj.times.size();
  std::vector<Complex> values(n);
  std::vector<Complex> rates(n);
  for (std::size_t i = 0; i < n; ++i) {
    Complex value = 0.0;
    Complex rate = 0.0;
    for (const auto& a : traj.measures[i].atoms()) {
      const Complex pairing = y.dot(a.point);
      const Complex velocity_pairing = vf(traj.times[i], a.point).dot(y);
      Complex orbit_value = 0.0;
      Complex orbit_rate = 0.0;
      for (const auto& ph : phases) {
        // <y, e^{i th} x> = e^{i th} <y, x>;  <e^{i th} v, y> = conj(e^{i th}) <v, y>
        const Complex e = std::polar(1.0, 2.0 * kPi * (ph * pairing).real());
        orbit_value += e;
        orbit_rate += e * (std::conj(ph) * velocity_pairing).real();
      }
      value += a.weight * orbit_value / static_cast<double>(gauge_nodes);
      rate += a.weight * orbit_rate / static_cast<double>(gauge_nodes);
    }
    values[i] = value;
    rates[i] = Complex(0.0, 2.0 * kPi) * rate;
  }
  const auto integral = cumulative_integral<Complex>(rates, h, Complex(0.0));
  ResidualCurve curve;
  curve.times = traj.times;
  for (std::size_t i = 0; i < n; ++i) {
    const double r = std::abs(values[i] - values[0] - integral[i]);
    curve.values.push_back(r);
    curve.max = std::max(curve.max, r);
  }
  return curve;
}

namespace {

double smooth_exp(double s) { return s > 0.0 ? std::exp(-1.0 / s) : 0.0; }
double smooth_exp_derivative(double s) { return s > 0.0 ? std::exp(-1.0 / s) / (s * s) : 0.0; }

// 1 on |u| <= 1/2, 0 on |u| >= 1.
double bump(double u) {
  const double s = 2.0 * std::abs(u) - 1.0;
  if (s <= 0.0) return 1.0;
  if (s >= 1.0) return 0.0;
  const double a = smooth_exp(1.0 - s);
  const double b = smooth_exp(s);
  return a / (a + b);
}

double bump_derivative(double u) {
  const double s = 2.0 * std::abs(u) - 1.0;
  if (s <= 0.0 || s >= 1.0) return 0.0;
  const double a = smooth_exp(1.0 - s);
  const double b = smooth_exp(s);
  const double da = -smooth_exp_derivative(1.0 - s);
  const double db = smooth_exp_derivative(s);
  const double ds = (da * b - a * db) / ((a + b) * (a + b));
  return ds * 2.0 * (u >= 0.0 ? 1.0 : -1.0);
}

double scale_pairing(const ModelSpace& space, const StateVector& z, const StateVector& x) {
  Complex sum = 0.0;
  for (int i = 0; i < space.dim(); ++i)
    sum += std::pow(space.weight(i), -space.sigma()) * std::conj(z(i)) * x(i);
  return sum.real();
}

struct ProfileValue {
  double value;
  double derivative;
};

ProfileValue direction_profile(const CylindricalTest::Direction& d, double r) {
  const double arg = 2.0 * kPi * d.frequency * r;
  const double trig = d.use_sine ? std::sin(arg) : std::cos(arg);
  const double dtrig = 2.0 * kPi * d.frequency * (d.use_sine ? std::cos(arg) : -std::sin(arg));
  const double b = bump(r / d.scale);
  const double db = bump_derivative(r / d.scale) / d.scale;
  return {trig * b, dtrig * b + trig * db};
}

}  // namespace

CylindricalTest::CylindricalTest(std::vector<Direction> directions, double window_start,
                                 double window_end)
    : directions_(std::move(directions)), window_start_(window_start), window_end_(window_end) {
  if (directions_.empty()) throw ContractViolation("cylindrical test needs a direction");
  if (!(window_end_ > window_start_)) throw ContractViolation("empty time window");
}

double CylindricalTest::window(double t) const {
  const double u = (2.0 * t - window_start_ - window_end_) / (window_end_ - window_start_);
  if (std::abs(u) >= 1.0) return 0.0;
  return std::exp(-1.0 / (1.0 - u * u));
}

double CylindricalTest::window_derivative(double t) const {
  const double u = (2.0 * t - window_start_ - window_end_) / (window_end_ - window_start_);
  if (std::abs(u) >= 1.0) return 0.0;
  const double q = 1.0 - u * u;
  return std::exp(-1.0 / q) * (-2.0 * u / (q * q)) * (2.0 / (window_end_ - window_start_));
}

double CylindricalTest::profile(const ModelSpace& space, const StateVector& x) const {
  double p = 1.0;
  for (const auto& d : directions_) p *= direction_profile(d, scale_pairing(space, d.z, x)).value;
  return p;
}

double CylindricalTest::value(double t, const ModelSpace& space, const StateVector& x) const {
  return window(t) * profile(space, x);
}

double CylindricalTest::time_derivative(double t, const ModelSpace& space,
                                        const StateVector& x) const {
  return window_derivative(t) * profile(space, x);
}

double CylindricalTest::directional_derivative(double t, const ModelSpace& space,
                                               const StateVector& x,
                                               const StateVector& v) const {
  const double chi = window(t);
  if (chi == 0.0) return 0.0;
  std::vector<ProfileValue> parts;
  for (const auto& d : directions_) parts.push_back(direction_profile(d, scale_pairing(space, d.z, x)));
  double sum = 0.0;
  for (std::size_t l = 0; l < directions_.size(); ++l) {
    double term = parts[l].derivative * scale_pairing(space, directions_[l].z, v);
    for (std::size_t m = 0; m < directions_.size(); ++m)
      if (m != l) term *= parts[m].value;
    sum += term;
  }
  return chi * sum;
}

double weak_form_residual(const MeasureTrajectory& traj, const ModelSpace& space,
                          const VectorField& vf, const CylindricalTest& test) {
  const double h = uniform_step(traj.times);
  if (test.window_start() < traj.times.front() || test.window_end() > traj.times.back())
    throw ContractViolation("test window outside the time grid");
  const auto phases = gauge_phases(kDefaultGaugeNodes);
  std::vector<double> integrand(traj.times.size(), 0.0);
  for (std::size_t i = 0; i < traj.times.size(); ++i) {
    const double t = traj.times[i];
    double sum = 0.0;
    for (const auto& a : traj.measures[i].atoms()) {
      const StateVector v = vf(t, a.point);
      double orbit = 0.0;
      for (const auto& ph : phases) {
        const StateVector x = ph * a.point;
        orbit += test.time_derivative(t, space, x) +
                 test.directional_derivative(t, space, x, ph * v);
      }
      sum += a.weight * orbit / static_cast<double>(phases.size());
    }
    integrand[i] = sum;
  }
  return std::abs(cumulative_integral<double>(integrand, h, 0.0).back());
}

TestBattery make_test_battery(const ModelSpace& space, double t0, double t1, std::uint64_t seed) {
  TestBattery b;
  const int m = space.dim();
  for (int i = 0; i < std::min(m, 16); ++i) b.vectors.push_back(space.basis_vector(i));
  Rng vectors(seed, 1);
  while (b.vectors.size() < 16) {
    StateVector g(m);
    for (int i = 0; i < m; ++i) g(i) = vectors.complex_normal();
    const double radius = vectors.uniform(0.25, 1.0);
    for (int i = 0; i < m; ++i) g(i) *= std::pow(space.weight(i), -0.5 * space.sigma());
    b.vectors.push_back(g * (radius / space.scale_norm(g, space.sigma())));
  }
  Rng tests(seed, 2);
  const double span = t1 - t0;
  for (int c = 0; c < 8; ++c) {
    std::vector<CylindricalTest::Direction> dirs;
    for (int l = 0; l < 1 + c % 2; ++l) {
      StateVector z(m);
      for (int i = 0; i < m; ++i) z(i) = tests.complex_normal();
      for (int i = 0; i < m; ++i) z(i) *= std::pow(space.weight(i), 0.5 * space.sigma());
      z /= space.scale_norm(z, -space.sigma());
      CylindricalTest::Direction d;
      d.z = std::move(z);
      d.frequency = tests.uniform(0.5, 2.0);
      d.scale = tests.uniform(0.6, 1.5);
      d.use_sine = (c / 2) % 2 == 1;
      dirs.push_back(std::move(d));
    }
    const double start = t0 + span * tests.uniform(0.05, 0.2);
    const double end = t1 - span * tests.uniform(0.05, 0.2);
    b.cylinders.emplace_back(std::move(dirs), start, end);
  }
  return b;
}

DualityReport duality_check(const MeasureTrajectory& traj, const ModelSpace& space,
                            const VectorField& vf, int max_order, const TestBattery& battery,
                            double tolerance) {
  DualityReport r;
  r.tolerance = tolerance;
  const double radius = traj.measures.front().radius();
  const HierarchyTrajectory htraj = lift_trajectory(traj.times, traj.measures, max_order, radius);
  for (int k = 1; k <= max_order; ++k) {
    r.hierarchy.push_back(hierarchy_residual(htraj, space, vf, k));
    r.hierarchy_max = std::max(r.hierarchy_max, r.hierarchy.back().max);
  }
  for (const auto& y : battery.vectors) {
    r.characteristic.push_back(characteristic_residual(traj, vf, y));
    r.characteristic_max = std::max(r.characteristic_max, r.characteristic.back().max);
  }
  for (const auto& test : battery.cylinders) {
    r.weak_form.push_back(weak_form_residual(traj, space, vf, test));
    r.weak_form_max = std::max(r.weak_form_max, r.weak_form.back());
  }
  r.hierarchy_small = r.hierarchy_max <= tolerance;
  r.characteristic_small = r.characteristic_max <= tolerance;
  r.pass = r.hierarchy_small == r.characteristic_small;
  return r;
}

MeasureTrajectory corrupt_trajectory(const MeasureTrajectory& traj, std::size_t time_index,
                                     std::size_t atom_index, const StateVector& replacement) {
  if (time_index >= traj.times.size()) throw ContractViolation("corruption time outside grid");
  MeasureTrajectory out = traj;
  const AtomicMeasure& mu = traj.measures[time_index];
  if (atom_index >= static_cast<std::size_t>(mu.size()))
    throw ContractViolation("corruption atom index out of range");
  std::vector<Atom> atoms(mu.atoms().begin(), mu.atoms().end());
  atoms[atom_index].point = replacement;
  out.measures[time_index] = AtomicMeasure(std::move(atoms), mu.radius());
  out.generated_by = traj.generated_by + "+corrupted";
  return out;
}

UniquenessReport uniqueness_experiment(const AtomicMeasure& a, const AtomicMeasure& b,
                                       const VectorField& vf, double t0, double t1, double dt,
                                       int max_order, std::span<const StateVector> probes,
                                       double tolerance) {
  UniquenessReport r;
  const Hierarchy ga = phi(a, max_order);
  const Hierarchy gb = phi(b, max_order);
  for (int k = 1; k <= max_order; ++k) {
    const double d = hermitian_trace_norm(ga.level(k).matrix - gb.level(k).matrix);
    if (d > tolerance) {
      r.discriminating_order = k;
      r.initial_defect = d;
      for (const auto& y : probes)
        r.discriminating_moment = std::max(r.discriminating_moment,
                                           std::abs(moment(a, y, k) - moment(b, y, k)));
      return r;
    }
  }
  r.precondition_holds = true;
  const Transport ta = liouville_from_flow(a, vf, t0, t1, dt);
  const Transport tb = liouville_from_flow(b, vf, t0, t1, dt);
  for (std::size_t i = 0; i < ta.trajectory.times.size(); ++i) {
    r.max_defect = std::max(r.max_defect, hierarchy_distance(phi(ta.trajectory.measures[i], max_order),
                                                             phi(tb.trajectory.measures[i], max_order)));
  }
  r.pass = r.max_defect <= tolerance;
  return r;
}

}  // namespace hierlab
