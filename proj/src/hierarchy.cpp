#include "hierlab/hierarchy.hpp"

#include <algorithm>
#include <cmath>

#include "hierlab/errors.hpp"
#include "hierlab/quadrature.hpp"

namespace hierlab {

HierarchyTrajectory lift_trajectory(std::span<const double> times,
                                    std::span<const AtomicMeasure> measures, int max_order,
                                    double radius_bound) {
  if (times.size() != measures.size()) throw ContractViolation("one measure per grid time");
  HierarchyTrajectory h;
  h.times.assign(times.begin(), times.end());
  h.measures.assign(measures.begin(), measures.end());
  h.radius_bound = radius_bound;
  h.hierarchies.reserve(measures.size());
  for (const auto& mu : measures) h.hierarchies.push_back(phi(mu, max_order));
  return h;
}

namespace {
void check_slot(int j, int k) {
  if (k < 1 || j < 1 || j > k) throw ContractViolation("slot index j must satisfy 1 <= j <= k");
}
}  // namespace

SymOperator c_plus(const AtomicMeasure& mu, double t, int j, int k, const VectorField& vf) {
  check_slot(j, k);
  const int dim = occupation_basis(mu.dim(), k).size();
  Eigen::MatrixXcd c = Eigen::MatrixXcd::Zero(dim, dim);
  for (const auto& a : mu.atoms()) {
    const Eigen::VectorXcd ket = pure_tensor(a.point, k, kHardMaxOrder);
    const Eigen::VectorXcd bra = symmetric_insertion(a.point, vf(t, a.point), k);
    c.noalias() += a.weight * (ket * bra.adjoint());
  }
  return SymOperator{k, std::move(c), false};
}

SymOperator c_minus(const AtomicMeasure& mu, double t, int j, int k, const VectorField& vf) {
  SymOperator c = c_plus(mu, t, j, k, vf);
  c.matrix.adjointInPlace();
  return c;
}

Eigen::MatrixXcd c_plus_full(const AtomicMeasure& mu, double t, int j, int k,
                             const VectorField& vf) {
  check_slot(j, k);
  const auto n = full_tensor::power(mu.dim(), k);
  Eigen::MatrixXcd c = Eigen::MatrixXcd::Zero(n, n);
  for (const auto& a : mu.atoms()) {
    std::vector<StateVector> factors(static_cast<std::size_t>(k), a.point);
    factors[static_cast<std::size_t>(j - 1)] = vf(t, a.point);
    const Eigen::VectorXcd bra = full_tensor::product(factors);
    const Eigen::VectorXcd ket = full_tensor::tensor_power(a.point, k);
    c.noalias() += a.weight * (ket * bra.adjoint());
  }
  return c;
}

Eigen::MatrixXcd hierarchy_generator(const AtomicMeasure& mu, double t, int k,
                                     const VectorField& vf) {
  const Eigen::MatrixXcd c = c_plus(mu, t, 1, k, vf).matrix;
  return static_cast<double>(k) * (c + c.adjoint());
}

ResidualCurve hierarchy_residual(const HierarchyTrajectory& traj, const ModelSpace& space,
                                 const VectorField& vf, int k) {
  const double h = uniform_step(traj.times);
  if (traj.hierarchies.empty() || k > traj.hierarchies.front().max_order())
    throw ContractViolation("hierarchy level k exceeds K_max");
  const std::size_t n = traj.times.size();
  std::vector<Eigen::MatrixXcd> rates;
  rates.reserve(n);
  for (std::size_t i = 0; i < n; ++i)
    rates.push_back(hierarchy_generator(traj.measures[i], traj.times[i], k, vf));
  const int dim = static_cast<int>(rates.front().rows());
  const auto integral =
      cumulative_integral<Eigen::MatrixXcd>(rates, h, Eigen::MatrixXcd::Zero(dim, dim));
  const Eigen::VectorXd w = occupation_weights(space, k, -space.sigma());
  const Eigen::MatrixXcd& g0 = traj.hierarchies.front().level(k).matrix;
  ResidualCurve curve;
  curve.times = traj.times;
  curve.values.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const Eigen::MatrixXcd defect = traj.hierarchies[i].level(k).matrix - g0 - integral[i];
    const double r = hermitian_trace_norm(w.asDiagonal() * defect * w.asDiagonal());
    curve.values.push_back(r);
    curve.max = std::max(curve.max, r);
  }
  return curve;
}

namespace {

// V(x_j - x_{k+1}) on the full (k+1)-fold tensor power: e_p (x) e_q -> sum_r V_r e_{p+r} (x) e_{q-r}.
Eigen::MatrixXcd pair_multiplication(const ModelSpace& space, const PairPotential& v, int j,
                                     int order) {
  const int m = space.dim();
  const auto n = full_tensor::power(m, order);
  Eigen::MatrixXcd op = Eigen::MatrixXcd::Zero(n, n);
  const int max_lag = 2 * space.max_abs_label();
  std::vector<long long> stride(static_cast<std::size_t>(order));
  long long s = 1;
  for (int i = order - 1; i >= 0; --i) {
    stride[static_cast<std::size_t>(i)] = s;
    s *= m;
  }
  const long long sj = stride[static_cast<std::size_t>(j - 1)];
  const long long sl = stride[static_cast<std::size_t>(order - 1)];
  for (long long col = 0; col < n; ++col) {
    const int dj = static_cast<int>((col / sj) % m);
    const int dl = static_cast<int>((col / sl) % m);
    for (int r = -max_lag; r <= max_lag; ++r) {
      const double vr = v.at(r);
      if (vr == 0.0) continue;
      const int pj = space.index_of(space.label(dj) + r);
      const int pl = space.index_of(space.label(dl) - r);
      if (pj < 0 || pl < 0) continue;
      const long long row = col + (pj - dj) * sj + (pl - dl) * sl;
      op(row, col) += vr;
    }
  }
  return op;
}

}  // namespace

KernelCorrespondence kernel_correspondence_check(const AtomicMeasure& mu,
                                                 const ModelSpace& space,
                                                 const PairPotential& potential, int j, int k) {
  check_slot(j, k);
  if (mu.dim() != space.dim()) throw ContractViolation("measure and model space differ");
  const int m = space.dim();
  const Hierarchy gamma = phi(mu, k + 1);
  const Eigen::MatrixXcd gamma_full = full_tensor::embed(gamma.level(k + 1).matrix, m, k + 1);
  const Eigen::MatrixXcd kernel_side = full_tensor::partial_trace_last(
      pair_multiplication(space, potential, j, k + 1) * gamma_full, m, k + 1);

  const Nonlinearity g = Nonlinearity::hartree(potential);
  const VectorField minus_i_g(
      "-i g", [space, g](double, const StateVector& x) -> StateVector {
        return Complex(0.0, -1.0) * g.apply(space, x);
      },
      true);
  const Eigen::MatrixXcd cp = c_plus_full(mu, 0.0, j, k, minus_i_g);
  const Eigen::MatrixXcd hierarchy_side = Complex(0.0, 1.0) * cp.adjoint();
  const Eigen::MatrixXcd reversed = Complex(0.0, -1.0) * cp;

  KernelCorrespondence out;
  out.defect = trace_norm(kernel_side - hierarchy_side);
  out.reversed_order_defect = trace_norm(kernel_side - reversed);
  return out;
}

A1Report a1_check(const HierarchyTrajectory& traj, const ModelSpace& space, double s, double R) {
  if (!(R > 0.0)) throw ContractViolation("A1 radius must be positive");
  A1Report r;
  for (const auto& h : traj.hierarchies)
    for (int k = 1; k <= h.max_order(); ++k) {
      const double norm = weighted_trace_norm(h.level(k), space, s);
      r.worst_ratio = std::max(r.worst_ratio, std::pow(norm, 1.0 / (2.0 * k)) / R);
    }
  for (const auto& mu : traj.measures)
    for (const auto& a : mu.atoms())
      r.worst_atom_ratio = std::max(r.worst_atom_ratio, space.scale_norm(a.point, s) / R);
  r.holds = r.worst_ratio <= 1.0 + 1e-9;
  r.atoms_hold = r.worst_atom_ratio <= 1.0 + 1e-9;
  r.consistent = r.holds == r.atoms_hold;
  return r;
}

std::uint64_t binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  k = std::min(k, n - k);
  std::uint64_t c = 1;
  for (int i = 1; i <= k; ++i) c = c * static_cast<std::uint64_t>(n - k + i) / static_cast<std::uint64_t>(i);
  return c;
}

std::pair<std::uint64_t, std::uint64_t> central_binomial_identity(int k) {
  const auto kk = static_cast<std::uint64_t>(k);
  return {2 * kk * binomial(2 * k - 1, k), kk * binomial(2 * k, k)};
}

}  // namespace hierlab
