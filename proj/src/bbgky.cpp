#include "hierlab/bbgky.hpp"

#include <chrono>
#include <cmath>

#include "hierlab/errors.hpp"

namespace hierlab {

namespace {

double factorial(int n) {
  double f = 1.0;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

const OccupationBasis& sector(int modes, int particles, int capacity) {
  // Dimension C(m+n-1, n) computed before the basis is built.
  double dim = 1.0;
  for (int i = 1; i <= particles; ++i) dim = dim * (modes - 1 + i) / i;
  if (dim > capacity + 0.5)
    throw CapacityError("sector dimension " + std::to_string(static_cast<long long>(dim + 0.5)) +
                        " exceeds capacity " + std::to_string(capacity));
  return occupation_basis(modes, particles);
}

}  // namespace

Eigen::MatrixXcd pair_interaction(const ModelSpace& space, const PairPotential& w, int order) {
  const int m = space.dim();
  const auto& basis = occupation_basis(m, order);
  Eigen::MatrixXcd op = Eigen::MatrixXcd::Zero(basis.size(), basis.size());
  if (order < 2 || w.is_zero()) return op;
  const int max_lag = 2 * space.max_abs_label();
  std::vector<int> occ(static_cast<std::size_t>(m));
  for (int c = 0; c < basis.size(); ++c) {
    const auto alpha = basis.occupation(c);
    for (int k = 0; k < m; ++k) {
      std::copy(alpha.begin(), alpha.end(), occ.begin());
      if (occ[k] == 0) continue;
      const double a1 = std::sqrt(static_cast<double>(occ[k]));
      --occ[k];
      for (int p = 0; p < m; ++p) {
        if (occ[p] == 0) continue;
        const double a2 = a1 * std::sqrt(static_cast<double>(occ[p]));
        --occ[p];
        for (int q = -max_lag; q <= max_lag; ++q) {
          const double wq = w.at(q);
          if (wq == 0.0) continue;
          const int kq = space.index_of(space.label(k) + q);
          const int pq = space.index_of(space.label(p) - q);
          if (kq < 0 || pq < 0) continue;
          const double a3 = a2 * std::sqrt(occ[pq] + 1.0);
          ++occ[pq];
          const double a4 = a3 * std::sqrt(occ[kq] + 1.0);
          ++occ[kq];
          op(basis.index_of(occ), c) += 0.5 * wq * a4;
          --occ[kq];
          --occ[pq];
        }
        ++occ[p];
      }
    }
  }
  return op;
}

Eigen::VectorXd free_energies(const ModelSpace& space, int order) {
  const auto& basis = occupation_basis(space.dim(), order);
  Eigen::VectorXd e(basis.size());
  for (int i = 0; i < basis.size(); ++i) {
    const auto alpha = basis.occupation(i);
    double sum = 0.0;
    for (int j = 0; j < space.dim(); ++j) sum += alpha[static_cast<std::size_t>(j)] * space.frequency(j);
    e(i) = sum;
  }
  return e;
}

NBodyState product_state(const StateVector& phi, int particles) {
  const int m = static_cast<int>(phi.size());
  const auto& basis = occupation_basis(m, particles);
  NBodyState s{particles, Eigen::VectorXcd(basis.size())};
  for (int i = 0; i < basis.size(); ++i) {
    const auto alpha = basis.occupation(i);
    Complex c = basis.multinomial_root(i);
    for (int j = 0; j < m; ++j)
      for (int p = 0; p < alpha[static_cast<std::size_t>(j)]; ++p) c *= phi(j);
    s.amplitudes(i) = c;
  }
  return s;
}

NBodyHamiltonian::NBodyHamiltonian(const ModelSpace& space, PairPotential w, int particles,
                                   int capacity)
    : space_(space), potential_(std::move(w)), particles_(particles) {
  if (particles < 1) throw ContractViolation("particle number must be positive");
  sector(space.dim(), particles, capacity);
  matrix_ = pair_interaction(space_, potential_, particles) / static_cast<double>(particles);
  matrix_.diagonal() += free_energies(space_, particles).cast<Complex>();
  const double asym = (matrix_ - matrix_.adjoint()).norm();
  if (asym > 1e-12 * std::max(1.0, matrix_.norm()))
    throw ContractViolation("assembled Hamiltonian is not Hermitian");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(matrix_);
  eigenvalues_ = es.eigenvalues();
  eigenvectors_ = es.eigenvectors();
}

NBodyState NBodyHamiltonian::evolve(const NBodyState& state, double t) const {
  if (state.particles != particles_) throw ContractViolation("state and Hamiltonian sectors differ");
  Eigen::VectorXcd c = eigenvectors_.adjoint() * state.amplitudes;
  for (Eigen::Index i = 0; i < c.size(); ++i) c(i) *= std::polar(1.0, -t * eigenvalues_(i));
  return NBodyState{particles_, eigenvectors_ * c};
}

double NBodyHamiltonian::energy(const NBodyState& state) const {
  return state.amplitudes.dot(matrix_ * state.amplitudes).real();
}

SymOperator marginal(const NBodyState& state, int modes, int k) {
  const int n = state.particles;
  if (k < 1 || k > n) throw ContractViolation("marginal order must satisfy 1 <= k <= n");
  const auto& big = occupation_basis(modes, n);
  const auto& small = occupation_basis(modes, k);
  const auto& rest = occupation_basis(modes, n - k);
  Eigen::MatrixXcd reduced(rest.size(), small.size());
  reduced.setZero();
  std::vector<int> diff(static_cast<std::size_t>(modes));
  for (int a = 0; a < small.size(); ++a) {
    const auto alpha = small.occupation(a);
    for (int b = 0; b < big.size(); ++b) {
      const auto beta = big.occupation(b);
      double amp = 1.0;
      bool ok = true;
      for (int j = 0; j < modes && ok; ++j) {
        const auto jj = static_cast<std::size_t>(j);
        if (beta[jj] < alpha[jj]) {
          ok = false;
        } else {
          diff[jj] = beta[jj] - alpha[jj];
          amp *= std::sqrt(factorial(beta[jj]) / factorial(diff[jj]));
        }
      }
      if (ok) reduced(rest.index_of(diff), a) += amp * state.amplitudes(b);
    }
  }
  const double norm = factorial(n - k) / factorial(n);
  Eigen::MatrixXcd g = reduced.adjoint() * reduced;  // g(b, a) = <a^b psi, a^a psi>
  g.transposeInPlace();                               // g(a, b)
  for (int a = 0; a < small.size(); ++a)
    for (int b = 0; b < small.size(); ++b)
      g(a, b) *= norm * small.multinomial_root(a) * small.multinomial_root(b);
  return SymOperator{k, std::move(g), true};
}

Eigen::MatrixXcd bbgky_right_side(const NBodyHamiltonian& h, const SymOperator& rho_k,
                                  const SymOperator& rho_k1) {
  const int n = h.particles();
  const int k = rho_k.order;
  const int m = h.space().dim();
  const Eigen::VectorXd free = free_energies(h.space(), k);
  const Eigen::MatrixXcd pair_k = pair_interaction(h.space(), h.potential(), k);
  const Eigen::MatrixXcd pair_k1 = pair_interaction(h.space(), h.potential(), k + 1);
  const Eigen::MatrixXcd& r = rho_k.matrix;
  auto commutator = [](const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) -> Eigen::MatrixXcd {
    return a * b - b * a;
  };
  const Eigen::MatrixXcd free_term = free.asDiagonal() * r - r * free.asDiagonal();
  const Eigen::MatrixXcd intra = commutator(pair_k, r) / static_cast<double>(n);
  const SymOperator big{k + 1, commutator(pair_k1, rho_k1.matrix), false};
  const Eigen::MatrixXcd reduced_rho = partial_trace(rho_k1, m).matrix;
  const Eigen::MatrixXcd collision =
      (partial_trace(big, m).matrix - commutator(pair_k, reduced_rho)) *
      (static_cast<double>(n - k) / n);
  return Complex(0.0, -1.0) * (free_term + intra + collision);
}

BbgkyCurve bbgky_residual(const NBodyHamiltonian& h, const NBodyState& initial, int k,
                          const std::vector<double>& sample_times, double dt) {
  if (k + 1 > h.particles()) throw ContractViolation("BBGKY residual needs k + 1 <= n");
  const int m = h.space().dim();
  BbgkyCurve curve;
  for (double t : sample_times) {
    const NBodyState now = h.evolve(initial, t);
    const SymOperator plus = marginal(h.evolve(initial, t + dt), m, k);
    const SymOperator minus = marginal(h.evolve(initial, t - dt), m, k);
    const Eigen::MatrixXcd derivative = (plus.matrix - minus.matrix) / (2.0 * dt);
    const Eigen::MatrixXcd rhs = bbgky_right_side(h, marginal(now, m, k), marginal(now, m, k + 1));
    const double r = hermitian_trace_norm(derivative - rhs);
    curve.times.push_back(t);
    curve.values.push_back(r);
    curve.max = std::max(curve.max, r);
  }
  return curve;
}

std::vector<ChaosRow> chaos_experiment(const ModelSpace& space, const StateVector& phi0,
                                       const PairPotential& w, const std::vector<int>& n_list,
                                       int k, double t1, double hartree_dt, int capacity) {
  for (int n : n_list) {
    if (n < k) throw ContractViolation("chaos experiment needs n >= k");
    sector(space.dim(), n, capacity);
  }
  const StateVector phi_t = physical_solution(space, Nonlinearity::hartree(w), phi0, t1,
                                              t1 > 0.0 ? std::min(hartree_dt, t1) : hartree_dt);
  const Eigen::VectorXcd target_vec = product_state(phi_t, k).amplitudes;
  const Eigen::MatrixXcd target = target_vec * target_vec.adjoint();
  std::vector<ChaosRow> rows;
  for (int n : n_list) {
    const auto start = std::chrono::steady_clock::now();
    const NBodyHamiltonian h(space, w, n, capacity);
    const NBodyState evolved = h.evolve(product_state(phi0, n), t1);
    const double eps = hermitian_trace_norm(marginal(evolved, space.dim(), k).matrix - target);
    const auto stop = std::chrono::steady_clock::now();
    rows.push_back(ChaosRow{n, k, eps,
                            std::chrono::duration<double, std::milli>(stop - start).count()});
  }
  return rows;
}

}  // namespace hierlab
