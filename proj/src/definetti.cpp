#include "hierlab/definetti.hpp"

#include <algorithm>
#include <cmath>

#include "hierlab/errors.hpp"
#include "hierlab/rng.hpp"

namespace hierlab {

Hierarchy phi(const AtomicMeasure& mu, int max_order) {
  if (max_order < 1) throw ContractViolation("hierarchy needs at least one level");
  if (max_order > kHardMaxOrder)
    throw CapacityError("K_max " + std::to_string(max_order) + " exceeds capacity " +
                        std::to_string(kHardMaxOrder));
  Hierarchy h;
  h.modes = mu.dim();
  for (int k = 1; k <= max_order; ++k) {
    const int dim = occupation_basis(mu.dim(), k).size();
    Eigen::MatrixXcd g = Eigen::MatrixXcd::Zero(dim, dim);
    for (const auto& a : mu.atoms()) {
      const Eigen::VectorXcd v = pure_tensor(a.point, k, max_order);
      g.noalias() += a.weight * (v * v.adjoint());
    }
    h.levels.push_back(SymOperator{k, std::move(g), true});
  }
  return h;
}

double hierarchy_distance(const Hierarchy& a, const Hierarchy& b) {
  if (a.max_order() != b.max_order() || a.modes != b.modes)
    throw ContractViolation("hierarchies have different shapes");
  double worst = 0.0;
  for (int k = 1; k <= a.max_order(); ++k)
    worst = std::max(worst, hermitian_trace_norm(a.level(k).matrix - b.level(k).matrix));
  return worst;
}

SphereReport sphere_concentration_test(const Hierarchy& gamma, double tol) {
  SphereReport r;
  r.on_sphere = true;
  for (const auto& level : gamma.levels) {
    const double tr = level.matrix.trace().real();
    r.traces.push_back(tr);
    if (std::abs(tr - 1.0) > tol) r.on_sphere = false;
  }
  r.first_level_verdict = !r.traces.empty() && std::abs(r.traces.front() - 1.0) <= tol;
  r.consistent = r.first_level_verdict == r.on_sphere;
  return r;
}

CompatibilityReport trace_compatibility_test(const Hierarchy& gamma, double tol) {
  if (gamma.max_order() < 2) throw ContractViolation("trace compatibility needs K_max >= 2");
  CompatibilityReport r;
  r.compatible = true;
  for (int k = 1; k < gamma.max_order(); ++k) {
    const SymOperator reduced = partial_trace(gamma.level(k + 1), gamma.modes);
    const double d = hermitian_trace_norm(reduced.matrix - gamma.level(k).matrix);
    r.defects.push_back(d);
    if (d > tol) r.compatible = false;
  }
  return r;
}

StateVector psi_lift(const StateVector& x, int lift_mode) {
  if (lift_mode < 0 || lift_mode >= x.size()) throw ContractViolation("lift mode out of range");
  const double radicand = 1.0 - (x.squaredNorm() - std::norm(x(lift_mode)));
  if (radicand < -1e-12) throw ContractViolation("lift radicand negative: atom outside unit ball");
  StateVector out = x;
  out(lift_mode) = std::sqrt(std::max(radicand, 0.0));
  return out;
}

AtomicMeasure psi_lift(const AtomicMeasure& mu, int lift_mode) {
  std::vector<Atom> out;
  for (const auto& a : mu.atoms()) out.push_back(Atom{a.weight, psi_lift(a.point, lift_mode)});
  return AtomicMeasure(std::move(out), 1.0);
}

std::vector<LiftingRow> weak_star_lifting_demo(const AtomicMeasure& mu, int order,
                                               std::span<const int> lift_modes) {
  const int m = mu.dim();
  const auto& basis = occupation_basis(m, order);
  std::vector<int> zero_occ(static_cast<std::size_t>(m), 0);
  zero_occ[0] = order;
  const int zero_index = basis.index_of(zero_occ);
  const Eigen::MatrixXcd base = phi(mu, order).level(order).matrix;
  std::vector<LiftingRow> rows;
  for (int n : lift_modes) {
    const Eigen::MatrixXcd delta = phi(psi_lift(mu, n), order).level(order).matrix - base;
    LiftingRow row;
    row.lift_mode = n;
    row.zero_mode_pairing = std::abs(delta(zero_index, zero_index));
    row.zero_mode_trace_norm = delta.row(zero_index).norm();
    row.trace_gap = std::abs(delta.trace());
    row.trace_norm_distance = hermitian_trace_norm(delta);
    std::vector<int> keep;
    for (int i = 0; i < basis.size(); ++i)
      if (basis.occupation(i)[static_cast<std::size_t>(n)] == 0) keep.push_back(i);
    Eigen::MatrixXcd compressed(keep.size(), keep.size());
    for (std::size_t i = 0; i < keep.size(); ++i)
      for (std::size_t j = 0; j < keep.size(); ++j) compressed(i, j) = delta(keep[i], keep[j]);
    row.compressed_defect = hermitian_trace_norm(compressed);
    rows.push_back(row);
  }
  return rows;
}

std::vector<Eigen::MatrixXcd> weak_star_test_family(int modes, int order, std::uint64_t seed) {
  const int dim = occupation_basis(modes, order).size();
  std::vector<Eigen::MatrixXcd> family;
  if (order <= 2) {
    for (int a = 0; a < dim; ++a)
      for (int b = 0; b < dim; ++b) {
        Eigen::MatrixXcd e = Eigen::MatrixXcd::Zero(dim, dim);
        e(a, b) = 1.0;
        family.push_back(std::move(e));
      }
  }
  Rng rng(seed, static_cast<std::uint64_t>(1000 * modes + order));
  for (int r = 0; r < 10; ++r) {
    Eigen::MatrixXcd k(dim, dim);
    for (int i = 0; i < dim; ++i)
      for (int j = 0; j < dim; ++j) k(i, j) = rng.complex_normal();
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(k);
    family.push_back(k / svd.singularValues()(0));
  }
  return family;
}

double weak_star_defect(const SymOperator& a, const SymOperator& b,
                        std::span<const Eigen::MatrixXcd> family) {
  const Eigen::MatrixXcd delta = a.matrix - b.matrix;
  double worst = 0.0;
  for (const auto& k : family)
    worst = std::max(worst, std::abs(k.cwiseProduct(delta.transpose()).sum()));
  return worst;
}

namespace {
bool vanishing(const std::vector<double>& s) {
  if (s.empty()) return true;
  const double peak = *std::max_element(s.begin(), s.end());
  return s.back() <= 1e-9 || s.back() <= 0.05 * peak;
}
}  // namespace

std::vector<KadecKleeLevel> kadec_klee_experiment(std::span<const Hierarchy> sequence,
                                                  const Hierarchy& limit) {
  std::vector<KadecKleeLevel> out;
  for (int k = 1; k <= limit.max_order(); ++k) {
    const auto family = weak_star_test_family(limit.modes, k);
    KadecKleeLevel level;
    level.order = k;
    const double limit_trace = limit.level(k).matrix.trace().real();
    for (const auto& g : sequence) {
      if (g.max_order() < k || g.modes != limit.modes)
        throw ContractViolation("sequence and limit have different shapes");
      level.weak_star.push_back(weak_star_defect(g.level(k), limit.level(k), family));
      level.trace_gap.push_back(std::abs(g.level(k).matrix.trace().real() - limit_trace));
      level.trace_norm.push_back(hermitian_trace_norm(g.level(k).matrix - limit.level(k).matrix));
    }
    level.premises_vanish = vanishing(level.weak_star) && vanishing(level.trace_gap);
    level.conclusion_vanishes = vanishing(level.trace_norm);
    level.consistent = !level.premises_vanish || level.conclusion_vanishes;
    out.push_back(std::move(level));
  }
  return out;
}

namespace {

// Symmetric coefficient matrix M with v = sum M_ij e_i (x) e_j for v in the square power.
Eigen::MatrixXcd square_matrix(const Eigen::VectorXcd& coords, int modes) {
  const auto& basis = occupation_basis(modes, 2);
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(modes, modes);
  for (int i = 0; i < basis.size(); ++i) {
    const auto alpha = basis.occupation(i);
    int first = -1;
    int second = -1;
    for (int j = 0; j < modes; ++j) {
      for (int p = 0; p < alpha[static_cast<std::size_t>(j)]; ++p) (first < 0 ? first : second) = j;
    }
    if (first == second) {
      m(first, first) = coords(i);
    } else {
      m(first, second) = m(second, first) = coords(i) / std::sqrt(2.0);
    }
  }
  return m;
}

// Unit vector x with m proportional to x x^T.
StateVector rank_one_factor(const Eigen::MatrixXcd& m) {
  Eigen::Index best = 0;
  m.colwise().norm().maxCoeff(&best);
  return m.col(best).normalized();
}

std::vector<Eigen::MatrixXcd> rank_one_pencil_members(const Eigen::Matrix2cd& a,
                                                      const Eigen::Matrix2cd& b) {
  const Complex c0 = a.determinant();
  const Complex c2 = b.determinant();
  const Complex c1 = a(0, 0) * b(1, 1) + a(1, 1) * b(0, 0) - a(0, 1) * b(1, 0) - a(1, 0) * b(0, 1);
  auto roots = [](Complex p2, Complex p1, Complex p0) {
    const Complex disc = std::sqrt(p1 * p1 - 4.0 * p2 * p0);
    Complex q = -0.5 * (p1 + (std::real(std::conj(p1) * disc) >= 0 ? disc : -disc));
    return std::pair<Complex, Complex>{q / p2, p0 / q};
  };
  std::vector<Eigen::MatrixXcd> out;
  if (std::abs(c2) >= std::abs(c0)) {
    const auto [l1, l2] = roots(c2, c1, c0);
    out.push_back(a + l1 * b);
    out.push_back(a + l2 * b);
  } else {
    const auto [m1, m2] = roots(c0, c1, c2);
    out.push_back(m1 * a + b);
    out.push_back(m2 * a + b);
  }
  return out;
}

}  // namespace

std::optional<AtomicMeasure> reconstruct_two_atoms(const Hierarchy& gamma, double tol) {
  if (gamma.max_order() < 2) throw ContractViolation("reconstruction needs gamma^(1), gamma^(2)");
  const int m = gamma.modes;
  const Eigen::MatrixXcd& g1 = gamma.level(1).matrix;
  const Eigen::MatrixXcd& g2 = gamma.level(2).matrix;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(0.5 * (g2 + g2.adjoint()));
  const Eigen::VectorXd& ev = es.eigenvalues();
  const double top = ev.cwiseAbs().maxCoeff();
  int rank = 0;
  for (Eigen::Index i = 0; i < ev.size(); ++i)
    if (ev(i) > tol * std::max(1.0, top)) ++rank;
  const Eigen::Index n2 = ev.size();

  std::vector<StateVector> directions;
  if (rank == 1) {
    directions.push_back(rank_one_factor(square_matrix(es.eigenvectors().col(n2 - 1), m)));
  } else if (rank == 2) {
    const Eigen::MatrixXcd mu = square_matrix(es.eigenvectors().col(n2 - 1), m);
    const Eigen::MatrixXcd mv = square_matrix(es.eigenvectors().col(n2 - 2), m);
    Eigen::MatrixXcd stacked(m, 2 * m);
    stacked << mu, mv;
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(stacked, Eigen::ComputeThinU);
    const Eigen::MatrixXcd q = svd.matrixU().leftCols(2);
    const Eigen::Matrix2cd a = q.adjoint() * mu * q.conjugate();
    const Eigen::Matrix2cd b = q.adjoint() * mv * q.conjugate();
    for (const auto& member : rank_one_pencil_members(a, b))
      directions.push_back((q * rank_one_factor(member)).normalized());
  } else if (rank > 2) {
    return std::nullopt;
  }

  std::vector<Atom> atoms;
  double total = 0.0;
  if (!directions.empty()) {
    const auto r = static_cast<Eigen::Index>(directions.size());
    Eigen::MatrixXcd design1(g1.size(), r);
    Eigen::MatrixXcd design2(g2.size(), r);
    for (Eigen::Index i = 0; i < r; ++i) {
      const auto& x = directions[static_cast<std::size_t>(i)];
      const Eigen::MatrixXcd p1 = x * x.adjoint();
      const Eigen::VectorXcd s = pure_tensor(x, 2);
      const Eigen::MatrixXcd p2 = s * s.adjoint();
      design1.col(i) = Eigen::Map<const Eigen::VectorXcd>(p1.data(), p1.size());
      design2.col(i) = Eigen::Map<const Eigen::VectorXcd>(p2.data(), p2.size());
    }
    const Eigen::VectorXcd c = design1.colPivHouseholderQr().solve(
        Eigen::Map<const Eigen::VectorXcd>(g1.data(), g1.size()));
    const Eigen::VectorXcd d = design2.colPivHouseholderQr().solve(
        Eigen::Map<const Eigen::VectorXcd>(g2.data(), g2.size()));
    for (Eigen::Index i = 0; i < r; ++i) {
      const double ci = c(i).real();
      const double di = d(i).real();
      if (!(ci > tol) || !(di > tol)) return std::nullopt;
      const double w = ci * ci / di;
      atoms.push_back(Atom{w, std::sqrt(di / ci) * directions[static_cast<std::size_t>(i)]});
      total += w;
    }
  }
  if (total > 1.0 + tol) return std::nullopt;
  if (total < 1.0 - tol) atoms.push_back(Atom{1.0 - total, StateVector::Zero(m)});
  try {
    AtomicMeasure rebuilt(std::move(atoms), 1.0 + 1e-9);
    if (hierarchy_distance(phi(rebuilt, gamma.max_order()), gamma) > 1e3 * tol) return std::nullopt;
    return rebuilt;
  } catch (const ContractViolation&) {
    return std::nullopt;
  }
}

}  // namespace hierlab
