#include <cmath>

#include "doctest.h"
#include "hierlab/definetti.hpp"
#include "hierlab/errors.hpp"
#include "support.hpp"

using namespace hierlab;
using namespace hierlab::testing;

namespace {

StateVector unit(int dim, int i) {
  StateVector e = StateVector::Zero(dim);
  e(i) = 1.0;
  return e;
}

}  // namespace

TEST_CASE("phi examples") {
  const auto g = phi(AtomicMeasure::dirac(unit(3, 0)), 3);
  for (int k = 1; k <= 3; ++k) CHECK(max_abs(g.level(k).matrix - rank_one_projector(unit(3, 0), k).matrix) == 0.0);
  const auto z = phi(AtomicMeasure::dirac(StateVector::Zero(3)), 2);
  CHECK(max_abs(z.level(2).matrix) == 0.0);
  const auto half = phi(AtomicMeasure({{0.5, unit(3, 0)}, {0.5, unit(3, 1)}}), 1);
  Eigen::MatrixXcd expected = Eigen::MatrixXcd::Zero(3, 3);
  expected(0, 0) = expected(1, 1) = 0.5;
  CHECK(max_abs(half.level(1).matrix - expected) < 1e-15);
}

TEST_CASE("phi output satisfies the hierarchy invariants") {
  Rng rng(41, 0);
  for (int trial = 0; trial < 10; ++trial) {
    const auto g = phi(random_measure(rng, 3, 3), 3);
    for (int k = 1; k <= 3; ++k) {
      const Eigen::MatrixXcd& m = g.level(k).matrix;
      CHECK(max_abs(m - m.adjoint()) < 1e-15);
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(m);
      CHECK(es.eigenvalues().minCoeff() >= -1e-12);
      CHECK(es.eigenvalues().maxCoeff() <= 1.0 + 1e-12);
      const Eigen::MatrixXcd s = full_tensor::symmetrizer(3, k);
      const Eigen::MatrixXcd full = full_tensor::embed(m, 3, k);
      CHECK(max_abs(s * full * s - full) < 1e-13);
    }
  }
}

TEST_CASE("sphere concentration test") {
  Rng rng(42, 0);
  const auto on = sphere_concentration_test(phi(random_measure(rng, 3, 3, true), 3));
  CHECK(on.on_sphere);
  CHECK(on.consistent);
  const auto off = sphere_concentration_test(phi(AtomicMeasure::dirac(0.9 * unit(3, 1)), 3));
  CHECK_FALSE(off.on_sphere);
  CHECK(off.consistent);
  for (int k = 1; k <= 3; ++k) CHECK(off.traces[static_cast<std::size_t>(k - 1)] == doctest::Approx(std::pow(0.81, k)));
}

TEST_CASE("trace compatibility test") {
  Rng rng(43, 0);
  CHECK(trace_compatibility_test(phi(random_measure(rng, 3, 2, true), 3)).compatible);
  const auto r = trace_compatibility_test(phi(AtomicMeasure::dirac(unit(3, 0) / std::sqrt(2.0)), 2));
  CHECK_FALSE(r.compatible);
  CHECK(r.defects[0] == doctest::Approx(0.25));
  const auto with_origin = AtomicMeasure({{0.3, StateVector::Zero(3)}, {0.7, unit(3, 2)}});
  CHECK(trace_compatibility_test(phi(with_origin, 3)).compatible);
}

TEST_CASE("psi lift examples") {
  StateVector x(2);
  x << 0.6, 0.0;
  const StateVector lifted = psi_lift(x, 1);
  CHECK(lifted(0).real() == doctest::Approx(0.6));
  CHECK(lifted(1).real() == doctest::Approx(0.8));
  CHECK((psi_lift(StateVector::Zero(3), 2) - unit(3, 2)).norm() < 1e-15);
  StateVector fixed(2);
  fixed << 0.6, 0.8;
  CHECK((psi_lift(fixed, 1) - fixed).norm() < 1e-15);

  Rng rng(44, 0);
  const auto mu = random_measure(rng, 4, 3);
  const auto lifted_mu = psi_lift(mu, 3);
  for (const auto& a : lifted_mu.atoms()) CHECK(std::abs(a.point.norm() - 1.0) <= 1e-12);
}

TEST_CASE("lifting demo: weak-* stable entries without trace-norm convergence") {
  StateVector x = StateVector::Zero(5);
  x(0) = 0.6;
  const int modes[] = {2, 3, 4};
  const auto rows = weak_star_lifting_demo(AtomicMeasure::dirac(x), 1, modes);
  REQUIRE(rows.size() == 3);
  for (const auto& r : rows) {
    CHECK(std::abs(r.trace_gap - 0.64) <= 1e-10);
    CHECK(std::abs(r.zero_mode_pairing) <= 1e-10);
    CHECK(std::abs(r.zero_mode_trace_norm - 0.48) <= 1e-10);
    CHECK(std::abs(r.compressed_defect) <= 1e-10);
    CHECK(r.trace_norm_distance > 1.0);
  }

  const auto sphere = AtomicMeasure::dirac(unit(5, 0));
  for (const auto& r : weak_star_lifting_demo(sphere, 2, modes)) {
    CHECK(r.trace_norm_distance <= 1e-12);
    CHECK(r.trace_gap <= 1e-12);
  }
}

TEST_CASE("Kadec-Klee experiment") {
  Rng rng(45, 0);
  const auto limit = phi(random_measure(rng, 3, 2, true), 2);
  const std::vector<Hierarchy> constant(4, limit);
  for (const auto& level : kadec_klee_experiment(constant, limit)) {
    CHECK(level.premises_vanish);
    CHECK(level.conclusion_vanishes);
    CHECK(level.consistent);
  }

  StateVector x = StateVector::Zero(5);
  x(0) = 0.6;
  const auto mu = AtomicMeasure::dirac(x);
  std::vector<Hierarchy> lifted;
  for (int n : {2, 3, 4}) lifted.push_back(phi(psi_lift(mu, n), 1));
  const auto levels = kadec_klee_experiment(lifted, phi(mu, 1));
  CHECK(levels[0].trace_gap.back() == doctest::Approx(0.64));
  CHECK_FALSE(levels[0].premises_vanish);
  CHECK_FALSE(levels[0].conclusion_vanishes);
  CHECK(levels[0].consistent);

  const StateVector target = random_state(rng, 3, 1.0);
  std::vector<Hierarchy> converging;
  for (int j = 1; j <= 8; ++j) {
    StateVector y = target + std::pow(0.1, j) * unit(3, 1);
    converging.push_back(phi(AtomicMeasure::dirac(y / y.norm()), 2));
  }
  for (const auto& level : kadec_klee_experiment(converging, phi(AtomicMeasure::dirac(target), 2))) {
    CHECK(level.premises_vanish);
    CHECK(level.conclusion_vanishes);
  }
}

TEST_CASE("phi is affine under mixtures") {
  Rng rng(46, 0);
  for (int trial = 0; trial < 10; ++trial) {
    const auto mu = random_measure(rng, 3, 2);
    const auto nu = random_measure(rng, 3, 3);
    const double t = rng.uniform(0.01, 0.99);
    const auto lhs = phi(mixture(mu, nu, t), 3);
    const auto a = phi(mu, 3);
    const auto b = phi(nu, 3);
    for (int k = 1; k <= 3; ++k)
      CHECK(max_abs(lhs.level(k).matrix - (t * a.level(k).matrix + (1 - t) * b.level(k).matrix)) <= 1e-14);
  }
}

TEST_CASE("phi separates measures that the moments separate") {
  Rng rng(47, 0);
  int separated = 0;
  for (int trial = 0; trial < 30; ++trial) {
    const int m = 2 + trial % 2;
    const auto mu = random_measure(rng, m, 1 + trial % 3);
    const auto nu = random_measure(rng, m, 1 + (trial + 1) % 3);
    std::vector<StateVector> tests;
    for (int i = 0; i < 8; ++i) tests.push_back(random_state(rng, m, 1.0));
    const double defect = weak_narrow_defect(mu, nu, tests, 3);
    if (defect <= 1e-10) continue;
    ++separated;
    CHECK(hierarchy_distance(phi(mu, 3), phi(nu, 3)) > defect / 20.0);
  }
  CHECK(separated > 20);
}

TEST_CASE("moment convergence implies entrywise hierarchy convergence") {
  Rng rng(48, 0);
  const auto mu = random_measure(rng, 3, 2);
  double prev = 1e9;
  for (int j = 1; j <= 5; ++j) {
    std::vector<Atom> atoms(mu.atoms().begin(), mu.atoms().end());
    for (auto& a : atoms) a.point *= 1.0 - std::pow(0.1, j);
    const double d = hierarchy_distance(phi(AtomicMeasure(atoms), 3), phi(mu, 3));
    CHECK(d < prev);
    prev = d;
  }
  CHECK(prev < 1e-4);
}

TEST_CASE("two-atom reconstruction recovers the hierarchy") {
  Rng rng(49, 0);
  for (int trial = 0; trial < 10; ++trial) {
    const auto mu = random_measure(rng, 3, 1 + trial % 2);
    const auto g = phi(mu, 3);
    const auto rebuilt = reconstruct_two_atoms(g);
    REQUIRE(rebuilt.has_value());
    CHECK(hierarchy_distance(phi(*rebuilt, 3), g) <= 1e-10);
  }
}
