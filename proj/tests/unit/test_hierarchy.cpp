#include <cmath>

#include "doctest.h"
#include "hierlab/definetti.hpp"
#include "hierlab/dynamics.hpp"
#include "hierlab/hierarchy.hpp"
#include "hierlab/liouville.hpp"
#include "hierlab/scenarios.hpp"
#include "support.hpp"

using namespace hierlab;
using namespace hierlab::testing;

namespace {

StateVector unit(int dim, int i) {
  StateVector e = StateVector::Zero(dim);
  e(i) = 1.0;
  return e;
}

HierarchyTrajectory constant_trajectory(const AtomicMeasure& mu, int samples, double dt, int order) {
  std::vector<double> times;
  std::vector<AtomicMeasure> measures;
  for (int i = 0; i < samples; ++i) {
    times.push_back(i * dt);
    measures.push_back(mu);
  }
  return lift_trajectory(times, measures, order, 1.0);
}

}  // namespace

TEST_CASE("c_plus examples") {
  Rng rng(61, 0);
  const auto mu = random_measure(rng, 3, 2);
  CHECK(max_abs(c_plus(mu, 0.0, 1, 2, VectorField::zero()).matrix) == 0.0);
  CHECK(max_abs(c_minus(mu, 0.0, 2, 2, VectorField::zero()).matrix) == 0.0);

  const auto phase = VectorField::phase_generator();
  for (int k = 1; k <= 3; ++k) {
    const Eigen::MatrixXcd gamma = phi(mu, k).level(k).matrix;
    for (int j = 1; j <= k; ++j) {
      CHECK(max_abs(c_plus(mu, 0.3, j, k, phase).matrix + Complex(0, 1) * gamma) < 1e-14);
      CHECK(max_abs(c_minus(mu, 0.3, j, k, phase).matrix - Complex(0, 1) * gamma) < 1e-14);
    }
    CHECK(max_abs(hierarchy_generator(mu, 0.3, k, phase)) < 1e-14);
  }

  const VectorField to_e2("constant", [](double, const StateVector&) { return unit(2, 1); }, false);
  const auto single = AtomicMeasure::dirac(unit(2, 0));
  Eigen::MatrixXcd expected = Eigen::MatrixXcd::Zero(2, 2);
  expected(0, 1) = 1.0;
  CHECK(max_abs(c_plus(single, 0.0, 1, 1, to_e2).matrix - expected) == 0.0);
  CHECK(max_abs(c_minus(single, 0.0, 1, 1, to_e2).matrix - expected.adjoint()) == 0.0);
}

TEST_CASE("c_minus is the adjoint of c_plus and compression matches the full tensor") {
  const auto space = ModelSpace::with_cutoff(1);
  const auto vf = VectorField::interaction_picture(space, Nonlinearity::hartree(PairPotential({1.0, 0.5, 0.2})));
  Rng rng(62, 0);
  for (int trial = 0; trial < 5; ++trial) {
    const auto mu = random_measure(rng, 3, 3);
    const double t = rng.uniform(0.0, 1.0);
    for (int k = 1; k <= 3; ++k)
      for (int j = 1; j <= k; ++j) {
        const auto cp = c_plus(mu, t, j, k, vf).matrix;
        CHECK(max_abs(c_minus(mu, t, j, k, vf).matrix - cp.adjoint()) <= 1e-12);
        CHECK(max_abs(full_tensor::compress(c_plus_full(mu, t, j, k, vf), 3, k) - cp) <= 1e-12);
      }
  }
}

TEST_CASE("matrix elements against product test vectors") {
  const auto space = ModelSpace::with_cutoff(1);
  const auto vf = VectorField::interaction_picture(space, Nonlinearity::cubic(1.0));
  Rng rng(63, 0);
  const auto mu = random_measure(rng, 3, 2);
  const double t = 0.2;
  for (int k = 1; k <= 3; ++k) {
    const StateVector y = random_state(rng, 3, 1.0);
    const Eigen::VectorXcd yk = pure_tensor(y, k);
    Complex expected = 0.0;
    for (const auto& a : mu.atoms()) {
      const Complex yx = y.dot(a.point);
      const Complex yv = y.dot(vf(t, a.point));
      expected += a.weight * std::pow(yx, k) * std::conj(yv) * std::pow(std::conj(yx), k - 1);
    }
    for (int j = 1; j <= k; ++j) {
      const Complex got = yk.dot(c_plus(mu, t, j, k, vf).matrix * yk);
      CHECK(std::abs(got - expected) <= 1e-12);
    }
  }
}

TEST_CASE("generator is Hermitian and permutation symmetric on the full space") {
  const auto space = ModelSpace::with_cutoff(1);
  const auto vf = VectorField::interaction_picture(space, Nonlinearity::cubic(1.0));
  Rng rng(64, 0);
  for (int k = 1; k <= 3; ++k) {
    const auto mu = random_measure(rng, 3, 3);
    const Eigen::MatrixXcd gen = hierarchy_generator(mu, 0.4, k, vf);
    CHECK(max_abs(gen - gen.adjoint()) <= 1e-12);
    Eigen::MatrixXcd full = Eigen::MatrixXcd::Zero(full_tensor::power(3, k), full_tensor::power(3, k));
    for (int j = 1; j <= k; ++j) {
      const Eigen::MatrixXcd cp = c_plus_full(mu, 0.4, j, k, vf);
      full += cp + cp.adjoint();
    }
    const Eigen::MatrixXcd s = full_tensor::symmetrizer(3, k);
    CHECK(max_abs(s * full * s - full) <= 1e-12);
    CHECK(max_abs(full_tensor::compress(full, 3, k) - gen) <= 1e-12);
  }
}

TEST_CASE("residual vanishes for static cases") {
  const auto space = ModelSpace::with_cutoff(1);
  Rng rng(65, 0);
  const auto mu = random_measure(rng, 3, 2);
  const auto traj = constant_trajectory(mu, 21, 0.05, 3);
  for (int k = 1; k <= 3; ++k) {
    CHECK(hierarchy_residual(traj, space, VectorField::zero(), k).max == 0.0);
    CHECK(hierarchy_residual(traj, space, VectorField::phase_generator(), k).max <= 1e-14);
  }
}

TEST_CASE("residual along a cubic flow decays at fourth order") {
  const auto space = ModelSpace::with_cutoff(2);
  const auto vf = VectorField::interaction_picture(space, Nonlinearity::cubic(1.0));
  const auto mu = default_measure(space, 3, 0xA11CE);
  const auto residual = [&](double dt) {
    const auto tr = liouville_from_flow(mu, vf, 0.0, 0.5, dt);
    const auto h = lift_trajectory(tr.trajectory.times, tr.trajectory.measures, 2, 1.0);
    return std::max(hierarchy_residual(h, space, vf, 1).max, hierarchy_residual(h, space, vf, 2).max);
  };
  const double coarse = residual(4e-3);
  const double fine = residual(2e-3);
  CHECK(coarse <= 1e-6);
  CHECK(coarse / fine == doctest::Approx(16.0).epsilon(0.3));
}

TEST_CASE("rejects a non-uniform grid") {
  const auto space = ModelSpace::with_cutoff(1);
  const auto mu = AtomicMeasure::dirac(unit(3, 0));
  const std::vector<double> times{0.0, 0.1, 0.25};
  const std::vector<AtomicMeasure> measures(3, mu);
  const auto h = lift_trajectory(times, measures, 1, 1.0);
  CHECK_THROWS(hierarchy_residual(h, space, VectorField::zero(), 1));
}

TEST_CASE("lifted hierarchies pair with their measures") {
  Rng rng(66, 0);
  const auto mu = random_measure(rng, 3, 2);
  const auto nu = random_measure(rng, 3, 2);
  const std::vector<double> times{0.0, 0.1};
  const std::vector<AtomicMeasure> measures{mu, nu};
  const auto h = lift_trajectory(times, measures, 3, 1.0);
  CHECK(hierarchy_distance(h.hierarchies[1], phi(nu, 3)) <= 1e-10);
}

TEST_CASE("kernel correspondence") {
  const auto space = ModelSpace::with_cutoff(1);
  Rng rng(67, 0);
  const auto mu = random_measure(rng, 3, 2);
  const auto zero = kernel_correspondence_check(mu, space, PairPotential({0.0}), 1, 1);
  CHECK(zero.defect == 0.0);

  const auto sphere_atom = AtomicMeasure::dirac(random_state(rng, 3, 1.0));
  CHECK(kernel_correspondence_check(sphere_atom, space, PairPotential({0.7}), 1, 1).defect <= 1e-10);

  for (int trial = 0; trial < 10; ++trial) {
    const auto nu = random_measure(rng, 3, 2);
    const PairPotential v({rng.uniform(0.0, 1.0), rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0)});
    const auto r = kernel_correspondence_check(nu, space, v, 1, 1);
    CHECK(r.defect <= 1e-10);
    CHECK(r.reversed_order_defect > 1e-6);
  }
  const auto two = kernel_correspondence_check(mu, space, PairPotential({1.0, 0.5}), 2, 2);
  CHECK(two.defect <= 1e-10);
}

TEST_CASE("a1 check examples") {
  const auto space = ModelSpace::with_cutoff(1);
  StateVector x = StateVector::Zero(3);
  x(0) = 0.3;
  x(1) = 0.05;
  const double norm = space.scale_norm(x, 1.0);
  REQUIRE(norm <= 0.5);
  const auto small = constant_trajectory(AtomicMeasure::dirac(x), 5, 0.1, 3);
  const auto ok = a1_check(small, space, 1.0, 0.5);
  CHECK(ok.holds);
  CHECK(ok.atoms_hold);
  CHECK(ok.worst_ratio <= 1.0);

  const auto big = constant_trajectory(AtomicMeasure::dirac(x), 5, 0.1, 3);
  const auto bad = a1_check(big, space, 1.0, norm / 2.0);
  CHECK_FALSE(bad.holds);
  CHECK(bad.worst_atom_ratio == doctest::Approx(2.0));
  CHECK(bad.worst_ratio == doctest::Approx(2.0));
  CHECK(bad.consistent);
}

TEST_CASE("central binomial identity") {
  for (int k = 1; k <= 8; ++k) {
    const auto [lhs, rhs] = central_binomial_identity(k);
    CHECK(lhs == rhs);
  }
  CHECK(central_binomial_identity(2).first == 12);
  CHECK(binomial(16, 8) == 12870);
}
