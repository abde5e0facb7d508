#include <cmath>

#include "doctest.h"
#include "hierlab/liouville.hpp"
#include "hierlab/scenarios.hpp"
#include "support.hpp"

using namespace hierlab;
using namespace hierlab::testing;

TEST_CASE("zero field gives static trajectories and zero residuals") {
  const auto space = ModelSpace::with_cutoff(1);
  Rng rng(71, 0);
  const auto mu = random_measure(rng, 3, 3);
  const auto tr = liouville_from_flow(mu, VectorField::zero(), 0.0, 0.5, 1e-3);
  REQUIRE(tr.trajectory.times.size() == 501);
  for (const auto& m : tr.trajectory.measures)
    for (int i = 0; i < m.size(); ++i) CHECK((m.atoms()[i].point - mu.atoms()[i].point).norm() == 0.0);
  for (int trial = 0; trial < 5; ++trial) {
    const StateVector y = random_state(rng, 3, 2.0);
    CHECK(characteristic_residual(tr.trajectory, VectorField::zero(), y).max <= 1e-14);
  }
  const auto battery = make_test_battery(space, 0.0, 0.5);
  for (const auto& test : battery.cylinders)
    CHECK(std::abs(weak_form_residual(tr.trajectory, space, VectorField::zero(), test)) <= 1e-8);
}

TEST_CASE("characteristic residual vanishes at y = 0") {
  const auto space = ModelSpace::with_cutoff(1);
  const auto vf = VectorField::interaction_picture(space, Nonlinearity::cubic(1.0));
  Rng rng(72, 0);
  const auto mu = random_measure(rng, 3, 2);
  const auto tr = liouville_from_flow(mu, vf, 0.0, 0.3, 0.01);
  CHECK(characteristic_residual(tr.trajectory, vf, StateVector::Zero(3)).max == 0.0);
}

TEST_CASE("flow preserves weights and single-mode moduli") {
  const auto space = ModelSpace::with_modes(1);
  const auto vf = VectorField::interaction_picture(space, Nonlinearity::cubic(1.0));
  Rng rng(73, 0);
  const auto mu = random_measure(rng, 1, 3);
  const auto tr = liouville_from_flow(mu, vf, 0.0, 1.0, 1e-3);
  const auto& last = tr.trajectory.measures.back();
  for (int i = 0; i < mu.size(); ++i) {
    CHECK(last.atoms()[i].weight == mu.atoms()[i].weight);
    CHECK(std::abs(last.atoms()[i].point(0)) == doctest::Approx(std::abs(mu.atoms()[i].point(0))).epsilon(1e-10));
  }
  const StateVector y = StateVector::Constant(1, Complex(0.3, -0.2));
  for (int k = 1; k <= 3; ++k)
    CHECK(std::abs(moment(last, y, k) - moment(mu, y, k)) <= 1e-10);
}

TEST_CASE("phase generator keeps every moment fixed") {
  Rng rng(74, 0);
  const auto mu = random_measure(rng, 3, 3);
  const auto tr = liouville_from_flow(mu, VectorField::phase_generator(), 0.0, 1.0, 1e-3);
  const auto& last = tr.trajectory.measures.back();
  CHECK(hierarchy_distance(phi(last, 3), phi(mu, 3)) <= 1e-10);
  CHECK((last.atoms()[0].point - std::exp(Complex(0, 1)) * mu.atoms()[0].point).norm() <= 1e-10);
}

TEST_CASE("true flow passes both families and a corrupted one fails both") {
  const auto space = ModelSpace::with_cutoff(1);
  const auto vf = VectorField::interaction_picture(space, Nonlinearity::cubic(1.0));
  const auto mu = default_measure(space, 2, 7);
  const auto battery = make_test_battery(space, 0.0, 0.5, 7);
  const auto tr = liouville_from_flow(mu, vf, 0.0, 0.5, 2e-3);
  const auto good = duality_check(tr.trajectory, space, vf, 2, battery);
  CHECK(good.hierarchy_small);
  CHECK(good.characteristic_small);
  CHECK(good.weak_form_max <= 1e-6);
  CHECK(good.pass);

  const auto bad_traj = corrupt_trajectory(tr.trajectory, 100, 0, space.basis_vector(0));
  const auto bad = duality_check(bad_traj, space, vf, 2, battery);
  CHECK(bad.hierarchy_max > 1e-2);
  CHECK(bad.characteristic_max > 1e-2);
  CHECK_FALSE(bad.hierarchy_small);
  CHECK_FALSE(bad.characteristic_small);
  CHECK(bad.pass);
  CHECK_THROWS(corrupt_trajectory(tr.trajectory, 10000, 0, space.basis_vector(0)));
}

TEST_CASE("cylindrical test derivative matches finite differences") {
  const auto space = ModelSpace::with_cutoff(1);
  Rng rng(75, 0);
  CylindricalTest test({{random_state(rng, 3, 1.0), 1.3, 2.0, false},
                        {random_state(rng, 3, 1.0), 0.7, 2.0, true}},
                       0.1, 0.9);
  const StateVector x = random_state(rng, 3, 0.5);
  const StateVector v = random_state(rng, 3, 1.0);
  const double t = 0.5;
  const double h = 1e-6;
  const double fd = (test.value(t, space, x + h * v) - test.value(t, space, x - h * v)) / (2 * h);
  CHECK(test.directional_derivative(t, space, x, v) == doctest::Approx(fd).epsilon(1e-6));
  const double ft = (test.value(t + h, space, x) - test.value(t - h, space, x)) / (2 * h);
  CHECK(test.time_derivative(t, space, x) == doctest::Approx(ft).epsilon(1e-6));
  CHECK(test.value(0.05, space, x) == 0.0);
}

TEST_CASE("uniqueness examples") {
  const auto space = ModelSpace::with_cutoff(1);
  const auto vf = VectorField::interaction_picture(space, Nonlinearity::cubic(1.0));
  const auto mu = default_measure(space, 3, 11);
  const auto battery = make_test_battery(space, 0.0, 0.2, 11);
  const std::vector<double> phases{0.4, 2.0, -1.1};
  const auto rotated = rotate_atoms(mu, phases);
  const auto same = uniqueness_experiment(mu, rotated, vf, 0.0, 0.2, 1e-3, 3, battery.vectors);
  CHECK(same.precondition_holds);
  CHECK(same.pass);
  CHECK(same.max_defect <= 1e-10);

  const StateVector e0 = space.basis_vector(0);
  const StateVector e1 = space.basis_vector(1);
  const auto split = AtomicMeasure({{0.5, e0}, {0.5, e1}});
  const auto mixed = AtomicMeasure({{0.5, (e0 + e1) / std::sqrt(2.0)}, {0.5, (e0 - e1) / std::sqrt(2.0)}});
  const auto differ = uniqueness_experiment(split, mixed, vf, 0.0, 0.2, 1e-3, 3, battery.vectors);
  CHECK_FALSE(differ.precondition_holds);
  CHECK(differ.discriminating_order == 2);
  CHECK(differ.discriminating_moment > 0.1);
}
