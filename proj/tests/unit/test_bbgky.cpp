#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>
#include <map>

#include "doctest.h"
#include "hierlab/bbgky.hpp"
#include "hierlab/errors.hpp"
#include "support.hpp"

using namespace hierlab;
using namespace hierlab::testing;

namespace {

// Sum over pairs of W(x_i - x_j) on the full tensor space, then restricted to normalized
// symmetric states built by enumerating tuples.
Eigen::MatrixXcd first_quantized_interaction(const ModelSpace& space, const PairPotential& w, int n) {
  const int m = space.dim();
  const long long full = full_tensor::power(m, n);
  const auto tuple = [&](long long idx) {
    std::vector<int> t(static_cast<std::size_t>(n));
    for (int i = n - 1; i >= 0; --i) {
      t[static_cast<std::size_t>(i)] = static_cast<int>(idx % m);
      idx /= m;
    }
    return t;
  };
  const auto index = [&](const std::vector<int>& t) {
    long long idx = 0;
    for (int v : t) idx = idx * m + v;
    return idx;
  };
  Eigen::MatrixXcd op = Eigen::MatrixXcd::Zero(full, full);
  const int lag = 2 * space.max_abs_label();
  for (long long c = 0; c < full; ++c) {
    const auto t = tuple(c);
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j)
        for (int q = -lag; q <= lag; ++q) {
          const int a = space.index_of(space.label(t[i]) + q);
          const int b = space.index_of(space.label(t[j]) - q);
          if (a < 0 || b < 0 || w.at(q) == 0.0) continue;
          auto s = t;
          s[i] = a;
          s[j] = b;
          op(index(s), c) += w.at(q);
        }
  }
  const auto& basis = occupation_basis(m, n);
  Eigen::MatrixXcd states = Eigen::MatrixXcd::Zero(full, basis.size());
  std::vector<int> count(basis.size(), 0);
  for (long long c = 0; c < full; ++c) {
    std::vector<int> occ(static_cast<std::size_t>(m), 0);
    for (int v : tuple(c)) ++occ[static_cast<std::size_t>(v)];
    const int b = basis.index_of(occ);
    states(c, b) = 1.0;
    ++count[static_cast<std::size_t>(b)];
  }
  for (int b = 0; b < basis.size(); ++b) states.col(b) /= std::sqrt(static_cast<double>(count[b]));
  return states.adjoint() * op * states;
}

NBodyState random_nbody(Rng& rng, int modes, int n) {
  const int dim = occupation_basis(modes, n).size();
  NBodyState s{n, random_state(rng, dim, 1.0)};
  s.amplitudes.normalize();
  return s;
}

Eigen::MatrixXcd direct_marginal(const NBodyState& s, int modes, int k) {
  const Eigen::VectorXcd psi = full_tensor::symmetric_embedding(modes, s.particles) * s.amplitudes;
  Eigen::MatrixXcd rho = psi * psi.adjoint();
  for (int order = s.particles; order > k; --order) rho = full_tensor::partial_trace_last(rho, modes, order);
  return full_tensor::compress(rho, modes, k);
}

}  // namespace

TEST_CASE("interaction matrix examples") {
  const auto two = ModelSpace::with_modes(2);
  const PairPotential w({0.7, 0.3});
  CHECK(max_abs(pair_interaction(two, PairPotential({0.0, 0.0}), 3)) == 0.0);
  CHECK(max_abs(pair_interaction(two, w, 1)) == 0.0);

  const Eigen::MatrixXcd w2 = pair_interaction(two, w, 2);
  REQUIRE(w2.rows() == 3);
  const auto& basis = occupation_basis(2, 2);
  const std::vector<int> mixed{1, 1};
  const int mid = basis.index_of(mixed);
  Eigen::MatrixXcd expected = Eigen::MatrixXcd::Identity(3, 3) * 0.7;
  expected(mid, mid) += 0.3;
  CHECK(max_abs(w2 - expected) <= 1e-15);

  const auto three = ModelSpace::with_cutoff(1);
  const Eigen::MatrixXcd w3 = pair_interaction(three, w, 2);
  const auto& b3 = occupation_basis(3, 2);
  const std::vector<int> zero_pair{2, 0, 0};
  const std::vector<int> opposite{0, 1, 1};
  CHECK(std::abs(w3(b3.index_of(zero_pair), b3.index_of(opposite)) - std::sqrt(2.0) * 0.3) <= 1e-15);
}

TEST_CASE("interaction matrix matches a first-quantized oracle") {
  const auto space = ModelSpace::with_cutoff(1);
  const PairPotential w({1.0, 0.4, -0.2});
  for (int n = 2; n <= 4; ++n)
    CHECK(max_abs(pair_interaction(space, w, n) - first_quantized_interaction(space, w, n)) <= 1e-12);
}

TEST_CASE("zero interaction is diagonal in the free energies") {
  const auto space = ModelSpace::with_cutoff(1);
  const NBodyHamiltonian h(space, PairPotential({0.0}), 3);
  const Eigen::MatrixXcd d = h.matrix();
  CHECK(max_abs(d - Eigen::MatrixXcd(d.diagonal().asDiagonal())) == 0.0);
  const NBodyHamiltonian one(space, PairPotential({1.0, 1.0}), 1);
  for (int j = 0; j < 3; ++j) CHECK(one.matrix()(j, j).real() == doctest::Approx(space.frequency(j)));
}

TEST_CASE("evolution matches the matrix exponential and conserves norm and energy") {
  const auto space = ModelSpace::with_cutoff(1);
  const NBodyHamiltonian h(space, PairPotential({1.0, 0.5}), 3);
  Rng rng(81, 0);
  const auto s = random_nbody(rng, 3, 3);
  for (double t : {0.1, 0.7, 2.5}) {
    const Eigen::MatrixXcd u = (Complex(0, -t) * h.matrix()).exp();
    const auto out = h.evolve(s, t);
    CHECK(max_abs(out.amplitudes - u * s.amplitudes) <= 1e-10);
    CHECK(out.amplitudes.norm() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(h.energy(out) == doctest::Approx(h.energy(s)).epsilon(1e-12));
  }
  CHECK_THROWS_AS(h.evolve(random_nbody(rng, 3, 2), 0.1), ContractViolation);
}

TEST_CASE("marginals") {
  Rng rng(82, 0);
  StateVector phi = random_state(rng, 3, 1.0);
  phi.normalize();
  const auto product = product_state(phi, 4);
  CHECK(product.amplitudes.norm() == doctest::Approx(1.0));
  for (int k = 1; k <= 3; ++k) {
    const Eigen::VectorXcd pk = pure_tensor(phi, k);
    CHECK(max_abs(marginal(product, 3, k).matrix - pk * pk.adjoint()) <= 1e-12);
  }

  const auto& basis = occupation_basis(2, 2);
  NBodyState cat{2, Eigen::VectorXcd::Zero(3)};
  const std::vector<int> left{2, 0};
  const std::vector<int> right{0, 2};
  cat.amplitudes(basis.index_of(left)) = 1.0 / std::sqrt(2.0);
  cat.amplitudes(basis.index_of(right)) = 1.0 / std::sqrt(2.0);
  CHECK(max_abs(marginal(cat, 2, 1).matrix - 0.5 * Eigen::MatrixXcd::Identity(2, 2)) <= 1e-15);

  const auto s = random_nbody(rng, 3, 4);
  for (int k = 1; k <= 4; ++k) {
    const auto rho = marginal(s, 3, k);
    CHECK(rho.matrix.trace().real() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(max_abs(rho.matrix - direct_marginal(s, 3, k)) <= 1e-12);
    if (k < 4) CHECK(max_abs(partial_trace(marginal(s, 3, k + 1), 3).matrix - rho.matrix) <= 1e-12);
  }
  CHECK_THROWS_AS(marginal(s, 3, 5), ContractViolation);
}

TEST_CASE("residual of the hierarchy equations is second order in the step") {
  const auto space = ModelSpace::with_cutoff(1);
  const NBodyHamiltonian h(space, PairPotential({1.0, 0.5}), 4);
  Rng rng(83, 0);
  const auto s = random_nbody(rng, 3, 4);
  const std::vector<double> samples{0.2, 0.5, 0.9};
  const auto coarse = bbgky_residual(h, s, 2, samples, 1e-2);
  const auto fine = bbgky_residual(h, s, 2, samples, 5e-3);
  CHECK(coarse.max > 0.0);
  CHECK(coarse.max / fine.max == doctest::Approx(4.0).epsilon(0.3));
  CHECK_THROWS_AS(bbgky_residual(h, s, 4, samples, 1e-2), ContractViolation);
}

TEST_CASE("chaos experiment") {
  const auto space = ModelSpace::with_modes(2);
  StateVector phi0(2);
  phi0 << 0.8, 0.6;
  const std::vector<int> ns{2, 3, 4, 5, 6};
  const auto free_rows = chaos_experiment(space, phi0, PairPotential({0.0}), ns, 1, 1.0);
  for (const auto& r : free_rows) CHECK(r.epsilon <= 1e-10);
  const auto at_zero = chaos_experiment(space, phi0, PairPotential({1.0, 1.0}), ns, 1, 0.0);
  for (const auto& r : at_zero) CHECK(r.epsilon <= 1e-12);

  const auto rows = chaos_experiment(space, phi0, PairPotential({1.0, 1.0}), ns, 1, 1.0);
  REQUIRE(rows.size() == ns.size());
  for (std::size_t i = 1; i < rows.size(); ++i) CHECK(rows[i].epsilon <= rows[i - 1].epsilon);
  CHECK(rows.back().epsilon < rows.front().epsilon);
  CHECK_THROWS_AS(chaos_experiment(space, phi0, PairPotential({1.0, 1.0}), {600}, 1, 1.0), CapacityError);
  CHECK_THROWS_AS(chaos_experiment(space, phi0, PairPotential({1.0, 1.0}), {10}, 1, 1.0, 1e-4, 5),
                  CapacityError);
}
