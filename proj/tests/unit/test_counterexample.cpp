#include <cmath>

#include "doctest.h"
#include "hierlab/counterexample.hpp"
#include "hierlab/errors.hpp"

using namespace hierlab;

TEST_CASE("ground state profile") {
  CHECK(ground_state_profile(0.0) == doctest::Approx(std::pow(3.0, 0.25)).epsilon(1e-15));
  for (double x : {0.1, 0.7, 2.0, 5.0}) {
    CHECK(ground_state_profile(x) > 0.0);
    CHECK(ground_state_profile(-x) == ground_state_profile(x));
    CHECK(ground_state_profile(x) < ground_state_profile(x / 2));
  }
  const double fine = ground_state_residual(Grid{10.0, 0.01});
  const double coarse = ground_state_residual(Grid{10.0, 0.02});
  CHECK(fine <= 1e-3);
  CHECK(coarse / fine == doctest::Approx(4.0).epsilon(0.1));
}

TEST_CASE("explicit solution amplitude and mass") {
  const Grid grid{20.0, 0.0025};
  const int centre = grid.size() / 2;
  REQUIRE(grid.point(centre) == doctest::Approx(0.0));
  for (auto phase : all_phase_conventions()) {
    for (double t : {0.05, 0.1, 0.2}) {
      const auto u = explicit_solution(t, grid, phase);
      CHECK(std::abs(u.values[centre]) == doctest::Approx(std::pow(3.0, 0.25) / std::sqrt(2 * t)).epsilon(1e-12));
    }
  }
  const auto phase = PhaseConvention::conformal_quarter;
  const double m0 = l2_norm(explicit_solution(0.2, grid, phase));
  for (double t : {0.05, 0.1}) CHECK(std::abs(l2_norm(explicit_solution(t, grid, phase)) - m0) / m0 <= 1e-6);

  const double a = lr_norm(explicit_solution(0.2, grid, phase), 6.0);
  const double b = lr_norm(explicit_solution(0.05, grid, phase), 6.0);
  CHECK(b / a == doctest::Approx(std::pow(4.0, 1.0 / 3.0)).epsilon(1e-6));

  const std::vector<double> times{0.05, 0.1, 0.2};
  CHECK(strichartz_diagnostic(times, grid, phase, 2.0, 2.0) == doctest::Approx(0.15 * m0 * m0).epsilon(1e-6));
  CHECK_THROWS_AS(explicit_solution(0.0, grid, phase), ContractViolation);
}

TEST_CASE("phase selection adopts the convention that solves the equation") {
  const auto sel = select_phase(0.1, Grid{10.0, 0.01}, 1e-3);
  CHECK(sel.selected == PhaseConvention::conformal_quarter);
  REQUIRE(sel.candidates.size() == 4);
  for (std::size_t i = 0; i < sel.candidates.size(); ++i)
    if (sel.candidates[i] == PhaseConvention::conformal_quarter) {
      CHECK(sel.fine[i] < sel.coarse[i] / 3.0);
    } else {
      CHECK(sel.fine[i] > 1.0);
    }
  CHECK(to_string(PhaseConvention::printed) != to_string(PhaseConvention::conformal_quarter));
}

TEST_CASE("pairings") {
  const Grid grid{5.0, 0.01};
  const auto g = gaussian(grid, 0.0, 1.0);
  const GridFunction zero{grid, std::vector<std::complex<double>>(g.values.size(), 0.0)};
  CHECK(std::abs(pairing(zero, g)) == 0.0);
  CHECK(pairing(g, g).real() == doctest::Approx(std::sqrt(M_PI / 2.0)).epsilon(1e-10));
  CHECK_THROWS_AS(pairing(g, gaussian(Grid{4.0, 0.01})), ContractViolation);
}

TEST_CASE("nonuniqueness demo guards") {
  const Grid grid{2.0, 0.01};
  const std::vector<GridFunction> tests{gaussian(grid)};
  CHECK_THROWS_AS(nonuniqueness_demo({0.2, 0.05}, grid, tests, PhaseConvention::conformal_quarter), ResolutionError);
  CHECK_THROWS_AS(nonuniqueness_demo({0.2, 0.3}, grid, tests, PhaseConvention::conformal_quarter), ContractViolation);
  CHECK_THROWS_AS(nonuniqueness_demo({}, grid, tests, PhaseConvention::conformal_quarter), ContractViolation);
}

TEST_CASE("pairings shrink as the solution concentrates") {
  const Grid grid{20.0, 1e-3};
  const std::vector<GridFunction> tests{gaussian(grid, 0.0), gaussian(grid, 0.5)};
  const auto r = nonuniqueness_demo({0.2, 0.1, 0.05, 0.025, 0.01}, grid, tests,
                                    PhaseConvention::conformal_quarter);
  CHECK(r.mass_spread <= 1e-6);
  for (std::size_t j = 0; j < tests.size(); ++j) {
    CHECK(r.final_ratio[j] < 0.5);
    CHECK(r.monotone[j]);
  }
}
