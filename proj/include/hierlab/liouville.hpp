#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "hierlab/hierarchy.hpp"

namespace hierlab {

struct MeasureTrajectory {
  std::vector<double> times;
  std::vector<AtomicMeasure> measures;
  std::string generated_by;
};

struct Path {
  double weight = 0;
  StateVector start;
  std::vector<StateVector> states;
};

struct PathEnsemble {
  std::vector<double> times;
  std::vector<Path> paths;
};

struct Transport {
  MeasureTrajectory trajectory;
  PathEnsemble paths;
};

Transport liouville_from_flow(const AtomicMeasure& mu0, const VectorField& vf, double t0,
                              double t1, double dt);

// |K(t)| with K(t) = mu_t(e) - mu_t0(e) - 2 i pi int mu_tau(e Re<v, y>) dtau,
// e = exp(2 i pi Re<y, .>).
ResidualCurve characteristic_residual(const MeasureTrajectory& traj, const VectorField& vf,
                                      const StateVector& y, int gauge_nodes = kDefaultGaugeNodes);

// phi(t, x) = chi(t) prod_l psi_l(Re<z_l, x>_{-sigma}) with
//   psi(r) = trig(2 pi frequency r) * bump(r / scale), trig in {cos, sin}.
// bump equals 1 on [-1/2, 1/2] and vanishes outside (-1, 1); chi is a smooth bump on
// [window_start, window_end].
class CylindricalTest {
 public:
  struct Direction {
    StateVector z;
    double frequency = 1.0;
    double scale = 1.0;
    bool use_sine = false;
  };

  CylindricalTest(std::vector<Direction> directions, double window_start, double window_end);

  double value(double t, const ModelSpace& space, const StateVector& x) const;
  double time_derivative(double t, const ModelSpace& space, const StateVector& x) const;
  // Re<v, grad phi>_{-sigma}
  double directional_derivative(double t, const ModelSpace& space, const StateVector& x,
                                const StateVector& v) const;

  double window_start() const noexcept { return window_start_; }
  double window_end() const noexcept { return window_end_; }
  const std::vector<Direction>& directions() const noexcept { return directions_; }

 private:
  double profile(const ModelSpace& space, const StateVector& x) const;
  double window(double t) const;
  double window_derivative(double t) const;

  std::vector<Direction> directions_;
  double window_start_;
  double window_end_;
};

// int int (d_t phi + Re<v, grad phi>_{-sigma}) dmu_t dt with Simpson in time.
double weak_form_residual(const MeasureTrajectory& traj, const ModelSpace& space,
                          const VectorField& vf, const CylindricalTest& test);

struct TestBattery {
  std::vector<StateVector> vectors;
  std::vector<CylindricalTest> cylinders;
};

// 16 vectors (every basis vector, then random ones in Z_sigma) and 8 cylindrical tests.
TestBattery make_test_battery(const ModelSpace& space, double t0, double t1,
                              std::uint64_t seed = 0xA11CE);

struct DualityReport {
  double tolerance = 0;
  std::vector<ResidualCurve> hierarchy;       // k = 1..K_max
  std::vector<ResidualCurve> characteristic;  // one per battery vector
  std::vector<double> weak_form;              // one per cylindrical test
  double hierarchy_max = 0;
  double characteristic_max = 0;
  double weak_form_max = 0;
  bool hierarchy_small = false;
  bool characteristic_small = false;
  bool pass = false;  // both small or both large
};

DualityReport duality_check(const MeasureTrajectory& traj, const ModelSpace& space,
                            const VectorField& vf, int max_order, const TestBattery& battery,
                            double tolerance = 1e-6);

// Replaces one atom at one grid time.
MeasureTrajectory corrupt_trajectory(const MeasureTrajectory& traj, std::size_t time_index,
                                     std::size_t atom_index, const StateVector& replacement);

struct UniquenessReport {
  bool precondition_holds = false;
  int discriminating_order = 0;     // first k with differing gamma^(k), 0 if none
  double initial_defect = 0;        // trace-norm defect at that k
  double discriminating_moment = 0; // largest moment gap over the probe vectors at that k
  double max_defect = 0;            // max over t, k of ||gamma_a - gamma_b||_tr
  bool pass = false;
};

UniquenessReport uniqueness_experiment(const AtomicMeasure& a, const AtomicMeasure& b,
                                       const VectorField& vf, double t0, double t1, double dt,
                                       int max_order, std::span<const StateVector> probes,
                                       double tolerance = 1e-10);

}  // namespace hierlab
