#pragma once

#include <complex>
#include <string>
#include <vector>

namespace hierlab {

struct Grid {
  double half_width = 20.0;
  double spacing = 0.005;

  int size() const;
  double point(int i) const { return -half_width + spacing * i; }
};

struct GridFunction {
  Grid grid;
  std::vector<std::complex<double>> values;
};

// 3^{1/4} sech^{1/2}(2x), the positive solution of -f'' + f - f^5 = 0.
double ground_state_profile(double x);
GridFunction ground_state(const Grid& grid);
// max over interior points of |-f'' + f - f^5| with the centered stencil.
double ground_state_residual(const Grid& grid);

enum class PhaseConvention {
  printed,            // e^{i x^2} e^{i/t}
  conformal_minus,    // e^{i x^2/(4t)} e^{-i/t}
  conformal_plus,     // e^{i x^2/(4t)} e^{+i/t}
  conformal_quarter,  // e^{i x^2/(4t)} e^{-i/(4t)}
};

std::string to_string(PhaseConvention p);
std::vector<PhaseConvention> all_phase_conventions();

// (2t)^{-1/2} P(t, x) f(x / 2t)
GridFunction explicit_solution(double t, const Grid& grid, PhaseConvention phase);

// max over interior points of |i u_t + u'' + |u|^4 u| with centered differences in t and x.
double nls_residual(double t, const Grid& grid, double time_step, PhaseConvention phase);

struct PhaseSelection {
  PhaseConvention selected = PhaseConvention::conformal_quarter;
  std::vector<PhaseConvention> candidates;
  std::vector<double> coarse;  // residual at (h, dt)
  std::vector<double> fine;    // residual at (h/2, dt/2)
};

// Adopts the candidate whose residual decays under refinement and is smallest on the fine grid.
PhaseSelection select_phase(double t, const Grid& grid, double time_step);

double l2_norm(const GridFunction& f);
double lr_norm(const GridFunction& f, double r);
std::complex<double> pairing(const GridFunction& f, const GridFunction& g);
GridFunction gaussian(const Grid& grid, double center = 0.0, double width = 1.0);

// int ||u(t)||_{L^r}^q dt over the sample times, trapezoid rule.
double strichartz_diagnostic(const std::vector<double>& times, const Grid& grid,
                             PhaseConvention phase, double r, double q);

struct NonuniquenessReport {
  std::vector<double> times;
  std::vector<double> mass;
  std::vector<std::vector<double>> pairings;  // [test][time]
  double mass_spread = 0;                     // relative (max - min) / max
  std::vector<double> final_ratio;            // last / first pairing per test
  std::vector<bool> monotone;                 // nonincreasing within 10% slack
  bool nonunique = false;
};

// t_list must decrease; throws ResolutionError when a time is below 10 h.
NonuniquenessReport nonuniqueness_demo(const std::vector<double>& t_list, const Grid& grid,
                                       const std::vector<GridFunction>& tests,
                                       PhaseConvention phase);

}  // namespace hierlab
