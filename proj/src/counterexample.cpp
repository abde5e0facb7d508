#include "hierlab/counterexample.hpp"

#include <algorithm>
#include <cmath>

#include "hierlab/errors.hpp"

namespace hierlab {

namespace {
using cd = std::complex<double>;
}

int Grid::size() const { return static_cast<int>(std::lround(2.0 * half_width / spacing)) + 1; }

double ground_state_profile(double x) {
  // sech^{1/2}(2x) = sqrt(2 e^{-2|x|} / (1 + e^{-4|x|})), stable for large |x|.
  const double e = std::exp(-2.0 * std::abs(x));
  return std::pow(3.0, 0.25) * std::sqrt(2.0 * e / (1.0 + e * e));
}

GridFunction ground_state(const Grid& grid) {
  GridFunction f{grid, {}};
  f.values.reserve(static_cast<std::size_t>(grid.size()));
  for (int i = 0; i < grid.size(); ++i) f.values.emplace_back(ground_state_profile(grid.point(i)));
  return f;
}

double ground_state_residual(const Grid& grid) {
  const double h = grid.spacing;
  double worst = 0.0;
  for (int i = 1; i + 1 < grid.size(); ++i) {
    const double fm = ground_state_profile(grid.point(i - 1));
    const double f0 = ground_state_profile(grid.point(i));
    const double fp = ground_state_profile(grid.point(i + 1));
    const double second = (fp - 2.0 * f0 + fm) / (h * h);
    worst = std::max(worst, std::abs(-second + f0 - std::pow(f0, 5)));
  }
  return worst;
}

std::string to_string(PhaseConvention p) {
  switch (p) {
    case PhaseConvention::printed: return "exp(i x^2) exp(i/t)";
    case PhaseConvention::conformal_minus: return "exp(i x^2/(4t)) exp(-i/t)";
    case PhaseConvention::conformal_plus: return "exp(i x^2/(4t)) exp(+i/t)";
    case PhaseConvention::conformal_quarter: return "exp(i x^2/(4t)) exp(-i/(4t))";
  }
  return "unknown";
}

std::vector<PhaseConvention> all_phase_conventions() {
  return {PhaseConvention::printed, PhaseConvention::conformal_minus,
          PhaseConvention::conformal_plus, PhaseConvention::conformal_quarter};
}

namespace {

double phase_angle(PhaseConvention p, double t, double x) {
  switch (p) {
    case PhaseConvention::printed: return x * x + 1.0 / t;
    case PhaseConvention::conformal_minus: return x * x / (4.0 * t) - 1.0 / t;
    case PhaseConvention::conformal_plus: return x * x / (4.0 * t) + 1.0 / t;
    case PhaseConvention::conformal_quarter: return x * x / (4.0 * t) - 1.0 / (4.0 * t);
  }
  return 0.0;
}

cd solution_value(double t, double x, PhaseConvention p) {
  return std::polar(ground_state_profile(x / (2.0 * t)) / std::sqrt(2.0 * t), phase_angle(p, t, x));
}

}  // namespace

GridFunction explicit_solution(double t, const Grid& grid, PhaseConvention phase) {
  if (!(t > 0.0)) throw ContractViolation("explicit solution needs t > 0");
  GridFunction f{grid, {}};
  f.values.reserve(static_cast<std::size_t>(grid.size()));
  for (int i = 0; i < grid.size(); ++i) f.values.push_back(solution_value(t, grid.point(i), phase));
  return f;
}

double nls_residual(double t, const Grid& grid, double time_step, PhaseConvention phase) {
  if (!(t - time_step > 0.0)) throw ContractViolation("residual stencil crosses t = 0");
  const double h = grid.spacing;
  double worst = 0.0;
  for (int i = 1; i + 1 < grid.size(); ++i) {
    const double x = grid.point(i);
    const cd u = solution_value(t, x, phase);
    const cd ut = (solution_value(t + time_step, x, phase) - solution_value(t - time_step, x, phase)) /
                  (2.0 * time_step);
    const cd uxx = (solution_value(t, x + h, phase) - 2.0 * u + solution_value(t, x - h, phase)) / (h * h);
    const double a = std::norm(u);
    worst = std::max(worst, std::abs(cd(0.0, 1.0) * ut + uxx + a * a * u));
  }
  return worst;
}

PhaseSelection select_phase(double t, const Grid& grid, double time_step) {
  PhaseSelection sel;
  sel.candidates = all_phase_conventions();
  const Grid fine{grid.half_width, grid.spacing / 2.0};
  double best = 0.0;
  bool found = false;
  for (auto p : sel.candidates) {
    sel.coarse.push_back(nls_residual(t, grid, time_step, p));
    sel.fine.push_back(nls_residual(t, fine, time_step / 2.0, p));
    const double ratio = sel.coarse.back() / sel.fine.back();
    if (ratio > 2.0 && (!found || sel.fine.back() < best)) {
      sel.selected = p;
      best = sel.fine.back();
      found = true;
    }
  }
  if (!found) throw ContractViolation("no phase candidate has a residual that decays under refinement");
  return sel;
}

double l2_norm(const GridFunction& f) {
  double s = 0.0;
  for (const auto& v : f.values) s += std::norm(v);
  return std::sqrt(f.grid.spacing * s);
}

double lr_norm(const GridFunction& f, double r) {
  double s = 0.0;
  for (const auto& v : f.values) s += std::pow(std::abs(v), r);
  return std::pow(f.grid.spacing * s, 1.0 / r);
}

std::complex<double> pairing(const GridFunction& f, const GridFunction& g) {
  if (f.values.size() != g.values.size()) throw ContractViolation("pairing on different grids");
  cd s = 0.0;
  for (std::size_t i = 0; i < f.values.size(); ++i) s += std::conj(f.values[i]) * g.values[i];
  return f.grid.spacing * s;
}

GridFunction gaussian(const Grid& grid, double center, double width) {
  GridFunction f{grid, {}};
  for (int i = 0; i < grid.size(); ++i) {
    const double y = (grid.point(i) - center) / width;
    f.values.emplace_back(std::exp(-y * y));
  }
  return f;
}

double strichartz_diagnostic(const std::vector<double>& times, const Grid& grid,
                             PhaseConvention phase, double r, double q) {
  double total = 0.0;
  for (std::size_t i = 1; i < times.size(); ++i) {
    const double a = std::pow(lr_norm(explicit_solution(times[i - 1], grid, phase), r), q);
    const double b = std::pow(lr_norm(explicit_solution(times[i], grid, phase), r), q);
    total += 0.5 * std::abs(times[i] - times[i - 1]) * (a + b);
  }
  return total;
}

NonuniquenessReport nonuniqueness_demo(const std::vector<double>& t_list, const Grid& grid,
                                       const std::vector<GridFunction>& tests,
                                       PhaseConvention phase) {
  if (t_list.empty()) throw ContractViolation("empty time list");
  for (std::size_t i = 0; i < t_list.size(); ++i) {
    if (t_list[i] < 10.0 * grid.spacing)
      throw ResolutionError("t = " + std::to_string(t_list[i]) + " is below the grid resolution 10h = " +
                            std::to_string(10.0 * grid.spacing) + "; refine h or stop the time list earlier");
    if (i > 0 && !(t_list[i] < t_list[i - 1])) throw ContractViolation("time list must decrease");
  }
  NonuniquenessReport r;
  r.times = t_list;
  r.pairings.assign(tests.size(), {});
  for (double t : t_list) {
    const GridFunction u = explicit_solution(t, grid, phase);
    r.mass.push_back(l2_norm(u));
    for (std::size_t j = 0; j < tests.size(); ++j) r.pairings[j].push_back(std::abs(pairing(u, tests[j])));
  }
  const auto [lo, hi] = std::minmax_element(r.mass.begin(), r.mass.end());
  r.mass_spread = (*hi - *lo) / *hi;
  bool all_small = true;
  for (const auto& p : r.pairings) {
    const double ratio = p.front() > 0.0 ? p.back() / p.front() : 0.0;
    r.final_ratio.push_back(ratio);
    bool mono = true;
    for (std::size_t i = 1; i < p.size(); ++i)
      if (p[i] > 1.1 * p[i - 1]) mono = false;
    r.monotone.push_back(mono);
    if (!(ratio < 0.05)) all_small = false;
  }
  r.nonunique = all_small && r.mass_spread < 1e-4;
  return r;
}

}  // namespace hierlab
