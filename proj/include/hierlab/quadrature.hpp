#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

namespace hierlab {

// Weights w with integral(t_0..t_i) = sum_j w[j] f_j on a uniform grid of step h.
// Even i: composite Simpson. Odd i >= 3: Simpson to i-3 plus the 3/8 rule.
// i = 1: quadratic interpolant through f_0, f_1, f_2 (needs at least 3 nodes).
std::vector<double> cumulative_weights(std::size_t index, std::size_t nodes, double h);

// Running integrals at every node, for any type with += and scalar *.
template <class T>
std::vector<T> cumulative_integral(std::span<const T> values, double h, const T& zero) {
  const std::size_t n = values.size();
  std::vector<T> out(n, zero);
  if (n < 3) {
    if (n == 2) out[1] = (0.5 * h) * (values[0] + values[1]);
    return out;
  }
  std::vector<T> even(n, zero);
  for (std::size_t i = 2; i < n; i += 2)
    even[i] = even[i - 2] + (h / 3.0) * (values[i - 2] + 4.0 * values[i - 1] + values[i]);
  for (std::size_t i = 0; i < n; ++i) {
    if (i % 2 == 0) {
      out[i] = even[i];
    } else if (i == 1) {
      out[i] = (h / 12.0) * (5.0 * values[0] + 8.0 * values[1] - values[2]);
    } else {
      out[i] = even[i - 3] + (3.0 * h / 8.0) * (values[i - 3] + 3.0 * values[i - 2] +
                                                 3.0 * values[i - 1] + values[i]);
    }
  }
  return out;
}

// Grid step, or throws std::invalid_argument if the grid is not uniform to rel. 1e-9.
double uniform_step(std::span<const double> times);

}  // namespace hierlab
