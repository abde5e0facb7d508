#include "hierlab/quadrature.hpp"

#include <cmath>
#include <string>

namespace hierlab {

std::vector<double> cumulative_weights(std::size_t index, std::size_t nodes, double h) {
  if (index >= nodes) throw std::invalid_argument("quadrature index outside grid");
  std::vector<double> w(nodes, 0.0);
  if (index == 0) return w;
  if (nodes < 3) {
    w[0] = w[1] = 0.5 * h;
    return w;
  }
  auto simpson_to = [&](std::size_t end) {
    for (std::size_t i = 2; i <= end; i += 2) {
      w[i - 2] += h / 3.0;
      w[i - 1] += 4.0 * h / 3.0;
      w[i] += h / 3.0;
    }
  };
  if (index % 2 == 0) {
    simpson_to(index);
  } else if (index == 1) {
    w[0] = 5.0 * h / 12.0;
    w[1] = 8.0 * h / 12.0;
    w[2] = -h / 12.0;
  } else {
    simpson_to(index - 3);
    const double c = 3.0 * h / 8.0;
    w[index - 3] += c;
    w[index - 2] += 3.0 * c;
    w[index - 1] += 3.0 * c;
    w[index] += c;
  }
  return w;
}

double uniform_step(std::span<const double> times) {
  if (times.size() < 2) throw std::invalid_argument("time grid needs at least two points");
  const double h = (times.back() - times.front()) / static_cast<double>(times.size() - 1);
  if (!(h > 0)) throw std::invalid_argument("time grid must increase");
  for (std::size_t i = 1; i < times.size(); ++i) {
    if (std::abs((times[i] - times[i - 1]) - h) > 1e-9 * h)
      throw std::invalid_argument("non-uniform time grid at index " + std::to_string(i));
  }
  return h;
}

}  // namespace hierlab
