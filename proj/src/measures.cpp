#include "hierlab/measures.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "hierlab/errors.hpp"

namespace hierlab {

AtomicMeasure::AtomicMeasure(std::vector<Atom> atoms, double radius)
    : atoms_(std::move(atoms)), radius_(radius) {
  if (atoms_.empty()) throw ContractViolation("measure needs at least one atom");
  dim_ = static_cast<int>(atoms_.front().point.size());
  double total = 0.0;
  for (const auto& a : atoms_) {
    if (static_cast<int>(a.point.size()) != dim_)
      throw ContractViolation("atoms have different dimensions");
    if (!(a.weight > 0.0) || !std::isfinite(a.weight))
      throw ContractViolation("atom weights must be positive");
    if (a.point.norm() > radius_ + 1e-12)
      throw ContractViolation("atom outside the ball of radius " + std::to_string(radius_));
    total += a.weight;
  }
  if (std::abs(total - 1.0) > 1e-9)
    throw ContractViolation("weights sum to " + std::to_string(total) + ", not a probability");
  for (auto& a : atoms_) a.weight /= total;
}

AtomicMeasure AtomicMeasure::dirac(StateVector point, double radius) {
  return AtomicMeasure({Atom{1.0, std::move(point)}}, radius);
}

double moment(const AtomicMeasure& mu, const StateVector& y, int k) {
  double sum = 0.0;
  for (const auto& a : mu.atoms()) sum += a.weight * std::pow(std::norm(y.dot(a.point)), k);
  return sum;
}

Complex characteristic(const AtomicMeasure& mu, const StateVector& y, int gauge_nodes) {
  Complex sum = 0.0;
  for (const auto& a : mu.atoms()) {
    const Complex pairing = y.dot(a.point);
    Complex orbit = 0.0;
    for (int j = 0; j < gauge_nodes; ++j) {
      const double theta = 2.0 * std::numbers::pi * j / gauge_nodes;
      const double r = (std::polar(1.0, theta) * pairing).real();
      orbit += std::polar(1.0, 2.0 * std::numbers::pi * r);
    }
    sum += a.weight * orbit / static_cast<double>(gauge_nodes);
  }
  return sum;
}

AtomicMeasure pushforward(const AtomicMeasure& mu, const StateMap& f) {
  static constexpr double kPhases[] = {0.7, 2.1, -1.3};
  std::vector<Atom> out;
  out.reserve(static_cast<std::size_t>(mu.size()));
  for (const auto& a : mu.atoms()) {
    StateVector image = f(a.point);
    for (double th : kPhases) {
      const Complex phase = std::polar(1.0, th);
      const double defect = (f(phase * a.point) - phase * image).norm();
      if (defect > 1e-10 * (1.0 + image.norm()))
        throw ContractViolation("map is not U(1)-equivariant (defect " + std::to_string(defect) + ")");
    }
    out.push_back(Atom{a.weight, std::move(image)});
  }
  return AtomicMeasure(std::move(out), mu.radius());
}

double weak_narrow_defect(const AtomicMeasure& mu, const AtomicMeasure& nu,
                          std::span<const StateVector> tests, int k_max) {
  if (tests.empty()) throw ContractViolation("weak_narrow_defect needs test vectors");
  double worst = 0.0;
  for (const auto& y : tests)
    for (int k = 1; k <= k_max; ++k)
      worst = std::max(worst, std::abs(moment(mu, y, k) - moment(nu, y, k)));
  return worst;
}

double tightness_defect(const AtomicMeasure& mu, int first_tail_index, double eps) {
  if (first_tail_index < 0 || first_tail_index > mu.dim())
    throw ContractViolation("tail index outside the mode range");
  double weight = 0.0;
  for (const auto& a : mu.atoms()) {
    const double tail = a.point.tail(mu.dim() - first_tail_index).squaredNorm();
    if (tail >= eps) weight += a.weight;
  }
  return weight;
}

AtomicMeasure rotate_atoms(const AtomicMeasure& mu, std::span<const double> phases) {
  if (static_cast<int>(phases.size()) != mu.size())
    throw ContractViolation("one phase per atom required");
  std::vector<Atom> out;
  for (int i = 0; i < mu.size(); ++i) {
    const auto& a = mu.atoms()[static_cast<std::size_t>(i)];
    out.push_back(Atom{a.weight, std::polar(1.0, phases[static_cast<std::size_t>(i)]) * a.point});
  }
  return AtomicMeasure(std::move(out), mu.radius());
}

AtomicMeasure mixture(const AtomicMeasure& mu, const AtomicMeasure& nu, double t) {
  if (!(t > 0.0 && t < 1.0)) throw ContractViolation("mixture parameter must lie in (0,1)");
  std::vector<Atom> out;
  for (const auto& a : mu.atoms()) out.push_back(Atom{t * a.weight, a.point});
  for (const auto& a : nu.atoms()) out.push_back(Atom{(1.0 - t) * a.weight, a.point});
  return AtomicMeasure(std::move(out), std::max(mu.radius(), nu.radius()));
}

nlohmann::json to_json(const AtomicMeasure& mu) {
  nlohmann::json atoms = nlohmann::json::array();
  for (const auto& a : mu.atoms()) {
    std::vector<double> re, im;
    for (Eigen::Index i = 0; i < a.point.size(); ++i) {
      re.push_back(a.point(i).real());
      im.push_back(a.point(i).imag());
    }
    atoms.push_back({{"w", a.weight}, {"re", re}, {"im", im}});
  }
  return {{"atoms", atoms}};
}

AtomicMeasure measure_from_json(const nlohmann::json& j, double radius) {
  std::vector<Atom> atoms;
  for (const auto& a : j.at("atoms")) {
    const auto re = a.at("re").get<std::vector<double>>();
    const auto im = a.contains("im") ? a.at("im").get<std::vector<double>>()
                                     : std::vector<double>(re.size(), 0.0);
    if (re.size() != im.size()) throw ContractViolation("atom re/im lengths differ");
    StateVector x(static_cast<Eigen::Index>(re.size()));
    for (std::size_t i = 0; i < re.size(); ++i) x(static_cast<Eigen::Index>(i)) = Complex(re[i], im[i]);
    atoms.push_back(Atom{a.at("w").get<double>(), std::move(x)});
  }
  return AtomicMeasure(std::move(atoms), radius);
}

}  // namespace hierlab
