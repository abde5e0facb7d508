#include "hierlab/symtensor.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numeric>

#include "hierlab/errors.hpp"

namespace hierlab {

namespace {

double factorial(int n) {
  double f = 1.0;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

void enumerate(int modes, int remaining, int position, std::vector<int>& current,
               std::vector<std::vector<int>>& out) {
  if (position == modes - 1) {
    current[static_cast<std::size_t>(position)] = remaining;
    out.push_back(current);
    return;
  }
  for (int a = remaining; a >= 0; --a) {
    current[static_cast<std::size_t>(position)] = a;
    enumerate(modes, remaining - a, position + 1, current, out);
  }
}

bool colex_less(const std::vector<int>& a, const std::vector<int>& b) {
  for (std::size_t i = a.size(); i-- > 0;) {
    if (a[i] != b[i]) return a[i] < b[i];
  }
  return false;
}

void check_order(int order, int max_order) {
  if (order < 1) throw ContractViolation("tensor order must be positive");
  if (order > max_order || order > kHardMaxOrder)
    throw CapacityError("tensor order " + std::to_string(order) + " exceeds capacity " +
                        std::to_string(std::min(max_order, kHardMaxOrder)));
}

}  // namespace

OccupationBasis::OccupationBasis(int modes, int order) : modes_(modes), order_(order) {
  if (modes < 1 || order < 0) throw ContractViolation("invalid occupation basis shape");
  const double bits = modes * std::log2(static_cast<double>(order) + 1.0);
  if (bits > 63.0) throw CapacityError("occupation basis too large to index");
  std::vector<std::vector<int>> all;
  std::vector<int> current(static_cast<std::size_t>(modes), 0);
  enumerate(modes, order, 0, current, all);
  std::sort(all.begin(), all.end(), colex_less);
  size_ = static_cast<int>(all.size());
  occupations_.reserve(all.size() * static_cast<std::size_t>(modes));
  multinomial_root_.reserve(all.size());
  const double kf = factorial(order);
  for (int i = 0; i < size_; ++i) {
    const auto& alpha = all[static_cast<std::size_t>(i)];
    occupations_.insert(occupations_.end(), alpha.begin(), alpha.end());
    double denom = 1.0;
    for (int a : alpha) denom *= factorial(a);
    multinomial_root_.push_back(std::sqrt(kf / denom));
    lookup_.emplace(key(alpha), i);
  }
}

std::uint64_t OccupationBasis::key(std::span<const int> alpha) const {
  std::uint64_t k = 0;
  for (int a : alpha) k = k * static_cast<std::uint64_t>(order_ + 1) + static_cast<std::uint64_t>(a);
  return k;
}

int OccupationBasis::index_of(std::span<const int> alpha) const {
  if (static_cast<int>(alpha.size()) != modes_) return -1;
  int total = 0;
  for (int a : alpha) {
    if (a < 0) return -1;
    total += a;
  }
  if (total != order_) return -1;
  auto it = lookup_.find(key(alpha));
  return it == lookup_.end() ? -1 : it->second;
}

const OccupationBasis& occupation_basis(int modes, int order) {
  static std::mutex mutex;
  static std::map<std::pair<int, int>, std::unique_ptr<OccupationBasis>> cache;
  std::lock_guard<std::mutex> lock(mutex);
  auto& slot = cache[{modes, order}];
  if (!slot) slot = std::make_unique<OccupationBasis>(modes, order);
  return *slot;
}

Eigen::VectorXcd pure_tensor(const StateVector& x, int order, int max_order) {
  check_order(order, max_order);
  const auto& basis = occupation_basis(static_cast<int>(x.size()), order);
  Eigen::VectorXcd out(basis.size());
  for (int i = 0; i < basis.size(); ++i) {
    const auto alpha = basis.occupation(i);
    Complex c = basis.multinomial_root(i);
    for (std::size_t j = 0; j < alpha.size(); ++j)
      for (int p = 0; p < alpha[j]; ++p) c *= x(static_cast<Eigen::Index>(j));
    out(i) = c;
  }
  return out;
}

Eigen::VectorXcd symmetric_insertion(const StateVector& x, const StateVector& v, int order) {
  check_order(order, kHardMaxOrder);
  const int m = static_cast<int>(x.size());
  const auto& basis = occupation_basis(m, order);
  Eigen::VectorXcd out(basis.size());
  for (int i = 0; i < basis.size(); ++i) {
    const auto alpha = basis.occupation(i);
    Complex sum = 0.0;
    for (int l = 0; l < m; ++l) {
      if (alpha[static_cast<std::size_t>(l)] == 0) continue;
      Complex term = static_cast<double>(alpha[static_cast<std::size_t>(l)]) * v(l);
      for (int j = 0; j < m; ++j) {
        const int power = alpha[static_cast<std::size_t>(j)] - (j == l ? 1 : 0);
        for (int p = 0; p < power; ++p) term *= x(j);
      }
      sum += term;
    }
    out(i) = basis.multinomial_root(i) * sum / static_cast<double>(order);
  }
  return out;
}

SymOperator rank_one_projector(const StateVector& x, int order, int max_order) {
  const Eigen::VectorXcd v = pure_tensor(x, order, max_order);
  return SymOperator{order, v * v.adjoint(), true};
}

SymOperator partial_trace(const SymOperator& gamma, int modes) {
  const int k = gamma.order - 1;
  if (k < 1) throw ContractViolation("partial trace needs order >= 2");
  const auto& big = occupation_basis(modes, gamma.order);
  if (gamma.dim() != big.size()) throw ContractViolation("partial trace: dimension mismatch");
  const auto& small = occupation_basis(modes, k);
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(small.size(), small.size());
  std::vector<int> a(static_cast<std::size_t>(modes));
  std::vector<int> b(static_cast<std::size_t>(modes));
  std::vector<int> lifted_row(static_cast<std::size_t>(small.size() * modes));
  for (int i = 0; i < small.size(); ++i) {
    auto alpha = small.occupation(i);
    for (int l = 0; l < modes; ++l) {
      std::copy(alpha.begin(), alpha.end(), a.begin());
      ++a[static_cast<std::size_t>(l)];
      lifted_row[static_cast<std::size_t>(i * modes + l)] = big.index_of(a);
    }
  }
  for (int i = 0; i < small.size(); ++i) {
    const auto alpha = small.occupation(i);
    for (int j = 0; j < small.size(); ++j) {
      const auto beta = small.occupation(j);
      Complex sum = 0.0;
      for (int l = 0; l < modes; ++l) {
        const double f = std::sqrt((alpha[static_cast<std::size_t>(l)] + 1.0) *
                                   (beta[static_cast<std::size_t>(l)] + 1.0));
        sum += f * gamma.matrix(lifted_row[static_cast<std::size_t>(i * modes + l)],
                                lifted_row[static_cast<std::size_t>(j * modes + l)]);
      }
      out(i, j) = sum / static_cast<double>(k + 1);
    }
  }
  return SymOperator{k, std::move(out), gamma.hermitian};
}

double trace_norm(const Eigen::MatrixXcd& m) {
  if (m.size() == 0) return 0.0;
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m);
  return svd.singularValues().sum();
}

double hermitian_trace_norm(const Eigen::MatrixXcd& m) {
  if (m.size() == 0) return 0.0;
  const Eigen::MatrixXcd h = 0.5 * (m + m.adjoint());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h, Eigen::EigenvaluesOnly);
  return es.eigenvalues().cwiseAbs().sum();
}

Eigen::VectorXd occupation_weights(const ModelSpace& space, int order, double tau) {
  const auto& basis = occupation_basis(space.dim(), order);
  Eigen::VectorXd w(basis.size());
  for (int i = 0; i < basis.size(); ++i) {
    const auto alpha = basis.occupation(i);
    double log_w = 0.0;
    for (int j = 0; j < space.dim(); ++j)
      log_w += 0.5 * tau * alpha[static_cast<std::size_t>(j)] * std::log(space.weight(j));
    w(i) = std::exp(log_w);
  }
  return w;
}

double weighted_trace_norm(const SymOperator& gamma, const ModelSpace& space, double tau) {
  const Eigen::VectorXd w = occupation_weights(space, gamma.order, tau);
  const Eigen::MatrixXcd weighted = w.asDiagonal() * gamma.matrix * w.asDiagonal();
  return gamma.hermitian ? hermitian_trace_norm(weighted) : trace_norm(weighted);
}

nlohmann::json to_json(const SymOperator& op, int modes) {
  const auto& basis = occupation_basis(modes, op.order);
  nlohmann::json j;
  j["k"] = op.order;
  j["dim"] = op.dim();
  auto& b = j["basis"] = nlohmann::json::array();
  for (int i = 0; i < basis.size(); ++i) {
    const auto alpha = basis.occupation(i);
    b.push_back(std::vector<int>(alpha.begin(), alpha.end()));
  }
  auto& re = j["re"] = nlohmann::json::array();
  auto& im = j["im"] = nlohmann::json::array();
  for (int r = 0; r < op.dim(); ++r) {
    std::vector<double> rr, ii;
    for (int c = 0; c < op.dim(); ++c) {
      rr.push_back(op.matrix(r, c).real());
      ii.push_back(op.matrix(r, c).imag());
    }
    re.push_back(rr);
    im.push_back(ii);
  }
  return j;
}

SymOperator sym_operator_from_json(const nlohmann::json& j) {
  SymOperator op;
  op.order = j.at("k").get<int>();
  const int dim = j.at("dim").get<int>();
  op.matrix.resize(dim, dim);
  const auto& re = j.at("re");
  const auto& im = j.at("im");
  for (int r = 0; r < dim; ++r)
    for (int c = 0; c < dim; ++c)
      op.matrix(r, c) = Complex(re.at(r).at(c).get<double>(), im.at(r).at(c).get<double>());
  op.hermitian = op.matrix.isApprox(op.matrix.adjoint(), 1e-14);
  return op;
}

namespace full_tensor {

long long power(int modes, int order) {
  long long p = 1;
  for (int i = 0; i < order; ++i) p *= modes;
  return p;
}

Eigen::VectorXcd product(std::span<const StateVector> factors) {
  Eigen::VectorXcd out = Eigen::VectorXcd::Ones(1);
  for (const auto& f : factors) {
    Eigen::VectorXcd next(out.size() * f.size());
    for (Eigen::Index i = 0; i < out.size(); ++i) next.segment(i * f.size(), f.size()) = out(i) * f;
    out = std::move(next);
  }
  return out;
}

Eigen::VectorXcd tensor_power(const StateVector& x, int order) {
  std::vector<StateVector> factors(static_cast<std::size_t>(order), x);
  return product(factors);
}

namespace {
std::vector<int> digits(long long index, int modes, int order) {
  std::vector<int> d(static_cast<std::size_t>(order));
  for (int i = order - 1; i >= 0; --i) {
    d[static_cast<std::size_t>(i)] = static_cast<int>(index % modes);
    index /= modes;
  }
  return d;
}
}  // namespace

Eigen::MatrixXcd symmetric_embedding(int modes, int order) {
  const auto& basis = occupation_basis(modes, order);
  const long long n = power(modes, order);
  Eigen::MatrixXcd e = Eigen::MatrixXcd::Zero(n, basis.size());
  std::vector<int> alpha(static_cast<std::size_t>(modes));
  for (long long s = 0; s < n; ++s) {
    std::fill(alpha.begin(), alpha.end(), 0);
    for (int d : digits(s, modes, order)) ++alpha[static_cast<std::size_t>(d)];
    const int idx = basis.index_of(alpha);
    e(s, idx) = 1.0 / basis.multinomial_root(idx);
  }
  return e;
}

Eigen::MatrixXcd symmetrizer(int modes, int order) {
  const long long n = power(modes, order);
  Eigen::MatrixXcd s = Eigen::MatrixXcd::Zero(n, n);
  std::vector<int> perm(static_cast<std::size_t>(order));
  std::iota(perm.begin(), perm.end(), 0);
  int count = 0;
  do {
    ++count;
    for (long long idx = 0; idx < n; ++idx) {
      const auto d = digits(idx, modes, order);
      long long target = 0;
      for (int i = 0; i < order; ++i) target = target * modes + d[static_cast<std::size_t>(perm[static_cast<std::size_t>(i)])];
      s(target, idx) += 1.0;
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  return s / static_cast<double>(count);
}

Eigen::MatrixXcd partial_trace_last(const Eigen::MatrixXcd& op, int modes, int order) {
  const long long n = power(modes, order - 1);
  if (op.rows() != n * modes || op.cols() != n * modes)
    throw ContractViolation("full partial trace: dimension mismatch");
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(n, n);
  for (long long i = 0; i < n; ++i)
    for (long long j = 0; j < n; ++j) {
      Complex sum = 0.0;
      for (int l = 0; l < modes; ++l) sum += op(i * modes + l, j * modes + l);
      out(i, j) = sum;
    }
  return out;
}

Eigen::MatrixXcd compress(const Eigen::MatrixXcd& op, int modes, int order) {
  const Eigen::MatrixXcd e = symmetric_embedding(modes, order);
  return e.adjoint() * op * e;
}

Eigen::MatrixXcd embed(const Eigen::MatrixXcd& op, int modes, int order) {
  const Eigen::MatrixXcd e = symmetric_embedding(modes, order);
  return e * op * e.adjoint();
}

}  // namespace full_tensor

}  // namespace hierlab
