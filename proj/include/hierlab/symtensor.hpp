#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <span>
#include <unordered_map>
#include <vector>

#include "hierlab/space.hpp"
#include "json.hpp"

namespace hierlab {

inline constexpr int kDefaultMaxOrder = 4;
inline constexpr int kHardMaxOrder = 6;

// Occupation vectors alpha (sum = order) of the symmetric power, in colexicographic
// order: alpha precedes beta when alpha_i < beta_i at the last index where they differ.
class OccupationBasis {
 public:
  OccupationBasis(int modes, int order);

  int modes() const noexcept { return modes_; }
  int order() const noexcept { return order_; }
  int size() const noexcept { return size_; }
  std::span<const int> occupation(int index) const {
    return {occupations_.data() + static_cast<std::size_t>(index) * modes_,
            static_cast<std::size_t>(modes_)};
  }
  // -1 if alpha is not a valid occupation of this basis.
  int index_of(std::span<const int> alpha) const;
  // sqrt(order! / prod alpha_j!)
  double multinomial_root(int index) const { return multinomial_root_[index]; }

 private:
  std::uint64_t key(std::span<const int> alpha) const;

  int modes_;
  int order_;
  int size_ = 0;
  std::vector<int> occupations_;
  std::vector<double> multinomial_root_;
  std::unordered_map<std::uint64_t, int> lookup_;
};

// Shared immutable bases, built on first use.
const OccupationBasis& occupation_basis(int modes, int order);

// Operator on the order-fold symmetric power, in the occupation basis.
struct SymOperator {
  int order = 0;
  Eigen::MatrixXcd matrix;
  bool hermitian = true;

  int dim() const noexcept { return static_cast<int>(matrix.rows()); }
};

// Coordinates sqrt(k!/alpha!) prod x_j^alpha_j of x^{(x)k}.
Eigen::VectorXcd pure_tensor(const StateVector& x, int order, int max_order = kDefaultMaxOrder);

// Compressed coordinates of x^{(x)(j-1)} (x) v (x) x^{(x)(order-j)}. Independent of j.
Eigen::VectorXcd symmetric_insertion(const StateVector& x, const StateVector& v, int order);

SymOperator rank_one_projector(const StateVector& x, int order, int max_order = kDefaultMaxOrder);

// Tr over the last factor, order k+1 -> k. Requires S Gamma S = Gamma, which holds for
// every operator built on the symmetric subspace.
SymOperator partial_trace(const SymOperator& gamma, int modes);

double trace_norm(const Eigen::MatrixXcd& m);
double hermitian_trace_norm(const Eigen::MatrixXcd& m);

// prod_j a_j^{tau alpha_j / 2} for every basis occupation.
Eigen::VectorXd occupation_weights(const ModelSpace& space, int order, double tau);

double weighted_trace_norm(const SymOperator& gamma, const ModelSpace& space, double tau);

nlohmann::json to_json(const SymOperator& op, int modes);
SymOperator sym_operator_from_json(const nlohmann::json& j);

// Full tensor power with row-major multi-indices (first factor most significant).
namespace full_tensor {

long long power(int modes, int order);
Eigen::VectorXcd product(std::span<const StateVector> factors);
Eigen::VectorXcd tensor_power(const StateVector& x, int order);
// Isometry from the symmetric power into the full tensor power.
Eigen::MatrixXcd symmetric_embedding(int modes, int order);
// (1/k!) sum over permutations of the factor-permutation operators.
Eigen::MatrixXcd symmetrizer(int modes, int order);
Eigen::MatrixXcd partial_trace_last(const Eigen::MatrixXcd& op, int modes, int order);
Eigen::MatrixXcd compress(const Eigen::MatrixXcd& op, int modes, int order);
Eigen::MatrixXcd embed(const Eigen::MatrixXcd& op, int modes, int order);

}  // namespace full_tensor

}  // namespace hierlab
