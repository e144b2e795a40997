#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace disclab {

using Index = Eigen::Index;
using IndexSet = std::vector<Index>;

enum class ErrorKind { Dimension, Invariant, Schema, Refused, SolverFailure, Usage };

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

/// Relative slack granted to every norm-model check.
inline constexpr double kModelSlack = 1e-9;

enum class NormModel { KashinSumSq, KomlosUnit, BoxInf };

const char* to_string(NormModel model);
NormModel norm_model_from_string(const std::string& name);

/// Returns an empty string when `rows` satisfies `model`, otherwise a
/// description of the first violation (naming the offending row/column/cell).
std::string model_violation(const Eigen::MatrixXd& rows, NormModel model);

inline bool satisfies(const Eigen::MatrixXd& rows, NormModel model) {
  return model_violation(rows, model).empty();
}

/// m vectors in R^n stored as the rows of an m x n matrix, tagged with the
/// norm model they were validated against. Immutable after construction.
///
/// Under KomlosUnit the matrix is the transpose layout: column i is u_i.
class Instance {
 public:
  Instance(Eigen::MatrixXd rows, NormModel model);

  Index n() const { return rows_.cols(); }
  Index m() const { return rows_.rows(); }
  const Eigen::MatrixXd& rows() const { return rows_; }
  NormModel model() const { return model_; }

  /// Same data re-validated under a different model.
  Instance with_model(NormModel model) const { return Instance(rows_, model); }

  friend bool operator==(const Instance& a, const Instance& b) {
    return a.model_ == b.model_ && a.rows_.rows() == b.rows_.rows() &&
           a.rows_.cols() == b.rows_.cols() && a.rows_ == b.rows_;
  }

 private:
  Eigen::MatrixXd rows_;
  NormModel model_;
};

using SignVector = Eigen::VectorXi;

/// A vector in {-1,0,1}^n with a cached support size.
class Coloring {
 public:
  Coloring() = default;
  explicit Coloring(SignVector values);

  static Coloring zeros(Index n) { return Coloring(SignVector::Zero(n)); }

  Index size() const { return values_.size(); }
  Index support() const { return support_; }
  const SignVector& values() const { return values_; }
  int operator[](Index j) const { return values_[j]; }
  bool is_full() const { return support_ == size(); }

  /// Indices j with values[j] == 0, ascending.
  IndexSet zero_set() const;

  Coloring operator-() const { return Coloring(SignVector(-values_)); }

  friend bool operator==(const Coloring& a, const Coloring& b) {
    return a.values_.size() == b.values_.size() && a.values_ == b.values_;
  }

 private:
  SignVector values_;
  Index support_ = 0;
};

/// Total order on values vectors used for tie-breaking: lexicographic with
/// -1 < 0 < 1. Returns <0, 0, >0.
int lex_compare(const SignVector& a, const SignVector& b);

struct DiscrepancyReport {
  Eigen::VectorXd inner_products;
  double max_abs = 0.0;
  double support_fraction = 0.0;
};

// Pairwise (cascade) summation of term(0) + ... + term(count - 1) in the
// accumulator type Acc. Leaves of eight terms are summed left to right.
template <typename Acc, typename Term>
Acc pairwise_sum(Index begin, Index end, const Term& term) {
  const Index count = end - begin;
  if (count <= 8) {
    Acc acc(0);
    for (Index j = begin; j < end; ++j) acc += static_cast<Acc>(term(j));
    return acc;
  }
  const Index mid = begin + count / 2;
  return pairwise_sum<Acc>(begin, mid, term) + pairwise_sum<Acc>(mid, end, term);
}

/// <row, weights> accumulated pairwise in long double.
template <typename RowExpr, typename WeightExpr>
double pairwise_dot(const RowExpr& row, const WeightExpr& weights) {
  using Acc = long double;
  return static_cast<double>(pairwise_sum<Acc>(0, row.size(), [&](Index j) {
    return static_cast<Acc>(row(j)) * static_cast<Acc>(weights(j));
  }));
}

/// Sum of squared entries of `matrix` in column-major storage order,
/// accumulated pairwise.
template <typename Derived>
double sum_of_squares(const Eigen::DenseBase<Derived>& matrix) {
  const auto& mat = matrix.derived();
  const Index rows = mat.rows();
  using Acc = long double;
  return static_cast<double>(pairwise_sum<Acc>(0, mat.size(), [&](Index k) {
    const Acc v = mat(k % rows, k / rows);
    return v * v;
  }));
}

DiscrepancyReport evaluate(const Instance& instance, const Coloring& coloring);

/// ceil(n / 6): the smallest integer support meeting the partial-coloring bound.
Index support_threshold(Index n);

/// Keeps only the columns listed in `active` (0-based, strictly increasing).
Instance restrict(const Instance& instance, const IndexSet& active);

/// Writes `patch` into the positions `active` of `base`; every such position
/// must be zero in `base`.
Coloring merge(const Coloring& base, const Coloring& patch, const IndexSet& active);

/// Maximum absolute entry; 0 for an empty vector.
double max_abs(const Eigen::Ref<const Eigen::VectorXd>& values);

}  // namespace disclab
