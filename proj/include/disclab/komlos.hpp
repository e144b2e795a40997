#pragma once

#include "disclab/certificate.hpp"
#include "disclab/core.hpp"
#include "disclab/solvers.hpp"

namespace disclab {

/// n vectors u_1..u_n in R^m with ||u_i||_2 <= 1, stored as the columns of
/// an m x n matrix.
class KomlosInstance {
 public:
  explicit KomlosInstance(Eigen::MatrixXd columns);

  Index n() const { return columns_.cols(); }
  Index m() const { return columns_.rows(); }
  const Eigen::MatrixXd& columns() const { return columns_; }

  friend bool operator==(const KomlosInstance& a, const KomlosInstance& b) {
    return a.columns_.rows() == b.columns_.rows() && a.columns_.cols() == b.columns_.cols() &&
           a.columns_ == b.columns_;
  }

 private:
  Eigen::MatrixXd columns_;
};

/// Row layout of the same data: row j is a_j = (u_1^(j), ..., u_n^(j)), tagged
/// KomlosUnit. Bit-exact in both directions.
Instance to_row_layout(const KomlosInstance& kom);
KomlosInstance from_row_layout(const Instance& rows);

/// Kashin instance with rows a_j sqrt(m / n).
Instance transpose_reduce(const KomlosInstance& kom);

/// sqrt(m / n), the factor transpose_reduce applies.
double reduction_scale(const KomlosInstance& kom);

/// sum_i eps_i u_i.
Eigen::VectorXd signed_sum(const KomlosInstance& kom, const Coloring& coloring);

KomlosInstance restrict(const KomlosInstance& kom, const IndexSet& active);

struct KomlosResult {
  SolveResult reduced;        // solve result on transpose_reduce(kom)
  Eigen::VectorXd sum;        // sum_i eps_i u_i
  double inf_norm = 0.0;      // ||sum||_inf, the empirical K of this instance
  double certified_k = kDiscrepancyConstant;
};

/// Partial coloring with support >= ceil(n/6) (or the given min_support, e.g. n
/// for the full-coloring experiment) minimizing the reduced discrepancy.
KomlosResult solve_komlos_partial(const KomlosInstance& kom, const SolverBudget& budget);
KomlosResult solve_komlos_partial(const KomlosInstance& kom, Index min_support,
                                  const SolverBudget& budget);

}  // namespace disclab
