#include "disclab/komlos.hpp"

#include <cmath>

namespace disclab {

KomlosInstance::KomlosInstance(Eigen::MatrixXd columns) : columns_(std::move(columns)) {
  const std::string why = model_violation(columns_, NormModel::KomlosUnit);
  if (!why.empty()) throw Error(ErrorKind::Invariant, "Komlos instance: " + why);
}

Instance to_row_layout(const KomlosInstance& kom) {
  return Instance(kom.columns(), NormModel::KomlosUnit);
}

KomlosInstance from_row_layout(const Instance& rows) {
  if (rows.model() != NormModel::KomlosUnit) {
    throw Error(ErrorKind::Invariant, std::string("expected a KomlosUnit instance, got ") +
                                          to_string(rows.model()));
  }
  return KomlosInstance(rows.rows());
}

double reduction_scale(const KomlosInstance& kom) {
  return std::sqrt(static_cast<double>(kom.m()) / static_cast<double>(kom.n()));
}

Instance transpose_reduce(const KomlosInstance& kom) {
  return Instance(reduction_scale(kom) * kom.columns(), NormModel::KashinSumSq);
}

Eigen::VectorXd signed_sum(const KomlosInstance& kom, const Coloring& coloring) {
  if (coloring.size() != kom.n()) {
    throw Error(ErrorKind::Dimension, "coloring has length " + std::to_string(coloring.size()) +
                                          " but there are " + std::to_string(kom.n()) +
                                          " vectors");
  }
  Eigen::VectorXd sum(kom.m());
  for (Index j = 0; j < kom.m(); ++j) sum[j] = pairwise_dot(kom.columns().row(j), coloring.values());
  return sum;
}

KomlosInstance restrict(const KomlosInstance& kom, const IndexSet& active) {
  return from_row_layout(restrict(to_row_layout(kom), active));
}

KomlosResult solve_komlos_partial(const KomlosInstance& kom, const SolverBudget& budget) {
  return solve_komlos_partial(kom, support_threshold(kom.n()), budget);
}

KomlosResult solve_komlos_partial(const KomlosInstance& kom, Index min_support,
                                  const SolverBudget& budget) {
  KomlosResult out;
  out.reduced = solve(transpose_reduce(kom), min_support, budget);
  out.sum = signed_sum(kom, out.reduced.coloring);
  out.inf_norm = max_abs(out.sum);
  return out;
}

}  // namespace disclab
