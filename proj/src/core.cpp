#include "disclab/core.hpp"

#include <cmath>
#include <sstream>

namespace disclab {

const char* to_string(NormModel model) {
  switch (model) {
    case NormModel::KashinSumSq:
      return "KashinSumSq";
    case NormModel::KomlosUnit:
      return "KomlosUnit";
    case NormModel::BoxInf:
      return "BoxInf";
  }
  return "?";
}

NormModel norm_model_from_string(const std::string& name) {
  if (name == "KashinSumSq") return NormModel::KashinSumSq;
  if (name == "KomlosUnit") return NormModel::KomlosUnit;
  if (name == "BoxInf") return NormModel::BoxInf;
  throw Error(ErrorKind::Schema, "unknown norm model '" + name + "'");
}

std::string model_violation(const Eigen::MatrixXd& rows, NormModel model) {
  std::ostringstream why;
  if (rows.rows() < 1 || rows.cols() < 1) {
    why << "instance must have m >= 1 and n >= 1 (got m=" << rows.rows()
        << ", n=" << rows.cols() << ")";
    return why.str();
  }
  for (Index j = 0; j < rows.cols(); ++j) {
    for (Index i = 0; i < rows.rows(); ++i) {
      if (!std::isfinite(rows(i, j))) {
        why << "rows[" << i << "][" << j << "] is not finite";
        return why.str();
      }
    }
  }
  switch (model) {
    case NormModel::KashinSumSq: {
      const double total = sum_of_squares(rows);
      const double m = static_cast<double>(rows.rows());
      if (total > m * (1.0 + kModelSlack)) {
        why << "sum of squared row norms " << total << " exceeds m = " << rows.rows();
      }
      break;
    }
    case NormModel::KomlosUnit: {
      for (Index j = 0; j < rows.cols(); ++j) {
        const double norm = std::sqrt(sum_of_squares(rows.col(j)));
        if (norm > 1.0 + kModelSlack) {
          why << "column " << j << " has l2 norm " << norm << " > 1";
          break;
        }
      }
      break;
    }
    case NormModel::BoxInf: {
      for (Index i = 0; i < rows.rows() && why.tellp() == 0; ++i) {
        for (Index j = 0; j < rows.cols(); ++j) {
          if (std::abs(rows(i, j)) > 1.0 + kModelSlack) {
            why << "rows[" << i << "][" << j << "] = " << rows(i, j) << " has magnitude > 1";
            break;
          }
        }
      }
      break;
    }
  }
  return why.str();
}

Instance::Instance(Eigen::MatrixXd rows, NormModel model) : rows_(std::move(rows)), model_(model) {
  const std::string why = model_violation(rows_, model_);
  if (!why.empty()) {
    throw Error(ErrorKind::Invariant, std::string(to_string(model_)) + ": " + why);
  }
}

Coloring::Coloring(SignVector values) : values_(std::move(values)) {
  for (Index j = 0; j < values_.size(); ++j) {
    const int v = values_[j];
    if (v < -1 || v > 1) {
      throw Error(ErrorKind::Invariant,
                  "coloring entry " + std::to_string(j) + " = " + std::to_string(v) +
                      " is not in {-1,0,1}");
    }
    if (v != 0) ++support_;
  }
}

IndexSet Coloring::zero_set() const {
  IndexSet zeros;
  zeros.reserve(static_cast<std::size_t>(size() - support_));
  for (Index j = 0; j < size(); ++j) {
    if (values_[j] == 0) zeros.push_back(j);
  }
  return zeros;
}

int lex_compare(const SignVector& a, const SignVector& b) {
  const Index len = std::min(a.size(), b.size());
  for (Index j = 0; j < len; ++j) {
    if (a[j] != b[j]) return a[j] < b[j] ? -1 : 1;
  }
  if (a.size() == b.size()) return 0;
  return a.size() < b.size() ? -1 : 1;
}

double max_abs(const Eigen::Ref<const Eigen::VectorXd>& values) {
  return values.size() == 0 ? 0.0 : values.cwiseAbs().maxCoeff();
}

DiscrepancyReport evaluate(const Instance& instance, const Coloring& coloring) {
  if (coloring.size() != instance.n()) {
    throw Error(ErrorKind::Dimension, "coloring has length " + std::to_string(coloring.size()) +
                                          " but instance has n = " + std::to_string(instance.n()));
  }
  const Eigen::MatrixXd& rows = instance.rows();
  const SignVector& eps = coloring.values();
  DiscrepancyReport report;
  report.inner_products.resize(instance.m());
  for (Index i = 0; i < instance.m(); ++i) {
    report.inner_products[i] = pairwise_dot(rows.row(i), eps);
  }
  report.max_abs = max_abs(report.inner_products);
  report.support_fraction =
      static_cast<double>(coloring.support()) / static_cast<double>(instance.n());
  return report;
}

Index support_threshold(Index n) {
  if (n < 1) throw Error(ErrorKind::Dimension, "support_threshold requires n >= 1");
  return (n + 5) / 6;
}

static void check_index_set(const IndexSet& active, Index n) {
  if (active.empty()) throw Error(ErrorKind::Dimension, "active index set is empty");
  for (std::size_t t = 0; t < active.size(); ++t) {
    if (active[t] < 0 || active[t] >= n) {
      throw Error(ErrorKind::Dimension,
                  "active index " + std::to_string(active[t]) + " out of range [0, " +
                      std::to_string(n) + ")");
    }
    if (t > 0 && active[t] <= active[t - 1]) {
      throw Error(ErrorKind::Dimension, "active index set must be strictly increasing");
    }
  }
}

Instance restrict(const Instance& instance, const IndexSet& active) {
  check_index_set(active, instance.n());
  Eigen::MatrixXd rows(instance.m(), static_cast<Index>(active.size()));
  for (std::size_t t = 0; t < active.size(); ++t) {
    rows.col(static_cast<Index>(t)) = instance.rows().col(active[t]);
  }
  return Instance(std::move(rows), instance.model());
}

Coloring merge(const Coloring& base, const Coloring& patch, const IndexSet& active) {
  if (patch.size() != static_cast<Index>(active.size())) {
    throw Error(ErrorKind::Dimension, "patch length " + std::to_string(patch.size()) +
                                          " differs from active set size " +
                                          std::to_string(active.size()));
  }
  check_index_set(active, base.size());
  SignVector values = base.values();
  for (std::size_t t = 0; t < active.size(); ++t) {
    const Index j = active[t];
    if (values[j] != 0) {
      throw Error(ErrorKind::Invariant,
                  "merge would overwrite nonzero base position " + std::to_string(j));
    }
    values[j] = patch[static_cast<Index>(t)];
  }
  return Coloring(std::move(values));
}

}  // namespace disclab
