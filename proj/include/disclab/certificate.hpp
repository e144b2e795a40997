#pragma once

#include "disclab/core.hpp"

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>

namespace disclab {

inline constexpr double kDefaultDelta = 0.01;
inline constexpr double kLambdaGridStep = 1e-4;

/// Discrepancy constant used for every acceptance threshold: (2 - delta) / lambda
/// at the default delta is about 13.97, rounded up.
inline constexpr double kDiscrepancyConstant = 14.0;

/// Largest lambda on the 1e-4 grid with 1 + lambda^2 < (1 - delta)^-2.
/// If no grid point qualifies (delta below ~5e-9) the midpoint of the
/// admissible interval is returned instead.
double select_lambda(double delta);

/// (2 - delta) / select_lambda(delta).
double implied_constant(double delta);

/// z in scale * E_lambda, i.e. ||z||_inf <= scale and
/// max_i |<z, x_i>| <= (scale / lambda) sqrt(m / n).
bool membership(const Instance& instance, double lambda, double scale,
                const Eigen::Ref<const Eigen::VectorXd>& z);

/// The (m + n) x n matrix whose preimage of the cube [-1/2, 1/2]^(m+n) is E_lambda:
/// rows 0..m-1 are (lambda / 2) sqrt(n / m) x_i, rows m..m+n-1 are e_i / 2.
struct VaalerMatrix {
  Eigen::MatrixXd entries;
  double lambda = 0.0;
  Index m = 0;
  Index n = 0;

  Index d() const { return m + n; }

  /// A z in [-1/2, 1/2]^d, evaluated with a plain matrix-vector product.
  bool contains(const Eigen::Ref<const Eigen::VectorXd>& z) const;
};

VaalerMatrix build_vaaler_matrix(const Instance& instance, double lambda);

struct DetBound {
  double trace_bound = 0.0;      // (tr(A^T A) / n)^n for the actual instance
  double closed_form = 0.0;      // ((lambda^2 + 1) / 4)^n
  double log_trace_bound = 0.0;  // natural logs; the plain values may under/overflow
  double log_closed_form = 0.0;
};

DetBound det_upper_bound(const Instance& instance, double lambda);

struct SmallSupportCount {
  boost::multiprecision::cpp_int exact;  // |{x in {-1,0,1}^n : ||x||_1 <= n/6}|
  double log_exact = 0.0;
  double log_cap = 0.0;                  // (n/6) ln(12e)
};

SmallSupportCount count_small_support(Index n);

/// Counting half of the existence argument. Every bound is kept as a natural
/// log; the plain-value accessors return +inf/0 once they leave double range.
struct Certificate {
  Index n = 0;
  double lambda = 0.0;
  double delta = 0.0;
  double log_det_bound = 0.0;            // n ln((lambda^2 + 1) / 4)
  double log_volume_lb = 0.0;            // n ln(2 (1 - delta))
  double log_count_lb = 0.0;             // ln 2 + n ln((2 - delta)(1 - delta))
  double log_small_support_count = 0.0;  // (n/6) ln(12e)
  bool verdict = false;

  double det_bound() const;
  double volume_lb() const;
  double count_lb() const;
  double small_support_count() const;
};

Certificate counting_verdict(Index n, double delta = kDefaultDelta);

/// Compares the per-coordinate bases of the counting inequality:
/// (12e)^(1/6) < (2 - delta)(1 - delta) implies the verdict holds for every n.
bool per_coordinate_verdict(double delta);

struct VolumeEstimate {
  std::uint64_t samples = 0;
  std::uint64_t hits = 0;
  double estimate = 0.0;  // 2^n * hits / samples
  double lower = 0.0;     // 99% Clopper-Pearson interval, scaled by 2^n
  double upper = 0.0;
  double vaaler_lb = 0.0;  // det_bound^(-1/2) from the trace bound
  double delta_lb = 0.0;   // 2^n (1 - delta)^n
  bool violation = false;
};

/// Monte-Carlo estimate of vol(E_lambda) from uniform samples in [-1, 1]^n.
/// Samples are drawn in fixed blocks, one generator stream per block, so the
/// result depends only on (seed, samples).
VolumeEstimate volume_check(const Instance& instance, double lambda, std::uint64_t samples,
                            std::uint64_t seed, double delta = kDefaultDelta,
                            unsigned workers = 0);

}  // namespace disclab
