#include "disclab/certificate.hpp"

#include "disclab/parallel.hpp"
#include "disclab/random.hpp"

#include <boost/math/special_functions/beta.hpp>

#include <cmath>
#include <numbers>

namespace disclab {

namespace {

void check_delta(double delta) {
  if (!(delta > 0.0 && delta < 1.0)) {
    throw Error(ErrorKind::Usage, "delta must lie in (0, 1), got " + std::to_string(delta));
  }
}

void check_lambda(double lambda) {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) {
    throw Error(ErrorKind::Usage, "lambda must be positive, got " + std::to_string(lambda));
  }
}

double log_of(const boost::multiprecision::cpp_int& value) {
  if (value <= 0) return -std::numeric_limits<double>::infinity();
  const std::size_t bits = boost::multiprecision::msb(value);
  if (bits < 1000) return std::log(value.convert_to<double>());
  const std::size_t shift = bits - 60;
  const boost::multiprecision::cpp_int head = value >> shift;
  return std::log(head.convert_to<double>()) + static_cast<double>(shift) * std::numbers::ln2;
}

const double kLog12e = std::log(12.0) + 1.0;

}  // namespace

double select_lambda(double delta) {
  check_delta(delta);
  const double target = 1.0 / ((1.0 - delta) * (1.0 - delta));
  const auto admissible = [&](double lambda) { return 1.0 + lambda * lambda < target; };
  const double sup = std::sqrt(target - 1.0);
  auto k = static_cast<std::int64_t>(std::floor(sup / kLambdaGridStep));
  while (k > 0 && !admissible(static_cast<double>(k) * kLambdaGridStep)) --k;
  while (admissible(static_cast<double>(k + 1) * kLambdaGridStep)) ++k;
  if (k == 0) return 0.5 * sup;
  return static_cast<double>(k) * kLambdaGridStep;
}

double implied_constant(double delta) { return (2.0 - delta) / select_lambda(delta); }

bool membership(const Instance& instance, double lambda, double scale,
                const Eigen::Ref<const Eigen::VectorXd>& z) {
  check_lambda(lambda);
  if (!(scale > 0.0)) throw Error(ErrorKind::Usage, "membership scale must be positive");
  if (z.size() != instance.n()) {
    throw Error(ErrorKind::Dimension, "point has length " + std::to_string(z.size()) +
                                          " but instance has n = " + std::to_string(instance.n()));
  }
  if (z.cwiseAbs().maxCoeff() > scale) return false;
  const double bound = (scale / lambda) * std::sqrt(static_cast<double>(instance.m()) /
                                                    static_cast<double>(instance.n()));
  for (Index i = 0; i < instance.m(); ++i) {
    if (std::abs(pairwise_dot(instance.rows().row(i), z)) > bound) return false;
  }
  return true;
}

bool VaalerMatrix::contains(const Eigen::Ref<const Eigen::VectorXd>& z) const {
  if (z.size() != n) throw Error(ErrorKind::Dimension, "point length differs from n");
  const Eigen::VectorXd image = entries * z;
  return image.cwiseAbs().maxCoeff() <= 0.5;
}

VaalerMatrix build_vaaler_matrix(const Instance& instance, double lambda) {
  check_lambda(lambda);
  const Index m = instance.m();
  const Index n = instance.n();
  VaalerMatrix a;
  a.lambda = lambda;
  a.m = m;
  a.n = n;
  a.entries.resize(m + n, n);
  const double row_scale =
      0.5 * lambda * std::sqrt(static_cast<double>(n) / static_cast<double>(m));
  a.entries.topRows(m) = row_scale * instance.rows();
  a.entries.bottomRows(n) = 0.5 * Eigen::MatrixXd::Identity(n, n);
  return a;
}

DetBound det_upper_bound(const Instance& instance, double lambda) {
  const VaalerMatrix a = build_vaaler_matrix(instance, lambda);
  const double n = static_cast<double>(instance.n());
  const double mean_diag = sum_of_squares(a.entries) / n;
  const double closed = (lambda * lambda + 1.0) / 4.0;
  DetBound bound;
  bound.log_trace_bound = n * std::log(mean_diag);
  bound.log_closed_form = n * std::log(closed);
  bound.trace_bound = std::exp(bound.log_trace_bound);
  bound.closed_form = std::exp(bound.log_closed_form);
  return bound;
}

SmallSupportCount count_small_support(Index n) {
  if (n < 1) throw Error(ErrorKind::Dimension, "count_small_support requires n >= 1");
  using boost::multiprecision::cpp_int;
  SmallSupportCount out;
  cpp_int binom = 1;  // C(n, r)
  cpp_int power = 1;  // 2^r
  out.exact = 0;
  for (Index r = 0; r <= n / 6; ++r) {
    if (r > 0) {
      binom = binom * (n - r + 1) / r;
      power <<= 1;
    }
    out.exact += binom * power;
  }
  out.log_exact = log_of(out.exact);
  out.log_cap = static_cast<double>(n) / 6.0 * kLog12e;
  return out;
}

double Certificate::det_bound() const { return std::exp(log_det_bound); }
double Certificate::volume_lb() const { return std::exp(log_volume_lb); }
double Certificate::count_lb() const { return std::exp(log_count_lb); }
double Certificate::small_support_count() const { return std::exp(log_small_support_count); }

Certificate counting_verdict(Index n, double delta) {
  if (n < 1) throw Error(ErrorKind::Dimension, "counting_verdict requires n >= 1");
  Certificate cert;
  cert.n = n;
  cert.delta = delta;
  cert.lambda = select_lambda(delta);
  const double nd = static_cast<double>(n);
  cert.log_det_bound = nd * std::log((cert.lambda * cert.lambda + 1.0) / 4.0);
  cert.log_volume_lb = nd * std::log(2.0 * (1.0 - delta));
  cert.log_count_lb = std::numbers::ln2 + nd * std::log((2.0 - delta) * (1.0 - delta));
  cert.log_small_support_count = nd / 6.0 * kLog12e;
  cert.verdict = cert.log_count_lb > cert.log_small_support_count &&
                 -0.5 * cert.log_det_bound >= cert.log_volume_lb;
  return cert;
}

bool per_coordinate_verdict(double delta) {
  check_delta(delta);
  return kLog12e / 6.0 < std::log((2.0 - delta) * (1.0 - delta));
}

VolumeEstimate volume_check(const Instance& instance, double lambda, std::uint64_t samples,
                            std::uint64_t seed, double delta, unsigned workers) {
  check_lambda(lambda);
  check_delta(delta);
  if (samples == 0) throw Error(ErrorKind::Usage, "volume_check needs at least one sample");

  constexpr std::uint64_t kBlock = 8192;
  const Index n = instance.n();
  const double bound =
      std::sqrt(static_cast<double>(instance.m()) / static_cast<double>(n)) / lambda;
  const std::uint64_t blocks = (samples + kBlock - 1) / kBlock;
  std::vector<std::uint64_t> hits(blocks, 0);

  parallel_for(blocks, workers, [&](std::size_t block) {
    const std::uint64_t first = block * kBlock;
    const Index count = static_cast<Index>(std::min(kBlock, samples - first));
    CounterRng rng(seed, block);
    Eigen::MatrixXd points(n, count);
    for (Index b = 0; b < count; ++b) {
      for (Index j = 0; j < n; ++j) points(j, b) = rng.uniform(-1.0, 1.0);
    }
    const Eigen::MatrixXd products = instance.rows() * points;
    std::uint64_t inside = 0;
    for (Index b = 0; b < count; ++b) {
      if (products.col(b).cwiseAbs().maxCoeff() <= bound) ++inside;
    }
    hits[block] = inside;
  });

  VolumeEstimate est;
  est.samples = samples;
  for (std::uint64_t h : hits) est.hits += h;
  const double cube = std::pow(2.0, static_cast<double>(n));
  const double total = static_cast<double>(samples);
  const double k = static_cast<double>(est.hits);
  constexpr double kAlpha = 0.01;
  const double lo = est.hits == 0
                        ? 0.0
                        : boost::math::ibeta_inv(k, total - k + 1.0, kAlpha / 2.0);
  const double hi = est.hits == samples
                        ? 1.0
                        : boost::math::ibeta_inv(k + 1.0, total - k, 1.0 - kAlpha / 2.0);
  est.estimate = cube * k / total;
  est.lower = cube * lo;
  est.upper = cube * hi;
  est.vaaler_lb = std::exp(-0.5 * det_upper_bound(instance, lambda).log_trace_bound);
  est.delta_lb = std::pow(2.0 * (1.0 - delta), static_cast<double>(n));
  est.violation = est.upper < est.vaaler_lb || est.upper < est.delta_lb;
  return est;
}

}  // namespace disclab
