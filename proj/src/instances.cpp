#include "disclab/instances.hpp"

#include "disclab/random.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace disclab {

const char* to_string(Family family) {
  switch (family) {
    case Family::SetSystem01:
      return "SetSystem01";
    case Family::RandomSigns:
      return "RandomSigns";
    case Family::RandomUnitColumns:
      return "RandomUnitColumns";
    case Family::Hadamard:
      return "Hadamard";
    case Family::ZeroRows:
      return "ZeroRows";
  }
  return "?";
}

Family family_from_string(const std::string& name) {
  for (Family f : {Family::SetSystem01, Family::RandomSigns, Family::RandomUnitColumns,
                   Family::Hadamard, Family::ZeroRows}) {
    if (name == to_string(f)) return f;
  }
  throw Error(ErrorKind::Usage, "unknown instance family '" + name + "'");
}

namespace {

bool is_power_of_two(Index v) { return v >= 1 && (v & (v - 1)) == 0; }

}  // namespace

Eigen::MatrixXd sylvester_hadamard(Index order) {
  if (!is_power_of_two(order)) {
    throw Error(ErrorKind::Invariant,
                "Hadamard order must be a power of two, got " + std::to_string(order));
  }
  Eigen::MatrixXd h = Eigen::MatrixXd::Ones(1, 1);
  while (h.rows() < order) {
    const Index k = h.rows();
    Eigen::MatrixXd next(2 * k, 2 * k);
    next << h, h, h, -h;
    h = std::move(next);
  }
  return h;
}

Generated generate(const GeneratorSpec& spec) {
  const Index n = spec.n;
  const Index m = spec.m;
  if (n < 1 || m < 1) {
    throw Error(ErrorKind::Invariant, "generator needs n >= 1 and m >= 1");
  }
  switch (spec.family) {
    case Family::SetSystem01:
    case Family::RandomSigns: {
      const bool signs = spec.family == Family::RandomSigns;
      Eigen::MatrixXd rows(m, n);
      for (Index i = 0; i < m; ++i) {
        CounterRng rng(spec.seed, static_cast<std::uint64_t>(i));
        for (Index j = 0; j < n; ++j) {
          const bool bit = rng.coin();
          rows(i, j) = signs ? (bit ? 1.0 : -1.0) : (bit ? 1.0 : 0.0);
        }
      }
      return Instance(std::move(rows), NormModel::BoxInf);
    }
    case Family::RandomUnitColumns: {
      Eigen::MatrixXd columns(m, n);
      for (Index j = 0; j < n; ++j) {
        CounterRng rng(spec.seed, static_cast<std::uint64_t>(j));
        double norm = 0.0;
        do {
          for (Index i = 0; i < m; ++i) columns(i, j) = rng.normal();
          norm = columns.col(j).norm();
        } while (norm == 0.0);
        columns.col(j) /= norm;
      }
      return KomlosInstance(std::move(columns));
    }
    case Family::Hadamard: {
      if (!is_power_of_two(n)) {
        throw Error(ErrorKind::Invariant,
                    "Hadamard family requires n to be a power of two, got " + std::to_string(n));
      }
      if (m > n) {
        throw Error(ErrorKind::Invariant, "Hadamard family requires m <= n");
      }
      Eigen::MatrixXd rows = sylvester_hadamard(n).topRows(m) / std::sqrt(static_cast<double>(n));
      return Instance(std::move(rows), NormModel::KashinSumSq);
    }
    case Family::ZeroRows:
      return Instance(Eigen::MatrixXd::Zero(m, n), NormModel::BoxInf);
  }
  throw Error(ErrorKind::Usage, "unhandled family");
}

Instance generate_instance(const GeneratorSpec& spec) {
  Generated g = generate(spec);
  if (auto* inst = std::get_if<Instance>(&g)) return std::move(*inst);
  throw Error(ErrorKind::Usage, std::string(to_string(spec.family)) +
                                    " produces a Komlos instance, not a row instance");
}

KomlosInstance generate_komlos(const GeneratorSpec& spec) {
  Generated g = generate(spec);
  if (auto* kom = std::get_if<KomlosInstance>(&g)) return std::move(*kom);
  throw Error(ErrorKind::Usage,
              std::string(to_string(spec.family)) + " does not produce a Komlos instance");
}

Instance hadamard_section(Index n, Index m, std::uint64_t seed) {
  if (n < 1 || m < 1) throw Error(ErrorKind::Invariant, "hadamard_section needs n, m >= 1");
  Index order = 1;
  while (order < n) order *= 2;
  const Eigen::MatrixXd h = sylvester_hadamard(order);

  CounterRng pick(seed, 0);
  std::vector<Index> cols(static_cast<std::size_t>(order));
  std::iota(cols.begin(), cols.end(), Index{0});
  for (Index t = 0; t < n; ++t) {
    const Index r = t + static_cast<Index>(pick.below(static_cast<std::uint64_t>(order - t)));
    std::swap(cols[static_cast<std::size_t>(t)], cols[static_cast<std::size_t>(r)]);
  }
  cols.resize(static_cast<std::size_t>(n));
  std::sort(cols.begin(), cols.end());

  const double scale = 1.0 / std::sqrt(static_cast<double>(n));
  Eigen::MatrixXd rows(m, n);
  for (Index i = 0; i < m; ++i) {
    CounterRng rng(seed, static_cast<std::uint64_t>(i) + 1);
    const Index source = static_cast<Index>(rng.below(static_cast<std::uint64_t>(order)));
    const double sign = rng.sign() * scale;
    for (Index j = 0; j < n; ++j) rows(i, j) = sign * h(source, cols[static_cast<std::size_t>(j)]);
  }
  return Instance(std::move(rows), NormModel::KashinSumSq);
}

Instance box_to_kashin(const Instance& box) {
  return Instance(box.rows() / std::sqrt(static_cast<double>(box.n())), NormModel::KashinSumSq);
}

}  // namespace disclab
