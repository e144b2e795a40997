#pragma once

#include "disclab/core.hpp"
#include "disclab/komlos.hpp"

#include <cstdint>
#include <string>
#include <variant>

namespace disclab {

enum class Family { SetSystem01, RandomSigns, RandomUnitColumns, Hadamard, ZeroRows };

const char* to_string(Family family);
Family family_from_string(const std::string& name);

struct GeneratorSpec {
  Family family = Family::ZeroRows;
  Index n = 1;
  Index m = 1;
  std::uint64_t seed = 0;
};

using Generated = std::variant<Instance, KomlosInstance>;

/// SetSystem01 / RandomSigns -> BoxInf rows of fair 0/1 or +-1 entries.
/// RandomUnitColumns -> n columns uniform on the sphere in R^m.
/// Hadamard -> first m rows of the Sylvester matrix of order n (a power of
/// two, m <= n) scaled by 1/sqrt(n), under KashinSumSq.
/// ZeroRows -> the m x n zero matrix (BoxInf).
/// Row i (column i for RandomUnitColumns) draws from generator stream i.
Generated generate(const GeneratorSpec& spec);

/// generate() for families that produce an Instance.
Instance generate_instance(const GeneratorSpec& spec);
KomlosInstance generate_komlos(const GeneratorSpec& spec);

/// Sylvester-Hadamard matrix of the given order (a power of two), entries +-1.
Eigen::MatrixXd sylvester_hadamard(Index order);

/// m rows drawn (with replacement, random sign) from the Sylvester matrix of
/// the smallest power-of-two order >= n, restricted to a seeded set of n
/// columns and scaled by 1/sqrt(n). Every row has unit l2 norm, so the
/// result is a KashinSumSq instance for any n, m.
Instance hadamard_section(Index n, Index m, std::uint64_t seed);

/// Rows divided by sqrt(n): a BoxInf instance becomes a KashinSumSq one.
Instance box_to_kashin(const Instance& box);

}  // namespace disclab
