#pragma once

#include "disclab/core.hpp"
#include "disclab/komlos.hpp"
#include "disclab/solvers.hpp"

#include <vector>

namespace disclab {

/// Active sets at or below this size are finished by exhaustive search.
inline constexpr Index kBaseCaseCutoff = 16;

/// C in the random-tail threshold C sqrt(n_s ln n).
inline constexpr double kHoeffdingConstant = 4.0;

/// Extra attempts (fresh seeds) for a partial round that misses its support target.
inline constexpr int kRoundRetries = 3;

struct RoundRecord {
  int k = 0;
  Index active = 0;   // n_k, coordinates still uncolored when the round starts
  Index colored = 0;  // support of the round's patch
  Method method = Method::Exhaustive;
  bool partial = true;  // false for the finishing full-coloring round
  int retries = 0;
  double max_abs = 0.0;     // round discrepancy in the caller's units
  double cumulative = 0.0;  // running sum of round max_abs
};

struct RecursionTrace {
  std::vector<RoundRecord> rounds;
  int s_planned = 0;
  Method final_method = Method::Exhaustive;
};

struct RecursionResult {
  Coloring coloring;
  DiscrepancyReport report;
  RecursionTrace trace;
};

class RecursionError : public Error {
 public:
  RecursionError(const std::string& what, RecursionTrace trace)
      : Error(ErrorKind::SolverFailure, what), trace_(std::move(trace)) {}
  const RecursionTrace& trace() const { return trace_; }

 private:
  RecursionTrace trace_;
};

/// ceil(ln ln n / ln(6/5)) for n >= 3.
int plan_rounds(Index n);

/// Full +-1 coloring of a BoxInf instance: plan_rounds(n) partial rounds on
/// the uncolored coordinates (rows renormalized by 1/sqrt(n_k)), then a
/// random or exhaustive finish on the remainder.
RecursionResult full_coloring(const Instance& instance, const SolverBudget& budget);

/// s rounds of Komlos partial coloring on the uncolored columns, no random
/// tail. `instance` is the KomlosUnit row layout; the report is the signed sum.
RecursionResult iterate_partial(const Instance& instance, int s, const SolverBudget& budget);
RecursionResult iterate_partial(const KomlosInstance& kom, int s, const SolverBudget& budget);

}  // namespace disclab
