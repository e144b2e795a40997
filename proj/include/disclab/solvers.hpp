#pragma once

#include "disclab/core.hpp"

#include <cstdint>
#include <optional>

namespace disclab {

enum class Method { Exhaustive, Anneal, Random };

const char* to_string(Method method);

struct SolverBudget {
  std::uint64_t max_candidates = 4782969;  // 3^14
  std::uint64_t anneal_steps = 100000;
  std::uint32_t restarts = 8;
  std::uint64_t retry_cap = 0;  // 0 selects default_retry_cap(n)
  std::uint64_t seed = 0;
  unsigned workers = 0;  // threads only; never changes a result
};

/// ceil(100 ln(n + 1)).
std::uint64_t default_retry_cap(Index n);

struct SolveResult {
  Coloring coloring;
  DiscrepancyReport report;
  Method method = Method::Exhaustive;
  bool optimal = false;
  std::uint64_t attempts = 0;  // random-coloring draws, or anneal restarts
};

/// Solver error that still hands back the best state seen.
class SolverError : public Error {
 public:
  SolverError(const std::string& what, std::optional<SolveResult> best)
      : Error(ErrorKind::SolverFailure, what), best_(std::move(best)) {}
  const std::optional<SolveResult>& best() const { return best_; }

 private:
  std::optional<SolveResult> best_;
};

/// Largest n accepted by solve_exhaustive.
inline constexpr Index kExhaustiveMaxN = 16;

/// Tie-break order: smaller max_abs, then larger support, then the
/// lexicographically smallest values vector (-1 < 0 < 1).
bool ranks_before(double max_a, Index support_a, const SignVector& a, double max_b,
                  Index support_b, const SignVector& b);

inline bool ranks_before(const SolveResult& a, const SolveResult& b) {
  return ranks_before(a.report.max_abs, a.coloring.support(), a.coloring.values(),
                      b.report.max_abs, b.coloring.support(), b.coloring.values());
}

/// Enumerates every coloring with support >= min_support and returns the
/// first one under ranks_before. Refuses n > kExhaustiveMaxN.
SolveResult solve_exhaustive(const Instance& instance, Index min_support, unsigned workers = 0);

/// Simulated annealing over {-1,0,1}^n. Never returns a state with support
/// below min_support.
SolveResult solve_anneal(const Instance& instance, Index min_support, const SolverBudget& budget);

/// Uniform random full colorings until one has max_abs <= threshold.
SolveResult solve_random_full(const Instance& instance, double threshold,
                              const SolverBudget& budget);

/// Exhaustive when 3^n <= max_candidates (and n is small enough), else anneal.
SolveResult solve(const Instance& instance, Index min_support, const SolverBudget& budget);

}  // namespace disclab
