#include "disclab/recursion.hpp"

#include "disclab/random.hpp"

#include <cmath>
#include <numeric>

namespace disclab {

namespace {

IndexSet all_indices(Index n) {
  IndexSet all(static_cast<std::size_t>(n));
  std::iota(all.begin(), all.end(), Index{0});
  return all;
}

SolverBudget round_budget(const SolverBudget& budget, int k, int attempt) {
  SolverBudget out = budget;
  out.seed = derive_seed(budget.seed, static_cast<std::uint64_t>(k) * 16 +
                                          static_cast<std::uint64_t>(attempt));
  return out;
}

// Runs `attempt_round(seeded_budget)` until it returns a patch with support
// >= need, trying kRoundRetries fresh seeds after the first.
template <typename Attempt, typename SupportOf>
auto run_round(const SolverBudget& budget, int k, Index need, const RecursionTrace& trace,
               Attempt&& attempt_round, SupportOf&& support_of, int& retries) {
  for (int attempt = 0; attempt <= kRoundRetries; ++attempt) {
    try {
      auto result = attempt_round(round_budget(budget, k, attempt));
      if (support_of(result) >= need) {
        retries = attempt;
        return result;
      }
    } catch (const SolverError&) {
    }
  }
  throw RecursionError("round " + std::to_string(k) + " found no patch with support >= " +
                           std::to_string(need),
                       trace);
}

}  // namespace

int plan_rounds(Index n) {
  if (n < 3) {
    throw Error(ErrorKind::Usage,
                "plan_rounds needs n >= 3 (ln ln n undefined); solve n < 3 directly");
  }
  const double nd = static_cast<double>(n);
  return static_cast<int>(std::ceil(std::log(std::log(nd)) / std::log(6.0 / 5.0)));
}

RecursionResult full_coloring(const Instance& instance, const SolverBudget& budget) {
  if (const std::string why = model_violation(instance.rows(), NormModel::BoxInf); !why.empty()) {
    throw Error(ErrorKind::Invariant, "full_coloring needs ||x_i||_inf <= 1: " + why);
  }
  const Index n = instance.n();
  RecursionTrace trace;
  trace.s_planned = n >= 3 ? plan_rounds(n) : 0;

  Coloring coloring = Coloring::zeros(n);
  IndexSet active = all_indices(n);
  double cumulative = 0.0;
  int k = 0;

  for (; k < trace.s_planned && static_cast<Index>(active.size()) > kBaseCaseCutoff; ++k) {
    const Instance restricted = restrict(instance, active);
    const Index nk = restricted.n();
    // ||x_i^(k)||_2^2 <= n_k, so the normalized rows satisfy sum ||.||^2 <= m;
    // the KashinSumSq constructor re-checks it.
    const Instance normalized(restricted.rows() / std::sqrt(static_cast<double>(nk)),
                              NormModel::KashinSumSq);
    const Index need = support_threshold(nk);
    int retries = 0;
    const SolveResult result = run_round(
        budget, k, need, trace,
        [&](const SolverBudget& b) { return solve(normalized, need, b); },
        [](const SolveResult& r) { return r.coloring.support(); }, retries);

    const double round_max = evaluate(restricted, result.coloring).max_abs;
    cumulative += round_max;
    coloring = merge(coloring, result.coloring, active);
    trace.rounds.push_back(
        {k, nk, result.coloring.support(), result.method, true, retries, round_max, cumulative});
    trace.final_method = result.method;
    active = coloring.zero_set();
  }

  if (!active.empty()) {
    const Instance restricted = restrict(instance, active);
    const Index ns = restricted.n();
    SolveResult result;
    if (ns <= kBaseCaseCutoff) {
      result = solve_exhaustive(restricted, ns, budget.workers);
    } else {
      const double threshold =
          kHoeffdingConstant * std::sqrt(static_cast<double>(ns) * std::log(static_cast<double>(n)));
      const SolverBudget tail_budget = round_budget(budget, k, kRoundRetries + 1);
      try {
        result = solve_random_full(restricted, threshold, tail_budget);
      } catch (const SolverError&) {
        try {
          result = solve_anneal(restricted, ns, tail_budget);
        } catch (const SolverError& e) {
          throw RecursionError(std::string("finishing round failed: ") + e.what(), trace);
        }
      }
    }
    cumulative += result.report.max_abs;
    coloring = merge(coloring, result.coloring, active);
    trace.rounds.push_back(
        {k, ns, result.coloring.support(), result.method, false, 0, result.report.max_abs, cumulative});
    trace.final_method = result.method;
  }

  if (!coloring.is_full()) {
    throw RecursionError("full_coloring left " + std::to_string(n - coloring.support()) +
                             " coordinates uncolored",
                         trace);
  }
  RecursionResult out;
  out.report = evaluate(instance, coloring);
  out.coloring = std::move(coloring);
  out.trace = std::move(trace);
  return out;
}

RecursionResult iterate_partial(const KomlosInstance& kom, int s, const SolverBudget& budget) {
  if (s < 1) throw Error(ErrorKind::Usage, "iterate_partial needs s >= 1");
  const Index n = kom.n();
  RecursionTrace trace;
  trace.s_planned = s;
  Coloring coloring = Coloring::zeros(n);
  IndexSet active = all_indices(n);
  double cumulative = 0.0;

  for (int k = 0; k < s && !active.empty(); ++k) {
    const KomlosInstance sub = restrict(kom, active);
    const Index nk = sub.n();
    const Index need = support_threshold(nk);
    int retries = 0;
    const KomlosResult result = run_round(
        budget, k, need, trace,
        [&](const SolverBudget& b) { return solve_komlos_partial(sub, need, b); },
        [](const KomlosResult& r) { return r.reduced.coloring.support(); }, retries);

    cumulative += result.inf_norm;
    coloring = merge(coloring, result.reduced.coloring, active);
    trace.rounds.push_back({k, nk, result.reduced.coloring.support(), result.reduced.method, true,
                            retries, result.inf_norm, cumulative});
    trace.final_method = result.reduced.method;
    active = coloring.zero_set();
  }

  RecursionResult out;
  out.report = evaluate(to_row_layout(kom), coloring);
  out.coloring = std::move(coloring);
  out.trace = std::move(trace);
  return out;
}

RecursionResult iterate_partial(const Instance& instance, int s, const SolverBudget& budget) {
  return iterate_partial(from_row_layout(instance), s, budget);
}

}  // namespace disclab
