#include "disclab/solvers.hpp"

#include "disclab/parallel.hpp"
#include "disclab/random.hpp"

#include <atomic>
#include <cmath>
#include <limits>

namespace disclab {

const char* to_string(Method method) {
  switch (method) {
    case Method::Exhaustive:
      return "Exhaustive";
    case Method::Anneal:
      return "Anneal";
    case Method::Random:
      return "Random";
  }
  return "?";
}

std::uint64_t default_retry_cap(Index n) {
  return static_cast<std::uint64_t>(std::ceil(100.0 * std::log(static_cast<double>(n) + 1.0)));
}

bool ranks_before(double max_a, Index support_a, const SignVector& a, double max_b,
                  Index support_b, const SignVector& b) {
  if (max_a != max_b) return max_a < max_b;
  if (support_a != support_b) return support_a > support_b;
  return lex_compare(a, b) < 0;
}

namespace {

SolveResult make_result(const Instance& instance, SignVector values, Method method, bool optimal) {
  SolveResult result;
  result.coloring = Coloring(std::move(values));
  result.report = evaluate(instance, result.coloring);
  result.method = method;
  result.optimal = optimal;
  return result;
}

void atomic_min(std::atomic<double>& target, double value) {
  double current = target.load();
  while (value < current && !target.compare_exchange_weak(current, value)) {
  }
}

double max_row_norm(const Eigen::MatrixXd& rows) {
  double best = 0.0;
  for (Index i = 0; i < rows.rows(); ++i) best = std::max(best, rows.row(i).norm());
  return best;
}

}  // namespace

SolveResult solve_exhaustive(const Instance& instance, Index min_support, unsigned workers) {
  const Index n = instance.n();
  const Index m = instance.m();
  if (n > kExhaustiveMaxN) {
    throw Error(ErrorKind::Refused, "exhaustive search refused for n = " + std::to_string(n) +
                                        " > " + std::to_string(kExhaustiveMaxN) +
                                        "; use the annealing solver");
  }
  min_support = std::max<Index>(min_support, 0);
  if (min_support > n) {
    throw SolverError("no coloring of length " + std::to_string(n) + " has support " +
                          std::to_string(min_support),
                      std::nullopt);
  }

  // With min_support == n only {-1,1}^n is feasible, so walk that cube instead.
  const bool binary = min_support == n;
  const int radix = binary ? 2 : 3;
  const int step = binary ? 2 : 1;
  const Index low = std::min<Index>(n, binary ? 12 : 8);
  const Index high = n - low;
  std::size_t chunks = 1;
  for (Index t = 0; t < high; ++t) chunks *= static_cast<std::size_t>(radix);

  const Eigen::MatrixXd& rows = instance.rows();
  const double tolerance = 1e-10 * (1.0 + rows.cwiseAbs().rowwise().sum().maxCoeff());
  std::atomic<double> shared_best{std::numeric_limits<double>::infinity()};
  std::vector<std::optional<SolveResult>> chunk_best(chunks);

  parallel_for(chunks, workers, [&](std::size_t chunk) {
    std::vector<int> digits(static_cast<std::size_t>(n), -1);
    std::vector<int> dir(static_cast<std::size_t>(low), 1);
    std::size_t code = chunk;
    for (Index t = 0; t < high; ++t) {
      const int d = static_cast<int>(code % static_cast<std::size_t>(radix));
      code /= static_cast<std::size_t>(radix);
      digits[static_cast<std::size_t>(low + t)] = binary ? (d ? 1 : -1) : d - 1;
    }
    Eigen::VectorXd ip = Eigen::VectorXd::Zero(m);
    Index support = 0;
    for (Index j = 0; j < n; ++j) {
      const int v = digits[static_cast<std::size_t>(j)];
      if (v != 0) {
        ip += static_cast<double>(v) * rows.col(j);
        ++support;
      }
    }

    std::optional<SolveResult>& best = chunk_best[chunk];
    const auto visit = [&] {
      if (support < min_support) return;
      const double threshold =
          std::min(best ? best->report.max_abs : std::numeric_limits<double>::infinity(),
                   shared_best.load(std::memory_order_relaxed)) +
          tolerance;
      const double* p = ip.data();
      for (Index i = 0; i < m; ++i) {
        if (std::abs(p[i]) > threshold) return;
      }
      SignVector values(n);
      for (Index j = 0; j < n; ++j) values[j] = digits[static_cast<std::size_t>(j)];
      SolveResult candidate = make_result(instance, std::move(values), Method::Exhaustive, true);
      if (!best || ranks_before(candidate, *best)) {
        atomic_min(shared_best, candidate.report.max_abs);
        best = std::move(candidate);
      }
    };

    // Reflected mixed-radix Gray code over the low digits: one coordinate
    // moves per step, so the inner products update in O(m).
    for (;;) {
      visit();
      Index j = 0;
      while (j < low) {
        const int next = digits[static_cast<std::size_t>(j)] + step * dir[static_cast<std::size_t>(j)];
        if (next >= -1 && next <= 1) break;
        dir[static_cast<std::size_t>(j)] = -dir[static_cast<std::size_t>(j)];
        ++j;
      }
      if (j == low) break;
      const int delta = step * dir[static_cast<std::size_t>(j)];
      int& digit = digits[static_cast<std::size_t>(j)];
      if (digit == 0) ++support;
      digit += delta;
      if (digit == 0) --support;
      ip += static_cast<double>(delta) * rows.col(j);
    }
  });

  std::optional<SolveResult> best;
  for (auto& candidate : chunk_best) {
    if (candidate && (!best || ranks_before(*candidate, *best))) best = std::move(candidate);
  }
  return std::move(*best);
}

SolveResult solve_anneal(const Instance& instance, Index min_support, const SolverBudget& budget) {
  const Index n = instance.n();
  const Index m = instance.m();
  const Eigen::MatrixXd& rows = instance.rows();
  min_support = std::max<Index>(min_support, 0);

  double start_temp = max_row_norm(rows);
  if (start_temp == 0.0) start_temp = 1.0;
  const double penalty_floor = 1e-3 * start_temp;
  const double inv_scale = 1.0 / start_temp;
  const std::uint64_t steps = budget.anneal_steps;
  const double cooling = steps > 0 ? std::pow(1e-3, 1.0 / static_cast<double>(steps)) : 1.0;
  const std::uint32_t restarts = std::max<std::uint32_t>(budget.restarts, 1);

  struct Outcome {
    std::optional<SolveResult> feasible;
    SolveResult closest;  // lowest penalized objective; used only for diagnostics
  };
  std::vector<Outcome> outcomes(restarts);

  parallel_for(restarts, budget.workers, [&](std::size_t restart) {
    CounterRng rng(budget.seed, restart);
    SignVector eps(n);
    for (Index j = 0; j < n; ++j) eps[j] = rng.sign();
    Index support = n;
    Eigen::VectorXd ip = rows * eps.cast<double>();

    // Moves are accepted on ||ip||_4 rather than max |ip_i|: the max is flat
    // under most single flips, the l4 norm is not. The best state is still
    // chosen by max_abs.
    const auto energy = [&](const Eigen::VectorXd& v) {
      double sum = 0.0;
      for (Index i = 0; i < m; ++i) {
        const double x = v[i] * inv_scale;
        sum += (x * x) * (x * x);
      }
      return start_temp * std::sqrt(std::sqrt(sum));
    };
    const auto objective = [&](double e, Index supp) {
      const Index deficit = std::max<Index>(0, min_support - supp);
      return e + 2.0 * std::max(e, penalty_floor) * static_cast<double>(deficit);
    };

    double current_max = max_abs(ip);
    double current_obj = objective(energy(ip), support);

    bool have_feasible = false;
    double best_max = 0.0;
    Index best_support = 0;
    SignVector best_eps;
    double closest_obj = current_obj;
    SignVector closest_eps = eps;

    const auto consider = [&] {
      if (support >= min_support) {
        if (!have_feasible ||
            ranks_before(current_max, support, eps, best_max, best_support, best_eps)) {
          have_feasible = true;
          best_max = current_max;
          best_support = support;
          best_eps = eps;
        }
      } else if (current_obj < closest_obj) {
        closest_obj = current_obj;
        closest_eps = eps;
      }
    };
    consider();

    double temp = start_temp;
    for (std::uint64_t s = 0; s < steps; ++s, temp *= cooling) {
      const Index j = static_cast<Index>(rng.below(static_cast<std::uint64_t>(n)));
      const int old_value = eps[j];
      // The two values other than old_value, in ascending order.
      const int lo_value = old_value == -1 ? 0 : -1;
      const int hi_value = old_value == 1 ? 0 : 1;
      const int new_value = rng.coin() ? hi_value : lo_value;
      const double delta = static_cast<double>(new_value - old_value);
      const Index new_support = support + (old_value == 0) - (new_value == 0);

      const double* col = rows.col(j).data();
      const double* p = ip.data();
      double proposed_max = 0.0;
      double sum = 0.0;
      for (Index i = 0; i < m; ++i) {
        const double v = p[i] + delta * col[i];
        proposed_max = std::max(proposed_max, std::abs(v));
        const double x = v * inv_scale;
        sum += (x * x) * (x * x);
      }
      const double proposed_obj =
          objective(start_temp * std::sqrt(std::sqrt(sum)), new_support);
      const double rise = proposed_obj - current_obj;
      if (rise <= 0.0 || rng.uniform() < std::exp(-rise / temp)) {
        ip += delta * rows.col(j);
        eps[j] = new_value;
        support = new_support;
        current_max = proposed_max;
        current_obj = proposed_obj;
        consider();
      }
      if ((s & 4095) == 4095) {
        ip.noalias() = rows * eps.cast<double>();
        current_max = max_abs(ip);
        current_obj = objective(energy(ip), support);
      }
    }

    Outcome& out = outcomes[restart];
    if (have_feasible) out.feasible = make_result(instance, best_eps, Method::Anneal, false);
    out.closest = make_result(instance, closest_eps, Method::Anneal, false);
  });

  std::optional<SolveResult> best;
  for (auto& out : outcomes) {
    if (out.feasible && (!best || ranks_before(*out.feasible, *best))) best = out.feasible;
  }
  if (!best) {
    SolveResult closest = outcomes.front().closest;
    for (const auto& out : outcomes) {
      if (ranks_before(out.closest, closest)) closest = out.closest;
    }
    closest.attempts = restarts;
    throw SolverError("annealing found no coloring with support >= " +
                          std::to_string(min_support),
                      std::move(closest));
  }
  best->attempts = restarts;
  return std::move(*best);
}

SolveResult solve_random_full(const Instance& instance, double threshold,
                              const SolverBudget& budget) {
  if (!(threshold > 0.0)) {
    throw Error(ErrorKind::Usage, "random coloring threshold must be positive");
  }
  const Index n = instance.n();
  const std::uint64_t cap = budget.retry_cap ? budget.retry_cap : default_retry_cap(n);
  std::optional<SolveResult> best;
  for (std::uint64_t attempt = 0; attempt < cap; ++attempt) {
    CounterRng rng(budget.seed, attempt);
    SignVector eps(n);
    for (Index j = 0; j < n; ++j) eps[j] = rng.sign();
    SolveResult result = make_result(instance, std::move(eps), Method::Random, false);
    result.attempts = attempt + 1;
    if (result.report.max_abs <= threshold) return result;
    if (!best || ranks_before(result, *best)) best = std::move(result);
  }
  throw SolverError("no random full coloring reached max_abs <= " + std::to_string(threshold) +
                        " within " + std::to_string(cap) + " attempts",
                    std::move(best));
}

SolveResult solve(const Instance& instance, Index min_support, const SolverBudget& budget) {
  const Index n = instance.n();
  bool small = n <= kExhaustiveMaxN;
  if (small) {
    std::uint64_t states = 1;
    for (Index t = 0; t < n; ++t) states *= 3;
    small = states <= budget.max_candidates;
  }
  if (small) return solve_exhaustive(instance, min_support, budget.workers);
  return solve_anneal(instance, min_support, budget);
}

}  // namespace disclab
