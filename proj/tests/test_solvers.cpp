#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "disclab/random.hpp"
#include "disclab/solvers.hpp"

#include <cmath>

using namespace disclab;

namespace {

Instance random_kashin(CounterRng& rng, Index m, Index n) {
  Eigen::MatrixXd rows(m, n);
  for (Index i = 0; i < m; ++i)
    for (Index j = 0; j < n; ++j) rows(i, j) = rng.normal();
  rows *= std::sqrt(static_cast<double>(m) / rows.squaredNorm());
  return Instance(rows, NormModel::KashinSumSq);
}

// Oracle: every vector of {-1,0,1}^n in base-3 order, naive dot products,
// the same total order applied by a linear scan.
struct Brute {
  double max_abs = 0.0;
  Index support = 0;
  SignVector values;
};

Brute brute_force(const Instance& inst, Index min_support) {
  const Index n = inst.n();
  std::uint64_t total = 1;
  for (Index j = 0; j < n; ++j) total *= 3;
  Brute best;
  bool have = false;
  SignVector v(n);
  for (std::uint64_t code = 0; code < total; ++code) {
    std::uint64_t c = code;
    Index support = 0;
    for (Index j = 0; j < n; ++j, c /= 3) {
      v[j] = static_cast<int>(c % 3) - 1;
      support += v[j] != 0;
    }
    if (support < min_support) continue;
    double worst = 0.0;
    for (Index i = 0; i < inst.m(); ++i) {
      long double s = 0;
      for (Index j = 0; j < n; ++j) s += static_cast<long double>(inst.rows()(i, j)) * v[j];
      worst = std::max(worst, static_cast<double>(std::fabs(s)));
    }
    if (!have || worst < best.max_abs - 1e-12 ||
        (std::abs(worst - best.max_abs) <= 1e-12 &&
         (support > best.support || (support == best.support && lex_compare(v, best.values) < 0)))) {
      have = true;
      best = {worst, support, v};
    }
  }
  return best;
}

}  // namespace

TEST_CASE("exhaustive search on the small examples") {
  const double h = 1.0 / std::sqrt(2.0);
  Eigen::MatrixXd diag(1, 2);
  diag << h, h;
  const SolveResult r = solve_exhaustive(Instance(diag, NormModel::KashinSumSq), 1);
  CHECK(r.report.max_abs == 0.0);
  CHECK(r.coloring.support() == 2);
  // (1,-1) and (-1,1) tie; the lexicographic rule keeps (-1,1).
  CHECK(r.coloring.values()[0] == -1);
  CHECK(r.coloring.values()[1] == 1);
  CHECK(r.optimal);
  CHECK(r.method == Method::Exhaustive);

  const Instance id(Eigen::MatrixXd::Identity(2, 2), NormModel::KashinSumSq);
  const SolveResult ri = solve_exhaustive(id, 1);
  const Brute bi = brute_force(id, 1);
  CHECK(ri.report.max_abs == bi.max_abs);
  CHECK(ri.coloring.values() == bi.values);
  CHECK(ri.report.max_abs == 1.0);

  const Instance one(Eigen::MatrixXd::Ones(1, 1), NormModel::BoxInf);
  const SolveResult r1 = solve_exhaustive(one, 1);
  CHECK(r1.report.max_abs == 1.0);
  CHECK(r1.coloring.support() == 1);
}

TEST_CASE("exhaustive search agrees with brute force") {
  CounterRng rng(1234, 0);
  for (int trial = 0; trial < 60; ++trial) {
    const Index n = 1 + static_cast<Index>(rng.below(10));
    const Index m = 1 + static_cast<Index>(rng.below(8));
    const Instance inst = random_kashin(rng, m, n);
    const Index need = static_cast<Index>(rng.below(static_cast<std::uint64_t>(n) + 1));
    const SolveResult r = solve_exhaustive(inst, need, 1);
    const Brute b = brute_force(inst, need);
    CHECK(r.report.max_abs == doctest::Approx(b.max_abs).epsilon(1e-12));
    CHECK(r.coloring.values() == b.values);
    CHECK(r.coloring.support() >= need);
  }
}

TEST_CASE("exhaustive search is independent of the worker count") {
  CounterRng rng(77, 0);
  for (int trial = 0; trial < 5; ++trial) {
    const Instance inst = random_kashin(rng, 12, 11);
    const SolveResult a = solve_exhaustive(inst, 2, 1);
    const SolveResult b = solve_exhaustive(inst, 2, 4);
    CHECK(a.coloring == b.coloring);
    CHECK(a.report.max_abs == b.report.max_abs);
    const SolveResult fa = solve_exhaustive(inst, 11, 1);
    const SolveResult fb = solve_exhaustive(inst, 11, 3);
    CHECK(fa.coloring == fb.coloring);
    CHECK(fa.coloring.is_full());
  }
}

TEST_CASE("exhaustive search refusals and errors") {
  const Instance big(Eigen::MatrixXd::Zero(1, 17), NormModel::BoxInf);
  try {
    solve_exhaustive(big, 1);
    FAIL("expected refusal");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Refused);
  }
  const Instance small(Eigen::MatrixXd::Zero(1, 3), NormModel::BoxInf);
  CHECK_THROWS_AS(solve_exhaustive(small, 4), SolverError);
}

TEST_CASE("sign symmetry of the exhaustive optimum") {
  CounterRng rng(8, 8);
  for (int trial = 0; trial < 20; ++trial) {
    const Instance inst = random_kashin(rng, 5, 7);
    const Instance flipped(-inst.rows(), NormModel::KashinSumSq);
    const SolveResult a = solve_exhaustive(inst, 2, 1);
    const SolveResult b = solve_exhaustive(flipped, 2, 1);
    CHECK(a.report.max_abs == b.report.max_abs);
    // Exactly one of {eps, -eps} is selected: the first nonzero entry is -1.
    Index first = 0;
    while (a.coloring[first] == 0) ++first;
    CHECK(a.coloring[first] == -1);
  }
}

TEST_CASE("annealing never beats the exhaustive optimum") {
  CounterRng rng(4321, 0);
  SolverBudget budget;
  budget.anneal_steps = 20000;
  budget.restarts = 4;
  for (int trial = 0; trial < 15; ++trial) {
    const Index n = 4 + static_cast<Index>(rng.below(8));
    const Index m = 1 + static_cast<Index>(rng.below(2 * n));
    const Instance inst = random_kashin(rng, m, n);
    const Index need = support_threshold(n);
    budget.seed = trial;
    const SolveResult ex = solve_exhaustive(inst, need, 1);
    const SolveResult an = solve_anneal(inst, need, budget);
    CHECK(an.report.max_abs >= ex.report.max_abs - 1e-12);
    CHECK(an.coloring.support() >= need);
    CHECK_FALSE(an.optimal);
    CHECK(an.method == Method::Anneal);
  }
}

TEST_CASE("annealing on the zero instance and the Kashin guarantee") {
  SolverBudget budget;
  budget.anneal_steps = 5000;
  budget.restarts = 2;
  budget.seed = 3;
  const Instance zero(Eigen::MatrixXd::Zero(4, 30), NormModel::BoxInf);
  const SolveResult z = solve_anneal(zero, 5, budget);
  CHECK(z.report.max_abs == 0.0);
  CHECK(z.coloring.support() == 30);

  CounterRng rng(12, 12);
  budget.anneal_steps = 50000;
  budget.restarts = 4;
  for (int trial = 0; trial < 5; ++trial) {
    const Instance inst = random_kashin(rng, 12, 12);
    budget.seed = 100 + trial;
    const SolveResult r = solve_anneal(inst, support_threshold(12), budget);
    CHECK(r.report.max_abs <= 14.0);
    CHECK(r.report.max_abs >= solve_exhaustive(inst, support_threshold(12), 1).report.max_abs - 1e-12);
  }
}

TEST_CASE("annealing is deterministic in the seed and not in the worker count") {
  CounterRng rng(6, 6);
  const Instance inst = random_kashin(rng, 30, 40);
  SolverBudget budget;
  budget.anneal_steps = 10000;
  budget.restarts = 4;
  budget.seed = 42;
  budget.workers = 1;
  const SolveResult a = solve_anneal(inst, 7, budget);
  budget.workers = 3;
  const SolveResult b = solve_anneal(inst, 7, budget);
  CHECK(a.coloring == b.coloring);
  CHECK(a.report.max_abs == b.report.max_abs);
  budget.seed = 43;
  const SolveResult c = solve_anneal(inst, 7, budget);
  CHECK(c.coloring.support() >= 7);
}

TEST_CASE("annealing reports the best infeasible state when support is unreachable") {
  const Instance inst(Eigen::MatrixXd::Ones(1, 3), NormModel::BoxInf);
  SolverBudget budget;
  budget.anneal_steps = 100;
  budget.restarts = 1;
  try {
    solve_anneal(inst, 4, budget);
    FAIL("expected a solver error");
  } catch (const SolverError& e) {
    REQUIRE(e.best().has_value());
    CHECK(e.best()->coloring.size() == 3);
  }
}

TEST_CASE("random full colorings") {
  SolverBudget budget;
  budget.seed = 9;
  const Instance zero(Eigen::MatrixXd::Zero(3, 10), NormModel::BoxInf);
  const SolveResult z = solve_random_full(zero, 0.5, budget);
  CHECK(z.attempts == 1);
  CHECK(z.coloring.support() == 10);

  const Instance id(Eigen::MatrixXd::Identity(6, 6), NormModel::BoxInf);
  const SolveResult r = solve_random_full(id, 1.0, budget);
  CHECK(r.attempts == 1);
  CHECK(r.report.max_abs == 1.0);
  CHECK(r.method == Method::Random);

  budget.retry_cap = 5;
  try {
    solve_random_full(id, 0.5, budget);
    FAIL("expected retry exhaustion");
  } catch (const SolverError& e) {
    REQUIRE(e.best().has_value());
    CHECK(e.best()->coloring.is_full());
  }
  CHECK_THROWS_AS(solve_random_full(id, 0.0, budget), Error);

  CHECK(default_retry_cap(1) == static_cast<std::uint64_t>(std::ceil(100 * std::log(2.0))));
  CHECK(default_retry_cap(100) == 462);
}

TEST_CASE("Hoeffding tail for random colorings of +-1 rows") {
  // Rows of +-1 entries: ||x_i||_2^2 = n. With threshold 4 sqrt(n ln n),
  // 1 - 2m exp(-t^2 / (2 max ||x_i||^2)) = 1 - 2n^{-7}.
  const Index n = 64;
  CounterRng rng(31, 0);
  Eigen::MatrixXd rows(n, n);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j) rows(i, j) = rng.sign();
  const Instance inst(rows, NormModel::BoxInf);
  const double t = 4.0 * std::sqrt(static_cast<double>(n) * std::log(static_cast<double>(n)));
  const double bound = 1.0 - 2.0 * n * std::exp(-t * t / (2.0 * n));
  SolverBudget budget;
  budget.retry_cap = 1;
  int successes = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    budget.seed = static_cast<std::uint64_t>(trial);
    try {
      solve_random_full(inst, t, budget);
      ++successes;
    } catch (const SolverError&) {
    }
  }
  // Binomial slack of three standard deviations.
  const double sd = std::sqrt(bound * (1.0 - bound) / 1000.0);
  CHECK(successes / 1000.0 >= bound - 3.0 * sd - 1e-3);
}

TEST_CASE("solve dispatches on the candidate budget") {
  SolverBudget budget;
  budget.anneal_steps = 2000;
  budget.restarts = 1;
  CounterRng rng(5, 0);
  CHECK(solve(random_kashin(rng, 3, 3), 1, budget).method == Method::Exhaustive);
  CHECK(solve(random_kashin(rng, 10, 40), 7, budget).method == Method::Anneal);
  budget.max_candidates = 0;
  CHECK(solve(random_kashin(rng, 3, 3), 1, budget).method == Method::Anneal);
}
