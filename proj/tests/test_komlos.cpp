#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "disclab/instances.hpp"
#include "disclab/komlos.hpp"
#include "disclab/random.hpp"

#include <cmath>

using namespace disclab;

namespace {

Coloring random_coloring(CounterRng& rng, Index n) {
  SignVector v(n);
  for (Index j = 0; j < n; ++j) v[j] = static_cast<int>(rng.below(3)) - 1;
  return Coloring(v);
}

}  // namespace

TEST_CASE("transpose reduction on the examples") {
  // u1 = (1,0), u2 = (0,1): rows a_1 = (1,0), a_2 = (0,1), scale 1.
  const KomlosInstance basis(Eigen::MatrixXd::Identity(2, 2));
  const Instance red = transpose_reduce(basis);
  CHECK(red.model() == NormModel::KashinSumSq);
  CHECK(red.rows() == Eigen::MatrixXd::Identity(2, 2));
  CHECK(reduction_scale(basis) == 1.0);

  // Four unit vectors in R^1: scale sqrt(1/4) = 1/2.
  const KomlosInstance line(Eigen::MatrixXd::Ones(1, 4));
  const Instance r2 = transpose_reduce(line);
  CHECK(r2.rows() == Eigen::MatrixXd::Constant(1, 4, 0.5));
  CHECK(r2.rows().squaredNorm() == doctest::Approx(1.0));

  CHECK_THROWS_AS(KomlosInstance(Eigen::MatrixXd::Constant(2, 1, 0.8)), Error);
}

TEST_CASE("row layout round trip is bit exact") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const KomlosInstance kom = generate_komlos({Family::RandomUnitColumns, 9, 5, seed});
    const Instance rows = to_row_layout(kom);
    CHECK(rows.model() == NormModel::KomlosUnit);
    CHECK(from_row_layout(rows) == kom);
    // sum_j ||a_j||^2 = sum_i ||u_i||^2 <= n, so the scaled rows sum to <= m.
    const Instance red = transpose_reduce(kom);
    CHECK(red.rows().squaredNorm() <= static_cast<double>(kom.m()) * (1 + 1e-12));
    CHECK(rows.rows().squaredNorm() == doctest::Approx(kom.columns().squaredNorm()));
  }
}

TEST_CASE("signed sums") {
  const KomlosInstance basis(Eigen::MatrixXd::Identity(2, 2));
  SignVector v(2);
  v << 1, -1;
  const Eigen::VectorXd s = signed_sum(basis, Coloring(v));
  CHECK(s[0] == 1.0);
  CHECK(s[1] == -1.0);

  Eigen::MatrixXd same(2, 2);
  same << 0.6, 0.6, 0.8, 0.8;
  CHECK(signed_sum(KomlosInstance(same), Coloring(v)).cwiseAbs().maxCoeff() == 0.0);
  CHECK_THROWS_AS(signed_sum(basis, Coloring::zeros(3)), Error);
}

TEST_CASE("reduced inner products are the signed sum scaled") {
  CounterRng rng(99, 0);
  int pairs = 0;
  for (std::uint64_t seed = 0; pairs < 1000; ++seed) {
    const Index n = 1 + static_cast<Index>(rng.below(20));
    const Index m = 1 + static_cast<Index>(rng.below(20));
    const KomlosInstance kom = generate_komlos({Family::RandomUnitColumns, n, m, seed});
    const Instance red = transpose_reduce(kom);
    const double scale = std::sqrt(static_cast<double>(m) / static_cast<double>(n));
    for (int t = 0; t < 10; ++t, ++pairs) {
      const Coloring c = random_coloring(rng, n);
      const Eigen::VectorXd lhs = evaluate(red, c).inner_products;
      const Eigen::VectorXd rhs = scale * signed_sum(kom, c);
      CHECK((lhs - rhs).cwiseAbs().maxCoeff() <= 1e-12);
    }
  }
}

TEST_CASE("partial colorings of small Komlos instances") {
  SolverBudget b;
  b.seed = 1;

  // Orthonormal vectors: every nonzero sum has infinity norm 1.
  const KomlosInstance ortho(Eigen::MatrixXd::Identity(6, 6));
  const KomlosResult o = solve_komlos_partial(ortho, b);
  CHECK(o.inf_norm == 1.0);
  CHECK(o.reduced.coloring.support() >= support_threshold(6));

  // Equal vectors cancel in pairs.
  const KomlosInstance equal(Eigen::MatrixXd::Constant(3, 4, 1.0 / std::sqrt(3.0)));
  const KomlosResult e = solve_komlos_partial(equal, b);
  CHECK(e.inf_norm == 0.0);
  CHECK(e.reduced.coloring.support() == 4);

  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const KomlosInstance kom = generate_komlos({Family::RandomUnitColumns, 12, 12, seed});
    const KomlosResult r = solve_komlos_partial(kom, b);
    CHECK(r.inf_norm <= r.certified_k);
    CHECK(r.certified_k == 14.0);
    CHECK(r.reduced.optimal);
    CHECK(r.inf_norm == doctest::Approx(signed_sum(kom, r.reduced.coloring).cwiseAbs().maxCoeff()));
  }
}

TEST_CASE("restricting a Komlos instance keeps the chosen columns") {
  const KomlosInstance kom = generate_komlos({Family::RandomUnitColumns, 5, 3, 2});
  const KomlosInstance sub = restrict(kom, {1, 4});
  CHECK(sub.n() == 2);
  CHECK(sub.columns().col(0) == kom.columns().col(1));
  CHECK(sub.columns().col(1) == kom.columns().col(4));
}
