#include <doctest.h>

#include <cmath>
#include <numeric>

#include "smatch/instances.hpp"
#include "smatch/matching.hpp"

using namespace smatch;
using namespace smatch::instances;

namespace {

double dot_rows(const ActivationMatrix& a, std::size_t i, const ActivationMatrix& b,
                std::size_t j) {
  return std::inner_product(a.row(i).begin(), a.row(i).end(), b.row(j).begin(), 0.0);
}

}  // namespace

TEST_CASE("hadamard_matrix identities hold exactly in integer arithmetic") {
  CHECK(hadamard_matrix(1) == std::vector<std::vector<std::int64_t>>{{1}});
  CHECK(hadamard_matrix(2) == std::vector<std::vector<std::int64_t>>{{1, 1}, {-1, 1}});
  CHECK_THROWS_AS(hadamard_matrix(3), Error);
  CHECK_THROWS_AS(hadamard_matrix(0), Error);

  for (std::size_t n : {1u, 2u, 4u, 8u, 16u}) {
    const auto a = hadamard_matrix(n);
    for (std::size_t i = 0; i < n; ++i) {
      CHECK(a[i][i] == 1);  // unit diagonal
      for (std::size_t j = 0; j < n; ++j) {
        std::int64_t dot = 0;
        for (std::size_t k = 0; k < n; ++k) dot += a[i][k] * a[j][k];
        CHECK(dot == (i == j ? static_cast<std::int64_t>(n) : 0));  // A A^T = n I
        CHECK(a[i][j] + a[j][i] == (i == j ? 2 : 0));               // A + A^T = 2 I
      }
    }
  }
}

TEST_CASE("gen_hadamard matches the construction constants") {
  const InstancePair p = gen_hadamard(4, 0.2);
  const double delta = std::sqrt(0.02);
  const double diag = std::sqrt(0.94);
  CHECK(delta == doctest::Approx(0.1414214).epsilon(1e-6));
  CHECK(diag == doctest::Approx(0.9695360).epsilon(1e-6));

  for (std::size_t i = 0; i < 4; ++i) {
    CHECK(dot_rows(p.y, i, p.y, i) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(dot_rows(p.x, i, p.y, i) == doctest::Approx(diag).epsilon(1e-12));
    for (std::size_t j = 0; j < 4; ++j) {
      if (i == j) continue;
      CHECK(dot_rows(p.y, i, p.y, j) == doctest::Approx(0.0).epsilon(1e-12));
      CHECK(std::abs(dot_rows(p.x, i, p.y, j)) == doctest::Approx(delta).epsilon(1e-12));
    }
  }

  const InstancePair p2 = gen_hadamard(2, 0.2);
  // delta = 0.2 and y_1 = (sqrt(0.96) - 0.2) e_1 + 0.2 w_1 with w_1 = (1, -1)
  CHECK(p2.y.at(0, 0) == doctest::Approx(std::sqrt(0.96)).epsilon(1e-12));
  CHECK(p2.y.at(0, 1) == doctest::Approx(-0.2).epsilon(1e-12));

  CHECK_THROWS_AS(gen_hadamard(3, 0.2), Error);
  CHECK_THROWS_AS(gen_hadamard(4, 0.34), Error);
  CHECK_THROWS_AS(gen_hadamard(4, 0.0), Error);
}

TEST_CASE("appendix_c instances carry the documented vectors") {
  const InstancePair c1 = gen_appendix_c1();
  CHECK(c1.x == ActivationMatrix::from_rows({{1, 0}, {0, 1}}));
  CHECK(c1.y == ActivationMatrix::from_rows({{1, 0}, {1, 1}}));

  const InstancePair c2 = gen_appendix_c2();
  CHECK(c2.x == ActivationMatrix::from_rows({{0, 1}, {1, 1}, {1, -1}}));
  CHECK(c2.y == ActivationMatrix::from_rows({{1, 0}, {1, 1}, {1, -1}}));
}

TEST_CASE("remark_a1 instance") {
  const InstancePair p = gen_remark_a1(0.1);
  CHECK(p.x.rows() == 2);
  CHECK(p.y.rows() == 3);
  CHECK(p.y.at(2, 0) == doctest::Approx(0.99499).epsilon(1e-5));
  CHECK(p.y.at(2, 1) == 0.0);
  CHECK(p.y.at(2, 2) == doctest::Approx(0.1));
  for (std::size_t i = 0; i < 3; ++i) {
    CHECK(dot_rows(p.y, i, p.y, i) == doctest::Approx(1.0).epsilon(1e-12));
  }
  CHECK_THROWS_AS(gen_remark_a1(0.0), Error);
  CHECK_THROWS_AS(gen_remark_a1(1.0), Error);
}

TEST_CASE("random generators are seed-deterministic and well-formed") {
  const InstancePair a = gen_identical(4, 6, 42);
  const InstancePair b = gen_identical(4, 6, 42);
  CHECK(a.x == b.x);
  CHECK(a.y == a.x);  // both sides identical by construction
  CHECK(gen_identical(4, 6, 43).x != a.x);
  CHECK_THROWS_AS(gen_identical(7, 6, 0), Error);  // needs n <= d

  const InstancePair r1 = gen_rotated(3, 5, 7);
  const InstancePair r2 = gen_rotated(3, 5, 7);
  CHECK(r1.x == r2.x);
  CHECK(r1.y == r2.y);
  CHECK(r1.x != r1.y);

  const InstancePair g1 = gen_random_gaussian(2, 3, 4, 9);
  CHECK(g1.x.rows() == 2);
  CHECK(g1.y.rows() == 3);
  CHECK(g1.x == gen_random_gaussian(2, 3, 4, 9).x);
  for (std::size_t i = 0; i < g1.x.rows(); ++i) CHECK(g1.x.row_norm(i) > 0.0);
}

TEST_CASE("rotated instances are exact matches as a whole but not rowwise") {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const InstancePair p = gen_rotated(3, 5, 100 + seed);
    const MatchProblem problem(p.x, p.y, 0.0);
    const MatchPair full = max_match(problem);
    CHECK(full.xs.size() == 3);
    CHECK(full.ys.size() == 3);
    CHECK(similarity(problem) == 1.0);
    // generic recombinations leave no singleton matches
    for (std::size_t i = 0; i < 3; ++i) {
      for (std::size_t j = 0; j < 3; ++j) {
        CHECK_FALSE(is_match(problem, MatchPair::canonical({i}, {j})));
      }
    }
  }
}

TEST_CASE("generate dispatches on the instance kind") {
  InstanceSpec spec;
  spec.kind = InstanceKind::hadamard;
  spec.n = 4;
  spec.epsilon0 = 0.2;
  const InstancePair p = generate(spec);
  CHECK(p.x.rows() == 4);
  CHECK(instance_kind_from_string("appendix_c2") == InstanceKind::appendix_c2);
  CHECK_THROWS_AS(instance_kind_from_string("nope"), Error);
}
