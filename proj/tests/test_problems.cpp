#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <sstream>
#include <vector>

#include "cdlab/problems.hpp"

using namespace cdlab;

namespace {

double matrix_max_abs_diff(const DenseMatrix& x, const DenseMatrix& y) {
  REQUIRE(x.rows == y.rows);
  REQUIRE(x.cols == y.cols);
  double d = 0.0;
  for (std::size_t k = 0; k < x.a.size(); ++k) d = std::max(d, std::abs(x.a[k] - y.a[k]));
  return d;
}

} // namespace

TEST_CASE("objective evaluates x'Ax - 2b'x") {
  DenseMatrix a(2, 2);
  a(0, 0) = 2; a(0, 1) = 1; a(1, 0) = 1; a(1, 1) = 3;
  QuadraticProblem p = make_problem(a, {1.0, -1.0});
  // x = (1,2): x'Ax = 18, b'x = -1
  CHECK(objective(p, {1.0, 2.0}) == doctest::Approx(20.0).epsilon(1e-14));
  CHECK(objective(p, p.x_star) == doctest::Approx(p.f_star).epsilon(1e-12));
}

TEST_CASE("make_problem validates shape, symmetry, diagonal and PSD") {
  CHECK_THROWS_AS(make_problem(DenseMatrix(2, 3), std::vector<double>(2, 0.0)),
                  std::invalid_argument);
  CHECK_THROWS_AS(make_problem(DenseMatrix::identity(3), std::vector<double>(2, 0.0)),
                  std::invalid_argument);

  DenseMatrix asym(2, 2);
  asym(0, 0) = 1; asym(0, 1) = 0.5; asym(1, 0) = 0.4; asym(1, 1) = 1;
  CHECK_THROWS_WITH_AS(make_problem(asym, std::vector<double>(2, 0.0)),
                       "make_problem: A must be symmetric", std::invalid_argument);

  DenseMatrix zdiag = DenseMatrix::identity(2);
  zdiag(1, 1) = 0.0;
  CHECK_THROWS_WITH_AS(make_problem(zdiag, std::vector<double>(2, 0.0)),
                       "make_problem: diagonal entries must be positive", std::invalid_argument);

  DenseMatrix indef(2, 2);
  indef(0, 0) = 1; indef(0, 1) = 2; indef(1, 0) = 2; indef(1, 1) = 1; // eigenvalues 3, -1
  CHECK_THROWS_WITH_AS(make_problem(indef, std::vector<double>(2, 0.0)),
                       "make_problem: A is not PSD", std::invalid_argument);
}

TEST_CASE("make_problem computes the minimizer through the pseudo-inverse") {
  DenseMatrix a(2, 2);
  a(0, 0) = 2; a(0, 1) = 0; a(1, 0) = 0; a(1, 1) = 4;
  QuadraticProblem p = make_problem(a, {2.0, 4.0});
  CHECK(p.x_star[0] == doctest::Approx(1.0).epsilon(1e-13));
  CHECK(p.x_star[1] == doctest::Approx(1.0).epsilon(1e-13));
  CHECK(p.f_star == doctest::Approx(-6.0).epsilon(1e-13));
  CHECK(!p.singular);

  // singular A with b in range: minimum-norm solution
  DenseMatrix ones(2, 2);
  ones.a.assign(4, 1.0);
  QuadraticProblem ps = make_problem(ones, {1.0, 1.0});
  CHECK(ps.singular);
  CHECK(ps.x_star[0] == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(ps.x_star[1] == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(ps.f_star == doctest::Approx(-1.0).epsilon(1e-12));

  // b outside range(A) is rejected
  CHECK_THROWS_WITH_AS(make_problem(ones, std::vector<double>{1.0, -1.0}),
                       "make_problem: b is not in range(A)", std::invalid_argument);
}

TEST_CASE("make_ac builds the uniform off-diagonal family") {
  QuadraticProblem p = make_ac(4, 0.7);
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j)
      CHECK(p.A(i, j) == ((i == j) ? 1.0 : 0.7));
  CHECK(p.f_star == 0.0);
  CHECK(!p.singular);
  CHECK_THROWS_AS(make_ac(1, 0.5), std::invalid_argument);
  CHECK_THROWS_AS(make_ac(4, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(make_ac(4, 1.0), std::invalid_argument);
}

TEST_CASE("metrics closed forms on the worst-case family") {
  const std::size_t n = 10;
  const double c = 0.6;
  MetricsReport r = metrics(make_ac(n, c));
  // spectrum: 1-c (n-1 times), 1-c+cn once
  CHECK(r.L == doctest::Approx(1.0 - c + c * n).epsilon(1e-12));
  CHECK(r.lambda_min == doctest::Approx(1.0 - c).epsilon(1e-12));
  CHECK(r.kappa == doctest::Approx((1.0 - c + c * n) / (1.0 - c)).epsilon(1e-12));
  CHECK(r.kappa_cd == doctest::Approx(1.0 / (1.0 - c)).epsilon(1e-12));
  CHECK(r.L_min == 1.0);
  CHECK(r.L_max == 1.0);
  CHECK(r.L_avg == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(r.tau == doctest::Approx(r.L).epsilon(1e-12));
  for (double chi : r.chi_i) CHECK(chi == doctest::Approx((n - 1) * c).epsilon(1e-13));
  CHECK(r.chi_avg == doctest::Approx((n - 1) * c).epsilon(1e-13));
  CHECK(r.chi_max == doctest::Approx((n - 1) * c).epsilon(1e-13));
  // unit diagonal: preconditioning is the identity map
  CHECK(r.hat_L == doctest::Approx(r.L).epsilon(1e-12));
  CHECK(r.hat_kappa == doctest::Approx(r.kappa).epsilon(1e-12));
  CHECK(r.hat_kappa_cd == doctest::Approx(r.kappa_cd).epsilon(1e-12));
}

TEST_CASE("metrics uses the smallest nonzero eigenvalue when singular") {
  DenseMatrix ones(2, 2);
  ones.a.assign(4, 1.0); // eigenvalues 0, 2
  MetricsReport r = metrics(make_problem(ones, {0.0, 0.0}));
  CHECK(r.L == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(r.lambda_min == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(r.kappa == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("jacobi_precondition rescales to unit diagonal") {
  DenseMatrix a(2, 2);
  a(0, 0) = 4; a(0, 1) = 1; a(1, 0) = 1; a(1, 1) = 1;
  DenseMatrix h = jacobi_precondition(a);
  CHECK(h(0, 0) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(h(1, 1) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(h(0, 1) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(h(1, 0) == doctest::Approx(0.5).epsilon(1e-15));
  DenseMatrix z(2, 2);
  CHECK_THROWS_AS(jacobi_precondition(z), std::invalid_argument);
}

TEST_CASE("lower_triangular_part keeps the diagonal") {
  DenseMatrix a(3, 3);
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j) a(i, j) = 1.0 + static_cast<double>(3 * i + j);
  DenseMatrix l = lower_triangular_part(a);
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j) CHECK(l(i, j) == (j <= i ? a(i, j) : 0.0));
}

TEST_CASE("translate_problem shifts the minimizer to x0 - v") {
  QuadraticProblem p = make_ac(3, 0.4); // x* = 0
  std::vector<double> x0{1.0, -2.0, 0.5}, v{0.25, 0.25, 0.25};
  QuadraticProblem q = translate_problem(p, x0, v);
  for (std::size_t i = 0; i < 3; ++i)
    CHECK(q.x_star[i] == doctest::Approx(x0[i] - v[i]).epsilon(1e-11));
  CHECK(matrix_max_abs_diff(q.A, p.A) == 0.0);
  CHECK_THROWS_AS(translate_problem(p, {1.0}, v), std::invalid_argument);
}

TEST_CASE("write/read round-trips problems exactly") {
  EnsembleSpec spec;
  spec.n = 5;
  spec.dist = Distribution::gaussian;
  spec.seed = 17;
  QuadraticProblem p = make_random(spec);
  std::stringstream ss;
  write_problem(ss, p);
  QuadraticProblem q = read_problem(ss);
  CHECK(q.dim() == p.dim());
  CHECK(matrix_max_abs_diff(q.A, p.A) == 0.0);
  for (std::size_t i = 0; i < p.dim(); ++i) CHECK(q.b[i] == p.b[i]);

  std::stringstream bad("0\n");
  CHECK_THROWS_AS(read_problem(bad), std::invalid_argument);
  std::stringstream trunc("2\n1 0\n0");
  CHECK_THROWS_AS(read_problem(trunc), std::invalid_argument);
}

TEST_CASE("make_random is deterministic, PSD and diagonal-normalized") {
  EnsembleSpec spec;
  spec.n = 12;
  spec.dist = Distribution::uniform;
  spec.p1 = 0.0;
  spec.p2 = 1.0;
  spec.seed = 5;
  QuadraticProblem p = make_random(spec);
  QuadraticProblem q = make_random(spec);
  CHECK(matrix_max_abs_diff(p.A, q.A) == 0.0);
  for (std::size_t i = 0; i < spec.n; ++i) CHECK(p.A(i, i) == doctest::Approx(1.0).epsilon(1e-14));
  MetricsReport r = metrics(p);
  CHECK(r.lambda_min > 0.0);

  spec.seed = 6;
  QuadraticProblem r2 = make_random(spec);
  CHECK(matrix_max_abs_diff(p.A, r2.A) > 0.0);

  spec.normalize_diagonal = false;
  QuadraticProblem raw = make_random(spec);
  // gram of a square factor: valid problem regardless of scaling
  CHECK_NOTHROW(make_problem(raw.A, std::vector<double>(spec.n, 0.0)));

  EnsembleSpec badspec;
  badspec.n = 1;
  CHECK_THROWS_AS(make_random(badspec), std::invalid_argument);
  badspec.n = 4;
  badspec.dist = Distribution::uniform;
  badspec.p1 = 2.0;
  badspec.p2 = 1.0;
  CHECK_THROWS_AS(make_random(badspec), std::invalid_argument);
}

TEST_CASE("make_random lognormal entries are positive before the gram step") {
  EnsembleSpec spec;
  spec.n = 6;
  spec.dist = Distribution::lognormal;
  spec.p1 = 0.0;
  spec.p2 = 0.5;
  spec.seed = 3;
  QuadraticProblem p = make_random(spec);
  // gram of an all-positive factor is entrywise positive
  for (double v : p.A.a) CHECK(v > 0.0);
}
