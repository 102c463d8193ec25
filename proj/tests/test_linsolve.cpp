#include <catch2/catch_amalgamated.hpp>

#include "nclb/linsolve.hpp"
#include "nclb/rng.hpp"

using namespace nclb;

TEST_CASE("unique systems solve exactly") {
  // x + q y = 1 + q^2 ; q x - y = q - q ... pinned so that x = 1, y = q.
  LinearSystem sys;
  sys.ncols = 2;
  sys.add_row({scalar_one(), scalar_q_power(1)}, parse_scalar("1 + q^2"));
  sys.add_row({scalar_q_power(1), -scalar_one()}, scalar_zero());
  auto x = solve_linear(sys);
  REQUIRE(x.has_value());
  CHECK((*x)[0] == scalar_one());
  CHECK((*x)[1] == scalar_q_power(1));
}

TEST_CASE("underdetermined systems give a particular solution") {
  LinearSystem sys;
  sys.ncols = 3;
  sys.add_row({scalar_one(), scalar_one(), scalar_zero()}, scalar_int(2));
  auto x = solve_linear(sys);
  REQUIRE(x.has_value());
  // Verify the returned vector satisfies the equation.
  CHECK((*x)[0] + (*x)[1] == scalar_int(2));
  CHECK((*x)[2] == scalar_zero());
}

TEST_CASE("inconsistent systems report no solution") {
  LinearSystem sys;
  sys.ncols = 1;
  sys.add_row({scalar_one()}, scalar_one());
  sys.add_row({scalar_one()}, scalar_int(2));
  CHECK(!solve_linear(sys).has_value());

  LinearSystem zero;
  zero.ncols = 2;
  zero.add_row({scalar_zero(), scalar_zero()}, scalar_one());
  CHECK(!solve_linear(zero).has_value());
}

TEST_CASE("random square systems invert round trip") {
  Rng rng(21);
  for (int t = 0; t < 50; ++t) {
    std::size_t n = 1 + rng.below(4);
    LinearSystem sys;
    sys.ncols = n;
    std::vector<std::vector<Scalar>> A(n, std::vector<Scalar>(n));
    std::vector<Scalar> sol(n);
    for (auto& row : A)
      for (auto& e : row)
        e = scalar_int(rng.range(-3, 3)) + scalar_q_power(rng.range(0, 2)) * scalar_int(rng.range(-1, 1));
    for (auto& s : sol) s = scalar_int(rng.range(-4, 4));
    for (std::size_t r = 0; r < n; ++r) {
      Scalar b = scalar_zero();
      for (std::size_t c = 0; c < n; ++c) b = b + A[r][c] * sol[c];
      sys.add_row(A[r], b);
    }
    auto x = solve_linear(sys);
    REQUIRE(x.has_value());
    // A may be singular; verify the residual rather than the vector.
    for (std::size_t r = 0; r < n; ++r) {
      Scalar b = scalar_zero();
      for (std::size_t c = 0; c < n; ++c) b = b + A[r][c] * (*x)[c];
      Scalar want = scalar_zero();
      for (std::size_t c = 0; c < n; ++c) want = want + A[r][c] * sol[c];
      CHECK(b == want);
    }
  }
}
