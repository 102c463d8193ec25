#include <catch2/catch_amalgamated.hpp>

#include "nclb/rng.hpp"
#include "nclb/scalar.hpp"

using namespace nclb;

namespace {

Poly random_poly(Rng& rng, int maxdeg, bool allow_zero) {
  for (;;) {
    Poly p(static_cast<std::size_t>(rng.range(0, maxdeg)) + 1);
    for (auto& c : p) c = GaussRat{Rat(rng.range(-3, 3)), Rat(rng.range(-1, 1))};
    poly_trim(p);
    if (allow_zero || !poly_is_zero(p)) return p;
  }
}

Scalar random_scalar(Rng& rng, bool allow_zero = true) {
  for (;;) {
    Scalar s = make_fraction(random_poly(rng, 3, true), random_poly(rng, 2, false));
    if (allow_zero || !s.is_zero()) return s;
  }
}

}  // namespace

TEST_CASE("arithmetic matches hand-computed values") {
  Scalar q = scalar_q_power(1);
  Scalar qinv = scalar_q_power(-1);
  CHECK(q * qinv == scalar_one());
  // q*(1 - q^-2) + q^-1 = q - q^-1 + q^-1 = q
  Scalar lhs = q * (scalar_one() - scalar_q_power(-2)) + qinv;
  CHECK(lhs == q);
  CHECK(scalar_inv(scalar_int(2) * scalar_i()) == parse_scalar("-i/2"));
}

TEST_CASE("inverse of zero is rejected") {
  CHECK_THROWS_MATCHES(scalar_inv(scalar_zero()), error,
                       Catch::Matchers::Predicate<error>([](const error& e) {
                         return e.code() == errc::division_by_zero;
                       }));
}

TEST_CASE("field axioms hold exactly on random samples") {
  Rng rng(1);
  for (int n = 0; n < 1000; ++n) {
    Scalar a = random_scalar(rng);
    Scalar b = random_scalar(rng);
    Scalar c = random_scalar(rng);
    CHECK((a + b) + c == a + (b + c));
    CHECK((a * b) * c == a * (b * c));
    CHECK(a * (b + c) == a * b + a * c);
    CHECK(a + b == b + a);
    CHECK(a * b == b * a);
    CHECK(a + scalar_zero() == a);
    CHECK(a * scalar_one() == a);
    CHECK(a - a == scalar_zero());
    if (!a.is_zero()) CHECK(a * scalar_inv(a) == scalar_one());
  }
}

TEST_CASE("canonical form is scale-invariant") {
  Rng rng(2);
  for (int n = 0; n < 200; ++n) {
    Poly a = random_poly(rng, 3, true);
    Poly b = random_poly(rng, 3, false);
    Poly k = random_poly(rng, 2, false);
    CHECK(make_fraction(a, b) == make_fraction(poly_mul(k, a), poly_mul(k, b)));
  }
}

TEST_CASE("conjugation negates i, fixes q, and is an automorphism") {
  CHECK(scalar_conj(scalar_i()) == -scalar_i());
  CHECK(scalar_conj(scalar_q_power(2)) == scalar_q_power(2));
  Scalar x = (scalar_one() + scalar_i()) * scalar_q_power(-1);
  CHECK(scalar_conj(x) == (scalar_one() - scalar_i()) * scalar_q_power(-1));
  Rng rng(3);
  for (int n = 0; n < 200; ++n) {
    Scalar a = random_scalar(rng);
    Scalar b = random_scalar(rng);
    CHECK(scalar_conj(scalar_conj(a)) == a);
    CHECK(scalar_conj(a * b) == scalar_conj(a) * scalar_conj(b));
    CHECK(scalar_conj(a + b) == scalar_conj(a) + scalar_conj(b));
  }
}

TEST_CASE("numeric evaluation substitutes exactly before rounding") {
  auto v = scalar_eval(scalar_pow(scalar_q_power(1), 3), 0.9);
  CHECK(std::abs(v.real() - 0.729) < 1e-12);
  CHECK(v.imag() == 0.0);

  auto w = scalar_eval(scalar_i(), 0.5);
  CHECK(w == std::complex<double>(0.0, 1.0));

  Scalar pole = scalar_inv(scalar_one() - scalar_q_power(1));
  CHECK_THROWS_MATCHES(scalar_eval(pole, 1.0), error,
                       Catch::Matchers::Predicate<error>([](const error& e) {
                         return e.code() == errc::pole_at_q0;
                       }));
  // 0.5 is exact in binary, so q - 1/2 still has a detectable pole there.
  Scalar half_pole = scalar_inv(scalar_q_power(1) - parse_scalar("1/2"));
  CHECK_THROWS_AS(scalar_eval(half_pole, 0.5), error);
}

TEST_CASE("parser accepts the preset syntax") {
  CHECK(parse_scalar("q^-1 + 1") == scalar_q_power(-1) + scalar_one());
  CHECK(parse_scalar("2q") == scalar_int(2) * scalar_q_power(1));
  CHECK(parse_scalar("2*q^3") == scalar_int(2) * scalar_pow(scalar_q_power(1), 3));
  CHECK(parse_scalar("(q+1)^2") == (scalar_q_power(1) + scalar_one()) * (scalar_q_power(1) + scalar_one()));
  CHECK(parse_scalar("1/(1-q)") == scalar_inv(scalar_one() - scalar_q_power(1)));
  CHECK(parse_scalar("-q^-2") == -scalar_q_power(-2));
  CHECK_THROWS_AS(parse_scalar("q +"), error);
  CHECK_THROWS_AS(parse_scalar("x"), error);
}

TEST_CASE("printing round-trips through the parser") {
  Rng rng(4);
  for (int n = 0; n < 300; ++n) {
    Scalar s = random_scalar(rng);
    CHECK(parse_scalar(to_string(s)) == s);
  }
  CHECK(to_string(scalar_one() + scalar_q_power(-1)) == "1 + q^-1");
  CHECK(to_string(scalar_q_power(1) + scalar_one()) == "q + 1");
  CHECK(to_string(scalar_zero()) == "0");
  CHECK(to_string(scalar_pow(scalar_q_power(1), 3)) == "q^3");
  CHECK(to_string(-scalar_q_power(2)) == "-q^2");
}
