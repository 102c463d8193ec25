#include <catch2/catch_amalgamated.hpp>

#include "nclb/hermet.hpp"
#include "nclb/presets.hpp"
#include "nclb/rng.hpp"

using namespace nclb;

namespace {

template <typename F>
bool throws_errc(F f, errc want) {
  try {
    f();
  } catch (const error& e) {
    return e.code() == want;
  }
  return false;
}

ModuleElement lelem(const LineModuleData& L, const AlgebraElement& payload) {
  return module_element(L, ModuleElement::Side::L, payload);
}

// Closed form for both Gram matrices: g_upper = P.z and g_lower = P.z_inv,
// with P the dual-basis pairing matrix.
void check_gram_oracle(const LineModuleData& L, const AlgebraElement& z) {
  HermitianMetric m = make_hermitian_metric(L, z);
  GramData G = gram_matrices(m);
  DualBasis D = dual_basis(L);
  const std::size_t n = L.v.size();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      CHECK(G.g_upper[i][j] == D.P[i][j] * m.z);
      CHECK(G.g_lower[i][j] == D.P[i][j] * m.z_inv);
    }
}

}  // namespace

TEST_CASE("inner products match hand-expanded values") {
  PresPtr P = preset_slq2();
  auto e = [&](const char* s) { return parse_element(P, s); };
  HermitianMetric m = make_hermitian_metric(slq2_metric_module(P));

  CHECK(inner(m, lelem(m.base, e("d")), lelem(m.base, e("d"))) == e("1 + q bc"));
  CHECK(inner(m, lelem(m.base, e("-b")), lelem(m.base, e("-b"))) == e("-q^-1 bc"));
  CHECK(inner(m, lelem(m.base, e("d")), lelem(m.base, e("-b"))) == e("cd"));

  LineModuleData circ = circle_module();
  PresPtr C = circ.pres;
  auto f = [&](const char* s) { return parse_element(C, s); };
  HermitianMetric mc = make_hermitian_metric(circ);
  CHECK(inner(mc, lelem(circ, circ.v[0]), lelem(circ, circ.v[0])) ==
        f("(u^2 + 2 + u_inv^2)/4"));

  CHECK(throws_errc([&] { inner(m, lelem(circ, circ.v[0]), lelem(m.base, e("d"))); },
                    errc::wrong_module));
}

TEST_CASE("metric construction validates the rescale factor") {
  PresPtr P = preset_slq2();
  auto e = [&](const char* s) { return parse_element(P, s); };
  PresPtr C = preset_circle();
  auto f = [&](const char* s) { return parse_element(C, s); };

  CHECK(throws_errc([&] { make_hermitian_metric(slq2_metric_module(P), e("bc")); },
                    errc::not_central));
  CHECK(throws_errc([&] { make_hermitian_metric(circle_module(), f("u^2")); },
                    errc::not_hermitian));
  CHECK(throws_errc([&] { make_hermitian_metric(circle_module(), f("u^2 + u_inv^2")); },
                    errc::not_invertible));
  CHECK(throws_errc([&] { make_hermitian_metric(circle_module(), f("u")); },
                    errc::bad_degrees));
  CHECK(throws_errc([&] { make_hermitian_metric(circle_module(), e("1")); },
                    errc::mixed_presentation));

  // A valid pairing whose w row is not the star of v.
  LineModuleData skew = make_line_module(C, {1}, {f("2(u + u_inv)/2"), f("(-i)(u - u_inv)")},
                                         {f("(u + u_inv)/4"), f("(-i)(u - u_inv)/4")});
  CHECK(throws_errc([&] { make_hermitian_metric(skew); }, errc::not_star_compatible));
}

TEST_CASE("bounded inverse search") {
  PresPtr C = preset_circle();
  auto f = [&](const char* s) { return parse_element(C, s); };
  CHECK(bounded_inverse(C, f("u^2"), 4) == f("u_inv^2"));
  CHECK(bounded_inverse(C, f("4"), 4) == f("1/4"));
  CHECK(throws_errc([&] { bounded_inverse(C, el_zero(C), 4); }, errc::not_invertible));
}

TEST_CASE("Gram matrices solve to the closed form on every preset module") {
  PresPtr P = preset_slq2();
  check_gram_oracle(slq2_metric_module(P), el_one(P));
  check_gram_oracle(slq2_calculus_module(P), el_one(P));

  LineModuleData circ = circle_module();
  check_gram_oracle(circ, el_one(circ.pres));
  check_gram_oracle(circ, parse_element(circ.pres, "4"));

  LineModuleData triv = trivial_module();
  check_gram_oracle(triv, el_one(triv.pres));
}

TEST_CASE("Gram entries match hand-computed values") {
  PresPtr P = preset_slq2();
  auto e = [&](const char* s) { return parse_element(P, s); };
  GramData G = gram_matrices(make_hermitian_metric(slq2_metric_module(P)));
  CHECK(G.g_upper[0][0] == e("1 + q bc"));
  CHECK(G.g_upper[0][1] == e("q^-1 dc"));
  CHECK(G.g_upper[0][1] == e("cd"));
  CHECK(G.g_upper[1][1] == e("-q^-1 bc"));
  CHECK(G.g_upper[1][0] == e("-q ab"));
  DualBasis D = dual_basis(slq2_metric_module(P));
  REQUIRE(G.r.has_value());
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 2; ++j) CHECK((*G.r)[i][j] == D.P[i][j]);

  GramData Gc = gram_matrices(make_hermitian_metric(circle_module()));
  REQUIRE(Gc.r.has_value());
  DualBasis Dc = dual_basis(circle_module());
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 2; ++j) CHECK((*Gc.r)[i][j] == Dc.P[i][j]);
}

TEST_CASE("rescaling multiplies inner products and scales the square root") {
  LineModuleData circ = circle_module();
  PresPtr C = circ.pres;
  auto f = [&](const char* s) { return parse_element(C, s); };
  HermitianMetric m = make_hermitian_metric(circ);
  HermitianMetric m4 = rescale_metric(m, f("4"));
  HermitianMetric m1 = rescale_metric(m, f("1"));

  ModuleElement x = lelem(circ, circ.v[0]);
  ModuleElement y = lelem(circ, circ.v[1]);
  CHECK(inner(m4, x, y) == f("4") * inner(m, x, y));
  CHECK(inner(m1, x, y) == inner(m, x, y));

  GramData G4 = gram_matrices(m4);
  DualBasis D = dual_basis(circ);
  REQUIRE(G4.r.has_value());
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 2; ++j) {
      CHECK(G4.g_upper[i][j] == f("4") * D.P[i][j]);
      CHECK(G4.g_lower[i][j] == f("1/4") * D.P[i][j]);
      CHECK((*G4.r)[i][j] == f("2") * D.P[i][j]);
    }

  CHECK(throws_errc([&] { rescale_metric(m, f("u^2")); }, errc::not_hermitian));
}

TEST_CASE("a non-invertible rescale factor breaks the Gram solve") {
  LineModuleData circ = circle_module();
  PresPtr C = circ.pres;
  auto f = [&](const char* s) { return parse_element(C, s); };
  // Bypasses the constructor to reach the solver with a singular factor.
  HermitianMetric broken{circ, f("u^2 + u_inv^2"), el_one(C)};
  CHECK(throws_errc([&] { gram_matrices(broken); }, errc::singular_gram));
}

TEST_CASE("obstruction to a star structure on the module") {
  LineModuleData circ = circle_module();
  PresPtr C = circ.pres;
  auto f = [&](const char* s) { return parse_element(C, s); };
  HermitianMetric mc = make_hermitian_metric(circ);

  ElementMatrix id2{{el_one(C), el_zero(C)}, {el_zero(C), el_one(C)}};
  CHECK(star_obstruction(id2, mc) == el_one(C));

  ElementMatrix twice{{f("2"), el_zero(C)}, {el_zero(C), f("2")}};
  CHECK(star_obstruction(twice, mc) == f("4"));

  PresPtr P = preset_slq2();
  HermitianMetric ms = make_hermitian_metric(slq2_metric_module(P));
  ElementMatrix ids{{el_one(P), el_zero(P)}, {el_zero(P), el_one(P)}};
  CHECK(throws_errc([&] { star_obstruction(ids, ms); }, errc::not_bimodule_map));
  ElementMatrix offdiag{{el_zero(P), el_one(P)}, {el_one(P), el_zero(P)}};
  CHECK(throws_errc([&] { star_obstruction(offdiag, ms); }, errc::not_bimodule_map));

  CHECK(throws_errc([&] { star_obstruction(ElementMatrix{{el_one(C)}}, mc); },
                    errc::bad_input));
  ElementMatrix graded{{f("u"), el_zero(C)}, {el_zero(C), f("u")}};
  CHECK(throws_errc([&] { star_obstruction(graded, mc); }, errc::bad_degrees));
}

TEST_CASE("inner product linearity and symmetry") {
  Rng rng(2026);
  struct Case {
    LineModuleData L;
    AlgebraElement z;
  };
  std::vector<Case> cases;
  PresPtr P = preset_slq2();
  cases.push_back({slq2_metric_module(P), el_one(P)});
  LineModuleData circ = circle_module();
  cases.push_back({circ, parse_element(circ.pres, "4")});

  for (const auto& [L, z] : cases) {
    HermitianMetric m = make_hermitian_metric(L, z);
    const GradingGroup::Elem zero = L.pres->grading.zero();
    for (int t = 0; t < 100; ++t) {
      AlgebraElement a = random_homogeneous(L.pres, zero, rng);
      ModuleElement e = lelem(L, random_homogeneous(L.pres, L.g, rng));
      ModuleElement f = lelem(L, random_homogeneous(L.pres, L.g, rng));
      ModuleElement ae = lelem(L, a * e.payload);
      ModuleElement af = lelem(L, a * f.payload);
      CHECK(inner(m, ae, f) == a * inner(m, e, f));
      CHECK(inner(m, e, af) == inner(m, e, f) * star(a));
      CHECK(star(inner(m, e, f)) == inner(m, f, e));
    }
  }
}
