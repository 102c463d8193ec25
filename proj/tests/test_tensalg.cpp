#include <catch2/catch_amalgamated.hpp>

#include "nclb/presets.hpp"
#include "nclb/rng.hpp"
#include "nclb/tensalg.hpp"

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

}  // namespace

TEST_CASE("graded tensor product collapses to normal forms") {
  PresPtr P = preset_slq2();
  auto e = [&](const char* s) { return parse_element(P, s); };
  TzPtr alg = make_tz_algebra(slq2_metric_module(P));

  GradedTensorElement x = tz_element(alg, 1, e("d"));
  GradedTensorElement y = tz_element(alg, -1, e("a"));
  GradedTensorElement xy = tz_product(x, y);
  CHECK(xy.n == 0);
  CHECK(xy.payload == e("1 + q bc"));

  GradedTensorElement unit = tz_element(alg, 0, e("1"));
  CHECK(tz_product(unit, x) == x);
  CHECK(tz_product(x, unit) == x);

  Rng rng(11);
  for (int t = 0; t < 100; ++t) {
    GradedTensorElement b1 = tz_element(alg, 1, random_homogeneous(P, alg->module.g, rng));
    GradedTensorElement b2 = tz_element(alg, 1, random_homogeneous(P, alg->module.g, rng));
    GradedTensorElement c =
        tz_element(alg, -1, random_homogeneous(P, P->grading.neg(alg->module.g), rng));
    CHECK(tz_product(tz_product(b1, b2), c) == tz_product(b1, tz_product(b2, c)));
  }

  TzPtr other = make_tz_algebra(slq2_calculus_module(P));
  CHECK(throws_errc([&] { tz_product(x, tz_element(other, 1, e("a"))); }, errc::mixed_module));
  CHECK(throws_errc([&] { tz_element(alg, 1, e("a")); }, errc::bad_degrees));
  CHECK(throws_errc(
      [&] { tz_element(alg, 1, parse_element(preset_circle(), "u")); }, errc::mixed_module));
}

TEST_CASE("star on the Z-graded algebra") {
  PresPtr P = preset_slq2();
  auto e = [&](const char* s) { return parse_element(P, s); };
  TzPtr alg = make_tz_algebra(make_hermitian_metric(slq2_metric_module(P)));

  CHECK(tz_star(tz_element(alg, 1, e("d"))) == tz_element(alg, -1, e("a")));
  CHECK(tz_star(tz_element(alg, 0, e("i"))) == tz_element(alg, 0, e("-i")));

  TzPtr bare = make_tz_algebra(slq2_metric_module(P));
  CHECK(throws_errc([&] { tz_star(tz_element(bare, 1, e("d"))); }, errc::no_metric));

  LineModuleData circ = circle_module();
  PresPtr C = circ.pres;
  HermitianMetric mc = make_hermitian_metric(circ, parse_element(C, "4"));
  TzPtr calg = make_tz_algebra(mc);

  // Dual-basis cross-check e^{i*} = e_j g^{ji} on both metrics.
  for (auto [handle, metric] :
       {std::pair<TzPtr, HermitianMetric>{alg, make_hermitian_metric(slq2_metric_module(P))},
        std::pair<TzPtr, HermitianMetric>{calg, mc}}) {
    GramData G = gram_matrices(metric);
    const LineModuleData& L = metric.base;
    for (std::size_t i = 0; i < L.v.size(); ++i) {
      AlgebraElement rhs = el_zero(L.pres);
      for (std::size_t j = 0; j < L.v.size(); ++j) rhs = rhs + L.w[j] * G.g_upper[j][i];
      CHECK(tz_star(tz_element(handle, 1, L.v[i])) == tz_element(handle, -1, rhs));
    }
  }

  Rng rng(7);
  int checked = 0;
  for (int t = 0; t < 200; ++t) {
    int n = static_cast<int>(rng.range(-3, 3));
    int mgrade = static_cast<int>(rng.range(-3, 3));
    AlgebraElement px = random_homogeneous(C, C->grading.scale(circ.g, n), rng);
    AlgebraElement py = random_homogeneous(C, C->grading.scale(circ.g, mgrade), rng);
    GradedTensorElement x = tz_element(calg, n, px);
    GradedTensorElement y = tz_element(calg, mgrade, py);
    CHECK(tz_star(tz_product(x, y)) == tz_product(tz_star(y), tz_star(x)));
    CHECK(tz_star(tz_star(x)) == x);
    ++checked;
  }
  CHECK(checked == 200);
}

TEST_CASE("star on the N-graded algebra is the payload star") {
  LineModuleData circ = circle_module();
  PresPtr C = circ.pres;
  TzPtr calg = make_tz_algebra(circ);
  auto f = [&](const char* s) { return parse_element(C, s); };

  GradedTensorElement x = tz_element(calg, 2, f("i u^2"));
  CHECK(tn_star(x) == tz_element(calg, 2, f("-i u_inv^2")));

  Rng rng(5);
  for (int t = 0; t < 100; ++t) {
    GradedTensorElement a = tz_element(calg, 1, random_homogeneous(C, circ.g, rng));
    GradedTensorElement b = tz_element(calg, 2, random_homogeneous(C, C->grading.zero(), rng));
    CHECK(tn_star(tz_product(a, b)) == tz_product(tn_star(b), tn_star(a)));
    CHECK(tn_star(tn_star(a)) == a);
  }

  PresPtr P = preset_slq2();
  TzPtr alg = make_tz_algebra(slq2_metric_module(P));
  CHECK(throws_errc([&] { tn_star(tz_element(alg, 1, parse_element(P, "d"))); },
                    errc::no_star_on_l));
  CHECK(throws_errc([&] { tn_star(tz_element(calg, -1, f("u"))); }, errc::bad_input));
}

TEST_CASE("surjectivity witnesses for every graded level") {
  PresPtr P = preset_slq2();
  for (const LineModuleData& L :
       {slq2_metric_module(P), slq2_calculus_module(P), circle_module(), trivial_module()}) {
    HopfGaloisReport rep = hopf_galois_check(L, 4);
    REQUIRE(rep.levels.size() == 4);
    CHECK(rep.ok);
    for (const auto& lvl : rep.levels) {
      CHECK(lvl.pos_ok);
      CHECK(lvl.neg_ok);
      const std::size_t want = [&] {
        std::size_t p = 1;
        for (int k = 0; k < lvl.k; ++k) p *= L.v.size();
        return p;
      }();
      CHECK(lvl.pos_pairs.size() == want);
      AlgebraElement s = el_zero(L.pres);
      for (const auto& [x, y] : lvl.neg_pairs) s = s + x * y;
      CHECK(s == el_one(L.pres));
    }
  }

  LineModuleData bare = make_line_module(
      P, {-1}, {parse_element(P, "d"), parse_element(P, "-b")},
      {parse_element(P, "a"), parse_element(P, "q^-1 c")});
  HopfGaloisReport rep = hopf_galois_check(bare, 2);
  CHECK_FALSE(rep.ok);
  CHECK(rep.levels[0].neg_ok);
  CHECK_FALSE(rep.levels[0].pos_ok);
}

TEST_CASE("xi and alpha") {
  LineModuleData circ = circle_module();
  PresPtr C = circ.pres;
  auto f = [&](const char* s) { return parse_element(C, s); };

  TzPtr a1 = make_tz_algebra(make_hermitian_metric(circ));
  XiAlpha xa1 = xi_alpha(a1);
  CHECK(xa1.xi == tz_element(a1, 2, f("1")));
  CHECK(xa1.alpha == f("1"));
  REQUIRE(xa1.beta.has_value());
  CHECK(*xa1.beta == f("1"));

  TzPtr a4 = make_tz_algebra(make_hermitian_metric(circ, f("4")));
  XiAlpha xa4 = xi_alpha(a4);
  CHECK(xa4.xi.payload == a4->metric->z_inv);
  CHECK(xa4.alpha == f("1"));

  LineModuleData triv = trivial_module();
  TzPtr at = make_tz_algebra(make_hermitian_metric(triv));
  XiAlpha xat = xi_alpha(at);
  CHECK(xat.xi.n == 2);
  CHECK(xat.xi.payload == el_one(triv.pres));
  CHECK(xat.alpha == el_one(triv.pres));

  PresPtr P = preset_slq2();
  TzPtr as = make_tz_algebra(make_hermitian_metric(slq2_metric_module(P)));
  CHECK(throws_errc([&] { xi_alpha(as); }, errc::no_star_on_l));
  CHECK(throws_errc([&] { xi_alpha(make_tz_algebra(circ)); }, errc::no_metric));
}

TEST_CASE("fourth roots and the compatibility rescale") {
  LineModuleData circ = circle_module();
  PresPtr C = circ.pres;
  auto f = [&](const char* s) { return parse_element(C, s); };

  CHECK(detail::scalar_fourth_root(f("16")) == f("2"));
  CHECK(detail::scalar_fourth_root(f("81/16")) == f("3/2"));
  CHECK_FALSE(detail::scalar_fourth_root(f("-1")).has_value());
  CHECK_FALSE(detail::scalar_fourth_root(f("2")).has_value());
  CHECK_FALSE(detail::scalar_fourth_root(f("u^2")).has_value());

  HermitianMetric m = make_hermitian_metric(circ);
  TzPtr alg = make_tz_algebra(m);

  XiAlpha synthetic{tz_element(alg, 2, f("1/16")), f("16"), detail::scalar_fourth_root(f("16"))};
  HermitianMetric rescaled = star_compat_rescale(synthetic, m);
  CHECK(rescaled.z == f("1/4"));

  XiAlpha bad{tz_element(alg, 2, f("1")), f("-1"), detail::scalar_fourth_root(f("-1"))};
  CHECK(throws_errc([&] { star_compat_rescale(bad, m); }, errc::no_fourth_root));

  // The honest flow leaves the metric unchanged because alpha is already 1.
  XiAlpha xa = xi_alpha(alg);
  HermitianMetric same = star_compat_rescale(xa, m);
  CHECK(same.z == m.z);
  CHECK(xi_alpha(make_tz_algebra(same)).alpha == el_one(C));
}

TEST_CASE("exchange, inverse and recombination identities") {
  Rng rng(21);
  LineModuleData circ = circle_module();
  auto q4 = parse_element(circ.pres, "4");

  for (const HermitianMetric& m :
       {make_hermitian_metric(circ), make_hermitian_metric(circ, q4),
        make_hermitian_metric(trivial_module())}) {
    TzPtr alg = make_tz_algebra(m);
    XiAlpha xa = xi_alpha(alg);
    XiReport rep = xi_properties_suite(xa, alg, rng);
    CHECK(rep.ok);
    REQUIRE(rep.checks.size() == 3);
    for (const auto& c : rep.checks) {
      INFO(c.id);
      CHECK(c.ok);
    }
  }
}

TEST_CASE("even-odd algebra") {
  LineModuleData circ = circle_module();
  PresPtr C = circ.pres;
  auto f = [&](const char* s) { return parse_element(C, s); };
  EvenOddAlgebra EO = even_odd_algebra(make_hermitian_metric(circ));

  EvenOddElement p = eo_element(EO, f("u^2"), el_zero(C));
  EvenOddElement q = eo_element(EO, f("u_inv^2 + 1"), el_zero(C));
  CHECK(eo_mul(EO, p, q) == eo_element(EO, f("1 + u^2"), el_zero(C)));

  EvenOddElement ox = eo_element(EO, el_zero(C), f("u"));
  EvenOddElement oy = eo_element(EO, el_zero(C), f("u_inv"));
  CHECK(eo_mul(EO, ox, oy) == eo_element(EO, f("1"), el_zero(C)));

  std::vector<WitnessPair> wit = even_odd_witness(EO);
  AlgebraElement s = el_zero(C);
  for (const auto& [x, y] : wit) s = s + x * y * EO.m.z;
  CHECK(s == el_one(C));

  Rng rng(13);
  auto rand_eo = [&] {
    return eo_element(EO, random_homogeneous(C, C->grading.zero(), rng),
                      random_homogeneous(C, circ.g, rng));
  };
  for (int t = 0; t < 100; ++t) {
    EvenOddElement x = rand_eo(), y = rand_eo(), w = rand_eo();
    CHECK(eo_mul(EO, eo_mul(EO, x, y), w) == eo_mul(EO, x, eo_mul(EO, y, w)));
    CHECK(eo_star(EO, eo_mul(EO, x, y)) == eo_mul(EO, eo_star(EO, y), eo_star(EO, x)));
    CHECK(star(x.odd * y.odd * EO.m.z) == star(y.odd) * star(x.odd) * EO.m.z);
  }

  CHECK(throws_errc([&] { eo_element(EO, f("u"), el_zero(C)); }, errc::bad_degrees));
  PresPtr P = preset_slq2();
  CHECK(throws_errc([&] { even_odd_algebra(make_hermitian_metric(slq2_metric_module(P))); },
                    errc::no_star_on_l));
}

TEST_CASE("product case table on formal tensors") {
  Rng rng(31);
  PresPtr P = preset_slq2();
  TzPtr slq = make_tz_algebra(slq2_calculus_module(P));
  TzPtr cir = make_tz_algebra(circle_module());

  struct Shape {
    int which, n, s, r;
  };
  for (const auto& alg : {cir, slq}) {
    for (const Shape& sh : {Shape{1, 1, 3, 1}, Shape{1, 1, 2, 1}, Shape{2, 1, 1, 1},
                            Shape{2, 2, 2, 2}, Shape{3, 1, 1, 1}, Shape{3, 3, 2, 1},
                            Shape{4, 1, 2, 3}, Shape{4, 1, 1, 1}, Shape{5, 2, 3, 2},
                            Shape{5, 1, 1, 1}}) {
      CaseReport rep = formal_case_check(alg, sh.which, sh.n, sh.s, sh.r, rng, 10, 2);
      INFO("case " << sh.which << " shape " << sh.n << "," << sh.s << "," << sh.r);
      CHECK(rep.ok);
      CHECK(rep.mismatches == 0);
    }
  }

  CaseReport degenerate = formal_case_check(cir, 4, 0, 2, 3, rng, 5, 2);
  CHECK(degenerate.ok);
  CHECK(throws_errc([&] { formal_case_check(cir, 1, 2, 2, 2, rng, 1, 2); }, errc::bad_input));
  CHECK(throws_errc([&] { formal_case_check(cir, 6, 1, 1, 1, rng, 1, 2); }, errc::bad_input));
}
