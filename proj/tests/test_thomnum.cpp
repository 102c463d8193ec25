#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>

#include "nclb/thomnum.hpp"

using namespace nclb;

namespace {

template <class F>
bool throws_errc(F&& fn, errc want) {
  try {
    fn();
  } catch (const error& e) {
    return e.code() == want;
  }
  return false;
}

Word cw(std::initializer_list<int> idx) {
  Word w;
  for (int i : idx) w.push_back(static_cast<char>(i));
  return w;
}

RepPtr test_rep() {
  static RepPtr rep = [] {
    HermitianMetric m = make_hermitian_metric(circle_module());
    return make_numeric_rep(m, 8);
  }();
  return rep;
}

RepPtr corrupt_rep() {
  static RepPtr rep = [] {
    HermitianMetric m = make_hermitian_metric(circle_module());
    PresPtr P = m.base.pres;
    std::vector<AlgebraElement> fixed = {el_word(P, cw({0})), el_word(P, cw({1}))};
    return make_numeric_rep(m, 8, 1.0, false, fixed);
  }();
  return rep;
}

GridPtr test_grid() {
  static GridPtr g = make_grid(12.0, 257);
  return g;
}

// Smooth decaying vector with nonzero even and odd parts, defined by
// closures so it can be sampled on any grid.
H01Vec smooth_h01(RepPtr rep, GridPtr grid) {
  H01Vec v = h01_zero(std::move(rep), std::move(grid));
  const std::size_t np = v.rep->n_points;
  for (std::size_t gx = 0; gx < v.grid->x.size(); ++gx) {
    double x = v.grid->x[gx];
    double even = std::exp(-x * x / 4.0);
    double odd = std::exp(-(x - 1.0) * (x - 1.0) / 6.0);
    for (std::size_t p = 0; p < np; ++p) {
      double ph = static_cast<double>(p + 1) / static_cast<double>(np);
      v.v0[gx][p] = even * std::complex<double>(ph, 0.5 - ph);
      v.v1[gx][0][p] = odd * ph;
      v.v1[gx][1][p] = odd * std::complex<double>(0.0, 1.0 - ph);
    }
  }
  return v;
}

BLFunction even_only(const BLFunction& f) {
  BLFunction g = f;
  for (auto& row : g.f1)
    for (auto& d : row) d.assign(d.size(), 0.0);
  g.support = 0.0;
  return g;
}

BLFunction odd_only(const BLFunction& f) {
  BLFunction g = f;
  g.variant = BLVariant::c0;
  for (auto& d : g.f0) d.assign(d.size(), 0.0);
  return g;
}

}  // namespace

TEST_CASE("circle representation") {
  RepPtr rep = test_rep();
  const std::size_t np = rep->n_points;

  SECTION("generators are represented by roots of unity") {
    REQUIRE(rep->rule_residual < 1e-12);
    REQUIRE(rep->star_residual < 1e-12);
    for (std::size_t p = 0; p < np; ++p) {
      REQUIRE(std::abs(std::abs(rep->images[0][p]) - 1.0) < 1e-14);
      REQUIRE(std::abs(rep->images[0][p] * rep->images[1][p] - 1.0) < 1e-14);
    }
  }

  SECTION("coordinate images are real and normalized") {
    for (std::size_t p = 0; p < np; ++p) {
      std::complex<double> x = rep->v_images[0][p];
      std::complex<double> y = rep->v_images[1][p];
      REQUIRE(std::abs(x.imag()) < 1e-14);
      REQUIRE(std::abs(y.imag()) < 1e-14);
      REQUIRE(std::abs(x * x + y * y - 1.0) < 1e-13);
      std::complex<double> pair = 0.0;
      for (std::size_t j = 0; j < 2; ++j) pair += rep->v_images[j][p] * rep->w_images[j][p];
      REQUIRE(std::abs(pair - 1.0) < 1e-13);
    }
  }

  SECTION("the Gram matrix is the coordinate projection") {
    for (std::size_t i = 0; i < 2; ++i)
      for (std::size_t j = 0; j < 2; ++j)
        for (std::size_t p = 0; p < np; ++p)
          REQUIRE(std::abs(rep->gram[i][j][p] -
                           rep->v_images[i][p] * rep->v_images[j][p]) < 1e-13);
  }

  SECTION("the numeric square root matches the exact one and squares back") {
    HermitianMetric m = make_hermitian_metric(circle_module());
    GramData G = gram_matrices(m);
    REQUIRE(G.r.has_value());
    for (std::size_t i = 0; i < 2; ++i)
      for (std::size_t j = 0; j < 2; ++j) {
        Diag exact = eval_element(*rep, (*G.r)[i][j]);
        for (std::size_t p = 0; p < np; ++p) {
          REQUIRE(std::abs(exact[p] - rep->r_matrix[i][j][p]) < 1e-12);
          REQUIRE(std::abs(rep->r_matrix[i][j][p] -
                           std::conj(rep->r_matrix[j][i][p])) < 1e-13);
          std::complex<double> sq = 0.0;
          for (std::size_t k = 0; k < 2; ++k)
            sq += rep->r_matrix[i][k][p] * rep->r_matrix[k][j][p];
          REQUIRE(std::abs(sq - rep->gram[i][j][p]) < 1e-12);
        }
      }
  }

  SECTION("a broken star table is detected") {
    HermitianMetric m = make_hermitian_metric(circle_module());
    PresPtr P = m.base.pres;
    std::vector<AlgebraElement> fixed = {el_word(P, cw({0})), el_word(P, cw({1}))};
    REQUIRE(throws_errc([&] { make_numeric_rep(m, 8, 1.0, true, fixed); },
                        errc::verification_failed));
    RepPtr bad = corrupt_rep();
    REQUIRE(bad->star_residual > 0.5);
    bool negative = false;
    for (std::size_t p = 0; p < bad->n_points; ++p)
      if (bad->gram[1][1][p].real() < -0.1) negative = true;
    REQUIRE(negative);
  }

  SECTION("only the circle admits this representation") {
    HermitianMetric slq = make_hermitian_metric(slq2_metric_module());
    REQUIRE(throws_errc([&] { make_numeric_rep(slq, 8); }, errc::bad_input));
    HermitianMetric m = make_hermitian_metric(circle_module());
    REQUIRE(throws_errc([&] { make_numeric_rep(m, 0); }, errc::bad_input));
    std::vector<AlgebraElement> tooshort = {el_one(m.base.pres)};
    REQUIRE(throws_errc([&] { make_numeric_rep(m, 8, 1.0, true, tooshort); },
                        errc::bad_input));
  }
}

TEST_CASE("line grid") {
  GridPtr g = make_grid(10.0, 101);
  REQUIRE(std::abs(g->x.front() + 10.0) < 1e-12);
  REQUIRE(std::abs(g->x.back() - 10.0) < 1e-12);
  double total = 0.0;
  for (double w : g->weight) total += w;
  REQUIRE(std::abs(total - 20.0) < 1e-12);
  REQUIRE(throws_errc([] { make_grid(0.0, 16); }, errc::bad_input));
  REQUIRE(throws_errc([] { make_grid(5.0, 1); }, errc::bad_input));
}

TEST_CASE("function algebra product") {
  RepPtr rep = test_rep();
  GridPtr grid = test_grid();
  Rng rng(101);

  SECTION("even times even multiplies pointwise") {
    BLFunction f = even_only(random_bl(rep, grid, BLVariant::thom, rng));
    BLFunction g = even_only(random_bl(rep, grid, BLVariant::thom, rng));
    BLFunction h = bl_multiply(f, g);
    for (std::size_t gx = 0; gx < grid->x.size(); ++gx) {
      for (std::size_t p = 0; p < rep->n_points; ++p)
        REQUIRE(std::abs(h.f0[gx][p] - f.f0[gx][p] * g.f0[gx][p]) < 1e-13);
      for (const Diag& d : h.f1[gx])
        for (const auto& c : d) REQUIRE(std::abs(c) < 1e-15);
    }
  }

  SECTION("odd times odd lands in the even part with the x^2 weight") {
    BLFunction f = odd_only(random_bl(rep, grid, BLVariant::thom, rng));
    BLFunction g = odd_only(random_bl(rep, grid, BLVariant::thom, rng));
    BLFunction h = bl_multiply(f, g);
    for (std::size_t gx = 0; gx < grid->x.size(); ++gx) {
      double x2 = grid->x[gx] * grid->x[gx];
      Diag F = bl_payload(f, gx);
      Diag G = bl_payload(g, gx);
      for (std::size_t p = 0; p < rep->n_points; ++p) {
        std::complex<double> want = x2 * F[p] * G[p] * rep->z_image[p];
        REQUIRE(std::abs(h.f0[gx][p] - want) < 1e-12);
      }
      for (const Diag& d : h.f1[gx])
        for (const auto& c : d) REQUIRE(std::abs(c) < 1e-15);
    }
  }

  SECTION("the product is associative and commutative") {
    const BLVariant kinds[3] = {BLVariant::c0, BLVariant::thom, BLVariant::circle_bundle};
    for (int t = 0; t < 100; ++t) {
      BLFunction f = random_bl(rep, grid, kinds[t % 3], rng);
      BLFunction g = random_bl(rep, grid, kinds[(t + 1) % 3], rng);
      BLFunction h = random_bl(rep, grid, kinds[(t + 2) % 3], rng);
      REQUIRE(bl_distance(bl_multiply(bl_multiply(f, g), h),
                          bl_multiply(f, bl_multiply(g, h))) < 1e-10);
      REQUIRE(bl_distance(bl_multiply(f, g), bl_multiply(g, f)) < 1e-11);
    }
  }

  SECTION("star is an involutive antihomomorphism") {
    for (int t = 0; t < 50; ++t) {
      BLFunction f = random_bl(rep, grid, BLVariant::circle_bundle, rng);
      BLFunction g = random_bl(rep, grid, BLVariant::c0, rng);
      REQUIRE(bl_distance(bl_star(bl_multiply(f, g)),
                          bl_multiply(bl_star(g), bl_star(f))) < 1e-12);
      REQUIRE(bl_distance(bl_star(bl_star(f)), f) < 1e-15);
    }
  }

  SECTION("variants combine upward") {
    BLFunction a = bl_zero(rep, grid, BLVariant::c0);
    BLFunction b = bl_zero(rep, grid, BLVariant::thom);
    BLFunction c = bl_zero(rep, grid, BLVariant::circle_bundle);
    REQUIRE(bl_multiply(a, a).variant == BLVariant::c0);
    REQUIRE(bl_multiply(a, b).variant == BLVariant::thom);
    REQUIRE(bl_multiply(b, c).variant == BLVariant::circle_bundle);
  }

  SECTION("random functions have the declared shape") {
    REQUIRE(bl_shape_ok(random_bl(rep, grid, BLVariant::c0, rng)));
    REQUIRE(bl_shape_ok(random_bl(rep, grid, BLVariant::thom, rng)));
    REQUIRE(bl_shape_ok(random_bl(rep, grid, BLVariant::circle_bundle, rng)));
    REQUIRE(bl_shape_ok(bl_identity(rep, grid)));
    REQUIRE(throws_errc([&] { bl_identity(rep, grid, BLVariant::c0); }, errc::bad_input));
  }

  SECTION("operands must share the grid and the representation") {
    GridPtr other = make_grid(12.0, 257);
    BLFunction f = random_bl(rep, grid, BLVariant::thom, rng);
    BLFunction g = random_bl(rep, other, BLVariant::thom, rng);
    REQUIRE(throws_errc([&] { bl_multiply(f, g); }, errc::grid_mismatch));
    BLFunction h = random_bl(corrupt_rep(), grid, BLVariant::thom, rng);
    REQUIRE(throws_errc([&] { bl_multiply(f, h); }, errc::grid_mismatch));
  }
}

TEST_CASE("state space inner product") {
  RepPtr rep = test_rep();
  GridPtr grid = test_grid();
  Rng rng(211);

  SECTION("positive and Hermitian") {
    for (int t = 0; t < 20; ++t) {
      H01Vec u = random_h01(rep, grid, rng);
      H01Vec v = random_h01(rep, grid, rng);
      std::complex<double> uu = h01_inner(u, u);
      REQUIRE(uu.real() >= 0.0);
      REQUIRE(std::abs(uu.imag()) < 1e-10 * (1.0 + uu.real()));
      std::complex<double> uv = h01_inner(u, v);
      std::complex<double> vu = h01_inner(v, u);
      REQUIRE(std::abs(uv - std::conj(vu)) < 1e-10 * (1.0 + std::abs(uv)));
      std::complex<double> s(0.3, -0.7);
      REQUIRE(std::abs(h01_inner(u, h01_scale(s, v)) - s * uv) <
              1e-10 * (1.0 + std::abs(uv)));
      REQUIRE(std::abs(h01_inner(h01_scale(s, u), v) - std::conj(s) * uv) <
              1e-10 * (1.0 + std::abs(uv)));
    }
  }

  SECTION("the odd inner product factors through the square root") {
    for (int t = 0; t < 20; ++t) {
      H01Vec v = random_h01(rep, grid, rng);
      REQUIRE(positivity_identity_residual(v) < 1e-10);
    }
  }

  SECTION("quadrature has settled at this resolution") {
    RepPtr r8 = test_rep();
    GridPtr coarse = make_grid(20.0, 513);
    GridPtr fine = make_grid(20.0, 1025);
    H01Vec a = smooth_h01(r8, coarse);
    H01Vec b = smooth_h01(r8, fine);
    double na = h01_inner(a, a).real();
    double nb = h01_inner(b, b).real();
    REQUIRE(na > 1e-3);
    REQUIRE(std::abs(na - nb) < 1e-6);
  }
}

TEST_CASE("module action on the state space") {
  RepPtr rep = test_rep();
  GridPtr grid = test_grid();
  Rng rng(307);

  SECTION("the identity acts as the identity") {
    BLFunction id = bl_identity(rep, grid);
    for (int t = 0; t < 10; ++t) {
      H01Vec v = random_h01(rep, grid, rng);
      double diff = h01_norm(h01_sub(bl_act(id, v), v));
      REQUIRE(diff < 1e-12 * (1.0 + h01_norm(v)));
    }
  }

  SECTION("acting is a homomorphism for the product") {
    const BLVariant kinds[3] = {BLVariant::c0, BLVariant::thom, BLVariant::circle_bundle};
    for (int t = 0; t < 50; ++t) {
      BLFunction f = random_bl(rep, grid, kinds[t % 3], rng);
      BLFunction g = random_bl(rep, grid, kinds[(t + 1) % 3], rng);
      H01Vec v = random_h01(rep, grid, rng);
      H01Vec lhs = bl_act(bl_multiply(f, g), v);
      H01Vec rhs = bl_act(f, bl_act(g, v));
      REQUIRE(h01_norm(h01_sub(lhs, rhs)) < 1e-9);
    }
  }

  SECTION("acting is linear") {
    for (int t = 0; t < 20; ++t) {
      BLFunction f = random_bl(rep, grid, BLVariant::thom, rng);
      H01Vec u = random_h01(rep, grid, rng);
      H01Vec v = random_h01(rep, grid, rng);
      std::complex<double> s(0.6, 0.8);
      H01Vec mix = h01_sub(u, h01_scale(-s, v));
      H01Vec lhs = bl_act(f, mix);
      H01Vec rhs = h01_sub(bl_act(f, u), h01_scale(-s, bl_act(f, v)));
      REQUIRE(h01_norm(h01_sub(lhs, rhs)) < 1e-10);
    }
  }

  SECTION("the vector must live on the function's grid") {
    BLFunction f = random_bl(rep, grid, BLVariant::thom, rng);
    H01Vec v = random_h01(rep, make_grid(12.0, 257), rng);
    REQUIRE(throws_errc([&] { bl_act(f, v); }, errc::grid_mismatch));
  }
}

TEST_CASE("star representation") {
  RepPtr rep = test_rep();
  GridPtr grid = test_grid();
  Rng rng(401);

  SECTION("the action is adjointable with the declared star") {
    const BLVariant kinds[3] = {BLVariant::c0, BLVariant::thom, BLVariant::circle_bundle};
    for (int t = 0; t < 10; ++t) {
      BLFunction f = random_bl(rep, grid, kinds[t % 3], rng);
      AdjointReport rep_out = adjoint_check(f, 10, rng);
      REQUIRE(rep_out.ok);
      REQUIRE(rep_out.max_residual < 1e-8);
    }
  }

  SECTION("a corrupted star breaks adjointness") {
    RepPtr bad = corrupt_rep();
    Rng rng2(401);
    BLFunction f = random_bl(bad, grid, BLVariant::thom, rng2);
    AdjointReport rep_out = adjoint_check(f, 10, rng2);
    REQUIRE_FALSE(rep_out.ok);
    REQUIRE(rep_out.max_residual > 1e-4);
  }
}

TEST_CASE("operator norm bound") {
  RepPtr rep = test_rep();
  GridPtr grid = test_grid();

  SECTION("the identity pins the constant") {
    BLFunction id = bl_identity(rep, grid);
    Rng rng(503);
    NormBoundReport r = norm_bound_check(id, 20, rng);
    REQUIRE(std::abs(r.estimate - 1.0) < 1e-6);
    REQUIRE(std::abs(r.constant - std::sqrt(2.0)) < 1e-12);
    REQUIRE(std::abs(r.bound - std::sqrt(2.0)) < 1e-12);
    REQUIRE(r.ok);
  }

  SECTION("random functions respect the bound") {
    Rng rng(509);
    const BLVariant kinds[3] = {BLVariant::c0, BLVariant::thom, BLVariant::circle_bundle};
    for (int t = 0; t < 100; ++t) {
      BLFunction f = random_bl(rep, grid, kinds[t % 3], rng);
      NormBoundReport r = norm_bound_check(f, 15, rng);
      REQUIRE(r.ok);
      REQUIRE(r.estimate <= r.bound * (1.0 + 1e-9) + 1e-12);
    }
  }

  SECTION("the data scales with the function") {
    Rng rng(521);
    BLFunction f = random_bl(rep, grid, BLVariant::thom, rng);
    BLFunction f2 = bl_scale(2.0, f);
    NormBound a = norm_bound_data(f);
    NormBound b = norm_bound_data(f2);
    REQUIRE(std::abs(b.bound - 2.0 * a.bound) < 1e-10 * (1.0 + a.bound));
    Rng ra(1), rb(1);
    double ea = norm_estimate(f, 15, ra);
    double eb = norm_estimate(f2, 15, rb);
    REQUIRE(std::abs(eb - 2.0 * ea) < 1e-6 * (1.0 + ea));
  }
}
