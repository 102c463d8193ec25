#pragma once

#include <initializer_list>

#include "nclb/algebra.hpp"
#include "nclb/linemod.hpp"

namespace nclb {

namespace detail {

inline Word gw(std::initializer_list<int> idx) {
  Word w;
  for (int k : idx) w.push_back(static_cast<char>(k));
  return w;
}

}  // namespace detail

// Quantum SL(2): generators a, b, c, d with the q-commutation relations and
// both determinant relations oriented so that a...d pairs are eliminated.
// Grading by the coaction weight: a, c sit in degree +1, b, d in degree -1.
inline PresPtr preset_slq2() {
  static const PresPtr cached = [] {
    using detail::gw;
    const Scalar q = scalar_q_power(1);
    const Scalar qi = scalar_q_power(-1);
    GradedPresentation P;
    P.name = "slq2";
    P.generators = {"a", "b", "c", "d"};
    P.grading = GradingGroup{{0}};
    P.degrees = {{1}, {-1}, {1}, {-1}};
    P.rules = {
        {gw({1, 0}), {{q, gw({0, 1})}}},
        {gw({2, 0}), {{q, gw({0, 2})}}},
        {gw({2, 1}), {{scalar_one(), gw({1, 2})}}},
        {gw({3, 1}), {{q, gw({1, 3})}}},
        {gw({3, 2}), {{q, gw({2, 3})}}},
        {gw({0, 3}), {{scalar_one(), gw({})}, {qi, gw({1, 2})}}},
        {gw({3, 0}), {{scalar_one(), gw({})}, {q, gw({1, 2})}}},
    };
    P.star_table = {{
        {{scalar_one(), gw({3})}},
        {{-qi, gw({2})}},
        {{-q, gw({1})}},
        {{scalar_one(), gw({0})}},
    }};
    P.antipode_table = {{
        {{scalar_one(), gw({3})}},
        {{-q, gw({1})}},
        {{-qi, gw({2})}},
        {{scalar_one(), gw({0})}},
    }};
    return make_presentation(std::move(P));
  }();
  return cached;
}

// Laurent polynomials on the circle: invertible generator u with formal
// inverse, graded over Z/2 so that both generators sit in the odd part.
inline PresPtr preset_circle() {
  static const PresPtr cached = [] {
    using detail::gw;
    GradedPresentation P;
    P.name = "circle";
    P.generators = {"u", "u_inv"};
    P.grading = GradingGroup{{2}};
    P.degrees = {{1}, {1}};
    P.rules = {
        {gw({0, 1}), {{scalar_one(), gw({})}}},
        {gw({1, 0}), {{scalar_one(), gw({})}}},
    };
    P.star_table = {{
        {{scalar_one(), gw({1})}},
        {{scalar_one(), gw({0})}},
    }};
    P.antipode_table = {{
        {{scalar_one(), gw({1})}},
        {{scalar_one(), gw({0})}},
    }};
    return make_presentation(std::move(P));
  }();
  return cached;
}

// The scalar field viewed as a graded algebra with no generators; the
// grading group is Z and everything sits in degree zero.
inline PresPtr preset_trivial() {
  static const PresPtr cached = [] {
    GradedPresentation P;
    P.name = "trivial";
    P.grading = GradingGroup{{0}};
    P.star_table.emplace();
    P.antipode_table.emplace();
    return make_presentation(std::move(P));
  }();
  return cached;
}

// Degree -1 module whose vectors pair through the star structure:
// (w^T)* = v entrywise, making it the natural carrier for a metric.
inline LineModuleData slq2_metric_module(PresPtr P = nullptr) {
  if (!P) P = preset_slq2();
  auto e = [&](const char* s) { return parse_element(P, s); };
  return make_line_module(
      P, {-1}, {e("d"), e("-b")}, {e("a"), e("q^-1 c")}, std::nullopt,
      std::vector<WitnessPair>{{e("d"), e("a")}, {e("-q b"), e("c")}});
}

// Degree +1 module matching the differential calculus conventions; its
// witness pairs are the ones the curvature computations contract against.
inline LineModuleData slq2_calculus_module(PresPtr P = nullptr) {
  if (!P) P = preset_slq2();
  auto e = [&](const char* s) { return parse_element(P, s); };
  return make_line_module(
      P, {1}, {e("a"), e("c")}, {e("d"), e("-q b")}, std::nullopt,
      std::vector<WitnessPair>{{e("a"), e("d")}, {e("-q^-1 c"), e("b")}});
}

// Odd part of the circle algebra under the Z/2 grading, spanned by the
// real and imaginary combinations of the generator.
inline LineModuleData circle_module(PresPtr P = nullptr) {
  if (!P) P = preset_circle();
  auto e = [&](const char* s) { return parse_element(P, s); };
  AlgebraElement x = e("(u + u_inv)/2");
  AlgebraElement y = e("(u - u_inv)/2") * el_scalar(P, -scalar_i());
  return make_line_module(P, {1}, {x, y}, {x, y});
}

// Rank-one free module over the trivial presentation.
inline LineModuleData trivial_module(PresPtr P = nullptr) {
  if (!P) P = preset_trivial();
  return make_line_module(P, {0}, {el_one(P)}, {el_one(P)});
}

}  // namespace nclb
