#pragma once

#include <algorithm>
#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "nclb/algebra.hpp"
#include "nclb/hermet.hpp"
#include "nclb/linemod.hpp"
#include "nclb/presets.hpp"
#include "nclb/rng.hpp"

namespace nclb {

// Handle for the graded tensor algebra of a line module, collapsed to its
// image inside the base algebra: grade n lives in the degree n.g part.
struct TzAlgebra {
  LineModuleData module;
  std::optional<HermitianMetric> metric;
};

using TzPtr = std::shared_ptr<const TzAlgebra>;

inline bool same_line_module(const LineModuleData& a, const LineModuleData& b) {
  return same_presentation(a.pres, b.pres) && a.g == b.g && a.v == b.v && a.w == b.w;
}

inline TzPtr make_tz_algebra(LineModuleData module) {
  return std::make_shared<const TzAlgebra>(TzAlgebra{std::move(module), std::nullopt});
}

inline TzPtr make_tz_algebra(HermitianMetric m) {
  LineModuleData module = m.base;
  return std::make_shared<const TzAlgebra>(TzAlgebra{std::move(module), std::move(m)});
}

struct GradedTensorElement {
  TzPtr alg;
  int n = 0;
  AlgebraElement payload;

  friend bool operator==(const GradedTensorElement& a, const GradedTensorElement& b) {
    return a.n == b.n && a.payload == b.payload &&
           same_line_module(a.alg->module, b.alg->module);
  }
};

inline GradedTensorElement tz_element(TzPtr alg, int n, AlgebraElement payload) {
  const LineModuleData& L = alg->module;
  if (!same_presentation(payload.pres, L.pres))
    fail(errc::mixed_module, "payload from a different presentation");
  if (!is_homogeneous_of(payload, L.pres->grading.scale(L.g, n)))
    fail(errc::bad_degrees, "payload degree must be the grade multiple of the module degree");
  return {std::move(alg), n, std::move(payload)};
}

inline GradedTensorElement tz_product(const GradedTensorElement& x, const GradedTensorElement& y) {
  if (!same_line_module(x.alg->module, y.alg->module))
    fail(errc::mixed_module, "factors from different line modules");
  return {x.alg, x.n + y.n, x.payload * y.payload};
}

// Star on the Z-graded algebra: grade n goes to -n, payloads pick up the
// metric factor z^n so that the dual-basis identity e^{i*} = e_j g^{ji}
// holds and the result is an anti-homomorphism.
inline GradedTensorElement tz_star(const GradedTensorElement& x) {
  if (!x.alg->metric) fail(errc::no_metric, "star on the Z-graded algebra needs a metric");
  const HermitianMetric& m = *x.alg->metric;
  AlgebraElement zpow = el_one(m.base.pres);
  for (int k = 0; k < (x.n >= 0 ? x.n : -x.n); ++k)
    zpow = zpow * (x.n >= 0 ? m.z : m.z_inv);
  return {x.alg, -x.n, star(x.payload) * zpow};
}

// Whether the module admits a star operation L -> conj(L) realized by the
// algebra star on payloads: the star must keep the module degree.
inline bool has_star_on_module(const LineModuleData& L) {
  return L.pres->grading.neg(L.g) == L.g;
}

// Star on the N-graded algebra: order reversal of tensor factors, which on
// collapsed payloads is the algebra star, grade unchanged.
inline GradedTensorElement tn_star(const GradedTensorElement& x) {
  if (x.n < 0) fail(errc::bad_input, "the N-graded star is defined on grades >= 0");
  if (!has_star_on_module(x.alg->module))
    fail(errc::no_star_on_l, "module star does not preserve the degree");
  return {x.alg, x.n, star(x.payload)};
}

// ---- Hopf-Galois surjectivity witnesses ----

struct HopfGaloisLevel {
  int k = 0;
  bool pos_ok = false;  // witness pairs in B_k x B_{-k}
  bool neg_ok = false;  // witness pairs in B_{-k} x B_k
  std::vector<WitnessPair> pos_pairs;
  std::vector<WitnessPair> neg_pairs;
};

struct HopfGaloisReport {
  int max_n = 0;
  bool ok = false;
  std::vector<HopfGaloisLevel> levels;
};

inline HopfGaloisReport hopf_galois_check(const LineModuleData& L, int max_n) {
  HopfGaloisReport rep;
  rep.max_n = max_n;
  rep.ok = true;
  const PresPtr& P = L.pres;
  const std::size_t n = L.v.size();

  auto extend = [&](const std::vector<WitnessPair>& acc,
                    const std::vector<WitnessPair>& step) {
    std::vector<WitnessPair> out;
    for (const auto& [x, y] : acc)
      for (const auto& [sx, sy] : step) out.push_back({x * sx, sy * y});
    return out;
  };
  auto sums_to_one = [&](const std::vector<WitnessPair>& pairs) {
    AlgebraElement s = el_zero(P);
    for (const auto& [x, y] : pairs) s = s + x * y;
    return s == el_one(P);
  };

  std::vector<WitnessPair> pos{{el_one(P), el_one(P)}};
  std::vector<WitnessPair> neg{{el_one(P), el_one(P)}};
  for (int k = 1; k <= max_n; ++k) {
    HopfGaloisLevel lvl;
    lvl.k = k;
    if (L.ccc) {
      pos = extend(pos, *L.ccc);
      lvl.pos_pairs = pos;
      lvl.pos_ok = sums_to_one(pos);
    }
    neg = extend(neg, L.cc);
    lvl.neg_pairs = neg;
    lvl.neg_ok = sums_to_one(neg);
    rep.ok = rep.ok && lvl.pos_ok && lvl.neg_ok;
    rep.levels.push_back(std::move(lvl));
    (void)n;
  }
  return rep;
}

// ---- xi and alpha ----

struct XiAlpha {
  GradedTensorElement xi;
  AlgebraElement alpha;
  std::optional<AlgebraElement> beta;  // central Hermitian fourth root of alpha
};

namespace detail {

inline std::optional<Scalar> scalar_of(const AlgebraElement& e) {
  if (e.terms.empty()) return scalar_zero();
  if (e.terms.size() == 1 && e.terms.begin()->first.empty()) return e.terms.begin()->second;
  return std::nullopt;
}

inline std::optional<Rat> rational_of(const Scalar& s) {
  if (poly_deg(s.num) > 0 || poly_deg(s.den) > 0) return std::nullopt;
  GaussRat v = s.num.empty() ? GaussRat(0) : s.num[0] / s.den[0];
  if (!(v.im == 0)) return std::nullopt;
  return v.re;
}

inline std::optional<AlgebraElement> scalar_fourth_root(const AlgebraElement& e) {
  auto s = scalar_of(e);
  if (!s) return std::nullopt;
  auto r = rational_of(*s);
  if (!r) return std::nullopt;
  auto sq = exact_sqrt(*r);
  if (!sq) return std::nullopt;
  auto fourth = exact_sqrt(*sq);
  if (!fourth) return std::nullopt;
  return el_scalar(e.pres, scalar_gauss(GaussRat{*fourth, Rat(0)}));
}

}  // namespace detail

inline XiAlpha xi_alpha(const TzPtr& alg) {
  if (!alg->metric) fail(errc::no_metric, "xi and alpha need a metric");
  const HermitianMetric& m = *alg->metric;
  const LineModuleData& L = m.base;
  const PresPtr& P = L.pres;
  if (!has_star_on_module(L))
    fail(errc::no_star_on_l, "module admits no degree-preserving star");

  GramData G = gram_matrices(m);
  const std::size_t n = L.v.size();
  AlgebraElement xi_payload = el_zero(P);
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t i = 0; i < n; ++i)
      xi_payload = xi_payload + star(L.v[j]) * G.g_lower[j][i] * L.v[i];
  AlgebraElement alpha = xi_payload * m.z;

  if (!is_central(alpha)) fail(errc::verification_failed, "alpha is not central");
  if (star(alpha) != alpha) fail(errc::verification_failed, "alpha is not Hermitian");
  if (!is_central(xi_payload)) fail(errc::verification_failed, "xi does not commute with the base");
  if (star(xi_payload) != xi_payload) fail(errc::verification_failed, "xi is not Hermitian");
  bounded_inverse(P, alpha, detail::module_word_bound(L, alpha));

  XiAlpha xa{tz_element(alg, 2, xi_payload), alpha, detail::scalar_fourth_root(alpha)};
  return xa;
}

inline HermitianMetric star_compat_rescale(const XiAlpha& xa, const HermitianMetric& m) {
  if (!xa.beta) fail(errc::no_fourth_root, "alpha has no scalar rational fourth root");
  AlgebraElement beta2 = *xa.beta * *xa.beta;
  return rescale_metric(m, bounded_inverse(m.base.pres, beta2, 2));
}

struct XiCheck {
  std::string id;
  bool ok = false;
};

struct XiReport {
  bool ok = false;
  std::vector<XiCheck> checks;
};

inline XiReport xi_properties_suite(const XiAlpha& xa, const TzPtr& alg, Rng& rng,
                                    int samples = 100) {
  if (!alg->metric) fail(errc::no_metric, "xi properties need a metric");
  const HermitianMetric& m = *alg->metric;
  const LineModuleData& L = m.base;
  const PresPtr& P = L.pres;
  XiReport rep;
  rep.ok = true;
  auto add = [&](std::string id, bool ok) {
    rep.ok = rep.ok && ok;
    rep.checks.push_back({std::move(id), ok});
  };

  AlgebraElement phi_alpha = phi_centre(L, xa.alpha);

  bool exchange = true;
  for (int t = 0; t < samples && exchange; ++t) {
    GradedTensorElement e = tz_element(alg, 1, random_homogeneous(P, L.g, rng));
    GradedTensorElement rhs =
        tz_product(e, tz_element(alg, 2, xa.xi.payload * phi_alpha));
    exchange = tz_product(xa.xi, e) == rhs;
  }
  add("xi_exchange", exchange);

  add("alpha_phi_alpha", xa.alpha * phi_alpha == el_one(P));

  bool recombine = true;
  for (int t = 0; t < samples && recombine; ++t) {
    GradedTensorElement e = tz_element(alg, 1, random_homogeneous(P, L.g, rng));
    GradedTensorElement f = tz_element(alg, 1, random_homogeneous(P, L.g, rng));
    AlgebraElement coeff = e.payload * (f.payload * m.z);
    recombine = tz_product(e, f) == tz_element(alg, 2, coeff * xa.xi.payload);
  }
  add("recombination", recombine);
  return rep;
}

// ---- even-odd algebra ----

struct EvenOddAlgebra {
  HermitianMetric m;
  AlgebraElement alpha;
};

struct EvenOddElement {
  AlgebraElement even;  // degree-0 component
  AlgebraElement odd;   // degree-g component
};

inline EvenOddAlgebra even_odd_algebra(const HermitianMetric& m) {
  XiAlpha xa = xi_alpha(make_tz_algebra(m));
  if (xa.alpha != el_one(m.base.pres))
    fail(errc::not_star_compatible, "metric has alpha different from 1");
  return {m, xa.alpha};
}

inline EvenOddElement eo_element(const EvenOddAlgebra& A, AlgebraElement even,
                                 AlgebraElement odd) {
  const LineModuleData& L = A.m.base;
  if (!same_presentation(even.pres, L.pres) || !same_presentation(odd.pres, L.pres))
    fail(errc::mixed_module, "component from a different presentation");
  if (!is_homogeneous_of(even, L.pres->grading.zero()))
    fail(errc::bad_degrees, "even component must have degree 0");
  if (!is_homogeneous_of(odd, L.g)) fail(errc::bad_degrees, "odd component degree mismatch");
  return {std::move(even), std::move(odd)};
}

inline bool operator==(const EvenOddElement& a, const EvenOddElement& b) {
  return a.even == b.even && a.odd == b.odd;
}

inline EvenOddElement eo_mul(const EvenOddAlgebra& A, const EvenOddElement& x,
                             const EvenOddElement& y) {
  AlgebraElement odd_odd = x.odd * y.odd * A.m.z;
  return {x.even * y.even + odd_odd, x.even * y.odd + x.odd * y.even};
}

inline EvenOddElement eo_star(const EvenOddAlgebra& A, const EvenOddElement& x) {
  (void)A;
  return {star(x.even), star(x.odd)};
}

// Witness pairs of odd elements whose products sum to 1.
inline std::vector<WitnessPair> even_odd_witness(const EvenOddAlgebra& A) {
  const LineModuleData& L = A.m.base;
  std::vector<WitnessPair> out;
  AlgebraElement sum = el_zero(L.pres);
  for (const auto& vi : L.v) {
    WitnessPair p{vi, vi * A.m.z_inv};
    sum = sum + p.first * p.second * A.m.z;
    out.push_back(std::move(p));
  }
  if (sum != el_one(L.pres))
    fail(errc::verification_failed, "odd products do not recover the unit");
  return out;
}

// ---- formal case table for the product recursion ----

// A formal tensor: explicit slots, each an L payload (upper) or an L-dual
// payload (lower).  Contractions follow the ev/coev-inverse recursions and
// the resulting coefficient is multiplied onto a neighbouring slot.
struct FormalTensor {
  struct Slot {
    int kind = 0;  // +1 upper, -1 lower
    AlgebraElement payload;
  };
  std::vector<Slot> slots;
  AlgebraElement carry;  // coefficient left when every slot is contracted
};

inline FormalTensor formal_tensor(const LineModuleData& L, std::vector<FormalTensor::Slot> slots) {
  for (const auto& s : slots) {
    if (s.kind != 1 && s.kind != -1) fail(errc::bad_input, "slot kind must be +1 or -1");
    const GradingGroup::Elem want =
        s.kind == 1 ? L.g : L.pres->grading.neg(L.g);
    if (!is_homogeneous_of(s.payload, want)) fail(errc::bad_degrees, "slot degree mismatch");
  }
  return {std::move(slots), el_one(L.pres)};
}

namespace detail {

// Literal recursion ev^{k} = ev (id (x) ev^{k-1} (x) id) on a block of
// payloads; the mirrored recursion computes coev^{-1} blocks the same way.
inline AlgebraElement contract_block(const std::vector<FormalTensor::Slot>& slots,
                                     std::size_t pos, std::size_t k) {
  if (k == 1) return slots[pos].payload * slots[pos + 1].payload;
  return slots[pos].payload * contract_block(slots, pos + 1, k - 1) *
         slots[pos + 2 * k - 1].payload;
}

}  // namespace detail

// Applies ev^k (want_upper_first) or the coev-inverse power (lower first) at
// a slot position; absorb_left selects the neighbour receiving the result.
inline FormalTensor formal_contract(FormalTensor T, std::size_t pos, std::size_t k,
                                    bool upper_first, bool absorb_left) {
  if (k == 0) return T;
  if (pos + 2 * k > T.slots.size()) fail(errc::bad_input, "contraction block out of range");
  const int first = upper_first ? 1 : -1;
  for (std::size_t i = 0; i < k; ++i) {
    if (T.slots[pos + i].kind != first || T.slots[pos + k + i].kind != -first)
      fail(errc::bad_input, "contraction block has the wrong shape");
  }
  AlgebraElement c = detail::contract_block(T.slots, pos, k);
  T.slots.erase(T.slots.begin() + static_cast<std::ptrdiff_t>(pos),
                T.slots.begin() + static_cast<std::ptrdiff_t>(pos + 2 * k));
  if (absorb_left && pos > 0)
    T.slots[pos - 1].payload = T.slots[pos - 1].payload * c;
  else if (pos < T.slots.size())
    T.slots[pos].payload = c * T.slots[pos].payload;
  else if (!absorb_left && pos > 0)
    T.slots[pos - 1].payload = T.slots[pos - 1].payload * c;
  else
    T.carry = T.carry * c;
  return T;
}

inline GradedTensorElement formal_collapse(const TzPtr& alg, const FormalTensor& T) {
  int n = 0;
  AlgebraElement p = T.carry;
  for (const auto& s : T.slots) {
    n += s.kind;
    p = p * s.payload;
  }
  return tz_element(alg, n, p);
}

struct CaseReport {
  int which = 0;
  int n = 0, s = 0, r = 0;
  int samples = 0;
  int mismatches = 0;
  bool ok = false;
};

// Checks one case of the associativity table for the mixed-sign product on
// the graded tensor algebra: both composites are evaluated formally and
// compared after collapse.
inline CaseReport formal_case_check(const TzPtr& alg, int which, int n, int s, int r,
                                    Rng& rng, int samples = 50, int maxlen = 3) {
  const LineModuleData& L = alg->module;
  const PresPtr& P = L.pres;
  const std::size_t un = static_cast<std::size_t>(n);
  const std::size_t us = static_cast<std::size_t>(s);
  const std::size_t ur = static_cast<std::size_t>(r);
  if (n < 0 || s < 0 || r < 0) fail(errc::bad_input, "sizes must be nonnegative");
  const bool fits = [&] {
    switch (which) {
      case 1: return s >= n + r;
      case 2: return n >= s && r >= s;
      case 3: return n >= s && s >= r;
      case 4: return r >= s && s >= n;
      case 5: return n + r >= s && s >= n && s >= r;
      default: fail(errc::bad_input, "case must be 1..5");
    }
  }();
  if (!fits) fail(errc::bad_input, "sizes do not satisfy the case inequalities");

  CaseReport rep{which, n, s, r, samples, 0, false};
  // Both composites are multilinear in the slot payloads, so single-word
  // payloads span the general case without the term-count blowup of long
  // sums under a nine-fold product.
  auto draw = [&](const GradingGroup::Elem& want) {
    const std::size_t ngen = P->generators.size();
    for (int t = 0; t < 200; ++t) {
      int len = static_cast<int>(rng.range(0, maxlen));
      Word w;
      for (int k = 0; k < len && ngen > 0; ++k)
        w.push_back(static_cast<char>(rng.below(ngen)));
      if (P->grading.reduce(P->word_degree(w)) != want) continue;
      return el_word(P, w, scalar_int(rng.range(-2, 2)) + scalar_q_power(rng.range(-1, 1)));
    }
    return el_zero(P);
  };
  for (int t = 0; t < samples; ++t) {
    std::vector<FormalTensor::Slot> slots;
    for (std::size_t i = 0; i < un; ++i) slots.push_back({1, draw(L.g)});
    for (std::size_t i = 0; i < us; ++i)
      slots.push_back({-1, draw(P->grading.neg(L.g))});
    for (std::size_t i = 0; i < ur; ++i) slots.push_back({1, draw(L.g)});
    FormalTensor base = formal_tensor(L, slots);

    FormalTensor lhs = base, rhs = base;
    switch (which) {
      case 1:
        lhs = formal_contract(lhs, un + us - ur, ur, false, true);
        lhs = formal_contract(lhs, 0, un, true, true);
        rhs = formal_contract(rhs, un + us - ur, ur, false, false);
        rhs = formal_contract(rhs, 0, un, true, false);
        break;
      case 2:
        lhs = formal_contract(lhs, un - us, us, true, true);
        rhs = formal_contract(rhs, un, us, false, false);
        break;
      case 3:
        lhs = formal_contract(lhs, un - us, us, true, true);
        rhs = formal_contract(rhs, un + us - ur, ur, false, false);
        rhs = formal_contract(rhs, un - us + ur, us - ur, true, false);
        break;
      case 4:
        lhs = formal_contract(lhs, 2 * un, us - un, false, true);
        lhs = formal_contract(lhs, 0, un, true, true);
        rhs = formal_contract(rhs, un, us, false, false);
        break;
      case 5:
        lhs = formal_contract(lhs, 2 * un, us - un, false, true);
        lhs = formal_contract(lhs, 0, un, true, true);
        rhs = formal_contract(rhs, un + us - ur, ur, false, false);
        rhs = formal_contract(rhs, un - us + ur, us - ur, true, false);
        break;
      default: break;
    }
    if (!(formal_collapse(alg, lhs) == formal_collapse(alg, rhs))) ++rep.mismatches;
  }
  rep.ok = rep.mismatches == 0;
  return rep;
}

}  // namespace nclb
