#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "nclb/algebra.hpp"
#include "nclb/rng.hpp"

namespace nclb {

// A rank-one module over the degree-0 part, represented by the payload
// b alone: the row form b.w^T (side L) or column form v.b (side Ldual)
// is recoverable from the module data.
struct ModuleElement {
  enum class Side { L, Ldual };
  Side side;
  AlgebraElement payload;

  friend bool operator==(const ModuleElement& a, const ModuleElement& b) {
    return a.side == b.side && a.payload == b.payload;
  }
};

using WitnessPair = std::pair<AlgebraElement, AlgebraElement>;

struct LineModuleData {
  PresPtr pres;
  GradingGroup::Elem g;
  std::vector<AlgebraElement> v;  // degree +g entries
  std::vector<AlgebraElement> w;  // degree -g entries
  std::vector<WitnessPair> cc;    // pairs of degree (-g, +g) summing to 1
  std::optional<std::vector<WitnessPair>> ccc;  // pairs of degree (+g, -g) summing to 1
};

struct DualBasis {
  std::vector<ModuleElement> e_upper;  // payloads v_i
  std::vector<ModuleElement> e_lower;  // payloads w_i
  std::vector<std::vector<AlgebraElement>> P;  // P_ij = NF(v_i w_j)
};

inline LineModuleData make_line_module(
    PresPtr pres, GradingGroup::Elem g, std::vector<AlgebraElement> v,
    std::vector<AlgebraElement> w, std::optional<std::vector<WitnessPair>> cc = std::nullopt,
    std::optional<std::vector<WitnessPair>> ccc = std::nullopt) {
  if (v.empty() || v.size() != w.size())
    fail(errc::bad_input, "vector data must be nonempty and of equal length");
  g = pres->grading.reduce(g);
  const GradingGroup::Elem neg_g = pres->grading.neg(g);
  auto check_entry = [&](const AlgebraElement& e, const GradingGroup::Elem& want,
                         const char* what) {
    if (!same_presentation(e.pres, pres))
      fail(errc::mixed_presentation, std::string(what) + " from a different presentation");
    if (!is_homogeneous_of(e, want))
      fail(errc::bad_degrees, std::string(what) + " is not homogeneous of the declared degree");
  };
  for (const auto& e : v) check_entry(e, g, "v entry");
  for (const auto& e : w) check_entry(e, neg_g, "w entry");

  AlgebraElement sum = el_zero(pres);
  for (std::size_t i = 0; i < v.size(); ++i) sum = sum + w[i] * v[i];
  if (sum != el_one(pres)) fail(errc::degenerate_vectors, "w^T v is not 1");

  LineModuleData L;
  L.pres = pres;
  L.g = g;
  L.v = std::move(v);
  L.w = std::move(w);

  if (cc) {
    L.cc = std::move(*cc);
  } else {
    for (std::size_t i = 0; i < L.v.size(); ++i) L.cc.push_back({L.w[i], L.v[i]});
  }
  auto witness_sum_is_one = [&](const std::vector<WitnessPair>& ps) {
    AlgebraElement s = el_zero(L.pres);
    for (const auto& [x, y] : ps) s = s + x * y;
    return s == el_one(L.pres);
  };
  if (L.cc.empty()) fail(errc::bad_input, "empty witness list");
  for (const auto& [c, cp] : L.cc) {
    check_entry(c, neg_g, "witness entry");
    check_entry(cp, L.g, "witness entry");
  }
  if (!witness_sum_is_one(L.cc)) fail(errc::degenerate_vectors, "witness pairs do not sum to 1");

  if (ccc) {
    L.ccc = std::move(*ccc);
  } else if (L.g == neg_g) {
    // Self-dual degree: the reversed pairs qualify when they recombine to 1.
    std::vector<WitnessPair> rev;
    for (const auto& [c, cp] : L.cc) rev.push_back({cp, c});
    if (witness_sum_is_one(rev)) L.ccc = std::move(rev);
  }
  if (L.ccc) {
    if (L.ccc->empty()) fail(errc::bad_input, "empty witness list");
    for (const auto& [c2, c3] : *L.ccc) {
      check_entry(c2, L.g, "witness entry");
      check_entry(c3, neg_g, "witness entry");
    }
    if (!witness_sum_is_one(*L.ccc))
      fail(errc::degenerate_vectors, "witness pairs do not sum to 1");
  }
  return L;
}

inline ModuleElement module_element(const LineModuleData& L, ModuleElement::Side side,
                                    AlgebraElement payload) {
  const GradingGroup::Elem want =
      side == ModuleElement::Side::L ? L.g : L.pres->grading.neg(L.g);
  if (!same_presentation(payload.pres, L.pres))
    fail(errc::wrong_module, "payload from a different presentation");
  if (!is_homogeneous_of(payload, want))
    fail(errc::wrong_module, "payload degree does not match the module");
  return {side, std::move(payload)};
}

namespace detail {

inline void require_member(const LineModuleData& L, const ModuleElement& e,
                           ModuleElement::Side side) {
  const GradingGroup::Elem want =
      side == ModuleElement::Side::L ? L.g : L.pres->grading.neg(L.g);
  if (e.side != side) fail(errc::wrong_module, "element belongs to the other side");
  if (!same_presentation(e.payload.pres, L.pres))
    fail(errc::wrong_module, "element from a different presentation");
  if (!is_homogeneous_of(e.payload, want))
    fail(errc::wrong_module, "element degree does not match the module");
}

}  // namespace detail

inline DualBasis dual_basis(const LineModuleData& L) {
  DualBasis D;
  const std::size_t n = L.v.size();
  for (std::size_t i = 0; i < n; ++i) {
    D.e_upper.push_back({ModuleElement::Side::L, L.v[i]});
    D.e_lower.push_back({ModuleElement::Side::Ldual, L.w[i]});
  }
  D.P.assign(n, std::vector<AlgebraElement>(n, el_zero(L.pres)));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) D.P[i][j] = L.v[i] * L.w[j];
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < n; ++k) {
      AlgebraElement acc = el_zero(L.pres);
      for (std::size_t j = 0; j < n; ++j) acc = acc + D.P[i][j] * D.P[j][k];
      if (acc != D.P[i][k]) fail(errc::verification_failed, "projection matrix is not idempotent");
    }
  }
  return D;
}

inline AlgebraElement ev(const LineModuleData& L, const ModuleElement& e,
                         const ModuleElement& phi) {
  detail::require_member(L, e, ModuleElement::Side::L);
  detail::require_member(L, phi, ModuleElement::Side::Ldual);
  return e.payload * phi.payload;
}

// coev(a) lists (Ldual, L) pairs with payloads (a c_i, c'_i); the defining
// property is that the payload products recombine to a.
inline std::vector<std::pair<ModuleElement, ModuleElement>> coev(const LineModuleData& L,
                                                                 const AlgebraElement& a) {
  if (!same_presentation(a.pres, L.pres)) fail(errc::wrong_module, "argument presentation");
  if (!is_homogeneous_of(a, L.pres->grading.zero()))
    fail(errc::wrong_module, "argument must have degree 0");
  std::vector<std::pair<ModuleElement, ModuleElement>> out;
  for (const auto& [c, cp] : L.cc)
    out.push_back({{ModuleElement::Side::Ldual, a * c}, {ModuleElement::Side::L, cp}});
  return out;
}

inline std::vector<std::pair<ModuleElement, ModuleElement>> ev_inv(const LineModuleData& L,
                                                                   const AlgebraElement& a) {
  if (!L.ccc) fail(errc::missing_witness, "no inverse witness pairs");
  if (!same_presentation(a.pres, L.pres)) fail(errc::wrong_module, "argument presentation");
  if (!is_homogeneous_of(a, L.pres->grading.zero()))
    fail(errc::wrong_module, "argument must have degree 0");
  std::vector<std::pair<ModuleElement, ModuleElement>> out;
  for (const auto& [c2, c3] : *L.ccc)
    out.push_back({{ModuleElement::Side::L, a * c2}, {ModuleElement::Side::Ldual, c3}});
  return out;
}

inline AlgebraElement coev_inv(
    const LineModuleData& L, const std::vector<std::pair<ModuleElement, ModuleElement>>& pairs) {
  if (!L.ccc) fail(errc::missing_witness, "no inverse witness pairs");
  AlgebraElement acc = el_zero(L.pres);
  for (const auto& [phi, e] : pairs) {
    detail::require_member(L, phi, ModuleElement::Side::Ldual);
    detail::require_member(L, e, ModuleElement::Side::L);
    acc = acc + phi.payload * e.payload;
  }
  return acc;
}

inline AlgebraElement phi_centre(const LineModuleData& L, const AlgebraElement& z) {
  if (!same_presentation(z.pres, L.pres)) fail(errc::wrong_module, "argument presentation");
  if (!is_central(z)) fail(errc::not_central, "argument is not central");
  AlgebraElement out = el_zero(L.pres);
  for (const auto& [c, cp] : L.cc) out = out + c * z * cp;
  for (const auto& vi : L.v) {
    if (z * vi != vi * out)
      fail(errc::verification_failed, "centre map does not intertwine the module action");
  }
  return out;
}

inline LineModuleData tensor_line_modules(const LineModuleData& L, const LineModuleData& M) {
  if (!same_presentation(L.pres, M.pres))
    fail(errc::mixed_presentation, "line modules over different presentations");
  std::vector<AlgebraElement> v, w;
  for (const auto& wl : L.w)
    for (const auto& wm : M.w) w.push_back(wl * wm);
  for (const auto& vl : L.v)
    for (const auto& vm : M.v) v.push_back(vm * vl);
  std::vector<WitnessPair> cc;
  for (const auto& [cl, cpl] : L.cc)
    for (const auto& [cm, cpm] : M.cc) cc.push_back({cl * cm, cpm * cpl});
  std::optional<std::vector<WitnessPair>> ccc;
  if (L.ccc && M.ccc) {
    ccc.emplace();
    for (const auto& [cl2, cl3] : *L.ccc)
      for (const auto& [cm2, cm3] : *M.ccc) ccc->push_back({cm2 * cl2, cl3 * cm3});
  }
  return make_line_module(L.pres, L.pres->grading.add(L.g, M.g), std::move(v), std::move(w),
                          std::move(cc), std::move(ccc));
}

struct AxiomCheck {
  std::string id;
  bool ok = true;
  std::string witness;
};

struct AxiomReport {
  std::vector<AxiomCheck> checks;
  bool all_ok() const {
    for (const auto& c : checks)
      if (!c.ok) return false;
    return true;
  }
};

// Random degree-homogeneous element with the requested degree, built from
// products of generators; may be zero only if none exists at that degree.
inline AlgebraElement random_homogeneous(const PresPtr& P, const GradingGroup::Elem& want,
                                         Rng& rng, int tries = 200, int maxlen = 5) {
  const std::size_t ngen = P->generators.size();
  AlgebraElement acc = el_zero(P);
  if (ngen == 0) {
    if (want == P->grading.zero())
      return el_scalar(P, scalar_int(rng.range(1, 4)) + scalar_q_power(rng.range(-1, 1)));
    return acc;
  }
  int picked = 0;
  for (int t = 0; t < tries && picked < 3; ++t) {
    int len = static_cast<int>(rng.range(0, maxlen));
    Word w;
    for (int k = 0; k < len; ++k) w.push_back(static_cast<char>(rng.below(ngen)));
    if (P->grading.reduce(P->word_degree(w)) != want) continue;
    AlgebraElement e = el_word(P, w, scalar_int(rng.range(-2, 2)) + scalar_q_power(rng.range(-1, 1)));
    acc = acc + e;
    ++picked;
  }
  return acc;
}

inline AxiomReport line_axioms_suite(const LineModuleData& L, int samples, Rng& rng) {
  AxiomReport rep;
  auto& checks = rep.checks;
  auto record = [&](const std::string& id, bool ok, const std::string& wit = "") {
    if (ok) {
      for (auto& c : checks)
        if (c.id == id) return;  // keep the first failure only
      checks.push_back({id, true, ""});
    } else {
      for (auto& c : checks)
        if (c.id == id) {
          if (c.ok) c = {id, false, wit};
          return;
        }
      checks.push_back({id, false, wit});
    }
  };

  const GradingGroup::Elem neg_g = L.pres->grading.neg(L.g);
  for (int s = 0; s < samples; ++s) {
    AlgebraElement b = random_homogeneous(L.pres, L.g, rng);
    AlgebraElement bd = random_homogeneous(L.pres, neg_g, rng);

    // Snake: evaluate against the coevaluation pairs and recover the element.
    AlgebraElement lhs = el_zero(L.pres);
    for (const auto& [phi, e] : coev(L, el_one(L.pres)))
      lhs = lhs + (b * phi.payload) * e.payload;
    record("snake_left", lhs == b, element_text(b));

    AlgebraElement rhs = el_zero(L.pres);
    for (const auto& [phi, e] : coev(L, el_one(L.pres)))
      rhs = rhs + phi.payload * (e.payload * bd);
    record("snake_right", rhs == bd, element_text(bd));

    // Dual-basis reconstruction through the stored vectors.
    AlgebraElement rec = el_zero(L.pres);
    for (std::size_t i = 0; i < L.v.size(); ++i) rec = rec + (b * L.w[i]) * L.v[i];
    record("dual_basis_L", rec == b, element_text(b));
    AlgebraElement recd = el_zero(L.pres);
    for (std::size_t i = 0; i < L.v.size(); ++i) recd = recd + L.w[i] * (L.v[i] * bd);
    record("dual_basis_Ldual", recd == bd, element_text(bd));

    // Right action injectivity proxy: a is recovered from the products v_i a.
    AlgebraElement a = random_homogeneous(L.pres, L.pres->grading.zero(), rng);
    AlgebraElement back = el_zero(L.pres);
    for (std::size_t i = 0; i < L.v.size(); ++i) back = back + L.w[i] * (L.v[i] * a);
    record("action_injective", back == a, element_text(a));
  }

  if (L.ccc) {
    for (int s = 0; s < samples; ++s) {
      AlgebraElement a = random_homogeneous(L.pres, L.pres->grading.zero(), rng);
      AlgebraElement round = el_zero(L.pres);
      for (const auto& [e, phi] : ev_inv(L, a)) round = round + ev(L, e, phi);
      record("ev_round_trip", round == a, element_text(a));
      record("coev_round_trip", coev_inv(L, coev(L, a)) == a, element_text(a));
    }
  }
  return rep;
}

}  // namespace nclb
