#pragma once

#include <cstddef>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "nclb/algebra.hpp"
#include "nclb/hermet.hpp"
#include "nclb/linemod.hpp"
#include "nclb/linsolve.hpp"
#include "nclb/presets.hpp"
#include "nclb/tensalg.hpp"

namespace nclb {

// Ordered wedge monomial: a string of basis-form indices, strictly
// ascending in normal form.  The empty monomial is the 0-form slot.
using FormTerms = std::map<Word, AlgebraElement>;

// Differential graded algebra over a graded presentation: a finite basis of
// 1-forms with algebra coefficients on the left.  All tables are exact.
struct DGAPresentation {
  PresPtr base;
  std::vector<std::string> oneform_names;
  std::vector<GradingGroup::Elem> oneform_degrees;
  // commute_scale[g][f]: e^f * g = commute_scale[g][f] * g * e^f.
  std::vector<std::vector<Scalar>> commute_scale;
  std::vector<FormTerms> d_generators;
  std::vector<FormTerms> d_basisforms;
  // wedge_swap[a][b] for a > b: e^a ^ e^b = wedge_swap[a][b] * e^b ^ e^a;
  // equal adjacent basis forms annihilate.
  std::vector<std::vector<Scalar>> wedge_swap;
  std::optional<std::vector<FormTerms>> star_basisforms;

  int oneform_index(const std::string& n) const {
    for (std::size_t k = 0; k < oneform_names.size(); ++k)
      if (oneform_names[k] == n) return static_cast<int>(k);
    return -1;
  }

  friend bool operator==(const DGAPresentation& a, const DGAPresentation& b) {
    return same_presentation(a.base, b.base) && a.oneform_names == b.oneform_names &&
           a.oneform_degrees == b.oneform_degrees && a.commute_scale == b.commute_scale &&
           a.d_generators == b.d_generators && a.d_basisforms == b.d_basisforms &&
           a.wedge_swap == b.wedge_swap && a.star_basisforms == b.star_basisforms;
  }
};

using DgaPtr = std::shared_ptr<const DGAPresentation>;

inline bool same_dga(const DgaPtr& a, const DgaPtr& b) { return a == b || (a && b && *a == *b); }

struct Form {
  DgaPtr dga;
  FormTerms terms;

  bool is_zero() const { return terms.empty(); }
};

namespace detail {

inline void form_accumulate(FormTerms& terms, const Word& mono, const AlgebraElement& c) {
  auto it = terms.find(mono);
  if (it == terms.end()) {
    if (!c.is_zero()) terms.emplace(mono, c);
    return;
  }
  it->second = it->second + c;
  if (it->second.is_zero()) terms.erase(it);
}

inline void require_same_dga(const DgaPtr& a, const DgaPtr& b) {
  if (!same_dga(a, b)) fail(errc::mixed_dga, "forms from different calculi");
}

inline std::optional<GradingGroup::Elem> degree_of(const AlgebraElement& e) {
  if (e.terms.empty()) return e.pres->grading.zero();
  GradingGroup::Elem d = e.pres->grading.reduce(e.pres->word_degree(e.terms.begin()->first));
  for (const auto& [w, s] : e.terms)
    if (e.pres->grading.reduce(e.pres->word_degree(w)) != d) return std::nullopt;
  return d;
}

}  // namespace detail

inline Form form_zero(DgaPtr dga) { return {std::move(dga), {}}; }

inline Form form_term(DgaPtr dga, const AlgebraElement& coeff, const Word& mono) {
  if (!same_presentation(coeff.pres, dga->base))
    fail(errc::mixed_dga, "coefficient from a different presentation");
  for (std::size_t k = 0; k < mono.size(); ++k) {
    if (static_cast<std::size_t>(mono[k]) >= dga->oneform_names.size())
      fail(errc::bad_input, "monomial letter out of range");
    if (k > 0 && mono[k - 1] >= mono[k]) fail(errc::bad_input, "monomial letters must ascend");
  }
  Form out{std::move(dga), {}};
  detail::form_accumulate(out.terms, mono, coeff);
  return out;
}

inline Form basis_oneform(const DgaPtr& dga, int idx) {
  return form_term(dga, el_one(dga->base), Word(1, static_cast<char>(idx)));
}

inline Form operator+(const Form& x, const Form& y) {
  detail::require_same_dga(x.dga, y.dga);
  Form out = x;
  for (const auto& [m, c] : y.terms) detail::form_accumulate(out.terms, m, c);
  return out;
}

inline Form operator-(const Form& x) {
  Form out{x.dga, {}};
  for (const auto& [m, c] : x.terms) out.terms.emplace(m, -c);
  return out;
}

inline Form operator-(const Form& x, const Form& y) { return x + (-y); }

inline bool operator==(const Form& x, const Form& y) {
  return same_dga(x.dga, y.dga) && x.terms == y.terms;
}

inline bool operator!=(const Form& x, const Form& y) { return !(x == y); }

inline Form form_scale(const Scalar& s, const Form& x) {
  Form out{x.dga, {}};
  for (const auto& [m, c] : x.terms) detail::form_accumulate(out.terms, m, el_scale(s, c));
  return out;
}

// Coefficient pushed through a wedge monomial from left to right; each
// letter pair contributes one entry of the commutation table.
inline AlgebraElement moved_coeff(const DgaPtr& dga, const AlgebraElement& x, const Word& mono) {
  if (mono.empty() || x.is_zero()) return x;
  AlgebraElement out = el_zero(dga->base);
  for (const auto& [w, s] : x.terms) {
    Scalar f = s;
    for (char al : mono)
      for (char g : w)
        f = f * dga->commute_scale[static_cast<unsigned char>(g)][static_cast<unsigned char>(al)];
    out = out + el_word(dga->base, w, f);
  }
  return out;
}

inline Form left_mult(const AlgebraElement& a, const Form& x) {
  if (!same_presentation(a.pres, x.dga->base))
    fail(errc::mixed_dga, "coefficient from a different presentation");
  Form out{x.dga, {}};
  for (const auto& [m, c] : x.terms) detail::form_accumulate(out.terms, m, a * c);
  return out;
}

inline Form right_mult(const Form& x, const AlgebraElement& a) {
  if (!same_presentation(a.pres, x.dga->base))
    fail(errc::mixed_dga, "coefficient from a different presentation");
  Form out{x.dga, {}};
  for (const auto& [m, c] : x.terms)
    detail::form_accumulate(out.terms, m, c * moved_coeff(x.dga, a, m));
  return out;
}

namespace detail {

// Sorts a concatenated monomial into ascending order, collecting swap
// factors; a repeated basis form annihilates the monomial.
inline std::optional<std::pair<Scalar, Word>> wedge_normal(const DgaPtr& dga, Word m) {
  Scalar s = scalar_one();
  for (std::size_t i = 1; i < m.size(); ++i)
    for (std::size_t j = i; j > 0 && m[j - 1] >= m[j]; --j) {
      if (m[j - 1] == m[j]) return std::nullopt;
      s = s * dga->wedge_swap[static_cast<unsigned char>(m[j - 1])]
                             [static_cast<unsigned char>(m[j])];
      std::swap(m[j - 1], m[j]);
    }
  return std::make_optional(std::make_pair(std::move(s), std::move(m)));
}

}  // namespace detail

inline Form wedge(const Form& x, const Form& y) {
  detail::require_same_dga(x.dga, y.dga);
  Form out{x.dga, {}};
  for (const auto& [mx, cx] : x.terms)
    for (const auto& [my, cy] : y.terms) {
      AlgebraElement coeff = cx * moved_coeff(x.dga, cy, mx);
      if (coeff.is_zero()) continue;
      auto norm = detail::wedge_normal(x.dga, mx + my);
      if (!norm) continue;
      detail::form_accumulate(out.terms, norm->second, el_scale(norm->first, coeff));
    }
  return out;
}

// e^f * x rewritten as (scaled x) * e^f; defined on degree-homogeneous x.
inline Form move_coeff(const DgaPtr& dga, int idx, const AlgebraElement& x) {
  if (!same_presentation(x.pres, dga->base))
    fail(errc::mixed_dga, "coefficient from a different presentation");
  if (!detail::degree_of(x))
    fail(errc::not_homogeneous, "coefficient is not degree-homogeneous");
  Word mono(1, static_cast<char>(idx));
  return form_term(dga, moved_coeff(dga, x, mono), mono);
}

inline Form form_from_terms(const DgaPtr& dga, const FormTerms& terms) {
  Form out = form_zero(dga);
  for (const auto& [m, c] : terms) detail::form_accumulate(out.terms, m, c);
  return out;
}

// Exterior derivative of an algebra element, by the Leibniz rule over the
// letters of each word.
inline Form d_element(const DgaPtr& dga, const AlgebraElement& x) {
  if (!same_presentation(x.pres, dga->base))
    fail(errc::mixed_dga, "element from a different presentation");
  Form out = form_zero(dga);
  for (const auto& [w, s] : x.terms)
    for (std::size_t j = 0; j < w.size(); ++j) {
      AlgebraElement pre = el_word(dga->base, w.substr(0, j), s);
      AlgebraElement post = el_word(dga->base, w.substr(j + 1));
      Form mid = form_from_terms(dga, dga->d_generators[static_cast<unsigned char>(w[j])]);
      out = out + right_mult(left_mult(pre, mid), post);
    }
  return out;
}

namespace detail {

inline Form d_monomial(const DgaPtr& dga, const Word& mono) {
  if (mono.empty()) return form_zero(dga);
  const int head = mono[0];
  const Word rest = mono.substr(1);
  Form out = wedge(form_from_terms(dga, dga->d_basisforms[static_cast<std::size_t>(head)]),
                   form_term(dga, el_one(dga->base), rest));
  if (!rest.empty()) out = out - wedge(basis_oneform(dga, head), d_monomial(dga, rest));
  return out;
}

}  // namespace detail

inline Form d_form(const Form& x) {
  Form out = form_zero(x.dga);
  for (const auto& [m, c] : x.terms) {
    out = out + wedge(d_element(x.dga, c), form_term(x.dga, el_one(x.dga->base), m));
    out = out + left_mult(c, detail::d_monomial(x.dga, m));
  }
  return out;
}

inline Form form_star(const Form& x) {
  const DgaPtr& dga = x.dga;
  if (!dga->star_basisforms || !dga->base->star_table)
    fail(errc::no_form_star, "no star operation on this calculus");
  Form out = form_zero(dga);
  for (const auto& [m, c] : x.terms) {
    Form s = form_term(dga, el_one(dga->base), Word());
    for (auto it = m.rbegin(); it != m.rend(); ++it)
      s = wedge(s, form_from_terms(dga, (*dga->star_basisforms)[static_cast<std::size_t>(*it)]));
    out = out + right_mult(s, star(c));
  }
  return out;
}

inline DgaPtr make_dga(PresPtr base, std::vector<std::string> oneform_names,
                       std::vector<GradingGroup::Elem> oneform_degrees,
                       std::vector<std::vector<Scalar>> commute_scale,
                       std::vector<FormTerms> d_generators, std::vector<FormTerms> d_basisforms,
                       std::vector<std::vector<Scalar>> wedge_swap,
                       std::optional<std::vector<FormTerms>> star_basisforms = std::nullopt) {
  const std::size_t nf = oneform_names.size();
  const std::size_t ng = base->generators.size();
  if (oneform_degrees.size() != nf || d_basisforms.size() != nf || wedge_swap.size() != nf ||
      commute_scale.size() != ng || d_generators.size() != ng ||
      (star_basisforms && star_basisforms->size() != nf))
    fail(errc::bad_input, "table sizes do not match the basis");
  for (const auto& row : commute_scale)
    if (row.size() != nf) fail(errc::bad_input, "commutation table row size mismatch");
  for (const auto& row : wedge_swap)
    if (row.size() != nf) fail(errc::bad_input, "wedge table row size mismatch");
  for (auto& d : oneform_degrees) d = base->grading.reduce(d);

  auto dga = std::make_shared<DGAPresentation>();
  dga->base = base;
  dga->oneform_names = std::move(oneform_names);
  dga->oneform_degrees = std::move(oneform_degrees);
  dga->commute_scale = std::move(commute_scale);
  dga->d_generators = std::move(d_generators);
  dga->d_basisforms = std::move(d_basisforms);
  dga->wedge_swap = std::move(wedge_swap);
  dga->star_basisforms = std::move(star_basisforms);
  DgaPtr D = dga;

  auto check_table_entry = [&](const FormTerms& terms, const GradingGroup::Elem& want) {
    for (const auto& [m, c] : terms) {
      (void)form_term(D, c, m);
      auto cd = detail::degree_of(c);
      if (!cd) fail(errc::bad_input, "table coefficient is not homogeneous");
      GradingGroup::Elem total = *cd;
      for (char al : m)
        total = base->grading.add(total, D->oneform_degrees[static_cast<std::size_t>(al)]);
      if (base->grading.reduce(total) != want)
        fail(errc::bad_input, "derivative table entry has the wrong degree");
    }
  };
  for (std::size_t g = 0; g < ng; ++g) check_table_entry(D->d_generators[g], base->degrees[g]);
  for (std::size_t f = 0; f < nf; ++f) check_table_entry(D->d_basisforms[f], D->oneform_degrees[f]);

  // The commutation scales must be constant across each rewrite rule, or
  // moving a basis form through a product would depend on representatives.
  auto word_scale = [&](const Word& w, std::size_t f) {
    Scalar s = scalar_one();
    for (char g : w) s = s * D->commute_scale[static_cast<unsigned char>(g)][f];
    return s;
  };
  for (const Rule& r : base->rules)
    for (std::size_t f = 0; f < nf; ++f) {
      Scalar lhs = word_scale(r.lhs, f);
      for (const ElementTerm& t : r.rhs)
        if (!(word_scale(t.word, f) == lhs))
          fail(errc::verification_failed, "commutation scales are inconsistent with a rule");
    }

  for (std::size_t g = 0; g < ng; ++g)
    if (!d_form(form_from_terms(D, D->d_generators[g])).is_zero())
      fail(errc::verification_failed, "d squared is nonzero on a generator");
  for (std::size_t f = 0; f < nf; ++f)
    if (!d_form(form_from_terms(D, D->d_basisforms[f])).is_zero())
      fail(errc::verification_failed, "d squared is nonzero on a basis form");

  if (D->star_basisforms) {
    for (std::size_t f = 0; f < nf; ++f)
      if (form_star(form_star(basis_oneform(D, static_cast<int>(f)))) !=
          basis_oneform(D, static_cast<int>(f)))
        fail(errc::verification_failed, "form star is not involutive");
    if (base->star_table)
      for (std::size_t g = 0; g < ng; ++g) {
        AlgebraElement x = el_word(base, Word(1, static_cast<char>(g)));
        if (d_element(D, star(x)) != form_star(d_element(D, x)))
          fail(errc::verification_failed, "form star does not intertwine d");
      }
  }
  return D;
}

inline DgaPtr dga_slq2() {
  static const DgaPtr cached = [] {
    PresPtr P = preset_slq2();
    auto e = [&](const char* s) { return parse_element(P, s); };
    auto sc = [&](const char* s) {
      AlgebraElement x = parse_element(P, s);
      return x.terms.begin()->second;
    };
    std::vector<std::vector<Scalar>> commute = {
        {sc("q"), sc("q"), sc("q^2")},
        {sc("q^-1"), sc("q^-1"), sc("q^-2")},
        {sc("q"), sc("q"), sc("q^2")},
        {sc("q^-1"), sc("q^-1"), sc("q^-2")},
    };
    auto gw = [](std::initializer_list<int> xs) {
      Word w;
      for (int x : xs) w.push_back(static_cast<char>(x));
      return w;
    };
    std::vector<FormTerms> dgen = {
        {{gw({0}), e("q b")}, {gw({2}), e("a")}},
        {{gw({1}), e("a")}, {gw({2}), e("-q^-2 b")}},
        {{gw({0}), e("q d")}, {gw({2}), e("c")}},
        {{gw({1}), e("c")}, {gw({2}), e("-q^-2 d")}},
    };
    std::vector<FormTerms> dbasis = {
        {{gw({0, 2}), e("-(q^2 + 1)")}},
        {{gw({1, 2}), e("q^-2 + q^-4")}},
        {{gw({0, 1}), e("q^3")}},
    };
    const Scalar z0 = scalar_zero();
    std::vector<std::vector<Scalar>> swap = {
        {z0, z0, z0},
        {sc("-q^2"), z0, z0},
        {sc("-q^4"), sc("-q^-4"), z0},
    };
    return make_dga(P, {"e+", "e-", "e0"}, {{2}, {-2}, {0}}, commute, dgen, dbasis, swap);
  }();
  return cached;
}

inline DgaPtr dga_circle() {
  static const DgaPtr cached = [] {
    PresPtr P = preset_circle();
    auto e = [&](const char* s) { return parse_element(P, s); };
    Word du(1, static_cast<char>(0));
    std::vector<FormTerms> dgen = {
        {{du, e("1")}},
        {{du, e("-u_inv^2")}},
    };
    std::vector<FormTerms> star = {{{du, e("-u_inv^2")}}};
    Scalar one = scalar_one();
    return make_dga(P, {"du"}, {{1}}, {{one}, {one}}, dgen, {{}}, {{scalar_zero()}}, star);
  }();
  return cached;
}

inline DgaPtr dga_trivial() {
  static const DgaPtr cached =
      make_dga(preset_trivial(), {}, {}, {}, {}, {}, {}, std::vector<FormTerms>{});
  return cached;
}

// kappa = sum c_i . d(c'_i) over the witness pairs of the module.
inline Form kappa(const DgaPtr& dga, const LineModuleData& L) {
  if (!same_presentation(L.pres, dga->base))
    fail(errc::mixed_dga, "module over a different presentation");
  Form out = form_zero(dga);
  for (const auto& [ci, cpi] : L.cc) out = out + left_mult(ci, d_element(dga, cpi));
  return out;
}

struct ConnectionData {
  DgaPtr dga;
  LineModuleData lm;
  Form zeta;
};

namespace detail {

inline void require_omega1(const DgaPtr& dga, const Form& x, const char* what) {
  require_same_dga(dga, x.dga);
  for (const auto& [m, c] : x.terms) {
    if (m.size() != 1) fail(errc::bad_degrees, std::string(what) + " must be a 1-form");
    if (!is_homogeneous_of(c, dga->base->grading.zero()))
      fail(errc::bad_degrees, std::string(what) + " coefficients must have degree 0");
  }
}

// Composition through the witness pairs: F |-> sum F . c_i . c'_i.
inline Form through_witness(const Form& F, const LineModuleData& L) {
  Form out = form_zero(F.dga);
  for (const auto& [ci, cpi] : L.cc) out = out + right_mult(right_mult(F, ci), cpi);
  return out;
}

}  // namespace detail

inline ConnectionData make_connection(DgaPtr dga, LineModuleData lm, Form zeta) {
  if (!same_presentation(lm.pres, dga->base))
    fail(errc::mixed_dga, "module over a different presentation");
  detail::require_omega1(dga, zeta, "connection form");
  return {std::move(dga), std::move(lm), std::move(zeta)};
}

// Covariant derivative in the multiplied-out representation.
inline Form nabla(const ConnectionData& cd, const ModuleElement& e) {
  detail::require_member(cd.lm, e, ModuleElement::Side::L);
  Form out = form_zero(cd.dga);
  for (const auto& [ci, cpi] : cd.lm.cc)
    out = out + right_mult(d_element(cd.dga, e.payload * ci), cpi);
  return out + detail::through_witness(left_mult(e.payload, cd.zeta), cd.lm);
}

inline Form sigma0(const ConnectionData& cd, const ModuleElement& e, const Form& eta) {
  detail::require_member(cd.lm, e, ModuleElement::Side::L);
  detail::require_omega1(cd.dga, eta, "sigma argument");
  return detail::through_witness(left_mult(e.payload, eta), cd.lm);
}

inline Form connection_eta(const ConnectionData& cd) {
  return cd.zeta - kappa(cd.dga, cd.lm);
}

// Full braiding on an exact form: sigma(e (x) da) picks up the commutator
// of the coefficient with eta = zeta - kappa.
inline Form sigma_d(const ConnectionData& cd, const ModuleElement& e, const AlgebraElement& a) {
  detail::require_member(cd.lm, e, ModuleElement::Side::L);
  if (!is_homogeneous_of(a, cd.dga->base->grading.zero()))
    fail(errc::bad_degrees, "sigma argument must have degree 0");
  Form eta = connection_eta(cd);
  Form g = d_element(cd.dga, a) + left_mult(a, eta) - right_mult(eta, a);
  return detail::through_witness(left_mult(e.payload, g), cd.lm);
}

// Curvature in closed form through eta = zeta - kappa.
inline Form curvature(const ConnectionData& cd, const ModuleElement& e) {
  detail::require_member(cd.lm, e, ModuleElement::Side::L);
  Form eta = connection_eta(cd);
  Form f = d_form(eta) - wedge(eta, eta);
  return detail::through_witness(left_mult(e.payload, f), cd.lm);
}

// Curvature by the direct double-derivative expansion; agrees with the
// closed form and serves as its independent oracle.
inline Form curvature_direct(const ConnectionData& cd, const ModuleElement& e) {
  detail::require_member(cd.lm, e, ModuleElement::Side::L);
  Form out = form_zero(cd.dga);
  for (const auto& [ci, cpi] : cd.lm.cc) {
    Form ezc = right_mult(left_mult(e.payload, cd.zeta), ci);
    out = out + right_mult(d_form(ezc), cpi);
    Form left1 = d_element(cd.dga, e.payload * ci) + ezc;
    for (const auto& [hj, hpj] : cd.lm.cc) {
      Form right1 = d_element(cd.dga, cpi * hj) + right_mult(left_mult(cpi, cd.zeta), hj);
      out = out - right_mult(wedge(left1, right1), hpj);
    }
  }
  return out;
}

// Trace of the curvature through coevaluation, oriented so that the zero
// connection yields d(kappa).
inline Form chern_trace(const ConnectionData& cd) {
  Form eta = kappa(cd.dga, cd.lm) - cd.zeta;
  Form f = d_form(eta) - wedge(eta, eta);
  Form out = form_zero(cd.dga);
  for (const auto& [ci, cpi] : cd.lm.cc)
    out = out + left_mult(ci, detail::through_witness(left_mult(cpi, f), cd.lm));
  return out;
}

// Searches for a 1-form with degree-0 coefficients of bounded word length
// whose derivative is the target; witnesses membership in d(Omega^1 A).
inline std::optional<Form> in_d_omega1(const DgaPtr& dga, const Form& target,
                                       std::size_t maxlen) {
  detail::require_same_dga(dga, target.dga);
  const PresPtr& P = dga->base;
  std::vector<Word> words = normal_words_of_degree(P, P->grading.zero(), maxlen);
  struct Column {
    int alpha;
    Word word;
    Form image;
  };
  std::vector<Column> cols;
  std::map<std::pair<Word, Word>, std::size_t> rowidx;
  auto touch = [&](const Form& f) {
    for (const auto& [m, c] : f.terms)
      for (const auto& [w, s] : c.terms) rowidx.emplace(std::make_pair(m, w), rowidx.size());
  };
  for (std::size_t f = 0; f < dga->oneform_names.size(); ++f)
    for (const Word& w : words) {
      Column col{static_cast<int>(f), w,
                 d_form(form_term(dga, el_word(P, w), Word(1, static_cast<char>(f))))};
      touch(col.image);
      cols.push_back(std::move(col));
    }
  touch(target);

  LinearSystem sys;
  sys.ncols = cols.size();
  std::vector<std::vector<Scalar>> rows(rowidx.size(),
                                        std::vector<Scalar>(cols.size(), scalar_zero()));
  std::vector<Scalar> rhs(rowidx.size(), scalar_zero());
  for (std::size_t k = 0; k < cols.size(); ++k)
    for (const auto& [m, c] : cols[k].image.terms)
      for (const auto& [w, s] : c.terms) rows[rowidx.at({m, w})][k] = s;
  for (const auto& [m, c] : target.terms)
    for (const auto& [w, s] : c.terms) rhs[rowidx.at({m, w})] = s;
  for (std::size_t r = 0; r < rows.size(); ++r) sys.add_row(std::move(rows[r]), rhs[r]);

  auto sol = solve_linear(std::move(sys));
  if (!sol) return std::nullopt;
  Form tau = form_zero(dga);
  for (std::size_t k = 0; k < cols.size(); ++k) {
    if ((*sol)[k].is_zero()) continue;
    tau = tau + form_term(dga, el_word(P, cols[k].word, (*sol)[k]),
                          Word(1, static_cast<char>(cols[k].alpha)));
  }
  if (d_form(tau) != target) fail(errc::verification_failed, "primitive does not differentiate");
  return tau;
}

struct MetricCompatReport {
  bool compatible = false;
  Form defect;
};

// Reports whether the connection form satisfies zeta + zeta* = 0, the
// condition for the covariant derivative to preserve the metric.
inline MetricCompatReport metric_compat_check(const ConnectionData& cd, const HermitianMetric& m) {
  if (!same_line_module(m.base, cd.lm))
    fail(errc::mixed_module, "metric over a different line module");
  if (cd.zeta.is_zero()) return {true, form_zero(cd.dga)};
  Form defect = cd.zeta + form_star(cd.zeta);
  return {defect.is_zero(), defect};
}

// Form expressions: terms joined by +/-, each an optional coefficient
// expression followed by basis names joined with '^'.
inline Form parse_form(const DgaPtr& dga, const std::string& text) {
  struct Part {
    bool neg;
    std::string body;
  };
  std::vector<Part> parts;
  std::string cur;
  bool neg = false;
  bool any = false;
  int depth = 0;
  char prev = 0;
  auto push = [&] {
    std::size_t b = cur.find_first_not_of(' ');
    if (b == std::string::npos) fail(errc::parse_error, "empty term in form expression");
    std::size_t e = cur.find_last_not_of(' ');
    parts.push_back({neg, cur.substr(b, e - b + 1)});
    cur.clear();
  };
  for (char ch : text) {
    if (ch == '(') ++depth;
    if (ch == ')') --depth;
    if (depth == 0 && (ch == '+' || ch == '-') && prev != 'e' && prev != '^') {
      if (!any) {
        neg = ch == '-';
        any = true;
        continue;
      }
      push();
      neg = ch == '-';
      continue;
    }
    if (ch != ' ') {
      prev = ch;
      any = true;
    }
    cur += ch;
  }
  push();

  auto boundary = [](const std::string& s, std::size_t pos, std::size_t len) {
    bool lb = pos == 0 || s[pos - 1] == ' ' || s[pos - 1] == '^';
    std::size_t after = pos + len;
    bool rb = after >= s.size() || s[after] == ' ' || s[after] == '^';
    return lb && rb;
  };

  Form out = form_zero(dga);
  for (const Part& part : parts) {
    std::size_t best = std::string::npos;
    for (const std::string& nm : dga->oneform_names)
      for (std::size_t pos = part.body.find(nm); pos != std::string::npos;
           pos = part.body.find(nm, pos + 1))
        if (boundary(part.body, pos, nm.size()) && pos < best) best = pos;

    std::string coeff_text = best == std::string::npos ? part.body : part.body.substr(0, best);
    AlgebraElement c = coeff_text.find_first_not_of(' ') == std::string::npos
                           ? el_one(dga->base)
                           : parse_element(dga->base, coeff_text);
    Form t = form_term(dga, c, Word());
    if (best != std::string::npos) {
      std::string mono_text = part.body.substr(best);
      std::size_t p = 0;
      while (p <= mono_text.size()) {
        std::size_t cut = mono_text.find('^', p);
        if (cut == std::string::npos) cut = mono_text.size();
        std::string piece = mono_text.substr(p, cut - p);
        std::size_t b = piece.find_first_not_of(' ');
        if (b == std::string::npos) fail(errc::parse_error, "empty basis name in wedge");
        std::size_t e2 = piece.find_last_not_of(' ');
        int idx = dga->oneform_index(piece.substr(b, e2 - b + 1));
        if (idx < 0) fail(errc::parse_error, "unknown basis form '" + piece + "'");
        t = wedge(t, basis_oneform(dga, idx));
        if (cut == mono_text.size()) break;
        p = cut + 1;
      }
    }
    out = part.neg ? out - t : out + t;
  }
  return out;
}

inline std::string form_text(const Form& x) {
  if (x.is_zero()) return "0";
  std::string out;
  for (const auto& [m, c] : x.terms) {
    if (!out.empty()) out += " + ";
    std::string coeff = element_text(c);
    if (m.empty()) {
      out += coeff;
      continue;
    }
    if (coeff != "1") out += "(" + coeff + ") ";
    bool first = true;
    for (char al : m) {
      if (!first) out += "^";
      out += x.dga->oneform_names[static_cast<std::size_t>(al)];
      first = false;
    }
  }
  return out;
}

}  // namespace nclb
