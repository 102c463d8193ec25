#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "nclb/errors.hpp"
#include "nclb/grading.hpp"
#include "nclb/rng.hpp"
#include "nclb/scalar.hpp"

namespace nclb {

// A word in the generators, stored as a string of generator indices.
using Word = std::string;

struct ElementTerm {
  Scalar coeff;
  Word word;
};

struct Rule {
  Word lhs;
  std::vector<ElementTerm> rhs;
  // A commutation rule swaps an adjacent pair with a scalar factor;
  // these are the rules corridor matching may move letters through.
  bool is_commutation = false;
};

struct GradedPresentation;
using PresPtr = std::shared_ptr<const GradedPresentation>;

struct GradedPresentation {
  std::string name;
  std::vector<std::string> generators;
  GradingGroup grading;
  std::vector<GradingGroup::Elem> degrees;
  std::vector<Rule> rules;
  // Per-generator images; empty optional means the structure is absent.
  std::optional<std::vector<std::vector<ElementTerm>>> star_table;
  std::optional<std::vector<std::vector<ElementTerm>>> antipode_table;

  int generator_index(const std::string& n) const {
    for (std::size_t k = 0; k < generators.size(); ++k)
      if (generators[k] == n) return static_cast<int>(k);
    return -1;
  }

  GradingGroup::Elem word_degree(const Word& w) const {
    GradingGroup::Elem d = grading.zero();
    for (char ch : w) d = grading.add(d, degrees.at(static_cast<unsigned char>(ch)));
    return d;
  }

  friend bool operator==(const GradedPresentation& a, const GradedPresentation& b) {
    auto rules_eq = [](const std::vector<Rule>& x, const std::vector<Rule>& y) {
      if (x.size() != y.size()) return false;
      for (std::size_t k = 0; k < x.size(); ++k) {
        if (x[k].lhs != y[k].lhs || x[k].rhs.size() != y[k].rhs.size()) return false;
        for (std::size_t t = 0; t < x[k].rhs.size(); ++t)
          if (x[k].rhs[t].word != y[k].rhs[t].word || !(x[k].rhs[t].coeff == y[k].rhs[t].coeff))
            return false;
      }
      return true;
    };
    auto table_eq = [](const auto& x, const auto& y) {
      if (x.has_value() != y.has_value()) return false;
      if (!x) return true;
      if (x->size() != y->size()) return false;
      for (std::size_t k = 0; k < x->size(); ++k) {
        if ((*x)[k].size() != (*y)[k].size()) return false;
        for (std::size_t t = 0; t < (*x)[k].size(); ++t)
          if ((*x)[k][t].word != (*y)[k][t].word || !((*x)[k][t].coeff == (*y)[k][t].coeff))
            return false;
      }
      return true;
    };
    return a.name == b.name && a.generators == b.generators && a.grading == b.grading &&
           a.degrees == b.degrees && rules_eq(a.rules, b.rules) &&
           table_eq(a.star_table, b.star_table) && table_eq(a.antipode_table, b.antipode_table);
  }
};

inline bool same_presentation(const PresPtr& a, const PresPtr& b) {
  return a == b || (a && b && *a == *b);
}

// ---- rewriting ----

namespace detail {

// Factor mu with "z y" = mu * "y z", i.e. the cost of moving letter y
// leftward past letter z, when a commutation rule covers the pair.
inline std::optional<Scalar> swap_factor(const GradedPresentation& P, char z, char y) {
  for (const Rule& r : P.rules) {
    if (!r.is_commutation) continue;
    if (r.lhs[0] == z && r.lhs[1] == y) return r.rhs[0].coeff;
    if (r.lhs[0] == y && r.lhs[1] == z) return scalar_inv(r.rhs[0].coeff);
  }
  return std::nullopt;
}

struct Redex {
  std::size_t pos;    // start of the match
  std::size_t rule;   // rule index
  std::size_t end;    // one past the matched letters (pos+|lhs| for plain matches)
  Word corridor;      // letters between lhs[0] and lhs[1] for a distance match
  Scalar factor;      // accumulated swap factors (1 for plain matches)
};

inline std::optional<Redex> plain_match_at(const GradedPresentation& P, const Word& w,
                                           std::size_t pos) {
  int best = -1;
  std::size_t best_len = 0;
  for (std::size_t r = 0; r < P.rules.size(); ++r) {
    const Word& l = P.rules[r].lhs;
    if (l.size() > best_len && pos + l.size() <= w.size() &&
        w.compare(pos, l.size(), l) == 0) {
      best = static_cast<int>(r);
      best_len = l.size();
    }
  }
  if (best < 0) return std::nullopt;
  return Redex{pos, static_cast<std::size_t>(best), pos + best_len, {}, scalar_one()};
}

// Distance match for a 2-letter non-commutation rule: lhs[0] at pos, lhs[1]
// at some j > pos+1, every letter between movable past lhs[1].  Used so that
// relations like ad -> 1 + q^-1 bc eliminate a...d at any separation.
inline std::optional<Redex> corridor_match_at(const GradedPresentation& P, const Word& w,
                                              std::size_t pos) {
  std::optional<Redex> best;
  for (std::size_t r = 0; r < P.rules.size(); ++r) {
    const Rule& rule = P.rules[r];
    if (rule.is_commutation || rule.lhs.size() != 2) continue;
    if (w[pos] != rule.lhs[0]) continue;
    Scalar factor = scalar_one();
    for (std::size_t j = pos + 1; j < w.size(); ++j) {
      if (w[j] == rule.lhs[1]) {
        if (j == pos + 1) break;  // adjacent case is a plain match
        if (!best || j < best->end - 1) {
          best = Redex{pos, r, j + 1, Word(w, pos + 1, j - pos - 1), factor};
        }
        break;
      }
      auto mu = swap_factor(P, w[j], rule.lhs[1]);
      if (!mu) break;
      factor = factor * *mu;
    }
  }
  return best;
}

inline std::optional<Redex> find_redex(const GradedPresentation& P, const Word& w) {
  for (std::size_t pos = 0; pos < w.size(); ++pos) {
    if (auto m = plain_match_at(P, w, pos)) return m;
    if (auto m = corridor_match_at(P, w, pos)) return m;
  }
  return std::nullopt;
}

inline std::vector<Redex> all_redexes(const GradedPresentation& P, const Word& w) {
  std::vector<Redex> out;
  for (std::size_t pos = 0; pos < w.size(); ++pos) {
    for (std::size_t r = 0; r < P.rules.size(); ++r) {
      const Word& l = P.rules[r].lhs;
      if (pos + l.size() <= w.size() && w.compare(pos, l.size(), l) == 0)
        out.push_back(Redex{pos, r, pos + l.size(), {}, scalar_one()});
    }
    if (auto m = corridor_match_at(P, w, pos)) out.push_back(*m);
  }
  return out;
}

inline void expand_redex(const GradedPresentation& P, const Word& w, const Redex& m,
                         const Scalar& coeff, std::vector<std::pair<Word, Scalar>>& out) {
  Word prefix = w.substr(0, m.pos);
  Word suffix = w.substr(m.end);
  for (const ElementTerm& t : P.rules[m.rule].rhs) {
    Word nw = prefix + t.word + m.corridor + suffix;
    out.emplace_back(std::move(nw), coeff * m.factor * t.coeff);
  }
}

constexpr long long kNormalizeBudget = 1000000;

}  // namespace detail

inline bool word_is_normal(const GradedPresentation& P, const Word& w) {
  return !detail::find_redex(P, w).has_value();
}

// Terms in normal form: map from irreducible word to nonzero coefficient.
using TermMap = std::map<Word, Scalar>;

inline TermMap normalize_terms(const GradedPresentation& P,
                               std::vector<std::pair<Word, Scalar>> work) {
  TermMap result;
  long long steps = 0;
  while (!work.empty()) {
    auto [w, c] = std::move(work.back());
    work.pop_back();
    if (c.is_zero()) continue;
    auto m = detail::find_redex(P, w);
    if (!m) {
      Scalar& slot = result[w];
      slot = slot + c;
      if (slot.is_zero()) result.erase(w);
      continue;
    }
    if (++steps > detail::kNormalizeBudget)
      fail(errc::non_terminating, "rewrite budget exceeded");
    detail::expand_redex(P, w, *m, c, work);
  }
  return result;
}

// Reduces a single word with randomized redex choices; used by the
// confluence checker to compare strategies.
inline TermMap normalize_word_random(const GradedPresentation& P, const Word& word, Rng& rng) {
  TermMap result;
  std::vector<std::pair<Word, Scalar>> work{{word, scalar_one()}};
  long long steps = 0;
  while (!work.empty()) {
    auto [w, c] = std::move(work.back());
    work.pop_back();
    if (c.is_zero()) continue;
    auto ms = detail::all_redexes(P, w);
    if (ms.empty()) {
      Scalar& slot = result[w];
      slot = slot + c;
      if (slot.is_zero()) result.erase(w);
      continue;
    }
    if (++steps > detail::kNormalizeBudget)
      fail(errc::non_terminating, "rewrite budget exceeded");
    const auto& m = ms[static_cast<std::size_t>(rng.below(ms.size()))];
    detail::expand_redex(P, w, m, c, work);
  }
  return result;
}

// ---- elements ----

struct AlgebraElement {
  PresPtr pres;
  TermMap terms;

  bool is_zero() const { return terms.empty(); }

  friend bool operator==(const AlgebraElement& a, const AlgebraElement& b) {
    if (!same_presentation(a.pres, b.pres)) return false;
    return a.terms == b.terms;
  }
  friend bool operator!=(const AlgebraElement& a, const AlgebraElement& b) { return !(a == b); }
};

inline void check_same(const AlgebraElement& a, const AlgebraElement& b) {
  if (!same_presentation(a.pres, b.pres))
    fail(errc::mixed_presentation, "elements from different presentations");
}

inline AlgebraElement el_zero(PresPtr p) { return {std::move(p), {}}; }

inline AlgebraElement make_element(PresPtr p, std::vector<std::pair<Word, Scalar>> raw) {
  TermMap t = normalize_terms(*p, std::move(raw));
  return {std::move(p), std::move(t)};
}

inline AlgebraElement el_scalar(PresPtr p, Scalar c) {
  return make_element(std::move(p), {{Word{}, std::move(c)}});
}

inline AlgebraElement el_one(PresPtr p) { return el_scalar(std::move(p), scalar_one()); }

inline AlgebraElement el_word(PresPtr p, const Word& w, Scalar c = scalar_one()) {
  return make_element(std::move(p), {{w, std::move(c)}});
}

inline AlgebraElement el_gen(PresPtr p, int idx) {
  return el_word(std::move(p), Word(1, static_cast<char>(idx)));
}

inline AlgebraElement operator+(const AlgebraElement& a, const AlgebraElement& b) {
  check_same(a, b);
  AlgebraElement r = a;
  for (const auto& [w, c] : b.terms) {
    Scalar& slot = r.terms[w];
    slot = slot + c;
    if (slot.is_zero()) r.terms.erase(w);
  }
  return r;
}

inline AlgebraElement operator-(const AlgebraElement& a) {
  AlgebraElement r = a;
  for (auto& [w, c] : r.terms) c = -c;
  return r;
}

inline AlgebraElement operator-(const AlgebraElement& a, const AlgebraElement& b) {
  return a + (-b);
}

inline AlgebraElement el_scale(const Scalar& c, const AlgebraElement& a) {
  if (c.is_zero()) return el_zero(a.pres);
  AlgebraElement r = a;
  for (auto& [w, x] : r.terms) x = x * c;
  return r;
}

inline AlgebraElement operator*(const AlgebraElement& a, const AlgebraElement& b) {
  check_same(a, b);
  std::vector<std::pair<Word, Scalar>> raw;
  raw.reserve(a.terms.size() * b.terms.size());
  for (const auto& [wa, ca] : a.terms)
    for (const auto& [wb, cb] : b.terms) raw.emplace_back(wa + wb, ca * cb);
  return make_element(a.pres, std::move(raw));
}

// Applies a generator-image table as a linear anti-homomorphism:
// word x1...xn maps to T(xn)...T(x1); coefficients are conjugated when
// conjugate_coeffs is set (the star case; the antipode is plain linear).
inline AlgebraElement apply_antihom_table(const AlgebraElement& x,
                                          const std::vector<std::vector<ElementTerm>>& table,
                                          bool conjugate_coeffs) {
  AlgebraElement acc = el_zero(x.pres);
  for (const auto& [w, c] : x.terms) {
    AlgebraElement prod = el_one(x.pres);
    for (std::size_t k = w.size(); k-- > 0;) {
      const auto& image = table.at(static_cast<unsigned char>(w[k]));
      std::vector<std::pair<Word, Scalar>> raw;
      for (const auto& [pw, pc] : prod.terms)
        for (const ElementTerm& t : image) raw.emplace_back(pw + t.word, pc * t.coeff);
      prod = make_element(x.pres, std::move(raw));
    }
    acc = acc + el_scale(conjugate_coeffs ? scalar_conj(c) : c, prod);
  }
  return acc;
}

inline AlgebraElement star(const AlgebraElement& x) {
  if (!x.pres->star_table) fail(errc::no_star_structure, "presentation has no star table");
  return apply_antihom_table(x, *x.pres->star_table, true);
}

inline AlgebraElement antipode(const AlgebraElement& x) {
  if (!x.pres->antipode_table) fail(errc::no_star_structure, "presentation has no antipode table");
  return apply_antihom_table(x, *x.pres->antipode_table, false);
}

// Unique degree of a homogeneous element; nullopt when words disagree.
// The zero element is homogeneous of every degree and reports zero.
inline std::optional<GradingGroup::Elem> degree_of(const AlgebraElement& x) {
  if (x.terms.empty()) return x.pres->grading.zero();
  std::optional<GradingGroup::Elem> d;
  for (const auto& [w, c] : x.terms) {
    GradingGroup::Elem wd = x.pres->word_degree(w);
    if (!d)
      d = wd;
    else if (*d != wd)
      return std::nullopt;
  }
  return d;
}

inline bool is_homogeneous_of(const AlgebraElement& x, const GradingGroup::Elem& g) {
  if (x.terms.empty()) return true;
  auto d = degree_of(x);
  return d && *d == g;
}

inline bool is_central(const AlgebraElement& x) {
  for (std::size_t k = 0; k < x.pres->generators.size(); ++k) {
    AlgebraElement g = el_gen(x.pres, static_cast<int>(k));
    if (x * g != g * x) return false;
  }
  return true;
}

// ---- construction with validation ----

inline PresPtr make_presentation(GradedPresentation raw) {
  if (raw.generators.size() > 200) fail(errc::bad_input, "too many generators");
  for (const auto& n : raw.generators) {
    if (n.empty()) fail(errc::bad_input, "empty generator name");
    if (n == "q" || n == "i") fail(errc::bad_input, "generator name collides with scalar symbol");
  }
  for (std::size_t a = 0; a < raw.generators.size(); ++a)
    for (std::size_t b = a + 1; b < raw.generators.size(); ++b)
      if (raw.generators[a] == raw.generators[b]) fail(errc::bad_input, "duplicate generator name");
  if (raw.degrees.size() != raw.generators.size())
    fail(errc::bad_input, "degree table size mismatch");
  for (auto& d : raw.degrees) d = raw.grading.reduce(d);

  auto check_word = [&](const Word& w) {
    for (char ch : w)
      if (static_cast<unsigned char>(ch) >= raw.generators.size())
        fail(errc::unknown_generator, "word uses undeclared generator");
  };

  for (Rule& r : raw.rules) {
    if (r.lhs.empty()) fail(errc::bad_input, "rule with empty left side");
    check_word(r.lhs);
    GradingGroup::Elem dl = raw.grading.zero();
    for (char ch : r.lhs) dl = raw.grading.add(dl, raw.degrees[static_cast<unsigned char>(ch)]);
    for (const ElementTerm& t : r.rhs) {
      check_word(t.word);
      if (t.coeff.is_zero()) fail(errc::bad_input, "rule term with zero coefficient");
      GradingGroup::Elem dr = raw.grading.zero();
      for (char ch : t.word) dr = raw.grading.add(dr, raw.degrees[static_cast<unsigned char>(ch)]);
      if (dr != dl) fail(errc::bad_input, "rule is not degree-homogeneous");
    }
    Word sorted_l = r.lhs, sorted_r;
    if (r.rhs.size() == 1) sorted_r = r.rhs[0].word;
    std::sort(sorted_l.begin(), sorted_l.end());
    std::sort(sorted_r.begin(), sorted_r.end());
    r.is_commutation =
        r.lhs.size() == 2 && r.rhs.size() == 1 && r.rhs[0].word.size() == 2 &&
        sorted_l == sorted_r && r.lhs != r.rhs[0].word;
  }

  auto table_ok = [&](const std::vector<std::vector<ElementTerm>>& table, bool negate_degree) {
    if (table.size() != raw.generators.size()) fail(errc::bad_input, "image table size mismatch");
    for (std::size_t g = 0; g < table.size(); ++g) {
      if (table[g].empty()) fail(errc::bad_input, "generator image is empty");
      for (const ElementTerm& t : table[g]) {
        check_word(t.word);
        if (!negate_degree) continue;
        GradingGroup::Elem want = raw.grading.neg(raw.degrees[g]);
        GradingGroup::Elem dt = raw.grading.zero();
        for (char ch : t.word) dt = raw.grading.add(dt, raw.degrees[static_cast<unsigned char>(ch)]);
        if (dt != want) fail(errc::bad_input, "star image is not degree-compatible");
      }
    }
  };
  if (raw.star_table) table_ok(*raw.star_table, true);
  if (raw.antipode_table) table_ok(*raw.antipode_table, false);

  auto P = std::make_shared<const GradedPresentation>(std::move(raw));

  // Star must be involutive and compatible with the rewrite rules
  // (anti-homomorphism property on every relation).
  if (P->star_table) {
    for (std::size_t g = 0; g < P->generators.size(); ++g) {
      AlgebraElement gen = el_gen(P, static_cast<int>(g));
      if (star(star(gen)) != gen) fail(errc::bad_input, "star is not involutive");
    }
    for (const Rule& r : P->rules) {
      AlgebraElement lhs = el_word(P, r.lhs);
      AlgebraElement rhs = el_zero(P);
      for (const ElementTerm& t : r.rhs) rhs = rhs + el_word(P, t.word, t.coeff);
      if (star(lhs) != star(rhs)) fail(errc::bad_input, "star is incompatible with a rule");
    }
  }
  if (P->antipode_table) {
    for (const Rule& r : P->rules) {
      AlgebraElement lhs = el_word(P, r.lhs);
      AlgebraElement rhs = el_zero(P);
      for (const ElementTerm& t : r.rhs) rhs = rhs + el_word(P, t.word, t.coeff);
      if (antipode(lhs) != antipode(rhs)) fail(errc::bad_input, "antipode is incompatible with a rule");
    }
  }
  return P;
}

// ---- confluence fuzzing ----

struct ConfluenceReport {
  bool ok = true;
  Word witness;            // smallest mismatching word found (empty if ok)
  std::string witness_text;
  int trials = 0;
};

inline std::string word_text(const GradedPresentation& P, const Word& w) {
  if (w.empty()) return "1";
  bool all_short = true;
  for (const auto& n : P.generators) all_short = all_short && n.size() == 1;
  std::string out;
  std::size_t k = 0;
  while (k < w.size()) {
    std::size_t j = k;
    while (j < w.size() && w[j] == w[k]) ++j;
    if (k && !all_short) out += " ";
    out += P.generators[static_cast<unsigned char>(w[k])];
    if (j - k > 1) out += "^" + std::to_string(j - k);
    k = j;
  }
  return out;
}

inline std::string element_text(const AlgebraElement& x) {
  if (x.terms.empty()) return "0";
  std::string out;
  bool first = true;
  for (const auto& [w, c] : x.terms) {
    std::string cs = to_string(c);
    // A leading minus can be pulled out unless the coefficient is a sum.
    bool negative = cs.size() > 1 && cs[0] == '-' && cs.find(" + ") == std::string::npos &&
                    cs.find(" - ") == std::string::npos;
    std::string mag = negative ? cs.substr(1) : cs;
    bool compound = mag.find(' ') != std::string::npos;
    std::string body;
    std::string ws = word_text(*x.pres, w);
    if (w.empty())
      body = compound ? "(" + mag + ")" : mag;
    else if (mag == "1")
      body = ws;
    else
      body = (compound ? "(" + mag + ")" : mag) + " " + ws;
    if (first) {
      out += (negative ? "-" : "") + body;
      first = false;
    } else {
      out += (negative ? " - " : " + ") + body;
    }
  }
  return out;
}

inline ConfluenceReport check_confluence(const PresPtr& P, int trials, int max_len,
                                         Rng& rng, int strategies_per_word = 3) {
  ConfluenceReport rep;
  std::size_t ngen = P->generators.size();
  if (ngen == 0) {
    rep.trials = 0;
    return rep;
  }
  auto mismatch = [&](const Word& w) {
    TermMap base = normalize_terms(*P, {{w, scalar_one()}});
    // Every one-step divergence must rejoin the deterministic result.
    for (const auto& m : detail::all_redexes(*P, w)) {
      std::vector<std::pair<Word, Scalar>> work;
      detail::expand_redex(*P, w, m, scalar_one(), work);
      if (normalize_terms(*P, std::move(work)) != base) return true;
    }
    for (int s = 0; s < strategies_per_word; ++s) {
      if (normalize_word_random(*P, w, rng) != base) return true;
    }
    return false;
  };
  auto report_failure = [&](Word w) {
    // Shrink: drop single letters while the mismatch persists.
    bool shrunk = true;
    while (shrunk && w.size() > 1) {
      shrunk = false;
      for (std::size_t k = 0; k < w.size(); ++k) {
        Word shorter = w.substr(0, k) + w.substr(k + 1);
        if (!shorter.empty() && mismatch(shorter)) {
          w = shorter;
          shrunk = true;
          break;
        }
      }
    }
    rep.ok = false;
    rep.witness = w;
    rep.witness_text = word_text(*P, w);
  };

  // Exhaustive pass over short words, in length then lexicographic order,
  // so a failure here yields the smallest witness directly.
  std::vector<Word> level{Word{}};
  long long budget = 2000;
  for (int len = 1; len <= max_len && static_cast<long long>(level.size()) * ngen <= budget;
       ++len) {
    std::vector<Word> next;
    for (const Word& base : level)
      for (std::size_t g = 0; g < ngen; ++g) next.push_back(base + static_cast<char>(g));
    budget -= static_cast<long long>(next.size());
    for (const Word& w : next) {
      ++rep.trials;
      if (mismatch(w)) {
        report_failure(w);
        return rep;
      }
    }
    level = std::move(next);
  }

  for (int t = 0; t < trials; ++t) {
    int len = static_cast<int>(rng.range(1, max_len));
    Word w;
    for (int k = 0; k < len; ++k)
      w.push_back(static_cast<char>(rng.below(ngen)));
    ++rep.trials;
    if (mismatch(w)) {
      report_failure(w);
      return rep;
    }
  }
  return rep;
}

// ---- normal-word enumeration ----

// All irreducible words of length at most maxlen.  Irreducible words are
// closed under taking prefixes, so a pruned depth-first walk is exact.
inline std::vector<Word> normal_words_up_to(const PresPtr& P, std::size_t maxlen) {
  std::vector<Word> out;
  std::vector<Word> frontier{Word{}};
  out.push_back(Word{});
  for (std::size_t len = 1; len <= maxlen && !frontier.empty(); ++len) {
    std::vector<Word> next;
    for (const Word& base : frontier) {
      for (std::size_t g = 0; g < P->generators.size(); ++g) {
        Word w = base + static_cast<char>(g);
        if (word_is_normal(*P, w)) {
          out.push_back(w);
          next.push_back(std::move(w));
        }
      }
    }
    frontier = std::move(next);
  }
  return out;
}

inline std::vector<Word> normal_words_of_degree(const PresPtr& P, const GradingGroup::Elem& d,
                                                std::size_t maxlen) {
  std::vector<Word> out;
  GradingGroup::Elem want = P->grading.reduce(d);
  for (Word& w : normal_words_up_to(P, maxlen))
    if (P->grading.reduce(P->word_degree(w)) == want) out.push_back(std::move(w));
  return out;
}

// ---- element parsing ----

namespace detail {

inline AlgebraElement parse_element_expr(Lexer& lx, const PresPtr& P);

inline AlgebraElement parse_element_factor(Lexer& lx, const PresPtr& P) {
  if (lx.accept('(')) {
    AlgebraElement inner = parse_element_expr(lx, P);
    lx.expect(')');
    if (lx.accept('^')) {
      long long n = parse_exponent(lx);
      if (n < 0) fail(errc::parse_error, "negative power of an element");
      AlgebraElement acc = el_one(P);
      for (long long k = 0; k < n; ++k) acc = acc * inner;
      return acc;
    }
    return inner;
  }
  if (lx.peek_digit()) {
    Scalar s = scalar_int(lx.read_int());
    if (lx.accept('^')) s = scalar_pow(s, parse_exponent(lx));
    return el_scalar(P, s);
  }
  if (lx.peek_name()) {
    // An identifier may be a run of symbols with no separators ("qbc");
    // split greedily, longest known symbol first.  A trailing exponent
    // binds to the last symbol only.
    std::string name = lx.read_name();
    std::vector<std::string> toks;
    std::size_t p = 0;
    while (p < name.size()) {
      std::string best;
      for (const auto& cand : P->generators)
        if (cand.size() > best.size() && name.compare(p, cand.size(), cand) == 0) best = cand;
      if (best.empty() && (name[p] == 'q' || name[p] == 'i')) best = name.substr(p, 1);
      if (best.empty())
        fail(errc::unknown_generator, "unknown symbol in '" + name + "'");
      toks.push_back(best);
      p += best.size();
    }
    long long last_exp = 1;
    if (lx.accept('^')) last_exp = parse_exponent(lx);
    AlgebraElement acc = el_one(P);
    for (std::size_t k = 0; k < toks.size(); ++k) {
      long long e = (k + 1 == toks.size()) ? last_exp : 1;
      if (toks[k] == "q" || toks[k] == "i") {
        Scalar s = (toks[k] == "q") ? scalar_q_power(1) : scalar_i();
        acc = el_scale(scalar_pow(s, e), acc);
      } else {
        if (e < 0) fail(errc::parse_error, "negative power of a generator");
        int g = P->generator_index(toks[k]);
        acc = acc * el_word(P, Word(static_cast<std::size_t>(e), static_cast<char>(g)));
      }
    }
    return acc;
  }
  fail(errc::parse_error, "unexpected input in element expression");
}

inline bool starts_element_factor(Lexer& lx) {
  char c = lx.peek();
  return c == '(' || std::isdigit(static_cast<unsigned char>(c)) || lx.peek_name();
}

inline AlgebraElement parse_element_term(Lexer& lx, const PresPtr& P) {
  AlgebraElement acc = parse_element_factor(lx, P);
  for (;;) {
    if (lx.accept('*')) {
      acc = acc * parse_element_factor(lx, P);
    } else if (lx.accept('/')) {
      // Division only by scalar factors.
      AlgebraElement d = parse_element_factor(lx, P);
      bool scalar_only = d.terms.size() == 1 && d.terms.begin()->first.empty();
      if (!scalar_only) fail(errc::parse_error, "division by a non-scalar element");
      acc = el_scale(scalar_inv(d.terms.begin()->second), acc);
    } else if (starts_element_factor(lx)) {
      acc = acc * parse_element_factor(lx, P);
    } else {
      return acc;
    }
  }
}

inline AlgebraElement parse_element_expr(Lexer& lx, const PresPtr& P) {
  bool neg = lx.accept('-');
  AlgebraElement acc = parse_element_term(lx, P);
  if (neg) acc = -acc;
  for (;;) {
    if (lx.accept('+'))
      acc = acc + parse_element_term(lx, P);
    else if (lx.accept('-'))
      acc = acc - parse_element_term(lx, P);
    else
      return acc;
  }
}

}  // namespace detail

inline AlgebraElement parse_element(const PresPtr& P, const std::string& text) {
  detail::Lexer lx{text};
  AlgebraElement e = detail::parse_element_expr(lx, P);
  if (!lx.eof()) fail(errc::parse_error, "trailing input in \"" + text + "\"");
  return e;
}

}  // namespace nclb
