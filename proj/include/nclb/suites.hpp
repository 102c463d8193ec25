#pragma once

#include <chrono>
#include <cstdint>
#include <cstdio>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "nclb/diffcalc.hpp"
#include "nclb/hermet.hpp"
#include "nclb/linemod.hpp"
#include "nclb/preset_io.hpp"
#include "nclb/presets.hpp"
#include "nclb/report.hpp"
#include "nclb/rng.hpp"
#include "nclb/tensalg.hpp"
#include "nclb/thomnum.hpp"

namespace nclb {

struct RunOptions {
  std::uint64_t seed = 0;
  int samples = 0;  // 0 keeps each suite's default
  double q0 = 1.0;
  std::size_t grid_n = 2048;
  double window = 20.0;
  std::string zeta_text = "0";
  std::optional<std::string> variant;      // restricts the thom suite
  std::optional<std::string> module_name;  // restricts module-based suites
};

struct PresetData {
  std::string name;
  PresPtr pres;
  std::vector<std::pair<std::string, LineModuleData>> modules;
  DgaPtr dga;  // null when the preset carries no calculus tables
};

inline PresetData resolve_preset(const std::string& arg) {
  if (arg == "slq2") {
    PresPtr P = preset_slq2();
    return {arg, P, {{"metric", slq2_metric_module(P)}, {"calculus", slq2_calculus_module(P)}},
            dga_slq2()};
  }
  if (arg == "circle") return {arg, preset_circle(), {{"module", circle_module()}}, dga_circle()};
  if (arg == "trivial")
    return {arg, preset_trivial(), {{"module", trivial_module()}}, dga_trivial()};
  LoadedPreset lp = load_preset_file(arg);
  PresetData pd{lp.pres->name, lp.pres, std::move(lp.modules), nullptr};
  // A file describing a built-in presentation gets its calculus tables.
  if (same_presentation(pd.pres, preset_slq2())) pd.dga = dga_slq2();
  if (same_presentation(pd.pres, preset_circle())) pd.dga = dga_circle();
  return pd;
}

inline const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names = {
      "confluence", "line-axioms", "gram",     "tz-star", "hopf-galois",
      "xi-alpha",   "even-odd",    "calculus", "chern",   "thom"};
  return names;
}

namespace detail {

class Checker {
 public:
  explicit Checker(std::string suite) { out_.suite = std::move(suite); }

  template <class F>
  void run(const std::string& id, F&& fn) {
    auto t0 = std::chrono::steady_clock::now();
    CheckLine line;
    line.id = id;
    try {
      std::pair<bool, std::string> r = fn();
      line.status = r.first ? "pass" : "fail";
      line.witness = std::move(r.second);
    } catch (const error& e) {
      line.status = "fail";
      line.witness = e.what();
    }
    line.elapsed_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    out_.checks.push_back(std::move(line));
  }

  void add(const std::string& id, bool ok, std::string witness, double ms) {
    out_.checks.push_back({id, ok ? "pass" : "fail", std::move(witness), ms});
  }

  void skip(const std::string& id, const std::string& why) {
    out_.checks.push_back({id, "skip", why, 0.0});
  }

  SuiteOutcome take() { return std::move(out_); }

 private:
  SuiteOutcome out_;
};

inline int want(const RunOptions& opt, int def) { return opt.samples > 0 ? opt.samples : def; }

inline Rng suite_rng(const RunOptions& opt, std::uint64_t idx) {
  return Rng(opt.seed * 1315423911ULL + idx);
}

inline std::string fmt_residual(double v) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.2e", v);
  return buf;
}

inline std::string monomial_names(const DgaPtr& dga, const Word& m) {
  std::string out;
  for (std::size_t k = 0; k < m.size(); ++k) {
    if (k) out += "^";
    out += dga->oneform_names[static_cast<unsigned char>(m[k])];
  }
  return out;
}

// Like form_text but with the brackets dropped where the coefficient is a
// single short factor, for witness strings.
inline std::string form_witness(const Form& x) {
  if (x.terms.empty()) return "0";
  if (x.terms.size() == 1) {
    const auto& [m, c] = *x.terms.begin();
    std::string cs = element_text(c);
    std::string mono = monomial_names(x.dga, m);
    if (cs == "1") return mono;
    if (cs.find(' ') == std::string::npos) return cs + " " + mono;
    // A parenthesized compound coefficient needs no second wrap.
    if (cs.front() == '(' && cs.back() == ')') {
      int depth = 0;
      bool whole = true;
      for (std::size_t k = 0; k + 1 < cs.size(); ++k) {
        depth += cs[k] == '(' ? 1 : cs[k] == ')' ? -1 : 0;
        if (depth == 0) whole = false;
      }
      if (whole) return cs + " " + mono;
    }
  }
  return form_text(x);
}

inline std::optional<HermitianMetric> try_metric(const LineModuleData& L) {
  try {
    return make_hermitian_metric(L);
  } catch (const error&) {
    return std::nullopt;
  }
}

// ---- individual suites ----

inline SuiteOutcome suite_confluence(const PresetData& pd, const RunOptions& opt) {
  Checker ck("confluence");
  Rng rng = suite_rng(opt, 1);
  int trials = want(opt, 1000);
  ck.run("normal_form_unique", [&]() -> std::pair<bool, std::string> {
    ConfluenceReport rep = check_confluence(pd.pres, trials, 8, rng);
    if (rep.ok) return {true, std::to_string(rep.trials) + " words, no mismatch"};
    return {false, "mismatch on '" + rep.witness_text + "'"};
  });
  return ck.take();
}

inline SuiteOutcome suite_line_axioms(const PresetData& pd, const RunOptions& opt) {
  Checker ck("line-axioms");
  Rng rng = suite_rng(opt, 2);
  for (const auto& [mname, L] : pd.modules) {
    if (opt.module_name && *opt.module_name != mname) continue;
    auto t0 = std::chrono::steady_clock::now();
    AxiomReport rep = line_axioms_suite(L, want(opt, 100), rng);
    double ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    for (const AxiomCheck& c : rep.checks)
      ck.add(mname + "." + c.id, c.ok, c.ok ? "" : c.witness, ms / rep.checks.size());
  }
  return ck.take();
}

inline SuiteOutcome suite_gram(const PresetData& pd, const RunOptions& opt) {
  Checker ck("gram");
  for (const auto& [mname, L] : pd.modules) {
    if (opt.module_name && *opt.module_name != mname) continue;
    std::optional<HermitianMetric> m = try_metric(L);
    if (!m) {
      ck.skip(mname + ".solve", "NotStarCompatible");
      continue;
    }
    std::optional<GramData> G;
    ck.run(mname + ".solve", [&]() -> std::pair<bool, std::string> {
      G = gram_matrices(*m);
      return {true, "g^{00} = " + element_text(G->g_upper[0][0])};
    });
    if (!G) continue;
    DualBasis D = dual_basis(L);
    const std::size_t n = L.v.size();
    ck.run(mname + ".identity_a", [&]() -> std::pair<bool, std::string> {
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = 0; k < n; ++k) {
          AlgebraElement acc = el_zero(L.pres);
          for (std::size_t j = 0; j < n; ++j) acc = acc + G->g_upper[i][j] * G->g_lower[j][k];
          if (acc != D.P[i][k])
            return {false, "entry (" + std::to_string(i) + "," + std::to_string(k) + ")"};
        }
      return {true, "g^{ij} g_{jk} = ev(e^i x e_k)"};
    });
    ck.run(mname + ".identity_b", [&]() -> std::pair<bool, std::string> {
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = 0; k < n; ++k) {
          AlgebraElement acc = el_zero(L.pres);
          for (std::size_t j = 0; j < n; ++j) acc = acc + G->g_lower[i][j] * G->g_upper[j][k];
          if (acc != star(D.P[k][i]))
            return {false, "entry (" + std::to_string(i) + "," + std::to_string(k) + ")"};
        }
      return {true, "g_{ij} g^{jk} = ev(e^k x e_i)*"};
    });
    ck.run(mname + ".identity_c", [&]() -> std::pair<bool, std::string> {
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = 0; k < n; ++k)
          if (star(G->g_lower[i][k]) != G->g_lower[k][i])
            return {false, "entry (" + std::to_string(i) + "," + std::to_string(k) + ")"};
      return {true, "g_{ik}* = g_{ki}"};
    });
  }
  return ck.take();
}

inline SuiteOutcome suite_tz_star(const PresetData& pd, const RunOptions& opt) {
  Checker ck("tz-star");
  Rng rng = suite_rng(opt, 4);
  for (const auto& [mname, L] : pd.modules) {
    if (opt.module_name && *opt.module_name != mname) continue;
    std::optional<HermitianMetric> m = try_metric(L);
    if (!m) {
      ck.skip(mname + ".antihom", "NotStarCompatible");
      continue;
    }
    TzPtr alg = make_tz_algebra(*m);
    const PresPtr& P = L.pres;
    auto random_graded = [&](int grade) {
      return tz_element(alg, grade,
                        random_homogeneous(P, P->grading.scale(L.g, grade), rng));
    };
    ck.run(mname + ".antihom", [&]() -> std::pair<bool, std::string> {
      int samples = want(opt, 200);
      for (int t = 0; t < samples; ++t) {
        GradedTensorElement x = random_graded(static_cast<int>(rng.range(-2, 2)));
        GradedTensorElement y = random_graded(static_cast<int>(rng.range(-2, 2)));
        if (!(tz_star(tz_product(x, y)) == tz_product(tz_star(y), tz_star(x))))
          return {false, "grades " + std::to_string(x.n) + "," + std::to_string(y.n) +
                             " payload " + element_text(x.payload)};
      }
      return {true, std::to_string(samples) + " graded pairs"};
    });
    ck.run(mname + ".involution", [&]() -> std::pair<bool, std::string> {
      int samples = want(opt, 200);
      for (int t = 0; t < samples; ++t) {
        GradedTensorElement x = random_graded(static_cast<int>(rng.range(-2, 2)));
        if (!(tz_star(tz_star(x)) == x)) return {false, element_text(x.payload)};
      }
      return {true, std::to_string(samples) + " elements"};
    });
    ck.run(mname + ".dual_basis_star", [&]() -> std::pair<bool, std::string> {
      GramData G = gram_matrices(*m);
      const std::size_t n = L.v.size();
      for (std::size_t i = 0; i < n; ++i) {
        GradedTensorElement lhs = tz_star(tz_element(alg, 1, L.v[i]));
        AlgebraElement rhs = el_zero(P);
        for (std::size_t j = 0; j < n; ++j) rhs = rhs + L.w[j] * G.g_upper[j][i];
        if (!(lhs == tz_element(alg, -1, rhs))) return {false, "basis index " + std::to_string(i)};
      }
      return {true, "e^{i*} = e_j g^{ji} on all basis elements"};
    });
  }
  return ck.take();
}

inline SuiteOutcome suite_hopf_galois(const PresetData& pd, const RunOptions& opt) {
  Checker ck("hopf-galois");
  for (const auto& [mname, L] : pd.modules) {
    if (opt.module_name && *opt.module_name != mname) continue;
    ck.run(mname + ".surjectivity", [&]() -> std::pair<bool, std::string> {
      HopfGaloisReport rep = hopf_galois_check(L, 4);
      if (!rep.ok) {
        for (const auto& lvl : rep.levels)
          if (!lvl.pos_ok || !lvl.neg_ok) return {false, "level " + std::to_string(lvl.k)};
        return {false, "no witness"};
      }
      return {true, "witnesses sum to 1 for |k| <= " + std::to_string(rep.max_n)};
    });
  }
  return ck.take();
}

inline SuiteOutcome suite_xi_alpha(const PresetData& pd, const RunOptions& opt) {
  Checker ck("xi-alpha");
  Rng rng = suite_rng(opt, 6);
  for (const auto& [mname, L] : pd.modules) {
    if (opt.module_name && *opt.module_name != mname) continue;
    if (!has_star_on_module(L)) {
      ck.skip(mname, "NoStarOnL");
      continue;
    }
    std::optional<HermitianMetric> m = try_metric(L);
    if (!m) {
      ck.skip(mname, "NotStarCompatible");
      continue;
    }
    TzPtr alg0 = make_tz_algebra(*m);
    XiAlpha xa0 = xi_alpha(alg0);
    HermitianMetric m2 = star_compat_rescale(xa0, *m);
    TzPtr alg = make_tz_algebra(m2);
    XiAlpha xa = xi_alpha(alg);
    const PresPtr& P = L.pres;
    ck.run(mname + ".alpha_is_one", [&]() -> std::pair<bool, std::string> {
      return {xa.alpha == el_one(P), "alpha = " + element_text(xa.alpha)};
    });
    ck.run(mname + ".xi_star", [&]() -> std::pair<bool, std::string> {
      return {tn_star(xa.xi) == xa.xi, "xi payload " + element_text(xa.xi.payload)};
    });
    ck.run(mname + ".xi_central", [&]() -> std::pair<bool, std::string> {
      int samples = want(opt, 100);
      for (int t = 0; t < samples; ++t) {
        GradedTensorElement a =
            tz_element(alg, 0, random_homogeneous(P, P->grading.zero(), rng));
        if (!(tz_product(a, xa.xi) == tz_product(xa.xi, a)))
          return {false, element_text(a.payload)};
      }
      return {true, std::to_string(samples) + " degree-0 elements"};
    });
    auto t0 = std::chrono::steady_clock::now();
    XiReport rep = xi_properties_suite(xa, alg, rng, want(opt, 100));
    double ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    for (const XiCheck& c : rep.checks)
      ck.add(mname + "." + c.id, c.ok, "", ms / rep.checks.size());
  }
  return ck.take();
}

inline SuiteOutcome suite_even_odd(const PresetData& pd, const RunOptions& opt) {
  Checker ck("even-odd");
  Rng rng = suite_rng(opt, 7);
  for (const auto& [mname, L] : pd.modules) {
    if (opt.module_name && *opt.module_name != mname) continue;
    std::optional<HermitianMetric> m = try_metric(L);
    TzPtr alg = m ? make_tz_algebra(*m) : make_tz_algebra(L);
    std::optional<EvenOddAlgebra> EO;
    if (!has_star_on_module(L)) {
      ck.skip(mname + ".witness_pairs", "NoStarOnL");
    } else if (!m) {
      ck.skip(mname + ".witness_pairs", "NotStarCompatible");
    } else {
      try {
        EO = even_odd_algebra(*m);
      } catch (const error& e) {
        ck.skip(mname + ".witness_pairs", errc_name(e.code()));
      }
    }
    if (EO) {
      ck.run(mname + ".witness_pairs", [&]() -> std::pair<bool, std::string> {
        std::vector<WitnessPair> pairs = even_odd_witness(*EO);
        return {true, std::to_string(pairs.size()) + " odd pairs recover the unit"};
      });
      ck.run(mname + ".star_antihom", [&]() -> std::pair<bool, std::string> {
        int samples = want(opt, 50);
        const PresPtr& P = L.pres;
        for (int t = 0; t < samples; ++t) {
          EvenOddElement x = eo_element(*EO, random_homogeneous(P, P->grading.zero(), rng),
                                        random_homogeneous(P, L.g, rng));
          EvenOddElement y = eo_element(*EO, random_homogeneous(P, P->grading.zero(), rng),
                                        random_homogeneous(P, L.g, rng));
          if (!(eo_star(*EO, eo_mul(*EO, x, y)) == eo_mul(*EO, eo_star(*EO, y), eo_star(*EO, x))))
            return {false, element_text(x.even) + " | " + element_text(x.odd)};
        }
        return {true, std::to_string(samples) + " samples"};
      });
    }
    for (int which = 1; which <= 5; ++which) {
      ck.run(mname + ".case_" + std::to_string(which), [&]() -> std::pair<bool, std::string> {
        int shapes = 0;
        for (int n = 0; n <= 3; ++n)
          for (int s = 0; s <= 3; ++s)
            for (int r = 0; r <= 3; ++r) {
              bool fits = false;
              switch (which) {
                case 1: fits = s >= n + r; break;
                case 2: fits = n >= s && r >= s; break;
                case 3: fits = n >= s && s >= r; break;
                case 4: fits = r >= s && s >= n; break;
                case 5: fits = n + r >= s && s >= n && s >= r; break;
              }
              if (!fits) continue;
              ++shapes;
              CaseReport rep = formal_case_check(alg, which, n, s, r, rng, want(opt, 50), 2);
              if (!rep.ok)
                return {false, "shape (" + std::to_string(n) + "," + std::to_string(s) + "," +
                                   std::to_string(r) + "), " +
                                   std::to_string(rep.mismatches) + " mismatches"};
            }
        return {true, std::to_string(shapes) + " shapes"};
      });
    }
  }
  return ck.take();
}

inline SuiteOutcome suite_calculus(const PresetData& pd, const RunOptions& opt) {
  Checker ck("calculus");
  if (!pd.dga) {
    ck.skip("d_squared", "NoCalculusData");
    return ck.take();
  }
  const DgaPtr& D = pd.dga;
  const PresPtr& P = D->base;
  Rng rng = suite_rng(opt, 8);

  std::vector<Word> monos{Word{}};
  {
    const int nf = static_cast<int>(D->oneform_names.size());
    for (std::size_t k = 0; k < monos.size(); ++k) {
      if (monos[k].size() >= 3) continue;
      int lo = monos[k].empty() ? 0 : monos[k].back() + 1;
      for (int f = lo; f < nf; ++f) monos.push_back(monos[k] + static_cast<char>(f));
    }
  }
  auto random_element = [&](int maxlen) {
    AlgebraElement acc = el_zero(P);
    int terms = static_cast<int>(rng.range(1, 3));
    std::size_t ngen = P->generators.size();
    for (int t = 0; t < terms && ngen; ++t) {
      int len = static_cast<int>(rng.range(0, maxlen));
      Word w;
      for (int k = 0; k < len; ++k) w.push_back(static_cast<char>(rng.below(ngen)));
      acc = acc + el_word(P, w, scalar_int(rng.range(-2, 2)) + scalar_q_power(rng.range(-1, 1)));
    }
    return acc;
  };
  auto random_form = [&] {
    Form acc = form_zero(D);
    int terms = static_cast<int>(rng.range(1, 2));
    for (int t = 0; t < terms; ++t)
      acc = acc + form_term(D, random_element(3), monos[rng.below(monos.size())]);
    return acc;
  };

  ck.run("d_squared", [&]() -> std::pair<bool, std::string> {
    int samples = want(opt, 100);
    for (int t = 0; t < samples; ++t) {
      Form w = random_form();
      if (!d_form(d_form(w)).is_zero()) return {false, form_text(w)};
    }
    return {true, std::to_string(samples) + " random forms"};
  });
  ck.run("leibniz_elements", [&]() -> std::pair<bool, std::string> {
    int samples = want(opt, 100);
    for (int t = 0; t < samples; ++t) {
      AlgebraElement x = random_element(3), y = random_element(3);
      Form lhs = d_element(D, x * y);
      Form rhs = right_mult(d_element(D, x), y) + left_mult(x, d_element(D, y));
      if (!(lhs == rhs)) return {false, element_text(x) + " | " + element_text(y)};
    }
    return {true, std::to_string(samples) + " element pairs"};
  });
  ck.run("leibniz_forms", [&]() -> std::pair<bool, std::string> {
    int samples = want(opt, 100);
    for (int t = 0; t < samples; ++t) {
      Word mono = monos[rng.below(monos.size())];
      AlgebraElement c = random_element(2);
      Form w = form_term(D, c, mono);
      Form tow = random_form();
      Form lhs = d_form(wedge(w, tow));
      Form rhs = wedge(d_form(w), tow);
      Form wdt = wedge(w, d_form(tow));
      rhs = (mono.size() % 2 == 1) ? rhs - wdt : rhs + wdt;
      if (!(lhs == rhs)) return {false, form_text(w)};
    }
    return {true, std::to_string(samples) + " monomial pairs"};
  });
  int zero_idx = -1;
  for (std::size_t a = 0; a < D->oneform_degrees.size(); ++a)
    if (D->oneform_degrees[a] == P->grading.reduce(P->grading.zero())) zero_idx = static_cast<int>(a);
  if (zero_idx < 0) {
    ck.skip("zero_form_central", "NoDegreeZeroForm");
  } else {
    ck.run("zero_form_central", [&]() -> std::pair<bool, std::string> {
      int samples = want(opt, 100);
      Form e0 = basis_oneform(D, zero_idx);
      for (int t = 0; t < samples; ++t) {
        AlgebraElement x = random_element(3);
        AlgebraElement x0 = el_zero(P);
        for (const auto& [w, c] : x.terms)
          if (P->word_degree(w) == P->grading.zero()) x0 = x0 + el_word(P, w, c);
        if (!(left_mult(x0, e0) == right_mult(e0, x0))) return {false, element_text(x0)};
      }
      return {true, std::to_string(samples) + " degree-0 elements"};
    });
  }
  return ck.take();
}

inline SuiteOutcome suite_chern(const PresetData& pd, const RunOptions& opt) {
  Checker ck("chern");
  if (!pd.dga) {
    ck.skip("kappa", "NoCalculusData");
    return ck.take();
  }
  const DgaPtr& D = pd.dga;
  std::string mname = opt.module_name.value_or(pd.name == "slq2" ? "calculus" : pd.modules[0].first);
  const LineModuleData* Lp = nullptr;
  for (const auto& [nm, L] : pd.modules)
    if (nm == mname) Lp = &L;
  if (!Lp) {
    ck.skip("kappa", "no module named '" + mname + "'");
    return ck.take();
  }
  const LineModuleData& L = *Lp;

  auto expected = [&](const std::string& id) -> std::optional<Form> {
    if (pd.name == "slq2" && mname == "calculus") {
      if (id == "kappa") return parse_form(D, "e0");
      if (id == "chern") return parse_form(D, "q^3 e+^e-");
    }
    if (pd.name == "slq2" && mname == "metric") {
      if (id == "kappa") return parse_form(D, "-q^-2 e0");
      if (id == "chern") return parse_form(D, "-q e+^e-");
    }
    if (pd.name == "circle" || pd.name == "trivial") return form_zero(D);
    return std::nullopt;
  };

  Form zeta = parse_form(D, opt.zeta_text);
  ConnectionData cd = make_connection(D, L, zeta);

  ck.run("kappa", [&]() -> std::pair<bool, std::string> {
    Form k = kappa(D, L);
    std::optional<Form> exp = expected("kappa");
    bool ok = !exp || k == *exp;
    return {ok, "kappa = " + form_witness(k)};
  });
  ck.run("chern_class", [&]() -> std::pair<bool, std::string> {
    Form w = chern_trace(cd);
    std::optional<Form> exp = zeta.is_zero() ? expected("chern") : std::nullopt;
    bool ok = !exp || w == *exp;
    return {ok, "omega = " + form_witness(w)};
  });
  ck.run("connection_shift_exact", [&]() -> std::pair<bool, std::string> {
    if (zeta.is_zero()) return {true, "zeta = 0"};
    Form diff = chern_trace(cd) - chern_trace(make_connection(D, L, form_zero(D)));
    if (diff.is_zero()) return {true, "shift vanishes"};
    std::optional<Form> tau = in_d_omega1(D, diff, 4);
    if (!tau) return {false, "no primitive of word length <= 4"};
    return {true, "shift = d(" + form_witness(*tau) + ")"};
  });
  std::optional<HermitianMetric> m = try_metric(L);
  if (!m) {
    ck.skip("metric_compatibility", "NotStarCompatible");
  } else if (!zeta.is_zero() && !D->star_basisforms) {
    ck.skip("metric_compatibility", "NoFormStar");
  } else {
    ck.run("metric_compatibility", [&]() -> std::pair<bool, std::string> {
      MetricCompatReport rep = metric_compat_check(cd, *m);
      if (rep.compatible) return {true, "zeta + zeta* = 0"};
      return {false, "defect " + form_witness(rep.defect)};
    });
  }
  return ck.take();
}

inline SuiteOutcome suite_thom(const PresetData& pd, const RunOptions& opt) {
  Checker ck("thom");
  if (!same_presentation(pd.pres, preset_circle())) {
    ck.skip("representation", "CircleOnly");
    return ck.take();
  }
  Rng rng = suite_rng(opt, 10);
  HermitianMetric m = make_hermitian_metric(pd.modules[0].second);
  RepPtr rep = make_numeric_rep(m, 16, opt.q0);
  GridPtr grid = make_grid(opt.window, opt.grid_n);

  std::vector<BLVariant> kinds;
  if (!opt.variant) {
    kinds = {BLVariant::c0, BLVariant::thom, BLVariant::circle_bundle};
  } else if (*opt.variant == "c0") {
    kinds = {BLVariant::c0};
  } else if (*opt.variant == "thom") {
    kinds = {BLVariant::thom};
  } else if (*opt.variant == "circle-bundle") {
    kinds = {BLVariant::circle_bundle};
  } else {
    fail(errc::bad_input, "variant must be c0, thom or circle-bundle");
  }
  auto pick = [&](int t) { return kinds[static_cast<std::size_t>(t) % kinds.size()]; };

  ck.run("representation", [&]() -> std::pair<bool, std::string> {
    bool ok = rep->rule_residual < 1e-12 && rep->star_residual < 1e-12;
    return {ok, "rule residual " + fmt_residual(rep->rule_residual) + ", star residual " +
                    fmt_residual(rep->star_residual)};
  });
  ck.run("associativity", [&]() -> std::pair<bool, std::string> {
    int samples = want(opt, 100);
    double worst = 0.0;
    for (int t = 0; t < samples; ++t) {
      BLFunction f = random_bl(rep, grid, pick(t), rng);
      BLFunction g = random_bl(rep, grid, pick(t + 1), rng);
      BLFunction h = random_bl(rep, grid, pick(t + 2), rng);
      worst = std::max(worst, bl_distance(bl_multiply(bl_multiply(f, g), h),
                                          bl_multiply(f, bl_multiply(g, h))));
    }
    return {worst < 1e-10, std::to_string(samples) + " triples, max residual " +
                               fmt_residual(worst)};
  });
  ck.run("adjoint", [&]() -> std::pair<bool, std::string> {
    int samples = want(opt, 100);
    int funcs = 10;
    int per = samples / funcs > 0 ? samples / funcs : 1;
    double worst = 0.0;
    for (int t = 0; t < funcs; ++t) {
      BLFunction f = random_bl(rep, grid, pick(t), rng);
      AdjointReport r = adjoint_check(f, per, rng);
      worst = std::max(worst, r.max_residual);
    }
    return {worst < 1e-8,
            std::to_string(funcs * per) + " samples, max residual " + fmt_residual(worst)};
  });
  ck.run("norm_bound", [&]() -> std::pair<bool, std::string> {
    int samples = want(opt, 100);
    double worst_ratio = 0.0;
    double constant = 0.0;
    for (int t = 0; t < samples; ++t) {
      BLFunction f = random_bl(rep, grid, pick(t), rng);
      NormBoundReport r = norm_bound_check(f, 15, rng);
      constant = r.constant;
      if (!r.ok) return {false, "estimate " + fmt_residual(r.estimate) + " above bound " +
                                    fmt_residual(r.bound)};
      if (r.bound > 0) worst_ratio = std::max(worst_ratio, r.estimate / r.bound);
    }
    return {true, std::to_string(samples) + " functions, constant " + fmt_residual(constant) +
                      ", max estimate/bound " + fmt_residual(worst_ratio)};
  });
  ck.run("positivity", [&]() -> std::pair<bool, std::string> {
    int samples = want(opt, 100) / 5 + 1;
    double worst = 0.0;
    for (int t = 0; t < samples; ++t)
      worst = std::max(worst, positivity_identity_residual(random_h01(rep, grid, rng)));
    return {worst < 1e-12,
            std::to_string(samples) + " vectors, max residual " + fmt_residual(worst)};
  });
  ck.run("quadrature", [&]() -> std::pair<bool, std::string> {
    GridPtr fine = make_grid(opt.window, 2 * opt.grid_n - 1);
    auto build = [&](const GridPtr& g) {
      H01Vec v = h01_zero(rep, g);
      for (std::size_t gx = 0; gx < g->x.size(); ++gx) {
        double x = g->x[gx];
        double even = std::exp(-x * x / 4.0);
        double odd = std::exp(-(x - 1.0) * (x - 1.0) / 6.0);
        for (std::size_t p = 0; p < rep->n_points; ++p) {
          double ph = static_cast<double>(p + 1) / static_cast<double>(rep->n_points);
          v.v0[gx][p] = even * std::complex<double>(ph, 0.5 - ph);
          v.v1[gx][0][p] = odd * ph;
          v.v1[gx][1][p] = odd * std::complex<double>(0.0, 1.0 - ph);
        }
      }
      return v;
    };
    H01Vec a = build(grid);
    H01Vec b = build(fine);
    double na = h01_inner(a, a).real();
    double nb = h01_inner(b, b).real();
    double diff = std::abs(na - nb);
    return {diff < 1e-6, "refinement shift " + fmt_residual(diff)};
  });
  return ck.take();
}

}  // namespace detail

inline SuiteOutcome run_suite(const std::string& name, const PresetData& pd,
                              const RunOptions& opt) {
  if (name == "confluence") return detail::suite_confluence(pd, opt);
  if (name == "line-axioms") return detail::suite_line_axioms(pd, opt);
  if (name == "gram") return detail::suite_gram(pd, opt);
  if (name == "tz-star") return detail::suite_tz_star(pd, opt);
  if (name == "hopf-galois") return detail::suite_hopf_galois(pd, opt);
  if (name == "xi-alpha") return detail::suite_xi_alpha(pd, opt);
  if (name == "even-odd") return detail::suite_even_odd(pd, opt);
  if (name == "calculus") return detail::suite_calculus(pd, opt);
  if (name == "chern") return detail::suite_chern(pd, opt);
  if (name == "thom") return detail::suite_thom(pd, opt);
  fail(errc::unknown_suite, "no suite named '" + name + "'");
}

inline RunReport run_suites(const PresetData& pd, const std::vector<std::string>& names,
                            const RunOptions& opt) {
  RunReport rep;
  rep.preset = pd.name;
  rep.seed = opt.seed;
  for (const std::string& canonical : suite_names())
    for (const std::string& n : names)
      if (n == canonical) rep.suites.push_back(run_suite(canonical, pd, opt));
  return rep;
}

}  // namespace nclb
