#pragma once

#include <algorithm>
#include <cstddef>
#include <map>
#include <optional>
#include <tuple>
#include <utility>
#include <vector>

#include "nclb/algebra.hpp"
#include "nclb/linemod.hpp"
#include "nclb/linsolve.hpp"

namespace nclb {

using ElementMatrix = std::vector<std::vector<AlgebraElement>>;

struct HermitianMetric {
  LineModuleData base;
  AlgebraElement z;      // central Hermitian invertible rescale factor
  AlgebraElement z_inv;  // verified two-sided inverse of z
};

struct GramData {
  ElementMatrix g_upper;
  ElementMatrix g_lower;
  std::optional<ElementMatrix> r;  // Hermitian factor with r.r = g_upper
};

namespace detail {

inline std::size_t longest_word(const AlgebraElement& e) {
  std::size_t n = 0;
  for (const auto& [w, c] : e.terms) n = std::max(n, w.size());
  return n;
}

inline std::size_t module_word_bound(const LineModuleData& L, const AlgebraElement& z) {
  std::size_t m = 2;
  for (const auto& e : L.v) m = std::max(m, longest_word(e));
  for (const auto& e : L.w) m = std::max(m, longest_word(e));
  for (const auto& [c, cp] : L.cc) m = std::max({m, longest_word(c), longest_word(cp)});
  if (L.ccc)
    for (const auto& [c2, c3] : *L.ccc) m = std::max({m, longest_word(c2), longest_word(c3)});
  m = std::max(m, longest_word(z));
  return 2 * m;
}

// Solves sum_t x_t (z . t) = rhs for x over the given word basis; returns
// the element sum x_t t, or nothing.  left=false solves sum_t x_t (t . z).
inline std::optional<AlgebraElement> solve_one_sided(const PresPtr& P, const AlgebraElement& z,
                                                     const AlgebraElement& rhs,
                                                     const std::vector<Word>& basis, bool left) {
  LinearSystem sys;
  sys.ncols = basis.size();
  std::map<Word, std::size_t> row_of;
  std::vector<std::vector<Scalar>> cols(basis.size());
  auto row_index = [&](const Word& w) {
    auto [it, fresh] = row_of.try_emplace(w, row_of.size());
    return it->second;
  };
  for (std::size_t t = 0; t < basis.size(); ++t) {
    AlgebraElement prod = left ? el_word(P, basis[t]) * z : z * el_word(P, basis[t]);
    for (const auto& [w, c] : prod.terms) {
      std::size_t r = row_index(w);
      if (cols[t].size() <= r) cols[t].resize(r + 1, scalar_zero());
      cols[t][r] = c;
    }
  }
  for (const auto& [w, c] : rhs.terms) row_index(w);
  const std::size_t nrows = row_of.size();
  sys.rows.assign(nrows, std::vector<Scalar>(basis.size(), scalar_zero()));
  sys.rhs.assign(nrows, scalar_zero());
  for (std::size_t t = 0; t < basis.size(); ++t)
    for (std::size_t r = 0; r < cols[t].size(); ++r) sys.rows[r][t] = cols[t][r];
  for (const auto& [w, c] : rhs.terms) sys.rhs[row_of[w]] = c;
  auto x = solve_linear(std::move(sys));
  if (!x) return std::nullopt;
  std::vector<std::pair<Word, Scalar>> raw;
  for (std::size_t t = 0; t < basis.size(); ++t)
    if (!(*x)[t].is_zero()) raw.emplace_back(basis[t], (*x)[t]);
  return make_element(P, std::move(raw));
}

}  // namespace detail

// Two-sided inverse of a degree-0 element, searched among normal forms of
// bounded word length.
inline AlgebraElement bounded_inverse(const PresPtr& P, const AlgebraElement& z,
                                      std::size_t maxlen) {
  if (z.is_zero()) fail(errc::not_invertible, "zero has no inverse");
  std::vector<Word> basis = normal_words_of_degree(P, P->grading.zero(), maxlen);
  auto inv = detail::solve_one_sided(P, z, el_one(P), basis, true);
  if (!inv || z * *inv != el_one(P) || *inv * z != el_one(P))
    fail(errc::not_invertible, "no inverse of bounded word length");
  return *inv;
}

inline HermitianMetric make_hermitian_metric(LineModuleData base,
                                             std::optional<AlgebraElement> rescale = std::nullopt) {
  for (std::size_t i = 0; i < base.v.size(); ++i) {
    if (star(base.w[i]) != base.v[i])
      fail(errc::not_star_compatible, "star of the w vector must reproduce v");
  }
  AlgebraElement z = rescale ? std::move(*rescale) : el_one(base.pres);
  if (!same_presentation(z.pres, base.pres))
    fail(errc::mixed_presentation, "rescale factor from a different presentation");
  if (!is_homogeneous_of(z, base.pres->grading.zero()))
    fail(errc::bad_degrees, "rescale factor must have degree 0");
  if (!is_central(z)) fail(errc::not_central, "rescale factor must be central");
  if (star(z) != z) fail(errc::not_hermitian, "rescale factor must be Hermitian");
  AlgebraElement z_inv = bounded_inverse(base.pres, z, detail::module_word_bound(base, z));
  return {std::move(base), std::move(z), std::move(z_inv)};
}

inline AlgebraElement inner(const HermitianMetric& m, const ModuleElement& e,
                            const ModuleElement& f) {
  detail::require_member(m.base, e, ModuleElement::Side::L);
  detail::require_member(m.base, f, ModuleElement::Side::L);
  return e.payload * star(f.payload) * m.z;
}

inline HermitianMetric rescale_metric(const HermitianMetric& m, const AlgebraElement& z) {
  return make_hermitian_metric(m.base, m.z * z);
}

namespace detail {

inline std::optional<Rat> exact_sqrt(const Rat& x) {
  using BigInt = boost::multiprecision::cpp_int;
  if (x < 0) return std::nullopt;
  auto root = [](const BigInt& n) -> std::optional<BigInt> {
    BigInt r = boost::multiprecision::sqrt(n);
    if (r * r == n) return r;
    return std::nullopt;
  };
  auto rn = root(boost::multiprecision::numerator(x));
  auto rd = root(boost::multiprecision::denominator(x));
  if (!rn || !rd) return std::nullopt;
  return Rat(*rn, *rd);
}

}  // namespace detail

inline GramData gram_matrices(const HermitianMetric& m) {
  const LineModuleData& L = m.base;
  const PresPtr& P = L.pres;
  const std::size_t n = L.v.size();
  GramData G;

  G.g_upper.assign(n, std::vector<AlgebraElement>(n, el_zero(P)));
  ElementMatrix Pm(n, std::vector<AlgebraElement>(n, el_zero(P)));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      Pm[i][j] = L.v[i] * L.w[j];
      G.g_upper[i][j] = L.v[i] * star(L.v[j]) * m.z;
    }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (star(G.g_upper[i][j]) != G.g_upper[j][i])
        fail(errc::verification_failed, "upper Gram matrix is not Hermitian");

  // Unknowns: coefficients of each g_lower entry over the bounded basis of
  // degree-0 irreducible words.  Equations: both pairing identities plus
  // the normalization against the projection matrix.
  std::vector<Word> basis =
      normal_words_of_degree(P, P->grading.zero(), detail::module_word_bound(L, m.z));
  const std::size_t nb = basis.size();
  auto col = [&](std::size_t i, std::size_t k, std::size_t t) { return (i * n + k) * nb + t; };

  LinearSystem sys;
  sys.ncols = n * n * nb;
  std::map<std::tuple<int, std::size_t, std::size_t, Word>, std::size_t> row_of;
  std::vector<std::map<std::size_t, Scalar>> rows;
  std::vector<Scalar> rhs;
  auto row_index = [&](int kind, std::size_t i, std::size_t k, const Word& w) {
    auto [it, fresh] = row_of.try_emplace(std::make_tuple(kind, i, k, w), rows.size());
    if (fresh) {
      rows.emplace_back();
      rhs.push_back(scalar_zero());
    }
    return it->second;
  };

  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < n; ++k) {
      // (a)  sum_j g^{ij} X_{jk} = P_{ik}
      for (std::size_t j = 0; j < n; ++j)
        for (std::size_t t = 0; t < nb; ++t) {
          AlgebraElement prod = G.g_upper[i][j] * el_word(P, basis[t]);
          for (const auto& [w, c] : prod.terms) {
            auto r = row_index(0, i, k, w);
            rows[r][col(j, k, t)] = rows[r][col(j, k, t)] + c;
          }
        }
      for (const auto& [w, c] : Pm[i][k].terms) rhs[row_index(0, i, k, w)] = c;

      // (b)  sum_j X_{ij} g^{jk} = (P_{ki})*
      for (std::size_t j = 0; j < n; ++j)
        for (std::size_t t = 0; t < nb; ++t) {
          AlgebraElement prod = el_word(P, basis[t]) * G.g_upper[j][k];
          for (const auto& [w, c] : prod.terms) {
            auto r = row_index(1, i, k, w);
            rows[r][col(i, j, t)] = rows[r][col(i, j, t)] + c;
          }
        }
      {
        AlgebraElement want = star(Pm[k][i]);
        for (const auto& [w, c] : want.terms) rhs[row_index(1, i, k, w)] = c;
      }

      // (norm)  sum_j X_{ij} P_{jk} = X_{ik}
      for (std::size_t j = 0; j < n; ++j)
        for (std::size_t t = 0; t < nb; ++t) {
          AlgebraElement prod = el_word(P, basis[t]) * Pm[j][k];
          for (const auto& [w, c] : prod.terms) {
            auto r = row_index(2, i, k, w);
            rows[r][col(i, j, t)] = rows[r][col(i, j, t)] + c;
          }
        }
      for (std::size_t t = 0; t < nb; ++t) {
        auto r = row_index(2, i, k, basis[t]);
        rows[r][col(i, k, t)] = rows[r][col(i, k, t)] - scalar_one();
      }
    }
  }

  sys.rows.assign(rows.size(), std::vector<Scalar>(sys.ncols, scalar_zero()));
  sys.rhs = rhs;
  for (std::size_t r = 0; r < rows.size(); ++r)
    for (const auto& [c, v] : rows[r]) sys.rows[r][c] = v;
  auto x = solve_linear(std::move(sys));
  if (!x) fail(errc::singular_gram, "no lower Gram matrix satisfies the pairing identities");

  G.g_lower.assign(n, std::vector<AlgebraElement>(n, el_zero(P)));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < n; ++k) {
      std::vector<std::pair<Word, Scalar>> raw;
      for (std::size_t t = 0; t < nb; ++t)
        if (!(*x)[col(i, k, t)].is_zero()) raw.emplace_back(basis[t], (*x)[col(i, k, t)]);
      G.g_lower[i][k] = make_element(P, std::move(raw));
    }

  // Assert the pairing identities and Hermitian symmetry exactly.
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < n; ++k) {
      AlgebraElement acc_a = el_zero(P), acc_b = el_zero(P);
      for (std::size_t j = 0; j < n; ++j) {
        acc_a = acc_a + G.g_upper[i][j] * G.g_lower[j][k];
        acc_b = acc_b + G.g_lower[i][j] * G.g_upper[j][k];
      }
      if (acc_a != Pm[i][k]) fail(errc::verification_failed, "pairing identity (a) failed");
      if (acc_b != star(Pm[k][i])) fail(errc::verification_failed, "pairing identity (b) failed");
      if (star(G.g_lower[i][k]) != G.g_lower[k][i])
        fail(errc::verification_failed, "lower Gram matrix is not Hermitian");
    }

  // Hermitian square root, available when the rescale factor is a scalar
  // with an exact rational square root: r = P.sqrt(z) and r.r = P^2 z.
  if (m.z.terms.size() <= 1) {
    bool scalar_z = m.z.terms.empty() || m.z.terms.begin()->first.empty();
    if (scalar_z && !m.z.terms.empty()) {
      Scalar lam = m.z.terms.begin()->second;
      if (poly_deg(lam.num) == 0 && poly_deg(lam.den) == 0) {
        GaussRat val = lam.num[0] / lam.den[0];
        if (val.im == 0) {
          if (auto s = detail::exact_sqrt(val.re)) {
            ElementMatrix r(n, std::vector<AlgebraElement>(n, el_zero(P)));
            for (std::size_t i = 0; i < n; ++i)
              for (std::size_t j = 0; j < n; ++j)
                r[i][j] = el_scale(scalar_gauss(GaussRat{*s, Rat(0)}), Pm[i][j]);
            G.r = std::move(r);
          }
        }
      }
    }
  }
  if (G.r) {
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t k = 0; k < n; ++k) {
        AlgebraElement acc = el_zero(P);
        for (std::size_t j = 0; j < n; ++j) acc = acc + (*G.r)[i][j] * (*G.r)[j][k];
        if (acc != G.g_upper[i][k])
          fail(errc::verification_failed, "square-root factor does not reproduce the Gram matrix");
        if (star((*G.r)[i][k]) != (*G.r)[k][i])
          fail(errc::verification_failed, "square-root factor is not Hermitian");
      }
  }
  return G;
}

// Obstruction to a bimodule map L -> conj(L) described on the dual basis by
// a degree-0 coefficient matrix: the composite with its conjugate must be
// right multiplication by a central z with Phi_L(z*) = z.
inline AlgebraElement star_obstruction(const ElementMatrix& theta, const HermitianMetric& m) {
  const LineModuleData& L = m.base;
  const PresPtr& P = L.pres;
  const std::size_t n = L.v.size();
  if (theta.size() != n) fail(errc::bad_input, "coefficient matrix size mismatch");
  for (const auto& row : theta) {
    if (row.size() != n) fail(errc::bad_input, "coefficient matrix size mismatch");
    for (const auto& e : row)
      if (!is_homogeneous_of(e, P->grading.zero()))
        fail(errc::bad_degrees, "coefficient matrix entries must have degree 0");
  }

  AlgebraElement M = el_zero(P);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) M = M + L.v[j] * star(theta[i][j]) * L.v[i];

  // Right linearity of the candidate is commutation of M with the whole
  // algebra; checking the generators decides it.
  if (!is_central(M)) fail(errc::not_bimodule_map, "candidate fails right linearity");

  // Solve e.z = M e M* on the dual basis payloads.
  std::size_t bound = detail::module_word_bound(L, m.z);
  std::vector<Word> basis = normal_words_of_degree(P, P->grading.zero(), bound);
  LinearSystem sys;
  const std::size_t nb = basis.size();
  sys.ncols = nb;
  std::map<std::pair<std::size_t, Word>, std::size_t> row_of;
  std::vector<std::map<std::size_t, Scalar>> rows;
  std::vector<Scalar> rhs;
  auto row_index = [&](std::size_t i, const Word& w) {
    auto [it, fresh] = row_of.try_emplace({i, w}, rows.size());
    if (fresh) {
      rows.emplace_back();
      rhs.push_back(scalar_zero());
    }
    return it->second;
  };
  AlgebraElement Mstar = star(M);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t t = 0; t < nb; ++t) {
      AlgebraElement prod = L.v[i] * el_word(P, basis[t]);
      for (const auto& [w, c] : prod.terms) {
        auto r = row_index(i, w);
        rows[r][t] = rows[r][t] + c;
      }
    }
    AlgebraElement want = M * L.v[i] * Mstar;
    for (const auto& [w, c] : want.terms) rhs[row_index(i, w)] = c;
  }
  sys.rows.assign(rows.size(), std::vector<Scalar>(nb, scalar_zero()));
  sys.rhs = rhs;
  for (std::size_t r = 0; r < rows.size(); ++r)
    for (const auto& [c, v] : rows[r]) sys.rows[r][c] = v;
  auto x = solve_linear(std::move(sys));
  if (!x) fail(errc::no_solution, "composite is not right multiplication at bounded degree");
  std::vector<std::pair<Word, Scalar>> raw;
  for (std::size_t t = 0; t < nb; ++t)
    if (!(*x)[t].is_zero()) raw.emplace_back(basis[t], (*x)[t]);
  AlgebraElement z = make_element(P, std::move(raw));

  if (!is_central(z)) fail(errc::no_solution, "obstruction element is not central");
  if (phi_centre(L, star(z)) != z)
    fail(errc::verification_failed, "obstruction element fails the centre-map relation");
  return z;
}

}  // namespace nclb
