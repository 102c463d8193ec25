#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <memory>
#include <optional>
#include <utility>
#include <vector>

#include "nclb/algebra.hpp"
#include "nclb/hermet.hpp"
#include "nclb/linemod.hpp"
#include "nclb/presets.hpp"
#include "nclb/rng.hpp"

namespace nclb {

// All operators in the circle representation are diagonal, so a matrix is
// stored as its diagonal; the same container holds Hilbert space vectors.
using Diag = std::vector<std::complex<double>>;

namespace detail {

inline Diag diag_mul(const Diag& a, const Diag& b) {
  Diag out(a.size());
  for (std::size_t p = 0; p < a.size(); ++p) out[p] = a[p] * b[p];
  return out;
}

inline Diag diag_conj(const Diag& a) {
  Diag out(a.size());
  for (std::size_t p = 0; p < a.size(); ++p) out[p] = std::conj(a[p]);
  return out;
}

inline void diag_axpy(Diag& acc, const std::complex<double>& s, const Diag& a) {
  for (std::size_t p = 0; p < a.size(); ++p) acc[p] += s * a[p];
}

inline double diag_sup(const Diag& a) {
  double m = 0.0;
  for (const auto& v : a) m = std::max(m, std::abs(v));
  return m;
}

inline double diag_sup_diff(const Diag& a, const Diag& b) {
  double m = 0.0;
  for (std::size_t p = 0; p < a.size(); ++p) m = std::max(m, std::abs(a[p] - b[p]));
  return m;
}

}  // namespace detail

struct NumericRep {
  std::size_t n_points = 0;
  double q0 = 1.0;
  HermitianMetric metric;
  std::vector<Diag> images;       // per generator
  std::vector<Diag> star_images;  // image of the star of each generator
  std::vector<Diag> v_images, w_images, star_v_images;
  Diag z_image, z_inv_image;
  std::vector<std::vector<Diag>> gram;      // <e^i, conj(e^j)> at each point
  std::vector<std::vector<Diag>> r_matrix;  // pointwise Hermitian sqrt of gram
  double rule_residual = 0.0;
  double star_residual = 0.0;
};

using RepPtr = std::shared_ptr<const NumericRep>;

inline Diag eval_element(const NumericRep& rep, const AlgebraElement& el) {
  Diag out(rep.n_points, 0.0);
  for (const auto& [w, s] : el.terms) {
    Diag word(rep.n_points, 1.0);
    for (char g : w) word = detail::diag_mul(word, rep.images[static_cast<unsigned char>(g)]);
    detail::diag_axpy(out, scalar_eval(s, rep.q0), word);
  }
  return out;
}

// Image of star(el) through the representation's star table; for an honest
// representation this coincides with the entrywise conjugate of eval_element.
inline Diag eval_star_element(const NumericRep& rep, const AlgebraElement& el) {
  Diag out(rep.n_points, 0.0);
  for (const auto& [w, s] : el.terms) {
    Diag word(rep.n_points, 1.0);
    for (auto it = w.rbegin(); it != w.rend(); ++it)
      word = detail::diag_mul(word, rep.star_images[static_cast<unsigned char>(*it)]);
    detail::diag_axpy(out, std::conj(scalar_eval(s, rep.q0)), word);
  }
  return out;
}

namespace detail {

// Hermitian square root of a 2x2 positive semidefinite matrix via the
// trace-determinant closed form, applied at one evaluation point.
inline void herm_sqrt_2x2(std::complex<double> a, std::complex<double> b,
                          std::complex<double> bb, std::complex<double> c,
                          std::complex<double> out[2][2]) {
  double tr = a.real() + c.real();
  double det = (a * c - b * bb).real();
  double s = std::sqrt(std::max(det, 0.0));
  double denom2 = std::max(tr + 2.0 * s, 0.0);
  if (denom2 < 1e-300) {
    out[0][0] = out[0][1] = out[1][0] = out[1][1] = 0.0;
    return;
  }
  double denom = std::sqrt(denom2);
  out[0][0] = (a + s) / denom;
  out[0][1] = b / denom;
  out[1][0] = bb / denom;
  out[1][1] = (c + s) / denom;
}

}  // namespace detail

inline RepPtr make_numeric_rep(
    const HermitianMetric& m, std::size_t n_points, double q0 = 1.0, bool strict = true,
    const std::optional<std::vector<AlgebraElement>>& star_override = std::nullopt) {
  const PresPtr& P = m.base.pres;
  if (!same_presentation(P, preset_circle()))
    fail(errc::bad_input, "the numeric representation exists for the circle preset only");
  if (n_points == 0) fail(errc::bad_input, "need at least one evaluation point");
  if (star_override && star_override->size() != P->generators.size())
    fail(errc::bad_input, "star override must cover every generator");

  auto rep = std::make_shared<NumericRep>();
  rep->n_points = n_points;
  rep->q0 = q0;
  rep->metric = m;

  const std::size_t ngen = P->generators.size();
  const int iu = P->generator_index("u");
  const int iv = P->generator_index("u_inv");
  rep->images.assign(ngen, Diag(n_points));
  const double two_pi = 2.0 * std::acos(-1.0);
  for (std::size_t p = 0; p < n_points; ++p) {
    double th = two_pi * static_cast<double>(p) / static_cast<double>(n_points);
    std::complex<double> root(std::cos(th), std::sin(th));
    rep->images[static_cast<std::size_t>(iu)][p] = root;
    rep->images[static_cast<std::size_t>(iv)][p] = std::conj(root);
  }

  rep->star_images.assign(ngen, Diag(n_points, 0.0));
  for (std::size_t g = 0; g < ngen; ++g) {
    const auto eval_terms = [&](auto&& terms) {
      Diag out(n_points, 0.0);
      for (const auto& t : terms) {
        Diag word(n_points, 1.0);
        for (char ch : t.word)
          word = detail::diag_mul(word, rep->images[static_cast<unsigned char>(ch)]);
        detail::diag_axpy(out, scalar_eval(t.coeff, q0), word);
      }
      return out;
    };
    if (star_override) {
      Diag out(n_points, 0.0);
      for (const auto& [w, s] : (*star_override)[g].terms) {
        Diag word(n_points, 1.0);
        for (char ch : w)
          word = detail::diag_mul(word, rep->images[static_cast<unsigned char>(ch)]);
        detail::diag_axpy(out, scalar_eval(s, q0), word);
      }
      rep->star_images[g] = std::move(out);
    } else {
      rep->star_images[g] = eval_terms((*P->star_table)[g]);
    }
  }

  for (const Rule& r : P->rules) {
    Diag lhs(n_points, 1.0);
    for (char ch : r.lhs) lhs = detail::diag_mul(lhs, rep->images[static_cast<unsigned char>(ch)]);
    Diag rhs(n_points, 0.0);
    for (const ElementTerm& t : r.rhs) {
      Diag word(n_points, 1.0);
      for (char ch : t.word)
        word = detail::diag_mul(word, rep->images[static_cast<unsigned char>(ch)]);
      detail::diag_axpy(rhs, scalar_eval(t.coeff, q0), word);
    }
    rep->rule_residual = std::max(rep->rule_residual, detail::diag_sup_diff(lhs, rhs));
  }
  for (std::size_t g = 0; g < ngen; ++g)
    rep->star_residual = std::max(
        rep->star_residual,
        detail::diag_sup_diff(rep->star_images[g], detail::diag_conj(rep->images[g])));
  if (strict && (rep->rule_residual > 1e-12 || rep->star_residual > 1e-12))
    fail(errc::verification_failed, "representation violates the rules or the star");

  const std::size_t n = m.base.v.size();
  for (std::size_t i = 0; i < n; ++i) {
    rep->v_images.push_back(eval_element(*rep, m.base.v[i]));
    rep->w_images.push_back(eval_element(*rep, m.base.w[i]));
    rep->star_v_images.push_back(eval_star_element(*rep, m.base.v[i]));
  }
  rep->z_image = eval_element(*rep, m.z);
  rep->z_inv_image = eval_element(*rep, m.z_inv);

  rep->gram.assign(n, std::vector<Diag>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      rep->gram[i][j] = detail::diag_mul(detail::diag_mul(rep->v_images[i], rep->star_v_images[j]),
                                         rep->z_image);
  if (n == 2) {
    rep->r_matrix.assign(2, std::vector<Diag>(2, Diag(n_points, 0.0)));
    for (std::size_t p = 0; p < n_points; ++p) {
      std::complex<double> r[2][2];
      detail::herm_sqrt_2x2(rep->gram[0][0][p], rep->gram[0][1][p], rep->gram[1][0][p],
                            rep->gram[1][1][p], r);
      for (std::size_t i = 0; i < 2; ++i)
        for (std::size_t j = 0; j < 2; ++j) rep->r_matrix[i][j][p] = r[i][j];
    }
  }
  return rep;
}

struct Grid {
  double X = 0.0;
  std::vector<double> x;
  std::vector<double> weight;
};

using GridPtr = std::shared_ptr<const Grid>;

inline GridPtr make_grid(double X, std::size_t n) {
  if (!(X > 0.0) || n < 2) fail(errc::bad_input, "grid needs X > 0 and at least two points");
  auto g = std::make_shared<Grid>();
  g->X = X;
  double h = 2.0 * X / static_cast<double>(n - 1);
  for (std::size_t k = 0; k < n; ++k) {
    g->x.push_back(-X + h * static_cast<double>(k));
    g->weight.push_back(k == 0 || k == n - 1 ? h / 2.0 : h);
  }
  return g;
}

enum class BLVariant { c0, thom, circle_bundle };

inline const char* bl_variant_name(BLVariant v) {
  switch (v) {
    case BLVariant::c0: return "c0";
    case BLVariant::thom: return "thom";
    case BLVariant::circle_bundle: return "circle-bundle";
  }
  return "?";
}

// A function on the line with values in the represented algebra (even part)
// and in the line module (odd part, stored through its coefficient vectors).
struct BLFunction {
  RepPtr rep;
  GridPtr grid;
  BLVariant variant = BLVariant::c0;
  double support = 0.0;            // odd part vanishes for |x| > support
  std::vector<Diag> f0;            // per grid point
  std::vector<std::vector<Diag>> f1;  // per grid point, per basis index
};

namespace detail {

inline void require_same_frame(const RepPtr& ra, const GridPtr& ga, const RepPtr& rb,
                               const GridPtr& gb) {
  if (ra != rb || ga != gb) fail(errc::grid_mismatch, "operands live on different grids");
}

}  // namespace detail

inline BLFunction bl_zero(RepPtr rep, GridPtr grid, BLVariant variant) {
  BLFunction f;
  f.rep = std::move(rep);
  f.grid = std::move(grid);
  f.variant = variant;
  f.support = 0.0;
  const std::size_t n = f.rep->metric.base.v.size();
  f.f0.assign(f.grid->x.size(), Diag(f.rep->n_points, 0.0));
  f.f1.assign(f.grid->x.size(), std::vector<Diag>(n, Diag(f.rep->n_points, 0.0)));
  return f;
}

inline BLFunction bl_identity(RepPtr rep, GridPtr grid,
                              BLVariant variant = BLVariant::circle_bundle) {
  if (variant == BLVariant::c0)
    fail(errc::bad_input, "the vanishing-at-infinity variant has no identity");
  BLFunction f = bl_zero(std::move(rep), std::move(grid), variant);
  for (auto& d : f.f0) d.assign(d.size(), 1.0);
  return f;
}

// Collapse of the odd part to its module payload at one grid point.
inline Diag bl_payload(const BLFunction& f, std::size_t gx) {
  Diag out(f.rep->n_points, 0.0);
  for (std::size_t i = 0; i < f.f1[gx].size(); ++i)
    for (std::size_t p = 0; p < out.size(); ++p)
      out[p] += f.f1[gx][i][p] * f.rep->v_images[i][p];
  return out;
}

inline BLVariant bl_variant_join(BLVariant a, BLVariant b) {
  return static_cast<BLVariant>(std::max(static_cast<int>(a), static_cast<int>(b)));
}

inline BLFunction bl_multiply(const BLFunction& f, const BLFunction& g) {
  detail::require_same_frame(f.rep, f.grid, g.rep, g.grid);
  BLFunction h = bl_zero(f.rep, f.grid, bl_variant_join(f.variant, g.variant));
  h.support = std::max(f.support, g.support);
  const std::size_t n = f.rep->metric.base.v.size();
  for (std::size_t gx = 0; gx < f.grid->x.size(); ++gx) {
    const double x2 = f.grid->x[gx] * f.grid->x[gx];
    Diag F = bl_payload(f, gx);
    Diag G = bl_payload(g, gx);
    for (std::size_t p = 0; p < f.rep->n_points; ++p)
      h.f0[gx][p] = f.f0[gx][p] * g.f0[gx][p] + x2 * F[p] * G[p] * f.rep->z_image[p];
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t p = 0; p < f.rep->n_points; ++p)
        h.f1[gx][i][p] = f.f0[gx][p] * g.f1[gx][i][p] + f.f1[gx][i][p] * g.f0[gx][p];
  }
  return h;
}

inline BLFunction bl_star(const BLFunction& f) {
  BLFunction h = f;
  for (auto& d : h.f0) d = detail::diag_conj(d);
  for (auto& row : h.f1)
    for (auto& d : row) d = detail::diag_conj(d);
  return h;
}

inline BLFunction bl_scale(const std::complex<double>& s, const BLFunction& f) {
  BLFunction h = f;
  for (auto& d : h.f0)
    for (auto& v : d) v *= s;
  for (auto& row : h.f1)
    for (auto& d : row)
      for (auto& v : d) v *= s;
  return h;
}

// Distance in the sup norm over the grid, with the odd parts compared as
// module payloads and carrying the x weight of the product formula.
inline double bl_distance(const BLFunction& f, const BLFunction& g) {
  detail::require_same_frame(f.rep, f.grid, g.rep, g.grid);
  double m = 0.0;
  for (std::size_t gx = 0; gx < f.grid->x.size(); ++gx) {
    m = std::max(m, detail::diag_sup_diff(f.f0[gx], g.f0[gx]));
    double dx = detail::diag_sup_diff(bl_payload(f, gx), bl_payload(g, gx));
    m = std::max(m, std::abs(f.grid->x[gx]) * dx);
  }
  return m;
}

inline bool bl_shape_ok(const BLFunction& f, double tol = 1e-6) {
  for (std::size_t gx = 0; gx < f.grid->x.size(); ++gx)
    if (std::abs(f.grid->x[gx]) > f.support + 1e-12)
      for (const Diag& d : f.f1[gx])
        if (detail::diag_sup(d) > 0.0) return false;
  const Diag& lo = f.f0.front();
  const Diag& hi = f.f0.back();
  switch (f.variant) {
    case BLVariant::c0:
      return detail::diag_sup(lo) < tol && detail::diag_sup(hi) < tol;
    case BLVariant::thom: {
      if (detail::diag_sup_diff(lo, hi) >= tol) return false;
      for (std::size_t p = 0; p < lo.size(); ++p)
        if (std::abs(lo[p] - lo[0]) >= tol) return false;
      return true;
    }
    case BLVariant::circle_bundle:
      return detail::diag_sup_diff(lo, hi) < tol;
  }
  return false;
}

// Discretized element of the representation space: an even vector function
// plus an odd part stored through basis coefficient vector functions.
struct H01Vec {
  RepPtr rep;
  GridPtr grid;
  std::vector<Diag> v0;
  std::vector<std::vector<Diag>> v1;
};

inline H01Vec h01_zero(RepPtr rep, GridPtr grid) {
  H01Vec v;
  v.rep = std::move(rep);
  v.grid = std::move(grid);
  const std::size_t n = v.rep->metric.base.v.size();
  v.v0.assign(v.grid->x.size(), Diag(v.rep->n_points, 0.0));
  v.v1.assign(v.grid->x.size(), std::vector<Diag>(n, Diag(v.rep->n_points, 0.0)));
  return v;
}

// Odd inner product at one grid point through the Gram matrix; conjugate
// linear in the first argument.
inline std::complex<double> h01_inner1_point(const NumericRep& rep,
                                             const std::vector<Diag>& k,
                                             const std::vector<Diag>& kp) {
  std::complex<double> acc = 0.0;
  for (std::size_t i = 0; i < k.size(); ++i)
    for (std::size_t j = 0; j < k.size(); ++j)
      for (std::size_t p = 0; p < rep.n_points; ++p)
        acc += std::conj(k[i][p]) * rep.gram[i][j][p] * kp[j][p];
  return acc;
}

inline std::complex<double> h01_inner(const H01Vec& u, const H01Vec& v) {
  detail::require_same_frame(u.rep, u.grid, v.rep, v.grid);
  std::complex<double> acc = 0.0;
  for (std::size_t gx = 0; gx < u.grid->x.size(); ++gx) {
    std::complex<double> even = 0.0;
    for (std::size_t p = 0; p < u.rep->n_points; ++p)
      even += std::conj(u.v0[gx][p]) * v.v0[gx][p];
    std::complex<double> odd = h01_inner1_point(*u.rep, u.v1[gx], v.v1[gx]);
    double x2 = u.grid->x[gx] * u.grid->x[gx];
    acc += u.grid->weight[gx] * (even + x2 * odd) / (1.0 + x2);
  }
  return acc;
}

inline double h01_norm(const H01Vec& v) {
  return std::sqrt(std::max(0.0, h01_inner(v, v).real()));
}

inline H01Vec h01_sub(const H01Vec& u, const H01Vec& v) {
  detail::require_same_frame(u.rep, u.grid, v.rep, v.grid);
  H01Vec d = u;
  for (std::size_t gx = 0; gx < u.grid->x.size(); ++gx) {
    for (std::size_t p = 0; p < u.rep->n_points; ++p) d.v0[gx][p] -= v.v0[gx][p];
    for (std::size_t i = 0; i < u.v1[gx].size(); ++i)
      for (std::size_t p = 0; p < u.rep->n_points; ++p) d.v1[gx][i][p] -= v.v1[gx][i][p];
  }
  return d;
}

inline H01Vec h01_scale(const std::complex<double>& s, const H01Vec& v) {
  H01Vec d = v;
  for (auto& d0 : d.v0)
    for (auto& c : d0) c *= s;
  for (auto& row : d.v1)
    for (auto& d1 : row)
      for (auto& c : d1) c *= s;
  return d;
}

inline H01Vec bl_act(const BLFunction& f, const H01Vec& v) {
  detail::require_same_frame(f.rep, f.grid, v.rep, v.grid);
  const NumericRep& rep = *f.rep;
  const std::size_t n = rep.metric.base.v.size();
  H01Vec w = h01_zero(f.rep, f.grid);
  for (std::size_t gx = 0; gx < f.grid->x.size(); ++gx) {
    const double x2 = f.grid->x[gx] * f.grid->x[gx];
    Diag F = bl_payload(f, gx);
    // Even output: action of the even part plus the pairing of the odd
    // part of f with the odd part of v.
    for (std::size_t p = 0; p < rep.n_points; ++p) w.v0[gx][p] = f.f0[gx][p] * v.v0[gx][p];
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t p = 0; p < rep.n_points; ++p)
        w.v0[gx][p] +=
            x2 * F[p] * rep.star_v_images[i][p] * rep.z_image[p] * v.v1[gx][i][p];
    // Odd output: the odd part of f against the even vector, plus the even
    // part of f pushed through the tensor leg.
    Diag collapse(rep.n_points, 0.0);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t p = 0; p < rep.n_points; ++p)
        collapse[p] += std::conj(rep.v_images[i][p]) * v.v1[gx][i][p];
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t p = 0; p < rep.n_points; ++p) {
        std::complex<double> wj = std::conj(rep.w_images[j][p]);
        w.v1[gx][j][p] = F[p] * wj * v.v0[gx][p] + wj * f.f0[gx][p] * collapse[p];
      }
  }
  return w;
}

struct NormBound {
  double f0_sup = 0.0;
  double pair_sup = 0.0;
  double constant = 0.0;
  double bound = 0.0;
};

inline NormBound norm_bound_data(const BLFunction& f) {
  const NumericRep& rep = *f.rep;
  NormBound out;
  double c1 = 0.0;
  for (std::size_t p = 0; p < rep.n_points; ++p) {
    std::complex<double> s = 0.0;
    for (std::size_t j = 0; j < rep.v_images.size(); ++j)
      s += rep.v_images[j][p] * rep.w_images[j][p];
    c1 = std::max(c1, std::abs(s));
  }
  out.constant = std::sqrt(2.0 * std::max(1.0, c1));
  for (std::size_t gx = 0; gx < f.grid->x.size(); ++gx) {
    out.f0_sup = std::max(out.f0_sup, detail::diag_sup(f.f0[gx]));
    Diag F = bl_payload(f, gx);
    double x2 = f.grid->x[gx] * f.grid->x[gx];
    double pf = 0.0, pfs = 0.0;
    for (std::size_t p = 0; p < rep.n_points; ++p) {
      double m2 = std::norm(F[p]) * std::abs(rep.z_image[p]);
      pf = std::max(pf, m2);
      pfs = std::max(pfs, m2);
    }
    out.pair_sup = std::max(out.pair_sup, x2 * (pf + pfs));
  }
  out.bound = out.constant * std::sqrt(out.f0_sup * out.f0_sup + out.pair_sup);
  return out;
}

inline H01Vec random_h01(RepPtr rep, GridPtr grid, Rng& rng) {
  H01Vec v = h01_zero(std::move(rep), std::move(grid));
  auto draw = [&rng] {
    return std::complex<double>(static_cast<double>(rng.range(-8, 8)) / 8.0,
                                static_cast<double>(rng.range(-8, 8)) / 8.0);
  };
  for (auto& d : v.v0)
    for (auto& c : d) c = draw();
  for (auto& row : v.v1)
    for (auto& d : row)
      for (auto& c : d) c = draw();
  return v;
}

namespace detail {

inline double bump(double x, double S) {
  double t = x / S;
  if (std::abs(t) >= 1.0) return 0.0;
  return std::exp(1.0 / (t * t - 1.0));
}

// Integer power of a unit-modulus value; negative powers go through the
// conjugate so no branch cut is involved.
inline std::complex<double> unit_pow(std::complex<double> z, long long k) {
  if (k < 0) {
    z = std::conj(z);
    k = -k;
  }
  std::complex<double> out = 1.0;
  for (; k > 0; --k) out *= z;
  return out;
}

}  // namespace detail

inline BLFunction random_bl(RepPtr rep, GridPtr grid, BLVariant variant, Rng& rng,
                            double support = 0.0) {
  BLFunction f = bl_zero(rep, grid, variant);
  if (support <= 0.0) support = grid->X / 2.0;
  f.support = support;
  auto amp = [&rng] {
    return std::complex<double>(static_cast<double>(rng.range(-8, 8)) / 8.0,
                                static_cast<double>(rng.range(-8, 8)) / 8.0);
  };
  // Even part: smooth localized envelopes times powers of the unitary, plus
  // a constant term for the unital variants.
  const Diag& uimg = rep->images[static_cast<std::size_t>(rep->metric.base.pres->generator_index("u"))];
  std::complex<double> scalar_tail =
      variant == BLVariant::c0 ? std::complex<double>(0.0) : amp();
  for (int k = 0; k < 2; ++k) {
    std::complex<double> a = amp();
    double centre = static_cast<double>(rng.range(-3, 3));
    double width = static_cast<double>(rng.range(1, 3));
    long long upow = rng.range(-2, 2);
    for (std::size_t gx = 0; gx < grid->x.size(); ++gx) {
      double t = (grid->x[gx] - centre) / width;
      // The window vanishes identically at the ends of the grid, so the
      // boundary behaviour is set by the constant tails alone.
      std::complex<double> env = a * std::exp(-t * t) * detail::bump(grid->x[gx], 0.9 * grid->X);
      for (std::size_t p = 0; p < rep->n_points; ++p)
        f.f0[gx][p] += env * detail::unit_pow(uimg[p], upow);
    }
  }
  if (variant != BLVariant::c0)
    for (auto& d : f.f0)
      for (auto& c : d) c += scalar_tail;
  if (variant == BLVariant::circle_bundle) {
    // A u-dependent tail with equal limits at the two ends.
    std::complex<double> a = amp();
    for (std::size_t p = 0; p < rep->n_points; ++p)
      for (std::size_t gx = 0; gx < grid->x.size(); ++gx) f.f0[gx][p] += a * uimg[p];
  }
  // Odd part: compactly supported bumps in each coefficient slot.
  const std::size_t n = rep->metric.base.v.size();
  for (std::size_t i = 0; i < n; ++i) {
    std::complex<double> a = amp();
    long long upow = rng.range(-1, 1);
    for (std::size_t gx = 0; gx < grid->x.size(); ++gx) {
      double env = detail::bump(grid->x[gx], support);
      for (std::size_t p = 0; p < rep->n_points; ++p)
        f.f1[gx][i][p] = a * env * detail::unit_pow(uimg[p], upow);
    }
  }
  return f;
}

struct AdjointReport {
  int samples = 0;
  double tolerance = 0.0;
  double max_residual = 0.0;
  bool ok = false;
};

// Compares <u, f |> v> with <f* |> u, v> on random vectors, scaled by the
// norms of the vectors and the norm bound data of f.
inline AdjointReport adjoint_check(const BLFunction& f, int samples, Rng& rng) {
  AdjointReport out;
  out.samples = samples;
  out.tolerance = 1e-8;
  BLFunction fs = bl_star(f);
  double fnorm = std::max(norm_bound_data(f).bound, 1e-30);
  for (int t = 0; t < samples; ++t) {
    H01Vec u = random_h01(f.rep, f.grid, rng);
    H01Vec v = random_h01(f.rep, f.grid, rng);
    std::complex<double> lhs = h01_inner(u, bl_act(f, v));
    std::complex<double> rhs = h01_inner(bl_act(fs, u), v);
    double scale = std::max(h01_norm(u) * h01_norm(v) * fnorm, 1e-30);
    out.max_residual = std::max(out.max_residual, std::abs(lhs - rhs) / scale);
  }
  out.ok = out.max_residual < out.tolerance;
  return out;
}

inline double norm_estimate(const BLFunction& f, int iterations, Rng& rng) {
  BLFunction fs = bl_star(f);
  H01Vec v = random_h01(f.rep, f.grid, rng);
  double nv = h01_norm(v);
  if (nv < 1e-30) return 0.0;
  v = h01_scale(1.0 / nv, v);
  double lambda = 0.0;
  for (int it = 0; it < iterations; ++it) {
    H01Vec w = bl_act(fs, bl_act(f, v));
    lambda = h01_inner(v, w).real();
    double nw = h01_norm(w);
    if (nw < 1e-30) return 0.0;
    v = h01_scale(1.0 / nw, w);
  }
  return std::sqrt(std::max(lambda, 0.0));
}

struct NormBoundReport {
  double estimate = 0.0;
  double bound = 0.0;
  double constant = 0.0;
  bool ok = false;
};

inline NormBoundReport norm_bound_check(const BLFunction& f, int iterations, Rng& rng) {
  NormBoundReport out;
  NormBound data = norm_bound_data(f);
  out.bound = data.bound;
  out.constant = data.constant;
  out.estimate = norm_estimate(f, iterations, rng);
  out.ok = out.estimate <= out.bound * (1.0 + 1e-9) + 1e-12;
  return out;
}

// Pointwise check of the factorization of the odd inner product through the
// square root of the Gram matrix.
inline double positivity_identity_residual(const H01Vec& v) {
  const NumericRep& rep = *v.rep;
  if (rep.r_matrix.empty()) fail(errc::bad_input, "no square root data on this representation");
  const std::size_t n = rep.metric.base.v.size();
  double worst = 0.0;
  for (std::size_t gx = 0; gx < v.grid->x.size(); ++gx) {
    double lhs = h01_inner1_point(rep, v.v1[gx], v.v1[gx]).real();
    double rhs = 0.0;
    for (std::size_t p2 = 0; p2 < n; ++p2)
      for (std::size_t pt = 0; pt < rep.n_points; ++pt) {
        std::complex<double> s = 0.0;
        for (std::size_t j = 0; j < n; ++j) s += rep.r_matrix[p2][j][pt] * v.v1[gx][j][pt];
        rhs += std::norm(s);
      }
    worst = std::max(worst, std::abs(lhs - rhs));
  }
  return worst;
}

}  // namespace nclb
