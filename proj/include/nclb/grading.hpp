#pragma once

#include <cstddef>
#include <vector>

#include "nclb/errors.hpp"

namespace nclb {

// Finitely generated abelian grading group: a product of Z and Z/m factors.
// Elements are integer vectors, reduced componentwise into [0, m) for each
// finite factor.
struct GradingGroup {
  std::vector<int> mods;  // 0 for a Z factor, m > 0 for Z/m

  using Elem = std::vector<int>;

  std::size_t rank() const { return mods.size(); }

  Elem reduce(Elem e) const {
    if (e.size() != mods.size()) fail(errc::bad_input, "grading element has wrong rank");
    for (std::size_t k = 0; k < e.size(); ++k) {
      if (mods[k] > 0) {
        e[k] %= mods[k];
        if (e[k] < 0) e[k] += mods[k];
      }
    }
    return e;
  }

  Elem zero() const { return Elem(mods.size(), 0); }

  bool is_zero(const Elem& e) const { return e == zero(); }

  Elem add(const Elem& a, const Elem& b) const {
    Elem r = a;
    for (std::size_t k = 0; k < r.size(); ++k) r[k] += b.at(k);
    return reduce(std::move(r));
  }

  Elem neg(const Elem& a) const {
    Elem r = a;
    for (auto& x : r) x = -x;
    return reduce(std::move(r));
  }

  Elem sub(const Elem& a, const Elem& b) const { return add(a, neg(b)); }

  Elem scale(const Elem& a, long long n) const {
    Elem r = a;
    for (auto& x : r) x = static_cast<int>(n * x);
    return reduce(std::move(r));
  }

  friend bool operator==(const GradingGroup&, const GradingGroup&) = default;
};

}  // namespace nclb
