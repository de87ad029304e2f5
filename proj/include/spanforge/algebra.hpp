#pragma once

#include <map>

#include "spanforge/core.hpp"

namespace spanforge {

/// A finite commutative monoid given by its addition table.
struct CommMonoid {
  int size = 0;
  int unit = 0;
  std::vector<std::vector<int>> add;

  int op(int a, int b) const { return add[static_cast<size_t>(a)][static_cast<size_t>(b)]; }

  bool valid() const {
    if (size <= 0 || unit < 0 || unit >= size) return false;
    if (static_cast<int>(add.size()) != size) return false;
    for (const auto& row : add) {
      if (static_cast<int>(row.size()) != size) return false;
      for (int v : row)
        if (v < 0 || v >= size) return false;
    }
    for (int a = 0; a < size; ++a) {
      if (op(unit, a) != a || op(a, unit) != a) return false;
      for (int b = 0; b < size; ++b) {
        if (op(a, b) != op(b, a)) return false;
        for (int c = 0; c < size; ++c)
          if (op(op(a, b), c) != op(a, op(b, c))) return false;
      }
    }
    return true;
  }

  bool is_group() const {
    for (int a = 0; a < size; ++a) {
      bool inv = false;
      for (int b = 0; b < size; ++b)
        if (op(a, b) == unit) inv = true;
      if (!inv) return false;
    }
    return true;
  }
};

inline bool operator==(const CommMonoid& a, const CommMonoid& b) {
  return a.size == b.size && a.unit == b.unit && a.add == b.add;
}

inline CommMonoid trivial_monoid() { return CommMonoid{1, 0, {{0}}}; }

inline CommMonoid cyclic_group(int n) {
  CommMonoid m;
  m.size = n;
  m.unit = 0;
  m.add.assign(static_cast<size_t>(n), std::vector<int>(static_cast<size_t>(n)));
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) m.add[static_cast<size_t>(a)][static_cast<size_t>(b)] = (a + b) % n;
  return m;
}

/// Natural numbers truncated at cap with saturating addition.
inline CommMonoid saturating_naturals(int cap) {
  CommMonoid m;
  m.size = cap + 1;
  m.unit = 0;
  m.add.assign(static_cast<size_t>(m.size), std::vector<int>(static_cast<size_t>(m.size)));
  for (int a = 0; a <= cap; ++a)
    for (int b = 0; b <= cap; ++b)
      m.add[static_cast<size_t>(a)][static_cast<size_t>(b)] = std::min(a + b, cap);
  return m;
}

/// Enumerates every commutative monoid table on 0..n-1 with unit 0.
template <typename Fn>
void for_each_comm_monoid(int n, Fn&& fn) {
  // free entries: a+b for 1 <= a <= b <= n-1
  std::vector<std::pair<int, int>> cells;
  for (int a = 1; a < n; ++a)
    for (int b = a; b < n; ++b) cells.emplace_back(a, b);
  CommMonoid m;
  m.size = n;
  m.unit = 0;
  m.add.assign(static_cast<size_t>(n), std::vector<int>(static_cast<size_t>(n)));
  for (int a = 0; a < n; ++a) {
    m.add[0][static_cast<size_t>(a)] = a;
    m.add[static_cast<size_t>(a)][0] = a;
  }
  std::vector<int> choice(cells.size(), 0);
  while (true) {
    for (size_t i = 0; i < cells.size(); ++i) {
      auto [a, b] = cells[i];
      m.add[static_cast<size_t>(a)][static_cast<size_t>(b)] = choice[i];
      m.add[static_cast<size_t>(b)][static_cast<size_t>(a)] = choice[i];
    }
    bool assoc = true;
    for (int a = 1; a < n && assoc; ++a)
      for (int b = 1; b < n && assoc; ++b)
        for (int c = 1; c < n && assoc; ++c)
          if (m.op(m.op(a, b), c) != m.op(a, m.op(b, c))) assoc = false;
    if (assoc) fn(m);
    size_t i = choice.size();
    bool advanced = false;
    while (i-- > 0) {
      if (choice[i] + 1 < n) {
        ++choice[i];
        std::fill(choice.begin() + static_cast<long>(i) + 1, choice.end(), 0);
        advanced = true;
        break;
      }
    }
    if (!advanced) break;
  }
}

/// Commutative monoids of order <= nmax, one representative per isomorphism
/// class (canonical = lexicographically least table among relabelings fixing
/// the unit).
inline std::vector<CommMonoid> comm_monoid_reps(int nmax) {
  std::vector<CommMonoid> reps;
  for (int n = 1; n <= nmax; ++n) {
    std::vector<std::vector<std::vector<int>>> seen;
    for_each_comm_monoid(n, [&](const CommMonoid& m) {
      // canonical form under permutations fixing 0
      std::vector<std::vector<int>> best = m.add;
      std::vector<int> perm(static_cast<size_t>(n));
      std::iota(perm.begin(), perm.end(), 0);
      do {
        if (perm[0] != 0) continue;
        std::vector<std::vector<int>> t(static_cast<size_t>(n),
                                        std::vector<int>(static_cast<size_t>(n)));
        std::vector<int> inv(static_cast<size_t>(n));
        for (int i = 0; i < n; ++i) inv[static_cast<size_t>(perm[static_cast<size_t>(i)])] = i;
        for (int a = 0; a < n; ++a)
          for (int b = 0; b < n; ++b)
            t[static_cast<size_t>(a)][static_cast<size_t>(b)] = inv[static_cast<size_t>(
                m.add[static_cast<size_t>(perm[static_cast<size_t>(a)])]
                     [static_cast<size_t>(perm[static_cast<size_t>(b)])])];
        if (t < best) best = t;
      } while (std::next_permutation(perm.begin(), perm.end()));
      if (std::find(seen.begin(), seen.end(), best) == seen.end()) {
        seen.push_back(best);
        reps.push_back(CommMonoid{n, 0, best});
      }
    });
  }
  return reps;
}

/// A finite commutative semiring: two commutative monoid tables sharing a
/// carrier, with multiplication distributing over addition and absorbing 0.
struct CommSemiring {
  int size = 0;
  int zero = 0;
  int one = 0;
  std::vector<std::vector<int>> add;
  std::vector<std::vector<int>> mul;

  int plus(int a, int b) const { return add[static_cast<size_t>(a)][static_cast<size_t>(b)]; }
  int times(int a, int b) const { return mul[static_cast<size_t>(a)][static_cast<size_t>(b)]; }

  CommMonoid additive() const { return CommMonoid{size, zero, add}; }
  CommMonoid multiplicative() const { return CommMonoid{size, one, mul}; }

  bool valid() const {
    if (!additive().valid() || !multiplicative().valid()) return false;
    for (int a = 0; a < size; ++a) {
      if (times(zero, a) != zero) return false;
      for (int b = 0; b < size; ++b)
        for (int c = 0; c < size; ++c)
          if (times(a, plus(b, c)) != plus(times(a, b), times(a, c))) return false;
    }
    return true;
  }
};

inline CommSemiring boolean_semiring() {
  return CommSemiring{2, 0, 1, {{0, 1}, {1, 1}}, {{0, 0}, {0, 1}}};
}

inline CommSemiring naturals_mod(int n) {
  CommSemiring s;
  s.size = n;
  s.zero = 0;
  s.one = 1 % n;
  s.add.assign(static_cast<size_t>(n), std::vector<int>(static_cast<size_t>(n)));
  s.mul = s.add;
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      s.add[static_cast<size_t>(a)][static_cast<size_t>(b)] = (a + b) % n;
      s.mul[static_cast<size_t>(a)][static_cast<size_t>(b)] = (a * b) % n;
    }
  return s;
}

/// Naturals saturating at cap under both operations.
inline CommSemiring saturating_semiring(int cap) {
  CommSemiring s;
  s.size = cap + 1;
  s.zero = 0;
  s.one = std::min(1, cap);
  s.add.assign(static_cast<size_t>(s.size), std::vector<int>(static_cast<size_t>(s.size)));
  s.mul = s.add;
  for (int a = 0; a <= cap; ++a)
    for (int b = 0; b <= cap; ++b) {
      s.add[static_cast<size_t>(a)][static_cast<size_t>(b)] = std::min(a + b, cap);
      s.mul[static_cast<size_t>(a)][static_cast<size_t>(b)] = std::min(a * b, cap);
    }
  return s;
}

/// min-plus semiring on {0..cap} with cap acting as infinity.
inline CommSemiring tropical_min(int cap) {
  CommSemiring s;
  s.size = cap + 1;
  s.zero = cap;  // additive unit of min
  s.one = 0;     // multiplicative unit of +
  s.add.assign(static_cast<size_t>(s.size), std::vector<int>(static_cast<size_t>(s.size)));
  s.mul = s.add;
  for (int a = 0; a <= cap; ++a)
    for (int b = 0; b <= cap; ++b) {
      s.add[static_cast<size_t>(a)][static_cast<size_t>(b)] = std::min(a, b);
      s.mul[static_cast<size_t>(a)][static_cast<size_t>(b)] = std::min(a + b, cap);
    }
  return s;
}

/// Semirings of order <= nmax up to isomorphism.
inline std::vector<CommSemiring> comm_semiring_reps(int nmax) {
  std::vector<CommSemiring> reps;
  for (int n = 1; n <= nmax; ++n) {
    std::vector<std::pair<std::vector<std::vector<int>>, std::vector<std::vector<int>>>> seen;
    for_each_comm_monoid(n, [&](const CommMonoid& addm) {
      // try every choice of multiplication table (commutative, unit somewhere)
      for (int one = 0; one < n; ++one) {
        std::vector<std::pair<int, int>> cells;
        for (int a = 0; a < n; ++a)
          for (int b = a; b < n; ++b) cells.emplace_back(a, b);
        std::vector<int> choice(cells.size(), 0);
        while (true) {
          CommSemiring s;
          s.size = n;
          s.zero = addm.unit;
          s.one = one;
          s.add = addm.add;
          s.mul.assign(static_cast<size_t>(n), std::vector<int>(static_cast<size_t>(n)));
          for (size_t i = 0; i < cells.size(); ++i) {
            auto [a, b] = cells[i];
            s.mul[static_cast<size_t>(a)][static_cast<size_t>(b)] = choice[i];
            s.mul[static_cast<size_t>(b)][static_cast<size_t>(a)] = choice[i];
          }
          if (s.valid()) {
            // canonicalize under all permutations
            auto key = std::make_pair(s.add, s.mul);
            std::vector<int> perm(static_cast<size_t>(n));
            std::iota(perm.begin(), perm.end(), 0);
            do {
              std::vector<int> inv(static_cast<size_t>(n));
              for (int i = 0; i < n; ++i) inv[static_cast<size_t>(perm[static_cast<size_t>(i)])] = i;
              auto relab = [&](const std::vector<std::vector<int>>& t) {
                std::vector<std::vector<int>> r(static_cast<size_t>(n),
                                                std::vector<int>(static_cast<size_t>(n)));
                for (int a = 0; a < n; ++a)
                  for (int b = 0; b < n; ++b)
                    r[static_cast<size_t>(a)][static_cast<size_t>(b)] = inv[static_cast<size_t>(
                        t[static_cast<size_t>(perm[static_cast<size_t>(a)])]
                         [static_cast<size_t>(perm[static_cast<size_t>(b)])])];
                return r;
              };
              if (inv[static_cast<size_t>(addm.unit)] != addm.unit) continue;
              auto cand = std::make_pair(relab(s.add), relab(s.mul));
              if (cand < key) key = cand;
            } while (std::next_permutation(perm.begin(), perm.end()));
            if (std::find(seen.begin(), seen.end(), key) == seen.end()) {
              seen.push_back(key);
              CommSemiring rep;
              rep.size = n;
              rep.add = key.first;
              rep.mul = key.second;
              // recover units from the canonical tables
              for (int u = 0; u < n; ++u) {
                bool zu = true, ou = true;
                for (int a = 0; a < n; ++a) {
                  if (rep.add[static_cast<size_t>(u)][static_cast<size_t>(a)] != a) zu = false;
                  if (rep.mul[static_cast<size_t>(u)][static_cast<size_t>(a)] != a) ou = false;
                }
                if (zu) rep.zero = u;
                if (ou) rep.one = u;
              }
              reps.push_back(rep);
            }
          }
          size_t i = choice.size();
          bool advanced = false;
          while (i-- > 0) {
            if (choice[i] + 1 < n) {
              ++choice[i];
              std::fill(choice.begin() + static_cast<long>(i) + 1, choice.end(), 0);
              advanced = true;
              break;
            }
          }
          if (!advanced) break;
        }
      }
    });
  }
  return reps;
}

// ---------------------------------------------------------------------------
// Free commutative structures on named variables, for exact symbolic checks.
// ---------------------------------------------------------------------------

/// A monomial: exponent vector over a fixed variable list.
using Mono = std::vector<int>;

/// An element of the free commutative semiring on n variables: a multiset of
/// monomials (polynomial with natural coefficients).
struct Poly {
  std::map<Mono, long> terms;

  static Poly zero() { return Poly{}; }
  static Poly one(int nvars) {
    Poly p;
    p.terms[Mono(static_cast<size_t>(nvars), 0)] = 1;
    return p;
  }
  static Poly var(int i, int nvars) {
    Poly p;
    Mono m(static_cast<size_t>(nvars), 0);
    m[static_cast<size_t>(i)] = 1;
    p.terms[m] = 1;
    return p;
  }

  friend Poly operator+(const Poly& a, const Poly& b) {
    Poly r = a;
    for (const auto& [m, c] : b.terms) {
      r.terms[m] += c;
      if (r.terms[m] == 0) r.terms.erase(m);
    }
    return r;
  }
  friend Poly operator*(const Poly& a, const Poly& b) {
    Poly r;
    for (const auto& [ma, ca] : a.terms)
      for (const auto& [mb, cb] : b.terms) {
        Mono m = ma;
        for (size_t i = 0; i < m.size(); ++i) m[i] += mb[i];
        r.terms[m] += ca * cb;
      }
    return r;
  }
  friend bool operator==(const Poly& a, const Poly& b) { return a.terms == b.terms; }

  std::string str(const std::vector<std::string>& names) const {
    if (terms.empty()) return "0";
    std::string out;
    for (const auto& [m, c] : terms) {
      if (!out.empty()) out += " + ";
      std::string t;
      bool unit_mono = true;
      for (size_t i = 0; i < m.size(); ++i)
        for (int k = 0; k < m[i]; ++k) {
          t += names[i];
          unit_mono = false;
        }
      if (c != 1 || unit_mono) out += std::to_string(c) + (unit_mono ? "" : "*");
      out += t;
    }
    return out;
  }
};

/// The free commutative monoid on n variables: multisets of variables.
/// Reuses Mono with formal sums tracked as multiset-of-monomials of degree 1
/// is unnecessary; a free monoid value is just an exponent vector.
using FreeMonoidElt = Mono;

inline FreeMonoidElt fm_zero(int nvars) { return FreeMonoidElt(static_cast<size_t>(nvars), 0); }
inline FreeMonoidElt fm_var(int i, int nvars) {
  FreeMonoidElt e(static_cast<size_t>(nvars), 0);
  e[static_cast<size_t>(i)] = 1;
  return e;
}
inline FreeMonoidElt fm_add(const FreeMonoidElt& a, const FreeMonoidElt& b) {
  FreeMonoidElt r = a;
  for (size_t i = 0; i < r.size(); ++i) r[i] += b[i];
  return r;
}

}  // namespace spanforge
