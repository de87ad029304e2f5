#pragma once

#include "spanforge/spanqcat.hpp"

namespace spanforge {

// The two-variable endomorphism theories admit a presentation by generators
// f* for set maps and transpositions tau(x, y), subject to contravariant
// functoriality, commutation of disjoint transpositions, and the
// fibre-matching exchange rule tau(x1,y1)...tau(xn,yn) f* = f* tau(x,y).
// Working with that presentation directly is unpleasant, so only the
// one-variable theory is implemented and the two-variable consequences are
// reached through the span model.

/// A morphism of the endomorphism theory: a backwards set map together with
/// an application count per source point (integers in the loose variant).
struct T1Mor {
  bool loose = false;  // counts in Z rather than N
  FinMap f;            // Y -> X, the contravariant part
  std::vector<int> alpha;

  T1Mor() = default;
  T1Mor(bool loose_, FinMap f_, std::vector<int> a)
      : loose(loose_), f(std::move(f_)), alpha(std::move(a)) {
    if (static_cast<int>(alpha.size()) != f.dom)
      throw structural_error("T1Mor: count vector length mismatch");
    if (!loose)
      for (int v : alpha)
        if (v < 0) throw structural_error("T1Mor: negative count in the strict variant");
  }
  int from() const { return f.cod; }
  int to() const { return f.dom; }
};

inline bool operator==(const T1Mor& a, const T1Mor& b) {
  return a.loose == b.loose && a.f == b.f && a.alpha == b.alpha;
}

inline T1Mor t1_identity(int n, bool loose = false) {
  return T1Mor(loose, identity_map(n), std::vector<int>(static_cast<size_t>(n), 0));
}

/// Composition (g, beta)(f, alpha) = (fg, beta + g* alpha).
inline T1Mor t1_compose(const T1Mor& a, const T1Mor& b) {
  if (a.loose != b.loose) throw structural_error("t1_compose: variant mismatch");
  if (a.to() != b.from()) throw structural_error("t1_compose: endpoint mismatch");
  FinMap fg = compose(b.f, a.f);
  std::vector<int> beta(static_cast<size_t>(b.f.dom));
  for (int z = 0; z < b.f.dom; ++z)
    beta[static_cast<size_t>(z)] = b.alpha[static_cast<size_t>(z)] + a.alpha[static_cast<size_t>(b.f(z))];
  return T1Mor(a.loose, std::move(fg), std::move(beta));
}

/// The span image on doubled objects: X u X <- Y u Y u E -> Y u Y, where E
/// fibres over Y with alpha(y) points, mapping to the first copy on the left
/// and folding into the second copy on the right.
inline Span t1_to_span(const T1Mor& a) {
  if (a.loose) throw structural_error("t1_to_span: the loose variant has no span image");
  int x = a.from(), y = a.to();
  int e = std::accumulate(a.alpha.begin(), a.alpha.end(), 0);
  int apex = 2 * y + e;
  std::vector<int> li(static_cast<size_t>(apex)), ri(static_cast<size_t>(apex));
  for (int u = 0; u < y; ++u) {
    li[static_cast<size_t>(u)] = a.f(u);
    ri[static_cast<size_t>(u)] = u;
    li[static_cast<size_t>(y + u)] = x + a.f(u);
    ri[static_cast<size_t>(y + u)] = y + u;
  }
  int pos = 2 * y;
  for (int u = 0; u < y; ++u)
    for (int k = 0; k < a.alpha[static_cast<size_t>(u)]; ++k, ++pos) {
      li[static_cast<size_t>(pos)] = a.f(u);      // first copy via f
      ri[static_cast<size_t>(pos)] = y + u;       // fold into the second copy
    }
  return Span(FinMap(apex, 2 * x, std::move(li)), FinMap(apex, 2 * y, std::move(ri)));
}

// ---------------------------------------------------------------------------
// Grouplikeness, completion, units
// ---------------------------------------------------------------------------

/// (x, y) |-> (x + y, y) is a bijection on pairs exactly when the monoid is
/// a group; both routes are computed.
inline bool is_grouplike(const CommMonoid& m) {
  if (!m.valid()) throw structural_error("is_grouplike: invalid monoid");
  std::vector<char> seen(static_cast<size_t>(m.size * m.size), 0);
  for (int x = 0; x < m.size; ++x)
    for (int y = 0; y < m.size; ++y) {
      int code = m.op(x, y) * m.size + y;
      if (seen[static_cast<size_t>(code)]) return false;
      seen[static_cast<size_t>(code)] = 1;
    }
  return true;
}

struct GroupCompletion {
  CommMonoid group;
  FinMap unit_map;  // M -> group, a |-> [a - 0]
};

/// The Grothendieck construction: pairs (a, b) modulo the stable relation
/// a + d + k = c + b + k.
inline GroupCompletion group_completion(const CommMonoid& m) {
  if (!m.valid()) throw structural_error("group_completion: invalid monoid");
  int n = m.size;
  auto related = [&](int a, int b, int c, int d) {
    for (int k = 0; k < n; ++k)
      if (m.op(m.op(a, d), k) == m.op(m.op(c, b), k)) return true;
    return false;
  };
  std::vector<int> cls(static_cast<size_t>(n * n), -1);
  std::vector<std::pair<int, int>> reps;
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      int code = a * n + b;
      for (size_t r = 0; r < reps.size(); ++r)
        if (related(a, b, reps[r].first, reps[r].second)) {
          cls[static_cast<size_t>(code)] = static_cast<int>(r);
          break;
        }
      if (cls[static_cast<size_t>(code)] < 0) {
        cls[static_cast<size_t>(code)] = static_cast<int>(reps.size());
        reps.emplace_back(a, b);
      }
    }
  GroupCompletion out;
  out.group.size = static_cast<int>(reps.size());
  out.group.unit = cls[0];  // class of (0, 0) with 0 the monoid unit
  out.group.unit = cls[static_cast<size_t>(m.unit * n + m.unit)];
  out.group.add.assign(static_cast<size_t>(out.group.size),
                       std::vector<int>(static_cast<size_t>(out.group.size)));
  for (size_t r = 0; r < reps.size(); ++r)
    for (size_t s = 0; s < reps.size(); ++s) {
      int a = m.op(reps[r].first, reps[s].first);
      int b = m.op(reps[r].second, reps[s].second);
      out.group.add[r][s] = cls[static_cast<size_t>(a * n + b)];
    }
  std::vector<int> umap(static_cast<size_t>(n));
  for (int a = 0; a < n; ++a) umap[static_cast<size_t>(a)] = cls[static_cast<size_t>(a * n + m.unit)];
  out.unit_map = FinMap(n, out.group.size, std::move(umap));
  if (!out.group.valid() || !out.group.is_group())
    throw structural_error("group_completion: output not a group");
  return out;
}

/// Monoid homomorphisms M -> N.
template <typename Fn>
void for_each_monoid_hom(const CommMonoid& m, const CommMonoid& n, Fn&& fn) {
  for_each_map(m.size, n.size, [&](const FinMap& h) {
    if (h(m.unit) != n.unit) return;
    for (int a = 0; a < m.size; ++a)
      for (int b = a; b < m.size; ++b)
        if (h(m.op(a, b)) != n.op(h(a), h(b))) return;
    fn(h);
  });
}

/// Universal property at desk scale: every homomorphism into a group of
/// order <= cap factors uniquely through the completion.
inline bool completion_universal(const CommMonoid& m, int cap) {
  GroupCompletion gc = group_completion(m);
  for (int n = 1; n <= cap; ++n) {
    bool ok = true;
    for_each_comm_monoid(n, [&](const CommMonoid& target) {
      if (!target.is_group()) return;
      for_each_monoid_hom(m, target, [&](const FinMap& h) {
        int count = 0;
        for_each_monoid_hom(gc.group, target, [&](const FinMap& hb) {
          if (compose(gc.unit_map, hb) == h) ++count;
        });
        if (count != 1) ok = false;
      });
    });
    if (!ok) return false;
  }
  return true;
}

/// The submonoid of invertible elements, as a table plus the inclusion.
struct UnitsResult {
  CommMonoid group;
  FinMap inclusion;  // units -> M
};

inline UnitsResult units(const CommMonoid& m) {
  if (!m.valid()) throw structural_error("units: invalid monoid");
  std::vector<int> elems;
  for (int a = 0; a < m.size; ++a)
    for (int b = 0; b < m.size; ++b)
      if (m.op(a, b) == m.unit) {
        elems.push_back(a);
        break;
      }
  UnitsResult out;
  out.group.size = static_cast<int>(elems.size());
  out.group.unit = static_cast<int>(std::find(elems.begin(), elems.end(), m.unit) - elems.begin());
  out.group.add.assign(elems.size(), std::vector<int>(elems.size()));
  for (size_t i = 0; i < elems.size(); ++i)
    for (size_t j = 0; j < elems.size(); ++j) {
      int r = m.op(elems[i], elems[j]);
      out.group.add[i][j] =
          static_cast<int>(std::find(elems.begin(), elems.end(), r) - elems.begin());
    }
  out.inclusion = FinMap(out.group.size, m.size, std::move(elems));
  if (!out.group.valid() || !out.group.is_group())
    throw structural_error("units: the invertibles fail to form a group");
  return out;
}

/// Units of the multiplicative monoid of a semiring.
inline UnitsResult units(const CommSemiring& s) { return units(s.multiplicative()); }

/// Maximality: units is the largest grouplike submonoid (subsets containing
/// the unit, closed under addition, grouplike).
inline bool units_maximal(const CommMonoid& m) {
  UnitsResult u = units(m);
  int best = u.group.size;
  int n = m.size;
  for (int mask = 0; mask < (1 << n); ++mask) {
    if (!(mask & (1 << m.unit))) continue;
    std::vector<int> elems;
    for (int a = 0; a < n; ++a)
      if (mask & (1 << a)) elems.push_back(a);
    bool closed = true;
    for (int a : elems)
      for (int b : elems)
        if (!((mask >> m.op(a, b)) & 1)) closed = false;
    if (!closed) continue;
    CommMonoid sub;
    sub.size = static_cast<int>(elems.size());
    sub.unit = static_cast<int>(std::find(elems.begin(), elems.end(), m.unit) - elems.begin());
    sub.add.assign(elems.size(), std::vector<int>(elems.size()));
    for (size_t i = 0; i < elems.size(); ++i)
      for (size_t j = 0; j < elems.size(); ++j)
        sub.add[i][j] = static_cast<int>(
            std::find(elems.begin(), elems.end(), m.op(elems[i], elems[j])) - elems.begin());
    if (sub.valid() && is_grouplike(sub) && sub.size > best) return false;
  }
  return true;
}

/// Products in the endomorphism theory: disjoint unions with the backwards
/// projections and zero counts. Verifies the universal property by counting
/// factorizations, with application counts drawn from a small window.
inline bool t1_product_universal(int x1, int x2, int tcap, bool loose) {
  int xs = x1 + x2;
  T1Mor p1(loose, coprod_incl(x1, x2, false), std::vector<int>(static_cast<size_t>(x1), 0));
  T1Mor p2(loose, coprod_incl(x1, x2, true), std::vector<int>(static_cast<size_t>(x2), 0));
  int lo = loose ? -1 : 0, hi = 1;
  int range = hi - lo + 1;
  auto each_counts = [&](int len, auto&& fn) {
    long combos = 1;
    for (int i = 0; i < len; ++i) combos *= range;
    for (long pick = 0; pick < combos; ++pick) {
      std::vector<int> a(static_cast<size_t>(len));
      long p = pick;
      for (int i = 0; i < len; ++i) {
        a[static_cast<size_t>(i)] = static_cast<int>(p % range) + lo;
        p /= range;
      }
      fn(a);
    }
  };
  for (int t = 0; t <= tcap; ++t) {
    bool ok = true;
    for_each_map(x1, t, [&](const FinMap& f1) {
      each_counts(x1, [&](const std::vector<int>& a1) {
        for_each_map(x2, t, [&](const FinMap& f2) {
          each_counts(x2, [&](const std::vector<int>& a2) {
            T1Mor q1(loose, f1, a1), q2(loose, f2, a2);
            int count = 0;
            for_each_map(xs, t, [&](const FinMap& fu) {
              each_counts(xs, [&](const std::vector<int>& au) {
                T1Mor u(loose, fu, au);
                if (t1_compose(u, p1) == q1 && t1_compose(u, p2) == q2) ++count;
              });
            });
            if (count != 1) ok = false;
          });
        });
      });
    });
    if (!ok) return false;
  }
  return true;
}

}  // namespace spanforge
