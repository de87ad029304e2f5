#pragma once

#include <optional>
#include <utility>

#include "spanforge/core.hpp"

namespace spanforge {

/// The canonical pullback of f : A -> C and g : B -> C. The apex enumerates
/// the matching pairs (a, b) with f(a) = g(b) in lexicographic order; this
/// fixed choice is what makes every higher construction reproducible.
struct Pullback {
  FinSet apex;
  FinMap p1;  // apex -> dom(f)
  FinMap p2;  // apex -> dom(g)
  std::vector<std::pair<int, int>> pairs;

  int index_of(int a, int b) const {
    auto it = std::lower_bound(pairs.begin(), pairs.end(), std::make_pair(a, b));
    if (it == pairs.end() || *it != std::make_pair(a, b)) return -1;
    return static_cast<int>(it - pairs.begin());
  }
};

inline Pullback canonical_pullback(const FinMap& f, const FinMap& g) {
  if (f.cod != g.cod) throw structural_error("canonical_pullback: codomain mismatch");
  Pullback pb;
  for (int a = 0; a < f.dom; ++a)
    for (int b = 0; b < g.dom; ++b)
      if (f(a) == g(b)) pb.pairs.emplace_back(a, b);
  int n = static_cast<int>(pb.pairs.size());
  pb.apex = FinSet{n};
  std::vector<int> i1(static_cast<size_t>(n)), i2(static_cast<size_t>(n));
  for (int k = 0; k < n; ++k) {
    i1[static_cast<size_t>(k)] = pb.pairs[static_cast<size_t>(k)].first;
    i2[static_cast<size_t>(k)] = pb.pairs[static_cast<size_t>(k)].second;
  }
  pb.p1 = FinMap(n, f.dom, std::move(i1));
  pb.p2 = FinMap(n, g.dom, std::move(i2));
  return pb;
}

/// Size of the canonical pullback without materializing it.
inline int pullback_size(const FinMap& f, const FinMap& g) {
  if (f.cod != g.cod) throw structural_error("pullback_size: codomain mismatch");
  std::vector<int> fc(static_cast<size_t>(f.cod), 0), gc(static_cast<size_t>(g.cod), 0);
  for (int v : f.img) ++fc[static_cast<size_t>(v)];
  for (int v : g.img) ++gc[static_cast<size_t>(v)];
  int total = 0;
  for (int c = 0; c < f.cod; ++c) total += fc[static_cast<size_t>(c)] * gc[static_cast<size_t>(c)];
  return total;
}

/// True iff (p1, p2) is a limit cone over f, g: the cone commutes and the
/// comparison map into the canonical pullback is bijective.
inline bool is_pullback_square(const FinMap& p1, const FinMap& p2, const FinMap& f,
                               const FinMap& g) {
  if (p1.dom != p2.dom || p1.cod != f.dom || p2.cod != g.dom || f.cod != g.cod) return false;
  if (compose(p1, f) != compose(p2, g)) return false;
  Pullback pb = canonical_pullback(f, g);
  if (pb.apex.size != p1.dom) return false;
  std::vector<char> hit(static_cast<size_t>(pb.apex.size), 0);
  for (int w = 0; w < p1.dom; ++w) {
    int k = pb.index_of(p1(w), p2(w));
    if (k < 0 || hit[static_cast<size_t>(k)]) return false;
    hit[static_cast<size_t>(k)] = 1;
  }
  return true;
}

namespace fastcheck {

/// b(a(x)) == c(x) elementwise, no allocation.
inline bool comp_eq(const FinMap& a, const FinMap& b, const FinMap& c) {
  if (a.dom != c.dom || b.cod != c.cod || a.cod != b.dom) return false;
  for (int x = 0; x < a.dom; ++x)
    if (b(a(x)) != c(x)) return false;
  return true;
}

inline bool comm_eq(const FinMap& p, const FinMap& q, const FinMap& r, const FinMap& s) {
  if (p.dom != r.dom || q.cod != s.cod || p.cod != q.dom || r.cod != s.dom) return false;
  for (int x = 0; x < p.dom; ++x)
    if (q(p(x)) != s(r(x))) return false;
  return true;
}

/// Allocation-light pullback test for the cone (p1, p2) over (f, g).
inline bool pb_ok(const FinMap& p1, const FinMap& p2, const FinMap& f, const FinMap& g) {
  if (p1.dom != p2.dom || p1.cod != f.dom || p2.cod != g.dom || f.cod != g.cod) return false;
  for (int w = 0; w < p1.dom; ++w)
    if (f(p1(w)) != g(p2(w))) return false;
  int matches = 0;
  for (int a = 0; a < f.dom; ++a)
    for (int b = 0; b < g.dom; ++b)
      if (f(a) == g(b)) ++matches;
  if (matches != p1.dom) return false;
  thread_local std::vector<long> enc;
  enc.clear();
  for (int w = 0; w < p1.dom; ++w) enc.push_back(static_cast<long>(p1(w)) * g.dom + p2(w));
  std::sort(enc.begin(), enc.end());
  return std::adjacent_find(enc.begin(), enc.end()) == enc.end();
}

}  // namespace fastcheck

/// An object of FinSet over a base: proj maps the total set to the base.
struct Slice {
  FinMap proj;  // total = proj.dom, base = proj.cod

  Slice() = default;
  explicit Slice(FinMap p) : proj(std::move(p)) {}
  int total() const { return proj.dom; }
  int base() const { return proj.cod; }
  std::vector<int> fibre_sizes() const {
    std::vector<int> s(static_cast<size_t>(base()), 0);
    for (int v : proj.img) ++s[static_cast<size_t>(v)];
    return s;
  }
};

inline bool operator==(const Slice& a, const Slice& b) { return a.proj == b.proj; }

/// Composition with f: the left adjoint of pullback on slices.
inline Slice sigma_push(const FinMap& f, const Slice& a) {
  if (a.base() != f.dom) throw structural_error("sigma_push: base mismatch");
  return Slice(compose(a.proj, f));
}

/// Pullback of a slice along f. to_total records the projection to the
/// original total set; the slice projection is the other leg.
struct PulledSlice {
  Slice slice;      // over f.dom
  FinMap to_total;  // slice total -> a.total
};

inline PulledSlice delta_pull_full(const FinMap& f, const Slice& a) {
  if (a.base() != f.cod) throw structural_error("delta_pull: base mismatch");
  Pullback pb = canonical_pullback(f, a.proj);
  return PulledSlice{Slice(pb.p1), pb.p2};
}

inline Slice delta_pull(const FinMap& f, const Slice& a) { return delta_pull_full(f, a).slice; }

/// The fibrewise sections functor, right adjoint to pullback. The fibre over
/// y enumerates the sections of a over f^-1(y) in lexicographic order of the
/// choice tuple (fibre elements taken in increasing order).
struct PiSlice {
  Slice slice;  // over f.cod
  // section_elems[s] lists, for section s of the pushed slice, the chosen
  // element of a.total above each point of the corresponding f-fibre (points
  // in increasing order).
  std::vector<std::vector<int>> section_elems;
  std::vector<std::vector<int>> f_fibres;  // f^-1(y), increasing
};

inline PiSlice pi_push_full(const FinMap& f, const Slice& a) {
  if (a.base() != f.dom) throw structural_error("pi_push: base mismatch");
  PiSlice out;
  out.f_fibres = fibres(f);
  auto a_fibres = fibres(a.proj);
  std::vector<int> proj_img;
  for (int y = 0; y < f.cod; ++y) {
    const auto& xs = out.f_fibres[static_cast<size_t>(y)];
    // enumerate choice tuples lexicographically
    std::vector<size_t> choice(xs.size(), 0);
    bool any_empty = false;
    for (int x : xs)
      if (a_fibres[static_cast<size_t>(x)].empty()) any_empty = true;
    if (any_empty) continue;
    while (true) {
      std::vector<int> elems(xs.size());
      for (size_t i = 0; i < xs.size(); ++i)
        elems[i] = a_fibres[static_cast<size_t>(xs[i])][choice[i]];
      out.section_elems.push_back(std::move(elems));
      proj_img.push_back(y);
      size_t i = xs.size();
      bool advanced = false;
      while (i-- > 0) {
        if (choice[i] + 1 < a_fibres[static_cast<size_t>(xs[i])].size()) {
          ++choice[i];
          std::fill(choice.begin() + static_cast<long>(i) + 1, choice.end(), 0);
          advanced = true;
          break;
        }
      }
      if (!advanced) break;
    }
  }
  int n = static_cast<int>(proj_img.size());
  out.slice = Slice(FinMap(n, f.cod, std::move(proj_img)));
  return out;
}

inline Slice pi_push(const FinMap& f, const Slice& a) { return pi_push_full(f, a).slice; }

/// Looks up the index of a section of pi_push(f, a) over y given the chosen
/// element above each point of f^-1(y).
inline int section_index(const PiSlice& pi, int y, const std::vector<int>& elems) {
  for (int s = 0; s < pi.slice.total(); ++s)
    if (pi.slice.proj(s) == y && pi.section_elems[static_cast<size_t>(s)] == elems) return s;
  return -1;
}

/// Maps of slices over a common base: total maps commuting with projections.
template <typename Fn>
void for_each_slice_map(const Slice& a, const Slice& b, Fn&& fn) {
  if (a.base() != b.base()) throw structural_error("for_each_slice_map: base mismatch");
  auto b_fibres = fibres(b.proj);
  int n = a.total();
  std::vector<int> img(static_cast<size_t>(n), 0);
  // candidate lists per element
  std::vector<const std::vector<int>*> cand(static_cast<size_t>(n));
  for (int x = 0; x < n; ++x) {
    cand[static_cast<size_t>(x)] = &b_fibres[static_cast<size_t>(a.proj(x))];
    if (cand[static_cast<size_t>(x)]->empty()) return;  // no maps
  }
  std::vector<size_t> choice(static_cast<size_t>(n), 0);
  while (true) {
    for (int x = 0; x < n; ++x) img[static_cast<size_t>(x)] = (*cand[static_cast<size_t>(x)])[choice[static_cast<size_t>(x)]];
    fn(FinMap(n, b.total(), img));
    size_t i = static_cast<size_t>(n);
    bool advanced = false;
    while (i-- > 0) {
      if (choice[i] + 1 < cand[i]->size()) {
        ++choice[i];
        std::fill(choice.begin() + static_cast<long>(i) + 1, choice.end(), 0);
        advanced = true;
        break;
      }
    }
    if (!advanced || n == 0) break;
  }
}

inline long count_slice_maps(const Slice& a, const Slice& b) {
  if (a.base() != b.base()) throw structural_error("count_slice_maps: base mismatch");
  auto bs = b.fibre_sizes();
  long n = 1;
  for (int x = 0; x < a.total(); ++x) n *= bs[static_cast<size_t>(a.proj(x))];
  return n;
}

/// Enumerates slices over a base with total size <= cap, one per fibre-size
/// profile, totals laid out in blocks by base point.
template <typename Fn>
void for_each_slice_profile(int base, int cap, Fn&& fn) {
  std::vector<int> sizes(static_cast<size_t>(base), 0);
  while (true) {
    int total = std::accumulate(sizes.begin(), sizes.end(), 0);
    if (total <= cap) {
      std::vector<int> img;
      img.reserve(static_cast<size_t>(total));
      for (int y = 0; y < base; ++y)
        for (int k = 0; k < sizes[static_cast<size_t>(y)]; ++k) img.push_back(y);
      fn(Slice(FinMap(total, base, std::move(img))));
    }
    size_t i = sizes.size();
    bool advanced = false;
    while (i-- > 0) {
      if (sizes[i] < cap) {
        ++sizes[i];
        std::fill(sizes.begin() + static_cast<long>(i) + 1, sizes.end(), 0);
        advanced = true;
        break;
      }
    }
    if (!advanced || base == 0) break;
  }
  if (base == 0) return;
}

// ---------------------------------------------------------------------------
// Adjoint triple checks
// ---------------------------------------------------------------------------

struct AdjointTripleReport {
  bool ok = true;
  long cases_checked = 0;
  std::string first_failure;

  void fail(const std::string& msg) {
    if (ok) first_failure = msg;
    ok = false;
  }
};

/// Transpose along sigma -| delta: h : sigma_f A -> B over Y gives
/// A -> delta_f B over X, a |-> (proj_A(a), h(a)).
inline FinMap sigma_delta_transpose(const FinMap& f, const Slice& a, const Slice& b,
                                    const FinMap& h) {
  Pullback pb = canonical_pullback(f, b.proj);
  std::vector<int> img(static_cast<size_t>(a.total()));
  for (int x = 0; x < a.total(); ++x) {
    int k = pb.index_of(a.proj(x), h(x));
    if (k < 0) throw structural_error("sigma_delta_transpose: not fibrewise");
    img[static_cast<size_t>(x)] = k;
  }
  return FinMap(a.total(), pb.apex.size, std::move(img));
}

/// Transpose along delta -| pi: k : delta_f B -> A over X gives
/// B -> pi_f A over Y.
inline FinMap delta_pi_transpose(const FinMap& f, const Slice& b, const Slice& a,
                                 const FinMap& k) {
  Pullback pb = canonical_pullback(f, b.proj);  // delta_f B
  PiSlice pi = pi_push_full(f, a);
  std::vector<int> img(static_cast<size_t>(b.total()));
  for (int y_elt = 0; y_elt < b.total(); ++y_elt) {
    int y = b.proj(y_elt);
    const auto& xs = pi.f_fibres[static_cast<size_t>(y)];
    std::vector<int> elems(xs.size());
    for (size_t i = 0; i < xs.size(); ++i) {
      int idx = pb.index_of(xs[i], y_elt);
      if (idx < 0) throw structural_error("delta_pi_transpose: missing pullback point");
      elems[i] = k(idx);
    }
    int s = section_index(pi, y, elems);
    if (s < 0) throw structural_error("delta_pi_transpose: not a section");
    img[static_cast<size_t>(y_elt)] = s;
  }
  return FinMap(b.total(), pi.slice.total(), std::move(img));
}

/// Verifies Hom(sigma_f A, B) ~ Hom(A, delta_f B) and
/// Hom(delta_f B, A) ~ Hom(B, pi_f A) by explicit transposes over every
/// fibre-size profile with totals <= cap.
inline AdjointTripleReport check_adjoint_triple(const FinMap& f, int cap) {
  AdjointTripleReport rep;
  for_each_slice_profile(f.dom, cap, [&](const Slice& a) {
    for_each_slice_profile(f.cod, cap, [&](const Slice& b) {
      // sigma -| delta
      {
        Slice fa = sigma_push(f, a);
        Slice db = delta_pull(f, b);
        long lhs = count_slice_maps(fa, b);
        long rhs = count_slice_maps(a, db);
        if (lhs != rhs) rep.fail("sigma -| delta: hom count mismatch");
        std::vector<FinMap> transposed;
        for_each_slice_map(fa, b, [&](const FinMap& h) {
          transposed.push_back(sigma_delta_transpose(f, a, b, h));
        });
        std::sort(transposed.begin(), transposed.end());
        if (std::adjacent_find(transposed.begin(), transposed.end()) != transposed.end())
          rep.fail("sigma -| delta: transpose not injective");
        if (static_cast<long>(transposed.size()) != rhs && lhs == rhs)
          rep.fail("sigma -| delta: transpose not surjective");
        ++rep.cases_checked;
      }
      // delta -| pi
      {
        Slice db = delta_pull(f, b);
        Slice pa = pi_push(f, a);
        long lhs = count_slice_maps(db, a);
        long rhs = count_slice_maps(b, pa);
        if (lhs != rhs) rep.fail("delta -| pi: hom count mismatch");
        std::vector<FinMap> transposed;
        for_each_slice_map(db, a, [&](const FinMap& k) {
          transposed.push_back(delta_pi_transpose(f, b, a, k));
        });
        std::sort(transposed.begin(), transposed.end());
        if (std::adjacent_find(transposed.begin(), transposed.end()) != transposed.end())
          rep.fail("delta -| pi: transpose not injective");
        if (static_cast<long>(transposed.size()) != rhs && lhs == rhs)
          rep.fail("delta -| pi: transpose not surjective");
        ++rep.cases_checked;
      }
    });
  });
  return rep;
}

/// Triangle identities for the two adjunctions, checked pointwise.
inline bool check_triangle_identities(const FinMap& f, int cap) {
  bool ok = true;
  // sigma -| delta: unit A -> delta sigma A, counit sigma delta B -> B
  for_each_slice_profile(f.dom, cap, [&](const Slice& a) {
    Slice fa = sigma_push(f, a);
    Pullback pb = canonical_pullback(f, fa.proj);  // delta_f sigma_f A
    // unit: a |-> (proj a, a)
    std::vector<int> unit_img(static_cast<size_t>(a.total()));
    for (int x = 0; x < a.total(); ++x) unit_img[static_cast<size_t>(x)] = pb.index_of(a.proj(x), x);
    // counit of (sigma delta) on slice fa: sigma_f delta_f fa -> fa is p2.
    // triangle 1: counit_{sigma A} . sigma(unit_A) = id_{sigma A}
    for (int x = 0; x < a.total(); ++x)
      if (pb.p2(unit_img[static_cast<size_t>(x)]) != x) ok = false;
  });
  for_each_slice_profile(f.cod, cap, [&](const Slice& b) {
    Pullback pb = canonical_pullback(f, b.proj);  // delta_f B
    // triangle 2: delta(counit_B) . unit_{delta B} = id_{delta B}
    Slice db(pb.p1);
    Slice fdb = sigma_push(f, db);
    Pullback pb2 = canonical_pullback(f, fdb.proj);  // delta sigma delta B
    for (int w = 0; w < db.total(); ++w) {
      int u = pb2.index_of(pb.p1(w), w);  // unit on delta B
      if (u < 0 || pb.index_of(pb2.p1(u), pb.p2(pb2.p2(u))) != w) ok = false;
    }
  });
  // delta -| pi: unit B -> pi delta B, counit delta pi A -> A
  for_each_slice_profile(f.dom, cap, [&](const Slice& a) {
    PiSlice pa = pi_push_full(f, a);
    Pullback dpa = canonical_pullback(f, pa.slice.proj);  // delta pi A
    // counit: (x, s) |-> s(x)
    std::vector<int> counit_img(static_cast<size_t>(dpa.apex.size));
    for (int k = 0; k < dpa.apex.size; ++k) {
      auto [x, s] = dpa.pairs[static_cast<size_t>(k)];
      const auto& xs = pa.f_fibres[static_cast<size_t>(f(x))];
      size_t pos = static_cast<size_t>(std::find(xs.begin(), xs.end(), x) - xs.begin());
      counit_img[static_cast<size_t>(k)] = pa.section_elems[static_cast<size_t>(s)][pos];
    }
    // triangle: pi(counit) . unit_{pi A} = id_{pi A}
    PiSlice pdpa = pi_push_full(f, Slice(dpa.p1));
    for (int s = 0; s < pa.slice.total(); ++s) {
      int y = pa.slice.proj(s);
      const auto& xs = pa.f_fibres[static_cast<size_t>(y)];
      std::vector<int> elems(xs.size());
      for (size_t i = 0; i < xs.size(); ++i) elems[i] = dpa.index_of(xs[i], s);
      int u = section_index(pdpa, y, elems);  // unit on pi A
      if (u < 0) {
        ok = false;
        continue;
      }
      // apply pi(counit) to u, compare with s
      const auto& chosen = pdpa.section_elems[static_cast<size_t>(u)];
      std::vector<int> mapped(chosen.size());
      for (size_t i = 0; i < chosen.size(); ++i)
        mapped[i] = counit_img[static_cast<size_t>(chosen[i])];
      if (section_index(pa, y, mapped) != s) ok = false;
    }
  });
  return ok;
}

// ---------------------------------------------------------------------------
// Mackey property
// ---------------------------------------------------------------------------

/// A commuting square of finite sets, drawn
///     W --f--> X
///     |        |
///   alpha     beta
///     v        v
///     Y --g--> Z
struct SetSquare {
  FinMap f, alpha, beta, g;

  bool commutes() const { return compose(f, beta) == compose(alpha, g); }
  bool is_pullback() const { return commutes() && is_pullback_square(f, alpha, beta, g); }
};

/// The natural bijection pi_f delta_alpha A ~ delta_beta pi_g A over X for a
/// pullback square and A over Y.
struct MackeyWitness {
  Slice lhs;    // pi_f delta_alpha A
  Slice rhs;    // delta_beta pi_g A
  FinMap iso;   // lhs total -> rhs total
};

inline MackeyWitness check_mackey(const SetSquare& sq, const Slice& a) {
  if (!sq.is_pullback()) throw structural_error("check_mackey: square is not a pullback");
  if (a.base() != sq.g.dom) throw structural_error("check_mackey: slice not over Y");
  PulledSlice da = delta_pull_full(sq.alpha, a);   // over W, elements (w, a)
  PiSlice lhs = pi_push_full(sq.f, da.slice);      // over X
  PiSlice ga = pi_push_full(sq.g, a);              // over Z
  Pullback rhs = canonical_pullback(sq.beta, ga.slice.proj);  // over X
  Pullback wpb = canonical_pullback(sq.beta, sq.g);           // reference pullback for W

  // The comparison map: a section s over W_x goes to the section over
  // Y_{beta(x)} sending y to s at the unique w with f(w)=x, alpha(w)=y.
  std::vector<int> img(static_cast<size_t>(lhs.slice.total()));
  for (int s = 0; s < lhs.slice.total(); ++s) {
    int x = lhs.slice.proj(s);
    int z = sq.beta(x);
    const auto& ys = ga.f_fibres[static_cast<size_t>(z)];
    const auto& ws = lhs.f_fibres[static_cast<size_t>(x)];
    std::vector<int> elems(ys.size(), -1);
    for (size_t i = 0; i < ws.size(); ++i) {
      int w = ws[i];
      int y = sq.alpha(w);
      size_t pos = static_cast<size_t>(std::find(ys.begin(), ys.end(), y) - ys.begin());
      int da_elt = lhs.section_elems[static_cast<size_t>(s)][i];
      elems[pos] = da.to_total(da_elt);
    }
    // Pullback property: every y in the fibre is hit by exactly one w.
    for (int v : elems)
      if (v < 0) throw structural_error("check_mackey: fibre correspondence broken");
    int t = section_index(ga, z, elems);
    if (t < 0) throw structural_error("check_mackey: image not a section");
    int k = rhs.index_of(x, t);
    if (k < 0) throw structural_error("check_mackey: image not in pullback");
    img[static_cast<size_t>(s)] = k;
  }
  (void)wpb;
  FinMap iso(lhs.slice.total(), rhs.apex.size, std::move(img));
  if (!is_bijective(iso)) throw structural_error("check_mackey: comparison not bijective");
  return MackeyWitness{lhs.slice, Slice(rhs.p1), iso};
}

/// Naturality of the Mackey bijection in A: for a slice map A -> A' over Y,
/// the two induced paths agree.
inline bool mackey_natural(const SetSquare& sq, const Slice& a, const Slice& a2,
                           const FinMap& slice_map) {
  MackeyWitness m1 = check_mackey(sq, a);
  MackeyWitness m2 = check_mackey(sq, a2);
  // induced map on lhs: pi_f delta_alpha (slice_map)
  PulledSlice da = delta_pull_full(sq.alpha, a);
  PulledSlice da2 = delta_pull_full(sq.alpha, a2);
  Pullback pa = canonical_pullback(sq.alpha, a.proj);
  Pullback pa2 = canonical_pullback(sq.alpha, a2.proj);
  PiSlice l1 = pi_push_full(sq.f, da.slice);
  PiSlice l2 = pi_push_full(sq.f, da2.slice);
  std::vector<int> lhs_img(static_cast<size_t>(l1.slice.total()));
  for (int s = 0; s < l1.slice.total(); ++s) {
    int x = l1.slice.proj(s);
    const auto& ws = l1.f_fibres[static_cast<size_t>(x)];
    std::vector<int> elems(ws.size());
    for (size_t i = 0; i < ws.size(); ++i) {
      int e = l1.section_elems[static_cast<size_t>(s)][i];
      elems[i] = pa2.index_of(ws[i], slice_map(pa.p2(e)));
    }
    lhs_img[static_cast<size_t>(s)] = section_index(l2, x, elems);
  }
  FinMap lhs_map(l1.slice.total(), l2.slice.total(), std::move(lhs_img));
  // induced map on rhs: delta_beta pi_g (slice_map)
  PiSlice g1 = pi_push_full(sq.g, a);
  PiSlice g2 = pi_push_full(sq.g, a2);
  Pullback r1 = canonical_pullback(sq.beta, g1.slice.proj);
  Pullback r2 = canonical_pullback(sq.beta, g2.slice.proj);
  std::vector<int> rhs_img(static_cast<size_t>(r1.apex.size));
  for (int k = 0; k < r1.apex.size; ++k) {
    auto [x, t] = r1.pairs[static_cast<size_t>(k)];
    int z = g1.slice.proj(t);
    const auto& elems = g1.section_elems[static_cast<size_t>(t)];
    std::vector<int> mapped(elems.size());
    for (size_t i = 0; i < elems.size(); ++i) mapped[i] = slice_map(elems[i]);
    int t2 = section_index(g2, z, mapped);
    rhs_img[static_cast<size_t>(k)] = r2.index_of(x, t2);
  }
  FinMap rhs_map(r1.apex.size, r2.apex.size, std::move(rhs_img));
  return compose(m1.iso, rhs_map) == compose(lhs_map, m2.iso);
}

// ---------------------------------------------------------------------------
// Cromulent rectangles
// ---------------------------------------------------------------------------

/// The edge of a rectangle: a slice over X together with the span legs
/// f : Y -> X and g : Y -> Z.
struct CromulentEdge {
  Slice a;   // over X
  FinMap f;  // Y -> X
  FinMap g;  // Y -> Z
};

/// A rectangle over an edge:
///     A <-- middle --> right
///     |       |          |
///     X <-f-- Y ---g-->  Z
/// Precromulent: the right square is a pullback. Cromulent: terminal among
/// precromulent rectangles with this edge.
struct CromulentRect {
  CromulentEdge edge;
  Slice middle;      // over Y
  Slice right;       // over Z
  FinMap to_a;       // middle total -> A total
  FinMap to_right;   // middle total -> right total
};

inline bool rect_well_formed(const CromulentRect& r) {
  if (r.edge.f.dom != r.edge.g.dom) return false;
  if (r.middle.base() != r.edge.f.dom || r.right.base() != r.edge.g.cod) return false;
  if (r.edge.a.base() != r.edge.f.cod) return false;
  if (r.to_a.dom != r.middle.total() || r.to_a.cod != r.edge.a.total()) return false;
  if (r.to_right.dom != r.middle.total() || r.to_right.cod != r.right.total()) return false;
  // left square commutes: middle -> A -> X equals middle -> Y -> X
  if (compose(r.to_a, r.edge.a.proj) != compose(r.middle.proj, r.edge.f)) return false;
  // right square commutes over g
  if (compose(r.to_right, r.right.proj) != compose(r.middle.proj, r.edge.g)) return false;
  return true;
}

inline bool rect_precromulent(const CromulentRect& r) {
  return rect_well_formed(r) &&
         is_pullback_square(r.to_right, r.middle.proj, r.right.proj, r.edge.g);
}

/// Extends an edge to the canonical cromulent rectangle
/// middle = g* g_* f* A, right = g_* f* A.
inline CromulentRect cromulent_extend(const CromulentEdge& edge) {
  PulledSlice fa = delta_pull_full(edge.f, edge.a);        // f*A over Y
  PiSlice gfa = pi_push_full(edge.g, fa.slice);            // g_* f* A over Z
  Pullback mid = canonical_pullback(edge.g, gfa.slice.proj);  // g* g_* f* A over Y

  // top-left map: counit g* g_* (f*A) -> f*A, then f*A -> A.
  std::vector<int> to_a(static_cast<size_t>(mid.apex.size));
  for (int k = 0; k < mid.apex.size; ++k) {
    auto [y, s] = mid.pairs[static_cast<size_t>(k)];
    const auto& ys = gfa.f_fibres[static_cast<size_t>(edge.g(y))];
    size_t pos = static_cast<size_t>(std::find(ys.begin(), ys.end(), y) - ys.begin());
    int fa_elt = gfa.section_elems[static_cast<size_t>(s)][pos];
    to_a[static_cast<size_t>(k)] = fa.to_total(fa_elt);
  }
  CromulentRect r;
  r.edge = edge;
  r.middle = Slice(mid.p1);
  r.right = gfa.slice;
  r.to_a = FinMap(mid.apex.size, edge.a.total(), std::move(to_a));
  r.to_right = mid.p2;
  return r;
}

/// Counts morphisms of rectangles from q to r (same edge): a pair of slice
/// maps (middle, right) commuting with the structure maps. The middle map is
/// enumerated through per-element candidate lists cut down by the projection
/// and leg constraints.
inline long count_rect_morphisms(const CromulentRect& q, const CromulentRect& r) {
  std::vector<std::vector<int>> cand(static_cast<size_t>(q.middle.total()));
  for (int m = 0; m < q.middle.total(); ++m) {
    for (int m2 = 0; m2 < r.middle.total(); ++m2)
      if (r.middle.proj(m2) == q.middle.proj(m) && r.to_a(m2) == q.to_a(m))
        cand[static_cast<size_t>(m)].push_back(m2);
    if (cand[static_cast<size_t>(m)].empty()) return 0;
  }
  long count = 0;
  std::vector<size_t> pick(static_cast<size_t>(q.middle.total()), 0);
  auto r_fibres = fibres(r.right.proj);
  while (true) {
    // v is forced on the image of q.to_right and free elsewhere
    std::vector<int> forced(static_cast<size_t>(q.right.total()), -1);
    bool consistent = true;
    for (int m = 0; m < q.middle.total() && consistent; ++m) {
      int src = q.to_right(m);
      int dst = r.to_right(cand[static_cast<size_t>(m)][pick[static_cast<size_t>(m)]]);
      if (forced[static_cast<size_t>(src)] == -1)
        forced[static_cast<size_t>(src)] = dst;
      else if (forced[static_cast<size_t>(src)] != dst)
        consistent = false;
    }
    if (consistent) {
      long ways = 1;
      for (int cc = 0; cc < q.right.total(); ++cc) {
        if (forced[static_cast<size_t>(cc)] != -1) {
          if (r.right.proj(forced[static_cast<size_t>(cc)]) != q.right.proj(cc)) ways = 0;
        } else {
          ways *= static_cast<long>(r_fibres[static_cast<size_t>(q.right.proj(cc))].size());
        }
        if (ways == 0) break;
      }
      count += ways;
    }
    size_t i = pick.size();
    bool adv = false;
    while (i-- > 0) {
      if (pick[i] + 1 < cand[i].size()) {
        ++pick[i];
        std::fill(pick.begin() + static_cast<long>(i) + 1, pick.end(), 0);
        adv = true;
        break;
      }
    }
    if (!adv || q.middle.total() == 0) break;
  }
  return count;
}

/// Terminality by exhaustive search: every precromulent rectangle on the same
/// edge with right total <= cap admits exactly one morphism to r.
inline bool is_cromulent(const CromulentRect& r, int cap) {
  if (!rect_precromulent(r)) return false;
  bool ok = true;
  for_each_slice_profile(r.edge.g.cod, cap, [&](const Slice& c) {
    if (!ok) return;
    PulledSlice gc = delta_pull_full(r.edge.g, c);  // middle of the candidate
    PulledSlice fa = delta_pull_full(r.edge.f, r.edge.a);
    // candidate top-left maps: slice maps g*C -> f*A over Y, composed to A
    for_each_slice_map(gc.slice, fa.slice, [&](const FinMap& h) {
      if (!ok) return;
      CromulentRect q;
      q.edge = r.edge;
      q.middle = gc.slice;
      q.right = c;
      q.to_a = compose(h, fa.to_total);
      q.to_right = gc.to_total;
      if (count_rect_morphisms(q, r) != 1) ok = false;
    });
  });
  return ok;
}

/// Closed-form test: precromulent and isomorphic (as a rectangle) to the
/// canonical extension of its edge, with the comparison morphism built from
/// the universal property rather than searched.
inline bool is_cromulent_canonical(const CromulentRect& r) {
  if (!rect_precromulent(r)) return false;
  PulledSlice fa = delta_pull_full(r.edge.f, r.edge.a);  // f*A over Y
  PiSlice gfa = pi_push_full(r.edge.g, fa.slice);        // canonical right
  Pullback mid = canonical_pullback(r.edge.g, gfa.slice.proj);
  if (gfa.slice.total() != r.right.total() || mid.apex.size != r.middle.total()) return false;
  // v : r.right -> canonical right via the section transpose; each middle
  // element over y with a given right image is unique by the pullback
  auto mid_fibres = fibres(r.middle.proj);
  std::vector<int> vimg(static_cast<size_t>(r.right.total()), -1);
  for (int cc = 0; cc < r.right.total(); ++cc) {
    int z = r.right.proj(cc);
    const auto& ys = gfa.f_fibres[static_cast<size_t>(z)];
    std::vector<int> elems(ys.size(), -1);
    for (size_t t = 0; t < ys.size(); ++t) {
      int y = ys[t];
      int found = -1;
      for (int m : mid_fibres[static_cast<size_t>(y)])
        if (r.to_right(m) == cc) {
          if (found >= 0) return false;  // pullback property would fail
          found = m;
        }
      if (found < 0) return false;
      // the f*A element paired with (y, to_a(found))
      Pullback fap = canonical_pullback(r.edge.f, r.edge.a.proj);
      elems[t] = fap.index_of(y, r.to_a(found));
      if (elems[t] < 0) return false;
    }
    vimg[static_cast<size_t>(cc)] = section_index(gfa, z, elems);
    if (vimg[static_cast<size_t>(cc)] < 0) return false;
  }
  FinMap v(r.right.total(), gfa.slice.total(), std::move(vimg));
  if (!is_bijective(v)) return false;
  // u : r.middle -> canonical middle by pairing
  std::vector<int> uimg(static_cast<size_t>(r.middle.total()), -1);
  for (int m = 0; m < r.middle.total(); ++m) {
    int idx = mid.index_of(r.middle.proj(m), v(r.to_right(m)));
    if (idx < 0) return false;
    uimg[static_cast<size_t>(m)] = idx;
  }
  FinMap u(r.middle.total(), mid.apex.size, std::move(uimg));
  if (!is_bijective(u)) return false;
  // the comparison must carry the legs onto the canonical ones
  Pullback fap = canonical_pullback(r.edge.f, r.edge.a.proj);
  for (int m = 0; m < r.middle.total(); ++m) {
    auto [y, sec] = mid.pairs[static_cast<size_t>(u(m))];
    const auto& ys = gfa.f_fibres[static_cast<size_t>(r.edge.g(y))];
    size_t pos = static_cast<size_t>(std::find(ys.begin(), ys.end(), y) - ys.begin());
    int fa_elt = gfa.section_elems[static_cast<size_t>(sec)][pos];
    if (fap.p2(fa_elt) != r.to_a(m)) return false;
  }
  return true;
}

}  // namespace spanforge
