#pragma once

#include <chrono>
#include <functional>
#include <sstream>

#include "spanforge/dinat.hpp"
#include "spanforge/distlaw.hpp"
#include "spanforge/distlaw_checks.hpp"
#include "spanforge/models.hpp"
#include "spanforge/rspan.hpp"
#include "spanforge/spanqcat.hpp"

namespace spanforge {

struct SuiteResult {
  std::string name;
  bool pass = false;
  long budget_ms = 0;
  long elapsed_ms = 0;
  std::string detail;
};

namespace suitedet {

struct Ctx {
  bool ok = true;
  std::ostringstream detail;
  void require(bool cond, const std::string& what) {
    if (!cond) {
      ok = false;
      detail << "FAILED: " << what << "; ";
    }
  }
  void note(const std::string& what) { detail << what << "; "; }
};

/// All labelled posets on n elements, as categories.
inline std::vector<FiniteCategory> all_posets(int n) {
  std::vector<FiniteCategory> out;
  int pairs = n * n;
  for (int mask = 0; mask < (1 << pairs); ++mask) {
    std::vector<std::vector<char>> leq(static_cast<size_t>(n), std::vector<char>(static_cast<size_t>(n), 0));
    bool refl = true;
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) leq[static_cast<size_t>(a)][static_cast<size_t>(b)] = (mask >> (a * n + b)) & 1;
    for (int a = 0; a < n; ++a)
      if (!leq[static_cast<size_t>(a)][static_cast<size_t>(a)]) refl = false;
    if (!refl) continue;
    bool anti = true, trans = true;
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) {
        if (a != b && leq[static_cast<size_t>(a)][static_cast<size_t>(b)] && leq[static_cast<size_t>(b)][static_cast<size_t>(a)])
          anti = false;
        for (int c = 0; c < n; ++c)
          if (leq[static_cast<size_t>(a)][static_cast<size_t>(b)] && leq[static_cast<size_t>(b)][static_cast<size_t>(c)] &&
              !leq[static_cast<size_t>(a)][static_cast<size_t>(c)])
            trans = false;
      }
    if (anti && trans) out.push_back(poset_category(n, leq));
  }
  return out;
}

/// All monoid tables (not necessarily commutative) on 0..n-1 with unit 0.
inline std::vector<FiniteCategory> all_monoids(int n) {
  std::vector<FiniteCategory> out;
  std::vector<std::pair<int, int>> cells;
  for (int a = 1; a < n; ++a)
    for (int b = 1; b < n; ++b) cells.emplace_back(a, b);
  std::vector<std::vector<int>> t(static_cast<size_t>(n), std::vector<int>(static_cast<size_t>(n)));
  for (int a = 0; a < n; ++a) {
    t[0][static_cast<size_t>(a)] = a;
    t[static_cast<size_t>(a)][0] = a;
  }
  std::vector<int> pick(cells.size(), 0);
  while (true) {
    for (size_t i = 0; i < cells.size(); ++i)
      t[static_cast<size_t>(cells[i].first)][static_cast<size_t>(cells[i].second)] = pick[i];
    bool assoc = true;
    for (int a = 0; a < n && assoc; ++a)
      for (int b = 0; b < n && assoc; ++b)
        for (int c = 0; c < n && assoc; ++c)
          if (t[static_cast<size_t>(t[static_cast<size_t>(a)][static_cast<size_t>(b)])][static_cast<size_t>(c)] !=
              t[static_cast<size_t>(a)][static_cast<size_t>(t[static_cast<size_t>(b)][static_cast<size_t>(c)])])
            assoc = false;
    if (assoc) out.push_back(one_object_category(n, 0, t));
    size_t i = pick.size();
    bool adv = false;
    while (i-- > 0) {
      if (pick[i] + 1 < n) {
        ++pick[i];
        std::fill(pick.begin() + static_cast<long>(i) + 1, pick.end(), 0);
        adv = true;
        break;
      }
    }
    if (!adv || cells.empty()) break;
  }
  return out;
}

}  // namespace suitedet

// ---------------------------------------------------------------------------
// Criterion batteries
// ---------------------------------------------------------------------------

/// Span core: composition associativity up to 2-cell isomorphism over all
/// spans on sets of size <= 3 (up to apex relabelling, which the statement is
/// invariant under); equivalences three ways; automorphism class counts.
inline void suite_span_core(suitedet::Ctx& c) {
  int cap = 3;
  std::vector<std::vector<std::vector<Span>>> spans(
      static_cast<size_t>(cap) + 1, std::vector<std::vector<Span>>(static_cast<size_t>(cap) + 1));
  for (int x = 0; x <= cap; ++x)
    for (int y = 0; y <= cap; ++y)
      for_each_sorted_span(x, y, cap, [&](const Span& s) {
        spans[static_cast<size_t>(x)][static_cast<size_t>(y)].push_back(s);
      });

  // every composable pair: the materialized composite is a valid 2-cell and
  // its class key is the matrix product of the factor keys
  auto matmul = [](const std::vector<int>& a, const std::vector<int>& b, int x0, int x1, int x2) {
    std::vector<int> r(static_cast<size_t>(x0 * x2), 0);
    for (int i = 0; i < x0; ++i)
      for (int j = 0; j < x1; ++j)
        for (int k = 0; k < x2; ++k)
          r[static_cast<size_t>(i * x2 + k)] +=
              a[static_cast<size_t>(i * x1 + j)] * b[static_cast<size_t>(j * x2 + k)];
    return r;
  };
  bool pairs_ok = true;
  long pairs = 0;
  for (int x0 = 0; x0 <= cap && pairs_ok; ++x0)
    for (int x1 = 0; x1 <= cap; ++x1)
      for (int x2 = 0; x2 <= cap; ++x2)
        for (const Span& s1 : spans[static_cast<size_t>(x0)][static_cast<size_t>(x1)]) {
          for (const Span& s2 : spans[static_cast<size_t>(x1)][static_cast<size_t>(x2)]) {
            ++pairs;
            Composition comp = compose1(s1, s2);
            if (!validate_cell(comp.two_cell).ok ||
                span_class_key(comp.composite) !=
                    matmul(span_class_key(s1), span_class_key(s2), x0, x1, x2)) {
              pairs_ok = false;
              break;
            }
          }
          if (!pairs_ok) break;
        }
  c.require(pairs_ok, "pair composites validate and multiply on class keys");
  c.note("pairs=" + std::to_string(pairs));

  // direct associativity with materialized pullbacks on the size-2 universe
  bool assoc_small = true;
  long small_triples = 0;
  for (int x0 = 0; x0 <= 2 && assoc_small; ++x0)
    for (int x1 = 0; x1 <= 2; ++x1)
      for (int x2 = 0; x2 <= 2; ++x2)
        for (int x3 = 0; x3 <= 2; ++x3)
          for_each_sorted_span(x0, x1, 2, [&](const Span& s1) {
            for_each_sorted_span(x1, x2, 2, [&](const Span& s2) {
              Span c12 = compose1(s1, s2).composite;
              for_each_sorted_span(x2, x3, 2, [&](const Span& s3) {
                if (!assoc_small) return;
                ++small_triples;
                Span lhs = compose1(c12, s3).composite;
                Span rhs = compose1(s1, compose1(s2, s3).composite).composite;
                if (!spans_isomorphic(lhs, rhs)) assoc_small = false;
              });
            });
          });
  c.require(assoc_small, "materialized associativity on the size-2 universe");
  c.note("small triples=" + std::to_string(small_triples));

  // the full size-3 triple sweep through the key algebra validated above
  std::vector<std::vector<std::vector<std::vector<int>>>> keys(
      static_cast<size_t>(cap) + 1, std::vector<std::vector<std::vector<int>>>(static_cast<size_t>(cap) + 1));
  for (int x = 0; x <= cap; ++x)
    for (int y = 0; y <= cap; ++y)
      for (const Span& s : spans[static_cast<size_t>(x)][static_cast<size_t>(y)])
        keys[static_cast<size_t>(x)][static_cast<size_t>(y)].push_back(span_class_key(s));
  bool assoc = true;
  long triples = 0;
  for (int x0 = 0; x0 <= cap && assoc; ++x0)
    for (int x1 = 0; x1 <= cap; ++x1)
      for (int x2 = 0; x2 <= cap; ++x2)
        for (int x3 = 0; x3 <= cap; ++x3)
          for (const auto& k1 : keys[static_cast<size_t>(x0)][static_cast<size_t>(x1)]) {
            for (const auto& k2 : keys[static_cast<size_t>(x1)][static_cast<size_t>(x2)]) {
              auto k12 = matmul(k1, k2, x0, x1, x2);
              for (const auto& k3 : keys[static_cast<size_t>(x2)][static_cast<size_t>(x3)]) {
                ++triples;
                if (matmul(k12, k3, x0, x2, x3) !=
                    matmul(k1, matmul(k2, k3, x1, x2, x3), x0, x1, x3))
                  assoc = false;
              }
            }
            if (!assoc) break;
          }
  c.require(assoc, "composition associativity up to isomorphism (size-3 sweep)");
  c.note("triples=" + std::to_string(triples));

  bool equiv = true;
  long checked = 0;
  for (int x = 0; x <= cap; ++x)
    for (int y = 0; y <= cap; ++y)
      for (const Span& s : spans[static_cast<size_t>(x)][static_cast<size_t>(y)]) {
        ++checked;
        bool closed_form = is_equivalence(s);
        bool legs = is_bijective(s.l) && is_bijective(s.r);
        bool oracle = equivalence_oracle(s, std::max(x, y) + 1);
        if (closed_form != legs || legs != oracle) equiv = false;
      }
  c.require(equiv, "equivalence routes agree");
  c.note("spans=" + std::to_string(checked));

  for (int k = 0; k <= 4; ++k) {
    long fact = 1;
    for (int i = 2; i <= k; ++i) fact *= i;
    c.require(static_cast<long>(aut_classes(k).size()) == fact,
              "automorphism classes of a " + std::to_string(k) + "-point set");
  }
}

/// Evaluation functoriality plus the two symbolic flagship examples.
inline void suite_eval(suitedet::Ctx& c) {
  // the copying-and-adding operation
  {
    Span op(FinMap(8, 3, {1, 0, 2, 0, 0, 0, 1, 2}), FinMap(8, 4, {0, 0, 1, 3, 3, 3, 3, 3}));
    std::vector<FreeMonoidElt> vars = {fm_var(0, 3), fm_var(1, 3), fm_var(2, 3)};
    auto out = eval_free_monoid(op, vars);
    bool good = out[0] == std::vector<int>{1, 1, 0} && out[1] == std::vector<int>{0, 0, 1} &&
                out[2] == std::vector<int>{0, 0, 0} && out[3] == std::vector<int>{3, 1, 1};
    c.require(good, "symbolic monoid example (b+a, c, 0, a+a+a+b+c)");
  }
  // the copy-multiply-add operation with the distributed fourth slot
  {
    RingSpan op(FinMap(9, 3, {0, 1, 0, 1, 2, 0, 1, 0, 2}), FinMap(9, 6, {0, 1, 2, 2, 2, 4, 4, 5, 5}),
                FinMap(6, 4, {0, 0, 1, 2, 3, 3}));
    std::vector<Poly> vars = {Poly::var(0, 3), Poly::var(1, 3), Poly::var(2, 3)};
    auto out = eval_free_semiring(op, vars);
    Poly a = vars[0], b = vars[1], c2 = vars[2];
    bool good = out[0] == a + b && out[1] == a * b * c2 && out[2] == Poly::one(3) &&
                out[3] == a * b + a * c2;
    c.require(good, "symbolic semiring example (a+b, abc, 1, ab+ac)");
  }
  // monoid functoriality: all isomorphism classes of commutative monoids of
  // order <= 3 against all composable sorted span pairs with sets <= 3
  {
    auto monoids = comm_monoid_reps(3);
    c.note("monoids=" + std::to_string(monoids.size()));
    bool functorial = true;
    long pairs = 0;
    for (int x0 = 0; x0 <= 3 && functorial; ++x0)
      for (int x1 = 0; x1 <= 3; ++x1)
        for (int x2 = 0; x2 <= 3; ++x2)
          for_each_sorted_span(x0, x1, 3, [&](const Span& s) {
            for_each_sorted_span(x1, x2, 3, [&](const Span& t) {
              if (!functorial) return;
              ++pairs;
              Span comp = compose1(s, t).composite;
              for (const CommMonoid& m : monoids) {
                long inputs = int_pow(m.size, x0);
                for (long idx = 0; idx < inputs; ++idx) {
                  auto a = tuple_from_index(idx, m.size, x0);
                  if (eval_in_monoid(comp, m, a) != eval_in_monoid(t, m, eval_in_monoid(s, m, a))) {
                    functorial = false;
                    return;
                  }
                }
              }
            });
          });
    c.require(functorial, "monoid evaluation functoriality");
    c.note("span pairs=" + std::to_string(pairs));
  }
  // semiring functoriality: all semiring classes of order <= 3, ringlike
  // spans with endpoints <= 2 and middles <= 3
  {
    auto semirings = comm_semiring_reps(3);
    c.note("semirings=" + std::to_string(semirings.size()));
    bool functorial = true;
    long pairs = 0;
    std::vector<std::vector<std::vector<RingSpan>>> ringspans(
        3, std::vector<std::vector<RingSpan>>(3));
    for (int x = 0; x <= 2; ++x)
      for (int y = 0; y <= 2; ++y)
        for_each_sorted_ringspan(x, y, 3, 3, [&](const RingSpan& rs) {
          ringspans[static_cast<size_t>(x)][static_cast<size_t>(y)].push_back(rs);
        });
    for (int x0 = 0; x0 <= 2 && functorial; ++x0)
      for (int x1 = 0; x1 <= 2 && functorial; ++x1)
        for (int x2 = 0; x2 <= 2 && functorial; ++x2)
          for (const RingSpan& s : ringspans[static_cast<size_t>(x0)][static_cast<size_t>(x1)]) {
            for (const RingSpan& t : ringspans[static_cast<size_t>(x1)][static_cast<size_t>(x2)]) {
              ++pairs;
              RingSpan comp = compose_ringspans(s, t).composite;
              for (const CommSemiring& sr : semirings) {
                long inputs = int_pow(sr.size, x0);
                for (long idx = 0; idx < inputs; ++idx) {
                  auto a = tuple_from_index(idx, sr.size, x0);
                  if (eval_in_semiring(comp, sr, a) !=
                      eval_in_semiring(t, sr, eval_in_semiring(s, sr, a))) {
                    functorial = false;
                    break;
                  }
                }
                if (!functorial) break;
              }
              if (!functorial) break;
            }
            if (!functorial) break;
          }
    c.require(functorial, "semiring evaluation functoriality");
    c.note("ringspan pairs=" + std::to_string(pairs));
  }
}

/// Quasicategory structure of the span universe and of nerves.
inline void suite_quasicat(suitedet::Ctx& c) {
  SpanN1Report rep = span_check_n1(3);
  c.require(rep.ok, "span universe (2,1)-behaviour: " + rep.first_failure);
  c.note("dim2=" + std::to_string(rep.dim2) + " dim3=" + std::to_string(rep.dim3) +
         " dim4=" + std::to_string(rep.dim4) + " reps=" + std::to_string(rep.dim4_reps));

  std::vector<FiniteCategory> battery;
  for (int n = 1; n <= 3; ++n)
    for (auto& p : suitedet::all_posets(n)) battery.push_back(p);
  for (int n = 1; n <= 3; ++n)
    for (auto& m : suitedet::all_monoids(n)) battery.push_back(m);
  for (auto& cat : small_categories(4)) battery.push_back(cat);
  c.note("categories=" + std::to_string(battery.size()));
  bool nerves_ok = true;
  for (const FiniteCategory& cat : battery) {
    TruncSSet n = nerve(cat, 4);
    QCatReport qr = check_n1_property(n, 1);
    if (!qr.ok) {
      nerves_ok = false;
      c.note("nerve failure: " + qr.first_failure);
      break;
    }
  }
  c.require(nerves_ok, "nerves satisfy the (1,1) lifting battery through dim 4");
}

/// Distributive-law checks for all four laws.
inline void suite_distlaw(suitedet::Ctx& c) {
  // the constant law on a 3-chain nerve, fully materialized
  TruncSSet s = nerve(chain_category(4), 3);
  TruncBiSSet pi1 = pi1_pullback(s, 3);
  LawReport pr = check_distributive_law(pi1, 3, 3);
  c.require(pr.ok, "constant law on the 3-chain nerve: " + pr.first_failure);
  c.note("pi1 horns=" + std::to_string(pr.horns_checked));

  for (auto [law, tag] : {std::make_pair(LazyLaw::DFinset, "d-finset"),
                          std::make_pair(LazyLaw::HatD, "hat-d"),
                          std::make_pair(LazyLaw::DPlus, "d-plus")}) {
    BatteryReport br = lazy_law_battery(law, 3, law == LazyLaw::DPlus ? 700 : 2000);
    c.require(br.ok, std::string(tag) + ": " + br.first_failure);
    c.note(std::string(tag) + " horns=" + std::to_string(br.total_horns));
  }

  // codiagonal comparisons
  {
    auto lhs = grid_codiagonal_cells(2, 2, false);
    auto rhs = span_side_cells(2, 2);
    bool match = true;
    for (int n = 0; n <= 2; ++n) {
      std::set<std::vector<int>> a(lhs[static_cast<size_t>(n)].begin(), lhs[static_cast<size_t>(n)].end());
      std::set<std::vector<int>> b(rhs[static_cast<size_t>(n)].begin(), rhs[static_cast<size_t>(n)].end());
      if (a != b || a.size() != lhs[static_cast<size_t>(n)].size()) match = false;
    }
    c.require(match, "composite cells match span cells in degrees <= 2 (universe cap 2)");
    auto lhs1 = grid_codiagonal_cells(3, 1, false);
    auto rhs1 = span_side_cells(3, 1);
    std::set<std::vector<int>> a(lhs1[1].begin(), lhs1[1].end());
    std::set<std::vector<int>> b(rhs1[1].begin(), rhs1[1].end());
    c.require(a == b, "composite 1-cells match span 1-cells at cap 3");
  }
  c.require(hatd_pointed_map_bijection(3), "restricted-law 1-cells match pointed maps at cap 3");
  c.require(mono_pullback_lemma(4), "pullbacks of monomorphisms are monomorphisms (size <= 4)");
}

/// Distributahedron combinatorics.
inline void suite_distributahedra(suitedet::Ctx& c) {
  Distributahedron xi1 = distributahedron(1, 2, 2);
  Distributahedron xi2 = distributahedron(2, 2, 2);
  c.require(xi1.shape.count(0, 0) == 3, "first distributahedron has 3 vertices");
  c.require(xi2.shape.count(0, 0) == 6, "second distributahedron has 6 vertices");
  c.require(xi1.shape.validate() && xi2.shape.validate(), "bisimplicial identities");
  bool counts = true;
  for (int n = 0; n <= 4; ++n) {
    Distributahedron xi = distributahedron(n, 4, 4);
    if (!xi.shape.validate()) counts = false;
    for (int i = 0; i <= 4; ++i)
      for (int j = 0; j <= 4; ++j)
        if (xi.shape.count(i, j) != distributahedron_count(n, i, j)) counts = false;
  }
  c.require(counts, "closed-form counts match enumeration for n,i,j <= 4");
}

/// Cromulent rectangles, the Mackey bijection, the adjoint triple.
inline void suite_cromulent(suitedet::Ctx& c) {
  // canonical extensions are terminal: full search at small size, the
  // iso-characterization across the larger sweep
  bool slow_ok = true;
  long slow = 0;
  for (int x = 1; x <= 2; ++x)
    for (int y = 0; y <= 2; ++y)
      for (int z = 1; z <= 2; ++z)
        for_each_map(y, x, [&](const FinMap& f) {
          for_each_map(y, z, [&](const FinMap& g) {
            for_each_slice_profile(x, 2, [&](const Slice& a) {
              ++slow;
              CromulentRect r = cromulent_extend(CromulentEdge{a, f, g});
              if (!is_cromulent(r, 4)) slow_ok = false;
            });
          });
        });
  c.require(slow_ok, "canonical rectangles terminal (exhaustive search, bound 4)");
  c.note("terminal searches=" + std::to_string(slow));

  bool fast_ok = true;
  long fast = 0;
  for (int x = 1; x <= 3; ++x)
    for (int y = 0; y <= 3; ++y)
      for (int z = 1; z <= 3; ++z)
        for_each_map(y, x, [&](const FinMap& f) {
          for_each_map(y, z, [&](const FinMap& g) {
            for_each_slice_profile(x, 4, [&](const Slice& a) {
              ++fast;
              CromulentRect r = cromulent_extend(CromulentEdge{a, f, g});
              if (!is_cromulent_canonical(r)) fast_ok = false;
            });
          });
        });
  c.require(fast_ok, "canonical rectangles cromulent across the size-4 sweep");
  c.note("sweep=" + std::to_string(fast));

  // the Mackey bijection with naturality
  bool mackey_ok = true;
  long squares = 0;
  for (int xs = 0; xs <= 2 && mackey_ok; ++xs)
    for (int ys = 0; ys <= 2; ++ys)
      for (int zs = 1; zs <= 2; ++zs)
        for_each_map(xs, zs, [&](const FinMap& beta) {
          for_each_map(ys, zs, [&](const FinMap& g) {
            Pullback pb = canonical_pullback(beta, g);
            SetSquare sq{pb.p1, pb.p2, beta, g};
            ++squares;
            for_each_slice_profile(ys, 2, [&](const Slice& a) {
              MackeyWitness w = check_mackey(sq, a);
              if (!is_bijective(w.iso)) mackey_ok = false;
              for_each_slice_profile(ys, 2, [&](const Slice& a2) {
                for_each_slice_map(a, a2, [&](const FinMap& sm) {
                  if (!mackey_natural(sq, a, a2, sm)) mackey_ok = false;
                });
              });
            });
          });
        });
  c.require(mackey_ok, "Mackey bijections natural on all small pullback squares");
  c.note("squares=" + std::to_string(squares));

  bool adj_ok = true;
  for (int x = 0; x <= 3; ++x)
    for (int y = 1; y <= 3; ++y)
      for_each_map(x, y, [&](const FinMap& f) {
        if (!check_adjoint_triple(f, 3).ok) adj_ok = false;
        if (!check_triangle_identities(f, 3)) adj_ok = false;
      });
  c.require(adj_ok, "adjoint-triple bijections and triangle identities");
}

/// Cartesian morphisms: the closed form against the lifting oracle on every
/// degree-1 arrow cell with sets <= 3, up to relabelling.
inline void suite_cartesian(suitedet::Ctx& c) {
  int cap = 3;
  long cells = 0;
  bool agree = true;
  for (int bx0 = 0; bx0 <= cap && agree; ++bx0)
    for (int bx1 = 0; bx1 <= cap; ++bx1)
      for_each_sorted_span(bx0, bx1, cap, [&](const Span& bottom) {
        if (!agree) return;
        for (int y0 = 0; y0 <= cap; ++y0)
          for_each_sorted_map(y0, bx0, [&](const FinMap& v0) {
            for (int y1 = 0; y1 <= cap; ++y1)
              for_each_sorted_map(y1, bx1, [&](const FinMap& v1) {
                // attribute space: compatible triples (a, b, u)
                std::vector<std::array<int, 3>> attrs;
                for (int a = 0; a < y0; ++a)
                  for (int b = 0; b < y1; ++b)
                    for (int u = 0; u < bottom.apex(); ++u)
                      if (bottom.l(u) == v0(a) && bottom.r(u) == v1(b)) attrs.push_back({a, b, u});
                int na = static_cast<int>(attrs.size());
                // multisets over the attribute space of size <= cap
                std::vector<int> counts(static_cast<size_t>(na), 0);
                while (true) {
                  int total = std::accumulate(counts.begin(), counts.end(), 0);
                  if (total <= cap) {
                    SpanArrowCell f;
                    f.bottom = bottom;
                    f.v0 = v0;
                    f.v1 = v1;
                    std::vector<int> tl, tr, vu;
                    for (int t = 0; t < na; ++t)
                      for (int k = 0; k < counts[static_cast<size_t>(t)]; ++k) {
                        tl.push_back(attrs[static_cast<size_t>(t)][0]);
                        tr.push_back(attrs[static_cast<size_t>(t)][1]);
                        vu.push_back(attrs[static_cast<size_t>(t)][2]);
                      }
                    int apex = static_cast<int>(tl.size());
                    f.top = Span(FinMap(apex, y0, std::move(tl)), FinMap(apex, y1, std::move(tr)));
                    f.vu = FinMap(apex, bottom.apex(), std::move(vu));
                    ++cells;
                    if (is_cartesian_spanx(f) != cartesian_oracle(f)) agree = false;
                  }
                  size_t i = counts.size();
                  bool adv = false;
                  while (i-- > 0) {
                    if (counts[i] < cap) {
                      ++counts[i];
                      std::fill(counts.begin() + static_cast<long>(i) + 1, counts.end(), 0);
                      adv = true;
                      break;
                    }
                  }
                  if (!adv || na == 0) break;
                }
              });
          });
      });
  c.require(agree, "closed form agrees with the lifting oracle");
  c.note("cells=" + std::to_string(cells));
}

/// Homspace automorphisms in the ringlike theory, plus the product proof.
inline void suite_rspan_hom(suitedet::Ctx& c) {
  bool wreath = true;
  long arrows = 0;
  for (int dom = 0; dom <= 5; ++dom)
    for (int cod = 0; cod <= 5; ++cod)
      for_each_sorted_map(dom, cod, [&](const FinMap& g) {
        ++arrows;
        std::vector<int> fs(static_cast<size_t>(cod), 0);
        for (int v : g.img) ++fs[static_cast<size_t>(v)];
        if (arrow_aut_count(g) != wreath_aut_order(fs)) wreath = false;
      });
  c.require(wreath, "arrow automorphism counts match the wreath order");
  c.note("arrows=" + std::to_string(arrows));

  // decorated homspace components carry the same counts over the point
  RingGroupoidDesc g = homspace_rspan(1, 1, 4, 3);
  bool decorated = !g.components.empty();
  for (const auto& comp : g.components) {
    auto fs = Slice(comp.rep.pi).fibre_sizes();
    if (static_cast<long>(comp.auts.size()) != wreath_aut_order(fs)) decorated = false;
  }
  c.require(decorated, "decorated components realize the wreath order");

  for (auto [a, b] : {std::make_pair(1, 1), std::make_pair(2, 1), std::make_pair(0, 1),
                      std::make_pair(2, 2)}) {
    RingProductReport rep = product_cone_rspan(a, b, 2);
    c.require(rep.ok, "product cone checks at (" + std::to_string(a) + "," + std::to_string(b) + ")");
  }
  c.require(ring_iso_uniqueness(1, 1, 2) && ring_iso_uniqueness(2, 1, 2),
            "connecting isomorphisms determined by their parts");
}

/// Ends, coends, and the tower isomorphism over every tiny category.
inline void suite_ends(suitedet::Ctx& c) {
  DinPoset p4 = din_poset(4);
  c.require(p4.elems.size() == 20, "the k=4 poset has 20 elements");
  c.require(p4.poset_axioms(), "poset axioms at k=4");
  c.require(p4.hasse().size() == 28, "the k=4 Hasse diagram has 28 covers");
  bool no_cross = true;
  for (const DinElt& x : p4.elems)
    for (const DinElt& y : p4.elems)
      if (x.upper && !y.upper &&
          p4.leq[static_cast<size_t>(p4.index_of(x))][static_cast<size_t>(p4.index_of(y))])
        no_cross = false;
  c.require(no_cross, "no upper element lies below a lower one");

  FiniteCategory term = discrete_category(1);
  DinStar ds = din_star(term, 3);
  bool counts = true;
  for (int n = 0; n <= 3; ++n)
    if (ds.count(n) != (1 << (2 * n + 1))) counts = false;
  c.require(counts, "terminal tower counts 2^(2n+1)");

  auto cats = small_categories(4);
  c.note("categories=" + std::to_string(cats.size()));
  bool iso_ok = true, nerve_ok = true, co_ok = true, end_ok = true;
  long bifunctors = 0;
  for (const FiniteCategory& cat : cats) {
    if (!din_star_iso(cat).ok) iso_ok = false;
    if (!din_star_is_nerve(din_star(cat, 2))) nerve_ok = false;
    TowerCtx ctx = make_tower_ctx(cat);
    for_each_bifunctor(cat, 3, [&](const SetBifunctor& bf) {
      ++bifunctors;
      if (!coend_matches_oracle(bf, ctx)) co_ok = false;
      if (!end_matches_oracle(bf, ctx)) end_ok = false;
    });
  }
  c.require(iso_ok, "tower category isomorphic to the factorization category");
  c.require(nerve_ok, "towers are nerves of categories");
  c.require(co_ok, "coend agrees with the classical coequalizer");
  c.require(end_ok, "end agrees with the classical limit");
  c.note("bifunctors=" + std::to_string(bifunctors));
}

/// Discrete theory layer.
inline void suite_discrete(suitedet::Ctx& c, uint64_t seed) {
  Rng rng(seed);
  // associativity exhaustively at tiny size and randomized at size <= 4
  bool assoc = true;
  for (int trial = 0; trial < 4000; ++trial) {
    int x = rng.below(4) + 1, y = rng.below(4) + 1, z = rng.below(4) + 1, w = rng.below(4) + 1;
    auto rand_t1 = [&](int from, int to) {
      std::vector<int> img(static_cast<size_t>(to)), al(static_cast<size_t>(to));
      for (int i = 0; i < to; ++i) {
        img[static_cast<size_t>(i)] = rng.below(from);
        al[static_cast<size_t>(i)] = rng.below(3);
      }
      return T1Mor(false, FinMap(to, from, img), al);
    };
    T1Mor p = rand_t1(x, y), q = rand_t1(y, z), r = rand_t1(z, w);
    if (!(t1_compose(t1_compose(p, q), r) == t1_compose(p, t1_compose(q, r)))) assoc = false;
    if (!(t1_compose(t1_identity(x), p) == p)) assoc = false;
  }
  c.require(assoc, "endomorphism-theory composition associative and unital");

  bool span_compat = true;
  for (int trial = 0; trial < 600; ++trial) {
    int x = rng.below(3) + 1, y = rng.below(3) + 1, z = rng.below(3) + 1;
    auto rand_t1 = [&](int from, int to) {
      std::vector<int> img(static_cast<size_t>(to)), al(static_cast<size_t>(to));
      for (int i = 0; i < to; ++i) {
        img[static_cast<size_t>(i)] = rng.below(from);
        al[static_cast<size_t>(i)] = rng.below(3);
      }
      return T1Mor(false, FinMap(to, from, img), al);
    };
    T1Mor a = rand_t1(x, y), b = rand_t1(y, z);
    if (!spans_isomorphic(t1_to_span(t1_compose(a, b)),
                          compose1(t1_to_span(a), t1_to_span(b)).composite))
      span_compat = false;
  }
  c.require(span_compat, "span images compose up to isomorphism");

  c.require(t1_product_universal(1, 1, 2, false) && t1_product_universal(1, 1, 2, true),
            "disjoint unions are products in both variants");

  bool model_ok = true, grouplike_ok = true;
  long monoids = 0;
  for (int n = 1; n <= 4; ++n)
    for_each_comm_monoid(n, [&](const CommMonoid& m) {
      ++monoids;
      if (is_grouplike(m) != m.is_group()) grouplike_ok = false;
      MonoidModel mm = monoid_model(m, 2, 2);
      if (!(extract_monoid(mm) == m) || !model_functorial(mm)) model_ok = false;
    });
  c.require(model_ok, "monoid models round-trip and stay functorial (order <= 4)");
  c.require(grouplike_ok, "grouplike agrees with the group test (order <= 4)");
  c.note("monoid tables=" + std::to_string(monoids));

  bool completion_ok = true, units_ok = true;
  for (const CommMonoid& m : comm_monoid_reps(4)) {
    if (!completion_universal(m, 4)) completion_ok = false;
    if (!units_maximal(m)) units_ok = false;
    GroupCompletion gc = group_completion(m);
    if (units(gc.group).group.size != gc.group.size) units_ok = false;
  }
  c.require(completion_ok, "group completion universal against groups of order <= 4");
  c.require(units_ok, "units maximal and stable under completion");
}

// ---------------------------------------------------------------------------
// Registry
// ---------------------------------------------------------------------------

inline std::vector<std::pair<std::string, long>> suite_registry() {
  return {{"span-core", 30000},      {"eval-functorial", 60000}, {"quasicategory", 60000},
          {"distributive-laws", 60000}, {"distributahedra", 5000},  {"cromulent-mackey", 30000},
          {"cartesian", 30000},      {"rspan-homspaces", 30000}, {"ends-coends", 60000},
          {"discrete-theories", 30000}};
}

inline SuiteResult run_suite(const std::string& name, uint64_t seed = 20260808ull) {
  std::string canon = name;
  if (canon == "rspan-eval") canon = "eval-functorial";
  if (canon == "span-quasicat") canon = "quasicategory";
  SuiteResult res;
  res.name = canon;
  for (auto& [n, budget] : suite_registry())
    if (n == canon) res.budget_ms = budget;
  if (res.budget_ms == 0) throw structural_error("unknown suite: " + name);
  suitedet::Ctx ctx;
  auto t0 = std::chrono::steady_clock::now();
  if (canon == "span-core")
    suite_span_core(ctx);
  else if (canon == "eval-functorial")
    suite_eval(ctx);
  else if (canon == "quasicategory")
    suite_quasicat(ctx);
  else if (canon == "distributive-laws")
    suite_distlaw(ctx);
  else if (canon == "distributahedra")
    suite_distributahedra(ctx);
  else if (canon == "cromulent-mackey")
    suite_cromulent(ctx);
  else if (canon == "cartesian")
    suite_cartesian(ctx);
  else if (canon == "rspan-homspaces")
    suite_rspan_hom(ctx);
  else if (canon == "ends-coends")
    suite_ends(ctx);
  else if (canon == "discrete-theories")
    suite_discrete(ctx, seed);
  auto t1 = std::chrono::steady_clock::now();
  res.elapsed_ms = std::chrono::duration_cast<std::chrono::milliseconds>(t1 - t0).count();
  res.pass = ctx.ok && res.elapsed_ms <= res.budget_ms;
  res.detail = ctx.detail.str();
  if (ctx.ok && res.elapsed_ms > res.budget_ms) res.detail += "OVER TIME BUDGET; ";
  return res;
}

}  // namespace spanforge
