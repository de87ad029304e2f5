#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "spanforge/spanqcat.hpp"

using namespace spanforge;

namespace {

Span mul_span() { return Span(FinMap(2, 1, {0, 0}), FinMap(2, 1, {0, 0})); }

}  // namespace

TEST_CASE("compose1: identity, doubling, empty") {
  Span s(FinMap(2, 2, {0, 1}), FinMap(2, 3, {0, 2}));
  Span c = compose1(identity_span(2), s).composite;
  CHECK(spans_isomorphic(c, s));
  CHECK(validate_cell(compose1(identity_span(2), s).two_cell).ok);

  // the free-monoid multiplication span composed with itself doubles: 1<-4->1
  Span m2 = compose1(mul_span(), mul_span()).composite;
  CHECK(m2.apex() == 4);
  CHECK(m2.x0() == 1);
  CHECK(m2.x1() == 1);

  Span empty(FinMap(0, 2, {}), FinMap(0, 3, {}));
  Span t(FinMap(2, 3, {0, 1}), FinMap(2, 2, {1, 1}));
  CHECK(compose1(empty, t).composite.apex() == 0);
  CHECK_THROWS_AS(compose1(s, s), structural_error);
}

TEST_CASE("validate_cell flags a shrunken apex") {
  Composition c = compose1(mul_span(), mul_span());
  CHECK(validate_cell(c.two_cell).ok);
  SpanCell bad = c.two_cell;
  // chop one element off the top apex
  bad.sizes[static_cast<size_t>(bad.idx(0, 2))] = 3;
  bad.left(0, 2) = FinMap(3, 2, {0, 0, 1});
  bad.right(0, 2) = FinMap(3, 2, {0, 1, 0});
  auto rep = validate_cell(bad);
  CHECK_FALSE(rep.ok);
  CHECK(rep.bad_squares == std::vector<std::pair<int, int>>{{0, 2}});
}

TEST_CASE("iso_of_spans: reflexive, size-separated, relabel-detected") {
  Span s(FinMap(3, 2, {0, 0, 1}), FinMap(3, 2, {1, 0, 0}));
  auto self_iso = iso_of_spans(s, s);
  REQUIRE(self_iso.has_value());
  CHECK(is_bijective(*self_iso));
  Span smaller(FinMap(2, 2, {0, 0}), FinMap(2, 2, {1, 0}));
  CHECK_FALSE(iso_of_spans(s, smaller).has_value());
  // permuted apex
  Span p(FinMap(3, 2, {1, 0, 0}), FinMap(3, 2, {0, 1, 0}));
  auto iso = iso_of_spans(s, p);
  REQUIRE(iso.has_value());
  CHECK(compose(*iso, p.l) == s.l);
  CHECK(compose(*iso, p.r) == s.r);
}

TEST_CASE("is_equivalence matches the two-sided-inverse search") {
  CHECK(is_equivalence(identity_span(3)));
  CHECK_FALSE(is_equivalence(mul_span()));
  CHECK_FALSE(equivalence_oracle(mul_span(), 4));
  // permutation spans are equivalences
  Span perm(identity_map(3), FinMap(3, 3, {1, 2, 0}));
  CHECK(is_equivalence(perm));
  CHECK(equivalence_oracle(perm, 4));
  // exhaustive agreement over spans with sets <= 2
  for (int x = 0; x <= 2; ++x)
    for (int y = 0; y <= 2; ++y)
      for_each_sorted_span(x, y, 2, [&](const Span& s) {
        CHECK(is_equivalence(s) == equivalence_oracle(s, std::max(x, y) + 1));
      });
}

TEST_CASE("aut_classes counts k!") {
  CHECK(aut_classes(0).size() == 1);
  CHECK(aut_classes(1).size() == 1);
  CHECK(aut_classes(2).size() == 2);
  CHECK(aut_classes(3).size() == 6);
  // brute force: equivalence spans with apex <= |X| fall into the same classes
  int k = 3;
  std::vector<std::vector<int>> keys;
  for_each_span(k, k, k, [&](const Span& s) {
    if (!is_equivalence(s)) return;
    auto key = span_class_key(s);
    if (std::find(keys.begin(), keys.end(), key) == keys.end()) keys.push_back(key);
  });
  CHECK(keys.size() == 6);
}

TEST_CASE("L and R of pointed maps") {
  PointedMap idm{2, 2, {0, 1}};
  CHECK(l_of(idm) == identity_span(2));
  // total collapse {1,2}+ -> {1}+
  PointedMap collapse{2, 1, {0, 0}};
  Span lc = l_of(collapse);
  CHECK(lc.apex() == 2);
  CHECK(is_bijective(lc.l));
  CHECK(lc.r == FinMap(2, 1, {0, 0}));
  // everything to the basepoint
  PointedMap zap{2, 3, {-1, -1}};
  CHECK(l_of(zap).apex() == 0);
  // R reverses
  CHECK(r_of(collapse).x0() == 1);
  // functoriality up to the composition 2-cell
  PointedMap f{2, 2, {1, -1}};
  PointedMap g{2, 1, {0, 0}};
  Span lhs = l_of(compose_pointed(f, g));
  Span rhs = compose1(l_of(f), l_of(g)).composite;
  CHECK(spans_isomorphic(lhs, rhs));
  Span rl = r_of(compose_pointed(f, g));
  Span rr = compose1(r_of(g), r_of(f)).composite;
  CHECK(spans_isomorphic(rl, rr));
}

TEST_CASE("eval_in_monoid: the copying-and-adding formula") {
  // (a,b,c) |-> (b+a, c, 0, a+a+a+b+c) as a span 3 -> 4
  Span op(FinMap(8, 3, {1, 0, 2, 0, 0, 0, 1, 2}), FinMap(8, 4, {0, 0, 1, 3, 3, 3, 3, 3}));
  std::vector<FreeMonoidElt> vars = {fm_var(0, 3), fm_var(1, 3), fm_var(2, 3)};
  auto out = eval_free_monoid(op, vars);
  CHECK(out[0] == std::vector<int>{1, 1, 0});  // a + b
  CHECK(out[1] == std::vector<int>{0, 0, 1});  // c
  CHECK(out[2] == std::vector<int>{0, 0, 0});  // empty sum
  CHECK(out[3] == std::vector<int>{3, 1, 1});  // 3a + b + c

  // identity span evaluates to the identity
  CommMonoid z3 = cyclic_group(3);
  std::vector<int> a = {2, 1};
  CHECK(eval_in_monoid(identity_span(2), z3, a) == a);

  CommMonoid bad{2, 0, {{0, 1}, {1, 1}}};
  bad.add[1][0] = 0;  // breaks commutativity
  CHECK_THROWS_AS(eval_in_monoid(identity_span(2), bad, {0, 0}), structural_error);
}

TEST_CASE("eval functoriality on a randomized small battery") {
  Rng rng(12345);
  CommMonoid m = saturating_naturals(3);
  for (int trial = 0; trial < 200; ++trial) {
    int x0 = rng.below(3) + 1, x1 = rng.below(3) + 1, x2 = rng.below(3) + 1;
    auto rand_span = [&](int a, int b) {
      int u = rng.below(4);
      std::vector<int> li(static_cast<size_t>(u)), ri(static_cast<size_t>(u));
      for (int i = 0; i < u; ++i) {
        li[static_cast<size_t>(i)] = rng.below(a);
        ri[static_cast<size_t>(i)] = rng.below(b);
      }
      return Span(FinMap(u, a, li), FinMap(u, b, ri));
    };
    Span s = rand_span(x0, x1), t = rand_span(x1, x2);
    Span c = compose1(s, t).composite;
    std::vector<int> a(static_cast<size_t>(x0));
    for (auto& v : a) v = rng.below(m.size);
    CHECK(eval_in_monoid(c, m, a) == eval_in_monoid(t, m, eval_in_monoid(s, m, a)));
  }
}

TEST_CASE("ho(Span): class composition is representative independent") {
  HoSpanClass mul = ho_class(mul_span());
  HoSpanClass four = ho_compose(mul, mul);
  CHECK(four.key == std::vector<int>{4});
  HoSpanClass idc = ho_class(identity_span(1));
  CHECK(ho_compose(idc, mul) == mul);
  // all pairs of isomorphic representatives compose to the same class
  for_each_sorted_span(2, 1, 2, [&](const Span& s) {
    for_each_sorted_span(1, 2, 2, [&](const Span& t) {
      HoSpanClass want = ho_class(compose1(s, t).composite);
      for_each_permutation(s.apex(), [&](const FinMap& p) {
        Span s2(compose(inverse(p), s.l), compose(inverse(p), s.r));
        for_each_permutation(t.apex(), [&](const FinMap& q) {
          Span t2(compose(inverse(q), t.l), compose(inverse(q), t.r));
          CHECK(ho_class(compose1(s2, t2).composite) == want);
        });
      });
    });
  });
}

TEST_CASE("homspace: Barratt-Eccles style components") {
  GroupoidDesc g = homspace(1, 1, 3);
  CHECK(g.components.size() == 4);  // sizes 0..3
  for (const auto& comp : g.components) {
    long factorial = 1;
    for (int i = 2; i <= comp.rep.apex(); ++i) factorial *= i;
    CHECK(static_cast<long>(comp.auts.size()) == factorial);
  }
  // composition is matrix multiplication on fibre profiles
  Span s(FinMap(3, 2, {0, 0, 1}), FinMap(3, 2, {0, 1, 1}));
  Span t(FinMap(2, 2, {0, 1}), FinMap(2, 2, {0, 0}));
  auto key = span_class_key(compose1(s, t).composite);
  // expected: fibre over (x,z) = sum_y s_xy * t_yz
  auto ks = span_class_key(s);
  auto kt = span_class_key(t);
  for (int x = 0; x < 2; ++x)
    for (int z = 0; z < 2; ++z) {
      int want = 0;
      for (int y = 0; y < 2; ++y)
        want += ks[static_cast<size_t>(x * 2 + y)] * kt[static_cast<size_t>(y * 2 + z)];
      CHECK(key[static_cast<size_t>(x * 2 + z)] == want);
    }
}

TEST_CASE("monoid models: trivial, xor, round trips") {
  MonoidModel trivial = monoid_model(trivial_monoid(), 2, 2);
  CHECK(extract_monoid(trivial) == trivial_monoid());
  CHECK(model_functorial(trivial));

  CommMonoid z2 = cyclic_group(2);
  MonoidModel mz2 = monoid_model(z2, 2, 2);
  auto xor_tab = mz2.tables.at({{2, 1}, span_class_key(Span(identity_map(2), FinMap(2, 1, {0, 0})))});
  CHECK(xor_tab[static_cast<size_t>(tuple_index({0, 1}, 2))] == 1);
  CHECK(xor_tab[static_cast<size_t>(tuple_index({1, 1}, 2))] == 0);
  CHECK(extract_monoid(mz2) == z2);

  for (const CommMonoid& m : comm_monoid_reps(3)) {
    MonoidModel mm = monoid_model(m, 2, 2);
    CHECK(extract_monoid(mm) == m);
    CHECK(model_functorial(mm));
  }
}

TEST_CASE("cartesian predicate and oracle on crafted cells") {
  // lambda = id and right square a canonical pullback: cartesian
  Span bottom = mul_span();  // 1 <- 2 -> 1
  FinMap v1 = identity_map(1);
  Pullback pb = canonical_pullback(bottom.r, v1);
  REQUIRE(pb.apex.size == 2);
  SpanArrowCell good;
  good.bottom = bottom;
  good.v1 = v1;
  good.vu = pb.p1;
  good.top = Span(identity_map(2), pb.p2);
  good.v0 = compose(pb.p1, bottom.l);
  CHECK(good.well_formed());
  CHECK(is_cartesian_spanx(good));
  CHECK(cartesian_oracle(good));

  // right square still a pullback but lambda collapses two points
  SpanArrowCell bad = good;
  bad.top = Span(constant_map(2, 1, 0), pb.p2);
  bad.v0 = FinMap(1, 1, {0});
  CHECK(bad.well_formed());
  CHECK_FALSE(is_cartesian_spanx(bad));
  CHECK_FALSE(cartesian_oracle(bad));

  // top apex misses a pullback point
  SpanArrowCell gap = good;
  gap.top = Span(FinMap(1, 2, {0}), FinMap(1, 1, {0}));
  gap.vu = FinMap(1, 2, {0});
  gap.v0 = FinMap(2, 1, {0, 0});
  CHECK(gap.well_formed());
  CHECK_FALSE(is_cartesian_spanx(gap));
  CHECK_FALSE(cartesian_oracle(gap));
}

TEST_CASE("span products and coproducts at small size") {
  auto rep = product_cone(1, 1, 2);
  CHECK(rep.ok);
  CHECK(rep.cones_checked > 0);
  auto rep2 = product_cone(0, 0, 2);
  CHECK(rep2.ok);
  auto rep3 = product_cone(2, 1, 2);
  CHECK(rep3.ok);
  auto corep = coproduct_cone(1, 1, 2);
  CHECK(corep.ok);
  CHECK(coproduct_cone(2, 1, 2).ok);
}

TEST_CASE("span quasicategory checks at cap 2") {
  SpanN1Report rep = span_check_n1(2);
  CHECK(rep.ok);
  CHECK(rep.dim2 > 0);
  CHECK(rep.dim3 > 0);
  CHECK(rep.dim4 > 0);
}
