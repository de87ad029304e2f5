#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "spanforge/models.hpp"

using namespace spanforge;

TEST_CASE("t1_compose: the displayed formula and unit laws") {
  // (id, m)(id, n) on the singleton adds the counts
  T1Mor a(false, identity_map(1), {2});
  T1Mor b(false, identity_map(1), {3});
  T1Mor c = t1_compose(a, b);
  CHECK(c.alpha == std::vector<int>{5});

  // zero counts compose like backwards set maps
  T1Mor f(false, FinMap(2, 3, {0, 2}), {0, 0});
  T1Mor g(false, FinMap(1, 2, {1}), {0});
  T1Mor fg = t1_compose(f, g);
  CHECK(fg.f == compose(FinMap(1, 2, {1}), FinMap(2, 3, {0, 2})));
  CHECK(fg.alpha == std::vector<int>{0});

  CHECK_THROWS_AS(t1_compose(a, T1Mor(true, identity_map(1), {0})), structural_error);
  CHECK_THROWS_AS(T1Mor(false, identity_map(1), {-1}), structural_error);

  // associativity and units over random small data
  Rng rng(99);
  for (int trial = 0; trial < 300; ++trial) {
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
    CHECK(t1_compose(t1_compose(p, q), r) == t1_compose(p, t1_compose(q, r)));
    CHECK(t1_compose(t1_identity(x), p) == p);
    CHECK(t1_compose(p, t1_identity(y)) == p);
  }
}

TEST_CASE("t1_to_span: doubling, the fold, composition compatibility") {
  // zero counts: pure doubling
  T1Mor plain(false, FinMap(2, 2, {1, 0}), {0, 0});
  Span s = t1_to_span(plain);
  CHECK(s.apex() == 4);
  CHECK(s.x0() == 4);
  CHECK(s.x1() == 4);

  // singleton with two applications: 2 <- 4 -> 2
  T1Mor twice(false, identity_map(1), {2});
  Span st = t1_to_span(twice);
  CHECK(st.apex() == 4);
  CHECK(st.x0() == 2);
  CHECK(st.x1() == 2);
  // the two extra points fold into the second output copy
  CHECK(st.r.img == std::vector<int>{0, 1, 1, 1});
  CHECK(st.l.img == std::vector<int>{0, 1, 0, 0});

  CHECK_THROWS_AS(t1_to_span(T1Mor(true, identity_map(1), {1})), structural_error);

  // functoriality up to span isomorphism
  Rng rng(7);
  for (int trial = 0; trial < 120; ++trial) {
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
    Span lhs = t1_to_span(t1_compose(a, b));
    Span rhs = compose1(t1_to_span(a), t1_to_span(b)).composite;
    CHECK(spans_isomorphic(lhs, rhs));
  }
}

TEST_CASE("is_grouplike agrees with the group test") {
  CHECK(is_grouplike(trivial_monoid()));
  CHECK(is_grouplike(cyclic_group(3)));
  CHECK_FALSE(is_grouplike(saturating_naturals(3)));
  for (int n = 1; n <= 4; ++n)
    for_each_comm_monoid(n, [&](const CommMonoid& m) { CHECK(is_grouplike(m) == m.is_group()); });
}

TEST_CASE("group completion: groups, absorbing examples, universality") {
  // a group completes to itself
  GroupCompletion gz3 = group_completion(cyclic_group(3));
  CHECK(gz3.group.size == 3);
  CHECK(is_bijective(gz3.unit_map));

  // {0, 1} with absorbing 1 collapses
  CommMonoid absorb{2, 0, {{0, 1}, {1, 1}}};
  REQUIRE(absorb.valid());
  CHECK(group_completion(absorb).group.size == 1);

  // saturating naturals collapse too
  CHECK(group_completion(saturating_naturals(3)).group.size == 1);

  // universal property against enumerated groups of order <= 3
  for (const CommMonoid& m : comm_monoid_reps(3)) CHECK(completion_universal(m, 3));

  // units of a completion are everything
  for (const CommMonoid& m : comm_monoid_reps(3)) {
    GroupCompletion gc = group_completion(m);
    CHECK(units(gc.group).group.size == gc.group.size);
  }
}

TEST_CASE("units: tables and maximality") {
  CHECK(units(cyclic_group(4)).group.size == 4);
  // multiplicative units of integers mod 4 are {1, 3}
  UnitsResult u = units(naturals_mod(4));
  CHECK(u.group.size == 2);
  std::vector<int> incl = u.inclusion.img;
  std::sort(incl.begin(), incl.end());
  CHECK(incl == std::vector<int>{1, 3});

  for (const CommMonoid& m : comm_monoid_reps(4)) CHECK(units_maximal(m));
}

TEST_CASE("t1 products are disjoint unions") {
  CHECK(t1_product_universal(1, 1, 2, false));
  CHECK(t1_product_universal(1, 2, 1, false));
  CHECK(t1_product_universal(1, 1, 2, true));
}
