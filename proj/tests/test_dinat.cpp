#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "spanforge/dinat.hpp"

using namespace spanforge;

namespace {

FiniteCategory z2_cat() { return one_object_category(2, 0, {{0, 1}, {1, 0}}); }

SetBifunctor hom_bifunctor(const FiniteCategory& c) {
  SetBifunctor bf;
  bf.base = c;
  bf.opc = opposite_category(c);
  bf.prod = product_category(bf.opc, c);
  SetFunctor f;
  f.cat = &bf.prod;
  f.obj_size.assign(static_cast<size_t>(bf.prod.n_obj), 0);
  // value at (x, y) = arrows x -> y, indexed in arrow order
  std::vector<std::vector<int>> homs(static_cast<size_t>(bf.prod.n_obj));
  for (int x = 0; x < c.n_obj; ++x)
    for (int y = 0; y < c.n_obj; ++y) {
      auto& h = homs[static_cast<size_t>(x * c.n_obj + y)];
      for (int a = 0; a < c.n_arr(); ++a)
        if (c.src[static_cast<size_t>(a)] == x && c.tgt[static_cast<size_t>(a)] == y) h.push_back(a);
      f.obj_size[static_cast<size_t>(x * c.n_obj + y)] = static_cast<int>(h.size());
    }
  f.arr.assign(static_cast<size_t>(bf.prod.n_arr()), FinMap());
  for (int g = 0; g < c.n_arr(); ++g)
    for (int hh = 0; hh < c.n_arr(); ++hh) {
      // action: a |-> g then a then hh when composable
      int sx = c.tgt[static_cast<size_t>(g)], sy = c.src[static_cast<size_t>(hh)];
      int tx = c.src[static_cast<size_t>(g)], ty = c.tgt[static_cast<size_t>(hh)];
      const auto& from = homs[static_cast<size_t>(sx * c.n_obj + sy)];
      const auto& to = homs[static_cast<size_t>(tx * c.n_obj + ty)];
      std::vector<int> img;
      for (int a : from) {
        int r = c.comp(c.comp(g, a), hh);
        img.push_back(static_cast<int>(std::find(to.begin(), to.end(), r) - to.begin()));
      }
      f.arr[static_cast<size_t>(g * c.n_arr() + hh)] =
          FinMap(static_cast<int>(from.size()), static_cast<int>(to.size()), std::move(img));
    }
  bf.f = f;
  bf.f.cat = &bf.prod;
  return bf;
}

}  // namespace

TEST_CASE("din_poset: sizes, axioms, the k=4 Hasse diagram") {
  DinPoset p1 = din_poset(1);
  CHECK(p1.elems.size() == 2);
  CHECK(p1.poset_axioms());
  CHECK(p1.leq[static_cast<size_t>(p1.index_of({0, 0, false}))]
              [static_cast<size_t>(p1.index_of({0, 0, true}))]);

  for (int k = 1; k <= 6; ++k) {
    DinPoset p = din_poset(k);
    CHECK(static_cast<int>(p.elems.size()) == k * (k + 1));
    CHECK(p.poset_axioms());
    // no upper element ever sits below a lower one
    for (const DinElt& x : p.elems)
      for (const DinElt& y : p.elems)
        if (x.upper && !y.upper)
          CHECK_FALSE(p.leq[static_cast<size_t>(p.index_of(x))][static_cast<size_t>(p.index_of(y))]);
  }

  DinPoset p4 = din_poset(4);
  CHECK(p4.elems.size() == 20);
  auto hasse = p4.hasse();
  CHECK(hasse.size() == 28);
  auto covers = [&](DinElt a, DinElt b) {
    return std::find(hasse.begin(), hasse.end(),
                     std::make_pair(p4.index_of(a), p4.index_of(b))) != hasse.end();
  };
  // spot checks against the displayed diagram
  CHECK(covers({0, 3, false}, {0, 2, false}));
  CHECK(covers({0, 3, false}, {1, 3, false}));
  CHECK(covers({0, 0, false}, {0, 0, true}));
  CHECK(covers({1, 1, false}, {1, 1, true}));
  CHECK(covers({1, 1, true}, {0, 1, true}));
  CHECK(covers({1, 2, true}, {0, 2, true}));
  CHECK(covers({1, 2, true}, {1, 3, true}));
  CHECK(covers({0, 2, true}, {0, 3, true}));
  CHECK_FALSE(covers({0, 1, false}, {0, 1, true}));  // only singletons cross directly
}

TEST_CASE("din_star: level counts") {
  FiniteCategory term = discrete_category(1);
  DinStar ds = din_star(term, 3);
  for (int n = 0; n <= 3; ++n) CHECK(ds.count(n) == (1 << (2 * n + 1)));

  FiniteCategory c3 = chain_category(3);
  DinStar ds3 = din_star(c3, 2);
  CHECK(ds3.count(0) == c3.n_obj + c3.n_arr());

  // discrete categories contribute nondegenerate towers only through
  // singleton intervals: every cell's chain is a point or an identity
  FiniteCategory d2 = discrete_category(2);
  DinStar dsd = din_star(d2, 2);
  for (int id = 0; id < dsd.count(1); ++id) {
    const DinCellData& d = dsd.cells[1][static_cast<size_t>(id)];
    for (int f : d.chain) CHECK(d2.is_id(f));
  }
}

TEST_CASE("din_star is the nerve of a category") {
  for (const FiniteCategory& c :
       {chain_category(2), chain_category(3), discrete_category(2), z2_cat()}) {
    DinStar ds = din_star(c, 3);
    CHECK(din_star_is_nerve(ds));
  }
}

TEST_CASE("din_star_iso: strict isomorphism with the factorization category") {
  // terminal: the augmentation has two arrows, so two objects
  FiniteCategory term = discrete_category(1);
  DinStarIso it = din_star_iso(term);
  CHECK(it.ok);
  CHECK(it.obj_map.size() == 2);

  // free arrow 0 -> 1: augmentation has 2 units + 3 tilde arrows
  DinStarIso ia = din_star_iso(chain_category(2));
  CHECK(ia.ok);
  CHECK(ia.obj_map.size() == 5);

  for (const FiniteCategory& c : {chain_category(3), z2_cat(), discrete_category(2)}) {
    DinStarIso iso = din_star_iso(c);
    CHECK(iso.ok);
  }
}

TEST_CASE("coend and end of the hom bifunctor") {
  // one-object group: coend = conjugacy classes, end = centre
  FiniteCategory z2 = z2_cat();
  SetBifunctor hom = hom_bifunctor(z2);
  CHECK(hom.f.validate());
  MlendResult ml = mlend_oracle(hom);
  CHECK(ml.size == 2);  // conjugacy classes of the order-2 group
  CoendResult co = coend_via_tower(hom);
  CHECK(co.size == 2);
  CHECK(coend_matches_oracle(hom));
  CHECK(end_classical(hom).size() == 2);  // the centre
  CHECK(end_matches_oracle(hom));

  // the symmetric group on three letters: 3 conjugacy classes, centre 1
  std::vector<std::vector<int>> s3(6, std::vector<int>(6));
  // permutations of {0,1,2} encoded 0..5: id, (01), (02), (12), (012), (021)
  auto mulperm = [](std::array<int, 3> a, std::array<int, 3> b) {
    std::array<int, 3> r{};
    for (int i = 0; i < 3; ++i) r[static_cast<size_t>(i)] = b[static_cast<size_t>(a[static_cast<size_t>(i)])];
    return r;
  };
  std::vector<std::array<int, 3>> perms = {{0, 1, 2}, {1, 0, 2}, {2, 1, 0},
                                           {0, 2, 1}, {1, 2, 0}, {2, 0, 1}};
  for (int a = 0; a < 6; ++a)
    for (int b = 0; b < 6; ++b) {
      auto r = mulperm(perms[static_cast<size_t>(a)], perms[static_cast<size_t>(b)]);
      s3[static_cast<size_t>(a)][static_cast<size_t>(b)] =
          static_cast<int>(std::find(perms.begin(), perms.end(), r) - perms.begin());
    }
  FiniteCategory s3cat = one_object_category(6, 0, s3);
  REQUIRE(s3cat.validate());
  SetBifunctor homs3 = hom_bifunctor(s3cat);
  CHECK(mlend_oracle(homs3).size == 3);
  CHECK(coend_via_tower(homs3).size == 3);
  CHECK(coend_matches_oracle(homs3));
  CHECK(end_classical(homs3).size() == 1);
  CHECK(end_matches_oracle(homs3));
}

TEST_CASE("constant bifunctors over a connected category") {
  FiniteCategory c = chain_category(2);
  // constant value of size 3
  SetBifunctor bf;
  bf.base = c;
  bf.opc = opposite_category(c);
  bf.prod = product_category(bf.opc, c);
  SetFunctor f;
  f.cat = &bf.prod;
  f.obj_size.assign(static_cast<size_t>(bf.prod.n_obj), 3);
  f.arr.assign(static_cast<size_t>(bf.prod.n_arr()), identity_map(3));
  bf.f = f;
  bf.f.cat = &bf.prod;
  REQUIRE(bf.f.validate());
  CHECK(coend_via_tower(bf).size == 3);
  CHECK(mlend_oracle(bf).size == 3);
  CHECK(coend_matches_oracle(bf));
  CHECK(end_classical(bf).size() == 3);
  CHECK(end_matches_oracle(bf));
}

TEST_CASE("exhaustive bifunctor battery over tiny categories") {
  // all categories with <= 2 objects and <= 3 arrows, all bifunctors with
  // values <= 2; the acceptance suite runs the larger stated bounds
  auto cats = small_categories(3);
  CHECK(!cats.empty());
  long bifunctors = 0;
  for (const FiniteCategory& c : cats) {
    for_each_bifunctor(c, 2, [&](const SetBifunctor& bf) {
      ++bifunctors;
      REQUIRE(coend_matches_oracle(bf));
      REQUIRE(end_matches_oracle(bf));
    });
    CHECK(din_star_iso(c).ok);
  }
  CHECK(bifunctors > 0);
}
