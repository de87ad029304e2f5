#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "spanforge/algebra.hpp"
#include "spanforge/simplicial.hpp"

using namespace spanforge;

namespace {

std::vector<int> nd_counts(const TruncSSet& x) {
  std::vector<int> out;
  for (int m = 0; m <= x.maxdim; ++m) out.push_back(x.nd_size(m));
  while (!out.empty() && out.back() == 0) out.pop_back();
  return out;
}

// flatten join labels: drop "-" parts so nesting is invisible
std::string flat(const std::string& l) {
  std::string out, piece;
  auto push = [&] {
    if (!piece.empty() && piece != "-") {
      if (!out.empty()) out += "*";
      out += piece;
    }
    piece.clear();
  };
  for (char ch : l) {
    if (ch == '*') {
      push();
    } else {
      piece += ch;
    }
  }
  push();
  return out;
}

}  // namespace

TEST_CASE("standard simplices, boundaries and horns have the right cells") {
  TruncSSet d2 = standard_simplex(2, 4);
  CHECK(nd_counts(d2) == std::vector<int>{3, 3, 1});
  CHECK(d2.validate());
  CHECK(nd_counts(horn(2, 1, 4)) == std::vector<int>{3, 2});
  CHECK(nd_counts(boundary(3, 4)) == std::vector<int>{4, 6, 4});
  CHECK(horn(2, 1, 4).validate());
  CHECK(boundary(3, 4).validate());
  CHECK_THROWS_AS(horn(2, 3, 4), structural_error);
  // total cell counts including degeneracies: level m of the n-simplex has
  // C(n + m + 1, m + 1) - wait, monotone maps [m] -> [n]; spot check small
  CHECK(d2.size(0) == 3);
  CHECK(d2.size(1) == 6);   // monotone pairs in {0,1,2}
  CHECK(d2.size(2) == 10);  // monotone triples
}

TEST_CASE("join: unit, simplices, and the count formula") {
  TruncSSet empty = standard_simplex(0, 3);  // placeholder, not used for unit
  SSetBuilder eb(3);
  TruncSSet really_empty = eb.finish();
  TruncSSet k = standard_simplex(1, 3);
  TruncSSet j1 = join(really_empty, k, 3);
  CHECK(nd_counts(j1) == nd_counts(k));
  CHECK(j1.validate());

  // join of simplices is a simplex
  TruncSSet d01 = join(standard_simplex(1, 3), standard_simplex(0, 3), 3);
  CHECK(nd_counts(d01) == nd_counts(standard_simplex(2, 3)));
  CHECK(d01.validate());

  // count formula: (K*L)_n = sum over i+j=n-1 of K_i x L_j
  TruncSSet kk = standard_simplex(1, 3);
  TruncSSet jj = join(kk, kk, 3);
  for (int n = 0; n <= 3; ++n) {
    long expect = 0;
    for (int i = -1; i <= n; ++i) {
      int j = n - 1 - i;
      long a = (i == -1) ? 1 : kk.size(i);
      long b = (j == -1) ? 1 : kk.size(j);
      if (i == -1 && j == -1) continue;
      expect += a * b;
    }
    CHECK(jj.size(n) == expect);
  }
  CHECK(jj.validate());
  (void)empty;
}

TEST_CASE("join associativity up to the canonical relabel") {
  TruncSSet a = standard_simplex(1, 4);
  TruncSSet b = standard_simplex(0, 4);
  TruncSSet c = boundary(2, 4);
  auto prefix = [](TruncSSet& x, const std::string& p) {
    for (auto& lvl : x.nd_label)
      for (auto& l : lvl) l = p + l;
  };
  prefix(a, "a");
  prefix(b, "b");
  prefix(c, "c");
  TruncSSet left = join(join(a, b, 4), c, 4);
  TruncSSet right = join(a, join(b, c, 4), 4);
  CHECK(isomorphic_by_labels(left, right, flat));
}

TEST_CASE("nerve: chains, discrete categories, groups") {
  TruncSSet n3 = nerve(chain_category(3), 4);
  CHECK(nd_counts(n3) == std::vector<int>{3, 3, 1});
  CHECK(n3.validate());

  // group with 2 elements: level-2 cells (all chains incl. degenerate) = 4
  FiniteCategory z2 = one_object_category(2, 0, {{0, 1}, {1, 0}});
  TruncSSet nz2 = nerve(z2, 4);
  CHECK(nz2.size(2) == 4);
  CHECK(nz2.validate());

  TruncSSet nd = nerve(discrete_category(3), 3);
  CHECK(nd_counts(nd) == std::vector<int>{3});
  CHECK(nd.validate());
}

TEST_CASE("find_fillers: inner horns into nerves fill uniquely") {
  FiniteCategory c3 = chain_category(3);
  TruncSSet n = nerve(c3, 3);
  int found = 0;
  for_each_horn(n, 2, 1, [&](const HornInstance& h) {
    auto fillers = find_fillers(n, h);
    CHECK(fillers.size() == 1);
    ++found;
  });
  CHECK(found > 0);
  // horn maps via SSetMap round through the same fillers
  TruncSSet lam = horn(2, 1, 2);
  // build the map sending the horn onto the chain 0 -> 1 -> 2
  SSetMap m;
  m.source = &lam;
  m.target = &n;
  m.assign.assign(3, {});
  // vertex labels "0","1","2"; edges "01","12"
  for (int id = 0; id < lam.nd_size(0); ++id) {
    int v = lam.nd_label[0][static_cast<size_t>(id)][0] - '0';
    // nerve 0-cells are objects in order
    m.assign[0].push_back(CellNF{0, v, {}});
  }
  for (int id = 0; id < lam.nd_size(1); ++id) {
    std::string l = lam.nd_label[1][static_cast<size_t>(id)];
    // find the nerve 1-cell from l[0] to l[1]
    int want_src = l[0] - '0', want_tgt = l[1] - '0';
    bool placed = false;
    for (int a = 0; a < c3.n_arr() && !placed; ++a)
      if (!c3.is_id(a) && c3.src[static_cast<size_t>(a)] == want_src &&
          c3.tgt[static_cast<size_t>(a)] == want_tgt) {
        for (int nd = 0; nd < n.nd_size(1); ++nd)
          if (n.nd_label[1][static_cast<size_t>(nd)] == "f" + std::to_string(a) + ".") {
            m.assign[1].push_back(CellNF{1, nd, {}});
            placed = true;
            break;
          }
      }
    REQUIRE(placed);
  }
  CHECK(m.validate());
  auto fillers = find_fillers(n, 2, 1, m);
  CHECK(fillers.size() == 1);
}

TEST_CASE("outer horns into a nerve of a non-groupoid can be unfillable") {
  FiniteCategory c2 = chain_category(2);
  TruncSSet n = nerve(c2, 2);
  bool some_empty = false;
  for_each_horn(n, 2, 0, [&](const HornInstance& h) {
    if (find_fillers(n, h).empty()) some_empty = true;
  });
  CHECK(some_empty);
}

TEST_CASE("check_n1_property: nerves pass n=1 through dimension 4") {
  for (const FiniteCategory& c :
       {chain_category(3), discrete_category(2), one_object_category(2, 0, {{0, 1}, {1, 0}}),
        poset_category(3, {{1, 1, 1}, {0, 1, 0}, {0, 0, 1}})}) {
    TruncSSet n = nerve(c, 4);
    QCatReport rep = check_n1_property(n, 1);
    CHECK(rep.ok);
    CHECK(rep.horns_checked > 0);
  }
}

TEST_CASE("a complex with a doubled 2-cell fails uniqueness at an inner horn") {
  // nerve of Z/2 with one nondegenerate 2-cell duplicated
  FiniteCategory z2 = one_object_category(2, 0, {{0, 1}, {1, 0}});
  TruncSSet base = nerve(z2, 2);
  SSetBuilder b(2);
  for (int id = 0; id < base.nd_size(0); ++id) b.add(0, {}, base.nd_label[0][static_cast<size_t>(id)]);
  for (int id = 0; id < base.nd_size(1); ++id)
    b.add(1, base.nd_face[1][static_cast<size_t>(id)], base.nd_label[1][static_cast<size_t>(id)]);
  for (int id = 0; id < base.nd_size(2); ++id)
    b.add(2, base.nd_face[2][static_cast<size_t>(id)], base.nd_label[2][static_cast<size_t>(id)]);
  // duplicate the first nondegenerate 2-cell
  b.add(2, base.nd_face[2][0], "dup");
  TruncSSet doubled = b.finish();
  CHECK(doubled.validate());
  QCatReport rep = check_n1_property(doubled, 1);
  CHECK_FALSE(rep.ok);
}

TEST_CASE("category validation catches broken tables") {
  FiniteCategory bad = chain_category(2);
  bad.comp_tab[0][0] = -1;  // id.id should be id
  CHECK_FALSE(bad.validate());
  CHECK(chain_category(2).validate());
  CHECK(product_category(chain_category(2), discrete_category(2)).validate());
  CHECK(opposite_category(chain_category(3)).validate());
}
