#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "spanforge/finset.hpp"

using namespace spanforge;

namespace {

FinMap map_of(int dom, int cod, std::vector<int> img) { return FinMap(dom, cod, std::move(img)); }

// Independent oracle: matching pairs counted by a plain double loop.
int pairs_oracle(const FinMap& f, const FinMap& g) {
  int n = 0;
  for (int a = 0; a < f.dom; ++a)
    for (int b = 0; b < g.dom; ++b)
      if (f(a) == g(b)) ++n;
  return n;
}

}  // namespace

TEST_CASE("compose: identities and pointwise values") {
  FinMap id3 = identity_map(3);
  CHECK(compose(id3, id3) == id3);
  FinMap f = constant_map(2, 1, 0);
  FinMap g = map_of(1, 3, {2});
  FinMap h = compose(f, g);
  CHECK(h.dom == 2);
  CHECK(h.cod == 3);
  CHECK(h.img == std::vector<int>{2, 2});
  CHECK_THROWS_AS(compose(g, f), structural_error);
}

TEST_CASE("compose: associativity, exhaustive on small shapes") {
  for (int a = 0; a <= 2; ++a)
    for (int b = 1; b <= 2; ++b)
      for (int c = 1; c <= 2; ++c)
        for (int d = 1; d <= 2; ++d)
          for_each_map(a, b, [&](const FinMap& f) {
            for_each_map(b, c, [&](const FinMap& g) {
              for_each_map(c, d, [&](const FinMap& h) {
                CHECK(compose(compose(f, g), h) == compose(f, compose(g, h)));
              });
            });
          });
}

TEST_CASE("canonical_pullback: product over the point") {
  FinMap f = constant_map(2, 1, 0);
  FinMap g = constant_map(3, 1, 0);
  Pullback pb = canonical_pullback(f, g);
  CHECK(pb.apex.size == 6);
  CHECK(is_pullback_square(pb.p1, pb.p2, f, g));
}

TEST_CASE("canonical_pullback: along an identity") {
  FinMap f = identity_map(2);
  for_each_map(3, 2, [&](const FinMap& g) {
    Pullback pb = canonical_pullback(f, g);
    CHECK(pb.apex.size == g.dom);
    CHECK(is_bijective(pb.p2));
    CHECK(pb.p1 == compose(pb.p2, g));
  });
}

TEST_CASE("canonical_pullback: fibre count matches the matching-pair oracle") {
  FinMap f = map_of(3, 2, {0, 0, 1});  // fibres (2,1)
  FinMap g = map_of(3, 2, {0, 1, 1});  // fibres (1,2)
  CHECK(pairs_oracle(f, g) == 4);
  CHECK(canonical_pullback(f, g).apex.size == 4);
  CHECK(pullback_size(f, g) == 4);
}

TEST_CASE("canonical_pullback: universal property, exhaustive small") {
  // every commuting cone factors uniquely through the canonical apex
  for_each_map(3, 2, [&](const FinMap& f) {
    for_each_map(2, 2, [&](const FinMap& g) {
      Pullback pb = canonical_pullback(f, g);
      for (int w = 0; w <= 2; ++w)
        for_each_map(w, 3, [&](const FinMap& q1) {
          for_each_map(w, 2, [&](const FinMap& q2) {
            if (compose(q1, f) != compose(q2, g)) return;
            int count = 0;
            for_each_map(w, pb.apex.size, [&](const FinMap& u) {
              if (compose(u, pb.p1) == q1 && compose(u, pb.p2) == q2) ++count;
            });
            CHECK(count == 1);
          });
        });
    });
  });
}

TEST_CASE("canonical_pullback: pasting is canonically bijective to the composite") {
  for_each_map(2, 2, [&](const FinMap& f) {
    for_each_map(3, 2, [&](const FinMap& g) {
      for_each_map(2, 3, [&](const FinMap& h) {
        Pullback p1 = canonical_pullback(f, g);
        Pullback p2 = canonical_pullback(p1.p2, h);  // paste on the g side
        Pullback q = canonical_pullback(f, compose(h, g));
        CHECK(p2.apex.size == q.apex.size);
        // tuple-matching bijection commutes with the legs
        std::vector<char> hit(static_cast<size_t>(q.apex.size), 0);
        for (int w = 0; w < p2.apex.size; ++w) {
          auto [k, d] = p2.pairs[static_cast<size_t>(w)];
          int a = p1.pairs[static_cast<size_t>(k)].first;
          int idx = q.index_of(a, d);
          REQUIRE(idx >= 0);
          CHECK(!hit[static_cast<size_t>(idx)]);
          hit[static_cast<size_t>(idx)] = 1;
        }
      });
    });
  });
}

TEST_CASE("sigma_push basics") {
  Slice a(map_of(5, 2, {0, 0, 1, 1, 1}));  // fibres (2,3)
  CHECK(sigma_push(identity_map(2), a) == a);
  Slice pushed = sigma_push(constant_map(2, 1, 0), a);
  CHECK(pushed.fibre_sizes() == std::vector<int>{5});
  // fibre of f_!A over y is the disjoint union of fibres over f^-1(y)
  FinMap f = map_of(2, 2, {1, 1});
  Slice p2 = sigma_push(f, a);
  CHECK(p2.fibre_sizes() == std::vector<int>{0, 5});
  CHECK_THROWS_AS(sigma_push(identity_map(3), a), structural_error);
}

TEST_CASE("delta_pull basics") {
  Slice a(map_of(3, 1, {0, 0, 0}));
  Slice d = delta_pull(constant_map(2, 1, 0), a);
  CHECK(d.fibre_sizes() == std::vector<int>{3, 3});
  Slice b(map_of(3, 2, {0, 1, 1}));  // fibres (1,2)
  Slice d2 = delta_pull(map_of(3, 2, {0, 0, 1}), b);
  CHECK(d2.fibre_sizes() == std::vector<int>{1, 1, 2});
  // f = id gives the slice back up to canonical relabel
  Slice d3 = delta_pull(identity_map(2), b);
  CHECK(d3.fibre_sizes() == b.fibre_sizes());
}

TEST_CASE("pi_push: section counts") {
  Slice a(map_of(2, 1, {0, 0}));
  CHECK(pi_push(identity_map(1), a).fibre_sizes() == a.fibre_sizes());
  // f: 3 -> 2 with fibres {0,1},{2}; A fibres (2,3,4) -> pi fibres (6,4)
  FinMap f = map_of(3, 2, {0, 0, 1});
  std::vector<int> img;
  for (int k = 0; k < 2; ++k) img.push_back(0);
  for (int k = 0; k < 3; ++k) img.push_back(1);
  for (int k = 0; k < 4; ++k) img.push_back(2);
  Slice A(map_of(9, 3, std::move(img)));
  CHECK(pi_push(f, A).fibre_sizes() == std::vector<int>{6, 4});
  // empty fibre kills all sections over its image point
  Slice B(map_of(2, 3, {0, 2}));  // empty fibre over x=1
  CHECK(pi_push(f, B).fibre_sizes() == std::vector<int>{0, 1});
}

TEST_CASE("adjoint triple: identity and small exhaustive") {
  auto rep = check_adjoint_triple(identity_map(2), 2);
  CHECK(rep.ok);
  rep = check_adjoint_triple(constant_map(2, 1, 0), 3);
  CHECK(rep.ok);
  // a map with an empty fibre
  rep = check_adjoint_triple(map_of(2, 2, {0, 0}), 3);
  CHECK(rep.ok);
}

TEST_CASE("triangle identities hold for all small maps") {
  for (int x = 0; x <= 3; ++x)
    for (int y = 1; y <= 3; ++y)
      for_each_map(x, y, [&](const FinMap& f) { CHECK(check_triangle_identities(f, 3)); });
}

TEST_CASE("mackey: identity square and the product square") {
  SetSquare idsq{identity_map(2), identity_map(2), identity_map(2), identity_map(2)};
  Slice a(map_of(3, 2, {0, 1, 1}));
  MackeyWitness w = check_mackey(idsq, a);
  CHECK(w.iso.dom == w.iso.cod);
  CHECK(is_bijective(w.iso));

  // Z=1, X=2, Y=2, W=4 the product square; A over Y with fibres (1,2):
  // both sides have fibres (2,2) over X.
  FinMap beta = constant_map(2, 1, 0);
  FinMap g = constant_map(2, 1, 0);
  Pullback pb = canonical_pullback(beta, g);
  SetSquare sq{pb.p1, pb.p2, beta, g};
  std::swap(sq.f, sq.alpha);  // f: W->X is the first leg, alpha: W->Y second
  sq.f = pb.p1;
  sq.alpha = pb.p2;
  Slice ay(map_of(3, 2, {0, 1, 1}));
  MackeyWitness w2 = check_mackey(sq, ay);
  CHECK(w2.lhs.fibre_sizes() == std::vector<int>{2, 2});
  CHECK(w2.rhs.fibre_sizes() == std::vector<int>{2, 2});

  // square with empty W (and empty X): both sides are empty slices
  FinMap beta2 = empty_map(1);
  FinMap g2 = empty_map(1);
  Pullback pb2 = canonical_pullback(beta2, g2);
  SetSquare sq2{pb2.p1, pb2.p2, beta2, g2};
  MackeyWitness w3 = check_mackey(sq2, Slice(empty_map(0)));
  CHECK(w3.lhs.total() == 0);
  CHECK(w3.rhs.total() == 0);

  // non-pullback square rejected
  SetSquare bad{constant_map(1, 1, 0), constant_map(1, 2, 0), constant_map(1, 1, 0),
                constant_map(2, 1, 0)};
  CHECK_THROWS_AS(check_mackey(bad, Slice(map_of(0, 2, {}))), structural_error);
}

TEST_CASE("mackey: naturality on all small instances") {
  // all pullback squares built from beta: X->Z, g: Y->Z with sizes <= 2
  for (int xs = 0; xs <= 2; ++xs)
    for (int ys = 0; ys <= 2; ++ys)
      for_each_map(xs, 2, [&](const FinMap& beta) {
        for_each_map(ys, 2, [&](const FinMap& g) {
          Pullback pb = canonical_pullback(beta, g);
          SetSquare sq{pb.p1, pb.p2, beta, g};
          for_each_slice_profile(ys, 2, [&](const Slice& a) {
            for_each_slice_profile(ys, 2, [&](const Slice& a2) {
              for_each_slice_map(a, a2, [&](const FinMap& sm) {
                CHECK(mackey_natural(sq, a, a2, sm));
              });
            });
          });
        });
      });
}

TEST_CASE("cromulent_extend: counts from the section formulas") {
  // g = id: middle and right are both f*A
  {
    CromulentEdge e{Slice(map_of(2, 1, {0, 0})), constant_map(2, 1, 0), identity_map(2)};
    CromulentRect r = cromulent_extend(e);
    CHECK(r.middle.fibre_sizes() == std::vector<int>{2, 2});
    CHECK(r.right.fibre_sizes() == std::vector<int>{2, 2});
    CHECK(rect_precromulent(r));
  }
  // X=1, Y=2, Z=1, |A|=2: right fibre 4, middle fibres (4,4)
  {
    CromulentEdge e{Slice(map_of(2, 1, {0, 0})), constant_map(2, 1, 0), constant_map(2, 1, 0)};
    CromulentRect r = cromulent_extend(e);
    CHECK(r.right.fibre_sizes() == std::vector<int>{4});
    CHECK(r.middle.fibre_sizes() == std::vector<int>{4, 4});
  }
  // f = id, A = id_X: right = sections of X over X along g
  {
    CromulentEdge e{Slice(identity_map(2)), identity_map(2), constant_map(2, 1, 0)};
    CromulentRect r = cromulent_extend(e);
    CHECK(r.right.total() == 1);  // one section of id_2 over the two-point fibre
  }
}

TEST_CASE("is_cromulent: canonical extensions are terminal, mutants are not") {
  CromulentEdge e{Slice(map_of(2, 2, {0, 1})), map_of(2, 2, {0, 1}), map_of(2, 1, {0, 0})};
  CromulentRect r = cromulent_extend(e);
  CHECK(is_cromulent(r, 3));
  CHECK(is_cromulent_canonical(r));

  // right square not a pullback: shrink the middle
  CromulentRect bad = r;
  bad.middle = Slice(map_of(0, 2, {}));
  bad.to_a = empty_map(r.edge.a.total());
  bad.to_right = empty_map(r.right.total());
  CHECK_FALSE(is_cromulent(bad, 3));
  CHECK_FALSE(is_cromulent_canonical(bad));

  // middle strictly smaller than the canonical one but still precromulent:
  // take right empty, middle empty; some precromulent fails to factor
  CromulentRect small;
  small.edge = e;
  small.right = Slice(empty_map(1));
  small.middle = Slice(empty_map(2));
  small.to_a = empty_map(e.a.total());
  small.to_right = empty_map(0);
  CHECK(rect_precromulent(small));
  CHECK_FALSE(is_cromulent(small, 3));
  CHECK_FALSE(is_cromulent_canonical(small));
}

TEST_CASE("is_cromulent agrees with the canonical-form test on a small sweep") {
  // edges with every set of size <= 2, both verdict routes agree on the
  // canonical extension and on a truncated mutant
  for (int x = 1; x <= 2; ++x)
    for (int y = 0; y <= 2; ++y)
      for (int z = 1; z <= 2; ++z)
        for_each_map(y, x, [&](const FinMap& f) {
          for_each_map(y, z, [&](const FinMap& g) {
            for_each_slice_profile(x, 2, [&](const Slice& a) {
              CromulentEdge e{a, f, g};
              CromulentRect r = cromulent_extend(e);
              bool slow = is_cromulent(r, 3);
              bool fast = is_cromulent_canonical(r);
              CHECK(slow == fast);
              CHECK(slow);
            });
          });
        });
}
