#pragma once

#include <json.hpp>

#include "spanforge/algebra.hpp"
#include "spanforge/dinat.hpp"
#include "spanforge/models.hpp"
#include "spanforge/rspan.hpp"
#include "spanforge/spanqcat.hpp"

namespace spanforge {

using nlohmann::json;

// FinMap is the wire atom: {"dom": n, "cod": m, "image": [...]}.
inline json to_json(const FinMap& f) {
  return json{{"dom", f.dom}, {"cod", f.cod}, {"image", f.img}};
}

inline FinMap finmap_from_json(const json& j) {
  return FinMap(j.at("dom").get<int>(), j.at("cod").get<int>(),
                j.at("image").get<std::vector<int>>());
}

inline json to_json(const Slice& s) {
  return json{{"base", s.base()}, {"proj", to_json(s.proj)}};
}

inline Slice slice_from_json(const json& j) {
  Slice s(finmap_from_json(j.at("proj")));
  if (j.contains("base") && j.at("base").get<int>() != s.base())
    throw structural_error("slice: base disagrees with the projection");
  return s;
}

inline json to_json(const Span& s) {
  return json{{"left", to_json(s.l)}, {"right", to_json(s.r)}};
}

inline Span span_from_json(const json& j) {
  return Span(finmap_from_json(j.at("left")), finmap_from_json(j.at("right")));
}

inline json to_json(const SpanCell& c) {
  json lefts = json::array(), rights = json::array();
  for (int i = 0; i <= c.n; ++i)
    for (int j = i + 1; j <= c.n; ++j) {
      lefts.push_back(json{{"i", i}, {"j", j}, {"map", to_json(c.left(i, j))}});
      rights.push_back(json{{"i", i}, {"j", j}, {"map", to_json(c.right(i, j))}});
    }
  return json{{"n", c.n}, {"sets", c.sizes}, {"left", lefts}, {"right", rights}};
}

inline SpanCell spancell_from_json(const json& j) {
  SpanCell c;
  c.n = j.at("n").get<int>();
  c.alloc();
  c.sizes = j.at("sets").get<std::vector<int>>();
  if (static_cast<int>(c.sizes.size()) != (c.n + 1) * (c.n + 2) / 2)
    throw structural_error("spancell: wrong number of sets");
  for (const auto& e : j.at("left"))
    c.left(e.at("i").get<int>(), e.at("j").get<int>()) = finmap_from_json(e.at("map"));
  for (const auto& e : j.at("right"))
    c.right(e.at("i").get<int>(), e.at("j").get<int>()) = finmap_from_json(e.at("map"));
  return c;
}

inline json to_json(const RingSpan& r) {
  return json{{"delta", to_json(r.delta)}, {"pi", to_json(r.pi)}, {"sigma", to_json(r.sigma)}};
}

inline RingSpan ringspan_from_json(const json& j) {
  return RingSpan(finmap_from_json(j.at("delta")), finmap_from_json(j.at("pi")),
                  finmap_from_json(j.at("sigma")));
}

inline json to_json(const CommMonoid& m) {
  return json{{"size", m.size}, {"unit", m.unit}, {"add", m.add}};
}

inline CommMonoid monoid_from_json(const json& j) {
  CommMonoid m{j.at("size").get<int>(), j.at("unit").get<int>(),
               j.at("add").get<std::vector<std::vector<int>>>()};
  if (!m.valid()) throw structural_error("monoid: table fails the axioms");
  return m;
}

inline json to_json(const CommSemiring& s) {
  return json{{"size", s.size}, {"zero", s.zero}, {"one", s.one}, {"add", s.add}, {"mul", s.mul}};
}

inline CommSemiring semiring_from_json(const json& j) {
  CommSemiring s;
  s.size = j.at("size").get<int>();
  s.zero = j.at("zero").get<int>();
  s.one = j.at("one").get<int>();
  s.add = j.at("add").get<std::vector<std::vector<int>>>();
  s.mul = j.at("mul").get<std::vector<std::vector<int>>>();
  if (!s.valid()) throw structural_error("semiring: table fails the axioms");
  return s;
}

// The normalizer's input language: an alternating word of generator steps.
inline json to_json(const PipelineWord& w) {
  json steps = json::array();
  for (const auto& st : w.steps) {
    const char* kind = st.kind == StepKind::Copy ? "copy"
                       : st.kind == StepKind::Multiply ? "multiply"
                                                       : "add";
    steps.push_back(json{{"op", kind}, {"map", to_json(st.map)}});
  }
  return json{{"steps", steps}};
}

inline PipelineWord word_from_json(const json& j) {
  PipelineWord w;
  for (const auto& e : j.at("steps")) {
    std::string op = e.at("op").get<std::string>();
    StepKind k;
    if (op == "copy" || op == "delta")
      k = StepKind::Copy;
    else if (op == "multiply" || op == "pi")
      k = StepKind::Multiply;
    else if (op == "add" || op == "sigma")
      k = StepKind::Add;
    else
      throw structural_error("word: unknown step kind " + op);
    w.steps.push_back({k, finmap_from_json(e.at("map"))});
  }
  if (!w.chains()) throw structural_error("word: endpoints do not chain");
  return w;
}

inline json to_json(const FiniteCategory& c) {
  return json{{"objects", c.n_obj},
              {"src", c.src},
              {"tgt", c.tgt},
              {"ids", c.id_arrow},
              {"comp", c.comp_tab}};
}

inline FiniteCategory category_from_json(const json& j) {
  FiniteCategory c;
  c.n_obj = j.at("objects").get<int>();
  c.src = j.at("src").get<std::vector<int>>();
  c.tgt = j.at("tgt").get<std::vector<int>>();
  c.id_arrow = j.at("ids").get<std::vector<int>>();
  c.comp_tab = j.at("comp").get<std::vector<std::vector<int>>>();
  if (!c.validate()) throw structural_error("category: tables fail the axioms");
  return c;
}

/// A bifunctor is presented by generator actions: left[f][y] is the map
/// F(tgt f, y) -> F(src f, y), right[x][f] the map F(x, src f) -> F(x, tgt f).
inline json to_json(const SetBifunctor& bf) {
  const FiniteCategory& c = bf.base;
  json sizes = json::array();
  for (int x = 0; x < c.n_obj; ++x) {
    json row = json::array();
    for (int y = 0; y < c.n_obj; ++y) row.push_back(bf.value(x, y));
    sizes.push_back(row);
  }
  json left = json::array(), right = json::array();
  for (int f = 0; f < c.n_arr(); ++f) {
    json lrow = json::array(), rrow = json::array();
    for (int y = 0; y < c.n_obj; ++y)
      lrow.push_back(to_json(bf.action(f, c.id_arrow[static_cast<size_t>(y)])));
    for (int x = 0; x < c.n_obj; ++x)
      rrow.push_back(to_json(bf.action(c.id_arrow[static_cast<size_t>(x)], f)));
    left.push_back(lrow);
    right.push_back(rrow);
  }
  return json{{"category", to_json(c)}, {"sizes", sizes}, {"left", left}, {"right", right}};
}

inline SetBifunctor bifunctor_from_json(const json& j) {
  SetBifunctor bf;
  bf.base = category_from_json(j.at("category"));
  bf.opc = opposite_category(bf.base);
  bf.prod = product_category(bf.opc, bf.base);
  const FiniteCategory& c = bf.base;
  auto sizes = j.at("sizes").get<std::vector<std::vector<int>>>();
  bf.f.obj_size.assign(static_cast<size_t>(bf.prod.n_obj), 0);
  for (int x = 0; x < c.n_obj; ++x)
    for (int y = 0; y < c.n_obj; ++y)
      bf.f.obj_size[static_cast<size_t>(bf.obj(x, y))] = sizes[static_cast<size_t>(x)][static_cast<size_t>(y)];
  bf.f.arr.assign(static_cast<size_t>(bf.prod.n_arr()), FinMap());
  // generators: (f, id) and (id, g); fill the whole table by composing
  std::vector<std::vector<FinMap>> left(static_cast<size_t>(c.n_arr())),
      right(static_cast<size_t>(c.n_arr()));
  for (int f = 0; f < c.n_arr(); ++f) {
    left[static_cast<size_t>(f)].resize(static_cast<size_t>(c.n_obj));
    right[static_cast<size_t>(f)].resize(static_cast<size_t>(c.n_obj));
    for (int y = 0; y < c.n_obj; ++y)
      left[static_cast<size_t>(f)][static_cast<size_t>(y)] =
          finmap_from_json(j.at("left").at(static_cast<size_t>(f)).at(static_cast<size_t>(y)));
    for (int x = 0; x < c.n_obj; ++x)
      right[static_cast<size_t>(f)][static_cast<size_t>(x)] =
          finmap_from_json(j.at("right").at(static_cast<size_t>(f)).at(static_cast<size_t>(x)));
  }
  for (int g = 0; g < c.n_arr(); ++g)
    for (int h = 0; h < c.n_arr(); ++h) {
      // action (g, h) = left action at the source, then right action
      FinMap lg = left[static_cast<size_t>(g)][static_cast<size_t>(c.src[static_cast<size_t>(h)])];
      FinMap rh = right[static_cast<size_t>(h)][static_cast<size_t>(c.src[static_cast<size_t>(g)])];
      bf.f.arr[static_cast<size_t>(g * c.n_arr() + h)] = compose(lg, rh);
    }
  bf.f.cat = nullptr;  // bound below
  // rebind the functor to the freshly built product category
  bf.f.cat = &bf.prod;
  if (!bf.f.validate()) throw structural_error("bifunctor: tables are not functorial");
  return bf;
}

/// Levelwise tables of a truncated simplicial set, the cell-table format
/// consumed by the horn checker.
inline json tables_to_json(const TruncSSet& x) {
  json levels = json::array();
  for (int n = 0; n <= x.maxdim; ++n) {
    json lvl;
    lvl["count"] = x.size(n);
    if (n >= 1) {
      json faces = json::array();
      for (int i = 0; i <= n; ++i) {
        json row = json::array();
        for (int c = 0; c < x.size(n); ++c) row.push_back(x.face(n, c, i));
        faces.push_back(row);
      }
      lvl["faces"] = faces;
    }
    levels.push_back(lvl);
  }
  return json{{"maxdim", x.maxdim}, {"levels", levels}};
}

struct TableComplex {
  int maxdim = 0;
  std::vector<int> counts;
  std::vector<std::vector<std::vector<int>>> face;
};

inline TableComplex tables_from_json(const json& j) {
  TableComplex t;
  t.maxdim = j.at("maxdim").get<int>();
  t.counts.resize(static_cast<size_t>(t.maxdim) + 1);
  t.face.resize(static_cast<size_t>(t.maxdim) + 1);
  const auto& levels = j.at("levels");
  for (int n = 0; n <= t.maxdim; ++n) {
    t.counts[static_cast<size_t>(n)] = levels.at(static_cast<size_t>(n)).at("count").get<int>();
    if (n >= 1)
      t.face[static_cast<size_t>(n)] =
          levels.at(static_cast<size_t>(n)).at("faces").get<std::vector<std::vector<int>>>();
  }
  // index sanity
  for (int n = 1; n <= t.maxdim; ++n)
    for (int i = 0; i <= n; ++i)
      for (int c = 0; c < t.counts[static_cast<size_t>(n)]; ++c) {
        int v = t.face[static_cast<size_t>(n)][static_cast<size_t>(i)][static_cast<size_t>(c)];
        if (v < 0 || v >= t.counts[static_cast<size_t>(n - 1)])
          throw structural_error("complex: face index out of range");
      }
  return t;
}

inline json to_json(const GroupoidDesc& g) {
  json comps = json::array();
  for (const auto& comp : g.components) {
    json auts = json::array();
    for (const auto& a : comp.auts) auts.push_back(a.img);
    comps.push_back(json{{"middle", to_json(comp.rep)}, {"automorphisms", auts}});
  }
  return json{{"components", comps}};
}

inline json to_json(const RingGroupoidDesc& g) {
  json comps = json::array();
  for (const auto& comp : g.components) {
    json auts = json::array();
    for (const auto& [su, tv] : comp.auts)
      auts.push_back(json{{"on_copies", su.img}, {"on_factors", tv.img}});
    comps.push_back(json{{"middle", to_json(comp.rep)}, {"automorphisms", auts}});
  }
  return json{{"components", comps}};
}

}  // namespace spanforge
