#pragma once

#include "spanforge/lawsolver.hpp"

namespace spanforge {

// ---------------------------------------------------------------------------
// Concrete cells of the two span-flavoured laws
// ---------------------------------------------------------------------------

/// An (m, n)-cell of the pullback-grid law: a grid of sets with leftward
/// maps in the first direction and downward maps in the second.
struct GridCell {
  int m = 0, n = 0;
  std::vector<int> obj;          // (m+1)*(n+1)
  std::vector<FinMap> h;         // h[(i,j)]: O[i+1][j] -> O[i][j], i < m
  std::vector<FinMap> v;         // v[(i,j)]: O[i][j] -> O[i][j+1], j < n

  int oid(int i, int j) const { return i * (n + 1) + j; }
  int hid(int i, int j) const { return i * (n + 1) + j; }  // i < m
  int vid(int i, int j) const { return i * n + j; }        // j < n
  const FinMap& hm(int i, int j) const { return h[static_cast<size_t>(hid(i, j))]; }
  const FinMap& vm(int i, int j) const { return v[static_cast<size_t>(vid(i, j))]; }
};

struct GridReport {
  bool ok = true;
  std::vector<std::pair<int, int>> bad_squares;
};

inline GridReport validate_grid(const GridCell& g, bool mono_h = false) {
  GridReport rep;
  for (int i = 0; i < g.m; ++i)
    for (int j = 0; j < g.n; ++j) {
      bool good =
          lawdet::comm_eq(g.hm(i, j), g.vm(i, j), g.vm(i + 1, j), g.hm(i, j + 1)) &&
          lawdet::pb_ok(g.hm(i, j), g.vm(i + 1, j), g.vm(i, j), g.hm(i, j + 1));
      if (!good) {
        rep.ok = false;
        rep.bad_squares.emplace_back(i, j);
      }
    }
  if (mono_h)
    for (int i = 0; i < g.m; ++i)
      for (int j = 0; j <= g.n; ++j)
        if (!is_injective(g.hm(i, j))) {
          rep.ok = false;
          rep.bad_squares.emplace_back(i, j);
        }
  return rep;
}

/// An (m, n)-cell of the sections law: a stack of n+1 span m-cells joined by
/// vertical maps, every rectangle cromulent.
struct DPlusCell {
  int m = 0, n = 0;
  std::vector<SpanCell> level;         // n+1 span cells of degree m
  std::vector<std::vector<FinMap>> vert;  // vert[k][interval]: level k -> k+1
};

struct DPlusReport {
  bool ok = true;
  std::vector<std::string> failures;
};

inline DPlusReport validate_dplus(const DPlusCell& c) {
  DPlusReport rep;
  auto fail = [&](const std::string& m) {
    rep.ok = false;
    rep.failures.push_back(m);
  };
  for (int k = 0; k <= c.n; ++k)
    if (!validate_cell(c.level[static_cast<size_t>(k)]).ok)
      fail("level " + std::to_string(k) + " violates the span conditions");
  // verticals commute with the interval structure maps
  for (int k = 0; k < c.n; ++k) {
    const SpanCell& up = c.level[static_cast<size_t>(k)];
    const SpanCell& dn = c.level[static_cast<size_t>(k + 1)];
    const auto& vt = c.vert[static_cast<size_t>(k)];
    for (int i = 0; i <= c.m; ++i)
      for (int j = i + 1; j <= c.m; ++j) {
        int at = up.idx(i, j);
        if (!lawdet::comm_eq(up.left(i, j), vt[static_cast<size_t>(up.idx(i, j - 1))],
                             vt[static_cast<size_t>(at)], dn.left(i, j)) ||
            !lawdet::comm_eq(up.right(i, j), vt[static_cast<size_t>(up.idx(i + 1, j))],
                             vt[static_cast<size_t>(at)], dn.right(i, j)))
          fail("vertical naturality fails at interval (" + std::to_string(i) + "," +
               std::to_string(j) + ") level " + std::to_string(k));
      }
  }
  // cromulence of every rectangle (adjacent and long levels)
  for (int ka = 0; ka <= c.n; ++ka)
    for (int kb = ka + 1; kb <= c.n; ++kb)
      for (int i = 0; i <= c.m; ++i)
        for (int j = i + 1; j <= c.m; ++j) {
          const SpanCell& up = c.level[static_cast<size_t>(ka)];
          const SpanCell& dn = c.level[static_cast<size_t>(kb)];
          auto vmap = [&](int iv_i, int iv_j) {
            FinMap m = identity_map(c.level[static_cast<size_t>(ka)].size_at(iv_i, iv_j));
            for (int k = ka; k < kb; ++k)
              m = compose(m, c.vert[static_cast<size_t>(k)][static_cast<size_t>(
                                 c.level[static_cast<size_t>(k)].idx(iv_i, iv_j))]);
            return m;
          };
          CromulentRect rect;
          rect.edge = CromulentEdge{Slice(vmap(i, i)), dn.structure(i, j, i, i),
                                    dn.structure(i, j, j, j)};
          rect.middle = Slice(vmap(i, j));
          rect.right = Slice(vmap(j, j));
          rect.to_a = up.structure(i, j, i, i);
          rect.to_right = up.structure(i, j, j, j);
          if (!is_cromulent_canonical(rect))
            fail("rectangle (" + std::to_string(i) + "," + std::to_string(j) + ") levels " +
                 std::to_string(ka) + ".." + std::to_string(kb) + " not cromulent");
        }
  return rep;
}

/// The replayed inner-horn extension of the proof: given a slice over the
/// first vertex and a span 2-cell below, iterate the canonical rectangle
/// construction and assemble the full (2,1)-cell.
inline DPlusCell dplus_21_extension(const Slice& a0, const SpanCell& bottom) {
  if (bottom.n != 2 || a0.base() != bottom.size_at(0, 0))
    throw structural_error("dplus_21_extension: shape mismatch");
  DPlusCell out;
  out.m = 2;
  out.n = 1;
  out.level.assign(2, SpanCell{});
  out.level[1] = bottom;
  // rectangles over [0,1], then [1,2] on its right part, then the top square
  CromulentRect r01 = cromulent_extend(
      CromulentEdge{a0, bottom.left(0, 1), bottom.right(0, 1)});
  CromulentRect r12 = cromulent_extend(
      CromulentEdge{r01.right, bottom.left(1, 2), bottom.right(1, 2)});
  SpanCell& top = out.level[0];
  top.n = 2;
  top.alloc();
  top.sizes[static_cast<size_t>(top.idx(0, 0))] = a0.total();
  top.sizes[static_cast<size_t>(top.idx(1, 1))] = r01.right.total();
  top.sizes[static_cast<size_t>(top.idx(2, 2))] = r12.right.total();
  top.sizes[static_cast<size_t>(top.idx(0, 1))] = r01.middle.total();
  top.sizes[static_cast<size_t>(top.idx(1, 2))] = r12.middle.total();
  top.left(0, 1) = r01.to_a;
  top.right(0, 1) = r01.to_right;
  top.left(1, 2) = r12.to_a;
  top.right(1, 2) = r12.to_right;
  Pullback pb = canonical_pullback(top.right(0, 1), top.left(1, 2));
  top.sizes[static_cast<size_t>(top.idx(0, 2))] = pb.apex.size;
  top.left(0, 2) = pb.p1;
  top.right(0, 2) = pb.p2;
  out.vert.assign(1, std::vector<FinMap>(6));
  auto put = [&](int i, int j, const FinMap& m) {
    out.vert[0][static_cast<size_t>(bottom.idx(i, j))] = m;
  };
  put(0, 0, a0.proj);
  put(1, 1, r01.right.proj);
  put(2, 2, r12.right.proj);
  put(0, 1, r01.middle.proj);
  put(1, 2, r12.middle.proj);
  // the long vertical: project both pullback components
  // the bottom top set is assumed canonically built, so the long vertical is
  // the pairing of the two component verticals
  Pullback bpb = canonical_pullback(bottom.right(0, 1), bottom.left(1, 2));
  std::vector<int> img(static_cast<size_t>(pb.apex.size));
  for (int w = 0; w < pb.apex.size; ++w) {
    auto [x, y] = pb.pairs[static_cast<size_t>(w)];
    int idx = bpb.index_of(r01.middle.proj(x), r12.middle.proj(y));
    if (idx < 0) throw structural_error("dplus_21_extension: vertical misses the pullback");
    img[static_cast<size_t>(w)] = idx;
  }
  put(0, 2, FinMap(pb.apex.size, bottom.size_at(0, 2), std::move(img)));
  return out;
}

// ---------------------------------------------------------------------------
// Graded law batteries
// ---------------------------------------------------------------------------

enum class LazyLaw { DFinset, HatD, DPlus };

struct BatteryLine {
  int a, b, c, d;
  int cap;
  long horns;
  bool exhaustive;
};

struct BatteryReport {
  bool ok = true;
  long total_horns = 0;
  std::vector<BatteryLine> lines;
  std::string first_failure;
  void fail(const std::string& m) {
    if (ok) first_failure = m;
    ok = false;
  }
};

/// Runs one bihorn shape of one law at one cap with an optional horn limit.
inline bool run_law_shape(LazyLaw law, int a, int b, int c, int d, int cap, long limit,
                          long* horns_out) {
  auto pres = [a, b, c, d](const std::vector<int>& al, const std::vector<int>& be) {
    return bidet::in_horn(al, a, b) || bidet::in_horn(be, c, d);
  };
  auto all = [](const std::vector<int>&, const std::vector<int>&) { return true; };
  bool ok = true;
  long horns = 0;
  if (law == LazyLaw::DPlus) {
    DiagSpec spec = dplus_diagram(a, c, pres);
    DiagSpec full_spec = dplus_diagram(a, c, all);
    DiagSolver solver(spec, cap, true);
    DiagSolver filler(full_spec, cap * cap * cap * cap + cap);
    solver.enumerate(
        [&](const DiagState& horn) {
          ++horns;
          if (!filler.first_completion(horn)) {
            ok = false;
            return false;
          }
          return true;
        },
        limit);
  } else {
    bool mono = (law == LazyLaw::HatD);
    DiagSpec spec = grid_diagram(a, c, mono, pres);
    DiagSpec full_spec = grid_diagram(a, c, mono, all);
    DiagSolver solver(spec, cap, true);
    DiagSolver filler(full_spec, cap * cap * cap + cap);
    solver.enumerate(
        [&](const DiagState& horn) {
          ++horns;
          if (!filler.first_completion(horn)) {
            ok = false;
            return false;
          }
          return true;
        },
        limit);
  }
  *horns_out = horns;
  return ok;
}

/// The graded battery over all inner bihorn shapes with m, n <= 3: the full
/// size-cap universe exhaustively where the shape is small enough, a bounded
/// deterministic battery on the largest shapes.
inline BatteryReport lazy_law_battery(LazyLaw law, int cap, long big_shape_limit = 2000) {
  BatteryReport rep;
  for (const auto& [a, b, c, d] : inner_bihorn_shapes(3, 3)) {
    int deg = a + c;
    std::vector<std::pair<int, long>> runs;  // (cap, limit)
    bool dplus = (law == LazyLaw::DPlus);
    if (deg <= 3) {
      runs.emplace_back(cap, dplus && deg >= 3 ? big_shape_limit * 4 : -1);
    } else if (deg == 4) {
      runs.emplace_back(2, dplus ? big_shape_limit * 2 : -1);
      runs.emplace_back(cap, big_shape_limit);
    } else {
      runs.emplace_back(2, big_shape_limit * 2);
      runs.emplace_back(cap, big_shape_limit / 2);
    }
    for (auto [run_cap, limit] : runs) {
      long horns = 0;
      bool ok = run_law_shape(law, a, b, c, d, run_cap, limit, &horns);
      rep.total_horns += horns;
      rep.lines.push_back({a, b, c, d, run_cap, horns, limit < 0});
      if (!ok) {
        rep.fail("unfilled bihorn (" + std::to_string(a) + "," + std::to_string(b) + "," +
                 std::to_string(c) + "," + std::to_string(d) + ") at cap " +
                 std::to_string(run_cap));
        return rep;
      }
    }
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Codiagonal comparisons for the lazy laws
// ---------------------------------------------------------------------------

/// Cells of the composite of the grid law in low degrees: solutions of the
/// distributahedron-shaped diagram. Returns encoded cells per level.
inline std::vector<std::vector<std::vector<int>>> grid_codiagonal_cells(int cap, int levels,
                                                                        bool mono_h) {
  std::vector<std::vector<std::vector<int>>> out(static_cast<size_t>(levels) + 1);
  for (int n = 0; n <= levels; ++n) {
    // the distributahedron Xi^n as a diagram: vertices (i|j), i <= j; the
    // (1,0)-edges move the first index up, the (0,1)-edges move the second
    // index down; squares are pullbacks. This is exactly the span-cell grid.
    DiagSpec spec;
    auto node = [&](int i, int j) { return SpanCell::iidx(n, i, j); };
    spec.n_nodes = (n + 1) * (n + 2) / 2;
    std::map<std::pair<std::pair<int, int>, std::pair<int, int>>, int> eid;
    // edges: (i|j) -> (i'|j) for i < i' are the images of first-direction
    // cells (these carry the monomorphism restriction), (i|j) -> (i|j') for
    // j' < j the second-direction ones
    for (int i = 0; i <= n; ++i)
      for (int j = i; j <= n; ++j) {
        for (int i2 = i + 1; i2 <= j; ++i2)
          eid[{{i, j}, {i2, j}}] = spec.add_edge(node(i, j), node(i2, j), mono_h);
        for (int j2 = i; j2 < j; ++j2)
          eid[{{i, j}, {i, j2}}] = spec.add_edge(node(i, j), node(i, j2), false);
      }
    // compositions
    for (const auto& [k1, e1] : eid)
      for (const auto& [k2, e2] : eid) {
        if (k1.second != k2.first) continue;
        auto it = eid.find({k1.first, k2.second});
        if (it != eid.end()) spec.comps.push_back({e1, e2, it->second});
      }
    // squares: for i < i2 <= j2 < j: corner (i|j) is the pullback of
    // (i|j2) <- over (i2|j2) -> (i2|j)? The pullback property of span cells:
    // (i|j) -> (i|j-1), (i|j) -> (i+1|j) over (i+1|j-1).
    for (int i = 0; i <= n; ++i)
      for (int j = i + 2; j <= n; ++j) {
        int p1 = eid.at({{i, j}, {i, j - 1}});
        int p2 = eid.at({{i, j}, {i + 1, j}});
        int f = eid.at({{i, j - 1}, {i + 1, j - 1}});
        int g = eid.at({{i + 1, j}, {i + 1, j - 1}});
        spec.commutes.push_back({p1, f, p2, g});
        spec.squares.push_back({p1, p2, f, g, node(i, j), f, g});
      }
    spec.node_present.assign(static_cast<size_t>(spec.n_nodes), 1);
    spec.edge_present.assign(spec.edges.size(), 1);
    // seeds: the diagonal chain (vertices and elementary spans)
    for (int i = 0; i <= n; ++i) spec.seed_order.push_back(node(i, i));
    for (int i = 0; i + 1 <= n; ++i) {
      spec.seed_order.push_back(node(i, i + 1));
      spec.seed_order.push_back(~eid.at({{i, i + 1}, {i, i}}));
      spec.seed_order.push_back(~eid.at({{i, i + 1}, {i + 1, i + 1}}));
    }
    for (int v = 0; v < spec.n_nodes; ++v) spec.seed_order.push_back(v);
    for (size_t e = 0; e < spec.edges.size(); ++e) spec.seed_order.push_back(~static_cast<int>(e));
    DiagSolver solver(spec, cap, true);
    solver.enumerate([&](const DiagState& st) {
      std::vector<int> enc = st.obj;
      for (const auto& m : st.maps) {
        enc.push_back(-7);
        enc.insert(enc.end(), m.img.begin(), m.img.end());
      }
      out[static_cast<size_t>(n)].push_back(std::move(enc));
      return true;
    });
  }
  return out;
}

/// Span cells of degree <= 2 with canonically chosen tops, encoded the same
/// way as grid_codiagonal_cells emits them (the independent side of the
/// comparison).
inline std::vector<std::vector<std::vector<int>>> span_side_cells(int cap, int levels) {
  std::vector<std::vector<std::vector<int>>> out(static_cast<size_t>(levels) + 1);
  for (int x = 0; x <= cap; ++x) out[0].push_back({x});
  if (levels >= 1) {
    for (int x = 0; x <= cap; ++x)
      for (int y = 0; y <= cap; ++y)
        for_each_span(x, y, cap, [&](const Span& s) {
          // the first-direction edge (toward the target) precedes the
          // second-direction one in the diagram spec
          std::vector<int> enc = {x, s.apex(), y, -7};
          enc.insert(enc.end(), s.r.img.begin(), s.r.img.end());
          enc.push_back(-7);
          enc.insert(enc.end(), s.l.img.begin(), s.l.img.end());
          out[1].push_back(std::move(enc));
        });
  }
  if (levels >= 2) {
    for (int x0 = 0; x0 <= cap; ++x0)
      for (int x1 = 0; x1 <= cap; ++x1)
        for (int x2 = 0; x2 <= cap; ++x2)
          for_each_span(x0, x1, cap, [&](const Span& s) {
            for_each_span(x1, x2, cap, [&](const Span& t) {
              if (pullback_size(s.r, t.l) > cap) return;
              SpanCell cell = canonical_cell({s, t});
              // encode: objects in iidx order, then edges in the codiagonal
              // spec's edge order
              std::vector<int> enc = cell.sizes;
              auto push_map = [&](const FinMap& m) {
                enc.push_back(-7);
                enc.insert(enc.end(), m.img.begin(), m.img.end());
              };
              // edge order for n=2: (0|1)->{(1|1),(0|0)}, (0|2)->{(1|2),(2|2),(0|1),(0|0)},
              // (1|2)->{(2|2),(1|1)} following the eid map order (lexicographic)
              // we simply mirror grid_codiagonal_cells' iteration: pairs in map order
              for (int i = 0; i <= 2; ++i)
                for (int j = i; j <= 2; ++j) {
                  for (int i2 = i + 1; i2 <= j; ++i2) push_map(cell.structure(i, j, i2, j));
                  for (int j2 = i; j2 < j; ++j2) push_map(cell.structure(i, j, i, j2));
                }
              out[2].push_back(std::move(enc));
            });
          });
  }
  return out;
}

/// 1-cells of the composite of the monomorphism law match pointed maps:
/// counts (y+1)^x over the bounded universe.
inline bool hatd_pointed_map_bijection(int cap) {
  auto cells = grid_codiagonal_cells(cap, 1, true);
  for (int x = 0; x <= cap; ++x)
    for (int y = 0; y <= cap; ++y) {
      // labelled spans x <- u -> y with monic covariant-direction leg
      long want = 0;
      for (int u = 0; u <= std::min(y, cap); ++u) {
        long monos = 1;
        for (int t = 0; t < u; ++t) monos *= (y - t);
        want += monos * int_pow(x, u);
      }
      long got = 0;
      for (const auto& enc : cells[1])
        if (enc[0] == x && enc[2] == y) ++got;
      if (got != want) return false;
      // apex-relabelling classes match pointed maps: (x+1)^y of them
      std::set<std::vector<int>> classes;
      for (const auto& enc : cells[1]) {
        if (enc[0] != x || enc[2] != y) continue;
        int u = enc[1];
        std::vector<std::pair<int, int>> pairs;
        for (int t = 0; t < u; ++t)
          pairs.emplace_back(enc[static_cast<size_t>(4 + t)],
                             enc[static_cast<size_t>(4 + u + 1 + t)]);
        std::sort(pairs.begin(), pairs.end());
        std::vector<int> key = {x, y};
        for (auto [a, b] : pairs) {
          key.push_back(a);
          key.push_back(b);
        }
        classes.insert(key);
      }
      if (static_cast<long>(classes.size()) != int_pow(x + 1, y)) return false;
    }
  return true;
}

/// The key monomorphism lemma behind the restricted law: pullbacks of monos
/// are monos, exhaustively over small sets.
inline bool mono_pullback_lemma(int cap) {
  for (int a = 0; a <= cap; ++a)
    for (int b = 0; b <= cap; ++b)
      for (int c = 0; c <= cap; ++c) {
        bool ok = true;
        for_each_map(a, c, [&](const FinMap& f) {
          if (!is_injective(f)) return;
          for_each_map(b, c, [&](const FinMap& g) {
            Pullback pb = canonical_pullback(f, g);
            if (!is_injective(pb.p2)) ok = false;
          });
        });
        if (!ok) return false;
      }
  return true;
}

}  // namespace spanforge
