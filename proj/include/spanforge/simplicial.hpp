#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>

#include "spanforge/core.hpp"

namespace spanforge {

// ---------------------------------------------------------------------------
// Degeneracy words. Every cell of a simplicial set is uniquely s_{j1}...s_{jr}
// applied to a nondegenerate cell, with j1 > j2 > ... > jr. Words are stored
// in that decreasing order.
// ---------------------------------------------------------------------------

using DegenWord = std::vector<int>;

/// Normal form of s_i applied to (word W): uses s_i s_j = s_{j+1} s_i (i <= j).
inline DegenWord degen_merge(int i, const DegenWord& w) {
  DegenWord out;
  out.reserve(w.size() + 1);
  size_t t = 0;
  int k = i;
  for (; t < w.size(); ++t) {
    if (k <= w[t]) {
      out.push_back(w[t] + 1);
    } else {
      break;
    }
  }
  out.push_back(k);
  for (; t < w.size(); ++t) out.push_back(w[t]);
  return out;
}

/// A reference to a cell in normal form: nondegenerate core plus word.
struct CellNF {
  int core_level = 0;
  int core_id = 0;
  DegenWord word;

  int level() const { return core_level + static_cast<int>(word.size()); }
  bool nondeg() const { return word.empty(); }
};

inline bool operator==(const CellNF& a, const CellNF& b) {
  return a.core_level == b.core_level && a.core_id == b.core_id && a.word == b.word;
}
inline bool operator<(const CellNF& a, const CellNF& b) {
  if (a.core_level != b.core_level) return a.core_level < b.core_level;
  if (a.core_id != b.core_id) return a.core_id < b.core_id;
  return a.word < b.word;
}

/// A simplicial set truncated at maxdim, stored as nondegenerate cells per
/// level with faces in normal form; all cells (with degeneracies) are
/// materialized into flat per-level tables for enumeration.
class TruncSSet {
 public:
  int maxdim = 0;
  // nondegenerate skeleton
  std::vector<int> nd_counts;                           // per level
  std::vector<std::vector<std::vector<CellNF>>> nd_face;  // nd_face[n][id][i], n >= 1
  std::vector<std::vector<std::string>> nd_label;

  // materialized cells: per level, list of normal forms; index maps
  std::vector<std::vector<CellNF>> cells;
  std::vector<std::map<CellNF, int>> index;

  int size(int level) const { return static_cast<int>(cells[static_cast<size_t>(level)].size()); }
  int nd_size(int level) const { return nd_counts[static_cast<size_t>(level)]; }

  const CellNF& cell(int level, int id) const {
    return cells[static_cast<size_t>(level)][static_cast<size_t>(id)];
  }
  int id_of(const CellNF& c) const {
    auto& m = index[static_cast<size_t>(c.level())];
    auto it = m.find(c);
    if (it == m.end()) throw structural_error("TruncSSet: unknown cell");
    return it->second;
  }
  bool is_nondeg(int level, int id) const { return cell(level, id).nondeg(); }

  std::string label(const CellNF& c) const {
    std::string s = nd_label[static_cast<size_t>(c.core_level)][static_cast<size_t>(c.core_id)];
    for (int j : c.word) s += "|s" + std::to_string(j);
    return s;
  }

  /// d_i of a normal-form cell, as a normal form.
  CellNF face_nf(const CellNF& c, int i) const {
    // push d_i through the degeneracy word
    DegenWord out;
    int k = i;
    const DegenWord& w = c.word;
    for (size_t t = 0; t < w.size(); ++t) {
      int j = w[t];
      if (k < j) {
        out.push_back(j - 1);
      } else if (k == j || k == j + 1) {
        // d_k s_j = id: remaining word attaches unchanged
        for (size_t u = t + 1; u < w.size(); ++u) out.push_back(w[u]);
        CellNF r{c.core_level, c.core_id, {}};
        for (size_t u = out.size(); u-- > 0;) {
          r.word = degen_merge(out[u], r.word);
        }
        return r;
      } else {
        out.push_back(j);
        --k;
      }
    }
    // hit the core
    if (c.core_level == 0) throw structural_error("face_nf: face of a 0-cell");
    CellNF base = nd_face[static_cast<size_t>(c.core_level)][static_cast<size_t>(c.core_id)]
                         [static_cast<size_t>(k)];
    for (size_t u = out.size(); u-- > 0;) {
      CellNF merged{base.core_level, base.core_id, degen_merge(out[u], base.word)};
      base = merged;
    }
    return base;
  }

  CellNF degen_nf(const CellNF& c, int i) const {
    return CellNF{c.core_level, c.core_id, degen_merge(i, c.word)};
  }

  int face(int level, int id, int i) const { return id_of(face_nf(cell(level, id), i)); }
  int degen(int level, int id, int i) const { return id_of(degen_nf(cell(level, id), i)); }

  /// Builds the per-level cell lists (all normal forms) up to maxdim.
  void materialize() {
    cells.assign(static_cast<size_t>(maxdim) + 1, {});
    index.assign(static_cast<size_t>(maxdim) + 1, {});
    for (int m = 0; m <= maxdim; ++m) {
      auto& lvl = cells[static_cast<size_t>(m)];
      for (int l = 0; l <= m; ++l) {
        int r = m - l;
        // strictly decreasing words j_1 > ... > j_r with j_t <= m - t
        std::vector<DegenWord> words;
        DegenWord cur;
        build_words(r, m - 1, l, cur, words);
        for (int x = 0; x < nd_counts[static_cast<size_t>(l)]; ++x)
          for (const auto& w : words) lvl.push_back(CellNF{l, x, w});
      }
      for (size_t i = 0; i < lvl.size(); ++i) index[static_cast<size_t>(m)][lvl[i]] = static_cast<int>(i);
    }
  }

  /// Checks the simplicial identities on everything stored.
  bool validate() const {
    for (int m = 1; m <= maxdim; ++m) {
      for (int id = 0; id < size(m); ++id) {
        const CellNF& c = cell(m, id);
        // d_i d_j = d_{j-1} d_i for i < j
        if (m >= 2)
          for (int j = 1; j <= m; ++j)
            for (int i = 0; i < j; ++i)
              if (!(face_nf(face_nf(c, j), i) == face_nf(face_nf(c, i), j - 1))) return false;
        // d_i s_j relations are built into face_nf; spot check d s = id
        if (m < maxdim) {
          for (int j = 0; j <= m; ++j) {
            CellNF sj = degen_nf(c, j);
            if (!(face_nf(sj, j) == c) || !(face_nf(sj, j + 1) == c)) return false;
          }
        }
      }
    }
    // s_i s_j = s_{j+1} s_i for i <= j
    for (int m = 0; m + 2 <= maxdim; ++m)
      for (int id = 0; id < size(m); ++id) {
        const CellNF& c = cell(m, id);
        for (int j = 0; j <= m; ++j)
          for (int i = 0; i <= j; ++i)
            if (!(degen_nf(degen_nf(c, j), i) == degen_nf(degen_nf(c, i), j + 1))) return false;
      }
    return true;
  }

 private:
  static void build_words(int r, int maxj, int core_level, DegenWord& cur,
                          std::vector<DegenWord>& out) {
    if (r == 0) {
      // validate: applying from the right, s_{j_r} needs j_r <= core_level,
      // then levels grow by one each step
      int lvl = core_level;
      for (size_t t = cur.size(); t-- > 0;) {
        if (cur[t] > lvl) return;
        ++lvl;
      }
      out.push_back(cur);
      return;
    }
    for (int j = maxj; j >= r - 1; --j) {
      cur.push_back(j);
      build_words(r - 1, j - 1, core_level, cur, out);
      cur.pop_back();
    }
  }
};

// ---------------------------------------------------------------------------
// Builders
// ---------------------------------------------------------------------------

/// Helper to assemble a TruncSSet from nondegenerate cells.
class SSetBuilder {
 public:
  explicit SSetBuilder(int maxdim) {
    x_.maxdim = maxdim;
    x_.nd_counts.assign(static_cast<size_t>(maxdim) + 1, 0);
    x_.nd_face.assign(static_cast<size_t>(maxdim) + 1, {});
    x_.nd_label.assign(static_cast<size_t>(maxdim) + 1, {});
  }

  int add(int level, std::vector<CellNF> faces, std::string label) {
    int id = x_.nd_counts[static_cast<size_t>(level)]++;
    if (level > 0) x_.nd_face[static_cast<size_t>(level)].push_back(std::move(faces));
    x_.nd_label[static_cast<size_t>(level)].push_back(std::move(label));
    return id;
  }

  TruncSSet finish() {
    x_.materialize();
    return std::move(x_);
  }

 private:
  TruncSSet x_;
};

namespace detail {

inline void subsequences(int n, int len, std::vector<std::vector<int>>& out) {
  std::vector<int> cur;
  struct Rec {
    int n, len;
    std::vector<std::vector<int>>& out;
    void go(std::vector<int>& cur, int next) {
      if (static_cast<int>(cur.size()) == len) {
        out.push_back(cur);
        return;
      }
      for (int v = next; v <= n; ++v) {
        cur.push_back(v);
        go(cur, v + 1);
        cur.pop_back();
      }
    }
  } rec{n, len, out};
  rec.go(cur, 0);
}

inline std::string seq_label(const std::vector<int>& s) {
  std::string l;
  for (int v : s) l += std::to_string(v);
  return l;
}

/// Builds the subcomplex of the n-simplex containing the given vertex-sets.
/// keep(set) decides membership of the nondegenerate cell with that image.
template <typename Keep>
TruncSSet simplex_subcomplex(int n, int D, Keep&& keep) {
  SSetBuilder b(D);
  std::vector<std::map<std::vector<int>, int>> ids(static_cast<size_t>(D) + 1);
  for (int m = 0; m <= std::min(n, D); ++m) {
    std::vector<std::vector<int>> seqs;
    subsequences(n, m + 1, seqs);
    for (const auto& s : seqs) {
      if (!keep(s)) continue;
      std::vector<CellNF> faces;
      if (m > 0)
        for (int i = 0; i <= m; ++i) {
          std::vector<int> f = s;
          f.erase(f.begin() + i);
          faces.push_back(CellNF{m - 1, ids[static_cast<size_t>(m - 1)].at(f), {}});
        }
      int id = b.add(m, std::move(faces), seq_label(s));
      ids[static_cast<size_t>(m)][s] = id;
    }
  }
  return b.finish();
}

}  // namespace detail

inline TruncSSet standard_simplex(int n, int D) {
  return detail::simplex_subcomplex(n, D, [](const std::vector<int>&) { return true; });
}

inline TruncSSet boundary(int n, int D) {
  return detail::simplex_subcomplex(
      n, D, [n](const std::vector<int>& s) { return static_cast<int>(s.size()) != n + 1; });
}

inline TruncSSet horn(int n, int k, int D) {
  if (k < 0 || k > n) throw structural_error("horn: k out of range");
  return detail::simplex_subcomplex(n, D, [n, k](const std::vector<int>& s) {
    // lies in some face d_t with t != k
    for (int t = 0; t <= n; ++t) {
      if (t == k) continue;
      if (std::find(s.begin(), s.end(), t) == s.end()) return true;
    }
    return false;
  });
}

// ---------------------------------------------------------------------------
// Finite categories and nerves
// ---------------------------------------------------------------------------

struct FiniteCategory {
  int n_obj = 0;
  std::vector<int> src, tgt;               // per arrow (identities included)
  std::vector<int> id_arrow;               // per object
  std::vector<std::vector<int>> comp_tab;  // comp_tab[f][g] = "f then g" or -1

  int n_arr() const { return static_cast<int>(src.size()); }
  bool is_id(int f) const { return id_arrow[static_cast<size_t>(src[static_cast<size_t>(f)])] == f; }
  int comp(int f, int g) const {  // f then g
    int r = comp_tab[static_cast<size_t>(f)][static_cast<size_t>(g)];
    if (r < 0) throw structural_error("FiniteCategory: arrows not composable");
    return r;
  }

  bool validate() const {
    if (static_cast<int>(id_arrow.size()) != n_obj) return false;
    for (int x = 0; x < n_obj; ++x) {
      int e = id_arrow[static_cast<size_t>(x)];
      if (src[static_cast<size_t>(e)] != x || tgt[static_cast<size_t>(e)] != x) return false;
    }
    for (int f = 0; f < n_arr(); ++f)
      for (int g = 0; g < n_arr(); ++g) {
        bool composable = tgt[static_cast<size_t>(f)] == src[static_cast<size_t>(g)];
        int r = comp_tab[static_cast<size_t>(f)][static_cast<size_t>(g)];
        if (composable != (r >= 0)) return false;
        if (r >= 0 && (src[static_cast<size_t>(r)] != src[static_cast<size_t>(f)] ||
                       tgt[static_cast<size_t>(r)] != tgt[static_cast<size_t>(g)]))
          return false;
      }
    for (int f = 0; f < n_arr(); ++f) {
      if (comp_tab[static_cast<size_t>(id_arrow[static_cast<size_t>(src[static_cast<size_t>(f)])])]
                  [static_cast<size_t>(f)] != f)
        return false;
      if (comp_tab[static_cast<size_t>(f)]
                  [static_cast<size_t>(id_arrow[static_cast<size_t>(tgt[static_cast<size_t>(f)])])] !=
          f)
        return false;
    }
    for (int f = 0; f < n_arr(); ++f)
      for (int g = 0; g < n_arr(); ++g) {
        if (tgt[static_cast<size_t>(f)] != src[static_cast<size_t>(g)]) continue;
        for (int h = 0; h < n_arr(); ++h) {
          if (tgt[static_cast<size_t>(g)] != src[static_cast<size_t>(h)]) continue;
          if (comp(comp(f, g), h) != comp(f, comp(g, h))) return false;
        }
      }
    return true;
  }
};

/// The poset category of a reflexive transitive relation leq on 0..n-1.
inline FiniteCategory poset_category(int n, const std::vector<std::vector<char>>& leq) {
  FiniteCategory c;
  c.n_obj = n;
  std::vector<std::vector<int>> arrow_id(static_cast<size_t>(n),
                                         std::vector<int>(static_cast<size_t>(n), -1));
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      if (leq[static_cast<size_t>(a)][static_cast<size_t>(b)]) {
        arrow_id[static_cast<size_t>(a)][static_cast<size_t>(b)] = c.n_arr();
        c.src.push_back(a);
        c.tgt.push_back(b);
      }
  c.id_arrow.resize(static_cast<size_t>(n));
  for (int a = 0; a < n; ++a) c.id_arrow[static_cast<size_t>(a)] = arrow_id[static_cast<size_t>(a)][static_cast<size_t>(a)];
  c.comp_tab.assign(static_cast<size_t>(c.n_arr()), std::vector<int>(static_cast<size_t>(c.n_arr()), -1));
  for (int f = 0; f < c.n_arr(); ++f)
    for (int g = 0; g < c.n_arr(); ++g)
      if (c.tgt[static_cast<size_t>(f)] == c.src[static_cast<size_t>(g)])
        c.comp_tab[static_cast<size_t>(f)][static_cast<size_t>(g)] =
            arrow_id[static_cast<size_t>(c.src[static_cast<size_t>(f)])]
                    [static_cast<size_t>(c.tgt[static_cast<size_t>(g)])];
  return c;
}

inline FiniteCategory chain_category(int n) {  // the poset 0 < 1 < ... < n-1
  std::vector<std::vector<char>> leq(static_cast<size_t>(n), std::vector<char>(static_cast<size_t>(n), 0));
  for (int a = 0; a < n; ++a)
    for (int b = a; b < n; ++b) leq[static_cast<size_t>(a)][static_cast<size_t>(b)] = 1;
  return poset_category(n, leq);
}

inline FiniteCategory discrete_category(int n) {
  std::vector<std::vector<char>> leq(static_cast<size_t>(n), std::vector<char>(static_cast<size_t>(n), 0));
  for (int a = 0; a < n; ++a) leq[static_cast<size_t>(a)][static_cast<size_t>(a)] = 1;
  return poset_category(n, leq);
}

/// One-object category from a (not necessarily commutative) monoid table.
inline FiniteCategory one_object_category(int n, int unit,
                                          const std::vector<std::vector<int>>& table) {
  FiniteCategory c;
  c.n_obj = 1;
  c.src.assign(static_cast<size_t>(n), 0);
  c.tgt.assign(static_cast<size_t>(n), 0);
  c.id_arrow = {unit};
  c.comp_tab.assign(static_cast<size_t>(n), std::vector<int>(static_cast<size_t>(n), -1));
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      c.comp_tab[static_cast<size_t>(a)][static_cast<size_t>(b)] = table[static_cast<size_t>(a)][static_cast<size_t>(b)];
  return c;
}

inline FiniteCategory opposite_category(const FiniteCategory& c) {
  FiniteCategory o = c;
  std::swap(o.src, o.tgt);
  o.comp_tab.assign(static_cast<size_t>(c.n_arr()),
                    std::vector<int>(static_cast<size_t>(c.n_arr()), -1));
  for (int f = 0; f < c.n_arr(); ++f)
    for (int g = 0; g < c.n_arr(); ++g)
      if (o.tgt[static_cast<size_t>(f)] == o.src[static_cast<size_t>(g)])
        o.comp_tab[static_cast<size_t>(f)][static_cast<size_t>(g)] =
            c.comp_tab[static_cast<size_t>(g)][static_cast<size_t>(f)];
  return o;
}

inline FiniteCategory product_category(const FiniteCategory& a, const FiniteCategory& b) {
  FiniteCategory p;
  p.n_obj = a.n_obj * b.n_obj;
  auto obj = [&](int x, int y) { return x * b.n_obj + y; };
  auto arr_id = [&](int f, int g) { return f * b.n_arr() + g; };
  int na = a.n_arr() * b.n_arr();
  p.src.resize(static_cast<size_t>(na));
  p.tgt.resize(static_cast<size_t>(na));
  for (int f = 0; f < a.n_arr(); ++f)
    for (int g = 0; g < b.n_arr(); ++g) {
      p.src[static_cast<size_t>(arr_id(f, g))] = obj(a.src[static_cast<size_t>(f)], b.src[static_cast<size_t>(g)]);
      p.tgt[static_cast<size_t>(arr_id(f, g))] = obj(a.tgt[static_cast<size_t>(f)], b.tgt[static_cast<size_t>(g)]);
    }
  p.id_arrow.resize(static_cast<size_t>(p.n_obj));
  for (int x = 0; x < a.n_obj; ++x)
    for (int y = 0; y < b.n_obj; ++y)
      p.id_arrow[static_cast<size_t>(obj(x, y))] =
          arr_id(a.id_arrow[static_cast<size_t>(x)], b.id_arrow[static_cast<size_t>(y)]);
  p.comp_tab.assign(static_cast<size_t>(na), std::vector<int>(static_cast<size_t>(na), -1));
  for (int f1 = 0; f1 < a.n_arr(); ++f1)
    for (int g1 = 0; g1 < b.n_arr(); ++g1)
      for (int f2 = 0; f2 < a.n_arr(); ++f2)
        for (int g2 = 0; g2 < b.n_arr(); ++g2) {
          if (a.tgt[static_cast<size_t>(f1)] != a.src[static_cast<size_t>(f2)]) continue;
          if (b.tgt[static_cast<size_t>(g1)] != b.src[static_cast<size_t>(g2)]) continue;
          p.comp_tab[static_cast<size_t>(arr_id(f1, g1))][static_cast<size_t>(arr_id(f2, g2))] =
              arr_id(a.comp(f1, f2), b.comp(g1, g2));
        }
  return p;
}

/// Nerve cells are composable chains; identities are stripped into the
/// degeneracy word (rightmost identity first).
inline std::pair<std::vector<int>, DegenWord> nerve_normalize(const FiniteCategory& c,
                                                              std::vector<int> chain) {
  DegenWord w;
  while (true) {
    int pos = -1;
    for (int t = static_cast<int>(chain.size()) - 1; t >= 0; --t)
      if (c.is_id(chain[static_cast<size_t>(t)])) {
        pos = t;
        break;
      }
    if (pos < 0) break;
    chain.erase(chain.begin() + pos);
    w.push_back(pos);
  }
  // w was collected outermost-first already in decreasing order
  return {chain, w};
}

inline TruncSSet nerve(const FiniteCategory& c, int D) {
  if (!c.validate()) throw structural_error("nerve: invalid category");
  SSetBuilder b(D);
  std::vector<std::map<std::vector<int>, int>> ids(static_cast<size_t>(D) + 1);
  // level 0: objects
  for (int x = 0; x < c.n_obj; ++x) ids[0][{x}] = b.add(0, {}, "x" + std::to_string(x));
  // level m: chains of m composable non-identity arrows
  std::vector<std::vector<int>> cur;
  for (int m = 1; m <= D; ++m) {
    cur.clear();
    // enumerate chains of length m of non-identity arrows
    std::vector<int> chain;
    struct Rec {
      const FiniteCategory& c;
      int m;
      std::vector<std::vector<int>>& out;
      void go(std::vector<int>& chain) {
        if (static_cast<int>(chain.size()) == m) {
          out.push_back(chain);
          return;
        }
        for (int f = 0; f < c.n_arr(); ++f) {
          if (c.is_id(f)) continue;
          if (!chain.empty() && c.tgt[static_cast<size_t>(chain.back())] != c.src[static_cast<size_t>(f)])
            continue;
          chain.push_back(f);
          go(chain);
          chain.pop_back();
        }
      }
    } rec{c, m, cur};
    rec.go(chain);
    for (const auto& ch : cur) {
      std::vector<CellNF> faces;
      for (int i = 0; i <= m; ++i) {
        std::vector<int> f;
        if (i == 0) {
          f.assign(ch.begin() + 1, ch.end());
        } else if (i == m) {
          f.assign(ch.begin(), ch.end() - 1);
        } else {
          f.assign(ch.begin(), ch.end());
          int merged = c.comp(f[static_cast<size_t>(i - 1)], f[static_cast<size_t>(i)]);
          f.erase(f.begin() + i);
          f[static_cast<size_t>(i - 1)] = merged;
        }
        if (m == 1) {
          // faces are objects
          int obj = (i == 0) ? c.tgt[static_cast<size_t>(ch[0])] : c.src[static_cast<size_t>(ch[0])];
          faces.push_back(CellNF{0, ids[0].at({obj}), {}});
          continue;
        }
        auto [core, word] = nerve_normalize(c, f);
        int core_id;
        if (core.empty()) {
          // all identities: core is the underlying object
          int obj = c.src[static_cast<size_t>(f[0])];
          core_id = ids[0].at({obj});
          faces.push_back(CellNF{0, core_id, word});
        } else {
          core_id = ids[static_cast<size_t>(core.size())].at(core);
          faces.push_back(CellNF{static_cast<int>(core.size()), core_id, word});
        }
      }
      std::string lbl = "f";
      for (int a : ch) lbl += std::to_string(a) + ".";
      ids[static_cast<size_t>(m)][ch] = b.add(m, std::move(faces), lbl);
    }
  }
  return b.finish();
}

// ---------------------------------------------------------------------------
// Maps of simplicial sets
// ---------------------------------------------------------------------------

/// A map is stored on nondegenerate cells of the source; degenerate cells map
/// by applying the word in the target.
struct SSetMap {
  const TruncSSet* source = nullptr;
  const TruncSSet* target = nullptr;
  std::vector<std::vector<CellNF>> assign;  // assign[level][nd_id] in target

  CellNF apply(const CellNF& c) const {
    CellNF base = assign[static_cast<size_t>(c.core_level)][static_cast<size_t>(c.core_id)];
    for (size_t u = c.word.size(); u-- > 0;) base.word = degen_merge(c.word[u], base.word);
    return base;
  }

  bool validate() const {
    for (int m = 0; m <= source->maxdim; ++m)
      for (int id = 0; id < source->size(m); ++id) {
        const CellNF& c = source->cell(m, id);
        CellNF img = apply(c);
        if (img.level() != m) return false;
        if (m > 0)
          for (int i = 0; i <= m; ++i)
            if (!(target->face_nf(img, i) == apply(source->face_nf(c, i)))) return false;
        if (m < source->maxdim)
          for (int i = 0; i <= m; ++i)
            if (!(target->degen_nf(img, i) == apply(source->degen_nf(c, i)))) return false;
      }
    return true;
  }
};

// ---------------------------------------------------------------------------
// Join
// ---------------------------------------------------------------------------

/// The join K * L: level-n cells are pairs (a, b) with dim a + dim b = n - 1,
/// either part possibly absent. K occupies the early vertices.
inline TruncSSet join(const TruncSSet& k, const TruncSSet& l, int D) {
  SSetBuilder b(D);
  // ids[(i, a, j, bid)] with i or j = -1 for an absent part
  std::map<std::pair<std::pair<int, int>, std::pair<int, int>>, int> ids;
  auto key = [](int i, int a, int j, int bid) {
    return std::make_pair(std::make_pair(i, a), std::make_pair(j, bid));
  };
  auto nf_of_pair = [&](int i, const CellNF& a, int j, const CellNF& bnf) -> CellNF {
    // normal form of (a, b): (s_J a0, b) = s_J (a0, b) and
    // (a, s_J b0) = s_{J + dim(a) + 1}(a, b0), dim(a) the full a-part level
    std::vector<int> all;
    int ai = (i >= 0) ? a.core_level : -1;
    int bj = (j >= 0) ? bnf.core_level : -1;
    int adim = (i >= 0) ? a.level() : -1;
    if (j >= 0)
      for (int x : bnf.word) all.push_back(x + adim + 1);
    if (i >= 0)
      for (int x : a.word) all.push_back(x);
    int core = ids.at(key(ai, (i >= 0) ? a.core_id : 0, bj, (j >= 0) ? bnf.core_id : 0));
    CellNF out{ai + bj + 1, core, {}};
    for (size_t u = all.size(); u-- > 0;) out.word = degen_merge(all[u], out.word);
    return out;
  };
  for (int n = 0; n <= D; ++n) {
    for (int i = -1; i <= n; ++i) {
      int j = n - 1 - i;
      if (i >= 0 && i > k.maxdim) continue;
      if (j >= 0 && j > l.maxdim) continue;
      int na = (i >= 0) ? k.nd_size(i) : 1;
      int nb = (j >= 0) ? l.nd_size(j) : 1;
      if (i == -1 && j == -1) continue;
      for (int a = 0; a < na; ++a)
        for (int bid = 0; bid < nb; ++bid) {
          std::vector<CellNF> faces;
          if (n > 0) {
            for (int t = 0; t <= n; ++t) {
              if (i >= 0 && t <= i) {
                if (i == 0) {
                  // a-part vanishes
                  faces.push_back(nf_of_pair(-1, CellNF{}, j, CellNF{j, bid, {}}));
                } else {
                  CellNF fa = k.face_nf(CellNF{i, a, {}}, t);
                  faces.push_back(nf_of_pair(fa.core_level, fa, j, CellNF{j, bid, {}}));
                }
              } else {
                int tb = t - i - 1;
                if (j == 0) {
                  faces.push_back(nf_of_pair(i, CellNF{i, a, {}}, -1, CellNF{}));
                } else {
                  CellNF fb = l.face_nf(CellNF{j, bid, {}}, tb);
                  faces.push_back(nf_of_pair(i, CellNF{i, a, {}}, fb.core_level, fb));
                }
              }
            }
          }
          std::string lbl = (i >= 0 ? k.nd_label[static_cast<size_t>(i)][static_cast<size_t>(a)]
                                    : std::string("-")) +
                            "*" +
                            (j >= 0 ? l.nd_label[static_cast<size_t>(j)][static_cast<size_t>(bid)]
                                    : std::string("-"));
          ids[key(i, a, j, bid)] = b.add(n, std::move(faces), lbl);
        }
    }
  }
  return b.finish();
}

/// Structure-preserving label bijection between two truncated simplicial
/// sets: nondegenerate labels match levelwise and faces correspond.
inline bool isomorphic_by_labels(const TruncSSet& x, const TruncSSet& y,
                                 const std::function<std::string(const std::string&)>& rename) {
  if (x.maxdim != y.maxdim) return false;
  std::vector<std::map<std::string, int>> yid(static_cast<size_t>(y.maxdim) + 1);
  for (int m = 0; m <= y.maxdim; ++m)
    for (int i = 0; i < y.nd_size(m); ++i)
      yid[static_cast<size_t>(m)][rename(y.nd_label[static_cast<size_t>(m)][static_cast<size_t>(i)])] = i;
  for (int m = 0; m <= x.maxdim; ++m) {
    if (x.nd_size(m) != y.nd_size(m)) return false;
    for (int i = 0; i < x.nd_size(m); ++i) {
      auto it = yid[static_cast<size_t>(m)].find(
          rename(x.nd_label[static_cast<size_t>(m)][static_cast<size_t>(i)]));
      if (it == yid[static_cast<size_t>(m)].end()) return false;
      if (m == 0) continue;
      for (int t = 0; t <= m; ++t) {
        CellNF fx = x.face_nf(CellNF{m, i, {}}, t);
        CellNF fy = y.face_nf(CellNF{m, it->second, {}}, t);
        if (fx.word != fy.word) return false;
        auto jt = yid[static_cast<size_t>(fx.core_level)].find(
            rename(x.nd_label[static_cast<size_t>(fx.core_level)][static_cast<size_t>(fx.core_id)]));
        if (jt == yid[static_cast<size_t>(fx.core_level)].end() || jt->second != fy.core_id)
          return false;
      }
    }
  }
  return true;
}

// ---------------------------------------------------------------------------
// Horn filling
// ---------------------------------------------------------------------------

/// A horn of dimension n in X: the tuple of (n-1)-cells indexed by the face
/// positions != k (k = -1 means a full boundary sphere).
struct HornInstance {
  int n = 0;
  int k = -1;                 // omitted face; -1 for boundary
  std::vector<int> face_ids;  // length n+1; entry at k ignored when k >= 0
};

/// All n-cells of X whose faces match the instance.
inline std::vector<int> find_fillers(const TruncSSet& x, const HornInstance& h) {
  if (h.n > x.maxdim) throw capability_error("find_fillers: truncation too low");
  std::vector<int> out;
  for (int c = 0; c < x.size(h.n); ++c) {
    bool ok = true;
    for (int i = 0; i <= h.n && ok; ++i) {
      if (i == h.k) continue;
      if (x.face(h.n, c, i) != h.face_ids[static_cast<size_t>(i)]) ok = false;
    }
    if (ok) out.push_back(c);
  }
  return out;
}

/// Fillers for a horn presented as a map horn(n,k) -> X.
inline std::vector<int> find_fillers(const TruncSSet& x, int n, int k, const SSetMap& h) {
  HornInstance inst;
  inst.n = n;
  inst.k = k;
  inst.face_ids.assign(static_cast<size_t>(n) + 1, -1);
  // the i-th face of the simplex is the nondeg (n-1)-cell of the horn whose
  // label omits i
  for (int i = 0; i <= n; ++i) {
    if (i == k) continue;
    std::vector<int> seq;
    for (int v = 0; v <= n; ++v)
      if (v != i) seq.push_back(v);
    std::string lbl = detail::seq_label(seq);
    bool found = false;
    for (int id = 0; id < h.source->nd_size(n - 1); ++id)
      if (h.source->nd_label[static_cast<size_t>(n - 1)][static_cast<size_t>(id)] == lbl) {
        CellNF img = h.assign[static_cast<size_t>(n - 1)][static_cast<size_t>(id)];
        inst.face_ids[static_cast<size_t>(i)] = x.id_of(img);
        found = true;
      }
    if (!found) throw structural_error("find_fillers: horn face missing");
  }
  return find_fillers(x, inst);
}

/// Enumerates every horn/boundary instance of dimension n in X and calls fn.
template <typename Fn>
void for_each_horn(const TruncSSet& x, int n, int k, Fn&& fn) {
  // backtracking over face positions, checking d_j c_i = d_{i-1} c_j, j < i
  std::vector<int> chosen(static_cast<size_t>(n) + 1, -1);
  std::vector<int> positions;
  for (int i = 0; i <= n; ++i)
    if (i != k) positions.push_back(i);
  struct Rec {
    const TruncSSet& x;
    int n, k;
    std::vector<int>& chosen;
    const std::vector<int>& positions;
    Fn& fn;
    void go(size_t t) {
      if (t == positions.size()) {
        HornInstance h;
        h.n = n;
        h.k = k;
        h.face_ids = chosen;
        fn(h);
        return;
      }
      int i = positions[t];
      for (int c = 0; c < x.size(n - 1); ++c) {
        bool ok = true;
        for (size_t u = 0; u < t && ok; ++u) {
          int j = positions[u];
          // j < i always (positions increasing)
          if (n >= 2 &&
              x.face(n - 1, c, j) != x.face(n - 1, chosen[static_cast<size_t>(j)], i - 1))
            ok = false;
        }
        if (!ok) continue;
        chosen[static_cast<size_t>(i)] = c;
        go(t + 1);
        chosen[static_cast<size_t>(i)] = -1;
      }
    }
  } rec{x, n, k, chosen, positions, fn};
  rec.go(0);
}

struct QCatReport {
  bool ok = true;
  long horns_checked = 0;
  std::string first_failure;
  void fail(const std::string& msg) {
    if (ok) first_failure = msg;
    ok = false;
  }
};

/// Verifies the lifting behaviour of an (n,1)-category within the truncation:
/// inner fillers exist everywhere, are unique above dimension n; boundary
/// fillers unique from n+1 and existent from n+2; outer horns unique above
/// n+2.
inline QCatReport check_n1_property(const TruncSSet& x, int n) {
  QCatReport rep;
  for (int m = 2; m <= x.maxdim; ++m) {
    for (int k = 1; k < m; ++k) {
      for_each_horn(x, m, k, [&](const HornInstance& h) {
        ++rep.horns_checked;
        size_t count = find_fillers(x, h).size();
        if (count < 1)
          rep.fail("missing inner filler at dim " + std::to_string(m));
        else if (m > n && count != 1)
          rep.fail("non-unique inner filler at dim " + std::to_string(m));
      });
    }
    if (m >= n + 1) {
      for_each_horn(x, m, -1, [&](const HornInstance& h) {
        ++rep.horns_checked;
        size_t count = find_fillers(x, h).size();
        if (count > 1) rep.fail("boundary sphere with two fillers at dim " + std::to_string(m));
        if (m >= n + 2 && count != 1)
          rep.fail("boundary sphere without filler at dim " + std::to_string(m));
      });
    }
    if (m > n + 2) {
      for (int k : {0, m}) {
        for_each_horn(x, m, k, [&](const HornInstance& h) {
          ++rep.horns_checked;
          if (find_fillers(x, h).size() != 1)
            rep.fail("outer horn not uniquely fillable at dim " + std::to_string(m));
        });
      }
    }
  }
  return rep;
}

}  // namespace spanforge
