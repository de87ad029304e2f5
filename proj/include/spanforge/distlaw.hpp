#pragma once

#include <array>
#include <set>

#include "spanforge/finset.hpp"
#include "spanforge/simplicial.hpp"
#include "spanforge/spanqcat.hpp"

namespace spanforge {

// ---------------------------------------------------------------------------
// Materialized bisimplicial sets
// ---------------------------------------------------------------------------

/// A bisimplicial set truncated at (d1, d2), stored as flat per-bidegree
/// tables. Horizontal operators act on the first index, vertical on the
/// second; the two directions commute.
struct TruncBiSSet {
  int d1 = 0, d2 = 0;
  // counts[m][n]; hface[m][n][i][c] for m >= 1, i <= m; vface for n >= 1;
  // hdegen[m][n][i][c] for m < d1; vdegen for n < d2
  std::vector<std::vector<int>> counts;
  std::vector<std::vector<std::vector<std::vector<int>>>> hface, vface, hdegen, vdegen;
  std::vector<std::vector<std::vector<std::string>>> labels;

  void alloc() {
    auto shape = [&](auto& t) {
      t.assign(static_cast<size_t>(d1) + 1, {});
      for (int m = 0; m <= d1; ++m) t[static_cast<size_t>(m)].assign(static_cast<size_t>(d2) + 1, {});
    };
    counts.assign(static_cast<size_t>(d1) + 1, std::vector<int>(static_cast<size_t>(d2) + 1, 0));
    shape(hface);
    shape(vface);
    shape(hdegen);
    shape(vdegen);
    labels.assign(static_cast<size_t>(d1) + 1, std::vector<std::vector<std::string>>(static_cast<size_t>(d2) + 1));
  }

  int count(int m, int n) const { return counts[static_cast<size_t>(m)][static_cast<size_t>(n)]; }
  int hf(int m, int n, int i, int c) const {
    return hface[static_cast<size_t>(m)][static_cast<size_t>(n)][static_cast<size_t>(i)][static_cast<size_t>(c)];
  }
  int vf(int m, int n, int i, int c) const {
    return vface[static_cast<size_t>(m)][static_cast<size_t>(n)][static_cast<size_t>(i)][static_cast<size_t>(c)];
  }
  int hd(int m, int n, int i, int c) const {
    return hdegen[static_cast<size_t>(m)][static_cast<size_t>(n)][static_cast<size_t>(i)][static_cast<size_t>(c)];
  }
  int vd(int m, int n, int i, int c) const {
    return vdegen[static_cast<size_t>(m)][static_cast<size_t>(n)][static_cast<size_t>(i)][static_cast<size_t>(c)];
  }

  /// Both directions' simplicial identities plus the interchange law.
  bool validate() const {
    for (int m = 0; m <= d1; ++m)
      for (int n = 0; n <= d2; ++n)
        for (int c = 0; c < count(m, n); ++c) {
          if (m >= 2)
            for (int j = 1; j <= m; ++j)
              for (int i = 0; i < j; ++i)
                if (hf(m - 1, n, i, hf(m, n, j, c)) != hf(m - 1, n, j - 1, hf(m, n, i, c)))
                  return false;
          if (n >= 2)
            for (int j = 1; j <= n; ++j)
              for (int i = 0; i < j; ++i)
                if (vf(m, n - 1, i, vf(m, n, j, c)) != vf(m, n - 1, j - 1, vf(m, n, i, c)))
                  return false;
          if (m >= 1 && n >= 1)
            for (int i = 0; i <= m; ++i)
              for (int j = 0; j <= n; ++j)
                if (vf(m - 1, n, j, hf(m, n, i, c)) != hf(m, n - 1, i, vf(m, n, j, c)))
                  return false;
          if (m < d1 && n < d2)
            for (int i = 0; i <= m; ++i)
              for (int j = 0; j <= n; ++j)
                if (vd(m + 1, n, j, hd(m, n, i, c)) != hd(m, n + 1, i, vd(m, n, j, c)))
                  return false;
          if (m < d1)
            for (int i = 0; i <= m; ++i) {
              int s = hd(m, n, i, c);
              if (hf(m + 1, n, i, s) != c || hf(m + 1, n, i + 1, s) != c) return false;
            }
          if (n < d2)
            for (int j = 0; j <= n; ++j) {
              int s = vd(m, n, j, c);
              if (vf(m, n + 1, j, s) != c || vf(m, n + 1, j + 1, s) != c) return false;
            }
        }
    return true;
  }
};

/// The external product: (X x Y)_{m,n} = X_m x Y_n componentwise.
inline TruncBiSSet external_product(const TruncSSet& x, const TruncSSet& y) {
  TruncBiSSet b;
  b.d1 = x.maxdim;
  b.d2 = y.maxdim;
  b.alloc();
  for (int m = 0; m <= b.d1; ++m)
    for (int n = 0; n <= b.d2; ++n) {
      int cx = x.size(m), cy = y.size(n);
      b.counts[static_cast<size_t>(m)][static_cast<size_t>(n)] = cx * cy;
      auto at = [&](int a, int c) { return a * cy + c; };
      auto& hf = b.hface[static_cast<size_t>(m)][static_cast<size_t>(n)];
      auto& vf = b.vface[static_cast<size_t>(m)][static_cast<size_t>(n)];
      auto& hd = b.hdegen[static_cast<size_t>(m)][static_cast<size_t>(n)];
      auto& vd = b.vdegen[static_cast<size_t>(m)][static_cast<size_t>(n)];
      if (m >= 1) {
        hf.assign(static_cast<size_t>(m) + 1, std::vector<int>(static_cast<size_t>(cx * cy)));
        for (int i = 0; i <= m; ++i)
          for (int a = 0; a < cx; ++a)
            for (int c = 0; c < cy; ++c)
              hf[static_cast<size_t>(i)][static_cast<size_t>(at(a, c))] =
                  x.face(m, a, i) * cy + c;
      }
      if (n >= 1) {
        vf.assign(static_cast<size_t>(n) + 1, std::vector<int>(static_cast<size_t>(cx * cy)));
        for (int j = 0; j <= n; ++j)
          for (int a = 0; a < cx; ++a)
            for (int c = 0; c < cy; ++c)
              vf[static_cast<size_t>(j)][static_cast<size_t>(at(a, c))] =
                  a * y.size(n - 1) + y.face(n, c, j);
      }
      if (m < b.d1) {
        hd.assign(static_cast<size_t>(m) + 1, std::vector<int>(static_cast<size_t>(cx * cy)));
        for (int i = 0; i <= m; ++i)
          for (int a = 0; a < cx; ++a)
            for (int c = 0; c < cy; ++c)
              hd[static_cast<size_t>(i)][static_cast<size_t>(at(a, c))] =
                  x.degen(m, a, i) * cy + c;
      }
      if (n < b.d2) {
        vd.assign(static_cast<size_t>(n) + 1, std::vector<int>(static_cast<size_t>(cx * cy)));
        for (int j = 0; j <= n; ++j)
          for (int a = 0; a < cx; ++a)
            for (int c = 0; c < cy; ++c)
              vd[static_cast<size_t>(j)][static_cast<size_t>(at(a, c))] =
                  a * y.size(n + 1) + y.degen(n, c, j);
      }
      for (int a = 0; a < cx; ++a)
        for (int c = 0; c < cy; ++c)
          b.labels[static_cast<size_t>(m)][static_cast<size_t>(n)].push_back(
              x.label(x.cell(m, a)) + "#" + y.label(y.cell(n, c)));
    }
  return b;
}

/// pi_1^* S: constant in the vertical direction.
inline TruncBiSSet pi1_pullback(const TruncSSet& s, int d2) {
  SSetBuilder pt_builder(d2);
  pt_builder.add(0, {}, "pt");
  TruncSSet pt = pt_builder.finish();
  return external_product(s, pt);
}

// ---------------------------------------------------------------------------
// Simplex membership helpers for bihorns
// ---------------------------------------------------------------------------

namespace bidet {

/// A cell of the standard a-simplex: a weakly increasing value sequence.
using Seq = std::vector<int>;

inline bool in_horn(const Seq& s, int a, int b) {
  // the horn subcomplex of the a-simplex omitting face b; the empty horn
  // convention makes every cell of the 0-simplex lie outside. b = -2 is the
  // whole-simplex sentinel.
  if (b == -2) return true;
  if (a == 0) return false;
  for (int t = 0; t <= a; ++t) {
    if (t == b) continue;
    if (std::find(s.begin(), s.end(), t) == s.end()) return true;
  }
  return false;
}

inline void seqs(int a, int len, std::vector<Seq>& out) {
  Seq cur(static_cast<size_t>(len));
  if (len == 0) return;
  std::fill(cur.begin(), cur.end(), 0);
  while (true) {
    bool mono = true;
    for (size_t i = 1; i < cur.size(); ++i)
      if (cur[i] < cur[i - 1]) mono = false;
    if (mono) out.push_back(cur);
    size_t i = cur.size();
    bool adv = false;
    while (i-- > 0) {
      if (cur[i] < a) {
        ++cur[i];
        std::fill(cur.begin() + static_cast<long>(i) + 1, cur.end(), 0);
        adv = true;
        break;
      }
    }
    if (!adv) break;
  }
}

}  // namespace bidet

/// The bihorn as a sub-bisimplicial set of the (a, c) bisimplex: cells are
/// pairs of monotone sequences with the membership condition.
inline TruncBiSSet bihorn(int a, int b, int c, int d) {
  TruncBiSSet k;
  k.d1 = a;
  k.d2 = c;
  k.alloc();
  // enumerate cells per bidegree with ids
  std::vector<std::vector<std::map<std::pair<bidet::Seq, bidet::Seq>, int>>> ids(
      static_cast<size_t>(a) + 1);
  for (int m = 0; m <= a; ++m) ids[static_cast<size_t>(m)].resize(static_cast<size_t>(c) + 1);
  std::vector<std::vector<std::vector<std::pair<bidet::Seq, bidet::Seq>>>> cells(
      static_cast<size_t>(a) + 1);
  for (int m = 0; m <= a; ++m) cells[static_cast<size_t>(m)].resize(static_cast<size_t>(c) + 1);
  for (int m = 0; m <= a; ++m)
    for (int n = 0; n <= c; ++n) {
      std::vector<bidet::Seq> alphas, betas;
      bidet::seqs(a, m + 1, alphas);
      bidet::seqs(c, n + 1, betas);
      for (const auto& al : alphas)
        for (const auto& be : betas) {
          if (!bidet::in_horn(al, a, b) && !bidet::in_horn(be, c, d)) continue;
          auto keypair = std::make_pair(al, be);
          ids[static_cast<size_t>(m)][static_cast<size_t>(n)][keypair] =
              static_cast<int>(cells[static_cast<size_t>(m)][static_cast<size_t>(n)].size());
          cells[static_cast<size_t>(m)][static_cast<size_t>(n)].push_back(keypair);
        }
      k.counts[static_cast<size_t>(m)][static_cast<size_t>(n)] =
          static_cast<int>(cells[static_cast<size_t>(m)][static_cast<size_t>(n)].size());
      for (const auto& [al, be] : cells[static_cast<size_t>(m)][static_cast<size_t>(n)]) {
        std::string l;
        for (int v : al) l += std::to_string(v);
        l += "|";
        for (int v : be) l += std::to_string(v);
        k.labels[static_cast<size_t>(m)][static_cast<size_t>(n)].push_back(l);
      }
    }
  // tables
  for (int m = 0; m <= a; ++m)
    for (int n = 0; n <= c; ++n) {
      int cc = k.count(m, n);
      if (m >= 1) {
        auto& hf = k.hface[static_cast<size_t>(m)][static_cast<size_t>(n)];
        hf.assign(static_cast<size_t>(m) + 1, std::vector<int>(static_cast<size_t>(cc)));
        for (int cid = 0; cid < cc; ++cid) {
          auto [al, be] = cells[static_cast<size_t>(m)][static_cast<size_t>(n)][static_cast<size_t>(cid)];
          for (int i = 0; i <= m; ++i) {
            bidet::Seq fa = al;
            fa.erase(fa.begin() + i);
            hf[static_cast<size_t>(i)][static_cast<size_t>(cid)] =
                ids[static_cast<size_t>(m - 1)][static_cast<size_t>(n)].at({fa, be});
          }
        }
      }
      if (n >= 1) {
        auto& vf = k.vface[static_cast<size_t>(m)][static_cast<size_t>(n)];
        vf.assign(static_cast<size_t>(n) + 1, std::vector<int>(static_cast<size_t>(cc)));
        for (int cid = 0; cid < cc; ++cid) {
          auto [al, be] = cells[static_cast<size_t>(m)][static_cast<size_t>(n)][static_cast<size_t>(cid)];
          for (int j = 0; j <= n; ++j) {
            bidet::Seq fb = be;
            fb.erase(fb.begin() + j);
            vf[static_cast<size_t>(j)][static_cast<size_t>(cid)] =
                ids[static_cast<size_t>(m)][static_cast<size_t>(n - 1)].at({al, fb});
          }
        }
      }
      if (m < a) {
        auto& hd = k.hdegen[static_cast<size_t>(m)][static_cast<size_t>(n)];
        hd.assign(static_cast<size_t>(m) + 1, std::vector<int>(static_cast<size_t>(cc)));
        for (int cid = 0; cid < cc; ++cid) {
          auto [al, be] = cells[static_cast<size_t>(m)][static_cast<size_t>(n)][static_cast<size_t>(cid)];
          for (int i = 0; i <= m; ++i) {
            bidet::Seq sa = al;
            sa.insert(sa.begin() + i, al[static_cast<size_t>(i)]);
            hd[static_cast<size_t>(i)][static_cast<size_t>(cid)] =
                ids[static_cast<size_t>(m + 1)][static_cast<size_t>(n)].at({sa, be});
          }
        }
      }
      if (n < c) {
        auto& vd = k.vdegen[static_cast<size_t>(m)][static_cast<size_t>(n)];
        vd.assign(static_cast<size_t>(n) + 1, std::vector<int>(static_cast<size_t>(cc)));
        for (int cid = 0; cid < cc; ++cid) {
          auto [al, be] = cells[static_cast<size_t>(m)][static_cast<size_t>(n)][static_cast<size_t>(cid)];
          for (int j = 0; j <= n; ++j) {
            bidet::Seq sb = be;
            sb.insert(sb.begin() + j, be[static_cast<size_t>(j)]);
            vd[static_cast<size_t>(j)][static_cast<size_t>(cid)] =
                ids[static_cast<size_t>(m)][static_cast<size_t>(n + 1)].at({al, sb});
          }
        }
      }
    }
  return k;
}

/// The full (a, c)-bisimplex: a bihorn with no cell omitted.
inline TruncBiSSet bisimplex(int a, int c) { return bihorn(a, -2, c, -2); }

// ---------------------------------------------------------------------------
// Distributahedra
// ---------------------------------------------------------------------------

/// The n-th distributahedron truncated at (d1, d2): (i, j)-cells are weakly
/// increasing sequences a_0..a_i <= b_0..b_j in 0..n.
struct Distributahedron {
  int n = 0;
  TruncBiSSet shape;
  // cells stored as concatenated sequences per bidegree
  std::vector<std::vector<std::vector<std::vector<int>>>> cells;  // [m][k][cell] = seq

  int id_of(int m, int k, const std::vector<int>& seq) const {
    const auto& lvl = cells[static_cast<size_t>(m)][static_cast<size_t>(k)];
    auto it = std::find(lvl.begin(), lvl.end(), seq);
    if (it == lvl.end()) throw structural_error("Distributahedron: unknown cell");
    return static_cast<int>(it - lvl.begin());
  }
};

inline Distributahedron distributahedron(int n, int d1, int d2) {
  Distributahedron xi;
  xi.n = n;
  xi.shape.d1 = d1;
  xi.shape.d2 = d2;
  xi.shape.alloc();
  xi.cells.assign(static_cast<size_t>(d1) + 1, {});
  for (int m = 0; m <= d1; ++m) xi.cells[static_cast<size_t>(m)].resize(static_cast<size_t>(d2) + 1);
  for (int m = 0; m <= d1; ++m)
    for (int k = 0; k <= d2; ++k) {
      std::vector<bidet::Seq> seqs;
      bidet::seqs(n, m + k + 2, seqs);
      for (const auto& s : seqs) xi.cells[static_cast<size_t>(m)][static_cast<size_t>(k)].push_back(s);
      xi.shape.counts[static_cast<size_t>(m)][static_cast<size_t>(k)] =
          static_cast<int>(seqs.size());
      for (const auto& s : seqs) {
        std::string l;
        for (int i = 0; i <= m; ++i) l += std::to_string(s[static_cast<size_t>(i)]);
        l += "|";
        for (int j = 0; j <= k; ++j) l += std::to_string(s[static_cast<size_t>(m + 1 + j)]);
        xi.shape.labels[static_cast<size_t>(m)][static_cast<size_t>(k)].push_back(l);
      }
    }
  for (int m = 0; m <= d1; ++m)
    for (int k = 0; k <= d2; ++k) {
      int cc = xi.shape.count(m, k);
      const auto& lvl = xi.cells[static_cast<size_t>(m)][static_cast<size_t>(k)];
      if (m >= 1) {
        auto& hf = xi.shape.hface[static_cast<size_t>(m)][static_cast<size_t>(k)];
        hf.assign(static_cast<size_t>(m) + 1, std::vector<int>(static_cast<size_t>(cc)));
        for (int c = 0; c < cc; ++c)
          for (int i = 0; i <= m; ++i) {
            auto s = lvl[static_cast<size_t>(c)];
            s.erase(s.begin() + i);
            hf[static_cast<size_t>(i)][static_cast<size_t>(c)] = xi.id_of(m - 1, k, s);
          }
      }
      if (k >= 1) {
        auto& vf = xi.shape.vface[static_cast<size_t>(m)][static_cast<size_t>(k)];
        vf.assign(static_cast<size_t>(k) + 1, std::vector<int>(static_cast<size_t>(cc)));
        for (int c = 0; c < cc; ++c)
          for (int j = 0; j <= k; ++j) {
            auto s = lvl[static_cast<size_t>(c)];
            s.erase(s.begin() + (m + 1 + j));
            vf[static_cast<size_t>(j)][static_cast<size_t>(c)] = xi.id_of(m, k - 1, s);
          }
      }
      if (m < d1) {
        auto& hd = xi.shape.hdegen[static_cast<size_t>(m)][static_cast<size_t>(k)];
        hd.assign(static_cast<size_t>(m) + 1, std::vector<int>(static_cast<size_t>(cc)));
        for (int c = 0; c < cc; ++c)
          for (int i = 0; i <= m; ++i) {
            auto s = lvl[static_cast<size_t>(c)];
            s.insert(s.begin() + i, s[static_cast<size_t>(i)]);
            hd[static_cast<size_t>(i)][static_cast<size_t>(c)] = xi.id_of(m + 1, k, s);
          }
      }
      if (k < d2) {
        auto& vd = xi.shape.vdegen[static_cast<size_t>(m)][static_cast<size_t>(k)];
        vd.assign(static_cast<size_t>(k) + 1, std::vector<int>(static_cast<size_t>(cc)));
        for (int c = 0; c < cc; ++c)
          for (int j = 0; j <= k; ++j) {
            auto s = lvl[static_cast<size_t>(c)];
            s.insert(s.begin() + (m + 1 + j), s[static_cast<size_t>(m + 1 + j)]);
            vd[static_cast<size_t>(j)][static_cast<size_t>(c)] = xi.id_of(m, k + 1, s);
          }
      }
    }
  return xi;
}

/// Closed-form cell count of the n-th distributahedron in bidegree (i, j).
inline long distributahedron_count(int n, int i, int j) {
  // weakly increasing sequences of length i+j+2 from n+1 values
  long num = 1, den = 1;
  int len = i + j + 2;
  for (int t = 0; t < len; ++t) {
    num *= n + i + j + 2 - t;
    den *= t + 1;
  }
  return num / den;
}

/// The cosimplicial action on distributahedra: a monotone map theta sends an
/// (i,j)-cell of Xi^m to one of Xi^n by postcomposition.
inline std::vector<int> xi_act(const std::vector<int>& cell, const std::vector<int>& theta) {
  std::vector<int> out(cell.size());
  for (size_t t = 0; t < cell.size(); ++t) out[t] = theta[static_cast<size_t>(cell[t])];
  return out;
}

// ---------------------------------------------------------------------------
// Maps of bisimplicial sets, generic law check, codiagonal
// ---------------------------------------------------------------------------

/// A map K -> B between materialized bisimplicial sets: assignment per cell.
struct BiMap {
  std::vector<std::vector<std::vector<int>>> assign;  // [m][n][cell] or -1

  int at(int m, int n, int c) const {
    return assign[static_cast<size_t>(m)][static_cast<size_t>(n)][static_cast<size_t>(c)];
  }
};

/// Enumerates all maps K -> B (within the shared truncation) by backtracking
/// in order of total degree, constrained by faces and degeneracies.
template <typename Fn>
void for_each_bimap(const TruncBiSSet& k, const TruncBiSSet& b, Fn&& fn) {
  struct Slot {
    int m, n, c;
  };
  std::vector<Slot> order;
  for (int total = 0; total <= k.d1 + k.d2; ++total)
    for (int m = 0; m <= std::min(total, k.d1); ++m) {
      int n = total - m;
      if (n > k.d2) continue;
      for (int c = 0; c < k.count(m, n); ++c) order.push_back({m, n, c});
    }
  BiMap asg;
  asg.assign.assign(static_cast<size_t>(k.d1) + 1, {});
  for (int m = 0; m <= k.d1; ++m) {
    asg.assign[static_cast<size_t>(m)].assign(static_cast<size_t>(k.d2) + 1, {});
    for (int n = 0; n <= k.d2; ++n)
      asg.assign[static_cast<size_t>(m)][static_cast<size_t>(n)].assign(
          static_cast<size_t>(k.count(m, n)), -1);
  }
  // consistency of a candidate at a slot with already-assigned neighbours
  auto consistent = [&](const Slot& s, int cand) {
    if (s.m >= 1)
      for (int i = 0; i <= s.m; ++i) {
        int kc = k.hf(s.m, s.n, i, s.c);
        int have = asg.at(s.m - 1, s.n, kc);
        if (have >= 0 && have != b.hf(s.m, s.n, i, cand)) return false;
      }
    if (s.n >= 1)
      for (int j = 0; j <= s.n; ++j) {
        int kc = k.vf(s.m, s.n, j, s.c);
        int have = asg.at(s.m, s.n - 1, kc);
        if (have >= 0 && have != b.vf(s.m, s.n, j, cand)) return false;
      }
    // degeneracy constraints looking down: if this cell is a degeneracy of a
    // lower one, its image must be the matching degeneracy
    if (s.m >= 1)
      for (int i = 0; i < s.m; ++i) {
        int lower = k.hf(s.m, s.n, i, s.c);
        if (k.hd(s.m - 1, s.n, i, lower) == s.c) {
          int have = asg.at(s.m - 1, s.n, lower);
          if (have >= 0 && b.hd(s.m - 1, s.n, i, have) != cand) return false;
        }
      }
    if (s.n >= 1)
      for (int j = 0; j < s.n; ++j) {
        int lower = k.vf(s.m, s.n, j, s.c);
        if (k.vd(s.m, s.n - 1, j, lower) == s.c) {
          int have = asg.at(s.m, s.n - 1, lower);
          if (have >= 0 && b.vd(s.m, s.n - 1, j, have) != cand) return false;
        }
      }
    return true;
  };
  struct Rec {
    const TruncBiSSet& k;
    const TruncBiSSet& b;
    std::vector<Slot>& order;
    BiMap& asg;
    const std::function<bool(const Slot&, int)>& consistent;
    Fn& fn;
    void go(size_t t) {
      if (t == order.size()) {
        fn(asg);
        return;
      }
      const Slot& s = order[t];
      for (int cand = 0; cand < b.count(s.m, s.n); ++cand) {
        if (!consistent(s, cand)) continue;
        asg.assign[static_cast<size_t>(s.m)][static_cast<size_t>(s.n)][static_cast<size_t>(s.c)] =
            cand;
        go(t + 1);
        asg.assign[static_cast<size_t>(s.m)][static_cast<size_t>(s.n)][static_cast<size_t>(s.c)] =
            -1;
      }
    }
  };
  std::function<bool(const Slot&, int)> cons = consistent;
  Rec rec{k, b, order, asg, cons, fn};
  rec.go(0);
}

/// Restriction of a map on the (a,c) bisimplex to the bihorn subcomplex;
/// used to test filler existence: does some simplex map extend the horn map?
struct LawReport {
  bool ok = true;
  long horns_checked = 0;
  std::string first_failure;
  void fail(const std::string& m) {
    if (ok) first_failure = m;
    ok = false;
  }
};

/// Lists the inner bihorn shapes (a, b, c, d) with a <= maxm, c <= maxn.
inline std::vector<std::array<int, 4>> inner_bihorn_shapes(int maxm, int maxn) {
  std::vector<std::array<int, 4>> shapes;
  for (int m = 1; m <= maxm; ++m)
    for (int n = 1; n <= maxn; ++n) shapes.push_back({m, 0, n, n});
  for (int n = 2; n <= maxn; ++n)
    for (int kk = 1; kk < n; ++kk)
      for (int m = 0; m <= maxm; ++m) shapes.push_back({m, 0, n, kk});
  for (int m = 2; m <= maxm; ++m)
    for (int kk = 1; kk < m; ++kk)
      for (int n = 0; n <= maxn; ++n) shapes.push_back({m, kk, n, n});
  return shapes;
}

/// Checks the distributive-law liftings for a materialized bisimplicial set:
/// every map from every listed bihorn extends to the full bisimplex. All
/// full-simplex maps are enumerated once and their horn restrictions hashed.
inline LawReport check_distributive_law(const TruncBiSSet& b, int maxm, int maxn) {
  LawReport rep;
  for (const auto& [a, bb, c, d] : inner_bihorn_shapes(std::min(maxm, b.d1), std::min(maxn, b.d2))) {
    TruncBiSSet horn_k = bihorn(a, bb, c, d);
    TruncBiSSet full = bisimplex(a, c);
    // index horn cells inside the full bisimplex by label
    std::vector<std::vector<std::vector<int>>> to_full(static_cast<size_t>(a) + 1);
    for (int m = 0; m <= a; ++m) {
      to_full[static_cast<size_t>(m)].resize(static_cast<size_t>(c) + 1);
      for (int n = 0; n <= c; ++n) {
        std::map<std::string, int> by_label;
        for (int cc = 0; cc < full.count(m, n); ++cc)
          by_label[full.labels[static_cast<size_t>(m)][static_cast<size_t>(n)][static_cast<size_t>(cc)]] = cc;
        for (int cc = 0; cc < horn_k.count(m, n); ++cc)
          to_full[static_cast<size_t>(m)][static_cast<size_t>(n)].push_back(by_label.at(
              horn_k.labels[static_cast<size_t>(m)][static_cast<size_t>(n)][static_cast<size_t>(cc)]));
      }
    }
    auto restrict_encode = [&](const BiMap& ext) {
      std::vector<int> flat;
      for (int m = 0; m <= a; ++m)
        for (int n = 0; n <= c; ++n)
          for (int cc = 0; cc < horn_k.count(m, n); ++cc)
            flat.push_back(ext.at(m, n, to_full[static_cast<size_t>(m)][static_cast<size_t>(n)][static_cast<size_t>(cc)]));
      return flat;
    };
    std::set<std::vector<int>> fillable;
    for_each_bimap(full, b, [&](const BiMap& ext) { fillable.insert(restrict_encode(ext)); });
    for_each_bimap(horn_k, b, [&](const BiMap& horn_map) {
      ++rep.horns_checked;
      if (!rep.ok) return;
      std::vector<int> flat;
      for (int m = 0; m <= a; ++m)
        for (int n = 0; n <= c; ++n)
          for (int cc = 0; cc < horn_k.count(m, n); ++cc) flat.push_back(horn_map.at(m, n, cc));
      if (!fillable.count(flat))
        rep.fail("unfilled bihorn (" + std::to_string(a) + "," + std::to_string(bb) + "," +
                 std::to_string(c) + "," + std::to_string(d) + ")");
    });
    if (!rep.ok) break;
  }
  return rep;
}

/// Levelwise tables of a simplicial set presented without degeneracy
/// bookkeeping; enough structure for horn-filling checks.
struct TablesSSet {
  int maxdim = 0;
  std::vector<int> counts;
  std::vector<std::vector<std::vector<int>>> face;    // face[n][i][c]
  std::vector<std::vector<std::vector<int>>> degen;   // degen[n][i][c]

  bool validate() const {
    for (int n = 2; n <= maxdim; ++n)
      for (int c = 0; c < counts[static_cast<size_t>(n)]; ++c)
        for (int j = 1; j <= n; ++j)
          for (int i = 0; i < j; ++i)
            if (face[static_cast<size_t>(n - 1)][static_cast<size_t>(i)]
                    [static_cast<size_t>(face[static_cast<size_t>(n)][static_cast<size_t>(j)][static_cast<size_t>(c)])] !=
                face[static_cast<size_t>(n - 1)][static_cast<size_t>(j - 1)]
                    [static_cast<size_t>(face[static_cast<size_t>(n)][static_cast<size_t>(i)][static_cast<size_t>(c)])])
              return false;
    return true;
  }
};

/// Inner-horn filler counts in a TablesSSet; fn receives (n, k, count).
template <typename Fn>
void tables_inner_horns(const TablesSSet& x, Fn&& fn) {
  for (int n = 2; n <= x.maxdim; ++n)
    for (int k = 1; k < n; ++k) {
      // enumerate horns by backtracking
      std::vector<int> chosen(static_cast<size_t>(n) + 1, -1);
      std::vector<int> pos;
      for (int i = 0; i <= n; ++i)
        if (i != k) pos.push_back(i);
      struct Rec {
        const TablesSSet& x;
        int n, k;
        std::vector<int>& chosen;
        const std::vector<int>& pos;
        Fn& fn;
        void go(size_t t) {
          if (t == pos.size()) {
            int count = 0;
            for (int c = 0; c < x.counts[static_cast<size_t>(n)]; ++c) {
              bool match = true;
              for (int i = 0; i <= n && match; ++i) {
                if (i == k) continue;
                if (x.face[static_cast<size_t>(n)][static_cast<size_t>(i)][static_cast<size_t>(c)] !=
                    chosen[static_cast<size_t>(i)])
                  match = false;
              }
              if (match) ++count;
            }
            fn(n, k, count);
            return;
          }
          int i = pos[t];
          for (int c = 0; c < x.counts[static_cast<size_t>(n - 1)]; ++c) {
            bool ok = true;
            for (size_t u = 0; u < t && ok; ++u) {
              int j = pos[u];
              if (n >= 2 &&
                  x.face[static_cast<size_t>(n - 1)][static_cast<size_t>(j)][static_cast<size_t>(c)] !=
                      x.face[static_cast<size_t>(n - 1)][static_cast<size_t>(i - 1)]
                            [static_cast<size_t>(chosen[static_cast<size_t>(j)])])
                ok = false;
            }
            if (!ok) continue;
            chosen[static_cast<size_t>(i)] = c;
            go(t + 1);
            chosen[static_cast<size_t>(i)] = -1;
          }
        }
      };
      Rec rec{x, n, k, chosen, pos, fn};
      rec.go(0);
    }
}

/// The composite simplicial set of a materialized distributive law: level-N
/// cells are the bisimplicial maps from the N-th distributahedron.
inline TablesSSet codiagonal(const TruncBiSSet& d, int levels) {
  TablesSSet out;
  out.maxdim = levels;
  out.counts.assign(static_cast<size_t>(levels) + 1, 0);
  out.face.assign(static_cast<size_t>(levels) + 1, {});
  out.degen.assign(static_cast<size_t>(levels) + 1, {});
  // materialize the distributahedra and all maps per level
  std::vector<Distributahedron> xis;
  for (int n = 0; n <= levels; ++n) xis.push_back(distributahedron(n, d.d1, d.d2));
  std::vector<std::vector<BiMap>> maps(static_cast<size_t>(levels) + 1);
  std::vector<std::map<std::vector<int>, int>> ids(static_cast<size_t>(levels) + 1);
  auto encode = [&](const BiMap& m) {
    std::vector<int> flat;
    for (const auto& lvl : m.assign)
      for (const auto& row : lvl) flat.insert(flat.end(), row.begin(), row.end());
    return flat;
  };
  for (int n = 0; n <= levels; ++n) {
    for_each_bimap(xis[static_cast<size_t>(n)].shape, d, [&](const BiMap& m) {
      ids[static_cast<size_t>(n)][encode(m)] = static_cast<int>(maps[static_cast<size_t>(n)].size());
      maps[static_cast<size_t>(n)].push_back(m);
    });
    out.counts[static_cast<size_t>(n)] = static_cast<int>(maps[static_cast<size_t>(n)].size());
  }
  // faces/degeneracies by precomposition with the cosimplicial actions
  auto act = [&](int from, const BiMap& m, const std::vector<int>& theta, int to) {
    BiMap r;
    const Distributahedron& xt = xis[static_cast<size_t>(to)];
    const Distributahedron& xf = xis[static_cast<size_t>(from)];
    r.assign.assign(static_cast<size_t>(d.d1) + 1, {});
    for (int a = 0; a <= d.d1; ++a) {
      r.assign[static_cast<size_t>(a)].assign(static_cast<size_t>(d.d2) + 1, {});
      for (int b = 0; b <= d.d2; ++b) {
        int cc = xt.shape.count(a, b);
        r.assign[static_cast<size_t>(a)][static_cast<size_t>(b)].assign(static_cast<size_t>(cc), -1);
        for (int c = 0; c < cc; ++c) {
          auto img = xi_act(xt.cells[static_cast<size_t>(a)][static_cast<size_t>(b)][static_cast<size_t>(c)], theta);
          r.assign[static_cast<size_t>(a)][static_cast<size_t>(b)][static_cast<size_t>(c)] =
              m.at(a, b, xf.id_of(a, b, img));
        }
      }
    }
    return r;
  };
  for (int n = 1; n <= levels; ++n) {
    out.face[static_cast<size_t>(n)].assign(static_cast<size_t>(n) + 1,
                                            std::vector<int>(static_cast<size_t>(out.counts[static_cast<size_t>(n)])));
    for (int i = 0; i <= n; ++i) {
      std::vector<int> delta;
      for (int v = 0; v <= n; ++v)
        if (v != i) delta.push_back(v);
      // theta: [n-1] -> [n] omitting i; act on an (a,b)-cell of Xi^{n-1}
      for (int c = 0; c < out.counts[static_cast<size_t>(n)]; ++c) {
        BiMap restricted = act(n, maps[static_cast<size_t>(n)][static_cast<size_t>(c)], delta, n - 1);
        out.face[static_cast<size_t>(n)][static_cast<size_t>(i)][static_cast<size_t>(c)] =
            ids[static_cast<size_t>(n - 1)].at(encode(restricted));
      }
    }
  }
  for (int n = 0; n < levels; ++n) {
    out.degen[static_cast<size_t>(n)].assign(static_cast<size_t>(n) + 1,
                                             std::vector<int>(static_cast<size_t>(out.counts[static_cast<size_t>(n)])));
    for (int i = 0; i <= n; ++i) {
      std::vector<int> sigma;
      for (int v = 0; v <= n + 1; ++v) sigma.push_back(v <= i ? v : v - 1);
      for (int c = 0; c < out.counts[static_cast<size_t>(n)]; ++c) {
        BiMap extended = act(n, maps[static_cast<size_t>(n)][static_cast<size_t>(c)], sigma, n + 1);
        out.degen[static_cast<size_t>(n)][static_cast<size_t>(i)][static_cast<size_t>(c)] =
            ids[static_cast<size_t>(n + 1)].at(encode(extended));
      }
    }
  }
  return out;
}

}  // namespace spanforge
