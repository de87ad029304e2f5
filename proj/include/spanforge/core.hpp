#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

namespace spanforge {

/// Malformed input: mismatched endpoints, invalid tables, broken invariants.
struct structural_error : std::runtime_error {
  explicit structural_error(const std::string& what) : std::runtime_error(what) {}
};

/// The requested computation needs data beyond the stored truncation.
struct capability_error : std::runtime_error {
  explicit capability_error(const std::string& what) : std::runtime_error(what) {}
};

/// A canonical finite set: elements are 0..size-1.
struct FinSet {
  int size = 0;
};

inline bool operator==(FinSet a, FinSet b) { return a.size == b.size; }

/// A total function between canonical finite sets.
struct FinMap {
  int dom = 0;
  int cod = 0;
  std::vector<int> img;  // img.size() == dom, entries in 0..cod-1

  FinMap() = default;
  FinMap(int dom_, int cod_, std::vector<int> img_) : dom(dom_), cod(cod_), img(std::move(img_)) {
    if (static_cast<int>(img.size()) != dom)
      throw structural_error("FinMap: image length != dom");
    for (int v : img)
      if (v < 0 || v >= cod) throw structural_error("FinMap: image entry out of range");
  }

  int operator()(int x) const { return img[static_cast<size_t>(x)]; }
};

inline bool operator==(const FinMap& a, const FinMap& b) {
  return a.dom == b.dom && a.cod == b.cod && a.img == b.img;
}
inline bool operator!=(const FinMap& a, const FinMap& b) { return !(a == b); }
inline bool operator<(const FinMap& a, const FinMap& b) {
  if (a.dom != b.dom) return a.dom < b.dom;
  if (a.cod != b.cod) return a.cod < b.cod;
  return a.img < b.img;
}

inline FinMap identity_map(int n) {
  std::vector<int> img(static_cast<size_t>(n));
  std::iota(img.begin(), img.end(), 0);
  return FinMap(n, n, std::move(img));
}

inline FinMap constant_map(int dom, int cod, int value) {
  return FinMap(dom, cod, std::vector<int>(static_cast<size_t>(dom), value));
}

inline FinMap empty_map(int cod) { return FinMap(0, cod, {}); }

/// compose(f, g) = "f then g"; requires f.cod == g.dom.
inline FinMap compose(const FinMap& f, const FinMap& g) {
  if (f.cod != g.dom) throw structural_error("compose: f.cod != g.dom");
  std::vector<int> img(static_cast<size_t>(f.dom));
  for (int x = 0; x < f.dom; ++x) img[static_cast<size_t>(x)] = g(f(x));
  return FinMap(f.dom, g.cod, std::move(img));
}

inline bool is_injective(const FinMap& f) {
  std::vector<char> seen(static_cast<size_t>(f.cod), 0);
  for (int v : f.img) {
    if (seen[static_cast<size_t>(v)]) return false;
    seen[static_cast<size_t>(v)] = 1;
  }
  return true;
}

inline bool is_surjective(const FinMap& f) {
  std::vector<char> seen(static_cast<size_t>(f.cod), 0);
  for (int v : f.img) seen[static_cast<size_t>(v)] = 1;
  return std::all_of(seen.begin(), seen.end(), [](char c) { return c != 0; });
}

inline bool is_bijective(const FinMap& f) { return f.dom == f.cod && is_injective(f); }

inline FinMap inverse(const FinMap& f) {
  if (!is_bijective(f)) throw structural_error("inverse: map not bijective");
  std::vector<int> img(static_cast<size_t>(f.dom));
  for (int x = 0; x < f.dom; ++x) img[static_cast<size_t>(f(x))] = x;
  return FinMap(f.cod, f.dom, std::move(img));
}

inline std::vector<std::vector<int>> fibres(const FinMap& f) {
  std::vector<std::vector<int>> out(static_cast<size_t>(f.cod));
  for (int x = 0; x < f.dom; ++x) out[static_cast<size_t>(f(x))].push_back(x);
  return out;
}

/// Advances img through all dom->cod maps in lexicographic order. Returns
/// false after the last one.
inline bool next_map(std::vector<int>& img, int cod) {
  for (size_t i = img.size(); i-- > 0;) {
    if (img[i] + 1 < cod) {
      ++img[i];
      std::fill(img.begin() + static_cast<long>(i) + 1, img.end(), 0);
      return true;
    }
  }
  return false;
}

/// Calls fn on every map dom -> cod.
template <typename Fn>
void for_each_map(int dom, int cod, Fn&& fn) {
  if (dom == 0) {
    fn(FinMap(0, cod, {}));
    return;
  }
  if (cod == 0) return;  // no maps from a nonempty set into the empty set
  std::vector<int> img(static_cast<size_t>(dom), 0);
  do {
    fn(FinMap(dom, cod, img));
  } while (next_map(img, cod));
}

/// Calls fn on every weakly increasing image vector dom -> cod. These are
/// exactly the orbit representatives of maps under relabelling of dom.
template <typename Fn>
void for_each_sorted_map(int dom, int cod, Fn&& fn) {
  if (dom == 0) {
    fn(FinMap(0, cod, {}));
    return;
  }
  if (cod == 0) return;
  std::vector<int> img(static_cast<size_t>(dom), 0);
  while (true) {
    fn(FinMap(dom, cod, img));
    size_t i = img.size();
    while (i-- > 0) {
      if (img[i] + 1 < cod) {
        int v = img[i] + 1;
        for (size_t j = i; j < img.size(); ++j) img[j] = v;
        break;
      }
      if (i == 0) return;
    }
  }
}

/// Calls fn on every permutation of 0..n-1 (as a FinMap n -> n).
template <typename Fn>
void for_each_permutation(int n, Fn&& fn) {
  std::vector<int> img(static_cast<size_t>(n));
  std::iota(img.begin(), img.end(), 0);
  do {
    fn(FinMap(n, n, img));
  } while (std::next_permutation(img.begin(), img.end()));
}

/// Mixed-radix index of a tuple in the product 0..base-1 ^ len, used for
/// tabulating functions M^X -> M^Y.
inline long tuple_index(const std::vector<int>& tuple, int base) {
  long idx = 0;
  for (int v : tuple) idx = idx * base + v;
  return idx;
}

inline std::vector<int> tuple_from_index(long idx, int base, int len) {
  std::vector<int> t(static_cast<size_t>(len));
  for (int i = len; i-- > 0;) {
    t[static_cast<size_t>(i)] = static_cast<int>(idx % base);
    idx /= base;
  }
  return t;
}

inline long int_pow(long b, int e) {
  long r = 1;
  while (e-- > 0) r *= b;
  return r;
}

/// Small deterministic PRNG for the randomized batteries; seeded from
/// SPANFORGE_SEED when set.
struct Rng {
  uint64_t state;
  explicit Rng(uint64_t seed = 0x9e3779b97f4a7c15ull) : state(seed ? seed : 1) {}
  uint64_t next() {
    state ^= state << 13;
    state ^= state >> 7;
    state ^= state << 17;
    return state;
  }
  int below(int n) { return static_cast<int>(next() % static_cast<uint64_t>(n)); }
};

}  // namespace spanforge
