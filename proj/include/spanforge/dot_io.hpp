#pragma once

#include <sstream>

#include "spanforge/dinat.hpp"
#include "spanforge/distlaw.hpp"
#include "spanforge/rspan.hpp"
#include "spanforge/spanqcat.hpp"

namespace spanforge {

/// A span diagram drawn with the apex above its feet.
inline std::string to_dot(const Span& s) {
  std::ostringstream out;
  out << "digraph span {\n  rankdir=TB;\n  node [shape=plaintext];\n";
  out << "  X0 [label=\"X0 (" << s.x0() << ")\"];\n";
  out << "  U [label=\"U (" << s.apex() << ")\"];\n";
  out << "  X1 [label=\"X1 (" << s.x1() << ")\"];\n";
  auto edge = [&](const char* a, const char* b, const FinMap& m) {
    out << "  " << a << " -> " << b << " [label=\"";
    for (size_t i = 0; i < m.img.size(); ++i) out << (i ? "," : "") << m.img[i];
    out << "\"];\n";
  };
  edge("U", "X0", s.l);
  edge("U", "X1", s.r);
  out << "}\n";
  return out.str();
}

inline std::string to_dot(const RingSpan& r) {
  std::ostringstream out;
  out << "digraph ringspan {\n  rankdir=LR;\n  node [shape=plaintext];\n";
  out << "  X [label=\"X (" << r.x() << ")\"];\n  U [label=\"U (" << r.u() << ")\"];\n";
  out << "  V [label=\"V (" << r.v() << ")\"];\n  Y [label=\"Y (" << r.y() << ")\"];\n";
  auto edge = [&](const char* a, const char* b, const FinMap& m, const char* tag) {
    out << "  " << a << " -> " << b << " [label=\"" << tag << ": ";
    for (size_t i = 0; i < m.img.size(); ++i) out << (i ? "," : "") << m.img[i];
    out << "\"];\n";
  };
  edge("U", "X", r.delta, "copy");
  edge("U", "V", r.pi, "multiply");
  edge("V", "Y", r.sigma, "add");
  out << "}\n";
  return out.str();
}

inline std::string elt_name(const DinElt& e) {
  std::string s;
  for (int v = e.lo; v <= e.hi; ++v) s += std::to_string(v);
  s += e.upper ? "^" : "_";
  return s;
}

/// Hasse diagram of the dinaturality poset.
inline std::string to_dot(const DinPoset& p) {
  std::ostringstream out;
  out << "digraph din {\n  rankdir=LR;\n";
  for (const DinElt& e : p.elems)
    out << "  \"" << elt_name(e) << "\";\n";
  for (auto [a, b] : p.hasse())
    out << "  \"" << elt_name(p.elems[static_cast<size_t>(a)]) << "\" -> \""
        << elt_name(p.elems[static_cast<size_t>(b)]) << "\";\n";
  out << "}\n";
  return out.str();
}

/// The 1-skeleton of a distributahedron: vertices and the two kinds of edge.
inline std::string to_dot(const Distributahedron& xi) {
  std::ostringstream out;
  out << "digraph distributahedron {\n  rankdir=LR;\n";
  auto name = [&](const std::vector<int>& cell, int m) {
    std::string s;
    for (int t = 0; t <= m; ++t) s += std::to_string(cell[static_cast<size_t>(t)]);
    s += "|";
    for (size_t t = static_cast<size_t>(m) + 1; t < cell.size(); ++t) s += std::to_string(cell[t]);
    return s;
  };
  for (const auto& v : xi.cells[0][0]) out << "  \"" << name(v, 0) << "\";\n";
  if (xi.shape.d1 >= 1)
    for (const auto& e : xi.cells[1][0]) {
      if (e[0] == e[1]) continue;  // degenerate
      std::vector<int> d0 = {e[1], e[2]}, d1 = {e[0], e[2]};
      out << "  \"" << name(d1, 0) << "\" -> \"" << name(d0, 0) << "\" [style=solid];\n";
    }
  if (xi.shape.d2 >= 1)
    for (const auto& e : xi.cells[0][1]) {
      if (e[1] == e[2]) continue;
      std::vector<int> d0 = {e[0], e[2]}, d1 = {e[0], e[1]};
      out << "  \"" << name(d1, 0) << "\" -> \"" << name(d0, 0) << "\" [style=dashed];\n";
    }
  out << "}\n";
  return out.str();
}

}  // namespace spanforge
