#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <numeric>
#include <string>
#include <vector>

#include "unimm/complex.hpp"

namespace unimm {

/// Finite set of elements with an initial colouring and a fixed list of partial unary functions.
/// Pre-complexes and face-immersion triples are encoded this way for canonical labelling.
struct Structure {
  std::vector<std::int64_t> color;
  std::vector<std::vector<Id>> functions;  // functions[k][x] is the image of x or kNone

  Id size() const { return static_cast<Id>(color.size()); }
};

namespace detail {

using Encoding = std::vector<std::int64_t>;

/// Refines `cell` (canonical colour indices) to the coarsest equitable partition compatible with
/// the functions and their inverses. Colour indices stay canonical: they depend only on the
/// isomorphism type of (structure, initial cell assignment).
inline void refine(const Structure& st, const std::vector<Id>& members, std::vector<std::int64_t>& cell) {
  const std::size_t nf = st.functions.size();
  std::vector<std::vector<std::int64_t>> sig(st.size());
  std::size_t classes = 0;
  {
    std::vector<std::int64_t> seen;
    for (Id x : members) seen.push_back(cell[x]);
    std::sort(seen.begin(), seen.end());
    classes = std::unique(seen.begin(), seen.end()) - seen.begin();
  }
  for (;;) {
    for (Id x : members) {
      auto& s = sig[x];
      s.clear();
      s.push_back(cell[x]);
      for (std::size_t k = 0; k < nf; ++k) {
        const Id y = st.functions[k][x];
        s.push_back(y == kNone ? -1 : cell[y]);
      }
      s.push_back(-2);
    }
    // Preimage multisets.
    for (std::size_t k = 0; k < nf; ++k) {
      for (Id x : members) {
        const Id y = st.functions[k][x];
        if (y != kNone) sig[y].push_back(static_cast<std::int64_t>(k) * (1LL << 32) + cell[x]);
      }
    }
    for (Id x : members) std::sort(sig[x].begin() + static_cast<long>(nf) + 2, sig[x].end());
    std::vector<Id> order = members;
    std::sort(order.begin(), order.end(), [&](Id a, Id b) { return sig[a] < sig[b]; });
    std::int64_t next = -1;
    std::size_t count = 0;
    for (std::size_t i = 0; i < order.size(); ++i) {
      if (i == 0 || sig[order[i]] != sig[order[i - 1]]) {
        ++next;
        ++count;
      }
      cell[order[i]] = next;
    }
    if (count == classes) return;
    classes = count;
  }
}

inline Encoding encode(const Structure& st, const std::vector<Id>& members, const std::vector<std::int64_t>& cell) {
  std::vector<Id> label_of(st.size(), kNone);
  for (Id x : members) label_of[x] = static_cast<Id>(cell[x]);
  std::vector<Id> by_label(members.size());
  for (Id x : members) by_label[cell[x]] = x;
  Encoding out;
  out.reserve(members.size() * (1 + st.functions.size()));
  for (Id x : by_label) {
    out.push_back(st.color[x]);
    for (const auto& f : st.functions) out.push_back(f[x] == kNone ? -1 : label_of[f[x]]);
  }
  return out;
}

inline void search(const Structure& st, const std::vector<Id>& members, std::vector<std::int64_t> cell,
                   Encoding& best, bool& have) {
  refine(st, members, cell);
  // First non-singleton cell (smallest colour index).
  std::map<std::int64_t, std::vector<Id>> cells;
  for (Id x : members) cells[cell[x]].push_back(x);
  const std::vector<Id>* target = nullptr;
  for (const auto& [c, xs] : cells) {
    if (xs.size() > 1) {
      target = &xs;
      break;
    }
  }
  if (target == nullptr) {
    Encoding e = encode(st, members, cell);
    if (!have || e < best) {
      best = std::move(e);
      have = true;
    }
    return;
  }
  const std::vector<Id> choices = *target;
  for (Id pick : choices) {
    // Individualise: `pick` precedes the rest of its cell.
    std::vector<std::int64_t> next = cell;
    for (Id x : members) next[x] = 2 * next[x] + (x == pick || next[x] != cell[pick] ? 0 : 1);
    search(st, members, std::move(next), best, have);
  }
}

}  // namespace detail

/// Canonical encoding: equal for two structures iff they are isomorphic (colour- and
/// function-preserving bijection). Disjoint unions are encoded as the sorted list of their
/// components' encodings.
inline std::vector<std::int64_t> canonical_encoding(const Structure& st) {
  const Id n = st.size();
  DisjointSets sets(n);
  for (const auto& f : st.functions) {
    for (Id x = 0; x < n; ++x) {
      if (f[x] != kNone) sets.unite(x, f[x]);
    }
  }
  std::map<Id, std::vector<Id>> comps;
  for (Id x = 0; x < n; ++x) comps[sets.find(x)].push_back(x);
  std::vector<detail::Encoding> parts;
  for (auto& [root, members] : comps) {
    // Initial cells: rank of the colour within the component.
    std::vector<std::int64_t> colors;
    for (Id x : members) colors.push_back(st.color[x]);
    std::sort(colors.begin(), colors.end());
    colors.erase(std::unique(colors.begin(), colors.end()), colors.end());
    std::vector<std::int64_t> cell(n, 0);
    for (Id x : members) cell[x] = std::lower_bound(colors.begin(), colors.end(), st.color[x]) - colors.begin();
    detail::Encoding best;
    bool have = false;
    detail::search(st, members, cell, best, have);
    parts.push_back(std::move(best));
  }
  std::sort(parts.begin(), parts.end());
  std::vector<std::int64_t> out{static_cast<std::int64_t>(parts.size())};
  for (const auto& p : parts) {
    out.push_back(static_cast<std::int64_t>(p.size()));
    out.insert(out.end(), p.begin(), p.end());
  }
  return out;
}

/// Element sorts used when encoding pre-complexes.
enum ElementSort : std::int64_t { kSkelVertex = 0, kSkelEdge = 1, kFaceVertex = 2, kFaceEdge = 3 };

/// Appends the pre-complex to `st` (functions: iota, tau, attach, plus `extra` slots left empty).
/// Returns the offsets of the four element sorts. `tint(sort, index)` adds extra colour data.
template <class Tint>
inline std::array<Id, 4> append_precomplex(Structure& st, const PreComplex& x, std::size_t extra_functions,
                                           std::int64_t color_base, Tint tint) {
  if (st.functions.empty()) st.functions.resize(3 + extra_functions);
  const Id base = st.size();
  const std::array<Id, 4> off{base, base + x.vertex_count(), base + x.vertex_count() + x.edge_count(),
                              base + x.vertex_count() + x.edge_count() + x.faces.vertex_count};
  const Id total = off[3] + x.faces.edge_count();
  st.color.resize(total);
  for (auto& f : st.functions) f.resize(total, kNone);
  auto put = [&](Id at, std::int64_t sort, Id idx) { st.color[at] = (color_base + sort) * 1000003 + tint(sort, idx); };
  for (Id v = 0; v < x.vertex_count(); ++v) put(off[0] + v, kSkelVertex, v);
  for (Id e = 0; e < x.edge_count(); ++e) {
    put(off[1] + e, kSkelEdge, e);
    if (x.skeleton.has_iota(e)) st.functions[0][off[1] + e] = off[0] + x.skeleton.iota[e];
    if (x.skeleton.has_tau(e)) st.functions[1][off[1] + e] = off[0] + x.skeleton.tau[e];
  }
  for (Id u = 0; u < x.faces.vertex_count; ++u) {
    put(off[2] + u, kFaceVertex, u);
    st.functions[2][off[2] + u] = off[0] + x.attach.vertices[u];
  }
  for (Id s = 0; s < x.faces.edge_count(); ++s) {
    put(off[3] + s, kFaceEdge, s);
    if (x.faces.has_iota(s)) st.functions[0][off[3] + s] = off[2] + x.faces.iota[s];
    if (x.faces.has_tau(s)) st.functions[1][off[3] + s] = off[2] + x.faces.tau[s];
    st.functions[2][off[3] + s] = off[1] + x.attach.edges[s];
  }
  return off;
}

inline std::vector<std::int64_t> canonical_form(const PreComplex& x) {
  Structure st;
  append_precomplex(st, x, 0, 0, [](std::int64_t, Id) { return 0; });
  return canonical_encoding(st);
}

inline bool iso_test(const PreComplex& a, const PreComplex& b) { return canonical_form(a) == canonical_form(b); }

/// Canonical form of a morphism's source coloured by its images in the (fixed) target.
/// Two morphisms into the same target get equal forms iff their sources are isomorphic over it.
inline std::vector<std::int64_t> canonical_form_over(const ComplexMorphism& f) {
  Structure st;
  append_precomplex(st, f.source, 0, 0, [&](std::int64_t sort, Id i) -> std::int64_t {
    switch (sort) {
      case kSkelVertex: return f.skeleton.vertices[i];
      case kSkelEdge: return f.skeleton.edges[i];
      case kFaceVertex: return f.faces.vertices[i];
      default: return f.faces.edges[i];
    }
  });
  return canonical_encoding(st);
}

inline std::string encoding_to_string(const std::vector<std::int64_t>& enc) {
  std::string out;
  for (std::size_t i = 0; i < enc.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(enc[i]);
  }
  return out;
}

}  // namespace unimm
