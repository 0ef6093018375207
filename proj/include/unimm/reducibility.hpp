#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "unimm/complex.hpp"
#include "unimm/folding.hpp"
#include "unimm/rational.hpp"

namespace unimm {

/// Outcome of checking the visible reduction conditions, in order.
enum class Visible {
  PointComponent,
  Valence1,
  FreeFace,
  SeparatingVertex,
  Unfoldable,
  Irreducible,
};

inline const char* to_string(Visible v) {
  switch (v) {
    case Visible::PointComponent: return "point-component";
    case Visible::Valence1: return "valence-one-vertex";
    case Visible::FreeFace: return "free-face";
    case Visible::SeparatingVertex: return "separating-vertex";
    case Visible::Unfoldable: return "unfoldable";
    case Visible::Irreducible: return "visibly-irreducible";
  }
  return "unknown";
}

/// Verdict with its witness: a vertex, an edge, or a vertex with an edge-end.
struct VisibleVerdict {
  Visible status = Visible::Irreducible;
  Id vertex = kNone;
  Id edge = kNone;
  End end = End::Iota;

  bool reducible() const {
    return status != Visible::Unfoldable && status != Visible::Irreducible;
  }
};

/// Every (vertex, edge-end) pair at which condition (v) holds, in (vertex, node) order.
struct UnfoldWitness {
  Id vertex;
  Id edge;
  End end;
  friend bool operator==(const UnfoldWitness&, const UnfoldWitness&) = default;
};

/// Conditions (i)-(iv), with (iv) read as a disconnected Whitehead graph.
inline std::optional<VisibleVerdict> visibly_reducible(const PreComplex& x,
                                                       const std::vector<LocalStructure>& locals) {
  const auto val = valences(x.skeleton);
  for (Id v = 0; v < x.vertex_count(); ++v) {
    if (val[v] == 0) return VisibleVerdict{Visible::PointComponent, v};
  }
  for (Id v = 0; v < x.vertex_count(); ++v) {
    if (val[v] == 1) return VisibleVerdict{Visible::Valence1, v};
  }
  const auto fibers = face_fibers(x);
  for (Id e = 0; e < x.edge_count(); ++e) {
    if (fibers[e].size() == 1) return VisibleVerdict{Visible::FreeFace, kNone, e};
  }
  for (Id v = 0; v < x.vertex_count(); ++v) {
    if (!locals[v].whitehead.connected()) return VisibleVerdict{Visible::SeparatingVertex, v};
  }
  return std::nullopt;
}

inline std::vector<LocalStructure> all_local_structures(const PreComplex& x) {
  const auto inc = incidence(x.faces);
  std::vector<LocalStructure> out;
  out.reserve(x.vertex_count());
  for (Id v = 0; v < x.vertex_count(); ++v) out.push_back(local_structure(x, v, inc));
  return out;
}

inline std::vector<UnfoldWitness> unfold_witnesses(const PreComplex& x, const std::vector<LocalStructure>& locals) {
  std::vector<UnfoldWitness> out;
  for (Id v = 0; v < x.vertex_count(); ++v) {
    for (Id n : locals[v].whitehead.cut_nodes()) {
      out.push_back({v, locals[v].ends[n].edge, locals[v].ends[n].end});
    }
  }
  return out;
}

inline std::vector<UnfoldWitness> unfold_witnesses(const PreComplex& x) {
  const auto locals = all_local_structures(x);
  if (visibly_reducible(x, locals)) return {};
  return unfold_witnesses(x, locals);
}

inline VisibleVerdict visible_status(const PreComplex& x) {
  const auto locals = all_local_structures(x);
  if (auto r = visibly_reducible(x, locals)) return *r;
  const auto w = unfold_witnesses(x, locals);
  if (!w.empty()) return {Visible::Unfoldable, w[0].vertex, w[0].edge, w[0].end};
  return {};
}

/// Unfolded complex with the essential fold back onto the input.
struct UnfoldResult {
  PreComplex unfolded;
  ComplexMorphism fold;
};

/// Splits `witness.vertex` along the cut node (edge, end) of its Whitehead graph.
/// The component holding the least remaining node stays at the old vertex; the rest move to a
/// new vertex, together with a new copy of the edge.
inline UnfoldResult unfold_step(const PreComplex& x, const UnfoldWitness& witness) {
  const Id v = witness.vertex;
  if (v < 0 || v >= x.vertex_count()) throw Error("unfold_step: no such vertex");
  const LocalStructure ls = local_structure(x, v);
  Id cut = kNone;
  for (Id n = 0; n < static_cast<Id>(ls.ends.size()); ++n) {
    if (ls.ends[n].edge == witness.edge && ls.ends[n].end == witness.end) cut = n;
  }
  if (cut == kNone) throw Error("unfold_step: edge-end is not incident to the vertex");
  const WhiteheadGraph& wh = ls.whitehead;
  if (wh.component_count(kNone) != 1 || wh.component_count(cut) < 2) {
    throw Error("unfold_step: witness does not separate the regular neighbourhood");
  }
  DisjointSets sets(wh.node_count);
  for (auto [a, b] : wh.links) {
    if (a != cut && b != cut) sets.unite(a, b);
  }
  const Id first = cut == 0 ? 1 : 0;
  const Id keep_root = sets.find(first);
  auto side = [&](Id node) { return sets.find(node) == keep_root ? 0 : 1; };

  PreComplex y = x;
  const Id v2 = y.skeleton.add_vertex();
  const Id e = witness.edge;
  const Id e2 = y.skeleton.add_edge(x.skeleton.iota[e], x.skeleton.tau[e]);
  for (Id n = 0; n < wh.node_count; ++n) {
    if (n == cut || side(n) == 0) continue;
    const EdgeEnd& ee = ls.ends[n];
    auto& ends = ee.end == End::Iota ? y.skeleton.iota : y.skeleton.tau;
    ends[ee.edge] = v2;
    if (ee.edge == e) ends[e2] = v2;
  }
  // The cut end of e stays at v; the copy's cut end goes to v2.
  (witness.end == End::Iota ? y.skeleton.iota : y.skeleton.tau)[e2] = v2;
  for (std::size_t c = 0; c < ls.corners.size(); ++c) {
    const auto& h = ls.half_edges[c];
    const Id other = h[0].node == cut ? h[1].node : h[0].node;
    if (side(other) == 0) continue;
    y.attach.vertices[ls.corners[c]] = v2;
    for (const HalfEdge& he : h) {
      if (he.node == cut) y.attach.edges[he.face_edge] = e2;
    }
  }
  GraphMap sk = GraphMap::identity(y.skeleton);
  sk.vertices[v2] = v;
  sk.edges[e2] = e;
  UnfoldResult r{y, {y, x, sk, GraphMap::identity(x.faces)}};
  return r;
}

/// Final answer of the unfolding procedure.
enum class Reducibility { Reducible, Irreducible };

inline const char* to_string(Reducibility r) { return r == Reducibility::Reducible ? "reducible" : "irreducible"; }

struct Classification {
  Reducibility result = Reducibility::Irreducible;
  VisibleVerdict final_verdict;
  std::vector<UnfoldWitness> trail;
  Id step_bound = 0;
  PreComplex unfolded;
  ComplexMorphism to_input;  // composite essential equivalence unfolded -> input
};

/// Unfolds until visibly reducible or visibly irreducible. With a seed, each step picks a
/// uniformly random witness; otherwise the first in (vertex, node) order.
inline Classification classify(const PreComplex& x, std::optional<std::uint64_t> seed = std::nullopt) {
  Classification c;
  c.unfolded = x;
  c.to_input = ComplexMorphism::identity(x);
  // Each unfold adds a vertex, and every vertex of an unfold-able complex carries a corner.
  c.step_bound = std::max<Id>(0, x.faces.vertex_count - x.vertex_count());
  std::mt19937_64 rng(seed.value_or(0));
  for (;;) {
    const auto locals = all_local_structures(c.unfolded);
    if (auto r = visibly_reducible(c.unfolded, locals)) {
      c.final_verdict = *r;
      c.result = Reducibility::Reducible;
      return c;
    }
    const auto ws = unfold_witnesses(c.unfolded, locals);
    if (ws.empty()) {
      c.final_verdict = {};
      c.result = Reducibility::Irreducible;
      return c;
    }
    if (static_cast<Id>(c.trail.size()) >= c.step_bound) throw Error("classify: unfolding exceeded its step bound");
    UnfoldWitness w = ws[0];
    if (seed) w = ws[std::uniform_int_distribution<std::size_t>(0, ws.size() - 1)(rng)];
    UnfoldResult step = unfold_step(c.unfolded, w);
    c.trail.push_back(w);
    c.to_input = compose(c.to_input, step.fold);
    c.unfolded = std::move(step.unfolded);
  }
}

/// Removes the face through the free edge e, and e itself.
inline std::pair<PreComplex, ComplexMorphism> collapse_free_face(const PreComplex& x, Id e) {
  const auto fibers = face_fibers(x);
  if (e < 0 || e >= x.edge_count() || fibers[e].size() != 1) throw Error("collapse_free_face: not a free face");
  const Components comp = components(x.faces);
  const Id face = comp.of_edge[fibers[e][0]];
  std::vector<char> kv(x.vertex_count(), 1), ke(x.edge_count(), 1);
  std::vector<char> kfv(x.faces.vertex_count), kfe(x.faces.edge_count());
  ke[e] = 0;
  for (Id u = 0; u < x.faces.vertex_count; ++u) kfv[u] = comp.of_vertex[u] != face;
  for (Id s = 0; s < x.faces.edge_count(); ++s) kfe[s] = comp.of_edge[s] != face;
  return subcomplex(x, kv, ke, kfv, kfe);
}

/// Repeatedly removes valence-1 vertices with their edges, and isolated vertices while others remain.
inline std::pair<PreComplex, ComplexMorphism> trim(const PreComplex& x) {
  std::vector<char> kv(x.vertex_count(), 1), ke(x.edge_count(), 1);
  auto val = valences(x.skeleton);
  Id alive = x.vertex_count();
  bool changed = true;
  while (changed) {
    changed = false;
    for (Id v = 0; v < x.vertex_count(); ++v) {
      if (!kv[v] || alive <= 1) continue;
      if (val[v] == 0) {
        kv[v] = 0;
        --alive;
        changed = true;
      } else if (val[v] == 1) {
        for (Id e = 0; e < x.edge_count(); ++e) {
          if (!ke[e] || (x.skeleton.iota[e] != v && x.skeleton.tau[e] != v)) continue;
          ke[e] = 0;
          --val[x.skeleton.iota[e]];
          --val[x.skeleton.tau[e]];
        }
        kv[v] = 0;
        --alive;
        changed = true;
      }
    }
  }
  std::vector<char> kfv(x.faces.vertex_count, 1), kfe(x.faces.edge_count(), 1);
  for (Id s = 0; s < x.faces.edge_count(); ++s) {
    if (!ke[x.attach.edges[s]]) throw Error("trim: a face passes through a valence-one vertex");
  }
  return subcomplex(x, kv, ke, kfv, kfe);
}

/// Cuts X at v: one copy of v per component of its Whitehead graph.
inline UnfoldResult cut_vertex(const PreComplex& x, Id v) {
  const LocalStructure ls = local_structure(x, v);
  const WhiteheadGraph& wh = ls.whitehead;
  DisjointSets sets(wh.node_count);
  for (auto [a, b] : wh.links) sets.unite(a, b);
  PreComplex y = x;
  std::map<Id, Id> copy_of_root;
  GraphMap sk = GraphMap::identity(x.skeleton);
  auto vertex_for = [&](Id node) {
    const Id root = sets.find(node);
    auto it = copy_of_root.find(root);
    if (it != copy_of_root.end()) return it->second;
    const Id nv = copy_of_root.empty() ? v : y.skeleton.add_vertex();
    if (nv != v) sk.vertices.push_back(v);
    copy_of_root[root] = nv;
    return nv;
  };
  for (Id n = 0; n < wh.node_count; ++n) {
    const EdgeEnd& ee = ls.ends[n];
    (ee.end == End::Iota ? y.skeleton.iota : y.skeleton.tau)[ee.edge] = vertex_for(n);
  }
  for (std::size_t c = 0; c < ls.corners.size(); ++c) y.attach.vertices[ls.corners[c]] = vertex_for(ls.half_edges[c][0].node);
  return {y, {y, x, sk, GraphMap::identity(x.faces)}};
}

/// One connected component of X with its inclusion.
inline std::vector<std::pair<PreComplex, ComplexMorphism>> connected_parts(const PreComplex& x) {
  const Components comp = components(x.skeleton);
  std::vector<std::pair<PreComplex, ComplexMorphism>> out;
  for (Id c = 0; c < comp.count; ++c) {
    std::vector<char> kv(x.vertex_count()), ke(x.edge_count()), kfv(x.faces.vertex_count), kfe(x.faces.edge_count());
    for (Id v = 0; v < x.vertex_count(); ++v) kv[v] = comp.of_vertex[v] == c;
    for (Id e = 0; e < x.edge_count(); ++e) ke[e] = comp.of_edge[e] == c;
    for (Id u = 0; u < x.faces.vertex_count; ++u) kfv[u] = comp.of_vertex[x.attach.vertices[u]] == c;
    for (Id s = 0; s < x.faces.edge_count(); ++s) kfe[s] = comp.of_edge[x.attach.edges[s]] == c;
    out.push_back(subcomplex(x, kv, ke, kfv, kfe));
  }
  return out;
}

/// Signed edge counts of each face cycle, as a row over the skeleton edges.
inline std::vector<std::vector<long>> face_boundary_rows(const PreComplex& x) {
  std::vector<std::vector<long>> rows;
  const auto comps = linear_components(x.faces);
  if (!comps) throw Error("face_boundary_rows: faces are not linear");
  for (const auto& c : *comps) {
    std::vector<long> row(x.edge_count(), 0);
    for (std::size_t i = 0; i < c.edges.size(); ++i) {
      const Id s = c.edges[i];
      const bool forward = x.faces.iota[s] == c.vertices[i];
      row[x.attach.edges[s]] += forward ? 1 : -1;
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

/// Non-tree edges of a spanning forest of the skeleton; their classes generate H_1 of the graph.
inline std::vector<Id> cotree_edges(const PreGraph& g) {
  DisjointSets sets(g.vertex_count);
  std::vector<Id> out;
  for (Id e = 0; e < g.edge_count(); ++e) {
    if (!sets.unite(g.iota[e], g.tau[e])) out.push_back(e);
  }
  return out;
}

/// Presentation matrix of H_1(X; Z): rows are faces, columns are cotree edges.
inline std::vector<std::vector<Integer>> h1_relation_matrix(const PreComplex& x) {
  const auto cot = cotree_edges(x.skeleton);
  std::vector<std::vector<Integer>> m;
  for (const auto& row : face_boundary_rows(x)) {
    std::vector<Integer> r;
    for (Id e : cot) r.emplace_back(row[e]);
    m.push_back(std::move(r));
  }
  // Faces may be absent; keep the column count visible through an empty row.
  if (m.empty()) m.emplace_back(cot.size(), Integer(0));
  return m;
}

/// Rank over Q of an integer matrix.
inline std::size_t rational_rank(std::vector<std::vector<Integer>> m) {
  std::vector<std::vector<Rational>> a;
  for (auto& r : m) {
    std::vector<Rational> q;
    for (auto& z : r) q.emplace_back(z);
    a.push_back(std::move(q));
  }
  std::size_t rank = 0;
  const std::size_t cols = a.empty() ? 0 : a[0].size();
  for (std::size_t c = 0; c < cols && rank < a.size(); ++c) {
    std::size_t p = rank;
    while (p < a.size() && a[p][c] == 0) ++p;
    if (p == a.size()) continue;
    std::swap(a[p], a[rank]);
    for (std::size_t r = rank + 1; r < a.size(); ++r) {
      if (a[r][c] == 0) continue;
      const Rational f = a[r][c] / a[rank][c];
      for (std::size_t k = c; k < cols; ++k) a[r][k] -= f * a[rank][k];
    }
    ++rank;
  }
  return rank;
}

/// True iff the rows generate Z^n (Hermite reduction by unimodular row operations).
inline bool rows_span_lattice(std::vector<std::vector<Integer>> m) {
  const std::size_t cols = m.empty() ? 0 : m[0].size();
  std::size_t top = 0;
  for (std::size_t c = 0; c < cols; ++c) {
    for (;;) {
      std::size_t best = m.size();
      for (std::size_t r = top; r < m.size(); ++r) {
        if (m[r][c] != 0 && (best == m.size() || abs(m[r][c]) < abs(m[best][c]))) best = r;
      }
      if (best == m.size()) return false;
      std::swap(m[top], m[best]);
      bool done = true;
      for (std::size_t r = top + 1; r < m.size(); ++r) {
        if (m[r][c] == 0) continue;
        const Integer q = m[r][c] / m[top][c];
        for (std::size_t k = c; k < cols; ++k) m[r][k] -= q * m[top][k];
        if (m[r][c] != 0) done = false;
      }
      if (done) break;
    }
    if (abs(m[top][c]) != 1) return false;
    ++top;
  }
  return true;
}

inline bool h1_trivial(const PreComplex& x) { return rows_span_lattice(h1_relation_matrix(x)); }

/// Rank of H_1(X; Q) for a connected complex.
inline long h1_rank(const PreComplex& x) {
  const long b1 = static_cast<long>(cotree_edges(x.skeleton).size());
  return b1 - static_cast<long>(rational_rank(h1_relation_matrix(x)));
}

/// Tries to reduce a connected complex to a point by collapses, trims, unfolds and cuts.
/// Succeeds only when every branch ends at a single vertex; `budget` bounds the total moves.
inline bool collapses_to_point(const PreComplex& x, long& budget) {
  PreComplex cur = x;
  while (budget-- > 0) {
    if (cur.vertex_count() == 1 && cur.edge_count() == 0 && cur.faces.vertex_count == 0) return true;
    const auto locals = all_local_structures(cur);
    const auto r = visibly_reducible(cur, locals);
    if (r && r->status == Visible::Valence1) {
      cur = trim(cur).first;
    } else if (r && r->status == Visible::FreeFace) {
      cur = collapse_free_face(cur, r->edge).first;
    } else if (r && r->status == Visible::PointComponent) {
      if (cur.vertex_count() == 1) continue;
      cur = trim(cur).first;
    } else if (r && r->status == Visible::SeparatingVertex) {
      const auto parts = connected_parts(cut_vertex(cur, r->vertex).unfolded);
      if (parts.size() < 2) return false;
      for (const auto& p : parts) {
        if (!collapses_to_point(p.first, budget)) return false;
      }
      return true;
    } else {
      const auto ws = unfold_witnesses(cur, locals);
      if (ws.empty()) return false;
      cur = unfold_step(cur, ws[0]).unfolded;
    }
  }
  return false;
}

/// Simple connectivity certificate: trivial H_1 and a collapse to a point.
inline bool certified_simply_connected(const PreComplex& x, long budget = 100000) {
  return h1_trivial(x) && collapses_to_point(x, budget);
}

struct CoreResult {
  bool determined = false;
  std::string reason;
  PreComplex core;
  ComplexMorphism map;  // branched immersion core -> input
  std::vector<std::string> trail;
};

/// Irreducible core, assuming pi_1 is neither free nor freely decomposable.
inline CoreResult irreducible_core(const PreComplex& x) {
  if (components(x.skeleton).count != 1) throw Error("irreducible_core: input is not connected");
  CoreResult out;
  PreComplex cur = x;
  ComplexMorphism to_x = ComplexMorphism::identity(x);
  for (;;) {
    Classification c = classify(cur);
    to_x = compose(to_x, c.to_input);
    cur = c.unfolded;
    if (!c.trail.empty()) out.trail.push_back("unfold x" + std::to_string(c.trail.size()));
    const VisibleVerdict& v = c.final_verdict;
    if (c.result == Reducibility::Irreducible) break;
    if (v.status == Visible::PointComponent) {
      if (cur.vertex_count() > 1) {
        auto [sub, inc] = trim(cur);
        to_x = compose(to_x, inc);
        cur = sub;
        out.trail.push_back("drop isolated vertices");
        continue;
      }
      out.reason = "complex reduces to a point; fundamental group is trivial";
      return out;
    }
    if (v.status == Visible::Valence1) {
      auto [sub, inc] = trim(cur);
      to_x = compose(to_x, inc);
      cur = sub;
      out.trail.push_back("trim valence-one vertices");
      continue;
    }
    if (v.status == Visible::FreeFace) {
      auto [sub, inc] = collapse_free_face(cur, v.edge);
      to_x = compose(to_x, inc);
      cur = sub;
      out.trail.push_back("collapse free face at edge " + std::to_string(v.edge));
      continue;
    }
    // Separating vertex: cut, keep the unique part not certified simply connected.
    UnfoldResult cut = cut_vertex(cur, v.vertex);
    auto parts = connected_parts(cut.unfolded);
    if (parts.size() < 2) {
      out.reason = "locally separating vertex does not disconnect; fundamental group is free or freely decomposable";
      return out;
    }
    std::vector<std::size_t> open;
    for (std::size_t i = 0; i < parts.size(); ++i) {
      if (!certified_simply_connected(parts[i].first)) open.push_back(i);
    }
    if (open.size() != 1) {
      out.reason = open.empty() ? "every wedge part is simply connected"
                                : "cannot certify which wedge part is simply connected";
      return out;
    }
    to_x = compose(to_x, compose(cut.fold, parts[open[0]].second));
    cur = parts[open[0]].first;
    out.trail.push_back("cut at vertex " + std::to_string(v.vertex) + ", keep part " + std::to_string(open[0]));
  }
  FoldedFactorization ff = folded_representative(to_x);
  out.determined = true;
  out.core = ff.f1.source;
  out.map = ff.f1;
  return out;
}

}  // namespace unimm
