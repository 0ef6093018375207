#pragma once

#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "unimm/complex.hpp"
#include "unimm/rational.hpp"

namespace unimm {

/// Stallings factorisation f = immersion . quotient.
/// `folds` lists each identified edge pair by class representatives (least original edge ids).
struct GraphFolding {
  std::vector<std::pair<Id, Id>> folds;
  PreGraphMorphism quotient;
  PreGraphMorphism immersion;
};

namespace detail {

/// Quotient of `g` by vertex and edge classes; classes are numbered in order of their least member.
inline std::pair<PreGraph, GraphMap> quotient_graph(const PreGraph& g, DisjointSets& vs, DisjointSets& es) {
  GraphMap q;
  q.vertices.assign(g.vertex_count, kNone);
  q.edges.assign(g.edge_count(), kNone);
  PreGraph out;
  for (Id v = 0; v < g.vertex_count; ++v) {
    const Id r = vs.find(v);
    q.vertices[v] = r == v ? out.add_vertex() : q.vertices[r];
  }
  for (Id e = 0; e < g.edge_count(); ++e) {
    const Id r = es.find(e);
    if (r == e) {
      q.edges[e] = out.add_edge(kNone, kNone);
    } else {
      q.edges[e] = q.edges[r];
    }
    const Id qe = q.edges[e];
    if (g.has_iota(e)) out.iota[qe] = q.vertices[g.iota[e]];
    if (g.has_tau(e)) out.tau[qe] = q.vertices[g.tau[e]];
  }
  return {out, q};
}

}  // namespace detail

/// Folds `f` to an immersion, always identifying the lexicographically least violating pair.
inline GraphFolding fold_graph(const PreGraphMorphism& f) {
  const PreGraph& g = f.source;
  DisjointSets vs(g.vertex_count), es(g.edge_count());
  GraphFolding out;
  for (;;) {
    // Least violating pair: distinct edge classes with a common end at a common vertex class and equal image.
    std::map<std::tuple<Id, End, Id>, Id> seen;
    std::optional<std::pair<Id, Id>> best;
    for (Id e = 0; e < g.edge_count(); ++e) {
      const Id re = es.find(e);
      for (End end : {End::Iota, End::Tau}) {
        const Id v = g.endpoint(e, end);
        if (v == kNone) continue;
        auto [it, fresh] = seen.try_emplace({vs.find(v), end, f.map.edges[e]}, re);
        if (!fresh && it->second != re) {
          std::pair<Id, Id> cand{std::min(it->second, re), std::max(it->second, re)};
          if (!best || cand < *best) best = cand;
        }
      }
    }
    if (!best) break;
    auto [a, b] = *best;
    out.folds.push_back(*best);
    // Identify the two edges and whichever endpoints both carry.
    std::vector<Id> ia, ta, ib, tb;
    for (Id e = 0; e < g.edge_count(); ++e) {
      const Id r = es.find(e);
      if (r != a && r != b) continue;
      if (g.has_iota(e)) (r == a ? ia : ib).push_back(g.iota[e]);
      if (g.has_tau(e)) (r == a ? ta : tb).push_back(g.tau[e]);
    }
    es.unite(a, b);
    auto merge_all = [&](const std::vector<Id>& xs, const std::vector<Id>& ys) {
      std::vector<Id> all = xs;
      all.insert(all.end(), ys.begin(), ys.end());
      for (std::size_t i = 1; i < all.size(); ++i) vs.unite(all[0], all[i]);
    };
    merge_all(ia, ib);
    merge_all(ta, tb);
  }
  auto [folded, q] = detail::quotient_graph(g, vs, es);
  GraphMap imm;
  imm.vertices.assign(folded.vertex_count, kNone);
  imm.edges.assign(folded.edge_count(), kNone);
  for (Id v = 0; v < g.vertex_count; ++v) imm.vertices[q.vertices[v]] = f.map.vertices[v];
  for (Id e = 0; e < g.edge_count(); ++e) imm.edges[q.edges[e]] = f.map.edges[e];
  out.quotient = {g, folded, q};
  out.immersion = {folded, f.target, imm};
  return out;
}

/// Per-component degrees of a morphism between complexes and their sum.
struct Degree {
  std::vector<Rational> components;
  Rational total;
};

inline Degree degree(const ComplexMorphism& f) {
  const auto src = linear_components(f.source.faces);
  const auto dst = linear_components(f.target.faces);
  if (!src || !dst) throw Error("degree: face pre-graph is not linear");
  std::vector<Id> comp_of(f.target.faces.vertex_count, kNone);
  std::vector<Id> comp_of_edge(f.target.faces.edge_count(), kNone);
  for (Id c = 0; c < static_cast<Id>(dst->size()); ++c) {
    for (Id u : (*dst)[c].vertices) comp_of[u] = c;
    for (Id s : (*dst)[c].edges) comp_of_edge[s] = c;
  }
  Degree d;
  d.total = 0;
  for (const auto& c : *src) {
    if (!c.cycle) throw Error("degree: source face component is not a cycle");
    const Id img = comp_of_edge[f.faces.edges[c.edges.front()]];
    const auto& t = (*dst)[img];
    if (!t.cycle) throw Error("degree: target face component is not a cycle");
    const auto ly = static_cast<long>(c.vertices.size());
    const auto lx = static_cast<long>(t.vertices.size());
    if (ly % lx != 0) throw Error("degree: face length is not a multiple of its image length");
    d.components.emplace_back(ly / lx);
    d.total += d.components.back();
  }
  return d;
}

/// Local injectivity properties of a morphism.
struct MapClass {
  bool branched_map = false;
  bool branched_immersion = false;
  bool immersion = false;
  bool face_equivalence = false;
};

/// Faces over each edge map injectively.
inline bool is_branched_map(const ComplexMorphism& f) {
  std::set<std::pair<Id, Id>> seen;
  for (Id s = 0; s < f.source.faces.edge_count(); ++s) {
    if (!seen.emplace(f.source.attach.edges[s], f.faces.edges[s]).second) return false;
  }
  return true;
}

/// Branched map whose vertex neighbourhoods (asterisk ends and corners) map injectively.
inline bool is_branched_immersion(const ComplexMorphism& f) {
  if (!is_branched_map(f)) return false;
  if (!is_immersion(f.source.skeleton, f.skeleton)) return false;
  std::set<std::pair<Id, Id>> corners;
  for (Id u = 0; u < f.source.faces.vertex_count; ++u) {
    if (!corners.emplace(f.source.attach.vertices[u], f.faces.vertices[u]).second) return false;
  }
  return true;
}

inline bool is_face_equivalence(const ComplexMorphism& f) {
  return is_isomorphism(f.source.faces, f.target.faces, f.faces);
}

inline MapClass classify_map(const ComplexMorphism& f) {
  MapClass c;
  c.branched_map = is_branched_map(f);
  c.branched_immersion = c.branched_map && is_branched_immersion(f);
  if (c.branched_immersion && f.source.is_complex() && f.target.is_complex()) {
    const Degree d = degree(f);
    c.immersion = std::all_of(d.components.begin(), d.components.end(), [](const Rational& q) { return q == 1; });
  }
  c.face_equivalence = is_face_equivalence(f);
  return c;
}

inline bool is_immersion(const ComplexMorphism& f) { return classify_map(f).immersion; }

/// Y -> Ybar -> X with Ybar the folded representative.
struct FoldedFactorization {
  ComplexMorphism f0;
  ComplexMorphism f1;
  std::vector<std::pair<Id, Id>> folds;
  const PreComplex& folded() const { return f1.source; }
};

inline FoldedFactorization folded_representative(const ComplexMorphism& f) {
  const GraphFolding gf = fold_graph({f.source.skeleton, f.target.skeleton, f.skeleton});
  const FiberProduct fp =
      fiber_product(gf.immersion, PreGraphMorphism{f.target.faces, f.target.skeleton, f.target.attach});
  std::map<std::pair<Id, Id>, Id> vpair, epair;
  for (Id i = 0; i < static_cast<Id>(fp.vertex_pairs.size()); ++i) vpair[fp.vertex_pairs[i]] = i;
  for (Id i = 0; i < static_cast<Id>(fp.edge_pairs.size()); ++i) epair[fp.edge_pairs[i]] = i;
  const PreComplex& y = f.source;
  std::vector<char> keep_v(fp.graph.vertex_count, 0), keep_e(fp.graph.edge_count(), 0);
  std::vector<Id> to_fp_v(y.faces.vertex_count), to_fp_e(y.faces.edge_count());
  for (Id u = 0; u < y.faces.vertex_count; ++u) {
    to_fp_v[u] = vpair.at({gf.quotient.map.vertices[y.attach.vertices[u]], f.faces.vertices[u]});
    keep_v[to_fp_v[u]] = 1;
  }
  for (Id s = 0; s < y.faces.edge_count(); ++s) {
    to_fp_e[s] = epair.at({gf.quotient.map.edges[y.attach.edges[s]], f.faces.edges[s]});
    keep_e[to_fp_e[s]] = 1;
  }
  auto [faces, inc] = restrict_to(fp.graph, keep_v, keep_e);
  std::vector<Id> vnew(fp.graph.vertex_count, kNone), enew(fp.graph.edge_count(), kNone);
  for (Id i = 0; i < static_cast<Id>(inc.vertices.size()); ++i) vnew[inc.vertices[i]] = i;
  for (Id i = 0; i < static_cast<Id>(inc.edges.size()); ++i) enew[inc.edges[i]] = i;
  PreComplex ybar;
  ybar.skeleton = gf.quotient.target;
  ybar.faces = faces;
  GraphMap face0, face1;
  for (Id x : inc.vertices) {
    ybar.attach.vertices.push_back(fp.first.map.vertices[x]);
    face1.vertices.push_back(fp.second.map.vertices[x]);
  }
  for (Id x : inc.edges) {
    ybar.attach.edges.push_back(fp.first.map.edges[x]);
    face1.edges.push_back(fp.second.map.edges[x]);
  }
  for (Id u = 0; u < y.faces.vertex_count; ++u) face0.vertices.push_back(vnew[to_fp_v[u]]);
  for (Id s = 0; s < y.faces.edge_count(); ++s) face0.edges.push_back(enew[to_fp_e[s]]);
  FoldedFactorization out;
  out.f0 = {y, ybar, gf.quotient.map, face0};
  out.f1 = {ybar, f.target, gf.immersion.map, face1};
  out.folds = gf.folds;
  return out;
}

inline bool is_face_essential(const ComplexMorphism& f) { return is_face_equivalence(folded_representative(f).f0); }

/// Face-equivalence Y -> Z followed by a branched immersion Z -> X.
struct FaceImmersionTriple {
  ComplexMorphism f0;
  ComplexMorphism f1;

  const PreComplex& y() const { return f0.source; }
  const PreComplex& z() const { return f0.target; }
  const PreComplex& x() const { return f1.target; }
  ComplexMorphism composite() const { return compose(f1, f0); }

  bool valid() const {
    return f0.valid() && f1.valid() && f0.target == f1.source && is_face_equivalence(f0) &&
           is_branched_immersion(f1);
  }
};

inline std::optional<FaceImmersionTriple> face_immersion_of(const ComplexMorphism& f) {
  FoldedFactorization ff = folded_representative(f);
  if (!is_face_equivalence(ff.f0)) return std::nullopt;
  return FaceImmersionTriple{std::move(ff.f0), std::move(ff.f1)};
}

/// deg(f) + chi(G_Y).
inline Rational total_curvature(const ComplexMorphism& f) {
  return degree(f).total + Rational(euler_characteristic(f.source.skeleton));
}

}  // namespace unimm
