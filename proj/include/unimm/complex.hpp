#pragma once

#include <array>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "unimm/pregraph.hpp"

namespace unimm {

/// A component of a linear pre-graph.
struct LinearComponent {
  bool cycle = false;
  std::vector<Id> vertices;  // in traversal order for cycles
  std::vector<Id> edges;
};

/// Components of a linear pre-graph, or nullopt when some vertex has more than two incident
/// edge-ends. Cycles are traversed starting from their least vertex.
inline std::optional<std::vector<LinearComponent>> linear_components(const PreGraph& s) {
  const auto inc = incidence(s);
  for (const auto& ends : inc) {
    if (ends.size() > 2) return std::nullopt;
  }
  const Components comp = components(s);
  std::vector<LinearComponent> out(comp.count);
  for (Id v = 0; v < s.vertex_count; ++v) out[comp.of_vertex[v]].vertices.push_back(v);
  for (Id e = 0; e < s.edge_count(); ++e) out[comp.of_edge[e]].edges.push_back(e);
  for (auto& c : out) {
    bool closed = !c.vertices.empty() && c.vertices.size() == c.edges.size();
    for (Id v : c.vertices) closed = closed && inc[v].size() == 2;
    for (Id e : c.edges) closed = closed && s.has_iota(e) && s.has_tau(e);
    c.cycle = closed;
    if (!closed) continue;
    // Walk the cycle so consecutive vertices are joined by consecutive edges.
    std::vector<Id> order{c.vertices.front()};
    std::vector<Id> edge_order;
    Id prev_edge = kNone;
    Id at = c.vertices.front();
    for (std::size_t step = 0; step < c.vertices.size(); ++step) {
      const auto& ends = inc[at];
      const EdgeEnd next = ends[0].edge != prev_edge ? ends[0] : ends[1];
      edge_order.push_back(next.edge);
      at = s.endpoint(next.edge, opposite(next.end));
      prev_edge = next.edge;
      if (step + 1 < c.vertices.size()) order.push_back(at);
    }
    c.vertices = std::move(order);
    c.edges = std::move(edge_order);
  }
  return out;
}

inline bool is_linear(const PreGraph& s) { return linear_components(s).has_value(); }

/// Linear and every vertex has exactly two incident edge-ends.
inline bool is_open_linear(const PreGraph& s) {
  for (const auto& ends : incidence(s)) {
    if (ends.size() != 2) return false;
  }
  return true;
}

/// A 2-dimensional pre-complex: 1-skeleton, faces, and a closed immersion attaching faces.
struct PreComplex {
  PreGraph skeleton;
  PreGraph faces;
  GraphMap attach;

  Id vertex_count() const { return skeleton.vertex_count; }
  Id edge_count() const { return skeleton.edge_count(); }

  /// Throws Error if any pre-complex invariant fails.
  void validate() const {
    skeleton.validate();
    faces.validate();
    if (!is_morphism(faces, skeleton, attach)) throw Error("pre-complex: attaching map is not a morphism");
    if (!is_open_linear(faces)) throw Error("pre-complex: faces are not an open linear pre-graph");
    if (!unimm::is_immersion(faces, attach)) throw Error("pre-complex: attaching map is not an immersion");
    for (Id s : boundary(faces)) {
      const Id e = attach.edges[s];
      if (skeleton.has_iota(e) && skeleton.has_tau(e)) {
        throw Error("pre-complex: attaching map is not closed (face boundary lands on a closed edge)");
      }
    }
  }

  bool is_complex() const {
    if (!is_graph(skeleton)) return false;
    auto comps = linear_components(faces);
    if (!comps) return false;
    for (const auto& c : *comps) {
      if (!c.cycle) return false;
    }
    return true;
  }

  friend bool operator==(const PreComplex&, const PreComplex&) = default;
};

inline long euler_characteristic(const PreComplex& x) {
  const auto comps = linear_components(x.faces);
  return euler_characteristic(x.skeleton) + static_cast<long>(comps ? comps->size() : 0);
}

inline Id face_count(const PreComplex& x) {
  const auto comps = linear_components(x.faces);
  return comps ? static_cast<Id>(comps->size()) : 0;
}

/// Face edges over each skeleton edge.
inline std::vector<std::vector<Id>> face_fibers(const PreComplex& x) {
  std::vector<std::vector<Id>> out(x.edge_count());
  for (Id s = 0; s < x.faces.edge_count(); ++s) out[x.attach.edges[s]].push_back(s);
  return out;
}

inline PreComplex disjoint_union(const PreComplex& a, const PreComplex& b) {
  PreComplex u;
  u.skeleton = disjoint_union(a.skeleton, b.skeleton);
  u.faces = disjoint_union(a.faces, b.faces);
  u.attach = a.attach;
  for (Id v : b.attach.vertices) u.attach.vertices.push_back(v + a.vertex_count());
  for (Id e : b.attach.edges) u.attach.edges.push_back(e + a.edge_count());
  return u;
}

/// A commuting pair of pre-graph morphisms on 1-skeleta and faces.
struct ComplexMorphism {
  PreComplex source;
  PreComplex target;
  GraphMap skeleton;
  GraphMap faces;

  bool valid() const {
    if (!is_morphism(source.skeleton, target.skeleton, skeleton)) return false;
    if (!is_morphism(source.faces, target.faces, faces)) return false;
    return compose(target.attach, faces) == compose(skeleton, source.attach);
  }

  static ComplexMorphism identity(const PreComplex& x) {
    return {x, x, GraphMap::identity(x.skeleton), GraphMap::identity(x.faces)};
  }
};

/// `second` after `first`.
inline ComplexMorphism compose(const ComplexMorphism& second, const ComplexMorphism& first) {
  if (!(first.target == second.source)) throw Error("compose: target/source mismatch");
  return {first.source, second.target, compose(second.skeleton, first.skeleton),
          compose(second.faces, first.faces)};
}

/// Asterisk: one vertex, and every edge has exactly one endpoint.
inline bool is_asterisk(const PreGraph& g) {
  if (g.vertex_count != 1) return false;
  for (Id e = 0; e < g.edge_count(); ++e) {
    if (g.has_iota(e) == g.has_tau(e)) return false;
  }
  return true;
}

/// Regular neighbourhood of a vertex: the asterisk pre-complex together with its
/// branched immersion into the ambient pre-complex. Asterisk edge i corresponds to `ends[i]`.
struct VertexNeighborhood {
  PreComplex complex;
  std::vector<EdgeEnd> ends;
  ComplexMorphism inclusion;
};

inline VertexNeighborhood regular_neighborhood_vertex(const PreComplex& x, Id v) {
  if (v < 0 || v >= x.vertex_count()) throw Error("regular_neighborhood_vertex: no such vertex");
  VertexNeighborhood n;
  PreGraph star;
  star.vertex_count = 1;
  GraphMap to_x;
  to_x.vertices = {v};
  for (Id e = 0; e < x.edge_count(); ++e) {
    for (End end : {End::Iota, End::Tau}) {
      if (x.skeleton.endpoint(e, end) != v) continue;
      n.ends.push_back({e, end});
      star.iota.push_back(end == End::Iota ? 0 : kNone);
      star.tau.push_back(end == End::Tau ? 0 : kNone);
      to_x.edges.push_back(e);
    }
  }
  // Faces are pulled back: S_N = S x_G N_G(v).
  const FiberProduct fp =
      fiber_product(PreGraphMorphism{x.faces, x.skeleton, x.attach}, PreGraphMorphism{star, x.skeleton, to_x});
  n.complex.skeleton = star;
  n.complex.faces = fp.graph;
  n.complex.attach = fp.second.map;
  n.inclusion = {n.complex, x, to_x, fp.first.map};
  return n;
}

/// Regular neighbourhood of an edge: one edge, no vertices, faces = w^{-1}(e).
struct EdgeNeighborhood {
  PreComplex complex;
  ComplexMorphism inclusion;
};

inline EdgeNeighborhood regular_neighborhood_edge(const PreComplex& x, Id e) {
  if (e < 0 || e >= x.edge_count()) throw Error("regular_neighborhood_edge: no such edge");
  EdgeNeighborhood n;
  n.complex.skeleton.vertex_count = 0;
  n.complex.skeleton.iota = {kNone};
  n.complex.skeleton.tau = {kNone};
  GraphMap to_x{{}, {e}};
  GraphMap face_inc;
  for (Id s = 0; s < x.faces.edge_count(); ++s) {
    if (x.attach.edges[s] != e) continue;
    n.complex.faces.iota.push_back(kNone);
    n.complex.faces.tau.push_back(kNone);
    n.complex.attach.edges.push_back(0);
    face_inc.edges.push_back(s);
  }
  n.inclusion = {n.complex, x, to_x, face_inc};
  return n;
}

/// Link graph of an asterisk pre-complex: nodes are asterisk edges, links are face vertices.
struct WhiteheadGraph {
  Id node_count = 0;
  std::vector<std::pair<Id, Id>> links;

  std::vector<Id> degrees() const {
    std::vector<Id> d(node_count, 0);
    for (auto [a, b] : links) {
      ++d[a];
      ++d[b];
    }
    return d;
  }

  /// Number of connected components after deleting `removed` (kNone: delete nothing).
  Id component_count(Id removed = kNone) const {
    DisjointSets sets(node_count);
    Id count = node_count - (removed == kNone ? 0 : 1);
    for (auto [a, b] : links) {
      if (a == removed || b == removed) continue;
      if (sets.unite(a, b)) --count;
    }
    return count;
  }

  bool connected() const { return component_count() <= 1; }

  /// Nodes whose deletion disconnects the remaining graph.
  std::vector<Id> cut_nodes() const {
    std::vector<Id> out;
    if (node_count < 3 || !connected()) return out;
    for (Id n = 0; n < node_count; ++n) {
      if (component_count(n) > 1) out.push_back(n);
    }
    return out;
  }
};

inline WhiteheadGraph whitehead_graph(const PreComplex& asterisk) {
  if (!is_asterisk(asterisk.skeleton)) throw Error("whitehead_graph: input is not an asterisk pre-complex");
  WhiteheadGraph wh;
  wh.node_count = asterisk.edge_count();
  const auto inc = incidence(asterisk.faces);
  for (Id u = 0; u < asterisk.faces.vertex_count; ++u) {
    if (inc[u].size() != 2) throw Error("whitehead_graph: face vertex without two incident edges");
    wh.links.emplace_back(asterisk.attach.edges[inc[u][0].edge], asterisk.attach.edges[inc[u][1].edge]);
  }
  return wh;
}

/// A face edge-end at a corner: face edge `face_edge` has its `end` at the corner.
struct HalfEdge {
  Id face_edge;
  End end;
  Id node;  // index into LocalStructure::ends of (w(face_edge), end)
};

/// The regular neighbourhood of a vertex read directly off X: asterisk ends (Whitehead nodes),
/// corners (face vertices over v, Whitehead links) and the two half-edges of every corner.
/// Node and corner order agree with regular_neighborhood_vertex.
struct LocalStructure {
  Id vertex = kNone;
  std::vector<EdgeEnd> ends;
  std::vector<Id> corners;
  std::vector<std::array<HalfEdge, 2>> half_edges;
  WhiteheadGraph whitehead;
};

inline LocalStructure local_structure(const PreComplex& x, Id v, const std::vector<std::vector<EdgeEnd>>& face_incidence) {
  LocalStructure ls;
  ls.vertex = v;
  std::map<EdgeEnd, Id> node_of;
  for (Id e = 0; e < x.edge_count(); ++e) {
    for (End end : {End::Iota, End::Tau}) {
      if (x.skeleton.endpoint(e, end) != v) continue;
      node_of[{e, end}] = static_cast<Id>(ls.ends.size());
      ls.ends.push_back({e, end});
    }
  }
  ls.whitehead.node_count = static_cast<Id>(ls.ends.size());
  for (Id u = 0; u < x.faces.vertex_count; ++u) {
    if (x.attach.vertices[u] != v) continue;
    const auto& inc = face_incidence[u];
    if (inc.size() != 2) throw Error("local_structure: face vertex without two incident edges");
    std::array<HalfEdge, 2> h;
    for (int i = 0; i < 2; ++i) {
      h[i] = {inc[i].edge, inc[i].end, node_of.at({x.attach.edges[inc[i].edge], inc[i].end})};
    }
    ls.corners.push_back(u);
    ls.half_edges.push_back(h);
    ls.whitehead.links.emplace_back(h[0].node, h[1].node);
  }
  return ls;
}

inline LocalStructure local_structure(const PreComplex& x, Id v) { return local_structure(x, v, incidence(x.faces)); }

/// Why two edges are not gluable.
enum class GlueFailure { DifferentImages, HasIota, HasTau, FiberMismatch, NotBranched };

inline const char* to_string(GlueFailure f) {
  switch (f) {
    case GlueFailure::DifferentImages: return "edges have different images";
    case GlueFailure::HasIota: return "first edge has an iota-endpoint";
    case GlueFailure::HasTau: return "second edge has a tau-endpoint";
    case GlueFailure::FiberMismatch: return "face fibers have different images";
    case GlueFailure::NotBranched: return "map is not injective on the face fibers";
  }
  return "unknown";
}

class GlueError : public Error {
 public:
  explicit GlueError(GlueFailure why) : Error(std::string("glue_edges: ") + to_string(why)), reason(why) {}
  GlueFailure reason;
};

/// Result of gluing two edges: the glued pre-complex, the quotient from the original, and the
/// descended map to the common target.
struct GlueResult {
  PreComplex glued;
  ComplexMorphism quotient;
  ComplexMorphism induced;
};

/// Identifies e1 (no iota-end) with e2 (no tau-end) along f, merging face fibers through f.
inline GlueResult glue_edges(const ComplexMorphism& f, Id e1, Id e2) {
  const PreComplex& x = f.source;
  if (e1 == e2 || f.skeleton.edges.at(e1) != f.skeleton.edges.at(e2)) {
    throw GlueError(GlueFailure::DifferentImages);
  }
  if (x.skeleton.has_iota(e1)) throw GlueError(GlueFailure::HasIota);
  if (x.skeleton.has_tau(e2)) throw GlueError(GlueFailure::HasTau);
  std::map<Id, Id> over1, over2;  // image face edge -> face edge
  for (Id s = 0; s < x.faces.edge_count(); ++s) {
    const Id e = x.attach.edges[s];
    if (e != e1 && e != e2) continue;
    auto& bucket = e == e1 ? over1 : over2;
    if (!bucket.emplace(f.faces.edges[s], s).second) throw GlueError(GlueFailure::NotBranched);
  }
  if (over1.size() != over2.size()) throw GlueError(GlueFailure::FiberMismatch);
  for (auto it1 = over1.begin(), it2 = over2.begin(); it1 != over1.end(); ++it1, ++it2) {
    if (it1->first != it2->first) throw GlueError(GlueFailure::FiberMismatch);
  }
  std::map<Id, Id> partner;   // face edge over e2 -> matching face edge over e1
  std::map<Id, Id> iota_from;  // face edge over e1 -> its partner over e2
  for (auto& [img, s1] : over1) {
    partner[over2.at(img)] = s1;
    iota_from[s1] = over2.at(img);
  }

  GlueResult r;
  PreComplex& g = r.glued;
  // Skeleton: drop e2, redirect it to e1, which takes iota from e2.
  std::vector<Id> enew(x.edge_count());
  g.skeleton.vertex_count = x.vertex_count();
  for (Id e = 0; e < x.edge_count(); ++e) {
    if (e == e2) continue;
    enew[e] = g.skeleton.edge_count();
    g.skeleton.iota.push_back(e == e1 ? x.skeleton.iota[e2] : x.skeleton.iota[e]);
    g.skeleton.tau.push_back(x.skeleton.tau[e]);
  }
  enew[e2] = enew[e1];
  // Faces: each face edge over e2 merges into its partner over e1.
  std::vector<Id> snew(x.faces.edge_count());
  g.faces.vertex_count = x.faces.vertex_count;
  for (Id s = 0; s < x.faces.edge_count(); ++s) {
    if (partner.count(s)) continue;
    snew[s] = g.faces.edge_count();
    const auto from = iota_from.find(s);
    g.faces.iota.push_back(from == iota_from.end() ? x.faces.iota[s] : x.faces.iota[from->second]);
    g.faces.tau.push_back(x.faces.tau[s]);
    g.attach.edges.push_back(enew[x.attach.edges[s]]);
  }
  for (auto& [s2, s1] : partner) snew[s2] = snew[s1];
  g.attach.vertices = x.attach.vertices;

  r.quotient = {x, g, {GraphMap::identity(x.skeleton).vertices, enew},
                {GraphMap::identity(x.faces).vertices, snew}};
  GraphMap sk_down, face_down;
  sk_down.vertices = f.skeleton.vertices;
  face_down.vertices = f.faces.vertices;
  sk_down.edges.assign(g.edge_count(), kNone);
  face_down.edges.assign(g.faces.edge_count(), kNone);
  for (Id e = 0; e < x.edge_count(); ++e) sk_down.edges[enew[e]] = f.skeleton.edges[e];
  for (Id s = 0; s < x.faces.edge_count(); ++s) face_down.edges[snew[s]] = f.faces.edges[s];
  r.induced = {g, f.target, sk_down, face_down};
  return r;
}

/// Removes the listed vertices, edges, face vertices and face edges. Kept elements are renumbered
/// in order; returns the sub-pre-complex and its inclusion.
inline std::pair<PreComplex, ComplexMorphism> subcomplex(const PreComplex& x, const std::vector<char>& keep_vertex,
                                                         const std::vector<char>& keep_edge,
                                                         const std::vector<char>& keep_face_vertex,
                                                         const std::vector<char>& keep_face_edge) {
  auto [sk, sk_inc] = restrict_to(x.skeleton, keep_vertex, keep_edge);
  auto [fc, fc_inc] = restrict_to(x.faces, keep_face_vertex, keep_face_edge);
  std::vector<Id> vnew(x.vertex_count(), kNone), enew(x.edge_count(), kNone);
  for (Id i = 0; i < static_cast<Id>(sk_inc.vertices.size()); ++i) vnew[sk_inc.vertices[i]] = i;
  for (Id i = 0; i < static_cast<Id>(sk_inc.edges.size()); ++i) enew[sk_inc.edges[i]] = i;
  PreComplex sub;
  sub.skeleton = sk;
  sub.faces = fc;
  for (Id u : fc_inc.vertices) sub.attach.vertices.push_back(vnew[x.attach.vertices[u]]);
  for (Id s : fc_inc.edges) sub.attach.edges.push_back(enew[x.attach.edges[s]]);
  ComplexMorphism inc{sub, x, sk_inc, fc_inc};
  return {sub, inc};
}

/// Face-vertices of each face component.
inline std::vector<Id> face_component_lengths(const PreComplex& x) {
  std::vector<Id> out;
  if (auto comps = linear_components(x.faces)) {
    for (const auto& c : *comps) out.push_back(static_cast<Id>(c.vertices.size()));
  }
  return out;
}

}  // namespace unimm
