#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <numeric>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace unimm {

/// Dense element index. Vertices and edges of every pre-graph are 0..n-1.
using Id = std::int32_t;
inline constexpr Id kNone = -1;

/// Which end of an edge: the iota (initial) or tau (terminal) end.
enum class End : std::uint8_t { Iota = 0, Tau = 1 };

inline End opposite(End e) { return e == End::Iota ? End::Tau : End::Iota; }
inline const char* to_string(End e) { return e == End::Iota ? "iota" : "tau"; }

/// Raised when an input violates a structural invariant or a precondition.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Union-find over a dense range; used by folding, gluing and component labelling.
class DisjointSets {
 public:
  explicit DisjointSets(std::size_t n = 0) : parent_(n) { std::iota(parent_.begin(), parent_.end(), 0); }
  Id find(Id x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }
  /// Unites the classes; the smaller root survives so representatives are class minima.
  bool unite(Id a, Id b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    if (b < a) std::swap(a, b);
    parent_[b] = a;
    return true;
  }
  std::size_t size() const { return parent_.size(); }

 private:
  std::vector<Id> parent_;
};

/// A graph whose edges may lack an iota- or tau-endpoint.
///
/// `iota[e] == kNone` means e is not in the iota-domain; likewise for tau.
struct PreGraph {
  Id vertex_count = 0;
  std::vector<Id> iota;
  std::vector<Id> tau;

  Id edge_count() const { return static_cast<Id>(iota.size()); }
  bool has_iota(Id e) const { return iota[e] != kNone; }
  bool has_tau(Id e) const { return tau[e] != kNone; }
  Id endpoint(Id e, End end) const { return end == End::Iota ? iota[e] : tau[e]; }

  Id add_vertex() { return vertex_count++; }
  Id add_edge(Id from, Id to) {
    iota.push_back(from);
    tau.push_back(to);
    return edge_count() - 1;
  }

  void validate() const {
    if (vertex_count < 0) throw Error("pre-graph: negative vertex count");
    if (iota.size() != tau.size()) throw Error("pre-graph: iota/tau arrays differ in length");
    for (Id e = 0; e < edge_count(); ++e) {
      for (Id v : {iota[e], tau[e]}) {
        if (v != kNone && (v < 0 || v >= vertex_count)) {
          throw Error("pre-graph: edge " + std::to_string(e) + " has an endpoint outside the vertex set");
        }
      }
    }
  }

  friend bool operator==(const PreGraph&, const PreGraph&) = default;
};

/// Edges missing an iota- or tau-endpoint.
inline std::vector<Id> boundary(const PreGraph& g) {
  std::vector<Id> out;
  for (Id e = 0; e < g.edge_count(); ++e) {
    if (!g.has_iota(e) || !g.has_tau(e)) out.push_back(e);
  }
  return out;
}

inline bool is_graph(const PreGraph& g) { return boundary(g).empty(); }

/// One incident edge-end at a vertex.
struct EdgeEnd {
  Id edge;
  End end;
  friend auto operator<=>(const EdgeEnd&, const EdgeEnd&) = default;
};

/// Edge-ends incident at each vertex, sorted by (edge, end).
inline std::vector<std::vector<EdgeEnd>> incidence(const PreGraph& g) {
  std::vector<std::vector<EdgeEnd>> out(g.vertex_count);
  for (Id e = 0; e < g.edge_count(); ++e) {
    if (g.has_iota(e)) out[g.iota[e]].push_back({e, End::Iota});
    if (g.has_tau(e)) out[g.tau[e]].push_back({e, End::Tau});
  }
  return out;
}

inline std::vector<Id> valences(const PreGraph& g) {
  std::vector<Id> out(g.vertex_count, 0);
  for (Id e = 0; e < g.edge_count(); ++e) {
    if (g.has_iota(e)) ++out[g.iota[e]];
    if (g.has_tau(e)) ++out[g.tau[e]];
  }
  return out;
}

/// Connected components. Vertex and edge labels are dense and ordered by first appearance
/// (vertices first, then edges with no endpoints).
struct Components {
  Id count = 0;
  std::vector<Id> of_vertex;
  std::vector<Id> of_edge;
};

inline Components components(const PreGraph& g) {
  const Id n = g.vertex_count;
  DisjointSets sets(n + g.edge_count());
  for (Id e = 0; e < g.edge_count(); ++e) {
    if (g.has_iota(e)) sets.unite(n + e, g.iota[e]);
    if (g.has_tau(e)) sets.unite(n + e, g.tau[e]);
  }
  Components c;
  std::map<Id, Id> label;
  auto lab = [&](Id x) {
    auto [it, fresh] = label.try_emplace(sets.find(x), c.count);
    if (fresh) ++c.count;
    return it->second;
  };
  c.of_vertex.resize(n);
  c.of_edge.resize(g.edge_count());
  for (Id v = 0; v < n; ++v) c.of_vertex[v] = lab(v);
  for (Id e = 0; e < g.edge_count(); ++e) c.of_edge[e] = lab(n + e);
  return c;
}

inline long euler_characteristic(const PreGraph& g) {
  return static_cast<long>(g.vertex_count) - static_cast<long>(g.edge_count());
}

/// First Betti number of a connected graph.
inline long betti1(const PreGraph& g) {
  if (!is_graph(g)) throw Error("betti1: input has boundary");
  if (components(g).count != 1) throw Error("betti1: input is not connected");
  return 1 - euler_characteristic(g);
}

inline PreGraph disjoint_union(const PreGraph& a, const PreGraph& b) {
  PreGraph u = a;
  u.vertex_count = a.vertex_count + b.vertex_count;
  for (Id e = 0; e < b.edge_count(); ++e) {
    u.iota.push_back(b.has_iota(e) ? b.iota[e] + a.vertex_count : kNone);
    u.tau.push_back(b.has_tau(e) ? b.tau[e] + a.vertex_count : kNone);
  }
  return u;
}

/// Vertex and edge maps of a pre-graph morphism, without the endpoints attached.
struct GraphMap {
  std::vector<Id> vertices;
  std::vector<Id> edges;

  static GraphMap identity(const PreGraph& g) {
    GraphMap m;
    m.vertices.resize(g.vertex_count);
    m.edges.resize(g.edge_count());
    std::iota(m.vertices.begin(), m.vertices.end(), 0);
    std::iota(m.edges.begin(), m.edges.end(), 0);
    return m;
  }

  friend bool operator==(const GraphMap&, const GraphMap&) = default;
};

/// `second` after `first`.
inline GraphMap compose(const GraphMap& second, const GraphMap& first) {
  GraphMap m;
  m.vertices.reserve(first.vertices.size());
  m.edges.reserve(first.edges.size());
  for (Id v : first.vertices) m.vertices.push_back(second.vertices.at(v));
  for (Id e : first.edges) m.edges.push_back(second.edges.at(e));
  return m;
}

/// Checks that `m` is a pre-graph morphism from `src` to `dst`.
inline bool is_morphism(const PreGraph& src, const PreGraph& dst, const GraphMap& m) {
  if (static_cast<Id>(m.vertices.size()) != src.vertex_count) return false;
  if (static_cast<Id>(m.edges.size()) != src.edge_count()) return false;
  for (Id v : m.vertices) {
    if (v < 0 || v >= dst.vertex_count) return false;
  }
  for (Id e = 0; e < src.edge_count(); ++e) {
    const Id fe = m.edges[e];
    if (fe < 0 || fe >= dst.edge_count()) return false;
    if (src.has_iota(e) && dst.iota[fe] != m.vertices[src.iota[e]]) return false;
    if (src.has_tau(e) && dst.tau[fe] != m.vertices[src.tau[e]]) return false;
  }
  return true;
}

/// Immersion condition: distinct edges sharing an iota- (or tau-) endpoint have distinct images.
inline bool is_immersion(const PreGraph& src, const GraphMap& m) {
  std::map<std::tuple<Id, End, Id>, Id> seen;
  for (Id e = 0; e < src.edge_count(); ++e) {
    for (End end : {End::Iota, End::Tau}) {
      const Id v = src.endpoint(e, end);
      if (v == kNone) continue;
      auto [it, fresh] = seen.try_emplace({v, end, m.edges[e]}, e);
      if (!fresh && it->second != e) return false;
    }
  }
  return true;
}

/// Bijective on vertices and edges with matching iota/tau domains.
inline bool is_isomorphism(const PreGraph& src, const PreGraph& dst, const GraphMap& m) {
  if (!is_morphism(src, dst, m)) return false;
  if (src.vertex_count != dst.vertex_count || src.edge_count() != dst.edge_count()) return false;
  std::vector<char> hitv(dst.vertex_count, 0), hite(dst.edge_count(), 0);
  for (Id v : m.vertices) {
    if (hitv[v]++) return false;
  }
  for (Id e = 0; e < src.edge_count(); ++e) {
    const Id fe = m.edges[e];
    if (hite[fe]++) return false;
    if (src.has_iota(e) != dst.has_iota(fe) || src.has_tau(e) != dst.has_tau(fe)) return false;
  }
  return true;
}

/// A morphism together with its source and target.
struct PreGraphMorphism {
  PreGraph source;
  PreGraph target;
  GraphMap map;

  bool valid() const { return is_morphism(source, target, map); }

  static PreGraphMorphism identity(const PreGraph& g) { return {g, g, GraphMap::identity(g)}; }
};

inline bool is_immersion(const PreGraphMorphism& f) { return is_immersion(f.source, f.map); }

inline PreGraphMorphism compose(const PreGraphMorphism& second, const PreGraphMorphism& first) {
  if (!(first.target == second.source)) throw Error("compose: target/source mismatch");
  return {first.source, second.target, compose(second.map, first.map)};
}

/// Fiber product of two morphisms with a common target, with both projections.
/// Elements are the agreeing pairs, listed in lexicographic order.
struct FiberProduct {
  PreGraph graph;
  std::vector<std::pair<Id, Id>> vertex_pairs;
  std::vector<std::pair<Id, Id>> edge_pairs;
  PreGraphMorphism first;
  PreGraphMorphism second;
};

inline FiberProduct fiber_product(const PreGraphMorphism& f1, const PreGraphMorphism& f2) {
  if (!(f1.target == f2.target)) throw Error("fiber_product: morphisms have different targets");
  FiberProduct fp;
  std::map<std::pair<Id, Id>, Id> vindex;
  // Bucket by image so the product is built in time proportional to its size.
  std::vector<std::vector<Id>> v2_over(f2.target.vertex_count), e2_over(f2.target.edge_count());
  for (Id v = 0; v < f2.source.vertex_count; ++v) v2_over[f2.map.vertices[v]].push_back(v);
  for (Id e = 0; e < f2.source.edge_count(); ++e) e2_over[f2.map.edges[e]].push_back(e);
  for (Id v1 = 0; v1 < f1.source.vertex_count; ++v1) {
    for (Id v2 : v2_over[f1.map.vertices[v1]]) {
      vindex[{v1, v2}] = static_cast<Id>(fp.vertex_pairs.size());
      fp.vertex_pairs.emplace_back(v1, v2);
    }
  }
  fp.graph.vertex_count = static_cast<Id>(fp.vertex_pairs.size());
  for (Id e1 = 0; e1 < f1.source.edge_count(); ++e1) {
    for (Id e2 : e2_over[f1.map.edges[e1]]) {
      fp.edge_pairs.emplace_back(e1, e2);
      auto end_of = [&](End end) {
        const Id a = f1.source.endpoint(e1, end);
        const Id b = f2.source.endpoint(e2, end);
        return (a == kNone || b == kNone) ? kNone : vindex.at({a, b});
      };
      fp.graph.iota.push_back(end_of(End::Iota));
      fp.graph.tau.push_back(end_of(End::Tau));
    }
  }
  fp.first = {fp.graph, f1.source, {}};
  fp.second = {fp.graph, f2.source, {}};
  for (auto [a, b] : fp.vertex_pairs) {
    fp.first.map.vertices.push_back(a);
    fp.second.map.vertices.push_back(b);
  }
  for (auto [a, b] : fp.edge_pairs) {
    fp.first.map.edges.push_back(a);
    fp.second.map.edges.push_back(b);
  }
  return fp;
}

/// Sub-pre-graph on the given vertex and edge subsets. Endpoints outside the kept vertex set
/// become undefined. Returns the sub-pre-graph and its inclusion map.
inline std::pair<PreGraph, GraphMap> restrict_to(const PreGraph& g, const std::vector<char>& keep_vertex,
                                                 const std::vector<char>& keep_edge) {
  PreGraph sub;
  GraphMap inc;
  std::vector<Id> vnew(g.vertex_count, kNone);
  for (Id v = 0; v < g.vertex_count; ++v) {
    if (keep_vertex[v]) {
      vnew[v] = sub.add_vertex();
      inc.vertices.push_back(v);
    }
  }
  for (Id e = 0; e < g.edge_count(); ++e) {
    if (!keep_edge[e]) continue;
    sub.iota.push_back(g.has_iota(e) ? vnew[g.iota[e]] : kNone);
    sub.tau.push_back(g.has_tau(e) ? vnew[g.tau[e]] : kNone);
    inc.edges.push_back(e);
  }
  return {sub, inc};
}

}  // namespace unimm
