#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "unimm/complex.hpp"
#include "unimm/folding.hpp"
#include "unimm/rational.hpp"

namespace unimm {

/// An edge piece over e: a nonempty set of face edges over e with a partition into Y-edges.
/// `faces` is sorted; `labels[i]` is the block of faces[i], numbered by first occurrence.
struct EdgePiece {
  Id edge = kNone;
  std::vector<Id> faces;
  std::vector<std::uint8_t> labels;

  Id block_count() const { return labels.empty() ? 0 : *std::max_element(labels.begin(), labels.end()) + 1; }
  friend bool operator==(const EdgePiece&, const EdgePiece&) = default;
  friend auto operator<=>(const EdgePiece&, const EdgePiece&) = default;
};

struct EdgePieceHash {
  std::size_t operator()(const EdgePiece& r) const {
    std::size_t h = std::hash<Id>()(r.edge);
    for (std::size_t i = 0; i < r.faces.size(); ++i) {
      h = h * 1000003u ^ (static_cast<std::size_t>(r.faces[i]) * 131u + r.labels[i]);
    }
    return h;
  }
};

inline std::string to_string(const EdgePiece& r) {
  std::string out = "e" + std::to_string(r.edge) + "{";
  for (Id b = 0; b < r.block_count(); ++b) {
    out += b ? "|" : "";
    bool first = true;
    for (std::size_t i = 0; i < r.faces.size(); ++i) {
      if (r.labels[i] != b) continue;
      out += (first ? "" : ",") + std::to_string(r.faces[i]);
      first = false;
    }
  }
  return out + "}";
}

/// Restricted growth strings of length n (set partitions in canonical order); with
/// `min_block`, only partitions whose blocks all have at least that many elements.
inline std::vector<std::vector<std::uint8_t>> set_partitions(int n, int min_block = 1) {
  std::vector<std::vector<std::uint8_t>> out;
  std::vector<std::uint8_t> a(n, 0);
  std::vector<int> size(n + 1, 0);
  std::function<void(int, int)> rec = [&](int i, int k) {
    if (i == n) {
      for (int b = 0; b < k; ++b) {
        if (size[b] < min_block) return;
      }
      out.push_back(a);
      return;
    }
    for (int b = 0; b <= k && b < n; ++b) {
      a[i] = static_cast<std::uint8_t>(b);
      ++size[b];
      rec(i + 1, std::max(k, b + 1));
      --size[b];
    }
  };
  rec(0, 0);
  return out;
}

/// All edge pieces over e: every nonempty subset of the fiber with every partition of it.
inline std::vector<EdgePiece> enumerate_edge_pieces(const PreComplex& x, Id e) {
  const auto fiber = face_fibers(x).at(e);
  if (fiber.size() > 20) throw Error("enumerate_edge_pieces: fiber too large for exhaustive enumeration");
  std::vector<EdgePiece> out;
  const std::uint32_t full = (1u << fiber.size()) - 1;
  for (std::uint32_t mask = 1; mask <= full; ++mask) {
    EdgePiece base;
    base.edge = e;
    for (std::size_t i = 0; i < fiber.size(); ++i) {
      if (mask >> i & 1u) base.faces.push_back(fiber[i]);
    }
    for (auto& p : set_partitions(static_cast<int>(base.faces.size()))) {
      EdgePiece r = base;
      r.labels = p;
      out.push_back(std::move(r));
    }
  }
  std::sort(out.begin(), out.end(), [](const EdgePiece& a, const EdgePiece& b) {
    return std::make_pair(a.faces.size(), std::tie(a.faces, a.labels)) <
           std::make_pair(b.faces.size(), std::tie(b.faces, b.labels));
  });
  return out;
}

/// True iff the link graph on `nodes` nodes has at least two nodes, is connected, and has no cut node.
inline bool whitehead_irreducible(int nodes, const std::vector<std::pair<int, int>>& links) {
  if (nodes < 2) return false;
  std::vector<int> parent(nodes);
  auto count_without = [&](int removed) {
    for (int i = 0; i < nodes; ++i) parent[i] = i;
    auto find = [&](int a) {
      while (parent[a] != a) a = parent[a] = parent[parent[a]];
      return a;
    };
    int comps = nodes - (removed >= 0 ? 1 : 0);
    for (auto [a, b] : links) {
      if (a == removed || b == removed) continue;
      a = find(a);
      b = find(b);
      if (a != b) {
        parent[a] = b;
        --comps;
      }
    }
    return comps;
  };
  if (count_without(-1) != 1) return false;
  if (nodes >= 3) {
    for (int r = 0; r < nodes; ++r) {
      if (count_without(r) != 1) return false;
    }
  }
  return true;
}

/// Visibly irreducible one-vertex pieces of Y(P) over a vertex of X ("Y-vertex types"): a set of
/// corners, and a grouping of their half-edges at each Whitehead node into Y-edges.
struct VertexTypeTable {
  LocalStructure local;
  std::vector<std::uint64_t> mask;
  std::vector<std::uint32_t> label_start;  // labels of type t: [label_start[t], label_start[t+1])
  std::vector<std::uint8_t> labels;        // block of (corner, side) for corners of the mask, ascending
  std::vector<std::uint8_t> blocks;
  std::unordered_map<std::uint64_t, std::vector<std::int32_t>> by_mask;

  std::size_t size() const { return mask.size(); }
  std::span<const std::uint8_t> labels_of(std::size_t t) const {
    return {labels.data() + label_start[t], labels.data() + label_start[t + 1]};
  }
};

inline VertexTypeTable enumerate_vertex_types(const PreComplex& x, Id v, const std::vector<std::vector<EdgeEnd>>& face_inc) {
  VertexTypeTable tt;
  tt.local = local_structure(x, v, face_inc);
  tt.label_start.push_back(0);
  const LocalStructure& ls = tt.local;
  const int m = static_cast<int>(ls.corners.size());
  if (m > 30) throw Error("enumerate_vertex_pieces: too many corners at a vertex for exhaustive enumeration");
  const int nodes = static_cast<int>(ls.ends.size());
  int max_at_node = 0;
  {
    std::vector<int> at(nodes, 0);
    for (const auto& h : ls.half_edges) {
      ++at[h[0].node];
      ++at[h[1].node];
    }
    for (int a : at) max_at_node = std::max(max_at_node, a);
  }
  std::vector<std::vector<std::vector<std::uint8_t>>> parts(max_at_node + 1);
  for (int k = 0; k <= max_at_node; ++k) parts[k] = set_partitions(k, 2);

  std::vector<std::vector<std::pair<int, int>>> at_node(nodes);  // (corner, side)
  std::vector<int> used;
  std::vector<std::size_t> choice;
  std::vector<int> block_of(2 * std::max(m, 1));
  std::vector<std::pair<int, int>> links;
  std::vector<int> relabel;
  for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << m); ++mask) {
    for (auto& a : at_node) a.clear();
    for (int c = 0; c < m; ++c) {
      if (!(mask >> c & 1u)) continue;
      at_node[ls.half_edges[c][0].node].emplace_back(c, 0);
      at_node[ls.half_edges[c][1].node].emplace_back(c, 1);
    }
    used.clear();
    bool ok = true;
    for (int n = 0; n < nodes && ok; ++n) {
      if (at_node[n].empty()) continue;
      if (at_node[n].size() < 2) ok = false;
      used.push_back(n);
    }
    if (!ok) continue;
    choice.assign(used.size(), 0);
    for (;;) {
      int nb = 0;
      for (std::size_t k = 0; k < used.size(); ++k) {
        const auto& p = parts[at_node[used[k]].size()][choice[k]];
        int mx = 0;
        for (std::size_t j = 0; j < p.size(); ++j) {
          auto [c, side] = at_node[used[k]][j];
          block_of[2 * c + side] = nb + p[j];
          mx = std::max(mx, p[j] + 1);
        }
        nb += mx;
      }
      links.clear();
      for (int c = 0; c < m; ++c) {
        if (mask >> c & 1u) links.emplace_back(block_of[2 * c], block_of[2 * c + 1]);
      }
      if (whitehead_irreducible(nb, links)) {
        relabel.assign(nb, -1);
        int next = 0;
        for (int c = 0; c < m; ++c) {
          if (!(mask >> c & 1u)) continue;
          for (int side = 0; side < 2; ++side) {
            int& r = relabel[block_of[2 * c + side]];
            if (r < 0) r = next++;
            tt.labels.push_back(static_cast<std::uint8_t>(r));
          }
        }
        tt.by_mask[mask].push_back(static_cast<std::int32_t>(tt.mask.size()));
        tt.mask.push_back(mask);
        tt.blocks.push_back(static_cast<std::uint8_t>(nb));
        tt.label_start.push_back(static_cast<std::uint32_t>(tt.labels.size()));
      }
      std::size_t k = 0;
      while (k < used.size()) {
        if (++choice[k] < parts[at_node[used[k]].size()].size()) break;
        choice[k++] = 0;
      }
      if (k == used.size()) break;
    }
  }
  return tt;
}

/// Half-edge of X at a corner of the local structure, as (face edge, end).
inline std::pair<Id, End> half_edge_of(const LocalStructure& ls, int corner, int side) {
  const HalfEdge& h = ls.half_edges[corner][side];
  return {h.face_edge, h.end};
}

/// An induced edge piece at one Whitehead node of a vertex piece.
struct NodeEdgePiece {
  Id node;
  End end;
  EdgePiece piece;
};

/// Catalogue of all vertex pieces over X. A piece is a nonempty set of vertex types over one
/// vertex with pairwise disjoint corner sets; types are listed by increasing least corner.
/// Degrees and curvatures are stored as integers over the common denominator `denominator`.
class PieceCatalogue {
 public:
  explicit PieceCatalogue(const PreComplex& x) : x_(x) {
    if (!x.is_complex()) throw Error("PieceCatalogue: input is not a complex");
    const auto comps = linear_components(x.faces);
    face_length_.assign(x.faces.vertex_count, 0);
    Integer l = 1;
    for (const auto& c : *comps) {
      for (Id u : c.vertices) face_length_[u] = static_cast<Id>(c.vertices.size());
      l = lcm(l, Integer(static_cast<long>(c.vertices.size())));
    }
    if (!l.fits_slong_p() || l.get_si() > (1L << 40)) throw Error("PieceCatalogue: face lengths too large");
    denominator_ = 2 * l.get_si();
    const auto inc = incidence(x.faces);
    for (Id v = 0; v < x.vertex_count(); ++v) {
      tables_.push_back(enumerate_vertex_types(x, v, inc));
      enumerate_pieces(v);
    }
  }

  const PreComplex& complex() const { return x_; }
  std::size_t size() const { return vertex_.size(); }
  std::int64_t denominator() const { return denominator_; }
  const VertexTypeTable& types(Id v) const { return tables_.at(v); }
  Id vertex(std::size_t p) const { return vertex_[p]; }
  std::span<const std::int32_t> piece_types(std::size_t p) const {
    return {type_ids_.data() + start_[p], type_ids_.data() + start_[p + 1]};
  }
  std::int64_t degree_numerator(std::size_t p) const { return deg_[p]; }
  std::int64_t curvature_numerator(std::size_t p) const { return tau_[p]; }
  Rational degree(std::size_t p) const { return make_rational(deg_[p], denominator_); }
  Rational curvature(std::size_t p) const { return make_rational(tau_[p], denominator_); }
  Id y_vertex_count(std::size_t p) const { return static_cast<Id>(start_[p + 1] - start_[p]); }
  Id y_edge_count(std::size_t p) const {
    Id n = 0;
    for (auto t : piece_types(p)) n += tables_[vertex_[p]].blocks[t];
    return n;
  }
  std::uint64_t corner_mask(std::size_t p) const {
    std::uint64_t m = 0;
    for (auto t : piece_types(p)) m |= tables_[vertex_[p]].mask[t];
    return m;
  }

  /// Induced edge pieces at each used Whitehead node, in node order.
  std::vector<NodeEdgePiece> node_edge_pieces(std::size_t p) const {
    const VertexTypeTable& tt = tables_[vertex_[p]];
    const LocalStructure& ls = tt.local;
    // (face edge, global block) per node.
    std::map<Id, std::vector<std::pair<Id, int>>> per_node;
    int block_base = 0;
    for (auto t : piece_types(p)) {
      const auto lab = tt.labels_of(t);
      std::size_t k = 0;
      for (int c = 0; c < static_cast<int>(ls.corners.size()); ++c) {
        if (!(tt.mask[t] >> c & 1u)) continue;
        for (int side = 0; side < 2; ++side) {
          const HalfEdge& h = ls.half_edges[c][side];
          per_node[h.node].emplace_back(h.face_edge, block_base + lab[k++]);
        }
      }
      block_base += tt.blocks[t];
    }
    std::vector<NodeEdgePiece> out;
    for (auto& [node, list] : per_node) {
      std::sort(list.begin(), list.end());
      NodeEdgePiece ne{node, ls.ends[node].end, {ls.ends[node].edge, {}, {}}};
      std::map<int, std::uint8_t> relabel;
      for (auto [s, b] : list) {
        auto it = relabel.try_emplace(b, static_cast<std::uint8_t>(relabel.size())).first;
        ne.piece.faces.push_back(s);
        ne.piece.labels.push_back(it->second);
      }
      out.push_back(std::move(ne));
    }
    return out;
  }

  /// Stable textual id: base vertex, then each type as its corner mask and labels.
  std::string key(std::size_t p) const {
    const VertexTypeTable& tt = tables_[vertex_[p]];
    std::string out = "v" + std::to_string(vertex_[p]);
    for (auto t : piece_types(p)) {
      out += ":" + std::to_string(tt.mask[t]) + "/";
      for (auto l : tt.labels_of(t)) out += static_cast<char>('a' + l);
    }
    return out;
  }

  /// Looks up a piece from its base vertex and sorted type ids; -1 if absent.
  std::int64_t find(Id v, const std::vector<std::int32_t>& type_ids) const {
    if (index_.empty()) {
      for (std::size_t p = 0; p < size(); ++p) {
        auto ts = piece_types(p);
        index_.emplace(index_key(vertex_[p], {ts.begin(), ts.end()}), static_cast<std::int64_t>(p));
      }
    }
    auto it = index_.find(index_key(v, type_ids));
    return it == index_.end() ? -1 : it->second;
  }

  /// Type id for a corner mask with labels, or -1.
  std::int32_t find_type(Id v, std::uint64_t mask, const std::vector<std::uint8_t>& labels) const {
    const VertexTypeTable& tt = tables_.at(v);
    auto it = tt.by_mask.find(mask);
    if (it == tt.by_mask.end()) return -1;
    for (auto t : it->second) {
      auto lab = tt.labels_of(t);
      if (std::equal(lab.begin(), lab.end(), labels.begin(), labels.end())) return t;
    }
    return -1;
  }

  Id face_length(Id face_vertex) const { return face_length_[face_vertex]; }

 private:
  static std::string index_key(Id v, const std::vector<std::int32_t>& ts) {
    std::string k(reinterpret_cast<const char*>(&v), sizeof v);
    k.append(reinterpret_cast<const char*>(ts.data()), ts.size() * sizeof(std::int32_t));
    return k;
  }

  void enumerate_pieces(Id v) {
    const VertexTypeTable& tt = tables_[v];
    const int m = static_cast<int>(tt.local.corners.size());
    if (m == 0) return;
    std::vector<std::int64_t> corner_deg(m);
    for (int c = 0; c < m; ++c) corner_deg[c] = denominator_ / face_length_[tt.local.corners[c]];
    std::vector<std::int64_t> type_deg(tt.size()), type_tau(tt.size());
    for (std::size_t t = 0; t < tt.size(); ++t) {
      std::int64_t d = 0;
      for (int c = 0; c < m; ++c) {
        if (tt.mask[t] >> c & 1u) d += corner_deg[c];
      }
      type_deg[t] = d;
      type_tau[t] = d + denominator_ - denominator_ / 2 * tt.blocks[t];
    }
    // Sets of pairwise disjoint masks with increasing least corner, then all type choices.
    const std::uint64_t all = m == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << m) - 1;
    std::vector<std::uint64_t> chosen;
    std::vector<std::size_t> pick;
    std::function<void(std::uint64_t, int)> rec = [&](std::uint64_t used, int low) {
      const std::uint64_t above = low < 0 ? all : (all & ~((std::uint64_t{2} << low) - 1));
      const std::uint64_t free = above & ~used;
      for (std::uint64_t s = free; s; s = (s - 1) & free) {
        // Submasks are visited in decreasing order; only those with types are kept.
        auto it = tt.by_mask.find(s);
        if (it == tt.by_mask.end()) continue;
        chosen.push_back(s);
        emit(v, chosen, type_deg, type_tau);
        rec(used | s, std::countr_zero(s));
        chosen.pop_back();
      }
    };
    rec(0, -1);
  }

  void emit(Id v, const std::vector<std::uint64_t>& masks, const std::vector<std::int64_t>& type_deg,
            const std::vector<std::int64_t>& type_tau) {
    const VertexTypeTable& tt = tables_[v];
    std::vector<const std::vector<std::int32_t>*> lists;
    std::vector<std::size_t> order(masks.size());
    for (std::size_t i = 0; i < masks.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return std::countr_zero(masks[a]) < std::countr_zero(masks[b]); });
    for (std::size_t i : order) lists.push_back(&tt.by_mask.at(masks[i]));
    std::vector<std::size_t> idx(lists.size(), 0);
    for (;;) {
      std::int64_t d = 0, t = 0;
      for (std::size_t i = 0; i < lists.size(); ++i) {
        const auto id = (*lists[i])[idx[i]];
        type_ids_.push_back(id);
        d += type_deg[id];
        t += type_tau[id];
      }
      start_.push_back(type_ids_.size());
      vertex_.push_back(v);
      deg_.push_back(d);
      tau_.push_back(t);
      std::size_t k = 0;
      while (k < lists.size()) {
        if (++idx[k] < lists[k]->size()) break;
        idx[k++] = 0;
      }
      if (k == lists.size()) break;
    }
  }

  PreComplex x_;
  std::vector<Id> face_length_;
  std::int64_t denominator_ = 2;
  std::vector<VertexTypeTable> tables_;
  std::vector<Id> vertex_;
  std::vector<std::size_t> start_{0};
  std::vector<std::int32_t> type_ids_;
  std::vector<std::int64_t> deg_, tau_;
  mutable std::unordered_map<std::string, std::int64_t> index_;
};

/// Y(P) -> Z(P) -> X for a catalogued piece. Z(P) is the sub-asterisk of N_X(v) on the used
/// nodes and corners; Y(P) has one vertex per type and one edge per block.
inline FaceImmersionTriple piece_triple(const PieceCatalogue& cat, std::size_t p) {
  const Id v = cat.vertex(p);
  const VertexTypeTable& tt = cat.types(v);
  const LocalStructure& ls = tt.local;
  const PreComplex& x = cat.complex();
  const std::uint64_t mask = cat.corner_mask(p);
  const int m = static_cast<int>(ls.corners.size());

  // Used nodes become Z-edges.
  std::vector<Id> z_edge_of_node(ls.ends.size(), kNone);
  PreComplex z, y;
  z.skeleton.vertex_count = 1;
  GraphMap z_sk{{v}, {}}, z_fc;
  for (int c = 0; c < m; ++c) {
    if (!(mask >> c & 1u)) continue;
    for (int side = 0; side < 2; ++side) {
      const Id n = ls.half_edges[c][side].node;
      if (z_edge_of_node[n] != kNone) continue;
      z_edge_of_node[n] = 0;
    }
  }
  for (Id n = 0; n < static_cast<Id>(ls.ends.size()); ++n) {
    if (z_edge_of_node[n] == kNone) continue;
    z_edge_of_node[n] = ls.ends[n].end == End::Iota ? z.skeleton.add_edge(0, kNone) : z.skeleton.add_edge(kNone, 0);
    z_sk.edges.push_back(ls.ends[n].edge);
  }
  // Faces: one face vertex per corner, one face edge per half-edge.
  std::vector<Id> fv_of_corner(m, kNone);
  for (int c = 0; c < m; ++c) {
    if (!(mask >> c & 1u)) continue;
    fv_of_corner[c] = z.faces.add_vertex();
    z.attach.vertices.push_back(0);
    z_fc.vertices.push_back(ls.corners[c]);
  }
  GraphMap y_to_z_fc = {{}, {}};
  y.faces.vertex_count = z.faces.vertex_count;
  y.skeleton.vertex_count = 0;
  GraphMap y_to_z_sk;
  int block_base = 0;
  std::vector<Id> y_attach_v(z.faces.vertex_count), y_attach_e;
  for (auto t : cat.piece_types(p)) {
    const Id yv = y.skeleton.add_vertex();
    y_to_z_sk.vertices.push_back(0);
    const auto lab = tt.labels_of(t);
    std::vector<Id> y_edge(tt.blocks[t], kNone);
    std::size_t k = 0;
    for (int c = 0; c < m; ++c) {
      if (!(tt.mask[t] >> c & 1u)) continue;
      y_attach_v[fv_of_corner[c]] = yv;
      for (int side = 0; side < 2; ++side) {
        const HalfEdge& h = ls.half_edges[c][side];
        Id& ye = y_edge[lab[k++]];
        if (ye == kNone) {
          ye = h.end == End::Iota ? y.skeleton.add_edge(yv, kNone) : y.skeleton.add_edge(kNone, yv);
          y_to_z_sk.edges.push_back(z_edge_of_node[h.node]);
        }
        const Id fv = fv_of_corner[c];
        const Id ze = z_edge_of_node[h.node];
        if (h.end == End::Iota) {
          z.faces.add_edge(fv, kNone);
        } else {
          z.faces.add_edge(kNone, fv);
        }
        z.attach.edges.push_back(ze);
        z_fc.edges.push_back(h.face_edge);
        y_attach_e.push_back(ye);
      }
    }
    block_base += tt.blocks[t];
  }
  y.faces = z.faces;
  y.attach.vertices = y_attach_v;
  y.attach.edges = y_attach_e;
  ComplexMorphism f0{y, z, y_to_z_sk, GraphMap::identity(z.faces)};
  ComplexMorphism f1{z, x, z_sk, z_fc};
  return {f0, f1};
}

/// Sparse weight vector over piece ids.
using WeightVector = std::map<std::int64_t, Integer>;

/// Per-Y-vertex description of a face immersion at one Z-vertex, in X's local coordinates.
struct InducedLocal {
  Id x_vertex = kNone;
  std::vector<std::uint64_t> masks;
  std::vector<std::vector<std::uint8_t>> labels;
};

/// Y-vertex types over Z-vertex z, read through the triple.
inline InducedLocal induced_local(const FaceImmersionTriple& t, Id z, const LocalStructure& ls) {
  const PreComplex& y = t.y();
  InducedLocal out;
  out.x_vertex = t.f1.skeleton.vertices[z];
  std::map<Id, int> corner_index;
  for (int c = 0; c < static_cast<int>(ls.corners.size()); ++c) corner_index[ls.corners[c]] = c;
  const auto y_inc = incidence(y.faces);
  // Y-vertices over z, each with its corners.
  std::map<Id, std::vector<std::pair<int, Id>>> corners_of;  // y-vertex -> (X corner index, Y face vertex)
  for (Id u = 0; u < y.faces.vertex_count; ++u) {
    const Id yv = y.attach.vertices[u];
    if (t.f0.skeleton.vertices[yv] != z) continue;
    const Id zu = t.f0.faces.vertices[u];
    const Id xu = t.f1.faces.vertices[zu];
    auto it = corner_index.find(xu);
    if (it == corner_index.end()) throw Error("induced_local: corner not over the image vertex");
    corners_of[yv].emplace_back(it->second, u);
  }
  for (auto& [yv, list] : corners_of) {
    std::sort(list.begin(), list.end());
    std::uint64_t mask = 0;
    std::vector<std::uint8_t> labels;
    std::map<std::pair<Id, End>, std::uint8_t> block;  // Y-edge end at yv -> label
    for (auto [c, u] : list) {
      if (mask >> c & 1u) throw Error("induced_local: two corners of one Y-vertex map to the same corner");
      mask |= std::uint64_t{1} << c;
      for (int side = 0; side < 2; ++side) {
        const HalfEdge& h = ls.half_edges[c][side];
        // The Y half-edge at u lying over (h.face_edge, h.end).
        Id ys = kNone;
        for (const EdgeEnd& ee : y_inc[u]) {
          if (ee.end == h.end && t.f1.faces.edges[t.f0.faces.edges[ee.edge]] == h.face_edge) ys = ee.edge;
        }
        if (ys == kNone) throw Error("induced_local: half-edge not found");
        const std::pair<Id, End> ye{y.attach.edges[ys], h.end};
        auto it = block.try_emplace(ye, static_cast<std::uint8_t>(block.size())).first;
        labels.push_back(it->second);
      }
    }
    out.masks.push_back(mask);
    out.labels.push_back(std::move(labels));
  }
  return out;
}

/// Catalogue id of the vertex piece induced at Z-vertex z. Throws if the local structure is not
/// visibly irreducible.
inline std::int64_t induced_vertex_piece(const PieceCatalogue& cat, const FaceImmersionTriple& t, Id z) {
  const Id v = t.f1.skeleton.vertices[z];
  const VertexTypeTable& tt = cat.types(v);
  const InducedLocal loc = induced_local(t, z, tt.local);
  std::vector<std::pair<int, std::int32_t>> ids;
  for (std::size_t i = 0; i < loc.masks.size(); ++i) {
    const auto id = cat.find_type(v, loc.masks[i], loc.labels[i]);
    if (id < 0) throw Error("induced_vertex_piece: induced local complex is not visibly irreducible");
    ids.emplace_back(std::countr_zero(loc.masks[i]), id);
  }
  if (ids.empty()) throw Error("induced_vertex_piece: no faces at this vertex");
  std::sort(ids.begin(), ids.end());
  std::vector<std::int32_t> sorted;
  for (auto [low, id] : ids) sorted.push_back(id);
  const auto p = cat.find(v, sorted);
  if (p < 0) throw Error("induced_vertex_piece: piece missing from the catalogue");
  return p;
}

/// Induced edge piece at a Z-edge: the image face edges, grouped by Y-edge.
inline EdgePiece induced_edge_piece(const FaceImmersionTriple& t, Id z_edge) {
  const PreComplex& y = t.y();
  const PreComplex& z = t.z();
  std::vector<std::pair<Id, Id>> list;  // (X face edge, Y edge)
  for (Id s = 0; s < y.faces.edge_count(); ++s) {
    const Id zs = t.f0.faces.edges[s];
    if (z.attach.edges[zs] != z_edge) continue;
    list.emplace_back(t.f1.faces.edges[zs], y.attach.edges[s]);
  }
  std::sort(list.begin(), list.end());
  EdgePiece r{t.f1.skeleton.edges[z_edge], {}, {}};
  std::map<Id, std::uint8_t> relabel;
  for (auto [s, ye] : list) {
    r.faces.push_back(s);
    r.labels.push_back(relabel.try_emplace(ye, static_cast<std::uint8_t>(relabel.size())).first->second);
  }
  return r;
}

/// Sum of the induced vertex pieces over all Z-vertices.
inline WeightVector weight_vector(const PieceCatalogue& cat, const FaceImmersionTriple& t) {
  WeightVector w;
  for (Id z = 0; z < t.z().vertex_count(); ++z) w[induced_vertex_piece(cat, t, z)] += 1;
  return w;
}

}  // namespace unimm
