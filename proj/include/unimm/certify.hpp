#pragma once

#include <array>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "unimm/folding.hpp"
#include "unimm/lp.hpp"
#include "unimm/pieces.hpp"
#include "unimm/reducibility.hpp"

namespace unimm {

/// Signed boundary of a weight vector: edge piece -> (#iota - #tau) uses, zeros dropped.
inline std::map<EdgePiece, Integer> boundary_of(const PieceCatalogue& cat, const WeightVector& u) {
  std::map<EdgePiece, Integer> out;
  for (const auto& [p, k] : u) {
    for (const NodeEdgePiece& ne : cat.node_edge_pieces(static_cast<std::size_t>(p))) {
      Integer& slot = out[ne.piece];
      slot += ne.end == End::Iota ? k : Integer(-k);
    }
  }
  for (auto it = out.begin(); it != out.end();) it = it->second == 0 ? out.erase(it) : std::next(it);
  return out;
}

inline bool in_kernel(const PieceCatalogue& cat, const WeightVector& u) { return boundary_of(cat, u).empty(); }

namespace detail {

/// Appends `part` to `into`; returns the vertex, edge, face vertex and face edge offsets.
inline std::array<Id, 4> append(PreComplex& into, const PreComplex& part) {
  const std::array<Id, 4> off{into.vertex_count(), into.edge_count(), into.faces.vertex_count, into.faces.edge_count()};
  auto shift = [](Id v, Id by) { return v == kNone ? kNone : v + by; };
  into.skeleton.vertex_count += part.vertex_count();
  for (Id e = 0; e < part.edge_count(); ++e) {
    into.skeleton.add_edge(shift(part.skeleton.iota[e], off[0]), shift(part.skeleton.tau[e], off[0]));
  }
  into.faces.vertex_count += part.faces.vertex_count;
  for (Id s = 0; s < part.faces.edge_count(); ++s) {
    into.faces.add_edge(shift(part.faces.iota[s], off[2]), shift(part.faces.tau[s], off[2]));
  }
  for (Id v : part.attach.vertices) into.attach.vertices.push_back(v + off[0]);
  for (Id e : part.attach.edges) into.attach.edges.push_back(e + off[1]);
  return off;
}

/// Quotient of a pre-complex by edge and face-edge classes (vertices untouched).
inline std::pair<PreComplex, ComplexMorphism> merge_edges(const PreComplex& x, DisjointSets& es, DisjointSets& ss) {
  DisjointSets vs(x.vertex_count()), fvs(x.faces.vertex_count);
  auto [sk, skq] = quotient_graph(x.skeleton, vs, es);
  auto [fc, fcq] = quotient_graph(x.faces, fvs, ss);
  PreComplex out;
  out.skeleton = std::move(sk);
  out.faces = std::move(fc);
  out.attach.vertices = x.attach.vertices;
  out.attach.edges.assign(out.faces.edge_count(), kNone);
  for (Id s = 0; s < x.faces.edge_count(); ++s) out.attach.edges[fcq.edges[s]] = skq.edges[x.attach.edges[s]];
  ComplexMorphism q{x, out, skq, fcq};
  return {out, q};
}

}  // namespace detail

/// Builds a face immersion with weight vector u by gluing u_P copies of each piece. Within each
/// edge-piece class, iota-sided Z-edges are matched to tau-sided ones in order of (piece id, copy).
inline FaceImmersionTriple reconstruct(const PieceCatalogue& cat, const WeightVector& u) {
  for (const auto& [p, k] : u) {
    if (p < 0 || static_cast<std::size_t>(p) >= cat.size()) throw Error("reconstruct: unknown piece id");
    if (k < 0) throw Error("reconstruct: negative coordinate");
  }
  if (!in_kernel(cat, u)) throw Error("reconstruct: weight vector violates the gluing equations");
  const PreComplex& x = cat.complex();
  PreComplex z, y;
  GraphMap z_sk, z_fc, y_sk;
  struct Half {
    Id z_edge;
    std::map<Id, Id> over;  // X face edge -> Z face edge
  };
  std::map<EdgePiece, std::pair<std::vector<Half>, std::vector<Half>>> classes;
  std::vector<EdgePiece> class_order;
  for (const auto& [p, k] : u) {
    if (k == 0) continue;
    const FaceImmersionTriple t = piece_triple(cat, static_cast<std::size_t>(p));
    const auto fibers = face_fibers(t.z());
    std::vector<EdgePiece> edge_piece;
    for (Id e = 0; e < t.z().edge_count(); ++e) edge_piece.push_back(induced_edge_piece(t, e));
    for (Integer c = 0; c < k; ++c) {
      const auto zo = detail::append(z, t.z());
      detail::append(y, t.y());
      for (Id v : t.f1.skeleton.vertices) z_sk.vertices.push_back(v);
      for (Id e : t.f1.skeleton.edges) z_sk.edges.push_back(e);
      for (Id v : t.f1.faces.vertices) z_fc.vertices.push_back(v);
      for (Id s : t.f1.faces.edges) z_fc.edges.push_back(s);
      for (Id v : t.f0.skeleton.vertices) y_sk.vertices.push_back(v + zo[0]);
      for (Id e : t.f0.skeleton.edges) y_sk.edges.push_back(e + zo[1]);
      for (Id e = 0; e < t.z().edge_count(); ++e) {
        Half h{e + zo[1], {}};
        for (Id s : fibers[e]) h.over[t.f1.faces.edges[s]] = s + zo[3];
        auto [it, fresh] = classes.try_emplace(edge_piece[e]);
        if (fresh) class_order.push_back(edge_piece[e]);
        (t.z().skeleton.has_iota(e) ? it->second.first : it->second.second).push_back(std::move(h));
      }
    }
  }
  DisjointSets ze(z.edge_count()), zs(z.faces.edge_count()), ye(y.edge_count());
  for (const EdgePiece& r : class_order) {
    auto& [iotas, taus] = classes.at(r);
    if (iotas.size() != taus.size()) throw Error("reconstruct: unbalanced edge-piece class");
    for (std::size_t i = 0; i < iotas.size(); ++i) {
      ze.unite(iotas[i].z_edge, taus[i].z_edge);
      for (auto [img, s] : iotas[i].over) {
        const Id s2 = taus[i].over.at(img);
        zs.unite(s, s2);
        ye.unite(y.attach.edges[s], y.attach.edges[s2]);
      }
    }
  }
  DisjointSets ys(y.faces.edge_count());
  for (Id s = 0; s < y.faces.edge_count(); ++s) ys.unite(s, zs.find(s));
  auto [zq, zmap] = detail::merge_edges(z, ze, zs);
  auto [yq, ymap] = detail::merge_edges(y, ye, ys);
  GraphMap f1_sk{z_sk.vertices, std::vector<Id>(zq.edge_count(), kNone)};
  for (Id e = 0; e < z.edge_count(); ++e) f1_sk.edges[zmap.skeleton.edges[e]] = z_sk.edges[e];
  GraphMap f1_fc{z_fc.vertices, std::vector<Id>(zq.faces.edge_count(), kNone)};
  for (Id s = 0; s < z.faces.edge_count(); ++s) f1_fc.edges[zmap.faces.edges[s]] = z_fc.edges[s];
  GraphMap f0_sk{y_sk.vertices, std::vector<Id>(yq.edge_count(), kNone)};
  for (Id e = 0; e < y.edge_count(); ++e) f0_sk.edges[ymap.skeleton.edges[e]] = zmap.skeleton.edges[y_sk.edges[e]];
  // Y and Z share the face pre-graph, merged the same way.
  GraphMap f0_fc = GraphMap::identity(yq.faces);
  FaceImmersionTriple out{{yq, zq, f0_sk, f0_fc}, {zq, x, f1_sk, f1_fc}};
  if (!out.valid()) throw Error("reconstruct: glued maps fail the face-immersion invariants");
  return out;
}

enum class CertificateStatus { UNI, VacuousUNI, NotUNIWitness };

inline const char* to_string(CertificateStatus s) {
  switch (s) {
    case CertificateStatus::UNI: return "UNI";
    case CertificateStatus::VacuousUNI: return "vacuous-UNI";
    case CertificateStatus::NotUNIWitness: return "not-UNI-witness";
  }
  return "unknown";
}

struct CertificateChecks {
  bool primal = false;
  bool dual = false;
  bool weight_vector_matches = false;
  bool visibly_irreducible = false;
  bool face_essential = false;
  bool ratio_matches = false;
  bool all() const { return primal && dual && weight_vector_matches && visibly_irreducible && face_essential && ratio_matches; }
};

struct Certificate {
  CertificateStatus status = CertificateStatus::VacuousUNI;
  LPOutcome lp;
  std::optional<Rational> epsilon;
  std::optional<FaceImmersionTriple> witness;
  Rational witness_degree, witness_curvature;
  CertificateChecks checks;
  bool verified() const { return status == CertificateStatus::VacuousUNI || checks.all(); }
};

struct CertifyOptions {
  PivotRule rule = PivotRule::DantzigLexicographic;
  std::optional<std::uint64_t> permutation_seed;
  bool reconstruct_witness = true;
};

/// Certificate from an existing catalogue.
inline Certificate certify(const PieceCatalogue& cat, const CertifyOptions& opt = {}) {
  Certificate c;
  const GluingSystem sys = build_system(cat, opt.permutation_seed);
  c.lp = solve(sys, opt.rule);
  if (c.lp.status == LPStatus::Infeasible) {
    c.status = CertificateStatus::VacuousUNI;
    return c;
  }
  c.status = c.lp.value < 0 ? CertificateStatus::UNI : CertificateStatus::NotUNIWitness;
  if (c.lp.value < 0) c.epsilon = -c.lp.value;
  c.checks.primal = c.lp.primal_verified;
  c.checks.dual = c.lp.dual_verified;
  if (!opt.reconstruct_witness) return c;
  FaceImmersionTriple t = reconstruct(cat, c.lp.integral);
  c.checks.weight_vector_matches = weight_vector(cat, t) == c.lp.integral;
  c.checks.visibly_irreducible = visible_status(t.y()).status == Visible::Irreducible;
  const ComplexMorphism f = t.composite();
  c.checks.face_essential = is_face_essential(f);
  c.witness_degree = degree(f).total;
  c.witness_curvature = total_curvature(f);
  c.checks.ratio_matches = c.witness_degree > 0 && c.witness_curvature / c.witness_degree == c.lp.value;
  c.witness = std::move(t);
  return c;
}

inline Certificate certify(const PreComplex& x, const CertifyOptions& opt = {}) { return certify(PieceCatalogue(x), opt); }

}  // namespace unimm
