#pragma once

#include <algorithm>
#include <functional>
#include <numeric>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "unimm/canonical.hpp"
#include "unimm/certify.hpp"
#include "unimm/folding.hpp"
#include "unimm/pieces.hpp"
#include "unimm/reducibility.hpp"

namespace unimm {

/// A triple found by brute force, with the pieces it was glued from.
struct OracleTriple {
  FaceImmersionTriple triple;
  std::vector<std::int64_t> pieces;  // sorted, with repetition
  Rational degree;
  Rational curvature;
};

struct OracleOptions {
  Id budget = 2;                          // max Z-vertices
  std::size_t limit = 0;                  // stop after this many distinct triples (0 = no limit)
  std::size_t matching_limit = 100000;    // max matchings tried per multiset
  bool (*piece_filter)(const PieceCatalogue&, std::size_t) = nullptr;
  // When set, each connected triple is handed here instead of being stored.
  std::function<void(const OracleTriple&)> visit;
  bool deduplicate = true;
};

struct OracleRun {
  std::vector<OracleTriple> triples;
  std::size_t found = 0;  // distinct triples, stored or visited
  std::size_t multisets = 0;
  std::size_t matchings = 0;
  std::size_t disconnected = 0;
  std::size_t duplicates = 0;
  bool truncated = false;
};

namespace detail {

struct PieceBoundary {
  std::vector<std::int32_t> cls;   // class of each Z-edge, in Z-edge order
  std::vector<char> iota;          // whether that Z-edge is an iota half
};

inline std::string signature(const std::vector<std::pair<std::int32_t, std::int32_t>>& net) {
  std::string s;
  for (auto [c, k] : net) {
    s.append(reinterpret_cast<const char*>(&c), sizeof c);
    s.append(reinterpret_cast<const char*>(&k), sizeof k);
  }
  return s;
}

inline std::vector<std::pair<std::int32_t, std::int32_t>> add_net(const std::vector<std::pair<std::int32_t, std::int32_t>>& a,
                                                                   const std::vector<std::pair<std::int32_t, std::int32_t>>& b,
                                                                   int sign = 1) {
  std::map<std::int32_t, std::int32_t> m;
  for (auto [c, k] : a) m[c] += k;
  for (auto [c, k] : b) m[c] += sign * k;
  std::vector<std::pair<std::int32_t, std::int32_t>> out;
  for (auto [c, k] : m) {
    if (k != 0) out.emplace_back(c, k);
  }
  return out;
}

/// Glues the listed piece copies along the given (iota half, tau half) Z-edge pairs, one
/// glue_edges call at a time, in Z and in Y.
inline FaceImmersionTriple glue_pieces(const PieceCatalogue& cat, const std::vector<std::int64_t>& pieces,
                                       const std::vector<std::pair<Id, Id>>& pairs) {
  PreComplex z, y;
  GraphMap z_sk, z_fc, y_sk;
  for (std::int64_t p : pieces) {
    const FaceImmersionTriple t = piece_triple(cat, static_cast<std::size_t>(p));
    const auto zo = append(z, t.z());
    append(y, t.y());
    for (Id v : t.f1.skeleton.vertices) z_sk.vertices.push_back(v);
    for (Id e : t.f1.skeleton.edges) z_sk.edges.push_back(e);
    for (Id v : t.f1.faces.vertices) z_fc.vertices.push_back(v);
    for (Id s : t.f1.faces.edges) z_fc.edges.push_back(s);
    for (Id v : t.f0.skeleton.vertices) y_sk.vertices.push_back(v + zo[0]);
    for (Id e : t.f0.skeleton.edges) y_sk.edges.push_back(e + zo[1]);
  }
  ComplexMorphism fz{z, cat.complex(), z_sk, z_fc};
  ComplexMorphism fy = compose(fz, ComplexMorphism{y, z, y_sk, GraphMap::identity(z.faces)});
  // Current ids of the original edges and face edges.
  std::vector<Id> zcur(z.edge_count()), ycur(y.edge_count()), zs(z.faces.edge_count()), ys(y.faces.edge_count());
  std::iota(zcur.begin(), zcur.end(), 0);
  std::iota(ycur.begin(), ycur.end(), 0);
  std::iota(zs.begin(), zs.end(), 0);
  std::iota(ys.begin(), ys.end(), 0);
  const std::vector<Id> y_attach = y.attach.edges;
  const auto z_fibers = face_fibers(z);
  for (auto [zi, zt] : pairs) {
    // Y-edges over the two halves, matched through face images.
    std::map<Id, Id> over_i, over_t;  // X face edge -> original Y edge
    for (Id s : z_fibers[zi]) over_i[z_fc.edges[s]] = y_attach[s];
    for (Id s : z_fibers[zt]) over_t[z_fc.edges[s]] = y_attach[s];
    std::set<std::pair<Id, Id>> ypairs;
    for (auto [img, e] : over_i) ypairs.emplace(e, over_t.at(img));
    for (auto [ei, et] : ypairs) {
      const Id a = ycur[et], b = ycur[ei];
      if (a == b) continue;
      GlueResult r = glue_edges(fy, a, b);
      for (Id& e : ycur) e = r.quotient.skeleton.edges[e];
      for (Id& s : ys) s = r.quotient.faces.edges[s];
      fy = std::move(r.induced);
    }
    GlueResult r = glue_edges(fz, zcur[zt], zcur[zi]);
    for (Id& e : zcur) e = r.quotient.skeleton.edges[e];
    for (Id& s : zs) s = r.quotient.faces.edges[s];
    fz = std::move(r.induced);
  }
  GraphMap f0_sk{y_sk.vertices, std::vector<Id>(fy.source.edge_count(), kNone)};
  for (Id e = 0; e < y.edge_count(); ++e) f0_sk.edges[ycur[e]] = zcur[y_sk.edges[e]];
  GraphMap f0_fc{std::vector<Id>(fy.source.faces.vertex_count), std::vector<Id>(fy.source.faces.edge_count(), kNone)};
  std::iota(f0_fc.vertices.begin(), f0_fc.vertices.end(), 0);
  for (Id s = 0; s < y.faces.edge_count(); ++s) f0_fc.edges[ys[s]] = zs[s];
  return {{fy.source, fz.source, f0_sk, f0_fc}, fz};
}

}  // namespace detail

/// Brute-force face immersions Y -> Z -> X with connected Z of at most `budget` vertices: every
/// multiset of pieces satisfying the gluing equations, glued along every edge-piece-respecting
/// matching, deduplicated by canonical form of Y -> X.
inline OracleRun enumerate_triples(const PieceCatalogue& cat, const OracleOptions& opt = {}) {
  if (opt.budget < 1) throw Error("enumerate_triples: budget must be at least 1");
  OracleRun run;
  const std::size_t n = cat.size();
  std::vector<char> allowed(n, 1);
  if (opt.piece_filter) {
    for (std::size_t p = 0; p < n; ++p) allowed[p] = opt.piece_filter(cat, p);
  }
  // Boundaries from the gluing system; classes are its rows.
  const GluingSystem sys = build_system(cat);
  std::map<EdgePiece, std::int32_t> class_of;
  for (std::size_t r = 0; r < sys.row_count(); ++r) class_of.emplace(sys.rows[r], static_cast<std::int32_t>(r));
  std::vector<std::vector<std::pair<std::int32_t, std::int32_t>>> net(n);
  std::unordered_map<std::string, std::vector<std::int64_t>> by_sig;
  std::vector<std::vector<std::int64_t>> by_class_iota, by_class_tau;
  if (opt.budget >= 3) {
    by_class_iota.resize(sys.row_count());
    by_class_tau.resize(sys.row_count());
  }
  for (std::size_t p = 0; p < n; ++p) {
    if (!allowed[p]) continue;
    for (const auto& e : sys.column(p)) {
      if (e.net() != 0) net[p].emplace_back(e.row, e.net());
      if (opt.budget < 3) continue;
      if (e.iota > 0) by_class_iota[e.row].push_back(static_cast<std::int64_t>(p));
      if (e.tau > 0) by_class_tau[e.row].push_back(static_cast<std::int64_t>(p));
    }
    by_sig[detail::signature(net[p])].push_back(static_cast<std::int64_t>(p));
  }
  // Z-edge halves, computed for pieces that end up in some multiset.
  std::map<std::int64_t, detail::PieceBoundary> halves_of;
  auto halves = [&](std::int64_t p) -> const detail::PieceBoundary& {
    auto [it, fresh] = halves_of.try_emplace(p);
    if (fresh) {
      for (const NodeEdgePiece& ne : cat.node_edge_pieces(static_cast<std::size_t>(p))) {
        it->second.cls.push_back(class_of.at(ne.piece));
        it->second.iota.push_back(ne.end == End::Iota);
      }
    }
    return it->second;
  };
  // Multisets with zero total boundary: grow from the least piece through adjacent pieces, and
  // close with a signature lookup.
  std::set<std::vector<std::int64_t>> multisets;
  std::function<void(std::vector<std::int64_t>&, const std::vector<std::pair<std::int32_t, std::int32_t>>&)> grow =
      [&](std::vector<std::int64_t>& chosen, const std::vector<std::pair<std::int32_t, std::int32_t>>& sum) {
        if (sum.empty()) {
          auto sorted = chosen;
          std::sort(sorted.begin(), sorted.end());
          multisets.insert(sorted);
        }
        const Id room = opt.budget - static_cast<Id>(chosen.size());
        if (room <= 0) return;
        {
          std::vector<std::pair<std::int32_t, std::int32_t>> need;
          for (auto [c, k] : sum) need.emplace_back(c, -k);
          auto it = by_sig.find(detail::signature(need));
          if (it != by_sig.end()) {
            for (std::int64_t q : it->second) {
              if (q < chosen.front()) continue;
              auto sorted = chosen;
              sorted.push_back(q);
              std::sort(sorted.begin(), sorted.end());
              multisets.insert(sorted);
            }
          }
        }
        if (room <= 1) return;
        // Any piece adjacent to something already chosen.
        std::set<std::int64_t> next;
        for (std::int64_t p : chosen) {
          for (const auto& e : sys.column(static_cast<std::size_t>(p))) {
            if (e.iota > 0) {
              for (std::int64_t q : by_class_tau[e.row]) {
                if (q >= chosen.front()) next.insert(q);
              }
            }
            if (e.tau > 0) {
              for (std::int64_t q : by_class_iota[e.row]) {
                if (q >= chosen.front()) next.insert(q);
              }
            }
          }
        }
        for (std::int64_t q : next) {
          chosen.push_back(q);
          grow(chosen, detail::add_net(sum, net[q]));
          chosen.pop_back();
        }
      };
  for (std::size_t p = 0; p < n; ++p) {
    if (!allowed[p]) continue;
    std::vector<std::int64_t> chosen{static_cast<std::int64_t>(p)};
    grow(chosen, net[p]);
  }
  run.multisets = multisets.size();
  std::set<std::vector<std::int64_t>> seen;
  for (const auto& ms : multisets) {
    // Halves per class: (Z-edge id in the disjoint union, is iota).
    std::map<std::int32_t, std::pair<std::vector<Id>, std::vector<Id>>> by_class;
    Id offset = 0;
    for (std::int64_t p : ms) {
      const detail::PieceBoundary& b = halves(p);
      for (std::size_t i = 0; i < b.cls.size(); ++i) {
        auto& h = by_class[b.cls[i]];
        (b.iota[i] ? h.first : h.second).push_back(offset + static_cast<Id>(i));
      }
      offset += static_cast<Id>(b.cls.size());
    }
    std::vector<std::vector<Id>> perms;
    std::vector<std::pair<std::vector<Id>, std::vector<Id>>> cls;
    for (auto& [c, h] : by_class) {
      if (h.first.size() != h.second.size()) throw Error("enumerate_triples: unbalanced multiset");
      cls.push_back(h);
      std::vector<Id> idx(h.second.size());
      std::iota(idx.begin(), idx.end(), 0);
      perms.push_back(idx);
    }
    std::size_t tried = 0;
    for (;;) {
      if (++tried > opt.matching_limit) {
        run.truncated = true;
        break;
      }
      ++run.matchings;
      std::vector<std::pair<Id, Id>> pairs;
      for (std::size_t k = 0; k < cls.size(); ++k) {
        for (std::size_t i = 0; i < perms[k].size(); ++i) pairs.emplace_back(cls[k].first[i], cls[k].second[perms[k][i]]);
      }
      FaceImmersionTriple t = detail::glue_pieces(cat, ms, pairs);
      if (components(t.z().skeleton).count != 1) {
        ++run.disconnected;
      } else {
        const ComplexMorphism f = t.composite();
        if (!opt.deduplicate || seen.insert(canonical_form_over(f)).second) {
          OracleTriple found{std::move(t), ms, degree(f).total, total_curvature(f)};
          ++run.found;
          if (opt.visit) {
            opt.visit(found);
          } else {
            run.triples.push_back(std::move(found));
          }
          if (opt.limit && run.found >= opt.limit) {
            run.truncated = true;
            return run;
          }
        } else {
          ++run.duplicates;
        }
      }
      // Next matching: odometer over per-class permutations.
      std::size_t k = 0;
      for (; k < perms.size(); ++k) {
        if (std::next_permutation(perms[k].begin(), perms[k].end())) break;
      }
      if (k == perms.size()) break;
    }
  }
  return run;
}

inline OracleRun enumerate_triples(const PreComplex& x, const OracleOptions& opt = {}) {
  return enumerate_triples(PieceCatalogue(x), opt);
}

struct BoundReport {
  Rational lp_value;
  std::size_t triples = 0;
  std::optional<Rational> best;
  bool attained = false;
  std::vector<std::size_t> violations;  // indices into the run
  bool ok() const { return violations.empty(); }
};

/// Every enumerated triple must satisfy tau/deg <= lp_value.
inline BoundReport check_bound(const OracleRun& run, const Rational& lp_value) {
  BoundReport r;
  r.lp_value = lp_value;
  r.triples = run.triples.size();
  for (std::size_t i = 0; i < run.triples.size(); ++i) {
    const auto& t = run.triples[i];
    const Rational ratio = t.curvature / t.degree;
    if (!r.best || ratio > *r.best) r.best = ratio;
    if (ratio > lp_value) r.violations.push_back(i);
  }
  r.attained = r.best && *r.best == lp_value;
  return r;
}

/// Streams the oracle through the bound check without keeping the triples.
inline BoundReport check_bound(const PieceCatalogue& cat, const Rational& lp_value, Id budget,
                               bool deduplicate = true) {
  BoundReport r;
  r.lp_value = lp_value;
  OracleOptions opt;
  opt.budget = budget;
  opt.deduplicate = deduplicate;
  opt.visit = [&](const OracleTriple& t) {
    const Rational ratio = t.curvature / t.degree;
    if (!r.best || ratio > *r.best) r.best = ratio;
    if (ratio > lp_value) r.violations.push_back(r.triples);
    ++r.triples;
  };
  enumerate_triples(cat, opt);
  r.attained = r.best && *r.best == lp_value;
  return r;
}

/// Pieces of an immersion: one Y-vertex, and each Z-edge carries a single Y-edge.
inline bool immersion_piece(const PieceCatalogue& cat, std::size_t p) {
  if (cat.piece_types(p).size() != 1) return false;
  for (const NodeEdgePiece& ne : cat.node_edge_pieces(p)) {
    if (ne.piece.block_count() != 1) return false;
  }
  return true;
}

struct ImmersionSearch {
  Id face_budget = 0;
  Id vertex_budget = 0;
  std::vector<FaceImmersionTriple> immersions;  // Y = Z, Y -> X an immersion
  std::size_t candidates = 0;
  bool truncated = false;
};

/// Connected irreducible Y immersing in X with b1(Y) <= r, searched among complexes with at most
/// floor((r - 1) / epsilon) faces.
inline ImmersionSearch enumerate_irreducible_immersions(const PieceCatalogue& cat, long r, const Rational& epsilon,
                                                        Id vertex_cap = 6) {
  if (epsilon <= 0) throw Error("enumerate_irreducible_immersions: epsilon must be positive");
  if (r < 1) throw Error("enumerate_irreducible_immersions: r must be at least 1");
  ImmersionSearch out;
  const Rational bound = Rational(r - 1) / epsilon;
  out.face_budget = static_cast<Id>(floor(bound).get_si());
  if (out.face_budget == 0) return out;
  // Each face contributes at most its length in corners, and every vertex carries a corner.
  Id max_len = 0;
  for (Id u = 0; u < cat.complex().faces.vertex_count; ++u) max_len = std::max(max_len, cat.face_length(u));
  out.vertex_budget = std::min<Id>(out.face_budget * max_len, vertex_cap);
  out.truncated = out.vertex_budget < out.face_budget * max_len;
  OracleOptions opt;
  opt.budget = out.vertex_budget;
  opt.piece_filter = &immersion_piece;
  OracleRun run = enumerate_triples(cat, opt);
  out.truncated = out.truncated || run.truncated;
  for (auto& t : run.triples) {
    ++out.candidates;
    const PreComplex& y = t.triple.y();
    const ComplexMorphism f = t.triple.composite();
    if (face_count(y) > out.face_budget) continue;
    if (!is_immersion(f)) continue;
    if (h1_rank(y) > r) continue;
    if (classify(y).result != Reducibility::Irreducible) continue;
    out.immersions.push_back(std::move(t.triple));
  }
  return out;
}

}  // namespace unimm
