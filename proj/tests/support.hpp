#pragma once

#include <fstream>
#include <random>
#include <sstream>
#include <string>

#include "unimm/unimm.hpp"

namespace unimm::testing {

inline std::string fixture_path(const std::string& name) { return std::string(UNIMM_FIXTURE_DIR) + "/" + name; }

inline std::string read_fixture(const std::string& name) {
  std::ifstream in(fixture_path(name));
  if (!in) throw Error("missing fixture " + name);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline PreComplex load_complex(const std::string& name) {
  const std::string text = read_fixture(name);
  if (name.ends_with(".json")) return complex_from_json(Json::parse(text));
  return presentation_complex(text);
}

inline const std::vector<std::string>& presentation_fixtures() {
  static const std::vector<std::string> names{"torus.txt",          "surface.txt",          "disc.txt",
                                              "projective_plane.txt", "trivial_group.txt",   "wise_x.txt",
                                              "wise_y.txt",         "torus_wedge_disc.txt", "undetermined_wedge.txt"};
  return names;
}

/// Random permutation of 0..n-1.
inline std::vector<Id> shuffled(Id n, std::mt19937_64& rng) {
  std::vector<Id> p(n);
  std::iota(p.begin(), p.end(), 0);
  std::shuffle(p.begin(), p.end(), rng);
  return p;
}

/// The same complex with every cell renumbered at random, plus the isomorphism onto it.
inline ComplexMorphism relabel(const PreComplex& x, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const auto pv = shuffled(x.vertex_count(), rng);
  const auto pe = shuffled(x.edge_count(), rng);
  const auto pu = shuffled(x.faces.vertex_count, rng);
  const auto ps = shuffled(x.faces.edge_count(), rng);
  auto move = [](Id v, const std::vector<Id>& p) { return v == kNone ? kNone : p[v]; };
  PreComplex y;
  y.skeleton.vertex_count = x.vertex_count();
  y.skeleton.iota.assign(x.edge_count(), kNone);
  y.skeleton.tau.assign(x.edge_count(), kNone);
  for (Id e = 0; e < x.edge_count(); ++e) {
    y.skeleton.iota[pe[e]] = move(x.skeleton.iota[e], pv);
    y.skeleton.tau[pe[e]] = move(x.skeleton.tau[e], pv);
  }
  y.faces.vertex_count = x.faces.vertex_count;
  y.faces.iota.assign(x.faces.edge_count(), kNone);
  y.faces.tau.assign(x.faces.edge_count(), kNone);
  y.attach.vertices.assign(x.faces.vertex_count, kNone);
  y.attach.edges.assign(x.faces.edge_count(), kNone);
  for (Id s = 0; s < x.faces.edge_count(); ++s) {
    y.faces.iota[ps[s]] = move(x.faces.iota[s], pu);
    y.faces.tau[ps[s]] = move(x.faces.tau[s], pu);
    y.attach.edges[ps[s]] = pe[x.attach.edges[s]];
  }
  for (Id u = 0; u < x.faces.vertex_count; ++u) y.attach.vertices[pu[u]] = pv[x.attach.vertices[u]];
  return {x, y, {pv, pe}, {pu, ps}};
}

/// Independent check that a triple's weight vector equals the multiset of pieces it was built from.
inline WeightVector multiset_vector(const std::vector<std::int64_t>& pieces) {
  WeightVector w;
  for (auto p : pieces) w[p] += 1;
  return w;
}

/// Branched cover of a presentation complex from one permutation of the sheets per generator.
/// Each relator lifts from every sheet; a lift that does not close after one pass continues until
/// it does, giving a face of higher degree.
inline ComplexMorphism permutation_cover(const Presentation& p, const std::vector<std::vector<Id>>& sigma) {
  const PreComplex x = presentation_complex(p);
  const Id n = static_cast<Id>(sigma.front().size());
  std::vector<std::vector<Id>> inv(sigma.size(), std::vector<Id>(n));
  for (std::size_t g = 0; g < sigma.size(); ++g) {
    for (Id i = 0; i < n; ++i) inv[g][sigma[g][i]] = i;
  }
  PreComplex y;
  GraphMap sk, fc;
  y.skeleton.vertex_count = n;
  sk.vertices.assign(n, 0);
  for (std::size_t g = 0; g < sigma.size(); ++g) {
    for (Id i = 0; i < n; ++i) {
      y.skeleton.add_edge(i, sigma[g][i]);
      sk.edges.push_back(static_cast<Id>(g));
    }
  }
  auto lifted = [&](Id g, Id i) { return static_cast<Id>(g) * n + i; };
  Id base_face = 0;  // first X face vertex of the current relator
  for (const Word& r : p.relators) {
    const Id len = static_cast<Id>(r.size());
    std::vector<char> used(n, 0);
    for (Id start = 0; start < n; ++start) {
      if (used[start]) continue;
      std::vector<Id> sheets;  // sheet at each corner
      Id at = start;
      do {
        used[at] = 1;
        for (Id j = 0; j < len; ++j) {
          sheets.push_back(at);
          const Letter l = r[j];
          at = l.inverse ? inv[l.generator][at] : sigma[l.generator][at];
        }
      } while (at != start);
      const Id m = static_cast<Id>(sheets.size());
      const Id u0 = y.faces.vertex_count;
      for (Id k = 0; k < m; ++k) {
        y.faces.add_vertex();
        y.attach.vertices.push_back(sheets[k]);
        fc.vertices.push_back(base_face + k % len);
      }
      for (Id k = 0; k < m; ++k) {
        const Letter l = r[k % len];
        const Id a = u0 + k, b = u0 + (k + 1) % m;
        if (l.inverse) {
          y.faces.add_edge(b, a);
          y.attach.edges.push_back(lifted(l.generator, sheets[(k + 1) % m]));
        } else {
          y.faces.add_edge(a, b);
          y.attach.edges.push_back(lifted(l.generator, sheets[k]));
        }
        fc.edges.push_back(base_face + k % len);
      }
    }
    base_face += len;
  }
  y.validate();
  return {y, x, sk, fc};
}

/// Nonzero kernel points of the gluing system with every coordinate in [0, bound], by depth-first
/// search over the columns; a row is closed once its last column has been assigned.
inline std::vector<WeightVector> bounded_kernel_points(const GluingSystem& sys, int bound, std::size_t limit = 0) {
  const std::size_t n = sys.column_count();
  std::vector<std::size_t> last(sys.row_count(), 0);
  for (std::size_t j = 0; j < n; ++j) {
    for (const auto& e : sys.column(j)) {
      if (e.net() != 0) last[e.row] = j;
    }
  }
  std::vector<std::vector<std::int32_t>> closes(n);
  for (std::size_t r = 0; r < sys.row_count(); ++r) closes[last[r]].push_back(static_cast<std::int32_t>(r));
  std::vector<long> sum(sys.row_count(), 0);
  std::vector<int> x(n, 0);
  std::vector<WeightVector> out;
  std::function<bool(std::size_t)> rec = [&](std::size_t j) {
    if (j == n) {
      WeightVector u;
      for (std::size_t k = 0; k < n; ++k) {
        if (x[k]) u[sys.piece_of[k]] = x[k];
      }
      if (!u.empty()) out.push_back(std::move(u));
      return limit == 0 || out.size() < limit;
    }
    for (int k = 0; k <= bound; ++k) {
      x[j] = k;
      for (const auto& e : sys.column(j)) sum[e.row] += static_cast<long>(k) * e.net();
      bool ok = true;
      for (auto r : closes[j]) ok = ok && sum[r] == 0;
      const bool more = !ok || rec(j + 1);
      for (const auto& e : sys.column(j)) sum[e.row] -= static_cast<long>(k) * e.net();
      x[j] = 0;
      if (!more) return false;
    }
    return true;
  };
  rec(0);
  return out;
}

}  // namespace unimm::testing
