#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "unimm/pieces.hpp"
#include "unimm/rational.hpp"

namespace unimm {

/// One nonzero of a boundary column: edge-piece row with its iota and tau multiplicities.
struct BoundaryEntry {
  std::int32_t row;
  std::int16_t iota;
  std::int16_t tau;
  int net() const { return iota - tau; }
};

/// Gluing equations, degree and curvature over the piece catalogue. Column j is piece
/// `piece_of[j]`; rows are the edge pieces that some piece induces, numbered by first occurrence.
struct GluingSystem {
  const PieceCatalogue* catalogue = nullptr;
  std::vector<std::int64_t> piece_of;
  std::vector<EdgePiece> rows;
  std::vector<std::size_t> col_start{0};
  std::vector<BoundaryEntry> entries;
  std::vector<std::int64_t> deg;  // numerators over `denominator`
  std::vector<std::int64_t> tau;
  std::int64_t denominator = 1;

  std::size_t column_count() const { return piece_of.size(); }
  std::size_t row_count() const { return rows.size(); }
  std::span<const BoundaryEntry> column(std::size_t j) const {
    return {entries.data() + col_start[j], entries.data() + col_start[j + 1]};
  }
  Rational degree(std::size_t j) const { return make_rational(deg[j], denominator); }
  Rational curvature(std::size_t j) const { return make_rational(tau[j], denominator); }
};

namespace detail {

inline void append_key(std::string& k, std::int32_t x) { k.append(reinterpret_cast<const char*>(&x), sizeof x); }

}  // namespace detail

/// Builds the system. With a seed, columns are a uniformly random permutation of the catalogue.
inline GluingSystem build_system(const PieceCatalogue& cat, std::optional<std::uint64_t> permutation_seed = std::nullopt) {
  GluingSystem sys;
  sys.catalogue = &cat;
  sys.denominator = cat.denominator();
  sys.piece_of.resize(cat.size());
  std::iota(sys.piece_of.begin(), sys.piece_of.end(), 0);
  if (permutation_seed) {
    std::mt19937_64 rng(*permutation_seed);
    std::shuffle(sys.piece_of.begin(), sys.piece_of.end(), rng);
  }
  const PreComplex& x = cat.complex();
  // Per vertex, per type: (node, face edge, local block) sorted by node then face edge.
  struct Slot {
    std::int32_t node;
    std::int32_t face_edge;
    std::int32_t block;
  };
  std::vector<std::vector<std::vector<Slot>>> slots(x.vertex_count());
  for (Id v = 0; v < x.vertex_count(); ++v) {
    const VertexTypeTable& tt = cat.types(v);
    const LocalStructure& ls = tt.local;
    slots[v].resize(tt.size());
    for (std::size_t t = 0; t < tt.size(); ++t) {
      const auto lab = tt.labels_of(t);
      std::size_t k = 0;
      for (int c = 0; c < static_cast<int>(ls.corners.size()); ++c) {
        if (!(tt.mask[t] >> c & 1u)) continue;
        for (int side = 0; side < 2; ++side) {
          const HalfEdge& h = ls.half_edges[c][side];
          slots[v][t].push_back({h.node, h.face_edge, lab[k++]});
        }
      }
      std::sort(slots[v][t].begin(), slots[v][t].end(), [](const Slot& a, const Slot& b) {
        return std::tie(a.node, a.face_edge) < std::tie(b.node, b.face_edge);
      });
    }
  }
  std::unordered_map<std::string, std::int32_t> row_of;
  std::vector<Slot> merged;
  std::string key;
  std::vector<std::int32_t> relabel;
  std::map<std::int32_t, BoundaryEntry> col;
  sys.deg.reserve(cat.size());
  sys.tau.reserve(cat.size());
  for (std::int64_t p : sys.piece_of) {
    const Id v = cat.vertex(p);
    const VertexTypeTable& tt = cat.types(v);
    const LocalStructure& ls = tt.local;
    merged.clear();
    std::int32_t base = 0;
    for (auto t : cat.piece_types(p)) {
      for (const Slot& s : slots[v][t]) merged.push_back({s.node, s.face_edge, s.block + base});
      base += tt.blocks[t];
    }
    std::sort(merged.begin(), merged.end(),
              [](const Slot& a, const Slot& b) { return std::tie(a.node, a.face_edge) < std::tie(b.node, b.face_edge); });
    col.clear();
    relabel.assign(base, -1);
    for (std::size_t i = 0; i < merged.size();) {
      std::size_t j = i;
      const std::int32_t node = merged[i].node;
      key.clear();
      detail::append_key(key, ls.ends[node].edge);
      std::int32_t next = 0;
      for (; j < merged.size() && merged[j].node == node; ++j) {
        std::int32_t& r = relabel[merged[j].block];
        if (r < 0) r = next++;
        detail::append_key(key, merged[j].face_edge);
        detail::append_key(key, r);
      }
      for (std::size_t k = i; k < j; ++k) relabel[merged[k].block] = -1;
      auto [it, fresh] = row_of.try_emplace(key, static_cast<std::int32_t>(sys.rows.size()));
      if (fresh) {
        EdgePiece r{ls.ends[node].edge, {}, {}};
        for (std::size_t k = i; k < j; ++k) {
          r.faces.push_back(merged[k].face_edge);
          r.labels.push_back(static_cast<std::uint8_t>(*reinterpret_cast<const std::int32_t*>(key.data() + 8 + 8 * (k - i))));
        }
        sys.rows.push_back(std::move(r));
      }
      auto& e = col.try_emplace(it->second, BoundaryEntry{it->second, 0, 0}).first->second;
      if (ls.ends[node].end == End::Iota) {
        ++e.iota;
      } else {
        ++e.tau;
      }
      i = j;
    }
    for (auto& [r, e] : col) sys.entries.push_back(e);
    sys.col_start.push_back(sys.entries.size());
    sys.deg.push_back(cat.degree_numerator(p));
    sys.tau.push_back(cat.curvature_numerator(p));
  }
  return sys;
}

/// Result of exact presolve: surviving columns and rows, and the removal log needed to extend
/// dual multipliers back to the full system.
struct Presolve {
  std::vector<char> column_active;
  std::vector<char> row_active;
  std::vector<std::int32_t> forcing_rows;  // rows removed for being one-signed, in removal order
  std::vector<std::vector<std::int64_t>> forced_columns;  // columns removed by each forcing row
  std::size_t duplicates_removed = 0;
};

/// Removes duplicate columns (same boundary and degree, keeping the largest curvature), then
/// repeatedly removes rows whose nonzeros all have one sign, forcing their columns to zero.
inline Presolve presolve(const GluingSystem& sys) {
  const std::size_t n = sys.column_count(), m = sys.row_count();
  Presolve ps;
  ps.column_active.assign(n, 1);
  ps.row_active.assign(m, 1);
  {
    std::unordered_map<std::string, std::size_t> best;
    std::string k;
    for (std::size_t j = 0; j < n; ++j) {
      k.clear();
      k.append(reinterpret_cast<const char*>(&sys.deg[j]), sizeof(std::int64_t));
      for (const auto& e : sys.column(j)) {
        if (e.net() == 0) continue;
        const std::int32_t net = e.net();
        detail::append_key(k, e.row);
        detail::append_key(k, net);
      }
      auto [it, fresh] = best.try_emplace(k, j);
      if (fresh) continue;
      const std::size_t i = it->second;
      if (sys.tau[j] > sys.tau[i]) {
        ps.column_active[i] = 0;
        it->second = j;
      } else {
        ps.column_active[j] = 0;
      }
      ++ps.duplicates_removed;
    }
  }
  // Row -> columns with a nonzero net entry.
  std::vector<std::size_t> rstart(m + 1, 0);
  for (std::size_t j = 0; j < n; ++j) {
    for (const auto& e : sys.column(j)) {
      if (e.net() != 0) ++rstart[e.row + 1];
    }
  }
  for (std::size_t r = 0; r < m; ++r) rstart[r + 1] += rstart[r];
  std::vector<std::int64_t> rcols(rstart[m]);
  std::vector<std::int8_t> rsign(rstart[m]);
  {
    std::vector<std::size_t> fill(rstart.begin(), rstart.end() - 1);
    for (std::size_t j = 0; j < n; ++j) {
      for (const auto& e : sys.column(j)) {
        if (e.net() == 0) continue;
        rcols[fill[e.row]] = static_cast<std::int64_t>(j);
        rsign[fill[e.row]++] = e.net() > 0 ? 1 : -1;
      }
    }
  }
  std::vector<std::int64_t> pos(m, 0), neg(m, 0);
  for (std::size_t r = 0; r < m; ++r) {
    for (std::size_t k = rstart[r]; k < rstart[r + 1]; ++k) {
      if (!ps.column_active[rcols[k]]) continue;
      (rsign[k] > 0 ? pos[r] : neg[r]) += 1;
    }
  }
  std::vector<std::int32_t> queue;
  for (std::size_t r = 0; r < m; ++r) queue.push_back(static_cast<std::int32_t>(r));
  while (!queue.empty()) {
    std::vector<std::int32_t> next;
    for (std::int32_t r : queue) {
      if (!ps.row_active[r]) continue;
      if (pos[r] > 0 && neg[r] > 0) continue;
      ps.row_active[r] = 0;
      if (pos[r] == 0 && neg[r] == 0) continue;
      ps.forcing_rows.push_back(r);
      ps.forced_columns.emplace_back();
      for (std::size_t k = rstart[r]; k < rstart[r + 1]; ++k) {
        const auto j = rcols[k];
        if (!ps.column_active[j]) continue;
        ps.column_active[j] = 0;
        ps.forced_columns.back().push_back(j);
        for (const auto& e : sys.column(j)) {
          if (e.net() == 0) continue;
          (e.net() > 0 ? pos[e.row] : neg[e.row]) -= 1;
          if (ps.row_active[e.row]) next.push_back(e.row);
        }
      }
    }
    queue = std::move(next);
  }
  return ps;
}

enum class LPStatus { Infeasible, Optimal };

inline const char* to_string(LPStatus s) { return s == LPStatus::Optimal ? "optimal" : "infeasible"; }

/// Pivot rule for the exact simplex. Bland: least improving column, least leaving index.
/// Dantzig: most improving scaled reduced cost, lexicographic ratio test.
enum class PivotRule { Bland, DantzigLexicographic };

struct LPOutcome {
  LPStatus status = LPStatus::Infeasible;
  Rational value;
  std::map<std::int64_t, Rational> vertex;  // piece id -> coordinate of v_max
  std::map<std::int64_t, Integer> integral;  // piece id -> coordinate of u_max
  std::vector<Rational> dual;                // per row of the full system
  Rational lambda;                           // multiplier of the degree row
  std::size_t pivots = 0;
  std::size_t rows = 0, columns = 0, reduced_rows = 0, reduced_columns = 0;
  bool dual_verified = false;
  bool primal_verified = false;
};

namespace detail {

/// Exact revised simplex with a dense basis inverse for max c.x, Ax = b, x >= 0.
class ExactSimplex {
 public:
  struct Column {
    std::vector<std::pair<std::int32_t, std::int64_t>> nz;
    std::int64_t cost;
  };

  ExactSimplex(std::size_t rows, std::vector<Column> cols, std::vector<Rational> b, PivotRule rule)
      : m_(rows), cols_(std::move(cols)), b_(std::move(b)), rule_(rule) {
    // Column scale for Dantzig pricing.
    for (const Column& c : cols_) {
      std::int64_t norm = 1;
      for (auto [r, v] : c.nz) norm = std::max<std::int64_t>(norm, v < 0 ? -v : v);
      inv_norm_.push_back(1.0 / static_cast<double>(norm));
    }
  }

  /// Returns false if infeasible.
  bool solve() {
    const std::size_t n = cols_.size();
    // Artificial columns n..n+m-1 with b >= 0.
    for (std::size_t i = 0; i < m_; ++i) {
      if (b_[i] < 0) throw Error("simplex: negative right-hand side");
    }
    basis_.resize(m_);
    binv_.assign(m_, std::vector<Rational>(m_, 0));
    for (std::size_t i = 0; i < m_; ++i) {
      basis_[i] = n + i;
      binv_[i][i] = 1;
    }
    xb_ = b_;
    in_basis_.assign(n + m_, -1);
    for (std::size_t i = 0; i < m_; ++i) in_basis_[n + i] = static_cast<std::int64_t>(i);
    // Phase 1: maximise minus the sum of artificials.
    phase1_ = true;
    run();
    Rational infeas = 0;
    for (std::size_t i = 0; i < m_; ++i) {
      if (basis_[i] >= n) infeas += xb_[i];
    }
    if (infeas != 0) return false;
    // Drive remaining artificials out where possible.
    for (std::size_t i = 0; i < m_; ++i) {
      if (basis_[i] < n) continue;
      for (std::size_t j = 0; j < n; ++j) {
        if (in_basis_[j] >= 0) continue;
        Rational a = 0;
        for (auto [r, v] : cols_[j].nz) a += binv_[i][r] * v;
        if (a != 0) {
          pivot(j, i, column_in_basis(j), 0);
          break;
        }
      }
    }
    phase1_ = false;
    run();
    return true;
  }

  Rational objective() const {
    Rational z = 0;
    for (std::size_t i = 0; i < m_; ++i) z += cost(basis_[i]) * xb_[i];
    return z;
  }
  /// Dual vector y = c_B B^{-1}.
  std::vector<Rational> duals() const {
    std::vector<Rational> y(m_, 0);
    for (std::size_t i = 0; i < m_; ++i) {
      const Rational c = cost(basis_[i]);
      if (c == 0) continue;
      for (std::size_t k = 0; k < m_; ++k) y[k] += c * binv_[i][k];
    }
    return y;
  }
  std::map<std::size_t, Rational> solution() const {
    std::map<std::size_t, Rational> x;
    for (std::size_t i = 0; i < m_; ++i) {
      if (basis_[i] < cols_.size() && xb_[i] != 0) x[basis_[i]] = xb_[i];
    }
    return x;
  }
  std::size_t pivots() const { return pivots_; }

 private:
  Rational cost(std::size_t j) const {
    if (j >= cols_.size()) return phase1_ ? Rational(-1) : Rational(0);
    return phase1_ ? Rational(0) : Rational(cols_[j].cost);
  }

  std::vector<Rational> column_in_basis(std::size_t j) const {
    std::vector<Rational> a(m_, 0);
    for (auto [r, v] : cols_[j].nz) {
      for (std::size_t i = 0; i < m_; ++i) {
        if (binv_[i][r] != 0) a[i] += binv_[i][r] * v;
      }
    }
    return a;
  }

  /// Scaled integer duals for fast pricing: y = Y / den.
  struct ScaledDuals {
    bool small = false;
    std::vector<__int128> y128;
    __int128 den128 = 1;
    std::vector<Integer> y;
    Integer den;
  };

  ScaledDuals scale(const std::vector<Rational>& y) const {
    ScaledDuals s;
    s.den = 1;
    for (const auto& q : y) s.den = lcm(s.den, Integer(q.get_den()));
    s.y.reserve(m_);
    bool small = s.den.fits_slong_p() && abs(s.den) < (Integer(1) << 60);
    for (const auto& q : y) {
      Integer v = q.get_num() * (s.den / q.get_den());
      small = small && v.fits_slong_p() && abs(v) < (Integer(1) << 60);
      s.y.push_back(v);
    }
    s.small = small;
    if (small) {
      s.den128 = s.den.get_si();
      for (const auto& v : s.y) s.y128.push_back(v.get_si());
    }
    return s;
  }

  /// Sign of den * (c_j - y.A_j) (exact) and an approximate magnitude for Dantzig pricing.
  int reduced_cost_sign(const ScaledDuals& s, std::size_t j, double& magnitude) const {
    const Column& c = cols_[j];
    const std::int64_t cj = phase1_ ? 0 : c.cost;
    constexpr std::int64_t lim = std::int64_t{1} << 40;
    bool small = s.small && cj < lim && cj > -lim;
    for (auto [r, v] : c.nz) small = small && v < lim && v > -lim;
    if (small) {
      __int128 d = static_cast<__int128>(cj) * s.den128;
      for (auto [r, v] : c.nz) d -= s.y128[r] * v;
      magnitude = static_cast<double>(d);
      return d > 0 ? 1 : (d < 0 ? -1 : 0);
    }
    Integer d = Integer(cj) * s.den;
    for (auto [r, v] : c.nz) d -= s.y[r] * v;
    magnitude = d.get_d();
    return sgn(d);
  }

  void run() {
    const std::size_t n = cols_.size();
    std::vector<Rational> y = duals();
    for (;;) {
      const ScaledDuals s = scale(y);
      std::size_t enter = n;
      double best = 0;
      for (std::size_t j = 0; j < n; ++j) {
        if (in_basis_[j] >= 0) continue;
        double d = 0;
        if (reduced_cost_sign(s, j, d) <= 0) continue;
        if (rule_ == PivotRule::Bland) {
          enter = j;
          break;
        }
        if (enter == n || d * inv_norm_[j] > best) {
          best = d * inv_norm_[j];
          enter = j;
        }
      }
      if (enter == n) return;
      const std::vector<Rational> alpha = column_in_basis(enter);
      std::size_t leave = m_;
      for (std::size_t i = 0; i < m_; ++i) {
        if (alpha[i] <= 0) continue;
        if (leave == m_) {
          leave = i;
          continue;
        }
        const Rational lhs = xb_[i] * alpha[leave], rhs = xb_[leave] * alpha[i];
        if (lhs < rhs) {
          leave = i;
        } else if (lhs == rhs) {
          if (rule_ == PivotRule::Bland) {
            if (basis_[i] < basis_[leave]) leave = i;
          } else if (lex_less(i, leave, alpha)) {
            leave = i;
          }
        }
      }
      if (leave == m_) throw Error("simplex: unbounded direction (the degree slice should be compact)");
      // Exact reduced cost of the entering column for the dual update.
      Rational dq = cost(enter);
      for (auto [r, v] : cols_[enter].nz) dq -= y[r] * v;
      pivot(enter, leave, alpha, 0);
      for (std::size_t k = 0; k < m_; ++k) {
        if (binv_[leave][k] != 0) y[k] += dq * binv_[leave][k];
      }
    }
  }

  /// Lexicographic comparison of rows i and k of [B^{-1}] scaled by 1/alpha.
  bool lex_less(std::size_t i, std::size_t k, const std::vector<Rational>& alpha) const {
    for (std::size_t c = 0; c < m_; ++c) {
      const Rational a = binv_[i][c] * alpha[k], b = binv_[k][c] * alpha[i];
      if (a != b) return a < b;
    }
    return false;
  }

  void pivot(std::size_t enter, std::size_t leave, const std::vector<Rational>& alpha, int) {
    ++pivots_;
    const Rational piv = alpha[leave];
    const Rational theta = xb_[leave] / piv;
    std::vector<std::size_t> nzk;
    for (std::size_t k = 0; k < m_; ++k) {
      if (binv_[leave][k] != 0) {
        binv_[leave][k] /= piv;
        nzk.push_back(k);
      }
    }
    for (std::size_t i = 0; i < m_; ++i) {
      if (i == leave || alpha[i] == 0) continue;
      if (theta != 0) xb_[i] -= theta * alpha[i];
      for (std::size_t k : nzk) binv_[i][k] -= alpha[i] * binv_[leave][k];
    }
    xb_[leave] = theta;
    in_basis_[basis_[leave]] = -1;
    basis_[leave] = enter;
    in_basis_[enter] = static_cast<std::int64_t>(leave);
  }

  std::size_t m_;
  std::vector<Column> cols_;
  std::vector<Rational> b_;
  std::vector<double> inv_norm_;
  PivotRule rule_;
  bool phase1_ = true;
  std::vector<std::size_t> basis_;
  std::vector<std::int64_t> in_basis_;
  std::vector<std::vector<Rational>> binv_;
  std::vector<Rational> xb_;
  std::size_t pivots_ = 0;
};

}  // namespace detail

/// Checks tau_j - y.d_j - lambda deg_j <= 0 for every column, with equality on `support`.
inline bool verify_dual(const GluingSystem& sys, const std::vector<Rational>& y, const Rational& lambda,
                        const std::map<std::int64_t, Rational>& support) {
  Integer den = lambda.get_den();
  for (const auto& q : y) den = lcm(den, Integer(q.get_den()));
  std::vector<Integer> ys;
  for (const auto& q : y) ys.push_back(q.get_num() * (den / q.get_den()));
  const Integer lam = lambda.get_num() * (den / lambda.get_den());
  std::map<std::int64_t, std::size_t> col_of_piece;
  for (const auto& [p, v] : support) col_of_piece[p] = 0;
  for (std::size_t j = 0; j < sys.column_count(); ++j) {
    // den * D * (reduced cost) = tau_num*den - D * sum(ys * net) - lam*deg_num
    Integer d = Integer(sys.tau[j]) * den - lam * sys.deg[j];
    Integer s = 0;
    for (const auto& e : sys.column(j)) {
      if (e.net() != 0) s += ys[e.row] * e.net();
    }
    d -= s * sys.denominator;
    if (d > 0) return false;
    if (support.count(sys.piece_of[j]) && d != 0) return false;
  }
  return true;
}

/// Checks d v = 0, deg(v) = 1, v >= 0 and tau(v) = value.
inline bool verify_primal(const GluingSystem& sys, const std::map<std::int64_t, Rational>& v, const Rational& value) {
  std::map<std::int32_t, Rational> boundary;
  Rational deg = 0, tau = 0;
  std::unordered_map<std::int64_t, std::size_t> col;
  for (std::size_t j = 0; j < sys.column_count(); ++j) {
    if (v.count(sys.piece_of[j])) col[sys.piece_of[j]] = j;
  }
  for (const auto& [p, x] : v) {
    if (x < 0) return false;
    const std::size_t j = col.at(p);
    for (const auto& e : sys.column(j)) boundary[e.row] += x * e.net();
    deg += x * sys.degree(j);
    tau += x * sys.curvature(j);
  }
  for (const auto& [r, b] : boundary) {
    if (b != 0) return false;
  }
  return deg == 1 && tau == value;
}

/// Maximises tau over the degree-one slice of the gluing cone.
inline LPOutcome solve(const GluingSystem& sys, PivotRule rule = PivotRule::DantzigLexicographic) {
  LPOutcome out;
  out.rows = sys.row_count();
  out.columns = sys.column_count();
  const Presolve ps = presolve(sys);
  std::vector<std::int32_t> reduced_row(sys.row_count(), -1);
  std::int32_t rcount = 0;
  for (std::size_t r = 0; r < sys.row_count(); ++r) {
    if (ps.row_active[r]) reduced_row[r] = rcount++;
  }
  std::vector<std::size_t> col_index;
  std::vector<detail::ExactSimplex::Column> cols;
  for (std::size_t j = 0; j < sys.column_count(); ++j) {
    if (!ps.column_active[j]) continue;
    detail::ExactSimplex::Column c;
    for (const auto& e : sys.column(j)) {
      if (e.net() != 0 && reduced_row[e.row] >= 0) c.nz.emplace_back(reduced_row[e.row], e.net());
    }
    c.nz.emplace_back(rcount, sys.deg[j]);
    c.cost = sys.tau[j];
    cols.push_back(std::move(c));
    col_index.push_back(j);
  }
  out.reduced_rows = static_cast<std::size_t>(rcount);
  out.reduced_columns = cols.size();
  if (cols.empty()) {
    out.status = LPStatus::Infeasible;
    return out;
  }
  std::vector<Rational> b(rcount + 1, 0);
  b[rcount] = sys.denominator;
  detail::ExactSimplex lp(rcount + 1, std::move(cols), b, rule);
  const bool feasible = lp.solve();
  out.pivots = lp.pivots();
  if (!feasible) {
    out.status = LPStatus::Infeasible;
    return out;
  }
  out.status = LPStatus::Optimal;
  out.value = lp.objective() / sys.denominator;
  for (const auto& [k, x] : lp.solution()) out.vertex[sys.piece_of[col_index[k]]] = x;
  Integer l = 1;
  for (const auto& [p, x] : out.vertex) l = lcm(l, Integer(x.get_den()));
  for (const auto& [p, x] : out.vertex) out.integral[p] = Integer(x * l);
  // Duals in the normalisation tau_j - y.d_j - lambda deg_j <= 0.
  const std::vector<Rational> yr = lp.duals();
  out.lambda = yr[rcount];
  out.dual.assign(sys.row_count(), 0);
  for (std::size_t r = 0; r < sys.row_count(); ++r) {
    if (reduced_row[r] >= 0) out.dual[r] = yr[reduced_row[r]] / sys.denominator;
  }
  // Extend to forcing rows in reverse removal order.
  for (std::size_t k = ps.forcing_rows.size(); k-- > 0;) {
    const std::int32_t r = ps.forcing_rows[k];
    std::optional<Rational> bound;
    for (std::int64_t j : ps.forced_columns[k]) {
      Rational slack = sys.curvature(j) - out.lambda * sys.degree(j);
      int coeff = 0;
      for (const auto& e : sys.column(j)) {
        if (e.net() == 0) continue;
        if (e.row == r) {
          coeff = e.net();
        } else {
          slack -= out.dual[e.row] * e.net();
        }
      }
      // Need slack - y_r * coeff <= 0.
      const Rational need = slack / coeff;
      if (!bound || (coeff > 0 ? need > *bound : need < *bound)) bound = need;
    }
    out.dual[r] = bound ? *bound : Rational(0);
  }
  out.dual_verified = verify_dual(sys, out.dual, out.lambda, out.vertex) && out.lambda == out.value;
  out.primal_verified = verify_primal(sys, out.vertex, out.value);
  return out;
}

}  // namespace unimm
