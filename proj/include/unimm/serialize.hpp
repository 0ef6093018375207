#pragma once

#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "unimm/certify.hpp"
#include "unimm/complex.hpp"
#include "unimm/oracle.hpp"
#include "unimm/reducibility.hpp"

namespace unimm {

using Json = nlohmann::ordered_json;

inline constexpr int kSchemaVersion = 1;

inline Json to_json(const Rational& q) { return Json{{"num", q.get_num().get_str()}, {"den", q.get_den().get_str()}}; }

inline Rational rational_from_json(const Json& j) {
  Rational q(Integer(j.at("num").get<std::string>()), Integer(j.at("den").get<std::string>()));
  q.canonicalize();
  return q;
}

inline Json to_json(const PreGraph& g) {
  return Json{{"vertices", g.vertex_count}, {"iota", g.iota}, {"tau", g.tau}};
}

inline PreGraph pregraph_from_json(const Json& j) {
  PreGraph g;
  g.vertex_count = j.at("vertices").get<Id>();
  g.iota = j.at("iota").get<std::vector<Id>>();
  g.tau = j.at("tau").get<std::vector<Id>>();
  g.validate();
  return g;
}

inline Json to_json(const GraphMap& m) { return Json{{"vertices", m.vertices}, {"edges", m.edges}}; }

inline GraphMap graphmap_from_json(const Json& j) {
  return {j.at("vertices").get<std::vector<Id>>(), j.at("edges").get<std::vector<Id>>()};
}

inline Json to_json(const PreComplex& x) {
  return Json{{"version", kSchemaVersion},
              {"vertices", x.skeleton.vertex_count},
              {"edges", x.edge_count()},
              {"iota", x.skeleton.iota},
              {"tau", x.skeleton.tau},
              {"faces", to_json(x.faces)},
              {"attach", to_json(x.attach)}};
}

inline PreComplex complex_from_json(const Json& j) {
  if (j.value("version", kSchemaVersion) != kSchemaVersion) throw Error("complex json: unsupported version");
  PreComplex x;
  x.skeleton.vertex_count = j.at("vertices").get<Id>();
  x.skeleton.iota = j.at("iota").get<std::vector<Id>>();
  x.skeleton.tau = j.at("tau").get<std::vector<Id>>();
  if (j.contains("edges") && j.at("edges").get<Id>() != x.edge_count()) throw Error("complex json: edge count mismatch");
  x.faces = pregraph_from_json(j.at("faces"));
  x.attach = graphmap_from_json(j.at("attach"));
  x.validate();
  return x;
}

inline Json to_json(const ComplexMorphism& f) {
  return Json{{"source", to_json(f.source)}, {"target", to_json(f.target)}, {"skeleton", to_json(f.skeleton)},
              {"faces", to_json(f.faces)}};
}

inline ComplexMorphism morphism_from_json(const Json& j) {
  ComplexMorphism f{complex_from_json(j.at("source")), complex_from_json(j.at("target")),
                    graphmap_from_json(j.at("skeleton")), graphmap_from_json(j.at("faces"))};
  if (!f.valid()) throw Error("morphism json: maps do not form a morphism");
  return f;
}

inline Json to_json(const VisibleVerdict& v) {
  Json j{{"status", to_string(v.status)}};
  if (v.vertex != kNone) j["vertex"] = v.vertex;
  if (v.edge != kNone) {
    j["edge"] = v.edge;
    if (v.status == Visible::Unfoldable) j["end"] = to_string(v.end);
  }
  return j;
}

inline Json to_json(const Classification& c) {
  Json trail = Json::array();
  for (const auto& w : c.trail) trail.push_back({{"vertex", w.vertex}, {"edge", w.edge}, {"end", to_string(w.end)}});
  return Json{{"classification", to_string(c.result)},
              {"final", to_json(c.final_verdict)},
              {"unfolds", trail},
              {"step_bound", c.step_bound},
              {"unfolded", to_json(c.unfolded)}};
}

inline Json to_json(const LPOutcome& lp) {
  Json j{{"status", to_string(lp.status)},
         {"rows", lp.rows},
         {"columns", lp.columns},
         {"reduced_rows", lp.reduced_rows},
         {"reduced_columns", lp.reduced_columns},
         {"pivots", lp.pivots}};
  if (lp.status == LPStatus::Optimal) {
    j["value"] = to_json(lp.value);
    Json v = Json::array(), u = Json::array();
    for (const auto& [p, x] : lp.vertex) v.push_back({{"piece", p}, {"weight", to_json(x)}});
    for (const auto& [p, x] : lp.integral) u.push_back({{"piece", p}, {"weight", x.get_str()}});
    j["v_max"] = v;
    j["u_max"] = u;
    j["lambda"] = to_json(lp.lambda);
    j["dual_verified"] = lp.dual_verified;
    j["primal_verified"] = lp.primal_verified;
  }
  return j;
}

/// Dual multipliers keyed by edge piece, nonzero entries only.
inline Json dual_json(const GluingSystem& sys, const LPOutcome& lp) {
  Json rows = Json::array();
  for (std::size_t r = 0; r < lp.dual.size(); ++r) {
    if (lp.dual[r] == 0) continue;
    rows.push_back({{"edge_piece", to_string(sys.rows[r])}, {"y", to_json(lp.dual[r])}});
  }
  return Json{{"lambda", to_json(lp.lambda)}, {"rows", rows}};
}

inline Json to_json(const Certificate& c, const PieceCatalogue& cat, const GluingSystem* sys = nullptr) {
  Json j{{"version", kSchemaVersion}, {"status", to_string(c.status)}};
  j["value"] = c.lp.status == LPStatus::Optimal ? to_json(c.lp.value) : Json(nullptr);
  if (c.epsilon) {
    j["epsilon"] = to_json(*c.epsilon);
    j["epsilon_decimal"] = c.epsilon->get_d();
  } else {
    j["epsilon"] = nullptr;
  }
  Json used = Json::array();
  for (const auto& [p, k] : c.lp.integral) {
    used.push_back({{"piece", p}, {"key", cat.key(static_cast<std::size_t>(p))}, {"multiplicity", k.get_str()},
                    {"degree", to_json(cat.degree(static_cast<std::size_t>(p)))},
                    {"curvature", to_json(cat.curvature(static_cast<std::size_t>(p)))}});
  }
  j["pieces_used"] = used;
  j["dual"] = sys && c.lp.status == LPStatus::Optimal ? dual_json(*sys, c.lp) : Json(nullptr);
  j["witness_complex"] = c.witness ? to_json(c.witness->y()) : Json(nullptr);
  Json ver{{"lp", to_json(c.lp)}};
  if (c.witness) {
    ver["primal"] = c.checks.primal;
    ver["dual"] = c.checks.dual;
    ver["weight_vector_matches"] = c.checks.weight_vector_matches;
    ver["visibly_irreducible"] = c.checks.visibly_irreducible;
    ver["face_essential"] = c.checks.face_essential;
    ver["ratio_matches"] = c.checks.ratio_matches;
    ver["witness_degree"] = to_json(c.witness_degree);
    ver["witness_curvature"] = to_json(c.witness_curvature);
  }
  ver["verified"] = c.verified();
  j["verification"] = ver;
  return j;
}

inline Json to_json(const BoundReport& r) {
  return Json{{"lp_value", to_json(r.lp_value)},
              {"triples", r.triples},
              {"best", r.best ? to_json(*r.best) : Json(nullptr)},
              {"attained", r.attained},
              {"violations", r.violations.size()}};
}

/// DOT for the 1-skeleton; dangling ends are drawn as points.
inline std::string to_dot(const PreGraph& g, const std::string& name = "G") {
  std::ostringstream os;
  os << "digraph " << name << " {\n";
  for (Id v = 0; v < g.vertex_count; ++v) os << "  v" << v << ";\n";
  for (Id e = 0; e < g.edge_count(); ++e) {
    std::string from = g.has_iota(e) ? "v" + std::to_string(g.iota[e]) : "i" + std::to_string(e);
    std::string to = g.has_tau(e) ? "v" + std::to_string(g.tau[e]) : "t" + std::to_string(e);
    if (!g.has_iota(e)) os << "  " << from << " [shape=point];\n";
    if (!g.has_tau(e)) os << "  " << to << " [shape=point];\n";
    os << "  " << from << " -> " << to << " [label=\"e" << e << "\"];\n";
  }
  os << "}\n";
  return os.str();
}

/// DOT for the Whitehead graph at v: nodes are edge-ends, links are corners.
inline std::string whitehead_dot(const PreComplex& x, Id v) {
  const LocalStructure ls = local_structure(x, v);
  std::ostringstream os;
  os << "graph whitehead_v" << v << " {\n";
  for (std::size_t n = 0; n < ls.ends.size(); ++n) {
    os << "  n" << n << " [label=\"e" << ls.ends[n].edge << (ls.ends[n].end == End::Iota ? "+" : "-") << "\"];\n";
  }
  for (std::size_t c = 0; c < ls.corners.size(); ++c) {
    os << "  n" << ls.half_edges[c][0].node << " -- n" << ls.half_edges[c][1].node << " [label=\"c" << ls.corners[c]
       << "\"];\n";
  }
  os << "}\n";
  return os.str();
}

}  // namespace unimm
