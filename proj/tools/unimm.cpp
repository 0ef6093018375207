#include <fstream>
#include <iostream>
#include <iterator>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "unimm/unimm.hpp"

namespace {

using namespace unimm;

enum Exit { kOk = 0, kFailure = 1, kParse = 2, kNotUni = 10, kUndetermined = 20 };

struct Global {
  std::string format = "text";
  Id budget = 2;
  std::optional<std::uint64_t> seed;
  std::string out;
  std::string input;
};

std::string read_all(std::istream& in) { return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()}; }

std::string load_text(const std::string& input) {
  if (input.empty() || input == "-") return read_all(std::cin);
  if (!input.empty() && (input.front() == '<' || input.front() == '{')) return input;
  std::ifstream f(input);
  if (!f) throw ParseError("cannot open '" + input + "'", 0);
  return read_all(f);
}

std::string trim(std::string s) {
  const auto a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

/// A presentation (`<...|...>`) or a complex in JSON.
PreComplex load_complex(const std::string& input, std::vector<std::string>* warnings = nullptr) {
  const std::string text = trim(load_text(input));
  if (!text.empty() && text.front() == '{') {
    try {
      return complex_from_json(Json::parse(text));
    } catch (const Json::exception& e) {
      throw ParseError(e.what(), 0);
    }
  }
  Presentation p = parse_presentation(text);
  if (warnings) *warnings = p.warnings;
  return presentation_complex(p);
}

/// Map spec: {"source": presentation-or-file, "target": ..., "images": {gen: word}} or a morphism.
ComplexMorphism load_map(const std::string& input) {
  const std::string text = trim(load_text(input));
  Json j;
  try {
    j = Json::parse(text);
  } catch (const Json::exception& e) {
    throw ParseError(e.what(), 0);
  }
  if (j.contains("skeleton")) return morphism_from_json(j);
  auto resolve = [&](const std::string& s) {
    if (!s.empty() && s.front() == '<') return s;
    std::string base = input;
    const auto slash = base.find_last_of('/');
    std::ifstream f(slash == std::string::npos ? s : base.substr(0, slash + 1) + s);
    if (!f) throw ParseError("cannot open '" + s + "'", 0);
    return trim(read_all(f));
  };
  const Presentation src = parse_presentation(resolve(j.at("source").get<std::string>()));
  const Presentation dst = parse_presentation(resolve(j.at("target").get<std::string>()));
  std::vector<Word> images;
  for (const auto& g : src.generators) images.push_back(parse_word(j.at("images").at(g).get<std::string>(), dst.generators));
  return presentation_map(src, dst, images);
}

void emit(const Global& g, const std::string& text) {
  if (g.out.empty()) {
    std::cout << text;
    if (!text.empty() && text.back() != '\n') std::cout << '\n';
    return;
  }
  std::ofstream f(g.out);
  if (!f) throw Error("cannot write '" + g.out + "'");
  f << text;
  if (!text.empty() && text.back() != '\n') f << '\n';
}

std::string summary(const PreComplex& x) {
  std::ostringstream os;
  os << "vertices " << x.vertex_count() << ", edges " << x.edge_count() << ", faces " << face_count(x) << ", chi "
     << euler_characteristic(x);
  return os.str();
}

int cmd_analyze(const Global& g) {
  std::vector<std::string> warnings;
  const PreComplex x = load_complex(g.input, &warnings);
  const VisibleVerdict v = visible_status(x);
  const Classification c = classify(x, g.seed);
  if (g.format == "dot") {
    std::string out = to_dot(x.skeleton, "skeleton");
    for (Id u = 0; u < x.vertex_count(); ++u) out += whitehead_dot(x, u);
    emit(g, out);
  } else if (g.format == "json") {
    Json j{{"version", kSchemaVersion}, {"complex", to_json(x)}, {"visible", to_json(v)}, {"classify", to_json(c)}};
    j["warnings"] = warnings;
    emit(g, j.dump(2));
  } else {
    std::ostringstream os;
    for (const auto& w : warnings) os << "warning: " << w << "\n";
    os << summary(x) << "\n";
    os << "visible: " << to_string(v.status);
    if (v.vertex != kNone) os << " at vertex " << v.vertex;
    if (v.edge != kNone) os << " edge " << v.edge;
    os << "\n";
    os << "classification: " << to_string(c.result) << " after " << c.trail.size() << " unfold(s), final "
       << to_string(c.final_verdict.status) << "\n";
    emit(g, os.str());
  }
  return kOk;
}

int cmd_fold(const Global& g) {
  const ComplexMorphism f = load_map(g.input);
  const FoldedFactorization ff = folded_representative(f);
  const MapClass mc = classify_map(f);
  const Degree d = degree(f);
  if (g.format == "dot") {
    emit(g, to_dot(ff.f1.source.skeleton, "folded"));
  } else if (g.format == "json") {
    Json j{{"version", kSchemaVersion},
           {"branched_map", mc.branched_map},
           {"branched_immersion", mc.branched_immersion},
           {"immersion", mc.immersion},
           {"face_essential", is_face_equivalence(ff.f0)},
           {"degree", to_json(d.total)},
           {"source_chi", euler_characteristic(f.source)},
           {"folds", ff.folds.size()},
           {"folded", to_json(ff.f1.source)}};
    emit(g, j.dump(2));
  } else {
    std::ostringstream os;
    os << "source: " << summary(f.source) << "\n";
    os << "target: " << summary(f.target) << "\n";
    os << "branched map " << mc.branched_map << ", branched immersion " << mc.branched_immersion << ", immersion "
       << mc.immersion << "\n";
    os << "degree " << d.total << ", folds " << ff.folds.size() << ", face-essential " << is_face_equivalence(ff.f0)
       << "\n";
    os << "folded: " << summary(ff.f1.source) << "\n";
    emit(g, os.str());
  }
  return kOk;
}

int cmd_reduce(const Global& g) {
  const PreComplex x = load_complex(g.input);
  const CoreResult r = irreducible_core(x);
  if (g.format == "json") {
    Json j{{"version", kSchemaVersion}, {"determined", r.determined}, {"steps", r.trail}};
    if (r.determined) {
      j["core"] = to_json(r.core);
    } else {
      j["reason"] = r.reason;
    }
    emit(g, j.dump(2));
  } else if (g.format == "dot" && r.determined) {
    emit(g, to_dot(r.core.skeleton, "core"));
  } else {
    std::ostringstream os;
    if (r.determined) {
      os << "core: " << summary(r.core) << "\n";
    } else {
      os << "undetermined: " << r.reason << "\n";
    }
    for (const auto& s : r.trail) os << "  " << s << "\n";
    emit(g, os.str());
  }
  return r.determined ? kOk : kUndetermined;
}

int cmd_pieces(const Global& g, std::size_t list_limit) {
  const PreComplex x = load_complex(g.input);
  const PieceCatalogue cat(x);
  const std::size_t shown = std::min(cat.size(), list_limit);
  if (g.format == "json") {
    Json list = Json::array();
    for (std::size_t p = 0; p < shown; ++p) {
      list.push_back({{"id", p}, {"key", cat.key(p)}, {"vertex", cat.vertex(p)}, {"degree", to_json(cat.degree(p))},
                      {"curvature", to_json(cat.curvature(p))}});
    }
    emit(g, Json{{"version", kSchemaVersion}, {"count", cat.size()}, {"pieces", list}}.dump(2));
  } else {
    std::ostringstream os;
    os << cat.size() << " vertex pieces\n";
    for (std::size_t p = 0; p < shown; ++p) {
      os << "  " << p << " " << cat.key(p) << " deg " << cat.degree(p) << " tau " << cat.curvature(p) << "\n";
    }
    if (shown < cat.size()) os << "  ... (" << cat.size() - shown << " more)\n";
    emit(g, os.str());
  }
  return kOk;
}

int cmd_lp(const Global& g) {
  const PreComplex x = load_complex(g.input);
  const PieceCatalogue cat(x);
  const GluingSystem sys = build_system(cat, g.seed);
  const LPOutcome lp = solve(sys);
  if (g.format == "json") {
    Json j = to_json(lp);
    if (lp.status == LPStatus::Optimal) j["dual"] = dual_json(sys, lp);
    emit(g, j.dump(2));
  } else {
    std::ostringstream os;
    os << "system: " << lp.rows << " rows x " << lp.columns << " columns, presolved to " << lp.reduced_rows << " x "
       << lp.reduced_columns << "\n";
    os << "status: " << to_string(lp.status) << "\n";
    if (lp.status == LPStatus::Optimal) {
      os << "value: " << lp.value << " (" << lp.value.get_d() << ")\n";
      os << "pivots: " << lp.pivots << ", dual verified " << lp.dual_verified << ", primal verified "
         << lp.primal_verified << "\n";
      for (const auto& [p, u] : lp.integral) os << "  " << cat.key(static_cast<std::size_t>(p)) << " x " << u << "\n";
    }
    emit(g, os.str());
  }
  return kOk;
}

int status_exit(const Certificate& c) {
  if (!c.verified()) return kFailure;
  return c.status == CertificateStatus::NotUNIWitness ? kNotUni : kOk;
}

int cmd_certify(const Global& g) {
  const PreComplex x = load_complex(g.input);
  const PieceCatalogue cat(x);
  CertifyOptions opt;
  opt.permutation_seed = g.seed;
  const Certificate c = certify(cat, opt);
  if (g.format == "json") {
    const GluingSystem sys = build_system(cat, g.seed);
    emit(g, to_json(c, cat, &sys).dump(2));
  } else if (g.format == "dot" && c.witness) {
    emit(g, to_dot(c.witness->y().skeleton, "witness"));
  } else {
    std::ostringstream os;
    os << "status: " << to_string(c.status) << "\n";
    if (c.lp.status == LPStatus::Optimal) os << "value: " << c.lp.value << "\n";
    if (c.epsilon) os << "epsilon: " << *c.epsilon << " (" << c.epsilon->get_d() << ")\n";
    if (c.witness) {
      os << "witness: " << summary(c.witness->y()) << ", deg " << c.witness_degree << ", tau " << c.witness_curvature
         << "\n";
    }
    os << "verified: " << (c.verified() ? "yes" : "no") << "\n";
    emit(g, os.str());
  }
  return status_exit(c);
}

int cmd_enumerate(const Global& g, long rank, Id vertex_cap) {
  const PreComplex x = load_complex(g.input);
  const PieceCatalogue cat(x);
  const Certificate c = certify(cat, {});
  if (!c.epsilon) {
    std::cerr << "enumerate: no uniform negative immersion bound (status " << to_string(c.status) << ")\n";
    return c.status == CertificateStatus::VacuousUNI ? kOk : kNotUni;
  }
  const ImmersionSearch s = enumerate_irreducible_immersions(cat, rank, *c.epsilon, vertex_cap);
  if (g.format == "json") {
    Json list = Json::array();
    for (const auto& t : s.immersions) list.push_back(to_json(t.y()));
    emit(g, Json{{"version", kSchemaVersion},
                 {"epsilon", to_json(*c.epsilon)},
                 {"face_budget", s.face_budget},
                 {"vertex_budget", s.vertex_budget},
                 {"truncated", s.truncated},
                 {"immersions", list}}
                .dump(2));
  } else {
    std::ostringstream os;
    os << "epsilon " << *c.epsilon << ", face budget " << s.face_budget << ", vertex budget " << s.vertex_budget
       << (s.truncated ? " (capped)" : "") << "\n";
    os << s.immersions.size() << " irreducible immersion(s)\n";
    for (const auto& t : s.immersions) os << "  " << summary(t.y()) << "\n";
    emit(g, os.str());
  }
  return kOk;
}

int cmd_oracle(const Global& g, bool deduplicate) {
  const PreComplex x = load_complex(g.input);
  const PieceCatalogue cat(x);
  const LPOutcome lp = solve(build_system(cat));
  BoundReport r;
  if (lp.status == LPStatus::Optimal) r.lp_value = lp.value;
  OracleOptions opt;
  opt.budget = g.budget;
  opt.deduplicate = deduplicate;
  opt.visit = [&](const OracleTriple& t) {
    const Rational ratio = t.curvature / t.degree;
    if (!r.best || ratio > *r.best) r.best = ratio;
    if (lp.status != LPStatus::Optimal || ratio > lp.value) r.violations.push_back(r.triples);
    ++r.triples;
  };
  const OracleRun run = enumerate_triples(cat, opt);
  if (lp.status != LPStatus::Optimal) {
    const bool ok = r.triples == 0;
    emit(g, g.format == "json" ? Json{{"lp", "infeasible"}, {"triples", r.triples}, {"ok", ok}}.dump(2)
                               : std::string("lp infeasible; ") + std::to_string(r.triples) + " triples\n");
    return ok ? kOk : kFailure;
  }
  r.attained = r.best && *r.best == lp.value;
  if (g.format == "json") {
    Json j = to_json(r);
    j["multisets"] = run.multisets;
    j["matchings"] = run.matchings;
    j["deduplicated"] = deduplicate;
    j["truncated"] = run.truncated;
    emit(g, j.dump(2));
  } else {
    std::ostringstream os;
    os << "budget " << g.budget << ": " << r.triples << " triples, best ratio "
       << (r.best ? r.best->get_str() : std::string("none")) << ", lp value " << lp.value << ", attained "
       << r.attained << ", violations " << r.violations.size() << "\n";
    emit(g, os.str());
  }
  return r.ok() ? kOk : kFailure;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Curvature certificates for 2-complexes and presentations"};
  app.require_subcommand(1);
  app.fallthrough();
  Global g;
  std::uint64_t seed = 0;
  app.add_option("--format", g.format, "Output format")->check(CLI::IsMember({"json", "text", "dot"}));
  app.add_option("--budget", g.budget, "Vertex budget for oracle searches")->check(CLI::Range(1, 8));
  auto* seed_opt = app.add_option("--seed", seed, "Random seed (witness order, column permutation)");
  app.add_option("--out", g.out, "Write output to a file");

  const std::string input_help = "Presentation '<gens | relators>', a file holding one or a complex in JSON, or '-'";
  auto add = [&](const char* name, const char* help) {
    auto* sub = app.add_subcommand(name, help);
    sub->add_option("input", g.input, input_help);
    return sub;
  };
  auto* analyze = add("analyze", "Visible status and reducibility");
  auto* fold = add("fold", "Fold a map given as JSON (source, target, images) or a morphism");
  auto* reduce = add("reduce", "Irreducible core");
  auto* pieces = add("pieces", "Vertex piece catalogue");
  std::size_t list_limit = 50;
  pieces->add_option("--list", list_limit, "Number of pieces to list");
  auto* lp = add("lp", "Solve the curvature linear program");
  auto* cert = add("certify", "Certificate of uniform negative immersions, or a witness against");
  auto* enumerate = add("enumerate", "Irreducible immersions with bounded first Betti number");
  long rank = 2;
  Id vertex_cap = 6;
  enumerate->add_option("--rank", rank, "Bound on the first Betti number")->check(CLI::PositiveNumber);
  enumerate->add_option("--vertex-cap", vertex_cap, "Cap on the vertex budget of the search");
  auto* oracle = add("oracle-check", "Brute-force triples against the LP value");
  bool no_dedup = false;
  oracle->add_flag("--no-dedup", no_dedup, "Check every glued triple without isomorphism dedup (less memory)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kParse;
  }
  if (*seed_opt) g.seed = seed;

  try {
    if (analyze->parsed()) return cmd_analyze(g);
    if (fold->parsed()) return cmd_fold(g);
    if (reduce->parsed()) return cmd_reduce(g);
    if (pieces->parsed()) return cmd_pieces(g, list_limit);
    if (lp->parsed()) return cmd_lp(g);
    if (cert->parsed()) return cmd_certify(g);
    if (enumerate->parsed()) return cmd_enumerate(g, rank, vertex_cap);
    if (oracle->parsed()) return cmd_oracle(g, !no_dedup);
  } catch (const ParseError& e) {
    std::cerr << e.what() << "\n";
    return kParse;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kFailure;
  }
  return kFailure;
}
