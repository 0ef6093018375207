#include <gtest/gtest.h>

#include "support.hpp"

namespace unimm {
namespace {

using testing::load_complex;
using testing::permutation_cover;

// Folds by merging any violating pair, scanning from the highest edge id down.
std::pair<Id, Id> naive_fold_counts(const PreGraphMorphism& f) {
  const PreGraph& g = f.source;
  std::vector<Id> vc(g.vertex_count), ec(g.edge_count());
  std::iota(vc.begin(), vc.end(), 0);
  std::iota(ec.begin(), ec.end(), 0);
  auto relabel = [](std::vector<Id>& cls, Id from, Id to) {
    for (Id& c : cls) {
      if (c == from) c = to;
    }
  };
  for (bool changed = true; changed;) {
    changed = false;
    for (Id e = g.edge_count() - 1; e >= 0 && !changed; --e) {
      for (Id d = e - 1; d >= 0 && !changed; --d) {
        if (ec[d] == ec[e] || f.map.edges[d] != f.map.edges[e]) continue;
        const bool same_iota = vc[g.iota[d]] == vc[g.iota[e]];
        const bool same_tau = vc[g.tau[d]] == vc[g.tau[e]];
        if (!same_iota && !same_tau) continue;
        relabel(ec, ec[e], ec[d]);
        const Id a = vc[g.iota[e]], b = vc[g.iota[d]];
        relabel(vc, a, b);
        const Id c = vc[g.tau[e]], t = vc[g.tau[d]];
        relabel(vc, c, t);
        changed = true;
      }
    }
  }
  std::set<Id> vs(vc.begin(), vc.end()), es(ec.begin(), ec.end());
  return {static_cast<Id>(vs.size()), static_cast<Id>(es.size())};
}

TEST(FoldGraph, FactorsTheMapThroughAnImmersion) {
  std::mt19937_64 rng(5);
  PreGraph rose;
  rose.add_vertex();
  rose.add_edge(0, 0);
  rose.add_edge(0, 0);
  for (int trial = 0; trial < 60; ++trial) {
    PreGraph g;
    g.vertex_count = 1 + trial % 5;
    std::uniform_int_distribution<Id> v(0, g.vertex_count - 1);
    for (int e = 0; e < 2 + trial % 6; ++e) g.add_edge(v(rng), v(rng));
    GraphMap m;
    m.vertices.assign(g.vertex_count, 0);
    for (Id e = 0; e < g.edge_count(); ++e) m.edges.push_back(static_cast<Id>(rng() % 2));
    const PreGraphMorphism f{g, rose, m};
    const GraphFolding gf = fold_graph(f);
    EXPECT_TRUE(gf.quotient.valid());
    EXPECT_TRUE(gf.immersion.valid());
    EXPECT_TRUE(is_immersion(gf.immersion));
    EXPECT_EQ(compose(gf.immersion.map, gf.quotient.map), f.map);
    const auto [nv, ne] = naive_fold_counts(f);
    EXPECT_EQ(gf.immersion.source.vertex_count, nv) << "trial " << trial;
    EXPECT_EQ(gf.immersion.source.edge_count(), ne) << "trial " << trial;
    EXPECT_EQ(static_cast<Id>(gf.folds.size()), g.edge_count() - ne);
  }
}

TEST(FoldGraph, ImmersionIsUnchanged) {
  const PreComplex x = load_complex("surface.txt");
  const auto gf = fold_graph(PreGraphMorphism::identity(x.skeleton));
  EXPECT_TRUE(gf.folds.empty());
  EXPECT_EQ(gf.immersion.source, x.skeleton);
}

TEST(Degree, WiseMapIsAnImmersionOfEulerCharacteristicZero) {
  const Json spec = Json::parse(testing::read_fixture("wise_map.json"));
  const Presentation src = parse_presentation(testing::read_fixture(spec["source"].get<std::string>()));
  const Presentation dst = parse_presentation(testing::read_fixture(spec["target"].get<std::string>()));
  std::vector<Word> images;
  for (const auto& g : src.generators) images.push_back(parse_word(spec["images"][g].get<std::string>(), dst.generators));
  const ComplexMorphism f = presentation_map(src, dst, images);
  ASSERT_TRUE(f.valid());
  EXPECT_TRUE(is_immersion(f));
  EXPECT_EQ(degree(f).total, 1);
  EXPECT_EQ(euler_characteristic(f.source), 0);
  EXPECT_EQ(total_curvature(f), 0);
  EXPECT_TRUE(is_face_essential(f));
}

TEST(Degree, CoversHaveDegreeSheetsTimesRelators) {
  const Presentation torus = parse_presentation("<a,b | a b a' b'>");
  // Abelian monodromy: a genuine covering.
  const ComplexMorphism cover = permutation_cover(torus, {{1, 0}, {0, 1}});
  ASSERT_TRUE(cover.valid());
  EXPECT_TRUE(is_immersion(cover));
  EXPECT_EQ(degree(cover).total, 2);
  EXPECT_EQ(euler_characteristic(cover.source), 0);
  EXPECT_EQ(total_curvature(cover), euler_characteristic(cover.source));
  // Non-commuting monodromy: some lift winds more than once, so only a branched immersion.
  const ComplexMorphism branched = permutation_cover(torus, {{1, 2, 0}, {1, 0, 2}});
  ASSERT_TRUE(branched.valid());
  const MapClass c = classify_map(branched);
  EXPECT_TRUE(c.branched_immersion);
  EXPECT_FALSE(c.immersion);
  EXPECT_EQ(degree(branched).total, 3);
  EXPECT_LT(face_count(branched.source), 3);
}

TEST(Degree, CurvatureEqualsEulerCharacteristicForImmersions) {
  const Presentation surface = parse_presentation("<a,b,c | a^2 b^2 c^2>");
  std::mt19937_64 rng(3);
  int immersions = 0;
  for (int trial = 0; trial < 30; ++trial) {
    const Id n = 2 + trial % 3;
    std::vector<std::vector<Id>> sigma(3);
    for (auto& s : sigma) s = testing::shuffled(n, rng);
    const ComplexMorphism f = permutation_cover(surface, sigma);
    ASSERT_TRUE(f.valid());
    EXPECT_TRUE(is_branched_immersion(f));
    EXPECT_EQ(degree(f).total, n);
    EXPECT_TRUE(is_face_essential(f));
    if (is_immersion(f)) {
      ++immersions;
      EXPECT_EQ(total_curvature(f), euler_characteristic(f.source));
    } else {
      EXPECT_GT(total_curvature(f), euler_characteristic(f.source));
    }
  }
  EXPECT_GT(immersions, 0);
}

TEST(FaceEssential, WedgeOfTwoTorusCopiesFoldsItsFacesTogether) {
  const Presentation src = parse_presentation("<a,b,c,d | a b a' b', c d c' d'>");
  const Presentation dst = parse_presentation("<a,b | a b a' b'>");
  std::vector<Word> images;
  for (const char* w : {"a", "b", "a", "b"}) images.push_back(parse_word(w, dst.generators));
  const ComplexMorphism f = presentation_map(src, dst, images);
  ASSERT_TRUE(f.valid());
  EXPECT_FALSE(is_face_essential(f));
  EXPECT_FALSE(face_immersion_of(f).has_value());
  const FoldedFactorization ff = folded_representative(f);
  EXPECT_TRUE(iso_test(ff.folded(), presentation_complex(dst)));
  EXPECT_TRUE(is_branched_immersion(ff.f1));
  EXPECT_EQ(compose(ff.f1, ff.f0).skeleton, f.skeleton);
}

TEST(FaceEssential, IdentityGivesTrivialTriple) {
  for (const auto& name : testing::presentation_fixtures()) {
    const PreComplex x = load_complex(name);
    const auto t = face_immersion_of(ComplexMorphism::identity(x));
    ASSERT_TRUE(t) << name;
    EXPECT_TRUE(t->valid()) << name;
    EXPECT_TRUE(iso_test(t->z(), x)) << name;
    EXPECT_EQ(total_curvature(t->composite()), euler_characteristic(x)) << name;
  }
}

TEST(FaceEssential, FoldedRepresentativeIsABranchedImmersion) {
  const Presentation torus = parse_presentation("<a,b | a b a' b'>");
  std::mt19937_64 rng(9);
  for (int trial = 0; trial < 20; ++trial) {
    const Id n = 2 + trial % 3;
    const ComplexMorphism cover = permutation_cover(torus, {testing::shuffled(n, rng), testing::shuffled(n, rng)});
    const FoldedFactorization ff = folded_representative(cover);
    EXPECT_TRUE(ff.f0.valid());
    EXPECT_TRUE(ff.f1.valid());
    EXPECT_TRUE(is_branched_immersion(ff.f1));
    EXPECT_TRUE(ff.folds.empty());
  }
}

}  // namespace
}  // namespace unimm
