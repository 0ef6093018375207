#include <gtest/gtest.h>

#include "support.hpp"

namespace unimm {
namespace {

using testing::load_complex;

PreComplex with_extra_vertex(PreComplex x, bool attach_edge) {
  const Id v = x.skeleton.add_vertex();
  if (attach_edge) x.skeleton.add_edge(0, v);
  return x;
}

TEST(Visible, ReductionConditionsInOrder) {
  const PreComplex torus = load_complex("torus.txt");
  EXPECT_EQ(visible_status(with_extra_vertex(torus, false)).status, Visible::PointComponent);
  EXPECT_EQ(visible_status(with_extra_vertex(torus, true)).status, Visible::Valence1);
  const VisibleVerdict disc = visible_status(load_complex("disc.txt"));
  EXPECT_EQ(disc.status, Visible::FreeFace);
  EXPECT_EQ(disc.edge, 0);
  EXPECT_TRUE(disc.reducible());
  const VisibleVerdict wedge = visible_status(presentation_complex("<a,b,c,d | a b a' b', c d c' d'>"));
  EXPECT_EQ(wedge.status, Visible::SeparatingVertex);
  EXPECT_EQ(visible_status(torus).status, Visible::Irreducible);
  EXPECT_EQ(visible_status(load_complex("projective_plane.txt")).status, Visible::Irreducible);
  EXPECT_EQ(visible_status(load_complex("surface.txt")).status, Visible::Irreducible);
}

TEST(Visible, TrivialGroupComplexIsVisiblyIrreducible) {
  const PreComplex x = load_complex("trivial_group.txt");
  EXPECT_EQ(visible_status(x).status, Visible::Irreducible);
  const LocalStructure ls = local_structure(x, 0);
  EXPECT_TRUE(ls.whitehead.connected());
  EXPECT_TRUE(ls.whitehead.cut_nodes().empty());
}

TEST(Unfold, SpectaclesUnfoldAtEitherVertexToATorus) {
  const PreComplex x = load_complex("spectacles.json");
  const VisibleVerdict v = visible_status(x);
  EXPECT_EQ(v.status, Visible::Unfoldable);
  EXPECT_FALSE(v.reducible());
  const auto ws = unfold_witnesses(x);
  std::set<Id> vertices;
  for (const auto& w : ws) vertices.insert(w.vertex);
  EXPECT_EQ(vertices, (std::set<Id>{0, 1}));
  const PreComplex torus = load_complex("torus.txt");
  for (const auto& w : ws) {
    const UnfoldResult r = unfold_step(x, w);
    EXPECT_NO_THROW(r.unfolded.validate());
    EXPECT_EQ(r.unfolded.vertex_count(), 3);
    EXPECT_EQ(r.unfolded.edge_count(), 4);
    EXPECT_EQ(euler_characteristic(r.unfolded), 0);
    EXPECT_EQ(visible_status(r.unfolded).status, Visible::Irreducible);
    EXPECT_EQ(h1_rank(r.unfolded), 2);
    // The fold back is an essential equivalence: face-equivalence onto X, folding to X itself.
    ASSERT_TRUE(r.fold.valid());
    EXPECT_TRUE(is_face_equivalence(r.fold));
    EXPECT_TRUE(is_face_essential(r.fold));
    EXPECT_TRUE(iso_test(folded_representative(r.fold).folded(), x));
    EXPECT_EQ(degree(r.fold).total, 1);
  }
}

TEST(Classify, FixtureResults) {
  EXPECT_EQ(classify(load_complex("trivial_group.txt")).result, Reducibility::Irreducible);
  EXPECT_EQ(classify(load_complex("torus.txt")).result, Reducibility::Irreducible);
  EXPECT_EQ(classify(load_complex("spectacles.json")).result, Reducibility::Irreducible);
  const Classification y = classify(load_complex("wise_y.txt"));
  EXPECT_EQ(y.result, Reducibility::Reducible);
  EXPECT_EQ(y.final_verdict.status, Visible::FreeFace);
  const Classification d = classify(load_complex("disc.txt"));
  EXPECT_EQ(d.result, Reducibility::Reducible);
  EXPECT_EQ(d.final_verdict.status, Visible::FreeFace);
}

TEST(Classify, AgreesAcrossWitnessOrders) {
  std::vector<std::string> names = testing::presentation_fixtures();
  names.push_back("spectacles.json");
  for (const auto& name : names) {
    const PreComplex x = load_complex(name);
    const Classification base = classify(x);
    EXPECT_LE(static_cast<Id>(base.trail.size()), base.step_bound) << name;
    for (std::uint64_t seed = 1; seed <= 8; ++seed) {
      const Classification c = classify(x, seed);
      EXPECT_EQ(c.result, base.result) << name << " seed " << seed;
      EXPECT_EQ(c.final_verdict.status, base.final_verdict.status) << name << " seed " << seed;
      EXPECT_EQ(c.trail.size(), base.trail.size()) << name << " seed " << seed;
      EXPECT_TRUE(c.to_input.valid()) << name;
      EXPECT_TRUE(is_face_equivalence(c.to_input)) << name;
    }
  }
}

TEST(Classify, InvariantUnderRelabelling) {
  const PreComplex x = load_complex("spectacles.json");
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const PreComplex y = testing::relabel(x, seed).target;
    const Classification c = classify(y, seed);
    EXPECT_EQ(c.result, Reducibility::Irreducible);
    EXPECT_EQ(euler_characteristic(c.unfolded), 0);
  }
}

TEST(Core, WedgeWithDiscCollapsesToTorus) {
  const CoreResult r = irreducible_core(load_complex("torus_wedge_disc.txt"));
  ASSERT_TRUE(r.determined) << r.reason;
  EXPECT_TRUE(iso_test(r.core, load_complex("torus.txt")));
  EXPECT_TRUE(r.map.valid());
  EXPECT_TRUE(is_branched_immersion(r.map));
  EXPECT_FALSE(r.trail.empty());
}

TEST(Core, SpectaclesCoreIsItsFoldedImage) {
  const PreComplex x = load_complex("spectacles.json");
  const CoreResult r = irreducible_core(x);
  ASSERT_TRUE(r.determined) << r.reason;
  EXPECT_TRUE(iso_test(r.core, x));
}

TEST(Core, AmbiguousWedgeIsReported) {
  const CoreResult r = irreducible_core(load_complex("undetermined_wedge.txt"));
  EXPECT_FALSE(r.determined);
  EXPECT_FALSE(r.reason.empty());
}

TEST(Core, DiscReducesToAPoint) {
  const CoreResult r = irreducible_core(load_complex("disc.txt"));
  EXPECT_FALSE(r.determined);
}

TEST(Homology, Ranks) {
  EXPECT_EQ(h1_rank(load_complex("torus.txt")), 2);
  EXPECT_EQ(h1_rank(load_complex("surface.txt")), 2);
  EXPECT_EQ(h1_rank(load_complex("disc.txt")), 0);
  EXPECT_EQ(h1_rank(load_complex("trivial_group.txt")), 0);
  // Relation matrix [[-1,2],[2,-1]] has determinant -3.
  EXPECT_FALSE(h1_trivial(load_complex("trivial_group.txt")));
  EXPECT_TRUE(h1_trivial(presentation_complex("<a,b | a b a' b^-2, b a b' a^-2>")));
  EXPECT_FALSE(h1_trivial(load_complex("projective_plane.txt")));
  EXPECT_TRUE(certified_simply_connected(load_complex("disc.txt")));
  EXPECT_FALSE(certified_simply_connected(load_complex("torus.txt")));
}

TEST(Collapse, FreeFaceRemovesOneFace) {
  const PreComplex x = load_complex("torus_wedge_disc.txt");
  const VisibleVerdict v = visible_status(x);
  ASSERT_EQ(v.status, Visible::FreeFace);
  const auto [sub, inc] = collapse_free_face(x, v.edge);
  EXPECT_EQ(face_count(sub), face_count(x) - 1);
  EXPECT_EQ(euler_characteristic(sub), euler_characteristic(x));
  EXPECT_TRUE(inc.valid());
  EXPECT_THROW(collapse_free_face(load_complex("torus.txt"), 0), Error);
}

}  // namespace
}  // namespace unimm
