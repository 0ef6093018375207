#include <gtest/gtest.h>

#include "support.hpp"

namespace unimm {
namespace {

using testing::load_complex;

OracleRun run_oracle(const PieceCatalogue& cat, Id budget) {
  OracleOptions opt;
  opt.budget = budget;
  return enumerate_triples(cat, opt);
}

void expect_identities(const PieceCatalogue& cat, const OracleRun& run, const std::string& what) {
  const GluingSystem sys = build_system(cat);
  std::set<EdgePiece> rows(sys.rows.begin(), sys.rows.end());
  for (const auto& t : run.triples) {
    ASSERT_TRUE(t.triple.valid()) << what;
    EXPECT_EQ(components(t.triple.z().skeleton).count, 1) << what;
    const WeightVector w = weight_vector(cat, t.triple);
    EXPECT_EQ(w, testing::multiset_vector(t.pieces)) << what;
    EXPECT_TRUE(in_kernel(cat, w)) << what;
    Rational deg = 0, tau = 0;
    for (const auto& [p, k] : w) {
      deg += cat.degree(static_cast<std::size_t>(p)) * Rational(k);
      tau += cat.curvature(static_cast<std::size_t>(p)) * Rational(k);
    }
    EXPECT_EQ(deg, t.degree) << what;
    EXPECT_EQ(tau, t.curvature) << what;
    for (Id e = 0; e < t.triple.z().edge_count(); ++e) {
      EXPECT_TRUE(rows.count(induced_edge_piece(t.triple, e))) << what;
    }
  }
}

TEST(Oracle, CountsOnSmallComplexes) {
  struct Case {
    const char* name;
    Id budget;
    std::size_t triples;
  };
  for (const Case& c : {Case{"torus.txt", 2, 4}, Case{"torus.txt", 3, 11}, Case{"surface.txt", 2, 8},
                        Case{"surface.txt", 3, 49}, Case{"projective_plane.txt", 3, 3}}) {
    const PieceCatalogue cat(load_complex(c.name));
    const OracleRun run = run_oracle(cat, c.budget);
    EXPECT_EQ(run.triples.size(), c.triples) << c.name << " budget " << c.budget;
    EXPECT_FALSE(run.truncated);
    expect_identities(cat, run, c.name);
  }
}

TEST(Oracle, TrivialGroupIdentities) {
  const PieceCatalogue cat(load_complex("trivial_group.txt"));
  const OracleRun one = run_oracle(cat, 1);
  EXPECT_EQ(one.triples.size(), 83u);
  expect_identities(cat, one, "budget 1");
  const OracleRun two = run_oracle(cat, 2);
  EXPECT_EQ(two.triples.size(), 8257u);
  OracleRun sample;
  for (std::size_t i = 0; i < two.triples.size(); i += 11) sample.triples.push_back(two.triples[i]);
  expect_identities(cat, sample, "budget 2");
}

TEST(Oracle, DisconnectedGluingsAreDropped) {
  const PieceCatalogue cat(load_complex("torus.txt"));
  const OracleRun run = run_oracle(cat, 2);
  // Two copies of the single piece glue either into one connected Z or two tori.
  EXPECT_GT(run.disconnected, 0u);
}

TEST(Oracle, VisitorSeesTheSameTriples) {
  const PieceCatalogue cat(load_complex("surface.txt"));
  const OracleRun stored = run_oracle(cat, 3);
  std::size_t seen = 0;
  OracleOptions opt;
  opt.budget = 3;
  opt.visit = [&](const OracleTriple&) { ++seen; };
  const OracleRun streamed = enumerate_triples(cat, opt);
  EXPECT_TRUE(streamed.triples.empty());
  EXPECT_EQ(seen, stored.triples.size());
  EXPECT_EQ(streamed.found, stored.found);
}

TEST(Bound, AttainedOnTheTorus) {
  const PieceCatalogue cat(load_complex("torus.txt"));
  const BoundReport r = check_bound(run_oracle(cat, 2), 0);
  EXPECT_TRUE(r.ok());
  EXPECT_TRUE(r.attained);
  const BoundReport s = check_bound(cat, 0, 2);
  EXPECT_EQ(s.triples, r.triples);
  EXPECT_TRUE(s.ok());
}

TEST(Bound, HoldsAgainstTheLPValue) {
  for (const char* name : {"surface.txt", "projective_plane.txt", "trivial_group.txt", "spectacles.json"}) {
    const PieceCatalogue cat(load_complex(name));
    const LPOutcome lp = solve(build_system(cat));
    ASSERT_EQ(lp.status, LPStatus::Optimal) << name;
    const BoundReport r = check_bound(cat, lp.value, 2);
    EXPECT_TRUE(r.ok()) << name;
    ASSERT_TRUE(r.best) << name;
    EXPECT_LE(*r.best, lp.value) << name;
  }
}

TEST(Bound, CorruptedValueIsCaught) {
  const PieceCatalogue cat(load_complex("trivial_group.txt"));
  const OracleRun run = run_oracle(cat, 2);
  const BoundReport honest = check_bound(run, Rational(1, 2));
  EXPECT_TRUE(honest.ok());
  EXPECT_TRUE(honest.attained);
  const BoundReport corrupted = check_bound(run, Rational(1, 2) - Rational(1, 1000));
  EXPECT_FALSE(corrupted.ok());
  EXPECT_FALSE(corrupted.attained);
}

TEST(Immersions, SurfaceWithinTheFaceBudget) {
  const PieceCatalogue cat(load_complex("surface.txt"));
  const ImmersionSearch s = enumerate_irreducible_immersions(cat, 2, 1);
  EXPECT_EQ(s.face_budget, 1);
  ASSERT_FALSE(s.immersions.empty());
  for (const auto& t : s.immersions) {
    const ComplexMorphism f = t.composite();
    EXPECT_TRUE(is_immersion(f));
    EXPECT_LE(h1_rank(t.y()), 2);
    EXPECT_LE(Rational(euler_characteristic(t.y())), -Rational(face_count(t.y())));
  }
}

TEST(Oracle, RejectsBadArguments) {
  const PieceCatalogue cat(load_complex("torus.txt"));
  EXPECT_THROW(run_oracle(cat, 0), Error);
  EXPECT_THROW(enumerate_irreducible_immersions(cat, 2, 0), Error);
  EXPECT_THROW(enumerate_irreducible_immersions(cat, 0, 1), Error);
}

}  // namespace
}  // namespace unimm
