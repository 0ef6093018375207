#include <gtest/gtest.h>

#include "support.hpp"

namespace unimm {
namespace {

using testing::load_complex;

void expect_round_trip(const PieceCatalogue& cat, const WeightVector& u, const std::string& what) {
  const FaceImmersionTriple t = reconstruct(cat, u);
  ASSERT_TRUE(t.valid()) << what;
  EXPECT_EQ(weight_vector(cat, t), u) << what;
  EXPECT_EQ(visible_status(t.y()).status, Visible::Irreducible) << what;
  const ComplexMorphism f = t.composite();
  EXPECT_TRUE(is_face_essential(f)) << what;
  Rational deg = 0, tau = 0;
  for (const auto& [p, k] : u) {
    deg += cat.degree(static_cast<std::size_t>(p)) * Rational(k);
    tau += cat.curvature(static_cast<std::size_t>(p)) * Rational(k);
  }
  EXPECT_EQ(degree(f).total, deg) << what;
  EXPECT_EQ(total_curvature(f), tau) << what;
}

TEST(Boundary, IdentityPiecesAreInTheKernel) {
  const PieceCatalogue cat(load_complex("torus.txt"));
  EXPECT_TRUE(in_kernel(cat, {{0, 1}}));
  EXPECT_TRUE(boundary_of(cat, {{0, 3}}).empty());
}

TEST(Reconstruct, TorusIdentityPiece) {
  const PreComplex x = load_complex("torus.txt");
  const PieceCatalogue cat(x);
  const FaceImmersionTriple t = reconstruct(cat, {{0, 1}});
  EXPECT_TRUE(iso_test(t.y(), x));
  EXPECT_TRUE(iso_test(t.z(), x));
  EXPECT_TRUE(is_immersion(t.composite()));
}

TEST(Reconstruct, DoubledPieceGivesDegreeTwo) {
  const PieceCatalogue cat(load_complex("surface.txt"));
  const FaceImmersionTriple t = reconstruct(cat, {{0, 2}});
  EXPECT_EQ(degree(t.composite()).total, 2);
  EXPECT_EQ(total_curvature(t.composite()), -2);
  EXPECT_NE(canonical_form_over(t.composite()), canonical_form_over(ComplexMorphism::identity(cat.complex())));
}

TEST(Reconstruct, RejectsInvalidVectors) {
  const PieceCatalogue cat(load_complex("trivial_group.txt"));
  // A single piece with nonzero boundary.
  const GluingSystem sys = build_system(cat);
  std::int64_t open = -1;
  for (std::size_t j = 0; j < sys.column_count() && open < 0; ++j) {
    for (const auto& e : sys.column(j)) {
      if (e.net() != 0) open = sys.piece_of[j];
    }
  }
  ASSERT_GE(open, 0);
  EXPECT_THROW(reconstruct(cat, {{open, 1}}), Error);
  EXPECT_THROW(reconstruct(cat, {{0, -1}}), Error);
  EXPECT_THROW(reconstruct(cat, {{static_cast<std::int64_t>(cat.size()), 1}}), Error);
}

TEST(Reconstruct, BoundedKernelPointsRoundTrip) {
  std::size_t total = 0;
  for (const char* text : {"<a,b | a b a' b'>", "<a,b,c | a^2 b^2 c^2>", "<a | a^3>", "<a,b | a^2 b^3>",
                           "<a,b | a^2, b^2>", "<a,b | a b^2 a b^-2>"}) {
    const PieceCatalogue cat(presentation_complex(text));
    const auto points = testing::bounded_kernel_points(build_system(cat), 2, 400);
    for (const auto& u : points) {
      EXPECT_TRUE(in_kernel(cat, u));
      expect_round_trip(cat, u, text);
    }
    total += points.size();
  }
  EXPECT_GE(total, 50u);
}

TEST(Reconstruct, AgreesWithSequentialGluing) {
  // The batch union-find reconstruction and one-edge-at-a-time gluing give the same map class when
  // fed the same matching.
  const PieceCatalogue cat(load_complex("trivial_group.txt"));
  OracleOptions opt;
  opt.budget = 2;
  const OracleRun run = enumerate_triples(cat, opt);
  std::set<std::vector<std::int64_t>> by_oracle;
  for (const auto& t : run.triples) by_oracle.insert(canonical_form_over(t.triple.composite()));
  std::size_t checked = 0;
  for (std::size_t i = 0; i < run.triples.size(); i += 10) {
    const auto& t = run.triples[i];
    const WeightVector u = testing::multiset_vector(t.pieces);
    const FaceImmersionTriple r = reconstruct(cat, u);
    if (components(r.z().skeleton).count != 1) continue;
    EXPECT_TRUE(by_oracle.count(canonical_form_over(r.composite()))) << "multiset of size " << t.pieces.size();
    ++checked;
  }
  EXPECT_GT(checked, 0u);
}

TEST(Certify, Torus) {
  const Certificate c = certify(load_complex("torus.txt"));
  EXPECT_EQ(c.status, CertificateStatus::NotUNIWitness);
  EXPECT_EQ(c.lp.value, 0);
  EXPECT_FALSE(c.epsilon);
  ASSERT_TRUE(c.witness);
  EXPECT_EQ(c.witness_degree, 1);
  EXPECT_EQ(c.witness_curvature, 0);
  EXPECT_TRUE(c.checks.face_essential);
  EXPECT_TRUE(c.verified());
}

TEST(Certify, Surface) {
  const Certificate c = certify(load_complex("surface.txt"));
  EXPECT_EQ(c.status, CertificateStatus::UNI);
  EXPECT_EQ(c.lp.value, -1);
  ASSERT_TRUE(c.epsilon);
  EXPECT_EQ(*c.epsilon, 1);
  EXPECT_TRUE(c.verified());
}

TEST(Certify, DiscIsVacuous) {
  const Certificate c = certify(load_complex("disc.txt"));
  EXPECT_EQ(c.status, CertificateStatus::VacuousUNI);
  EXPECT_FALSE(c.witness);
  EXPECT_TRUE(c.verified());
}

TEST(Certify, TrivialGroupWitnessAttainsTheValue) {
  const Certificate c = certify(load_complex("trivial_group.txt"));
  EXPECT_EQ(c.status, CertificateStatus::NotUNIWitness);
  EXPECT_EQ(c.lp.value, Rational(1, 2));
  EXPECT_TRUE(c.checks.all());
  ASSERT_TRUE(c.witness);
  EXPECT_EQ(c.witness_curvature / c.witness_degree, Rational(1, 2));
}

TEST(Certify, SkippingTheWitness) {
  CertifyOptions opt;
  opt.reconstruct_witness = false;
  const Certificate c = certify(load_complex("surface.txt"), opt);
  EXPECT_EQ(c.status, CertificateStatus::UNI);
  EXPECT_FALSE(c.witness);
  EXPECT_TRUE(c.checks.primal);
  EXPECT_TRUE(c.checks.dual);
}

}  // namespace
}  // namespace unimm
