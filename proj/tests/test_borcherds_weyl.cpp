#include <gtest/gtest.h>

#include "oracles.hpp"
#include "orthoforms/borcherds_weyl.hpp"
#include "orthoforms/datasets.hpp"

using namespace orthoforms;

namespace {

std::vector<DualSet> dual_sets_of(const Lattice& lat, long max_norm,
                                  std::optional<Subcase> subcase = {}) {
  std::vector<DualSet> out;
  for (auto comp : decompose(detect_roots(lat, max_norm))) {
    comp.subcase = subcase;
    out.push_back(build_dual_set(comp));
  }
  return out;
}

QZeroData phi_of(const Lattice& lat, long max_norm, std::optional<Subcase> subcase = {}) {
  return assemble_phi(lat, dual_sets_of(lat, max_norm, subcase));
}

AmbientVector ambient(long e1, long e2, RatVector lambda, long f2, long f1) {
  return {e1, e2, std::move(lambda), f2, f1};
}

RatVector zeros(std::size_t n) { return RatVector(n, Rational(0)); }

}  // namespace

TEST(BorcherdsWeyl, AssembleE8) {
  const QZeroData phi = phi_of(builtin_lattice("E8"), 2);
  EXPECT_EQ(phi.q0().size(), 240u);
  for (const auto& [l, f] : phi.q0()) EXPECT_EQ(f, 1);
  EXPECT_TRUE(phi.f00().is_symbolic());
  const auto all = phi.with_weight(252).coefficients();
  EXPECT_EQ(all.get(-1, zeros(8), 0), Integer(1));
  EXPECT_EQ(all.get(0, zeros(8), 0), Integer(504));
}

TEST(BorcherdsWeyl, AssembleA1SubcaseThree) {
  const QZeroData phi = phi_of(builtin_lattice("A1"), 2, Subcase::kIII);
  const std::map<RatVector, Integer> want{{{Rational(-1)}, 1},
                                          {{Rational(-1, 2)}, -1},
                                          {{Rational(1, 2)}, -1},
                                          {{Rational(1)}, 1}};
  EXPECT_EQ(phi.q0(), want);
}

TEST(BorcherdsWeyl, AssembleEmpty) {
  const QZeroData phi = assemble_phi(builtin_lattice("A2"), {});
  EXPECT_TRUE(phi.q0().empty());
  const auto all = phi.with_weight(12).coefficients();
  EXPECT_EQ(all.values.size(), 2u);
}

TEST(BorcherdsWeyl, WeylVectorExamples) {
  const WeylVector e8 = weyl_vector(phi_of(builtin_lattice("E8"), 2).with_weight(252));
  EXPECT_EQ(e8.A, 31);
  EXPECT_EQ(e8.C, 30);

  const WeylVector empty = weyl_vector(assemble_phi(builtin_lattice("A1"), {}).with_weight(12));
  EXPECT_EQ(empty.A, 1);
  EXPECT_EQ(empty.B, zeros(1));
  EXPECT_EQ(empty.C, 0);

  const QZeroData a1 = phi_of(builtin_lattice("A1"), 2, Subcase::kIII);
  const WeylVector w = weyl_vector(a1.with_weight(solve_weight(a1)));
  EXPECT_EQ(w.C, Rational(3, 2));
  EXPECT_THROW(weyl_vector(a1), Error);
}

TEST(BorcherdsWeyl, E8WeylVectorBIsAPositiveRootHalfSum) {
  const Lattice e8 = builtin_lattice("E8");
  const WeylVector w = weyl_vector(phi_of(e8, 2).with_weight(252));
  // rho has norm h (h + 1) rank / 12 = 30 * 31 * 8 / 12.
  EXPECT_EQ(e8.norm(w.B), 620);
  for (const auto& r : detect_roots(e8, 2).roots)
    if (is_positive(r.coords, e8)) EXPECT_GT(e8.pair(w.B, r.coords), 0);
}

TEST(BorcherdsWeyl, QuadraticIdentityExamples) {
  EXPECT_EQ(verify_quadratic_identity(phi_of(builtin_lattice("E8"), 2)).C, Rational(30));

  const Lattice a2 = builtin_lattice("A2");
  const QZeroData pair(a2, {{{Rational(1), Rational(0)}, 1}, {{Rational(-1), Rational(0)}, 1}},
                       AffineWeight::symbolic());
  const auto bad = verify_quadratic_identity(pair);
  EXPECT_FALSE(bad.C.has_value());
  EXPECT_NE(bad.report.find("rank 1 < 2"), std::string::npos);

  const auto g2 = model_component(RootType::kG2, 2, 1, {1, 3});
  EXPECT_EQ(verify_quadratic_identity(assemble_phi(g2.lattice, {build_dual_set(g2)})).C,
            Rational(4));
}

TEST(BorcherdsWeyl, SolveWeightExamples) {
  EXPECT_EQ(solve_weight(phi_of(builtin_lattice("E8(3)"), 6)), 12);
  EXPECT_EQ(verify_quadratic_identity(phi_of(builtin_lattice("E8(3)"), 6)).C, Rational(10));
  EXPECT_EQ(solve_weight(phi_of(builtin_lattice("E8"), 2)), 252);
  EXPECT_EQ(solve_weight(phi_of(builtin_lattice("A1"), 2, Subcase::kIII)), 30);
  const QZeroData pair(builtin_lattice("A2"),
                       {{{Rational(1), Rational(0)}, 1}, {{Rational(-1), Rational(0)}, 1}},
                       AffineWeight::symbolic());
  EXPECT_THROW(solve_weight(pair), Error);
}

// For every model component the identity constant equals modified_coxeter,
// the Weyl vector C agrees with it, and A = C + 1 once k is solved.
TEST(BorcherdsWeyl, WeylVectorAgreesWithModifiedCoxeterAcrossTable) {
  struct Case {
    RootType type;
    std::size_t rank;
    std::vector<Integer> profile;
    std::optional<Subcase> subcase;
  };
  std::vector<Case> cases;
  for (long d = 1; d <= 3; ++d) {
    const Integer D(d), D2(2 * d);
    for (std::size_t n = 1; n <= 8; ++n) cases.push_back({RootType::kA, n, {D}, {}});
    for (auto s : {Subcase::kI, Subcase::kII, Subcase::kIII}) {
      cases.push_back({RootType::kA, 1, {D2}, s});
      for (std::size_t n = 2; n <= 8; ++n) cases.push_back({RootType::kB, n, {D2, D2}, s});
    }
    for (std::size_t n = 2; n <= 8; ++n) cases.push_back({RootType::kB, n, {D, D2}, {}});
    for (std::size_t n = 3; n <= 8; ++n) cases.push_back({RootType::kC, n, {D, D2}, {}});
    for (std::size_t n = 4; n <= 8; ++n) cases.push_back({RootType::kD, n, {D}, {}});
    cases.push_back({RootType::kE6, 6, {D}, {}});
    cases.push_back({RootType::kE7, 7, {D}, {}});
    cases.push_back({RootType::kE8, 8, {D}, {}});
    cases.push_back({RootType::kG2, 2, {D, Integer(3 * d)}, {}});
    cases.push_back({RootType::kF4, 4, {D, D2}, {}});
    for (const auto& c : cases) {
      const auto comp = model_component(c.type, c.rank, D, c.profile, c.subcase);
      const QZeroData phi = assemble_phi(comp.lattice, {build_dual_set(comp)});
      const auto eq = verify_quadratic_identity(phi);
      ASSERT_TRUE(eq.C.has_value()) << comp.label();
      EXPECT_EQ(*eq.C, modified_coxeter(comp)) << comp.label();
      const WeylVector w = weyl_vector(phi.with_weight(solve_weight(phi)));
      EXPECT_EQ(w.C, *eq.C) << comp.label();
      EXPECT_EQ(w.A, w.C + 1) << comp.label();
      // 2B is an integral combination of dual vectors: it pairs integrally with L.
      RatVector twice = w.B;
      for (auto& x : twice) x *= 2;
      EXPECT_TRUE(comp.lattice.in_dual(twice)) << comp.label();
    }
    cases.clear();
  }
}

TEST(BorcherdsWeyl, QZeroDataRejectsOddCoefficients) {
  EXPECT_THROW(QZeroData(builtin_lattice("A2"), {{{Rational(1), Rational(0)}, 1}},
                         AffineWeight::symbolic()),
               Error);
}

TEST(BorcherdsWeyl, AssembleRejectsConflicts) {
  const Lattice a1 = builtin_lattice("A1");
  DualSet a{{{Rational(1)}, 2, 1}, {{Rational(-1)}, 2, 1}};
  DualSet b{{{Rational(1)}, 1, 1}, {{Rational(-1)}, 1, 1}};
  EXPECT_THROW(assemble_phi(a1, {a, b}), Error);
}

TEST(BorcherdsWeyl, DivisorMultiplicityExamples) {
  const Lattice e8 = builtin_lattice("E8");
  const QZeroData phi = phi_of(e8, 2).with_weight(252);
  EXPECT_EQ(divisor_multiplicity(phi, ambient(0, -1, zeros(8), 1, 0)).multiplicity, 1);
  const RatVector root = detect_roots(e8, 2).roots.front().coords;
  EXPECT_EQ(divisor_multiplicity(phi, ambient(0, 0, root, 1, 0)).multiplicity, 1);

  // (v,v) = -8 with zero lattice part: n = -4. Brute-force sum over d of
  // the genuine form's coefficients f(-4 d^2, 0).
  const JacobiCoefficients full = e8_weak_jacobi(10);
  const AmbientVector v = ambient(0, -4, zeros(8), 1, 0);
  EXPECT_EQ(ambient_norm(v, e8), -8);
  Integer brute = 0;
  for (long d = 1; d <= 10; ++d) brute += *full.get(-4 * d * d, zeros(8), 0);
  const auto m = divisor_multiplicity(full, v, e8);
  EXPECT_TRUE(m.unknown.empty());
  EXPECT_EQ(m.multiplicity, brute);
  EXPECT_EQ(m.multiplicity, 0);

  EXPECT_THROW(divisor_multiplicity(phi, ambient(0, 0, zeros(8), 0, 0)), Error);
  EXPECT_THROW(divisor_multiplicity(phi, ambient(0, -2, zeros(8), 2, 0)), Error);
}

TEST(BorcherdsWeyl, CharacterDatumExamples) {
  const auto std_shape = character_datum(phi_of(builtin_lattice("E8"), 2).with_weight(252));
  EXPECT_EQ(std_shape.D, 1);
  EXPECT_EQ(std_shape.chi_v, -1);

  JacobiCoefficients hyp;
  hyp.rank = 1;
  hyp.add(-4, zeros(1), 1);
  hyp.add(-1, zeros(1), 1);
  const auto h = character_datum(hyp);
  EXPECT_EQ(h.D, 4);
  EXPECT_EQ(h.chi_v, 1);

  JacobiCoefficients none;
  none.rank = 1;
  none.add(0, zeros(1), 24);
  EXPECT_EQ(character_datum(none).D, 0);
}

TEST(BorcherdsWeyl, PositivityOrderIsCompatibleWithNegation) {
  const Lattice e7 = builtin_lattice("E7");
  for (const auto& v : short_vectors(e7, 4)) {
    RatVector neg = v.coords;
    for (auto& c : neg) c = -c;
    EXPECT_NE(is_positive(v.coords, e7), is_positive(neg, e7));
  }
}

TEST(Datasets, EisensteinQuotientMatchesOracle) {
  const auto lib = e4_squared_over_delta(30);
  const auto ref = oracle::e4sq_over_delta(30);
  ASSERT_EQ(lib.size(), ref.size());
  EXPECT_EQ(lib, ref);
  EXPECT_EQ(lib[0], 1);
  EXPECT_EQ(lib[1], 504);
  EXPECT_EQ(lib[2], 73764);
}

TEST(Datasets, E8FormShapeAndMissingData) {
  const auto f = e8_weak_jacobi(5);
  EXPECT_EQ(f.get(-1, zeros(8), 0), Integer(1));
  EXPECT_EQ(f.get(0, zeros(8), 0), Integer(504));
  EXPECT_EQ(f.get(0, zeros(8), 2), Integer(1));
  EXPECT_EQ(f.get(1, zeros(8), 6), Integer(0));  // index -2, below the pole
  try {
    f.get(7, zeros(8), 0);
    FAIL() << "expected missing data";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kMissingData);
  }
  const QZeroData layer = e8_q0_layer();
  EXPECT_EQ(layer.weight(), 252);
  EXPECT_EQ(layer.q0().size(), 240u);
}
