#include <gtest/gtest.h>

#include <random>
#include <set>

#include "oracles.hpp"
#include "orthoforms/lattice.hpp"

using namespace orthoforms;

namespace {

Lattice a1() { return builtin_lattice("A1"); }
Lattice a2() { return builtin_lattice("A2"); }

RatVector rv(std::initializer_list<long> xs) {
  RatVector v;
  for (long x : xs) v.emplace_back(x);
  return v;
}

AmbientVector ambient(long e1, long e2, RatVector lambda, long f2, long f1) {
  return {e1, e2, std::move(lambda), f2, f1};
}

RatMatrix random_ambient_map(std::mt19937_64& rng, const Lattice& lat) {
  std::uniform_int_distribution<int> coef(-3, 3);
  RatVector a(lat.rank());
  for (auto& x : a) x = coef(rng);
  return eichler_transvection(ambient(0, 0, RatVector(lat.rank(), Rational(0)), 0, 1),
                              ambient(0, 0, a, 0, 0), lat);
}

}  // namespace

TEST(Lattice, RejectsAsymmetricGramNamingEntries) {
  IntMatrix g{{2, 1}, {0, 2}};
  try {
    Lattice::from_gram(g);
    FAIL() << "expected a validation error";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kValidation);
    EXPECT_NE(std::string(e.what()).find("(0,1)"), std::string::npos);
    EXPECT_NE(std::string(e.what()).find("(1,0)"), std::string::npos);
  }
}

TEST(Lattice, RejectsSingularGram) {
  EXPECT_THROW(Lattice::from_gram(IntMatrix{{2, 2}, {2, 2}}), Error);
}

TEST(Lattice, DualBasisExamples) {
  EXPECT_EQ(dual_basis(a1()), (RatMatrix{{Rational(1, 2)}}));
  EXPECT_EQ(dual_basis(a2()),
            (RatMatrix{{Rational(2, 3), Rational(1, 3)}, {Rational(1, 3), Rational(2, 3)}}));
  const Lattice id = Lattice::from_gram(IntMatrix::identity(3));
  EXPECT_EQ(dual_basis(id), RatMatrix::identity(3));
}

TEST(Lattice, DualBasisTimesGramIsIdentityForBuiltins) {
  for (const auto& name : builtin_names()) {
    const Lattice lat = builtin_lattice(name);
    EXPECT_EQ(dual_basis(lat) * lat.gram_q(), RatMatrix::identity(lat.rank())) << name;
  }
}

TEST(Lattice, DiscriminantGroupExamples) {
  const auto g1 = discriminant_group(a1());
  EXPECT_EQ(g1.elementary_divisors, std::vector<Integer>{2});
  EXPECT_EQ(g1.order, 2);
  const auto g2 = discriminant_group(a2());
  EXPECT_EQ(g2.elementary_divisors, std::vector<Integer>{3});
  EXPECT_EQ(g2.level, 3);
  const auto g8 = discriminant_group(builtin_lattice("E8"));
  EXPECT_TRUE(g8.elementary_divisors.empty());
  EXPECT_EQ(g8.order, 1);
  EXPECT_EQ(g8.level, 1);
}

TEST(Lattice, DiscriminantOrderMatchesCofactorDeterminant) {
  for (const auto& name : builtin_names()) {
    const Lattice lat = builtin_lattice(name);
    const Rational det = oracle::cofactor_det(lat.gram_q());
    EXPECT_EQ(det, Rational(lat.determinant())) << name;
    EXPECT_EQ(Rational(discriminant_group(lat).order), abs(det)) << name;
  }
}

TEST(Lattice, KnownDiscriminantGroups) {
  // D4: (Z/2)^2 level 2; D5: Z/4 level 8; E7: Z/2 level 4; 3A1: (Z/2)^3.
  EXPECT_EQ(discriminant_group(builtin_lattice("D4")).elementary_divisors,
            (std::vector<Integer>{2, 2}));
  EXPECT_EQ(discriminant_group(builtin_lattice("D4")).level, 2);
  EXPECT_EQ(discriminant_group(builtin_lattice("D5")).elementary_divisors,
            std::vector<Integer>{4});
  EXPECT_EQ(discriminant_group(builtin_lattice("D5")).level, 8);
  EXPECT_EQ(discriminant_group(builtin_lattice("E7")).level, 4);
  EXPECT_EQ(discriminant_group(builtin_lattice("3A1")).elementary_divisors,
            (std::vector<Integer>{2, 2, 2}));
}

TEST(Lattice, DivExamples) {
  EXPECT_EQ(div(rv({1}), a1()), 2);
  EXPECT_EQ(div(rv({1, 0}), a2()), 1);
  EXPECT_EQ(div(rv({2}), a1()), 4);
}

TEST(Lattice, DivIsLinearInScalar) {
  const Lattice e7 = builtin_lattice("E7");
  const RatVector v = rv({1, 0, 1, 1, 0, 0, 0});
  for (long k : {-3, -1, 2, 5}) {
    RatVector kv = v;
    for (auto& c : kv) c *= k;
    EXPECT_EQ(div(kv, e7), std::abs(k) * div(v, e7));
  }
}

TEST(Lattice, RescaleExamples) {
  EXPECT_EQ(rescale(a1(), 2).gram(), (IntMatrix{{4}}));
  EXPECT_EQ(rescale(a2(), -1).gram(), (IntMatrix{{-2, 1}, {1, -2}}));
  const Lattice d4 = builtin_lattice("D4");
  EXPECT_EQ(rescale(rescale(d4, 2), 3).gram(), rescale(d4, 6).gram());
}

TEST(Lattice, ShortVectorCounts) {
  const auto s1 = short_vectors(a1(), 2);
  ASSERT_EQ(s1.size(), 2u);
  EXPECT_EQ(s1[0].coords, rv({-1}));
  EXPECT_EQ(s1[1].coords, rv({1}));
  EXPECT_EQ(short_vectors(builtin_lattice("D4"), 2).size(), 24u);
  EXPECT_EQ(short_vectors(builtin_lattice("E8"), 2).size(), 240u);
}

TEST(Lattice, ShortVectorsMatchBoxEnumeration) {
  for (const char* name : {"A2", "A3", "D4", "2A1", "A2(3)", "E6"}) {
    const Lattice lat = builtin_lattice(name);
    for (long bound : {2, 4, 6}) {
      std::vector<RatVector> got;
      for (const auto& v : short_vectors(lat, bound)) got.push_back(v.coords);
      std::sort(got.begin(), got.end());
      EXPECT_EQ(got, oracle::box_vectors(lat, bound)) << name << " norm " << bound;
    }
  }
}

TEST(Lattice, ShortVectorsClosedUnderNegationWithoutDuplicates) {
  const auto vs = short_vectors(builtin_lattice("E7"), 4);
  std::set<RatVector> seen;
  for (const auto& v : vs) EXPECT_TRUE(seen.insert(v.coords).second);
  for (const auto& v : vs) {
    RatVector n = v.coords;
    for (auto& c : n) c = -c;
    EXPECT_TRUE(seen.count(n));
  }
}

TEST(Lattice, ForEachShortVectorAgreesWithList) {
  const Lattice e8 = builtin_lattice("E8");
  std::size_t count = 0;
  for_each_short_vector(e8, 4, [&](const std::vector<std::int64_t>&) { ++count; });
  // 240 roots plus 2160 vectors of norm 4.
  EXPECT_EQ(count, 2400u);
}

TEST(Lattice, ReflectionProperties) {
  const Lattice a = builtin_lattice("A3");
  const RatVector r = rv({1, 0, 0});
  RatVector neg = r;
  for (auto& c : neg) c = -c;
  EXPECT_EQ(reflect(r, r, a), neg);
  const RatVector orth = rv({0, 0, 1});  // alpha_3 is orthogonal to alpha_1
  EXPECT_EQ(reflect(orth, r, a), orth);

  std::mt19937_64 rng(7);
  std::uniform_int_distribution<int> c(-5, 5);
  for (int i = 0; i < 50; ++i) {
    RatVector x = rv({c(rng), c(rng), c(rng)});
    const RatVector y = reflect(x, r, a);
    EXPECT_EQ(reflect(y, r, a), x);
    EXPECT_EQ(a.norm(y), a.norm(x));
  }
}

TEST(Lattice, PositiveDefinitenessByPivots) {
  EXPECT_TRUE(is_positive_definite(builtin_lattice("E8")));
  EXPECT_FALSE(is_positive_definite(rescale(a2(), -1)));
  EXPECT_FALSE(is_positive_definite(Lattice::from_gram(IntMatrix{{0, 1}, {1, 0}})));
}

TEST(Lattice, ReflectivityExamples) {
  const auto r1 = is_reflective(ambient(0, 0, rv({1}), 1, 0), a1());
  EXPECT_TRUE(r1.reflective);
  EXPECT_EQ(r1.div, 1);
  EXPECT_EQ(r1.tag, ReflectiveCase::kDivEqualsD);
  const auto r2 = is_reflective(ambient(0, -1, rv({0}), 1, 0), a1());
  EXPECT_TRUE(r2.reflective);
  EXPECT_EQ(ambient_norm(ambient(0, -1, rv({0}), 1, 0), a1()), -2);
  // Norm -6 with div 2: the reflection would need div in {3, 6}.
  const Lattice l6 = builtin_lattice("A1(3)");
  const AmbientVector v = ambient(0, 0, rv({1}), 0, 0);
  EXPECT_EQ(ambient_norm(v, l6), -6);
  const AmbientVector w = ambient(2, 0, rv({1}), 0, 0);
  EXPECT_EQ(ambient_norm(w, l6), -6);
  EXPECT_FALSE(is_reflective(ambient(0, 2, rv({1}), 0, 0), l6).reflective);
}

TEST(Lattice, EichlerTransvectionIdentityAndInverse) {
  const Lattice d4 = builtin_lattice("D4");
  const AmbientVector c = ambient(0, 0, rv({0, 0, 0, 0}), 0, 1);
  const AmbientVector zero = ambient(0, 0, rv({0, 0, 0, 0}), 0, 0);
  EXPECT_EQ(eichler_transvection(c, zero, d4), RatMatrix::identity(8));
  const AmbientVector a = ambient(0, 0, rv({1, -1, 2, 0}), 0, 0);
  const AmbientVector na = ambient(0, 0, rv({-1, 1, -2, 0}), 0, 0);
  EXPECT_EQ(eichler_transvection(c, a, d4) * eichler_transvection(c, na, d4),
            RatMatrix::identity(8));
}

TEST(Lattice, EichlerTransvectionPreservesFormAndDiscriminant) {
  std::mt19937_64 rng(11);
  for (const char* name : {"A2", "D4", "E7", "3A1"}) {
    const Lattice lat = builtin_lattice(name);
    for (int i = 0; i < 20; ++i) {
      const RatMatrix g = random_ambient_map(rng, lat);
      EXPECT_TRUE(preserves_form(g, ambient_gram(lat))) << name;
      EXPECT_TRUE(acts_trivially_on_discriminant(g, ambient_gram(lat))) << name;
    }
  }
}

TEST(Lattice, BuiltinTableConventions) {
  EXPECT_EQ(builtin_lattice("A1").gram(), (IntMatrix{{2}}));
  EXPECT_EQ(builtin_lattice("3A1").gram(), IntMatrix::identity(3).scaled(2));
  EXPECT_EQ(builtin_lattice("E8(3)").gram(), builtin_lattice("E8").gram().scaled(3));
  EXPECT_THROW(builtin_lattice("F4"), Error);
  for (const auto& name : builtin_names()) {
    const Lattice lat = builtin_lattice(name);
    EXPECT_TRUE(lat.is_even()) << name;
    EXPECT_EQ(lat.gram(), lat.gram().transposed()) << name;
  }
}
