#include <gtest/gtest.h>

#include <set>

#include "oracles.hpp"
#include "tables.hpp"
#include "orthoforms/root_systems.hpp"

using namespace orthoforms;

namespace {

using oracle::coxeter_table;
using oracle::describe;

IrreducibleComponent only_component(const Lattice& lat, long max_norm) {
  const auto comps = decompose(detect_roots(lat, max_norm));
  EXPECT_EQ(comps.size(), 1u);
  return comps.front();
}

}  // namespace

TEST(RootSystems, DetectRootsExamples) {
  EXPECT_EQ(detect_roots(builtin_lattice("A2"), 2).roots.size(), 6u);
  const auto d4 = detect_roots(builtin_lattice("D4"), 4);
  std::size_t n2 = 0, n4 = 0;
  for (const auto& r : d4.roots) (r.norm == 2 ? n2 : n4)++;
  EXPECT_EQ(n2, 24u);
  EXPECT_EQ(n4, 24u);
  const auto r6 = detect_roots(Lattice::from_gram(IntMatrix{{6}}), 6);
  ASSERT_EQ(r6.roots.size(), 2u);
  EXPECT_EQ(r6.roots[0].norm, 6);
}

TEST(RootSystems, DetectRootsMatchesPrunedEnumeration) {
  for (const char* name : {"A2", "A3", "D4", "3A1", "A2(2)", "E6", "D5"}) {
    const Lattice lat = builtin_lattice(name);
    for (long bound : {2, 4}) {
      std::vector<RatVector> got;
      for (const auto& r : detect_roots(lat, bound).roots) got.push_back(r.coords);
      std::sort(got.begin(), got.end());
      // Primitive reflective vectors only.
      std::vector<RatVector> want;
      for (auto& v : oracle::reflective_vectors(lat, bound)) {
        Integer g = 0;
        for (const auto& c : v) g = gcd(g, Integer(c.get_num()));
        if (g == 1) want.push_back(v);
      }
      EXPECT_EQ(got, want) << name << " up to norm " << bound;
    }
  }
}

TEST(RootSystems, DetectedSetIsStableUnderItsReflections) {
  for (const char* name : {"D4", "3A1", "E6"}) {
    const Lattice lat = builtin_lattice(name);
    const auto rd = detect_roots(lat, 4);
    std::set<RatVector> set;
    for (const auto& r : rd.roots) set.insert(r.coords);
    for (const auto& r : rd.roots)
      for (const auto& x : rd.roots) EXPECT_TRUE(set.count(reflect(x.coords, r.coords, lat))) << name;
  }
}

TEST(RootSystems, DecomposeExamples) {
  const auto two = decompose(detect_roots(builtin_lattice("2A1"), 2));
  ASSERT_EQ(two.size(), 2u);
  for (const auto& c : two) {
    EXPECT_EQ(c.type, RootType::kA);
    EXPECT_EQ(c.rank, 1u);
    EXPECT_EQ(c.d, 1);
  }
  const auto e8 = only_component(builtin_lattice("E8"), 2);
  EXPECT_EQ(e8.type, RootType::kE8);
  EXPECT_EQ(e8.roots.size(), 240u);

  const auto b3 = only_component(builtin_lattice("3A1"), 4);
  EXPECT_EQ(b3.type, RootType::kB);
  EXPECT_EQ(b3.rank, 3u);
  EXPECT_EQ(b3.roots.size(), 18u);
  EXPECT_EQ(b3.label(), "B3(2)");
  EXPECT_EQ(b3.div_profile, (std::vector<Integer>{2, 2}));

  const auto f4 = only_component(builtin_lattice("D4"), 4);
  EXPECT_EQ(f4.type, RootType::kF4);
  EXPECT_EQ(f4.label(), "F4(2)");
}

TEST(RootSystems, DecomposeIsAnOrthogonalPartition) {
  const Lattice lat = builtin_lattice("4A1");
  const auto rd = detect_roots(lat, 2);
  const auto comps = decompose(rd);
  std::size_t total = 0;
  for (const auto& c : comps) total += c.roots.size();
  EXPECT_EQ(total, rd.roots.size());
  for (std::size_t i = 0; i < comps.size(); ++i)
    for (std::size_t j = i + 1; j < comps.size(); ++j)
      for (const auto& a : comps[i].roots)
        for (const auto& b : comps[j].roots) EXPECT_EQ(lat.pair(a, b), 0);
}

TEST(RootSystems, UnrecognizedComponentIsAnError) {
  // Roots of A2 together with their doubles: 12 vectors of norms 2 and 8.
  RootDatum rd{builtin_lattice("A2"), {}, {}};
  for (const auto& v : short_vectors(rd.lattice, 8)) {
    if (v.norm != 2 && v.norm != 8) continue;
    rd.roots.push_back(v);
    rd.divs.push_back(div(v.coords, rd.lattice));
  }
  try {
    decompose(rd);
    FAIL() << "expected an error";
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("unrecognized root system"), std::string::npos);
  }
}

TEST(RootSystems, CoxeterNumberExamples) {
  EXPECT_EQ(coxeter_number(only_component(builtin_lattice("A2"), 2)), 3);
  EXPECT_EQ(coxeter_number(only_component(builtin_lattice("D4"), 2)), 6);
  EXPECT_EQ(coxeter_number(only_component(builtin_lattice("E8"), 2)), 30);
}

TEST(RootSystems, CoxeterIdentityOnEveryModelComponent) {
  for (const auto& c : coxeter_table()) {
    const auto comp = model_component(c.type, c.rank, c.d, c.profile, c.subcase);
    EXPECT_TRUE(coxeter_identity_holds(comp)) << describe(c);
  }
}

TEST(RootSystems, ModifiedCoxeterExamples) {
  EXPECT_EQ(modified_coxeter(model_component(RootType::kA, 1, 1, {2}, Subcase::kI)),
            Rational(1, 2));
  EXPECT_EQ(modified_coxeter(model_component(RootType::kB, 2, 1, {2, 2}, Subcase::kIII)),
            Rational(5, 2));
  EXPECT_EQ(modified_coxeter(model_component(RootType::kC, 3, 1, {1, 2})), 5);
}

TEST(RootSystems, SubcaseRequiredWhenAmbiguous) {
  try {
    modified_coxeter(model_component(RootType::kA, 1, 1, {2}));
    FAIL() << "expected an error";
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("subcase required"), std::string::npos);
  }
  EXPECT_THROW(build_dual_set(model_component(RootType::kB, 3, 2, {4, 4})), Error);
}

TEST(RootSystems, InconsistentDivProfileRejected) {
  EXPECT_THROW(build_dual_set(model_component(RootType::kA, 2, 2, {3})), Error);
  EXPECT_THROW(build_dual_set(model_component(RootType::kC, 3, 1, {1, 3})), Error);
}

TEST(RootSystems, DualSetExamples) {
  // C3(1): short roots r/1, long roots s/2, all of norm 2 or 1 -> a B3 shape.
  const auto c3 = build_dual_set(model_component(RootType::kC, 3, 1, {1, 2}));
  const auto c3c = model_component(RootType::kC, 3, 1, {1, 2});
  std::map<Rational, int> norms;
  for (const auto& e : c3) ++norms[c3c.lattice.norm(e.vector())];
  EXPECT_EQ(norms, (std::map<Rational, int>{{1, 6}, {2, 12}}));

  const auto g2c = model_component(RootType::kG2, 2, 1, {1, 3});
  std::map<Rational, int> gnorms;
  for (const auto& e : build_dual_set(g2c)) ++gnorms[g2c.lattice.norm(e.vector())];
  EXPECT_EQ(gnorms, (std::map<Rational, int>{{Rational(2, 3), 6}, {2, 6}}));

  const auto a1 = model_component(RootType::kA, 1, 1, {2}, Subcase::kII);
  std::map<Rational, int> anorms;
  for (const auto& e : build_dual_set(a1)) ++anorms[a1.lattice.norm(e.vector())];
  EXPECT_EQ(anorms, (std::map<Rational, int>{{Rational(1, 2), 2}, {2, 2}}));
}

// Table value versus an independent solve of the quadratic identity on the
// dual set, for every case at every admissible rank with d <= 3.
TEST(RootSystems, ModifiedCoxeterMatchesQuadraticIdentityOracle) {
  for (const auto& c : coxeter_table()) {
    const auto comp = model_component(c.type, c.rank, c.d, c.profile, c.subcase);
    EXPECT_EQ(modified_coxeter(comp), c.expected) << describe(c);
    std::vector<std::pair<RatVector, bool>> set;
    for (const auto& e : build_dual_set(comp))
      set.emplace_back(e.vector(), e.root_div % (2 * e.m) == 0);
    const auto cst = oracle::quadratic_constant(comp.lattice, oracle::q0_from_dual(set));
    ASSERT_TRUE(cst.has_value()) << describe(c);
    EXPECT_EQ(*cst, c.expected) << describe(c);
  }
}

TEST(RootSystems, ComponentLabels) {
  EXPECT_EQ(model_component(RootType::kE8, 8, 3, {3}).label(), "E8(3)");
  EXPECT_EQ(model_component(RootType::kA, 2, 1, {1}).label(), "A2");
  EXPECT_EQ(model_component(RootType::kF4, 4, 1, {1, 2}).label(), "F4(2)");
  EXPECT_EQ(parse_subcase("ii"), Subcase::kII);
  EXPECT_THROW(parse_subcase("iv"), Error);
}
