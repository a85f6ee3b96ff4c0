// Acceptance runner: one PASS/FAIL line per criterion, exit status 0 only if
// every criterion passes.

#include <chrono>
#include <cstdio>
#include <functional>
#include <random>
#include <set>
#include <sstream>
#include <string>

#include "oracles.hpp"
#include "product_cases.hpp"
#include "tables.hpp"
#include "orthoforms/borcherds_weyl.hpp"
#include "orthoforms/classifier.hpp"
#include "orthoforms/root_systems.hpp"
#include "orthoforms/series.hpp"

using namespace orthoforms;

namespace {

// Wall-clock limits in seconds.
constexpr double kClassifyLimit = 10;
constexpr double kCoxeterLimit = 30;
constexpr double kBorcherdsLimit = 60;
constexpr double kJacobianLimit = 120;

// Criterion 5: rectangle and minimum number of datasets.
constexpr long kProductRect = 3;
constexpr std::size_t kMinDatasets = 5;

// Criterion 6: instance count and seed.
constexpr int kJacobianInstances = 100;
constexpr std::uint64_t kJacobianSeed = 20240611;

struct Outcome {
  bool pass = false;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

Outcome timed(double limit, const std::function<Outcome()>& body) {
  const auto t0 = Clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  const double dt = seconds_since(t0);
  std::ostringstream s;
  s << o.detail << (o.detail.empty() ? "" : "; ") << dt << " s (limit " << limit << " s)";
  if (dt >= limit) o.pass = false;
  return {o.pass, s.str()};
}

Outcome untimed(const std::function<Outcome()>& body) {
  try {
    return body();
  } catch (const std::exception& e) {
    return {false, std::string("exception: ") + e.what()};
  }
}

// ---- 1 -------------------------------------------------------------------------

Outcome classification() {
  const ClassificationReport report = full_table();
  std::set<oracle::Pair> got;
  for (const auto& r : report.accepted) got.emplace(r.lattice_label, group_name(*r.group));
  const bool same = got == oracle::expected_pairs() && report.accepted.size() == 26;
  std::ostringstream s;
  s << report.accepted.size() << " accepted, " << report.unresolved << " unresolved, "
    << (same ? "set matches" : "set differs");
  return {same && report.unresolved == 0, s.str()};
}

// ---- 2 -------------------------------------------------------------------------

Outcome coxeter_sweep() {
  std::size_t ok = 0, total = 0;
  std::string first_bad;
  for (const auto& c : oracle::coxeter_table()) {
    ++total;
    const auto comp = model_component(c.type, c.rank, c.d, c.profile, c.subcase);
    const DualSet dual = build_dual_set(comp);
    std::vector<std::pair<RatVector, bool>> set;
    for (const auto& e : dual) set.emplace_back(e.vector(), e.half_in_dual());
    const auto oracle_c = oracle::quadratic_constant(comp.lattice, oracle::q0_from_dual(set));
    const auto lib = verify_quadratic_identity(assemble_phi(comp.lattice, {dual}));
    const bool good = oracle_c && *oracle_c == c.expected && lib.C && *lib.C == c.expected &&
                      modified_coxeter(comp) == c.expected;
    if (good) ++ok;
    else if (first_bad.empty()) first_bad = oracle::describe(c);
  }
  std::ostringstream s;
  s << ok << "/" << total << " table entries";
  if (!first_bad.empty()) s << ", first mismatch " << first_bad;
  return {ok == total, s.str()};
}

// ---- 3 -------------------------------------------------------------------------

Outcome weight_equation() {
  const auto e8_3 = model_component(RootType::kE8, 8, 3, {3});
  const QZeroData phi3 = assemble_phi(e8_3.lattice, {build_dual_set(e8_3)});
  const Rational k3 = solve_weight(phi3);

  const auto e8 = model_component(RootType::kE8, 8, 1, {1});
  const QZeroData phi1 = assemble_phi(e8.lattice, {build_dual_set(e8)});
  const auto eq = verify_quadratic_identity(phi1);
  const Rational k1 = solve_weight(phi1);
  const WeylVector w = weyl_vector(phi1.with_weight(k1));
  const bool ok = k3 == 12 && eq.C && *eq.C == 30 && k1 == 252 && w.C == 30 && w.A == w.C + 1;
  std::ostringstream s;
  s << "E8(3) k=" << to_string(k3) << "; E8 C=" << (eq.C ? to_string(*eq.C) : "none")
    << " k=" << to_string(k1) << " A=" << to_string(w.A) << " C=" << to_string(w.C);
  return {ok, s.str()};
}

// ---- 4 -------------------------------------------------------------------------

Outcome ledger() {
  const Rational i_lhs(132), i_rhs = Rational(8 * 19 + 18);
  const Rational ii_lhs = Rational(12 + 60), ii_rhs = Rational(10 + 4 + 6 + 8 * 9);
  const Rational iii_lhs = Rational(57 - 9), iii_rhs = Rational(4 * 3 + 6 * 7);
  bool ok = i_lhs < i_rhs && ii_lhs < ii_rhs && iii_lhs < iii_rhs;
  std::size_t passed = 0;
  const auto checks = ledger_arithmetic_checks();
  for (const auto& c : checks) passed += c.passed;
  ok = ok && passed == checks.size();
  std::ostringstream s;
  s << to_string(i_lhs) << " < " << to_string(i_rhs) << ", " << to_string(ii_lhs) << " < "
    << to_string(ii_rhs) << ", " << to_string(iii_lhs) << " < " << to_string(iii_rhs)
    << "; library ledger " << passed << "/" << checks.size();
  return {ok, s.str()};
}

// ---- 5 -------------------------------------------------------------------------

Outcome borcherds() {
  std::size_t ok = 0, total = 0;
  bool e8 = false, empty = false;
  std::string bad;
  for (const auto& pc : oracle::product_cases()) {
    ++total;
    const auto res = oracle::check_log_derivative(pc, kProductRect, Axis::kOmega);
    if (res.equal) {
      ++ok;
      e8 = e8 || pc.name.rfind("E8", 0) == 0;
      empty = empty || pc.name.find("empty") != std::string::npos;
    } else if (bad.empty()) {
      bad = pc.name + ": " + res.detail;
    }
  }
  std::ostringstream s;
  s << ok << "/" << total << " datasets on rectangle (" << kProductRect << "," << kProductRect
    << ")";
  if (!bad.empty()) s << ", " << bad;
  return {ok == total && total >= kMinDatasets && e8 && empty, s.str()};
}

// ---- 6 -------------------------------------------------------------------------

Outcome jacobian_suite() {
  std::mt19937_64 rng(kJacobianSeed);
  std::uniform_int_distribution<int> weight(1, 12);
  int ok = 0, nonzero = 0;
  for (int i = 0; i < kJacobianInstances; ++i) {
    const std::size_t s = 1 + i % 2;
    const Lattice lat = builtin_lattice(s == 1 ? "A1" : "A2");
    const Region r = Region::rect(static_cast<long>(s + 2), static_cast<long>(s + 2));
    auto form = [&] {
      return WeightedSeries{oracle::random_jacobi_series(rng, lat, r, 6, 3), weight(rng)};
    };
    std::vector<WeightedSeries> f;
    for (std::size_t k = 0; k < s + 3; ++k) f.push_back(form());
    const auto j = jacobian(f);

    bool good = true;
    for (std::size_t a = 0; a + 1 < f.size(); ++a) {
      auto swapped = f;
      std::swap(swapped[a], swapped[a + 1]);
      good = good && jacobian(swapped) == scale(j, -1);
    }
    auto dup = f;
    dup[1] = f[0];
    good = good && jacobian(dup).is_zero();
    auto dep = f;
    dep[1] = {f[0].series * f[0].series, 2 * f[0].weight};
    good = good && jacobian(dep).is_zero();
    if (const auto lo = leading_order(j)) {
      ++nonzero;
      const long need = static_cast<long>(s + 1);
      good = good && lo->a >= need && lo->t >= need;
    }
    f.push_back(form());
    good = good && syzygy_check(f).is_zero();
    ok += good;
  }
  std::ostringstream s;
  s << ok << "/" << kJacobianInstances << " instances, " << nonzero << " with nonzero J";
  return {ok == kJacobianInstances && nonzero > 0, s.str()};
}

// ---- 7 -------------------------------------------------------------------------

Rational table_h(const std::string& name) {
  if (name.size() >= 3 && name.substr(name.size() - 2) == "A1") return 2;
  const long n = std::stol(name.substr(1));
  switch (name[0]) {
    case 'A': return n + 1;
    case 'D': return 2 * (n - 1);
    default: return n == 6 ? 12 : n == 7 ? 18 : 30;
  }
}

Outcome root_counts() {
  bool ok = true;
  std::ostringstream s;
  for (const auto& [name, want] :
       std::vector<std::pair<std::string, std::size_t>>{{"A2", 6}, {"D4", 24}, {"E8", 240}}) {
    const Lattice lat = builtin_lattice(name);
    const std::size_t brute = oracle::pruned_vectors(lat, 2).size();
    const std::size_t lib = detect_roots(lat, 2).roots.size();
    ok = ok && brute == want && lib == want;
    s << name << " " << brute << ", ";
  }
  std::size_t identities = 0;
  const auto names = builtin_names();
  for (const auto& name : names) {
    const Lattice lat = builtin_lattice(name);
    const std::size_t n = lat.rank();
    RatMatrix sum(n, n);
    for (const auto& r : oracle::pruned_vectors(lat, 2)) {
      const RatVector g = lat.pairings(r);
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = 0; k < n; ++k) sum(i, k) += g[i] * g[k];
    }
    if (sum == lat.gram_q().scaled(2 * table_h(name))) ++identities;
  }
  ok = ok && identities == names.size();
  s << "Coxeter identity " << identities << "/" << names.size() << " built-in lattices";
  return {ok, s.str()};
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria = {
      {1, "classification reproduction", [] { return timed(kClassifyLimit, classification); }},
      {2, "modified Coxeter oracle", [] { return timed(kCoxeterLimit, coxeter_sweep); }},
      {3, "weight equation", [] { return untimed(weight_equation); }},
      {4, "ledger arithmetic", [] { return untimed(ledger); }},
      {5, "Borcherds log-derivative oracle", [] { return timed(kBorcherdsLimit, borcherds); }},
      {6, "Jacobian property suite", [] { return timed(kJacobianLimit, jacobian_suite); }},
      {7, "root counts and Coxeter identity", [] { return untimed(root_counts); }},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    const Outcome o = c.run();
    std::printf("[%s] %d %s: %s\n", o.pass ? "PASS" : "FAIL", c.id, c.name, o.detail.c_str());
    std::fflush(stdout);
    failed += !o.pass;
  }
  return failed == 0 ? 0 : 1;
}
