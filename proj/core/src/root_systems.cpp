#include "orthoforms/root_systems.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>
#include <tuple>

namespace orthoforms {

namespace {

std::string scale_suffix(const Rational& s) {
  if (s == 1) return "";
  Rational c = s;
  c.canonicalize();
  return "(" + (is_integral(c) ? c.get_num().get_str() : to_string(c)) + ")";
}

std::size_t span_rank(const std::vector<RatVector>& vs) {
  if (vs.empty()) return 0;
  std::vector<RatVector> rows = vs;
  const std::size_t cols = rows[0].size();
  std::size_t rank = 0;
  for (std::size_t c = 0; c < cols && rank < rows.size(); ++c) {
    std::size_t p = rank;
    while (p < rows.size() && rows[p][c] == 0) ++p;
    if (p == rows.size()) continue;
    std::swap(rows[p], rows[rank]);
    for (std::size_t i = rank + 1; i < rows.size(); ++i) {
      if (rows[i][c] == 0) continue;
      const Rational f = rows[i][c] / rows[rank][c];
      for (std::size_t j = c; j < cols; ++j) rows[i][j] -= f * rows[rank][j];
    }
    ++rank;
  }
  return rank;
}

// Indices of a maximal linearly independent subfamily, greedily from the front.
std::vector<std::size_t> independent_subset(const std::vector<RatVector>& vs) {
  std::vector<std::size_t> picked;
  std::vector<RatVector> chosen;
  for (std::size_t i = 0; i < vs.size(); ++i) {
    chosen.push_back(vs[i]);
    if (span_rank(chosen) == chosen.size()) {
      picked.push_back(i);
    } else {
      chosen.pop_back();
    }
  }
  return picked;
}

bool is_primitive(const RatVector& v) {
  std::vector<Integer> z;
  for (const auto& c : v) z.push_back(c.get_num());
  return gcd_all(z) == 1;
}

Integer as_integer(const Rational& r, const char* what) {
  if (!is_integral(r)) fail(std::string(what) + " must be an integer");
  return r.get_num();
}

}  // namespace

bool IrreducibleComponent::simply_laced() const {
  return type == RootType::kA || type == RootType::kD || type == RootType::kE6 ||
         type == RootType::kE7 || type == RootType::kE8;
}

std::string type_name(RootType t) {
  switch (t) {
    case RootType::kA: return "A";
    case RootType::kB: return "B";
    case RootType::kC: return "C";
    case RootType::kD: return "D";
    case RootType::kE6: return "E6";
    case RootType::kE7: return "E7";
    case RootType::kE8: return "E8";
    case RootType::kF4: return "F4";
    case RootType::kG2: return "G2";
  }
  fail_internal("unknown root type");
}

std::string subcase_name(Subcase s) {
  switch (s) {
    case Subcase::kI: return "i";
    case Subcase::kII: return "ii";
    case Subcase::kIII: return "iii";
  }
  fail_internal("unknown subcase");
}

Subcase parse_subcase(std::string_view s) {
  if (s == "i") return Subcase::kI;
  if (s == "ii") return Subcase::kII;
  if (s == "iii") return Subcase::kIII;
  fail("unknown subcase '" + std::string(s) + "' (expected i, ii or iii)");
}

std::string IrreducibleComponent::label() const {
  std::string name = type_name(type);
  if (type == RootType::kA || type == RootType::kB || type == RootType::kC ||
      type == RootType::kD)
    name += std::to_string(rank);
  const bool doubled = type == RootType::kB || type == RootType::kF4;
  return name + scale_suffix(doubled ? Rational(2 * d) : d);
}

bool type_admits_rank(RootType type, std::size_t rank) {
  switch (type) {
    case RootType::kA: return rank >= 1;
    case RootType::kB: return rank >= 2;
    case RootType::kC: return rank >= 3;
    case RootType::kD: return rank >= 4;
    case RootType::kE6: return rank == 6;
    case RootType::kE7: return rank == 7;
    case RootType::kE8: return rank == 8;
    case RootType::kF4: return rank == 4;
    case RootType::kG2: return rank == 2;
  }
  return false;
}

RootDatum detect_roots(const Lattice& lat, const Rational& max_norm) {
  RootDatum rd{lat, {}, {}};
  for (auto& v : short_vectors(lat, max_norm)) {
    if (!is_primitive(v.coords)) continue;
    bool integral = true;
    for (const auto& p : lat.pairings(v.coords))
      if (!is_integral(2 * p / v.norm)) {
        integral = false;
        break;
      }
    if (!integral) continue;
    rd.divs.push_back(div(v.coords, lat));
    rd.roots.push_back(std::move(v));
  }
  return rd;
}

std::vector<IrreducibleComponent> decompose(const RootDatum& rd) {
  const std::size_t n = rd.roots.size();
  if (n == 0) fail("decompose needs a nonempty root set");
  std::vector<RatVector> gr;
  gr.reserve(n);
  for (const auto& r : rd.roots) gr.push_back(rd.lattice.pairings(r.coords));

  std::vector<std::size_t> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (find(i) != find(j) && dot(gr[i], rd.roots[j].coords) != 0)
        parent[find(i)] = find(j);

  std::map<std::size_t, std::vector<std::size_t>> groups;
  for (std::size_t i = 0; i < n; ++i) groups[find(i)].push_back(i);

  std::vector<IrreducibleComponent> out;
  for (const auto& [root, members] : groups) {
    IrreducibleComponent c{rd.lattice, RootType::kA, 0, 0, {}, {}, {}};
    std::map<Rational, std::vector<std::size_t>> by_norm;
    for (auto i : members) {
      c.roots.push_back(rd.roots[i].coords);
      by_norm[rd.roots[i].norm].push_back(i);
    }
    c.rank = span_rank(c.roots);
    const std::size_t count = members.size();
    const std::size_t r = c.rank;
    auto describe = [&] {
      std::string s = "rank " + std::to_string(r) + ", " + std::to_string(count) +
                      " roots, norms";
      for (const auto& [nrm, idx] : by_norm)
        s += " " + to_string(nrm) + " x" + std::to_string(idx.size());
      return "unrecognized root system: " + s;
    };
    if (by_norm.size() == 1) {
      if (count == r * (r + 1)) c.type = RootType::kA;
      else if (r >= 4 && count == 2 * r * (r - 1)) c.type = RootType::kD;
      else if (r == 6 && count == 72) c.type = RootType::kE6;
      else if (r == 7 && count == 126) c.type = RootType::kE7;
      else if (r == 8 && count == 240) c.type = RootType::kE8;
      else fail(describe());
    } else if (by_norm.size() == 2) {
      const Rational shortn = by_norm.begin()->first;
      const Rational longn = by_norm.rbegin()->first;
      const std::size_t ns = by_norm.begin()->second.size();
      const std::size_t nl = by_norm.rbegin()->second.size();
      if (longn == 2 * shortn) {
        if (r == 4 && ns == 24 && nl == 24) c.type = RootType::kF4;
        else if (count == 2 * r * r && ns == 2 * r) c.type = RootType::kB;
        else if (count == 2 * r * r && ns == 2 * r * (r - 1)) c.type = RootType::kC;
        else fail(describe());
      } else if (longn == 3 * shortn && r == 2 && ns == 6 && nl == 6) {
        c.type = RootType::kG2;
      } else {
        fail(describe());
      }
    } else {
      fail(describe());
    }
    c.d = by_norm.begin()->first / 2;
    for (const auto& [nrm, idx] : by_norm) {
      const Integer& dv = rd.divs[idx.front()];
      for (auto i : idx)
        if (rd.divs[i] != dv)
          fail_internal("roots of equal length with different div in one component");
      c.div_profile.push_back(dv);
    }
    std::sort(c.roots.begin(), c.roots.end());
    out.push_back(std::move(c));
  }
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    return std::tie(a.rank, a.type, a.d, a.roots) < std::tie(b.rank, b.type, b.d, b.roots);
  });
  return out;
}

Integer dual_coxeter_number(RootType type, std::size_t n) {
  const long r = static_cast<long>(n);
  switch (type) {
    case RootType::kA: return r + 1;
    case RootType::kB: return 2 * r - 1;
    case RootType::kC: return r + 1;
    case RootType::kD: return 2 * r - 2;
    case RootType::kE6: return 12;
    case RootType::kE7: return 18;
    case RootType::kE8: return 30;
    case RootType::kF4: return 9;
    case RootType::kG2: return 4;
  }
  fail_internal("unknown root type");
}

Rational coxeter_identity_constant(const IrreducibleComponent& comp) {
  if (comp.simply_laced()) {
    const Rational h(static_cast<long>(comp.roots.size() / comp.rank));
    return h * comp.d;
  }
  Rational long_norm = 0;
  for (const auto& r : comp.roots) long_norm = std::max(long_norm, comp.lattice.norm(r));
  return Rational(dual_coxeter_number(comp.type, comp.rank)) * long_norm / 2;
}

bool coxeter_identity_holds(const IrreducibleComponent& comp) {
  const Rational c = coxeter_identity_constant(comp);
  const auto basis_idx = independent_subset(comp.roots);
  std::vector<RatVector> gb;
  for (auto i : basis_idx) gb.push_back(comp.lattice.pairings(comp.roots[i]));
  const std::size_t k = gb.size();
  RatMatrix lhs(k, k);
  for (const auto& r : comp.roots) {
    RatVector p(k);
    for (std::size_t i = 0; i < k; ++i) p[i] = dot(gb[i], r);
    for (std::size_t i = 0; i < k; ++i)
      for (std::size_t j = 0; j < k; ++j) lhs(i, j) += p[i] * p[j];
  }
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < k; ++j)
      if (lhs(i, j) != 2 * c * dot(gb[i], comp.roots[basis_idx[j]])) return false;
  return true;
}

Integer coxeter_number(const IrreducibleComponent& comp) {
  if (comp.rank == 0 || comp.roots.size() % comp.rank != 0)
    fail_internal("root count is not a multiple of the rank");
  if (!coxeter_identity_holds(comp))
    fail_internal("Coxeter identity fails for " + comp.label());
  return Integer(static_cast<unsigned long>(comp.roots.size() / comp.rank));
}

namespace {

enum class ShortDiv { kD, kTwoD };

ShortDiv classify_short_div(const IrreducibleComponent& comp) {
  if (comp.div_profile.empty()) fail("component has no div profile");
  const Integer d = as_integer(comp.d, "rescaling d");
  if (comp.div_profile[0] == d) return ShortDiv::kD;
  if (comp.div_profile[0] == 2 * d) return ShortDiv::kTwoD;
  fail("inconsistent div profile: short-root div " + comp.div_profile[0].get_str() +
       " is neither d nor 2d for d = " + d.get_str());
}

Subcase require_subcase(const IrreducibleComponent& comp) {
  if (!comp.subcase) fail("subcase required for " + comp.label() + " with div 2d");
  return *comp.subcase;
}

}  // namespace

Rational modified_coxeter(const IrreducibleComponent& comp) {
  const Rational d = comp.d;
  const Rational n(static_cast<long>(comp.rank));
  switch (comp.type) {
    case RootType::kA:
      if (comp.rank >= 2) return (n + 1) / d;
      if (classify_short_div(comp) == ShortDiv::kD) return 2 / d;
      switch (require_subcase(comp)) {
        case Subcase::kI: return 1 / (2 * d);
        case Subcase::kII: return 2 / d;
        case Subcase::kIII: return 3 / (2 * d);
      }
      break;
    case RootType::kB:
      if (classify_short_div(comp) == ShortDiv::kD) return (n + 1) / d;
      switch (require_subcase(comp)) {
        case Subcase::kI: return (2 * n - 1) / (2 * d);
        case Subcase::kII: return (n + 1) / d;
        case Subcase::kIII: return (2 * n + 1) / (2 * d);
      }
      break;
    case RootType::kC: return (2 * n - 1) / d;
    case RootType::kD: return 2 * (n - 1) / d;
    case RootType::kE6: return 12 / d;
    case RootType::kE7: return 18 / d;
    case RootType::kE8: return 30 / d;
    case RootType::kG2: return 4 / d;
    case RootType::kF4: return 9 / d;
  }
  fail_internal("unhandled modified Coxeter case");
}

RatVector DualElement::vector() const {
  RatVector v = root;
  for (auto& c : v) c /= Rational(m);
  return v;
}

DualSet build_dual_set(const IrreducibleComponent& comp) {
  const Integer d = as_integer(comp.d, "rescaling d");
  const std::size_t classes = comp.simply_laced() ? 1 : 2;
  if (comp.div_profile.size() != classes)
    fail("div profile of " + comp.label() + " needs " + std::to_string(classes) +
         " entries");
  // A reflective root r has div(r) equal to (r,r)/2 or (r,r).
  const Integer ratio = comp.type == RootType::kG2 ? 3 : 2;
  for (std::size_t i = 0; i < classes; ++i) {
    const Integer half = i == 0 ? d : Integer(ratio * d);
    const Integer dv = comp.div_profile[i];
    if (dv != half && dv != 2 * half)
      fail("inconsistent div profile: div " + dv.get_str() + " is neither " +
           half.get_str() + " nor " + Integer(2 * half).get_str());
  }

  const Rational short_norm = 2 * comp.d;
  DualSet out;
  auto emit = [&](const RatVector& r, bool is_short, const Integer& m) {
    out.push_back({r, comp.div_profile[is_short ? 0 : 1], m});
  };
  for (const auto& r : comp.roots) {
    const bool is_short = comp.lattice.norm(r) == short_norm;
    switch (comp.type) {
      case RootType::kA:
        if (comp.rank >= 2 || classify_short_div(comp) == ShortDiv::kD) {
          emit(r, true, d);
          break;
        }
        switch (require_subcase(comp)) {
          case Subcase::kI: emit(r, true, 2 * d); break;
          case Subcase::kII: emit(r, true, d); emit(r, true, 2 * d); break;
          case Subcase::kIII: emit(r, true, d); break;
        }
        break;
      case RootType::kD:
      case RootType::kE6:
      case RootType::kE7:
      case RootType::kE8:
        emit(r, true, d);
        break;
      case RootType::kC:
      case RootType::kF4:
        emit(r, is_short, is_short ? d : Integer(2 * d));
        break;
      case RootType::kG2:
        emit(r, is_short, is_short ? d : Integer(3 * d));
        break;
      case RootType::kB:
        if (!is_short) {
          emit(r, false, 2 * d);
        } else if (classify_short_div(comp) == ShortDiv::kD) {
          emit(r, true, d);
        } else {
          switch (require_subcase(comp)) {
            case Subcase::kI: emit(r, true, 2 * d); break;
            case Subcase::kII: emit(r, true, d); emit(r, true, 2 * d); break;
            case Subcase::kIII: emit(r, true, d); break;
          }
        }
        break;
    }
  }
  return out;
}

IntMatrix simple_root_gram(RootType type, std::size_t n, const Integer& d) {
  if (!type_admits_rank(type, n))
    fail("type " + type_name(type) + " does not exist in rank " + std::to_string(n));
  if (d <= 0) fail("rescaling d must be positive");
  IntMatrix g(n, n);
  auto link = [&](std::size_t i, std::size_t j, const Integer& v) {
    g(i, j) = v;
    g(j, i) = v;
  };
  switch (type) {
    case RootType::kA:
    case RootType::kD:
    case RootType::kE6:
    case RootType::kE7:
    case RootType::kE8: {
      const Lattice base = builtin_lattice(
          type == RootType::kA ? "A" + std::to_string(n)
          : type == RootType::kD ? "D" + std::to_string(n)
                                 : type_name(type));
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) g(i, j) = base.gram()(i, j) * d;
      break;
    }
    case RootType::kB:  // long chain, short last
      for (std::size_t i = 0; i + 1 < n; ++i) g(i, i) = 4 * d;
      g(n - 1, n - 1) = 2 * d;
      for (std::size_t i = 0; i + 1 < n; ++i) link(i, i + 1, -2 * d);
      break;
    case RootType::kC:  // short chain, long last
      for (std::size_t i = 0; i + 1 < n; ++i) g(i, i) = 2 * d;
      g(n - 1, n - 1) = 4 * d;
      for (std::size_t i = 0; i + 2 < n; ++i) link(i, i + 1, -d);
      link(n - 2, n - 1, -2 * d);
      break;
    case RootType::kF4:
      g(0, 0) = g(1, 1) = 4 * d;
      g(2, 2) = g(3, 3) = 2 * d;
      link(0, 1, -2 * d);
      link(1, 2, -2 * d);
      link(2, 3, -d);
      break;
    case RootType::kG2:
      g(0, 0) = 2 * d;
      g(1, 1) = 6 * d;
      link(0, 1, -3 * d);
      break;
  }
  return g;
}

IrreducibleComponent model_component(RootType type, std::size_t n, const Integer& d,
                                     std::vector<Integer> div_profile,
                                     std::optional<Subcase> subcase) {
  IntMatrix g = simple_root_gram(type, n, d);
  // Close the simple roots under the simple reflections.
  std::set<IntVector> seen;
  std::vector<IntVector> queue;
  for (std::size_t i = 0; i < n; ++i) {
    IntVector e(n, 0);
    e[i] = 1;
    seen.insert(e);
    queue.push_back(e);
  }
  for (std::size_t head = 0; head < queue.size(); ++head) {
    const IntVector v = queue[head];
    for (std::size_t i = 0; i < n; ++i) {
      Integer p = 0;
      for (std::size_t j = 0; j < n; ++j) p += g(i, j) * v[j];
      const Integer coef = 2 * p / g(i, i);
      if (coef == 0) continue;
      IntVector w = v;
      w[i] -= coef;
      if (seen.insert(w).second) queue.push_back(w);
    }
  }
  IrreducibleComponent c{Lattice::from_gram(g, type_name(type) + std::to_string(n)), type, n, Rational(d), {}, std::move(div_profile),
                         subcase};
  for (const auto& v : seen) c.roots.push_back(to_rational(v));
  return c;
}

}  // namespace orthoforms
