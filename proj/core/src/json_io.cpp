#include "orthoforms/json_io.hpp"

#include <fstream>
#include <sstream>

#include "orthoforms/datasets.hpp"

namespace orthoforms {

namespace {

const char* kind_name(Verdict v) {
  switch (v) {
    case Verdict::kAccepted: return "accepted";
    case Verdict::kExcluded: return "excluded";
    case Verdict::kUnresolved: return "unresolved";
  }
  return "unresolved";
}

Integer integer_from_json(const Json& j, const std::string& what) {
  const Rational r = rational_from_json(j, what);
  if (!is_integral(r)) fail(what + " must be an integer, got " + to_string(r));
  return r.get_num();
}

long long_from_json(const Json& j, const std::string& what) {
  if (!j.is_number_integer()) fail(what + " must be an integer");
  return j.get<long>();
}

const Json& require(const Json& j, const char* key, const std::string& where) {
  if (!j.is_object()) fail(where + " must be a JSON object");
  auto it = j.find(key);
  if (it == j.end()) fail(where + " is missing \"" + key + "\"");
  return *it;
}

Json check_values(const ArithmeticCheck& c) {
  Json v = Json::object();
  for (const auto& [k, val] : c.values) v[k] = val;
  return v;
}

}  // namespace

Json parse_json(const std::string& text, const std::string& source) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    std::size_t line = 1, col = 1;
    const std::size_t upto = std::min(e.byte == 0 ? 0 : e.byte - 1, text.size());
    for (std::size_t i = 0; i < upto; ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    fail(source + ": parse error at line " + std::to_string(line) + ", column " +
         std::to_string(col));
  }
}

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_json(buf.str(), path);
}

Rational rational_from_json(const Json& j, const std::string& what) {
  if (j.is_number_integer()) return Rational(Integer(std::to_string(j.get<long long>())));
  if (j.is_string()) {
    try {
      return parse_rational(j.get<std::string>());
    } catch (const Error&) {
      fail(what + ": cannot read \"" + j.get<std::string>() + "\" as a rational");
    }
  }
  fail(what + " must be an integer or a \"p/q\" string");
}

RatVector rat_vector_from_json(const Json& j, const std::string& what) {
  if (!j.is_array()) fail(what + " must be an array");
  RatVector v;
  for (std::size_t i = 0; i < j.size(); ++i)
    v.push_back(rational_from_json(j[i], what + "[" + std::to_string(i) + "]"));
  return v;
}

Json to_json(const Rational& r) { return to_string(r); }

Json to_json(const RatVector& v) {
  Json a = Json::array();
  for (const auto& x : v) a.push_back(to_string(x));
  return a;
}

Lattice lattice_from_json(const Json& j) {
  const Json& g = require(j, "gram", "lattice");
  if (!g.is_array() || g.empty()) fail("gram must be a non-empty array of rows");
  const std::size_t n = g.size();
  IntMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    if (!g[i].is_array() || g[i].size() != n)
      fail("gram row " + std::to_string(i) + " must have " + std::to_string(n) + " entries");
    for (std::size_t k = 0; k < n; ++k)
      m(i, k) = integer_from_json(
          g[i][k], "gram entry (" + std::to_string(i) + "," + std::to_string(k) + ")");
  }
  std::string label;
  if (auto it = j.find("label"); it != j.end()) {
    if (!it->is_string()) fail("lattice label must be a string");
    label = it->get<std::string>();
  }
  return Lattice::from_gram(std::move(m), label);
}

Json to_json(const Lattice& lat) {
  Json g = Json::array();
  for (std::size_t i = 0; i < lat.rank(); ++i) {
    Json row = Json::array();
    for (std::size_t k = 0; k < lat.rank(); ++k) row.push_back(lat.gram()(i, k).get_si());
    g.push_back(row);
  }
  return Json{{"label", lat.label()}, {"gram", g}};
}

Lattice load_lattice(const std::string& spec) {
  constexpr std::string_view prefix = "builtin:";
  if (spec.rfind(prefix, 0) == 0) return builtin_lattice(spec.substr(prefix.size()));
  return lattice_from_json(read_json_file(spec));
}

Json lattice_report(const Lattice& lat) {
  const DiscriminantGroup dg = discriminant_group(lat);
  Json divisors = Json::array();
  for (const auto& d : dg.elementary_divisors) divisors.push_back(d.get_str());
  return Json{{"label", lat.label()},
              {"rank", lat.rank()},
              {"determinant", lat.determinant().get_str()},
              {"even", lat.is_even()},
              {"positive_definite", is_positive_definite(lat)},
              {"discriminant_group", divisors},
              {"order", dg.order.get_str()},
              {"level", dg.level.get_str()}};
}

PhiData phi_from_json(const Json& j) {
  const Lattice lat = lattice_from_json(require(j, "lattice", "coefficient file"));
  AffineWeight f00 = AffineWeight::symbolic();
  if (auto it = j.find("k"); it != j.end()) {
    if (!(it->is_string() && it->get<std::string>() == "symbolic"))
      f00 = AffineWeight::fixed(2 * rational_from_json(*it, "k"));
  }
  std::map<RatVector, Integer> q0;
  JacobiCoefficients higher;
  higher.rank = lat.rank();
  if (auto it = j.find("complete_through"); it != j.end())
    higher.complete_through = long_from_json(*it, "complete_through");
  if (auto it = j.find("coeffs"); it != j.end()) {
    if (!it->is_array()) fail("coeffs must be an array");
    for (std::size_t i = 0; i < it->size(); ++i) {
      const Json& e = (*it)[i];
      const std::string where = "coeffs[" + std::to_string(i) + "]";
      const long n = long_from_json(require(e, "n", where), where + ".n");
      const RatVector l = rat_vector_from_json(require(e, "l", where), where + ".l");
      const Integer f = integer_from_json(require(e, "f", where), where + ".f");
      if (l.size() != lat.rank()) fail(where + ": vector has wrong dimension");
      const bool zero = std::all_of(l.begin(), l.end(), [](const Rational& c) { return c == 0; });
      if (n == -1 && zero) {
        if (f != 1) fail(where + ": f(-1,0) must be 1");
        continue;
      }
      if (n == 0 && zero) fail(where + ": f(0,0) is set through \"k\"");
      if (n == 0) {
        q0[l] += f;
      } else {
        if (!lat.in_dual(l)) fail(where + ": vector is not in the dual lattice");
        higher.add(n, l, f);
      }
    }
  }
  return {QZeroData(lat, std::move(q0), f00), std::move(higher)};
}

Json to_json(const PhiData& phi) {
  const auto& f00 = phi.layer.f00();
  Json coeffs = Json::array();
  for (const auto& [l, f] : phi.layer.q0())
    coeffs.push_back(Json{{"n", 0}, {"l", to_json(l)}, {"f", f.get_str()}});
  for (const auto& [key, f] : phi.higher.values)
    coeffs.push_back(Json{{"n", key.first}, {"l", to_json(key.second)}, {"f", f.get_str()}});
  Json out{{"lattice", to_json(phi.layer.lattice())}};
  out["k"] = f00.is_symbolic() ? Json("symbolic") : to_json(f00.constant / 2);
  out["coeffs"] = coeffs;
  out["complete_through"] = phi.higher.complete_through;
  return out;
}

PhiData load_phi(const std::string& spec) {
  if (spec == "builtin:E8") {
    // c(m) for m up to 40 covers every region the tools accept in practice.
    JacobiCoefficients higher = e8_weak_jacobi(40);
    return {e8_q0_layer(), std::move(higher)};
  }
  return phi_from_json(read_json_file(spec));
}

JacobiCoefficients full_coefficients(const PhiData& phi) {
  JacobiCoefficients jc = phi.layer.coefficients();
  for (const auto& [key, f] : phi.higher.values) jc.add(key.first, key.second, f);
  jc.complete_through = std::max(jc.complete_through, phi.higher.complete_through);
  jc.norm_rule = phi.higher.norm_rule;
  jc.min_hyperbolic_norm = phi.higher.min_hyperbolic_norm;
  return jc;
}

TruncatedSeries series_from_json(const Json& j) {
  const long rank = long_from_json(require(j, "rank", "series"), "rank");
  if (rank < 0) fail("series rank must be non-negative");
  long den = kDefaultDen;
  if (auto it = j.find("den"); it != j.end()) den = long_from_json(*it, "den");
  if (den <= 0) fail("den must be positive");
  const Json& rect = require(j, "rect", "series");
  if (!rect.is_array() || rect.size() != 2) fail("rect must be [a_max, t_max]");
  long skew = 0;
  if (auto it = j.find("skew"); it != j.end()) skew = long_from_json(*it, "skew");
  const Region region = Region::rect(rational_from_json(rect[0], "rect[0]"),
                                     rational_from_json(rect[1], "rect[1]"), skew);
  TruncatedSeries s(static_cast<std::size_t>(rank), region, den);
  if (auto it = j.find("prefactor"); it != j.end()) {
    Prefactor p;
    p.A = rational_from_json(require(*it, "A", "prefactor"), "prefactor.A");
    p.B = rat_vector_from_json(require(*it, "B", "prefactor"), "prefactor.B");
    p.C = rational_from_json(require(*it, "C", "prefactor"), "prefactor.C");
    s.set_prefactor(std::move(p));
  }
  if (auto it = j.find("terms"); it != j.end()) {
    if (!it->is_array()) fail("terms must be an array");
    for (std::size_t i = 0; i < it->size(); ++i) {
      const Json& t = (*it)[i];
      const std::string where = "terms[" + std::to_string(i) + "]";
      const RatVector l = rat_vector_from_json(require(t, "l", where), where + ".l");
      if (l.size() != static_cast<std::size_t>(rank)) fail(where + ": l has wrong dimension");
      s.add_term(rational_from_json(require(t, "a", where), where + ".a"), l,
                 rational_from_json(require(t, "t", where), where + ".t"),
                 rational_from_json(require(t, "c", where), where + ".c"));
    }
  }
  return s;
}

Json to_json(const TruncatedSeries& s) {
  Json terms = Json::array();
  for (const auto& [key, c] : s.sorted_terms()) {
    RatVector l;
    for (std::size_t i = 0; i < s.rank(); ++i) l.push_back(Rational(key[1 + i], 1) / s.den());
    terms.push_back(Json{{"a", to_json(Rational(key.front(), 1) / s.den())},
                         {"l", to_json(l)},
                         {"t", to_json(Rational(key.back(), 1) / s.den())},
                         {"c", to_json(c)}});
  }
  const Prefactor& p = s.prefactor();
  return Json{{"rank", s.rank()},
              {"den", s.den()},
              {"rect", Json::array({to_json(s.region().a_max()), to_json(s.region().t_max)})},
              {"skew", s.region().skew},
              {"prefactor", Json{{"A", to_json(p.A)}, {"B", to_json(p.B)}, {"C", to_json(p.C)}}},
              {"terms", terms}};
}

Json to_json(const WeylVector& w) {
  return Json{{"A", to_json(w.A)}, {"B", to_json(w.B)}, {"C", to_json(w.C)}};
}

Json component_report(const IrreducibleComponent& comp) {
  Json divs = Json::array();
  for (const auto& d : comp.div_profile) divs.push_back(d.get_str());
  Json out{{"label", comp.label()},
           {"type", type_name(comp.type)},
           {"rank", comp.rank},
           {"d", to_json(comp.d)},
           {"roots", comp.roots.size()},
           {"div_profile", divs},
           {"coxeter_number", coxeter_number(comp).get_str()},
           {"coxeter_identity", coxeter_identity_holds(comp)}};
  try {
    out["modified_coxeter"] = to_json(modified_coxeter(comp));
  } catch (const Error& e) {
    out["modified_coxeter"] = nullptr;
    out["note"] = e.what();
  }
  if (comp.subcase) out["subcase"] = subcase_name(*comp.subcase);
  return out;
}

Json to_json(const ClassificationReport& report) {
  Json accepted = Json::array();
  for (const auto& r : report.accepted)
    accepted.push_back(Json{{"lattice", r.lattice_label},
                            {"group", group_name(*r.group)},
                            {"candidate", r.candidate.label()},
                            {"h", to_json(*r.candidate.common_h)}});
  Json excluded = Json::array();
  for (const auto& r : report.excluded) {
    Json e{{"candidate", r.candidate.label()},
           {"verdict", kind_name(r.verdict)},
           {"reason", r.reason},
           {"citation", r.citation},
           {"evidence", *r.evidence == Evidence::kComputed ? "computed" : "cited"}};
    if (!r.checks.empty()) {
      Json check = Json::object();
      for (const auto& c : r.checks)
        for (const auto& [k, v] : c.values) check[k] = v;
      e["check"] = check;
    }
    excluded.push_back(e);
  }
  Json ledger = Json::array();
  for (const auto& c : report.ledger)
    ledger.push_back(Json{{"name", c.name},
                          {"statement", c.statement},
                          {"passed", c.passed},
                          {"values", check_values(c)}});
  return Json{{"max_rank", report.max_rank},
              {"partial", report.partial},
              {"accepted", accepted},
              {"excluded", excluded},
              {"unresolved", report.unresolved},
              {"ledger", ledger}};
}

}  // namespace orthoforms
