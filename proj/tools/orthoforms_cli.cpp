#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "orthoforms/borcherds_weyl.hpp"
#include "orthoforms/classifier.hpp"
#include "orthoforms/json_io.hpp"
#include "orthoforms/lattice.hpp"
#include "orthoforms/root_systems.hpp"
#include "orthoforms/series.hpp"

using namespace orthoforms;

namespace {

enum ExitCode { kOk = 0, kInternal = 1, kValidation = 2, kMissing = 3 };

struct Options {
  std::string format = "json";
  std::string output;
  std::string lattice_spec;
  std::string phi_spec;
  std::string rect;
  long den = kDefaultDen;
  std::size_t max_rank = 8;
  bool syzygy = false;
  std::string max_norm;
  std::string subcase;
  std::vector<long> weights;
  std::vector<long> specialize;
  std::vector<std::string> inputs;
  std::size_t max_terms = kDefaultMaxTerms;
};

bool as_table(const Options& o) {
  if (o.format != "json" && o.format != "table") fail("--format must be json or table");
  return o.format == "table";
}

void emit(const Options& o, const Json& j) {
  const std::string text = j.dump(2) + "\n";
  if (o.output.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(o.output);
  if (!out) fail("cannot write " + o.output);
  out << text;
}

std::pair<Rational, Rational> parse_rect(const std::string& s) {
  const auto comma = s.find(',');
  if (comma == std::string::npos) fail("--rect expects A,T");
  const Rational a = parse_rational(s.substr(0, comma));
  const Rational t = parse_rational(s.substr(comma + 1));
  if (a < 0 || t < 0) fail("--rect bounds must be non-negative");
  return {a, t};
}

std::string vec_text(const RatVector& v) {
  std::string s = "[";
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + to_string(v[i]);
  return s + "]";
}

// ---- lattice ------------------------------------------------------------------

int cmd_lattice(const Options& o) {
  const Lattice lat = load_lattice(o.lattice_spec);
  const Json rep = lattice_report(lat);
  if (!as_table(o)) {
    emit(o, rep);
    return kOk;
  }
  std::string groups;
  for (const auto& d : rep["discriminant_group"]) {
    if (!groups.empty()) groups += " x ";
    groups += "Z/" + d.get<std::string>();
  }
  std::cout << "label: " << lat.label() << "\n"
            << "rank: " << lat.rank() << "\n"
            << "determinant: " << lat.determinant().get_str() << "\n"
            << "even: " << (lat.is_even() ? "yes" : "no") << "\n"
            << "discriminant group: " << (groups.empty() ? "trivial" : groups) << "\n"
            << "level: " << rep["level"].get<std::string>() << "\n";
  return kOk;
}

// ---- roots --------------------------------------------------------------------

Rational default_root_norm(const Lattice& lat) {
  // A root r has r/div(r) in the dual lattice and (r,r) <= 2 div(r).
  const DiscriminantGroup dg = discriminant_group(lat);
  const Integer top = dg.elementary_divisors.empty() ? Integer(1) : dg.elementary_divisors.back();
  return Rational(2 * top);
}

int cmd_roots(const Options& o) {
  const Lattice lat = load_lattice(o.lattice_spec);
  const Rational max_norm = o.max_norm.empty() ? default_root_norm(lat) : parse_rational(o.max_norm);
  const RootDatum rd = detect_roots(lat, max_norm);
  std::vector<IrreducibleComponent> comps = decompose(rd);
  if (!o.subcase.empty())
    for (auto& c : comps) c.subcase = parse_subcase(o.subcase);
  Json list = Json::array();
  for (const auto& c : comps) list.push_back(component_report(c));
  if (!as_table(o)) {
    emit(o, Json{{"lattice", lat.label()}, {"roots", rd.roots.size()}, {"components", list}});
    return kOk;
  }
  std::cout << "roots: " << rd.roots.size() << "\n";
  for (const auto& c : list) {
    std::cout << c["label"].get<std::string>() << ": " << c["roots"].get<std::size_t>()
              << " roots, h = " << c["coxeter_number"].get<std::string>()
              << ", modified h = "
              << (c["modified_coxeter"].is_null() ? std::string("needs subcase")
                                                  : c["modified_coxeter"].get<std::string>())
              << "\n";
  }
  return kOk;
}

// ---- weyl ---------------------------------------------------------------------

QZeroData layer_from_lattice(const Options& o) {
  const Lattice lat = load_lattice(o.lattice_spec);
  const Rational max_norm = o.max_norm.empty() ? default_root_norm(lat) : parse_rational(o.max_norm);
  std::vector<IrreducibleComponent> comps = decompose(detect_roots(lat, max_norm));
  if (comps.empty()) fail("lattice has no roots");
  std::vector<DualSet> sets;
  for (auto& c : comps) {
    if (!o.subcase.empty()) c.subcase = parse_subcase(o.subcase);
    sets.push_back(build_dual_set(c));
  }
  return assemble_phi(lat, sets);
}

int cmd_weyl(const Options& o) {
  if (o.lattice_spec.empty() == o.phi_spec.empty())
    fail("weyl needs exactly one of a coefficient file or --lattice");
  QZeroData layer = o.phi_spec.empty() ? layer_from_lattice(o) : load_phi(o.phi_spec).layer;
  const QuadraticIdentityResult eq = verify_quadratic_identity(layer);
  if (layer.f00().is_symbolic()) layer = layer.with_weight(solve_weight(layer));
  const WeylVector w = weyl_vector(layer);
  const CharacterDatum ch = character_datum(layer);
  Json out{{"weight", to_json(layer.weight())},
           {"weyl", to_json(w)},
           {"identity_C", eq.C ? to_json(*eq.C) : Json(nullptr)},
           {"D", ch.D.get_str()},
           {"chi", ch.chi_v}};
  if (!eq.C) out["identity_report"] = eq.report;
  if (!as_table(o)) {
    emit(o, out);
    return kOk;
  }
  std::cout << "weight: " << to_string(layer.weight()) << "\n"
            << "A: " << to_string(w.A) << "\n"
            << "B: " << vec_text(w.B) << "\n"
            << "C: " << to_string(w.C) << "\n"
            << "D: " << ch.D.get_str() << ", chi: " << ch.chi_v << "\n";
  if (!eq.C) std::cout << "identity: " << eq.report << "\n";
  return kOk;
}

// ---- borch --------------------------------------------------------------------

int cmd_borch(const Options& o) {
  if (o.den <= 0) fail("--den must be positive");
  const auto [a_max, t_max] = parse_rect(o.rect);
  PhiData phi = load_phi(o.phi_spec);
  if (phi.layer.f00().is_symbolic()) phi.layer = phi.layer.with_weight(solve_weight(phi.layer));
  const WeylVector w = weyl_vector(phi.layer);
  const CharacterDatum ch = character_datum(phi.layer);
  BorchOptions opt;
  opt.den = o.den;
  opt.max_terms = o.max_terms;
  if (!o.specialize.empty()) {
    IntVector v;
    for (long x : o.specialize) v.emplace_back(x);
    opt.specialize = v;
  }
  const TruncatedSeries s =
      borch_expand(full_coefficients(phi), w, phi.layer.lattice(), a_max, t_max, opt);
  const Json series = to_json(s);
  Json summary{{"weight", to_json(phi.layer.weight())},
               {"weyl", to_json(w)},
               {"D", ch.D.get_str()},
               {"chi", ch.chi_v},
               {"terms", s.size()}};
  if (!o.output.empty()) {
    emit(o, series);
  } else if (!as_table(o)) {
    summary["series"] = series;
  }
  if (!as_table(o)) {
    std::cout << summary.dump(2) << "\n";
    return kOk;
  }
  std::cout << "weight: " << to_string(phi.layer.weight()) << "\n"
            << "A: " << to_string(w.A) << "\n"
            << "B: " << vec_text(w.B) << "\n"
            << "C: " << to_string(w.C) << "\n"
            << "D: " << ch.D.get_str() << ", chi: " << ch.chi_v << "\n"
            << "terms: " << s.size() << "\n";
  return kOk;
}

// ---- jacobian -----------------------------------------------------------------

int cmd_jacobian(const Options& o) {
  if (o.weights.size() != o.inputs.size())
    fail("--weights must give one weight per input series");
  std::vector<WeightedSeries> forms;
  for (std::size_t i = 0; i < o.inputs.size(); ++i)
    forms.push_back({series_from_json(read_json_file(o.inputs[i])), o.weights[i]});
  if (forms.empty()) fail("jacobian needs input series");
  const std::size_t s = forms.front().series.rank();
  const TruncatedSeries j = o.syzygy ? syzygy_check(forms) : jacobian(forms);
  const auto lo = leading_order(j);
  Json out{{"terms", j.size()}};
  const Rational target(static_cast<long>(s + 1));
  if (lo) {
    out["leading_order"] = Json{{"a", to_json(lo->a)}, {"t", to_json(lo->t)}};
    out["meets_bound"] = lo->a >= target && lo->t >= target;
  } else {
    out["leading_order"] = nullptr;
    out["vanishes"] = true;
  }
  if (!o.output.empty()) {
    std::ofstream f(o.output);
    if (!f) fail("cannot write " + o.output);
    f << to_json(j).dump(2) << "\n";
  } else if (!as_table(o)) {
    out["series"] = to_json(j);
  }
  if (!as_table(o)) {
    std::cout << out.dump(2) << "\n";
    return kOk;
  }
  if (!lo) {
    std::cout << "vanishes to rectangle order\n";
  } else {
    std::cout << "leading order: q^" << to_string(lo->a) << " xi^" << to_string(lo->t) << "\n"
              << "meets (" << s + 1 << ", " << s + 1 << "): "
              << ((lo->a >= target && lo->t >= target) ? "yes" : "no") << "\n";
  }
  std::cout << "terms: " << j.size() << "\n";
  return kOk;
}

// ---- classify -----------------------------------------------------------------

int cmd_classify(const Options& o) {
  const ClassificationReport report = full_table(o.max_rank);
  if (as_table(o)) {
    std::cout << render_table(report);
    return kOk;
  }
  emit(o, to_json(report));
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Orthogonal modular form toolkit"};
  app.require_subcommand(1);
  Options o;

  auto* lattice = app.add_subcommand("lattice", "Rank, determinant and discriminant group");
  lattice->add_option("lattice", o.lattice_spec, "Lattice file or builtin:NAME")->required();
  lattice->add_option("--format", o.format, "json or table");

  auto* roots = app.add_subcommand("roots", "Root system of a lattice");
  roots->add_option("lattice", o.lattice_spec, "Lattice file or builtin:NAME")->required();
  roots->add_option("--max-norm", o.max_norm, "Largest root norm to search");
  roots->add_option("--subcase", o.subcase, "i, ii or iii for components that need one");
  roots->add_option("--format", o.format, "json or table");

  auto* weyl = app.add_subcommand("weyl", "Weight and Weyl vector of the q^0 data");
  weyl->add_option("phi", o.phi_spec, "Coefficient file or builtin:E8");
  weyl->add_option("--lattice", o.lattice_spec, "Build the data from the roots of a lattice");
  weyl->add_option("--max-norm", o.max_norm, "Largest root norm to search");
  weyl->add_option("--subcase", o.subcase, "i, ii or iii for components that need one");
  weyl->add_option("--format", o.format, "json or table");

  auto* borch = app.add_subcommand("borch", "Truncated Borcherds product");
  borch->add_option("phi", o.phi_spec, "Coefficient file or builtin:E8")->required();
  borch->add_option("--rect", o.rect, "Truncation A,T")->required();
  borch->add_option("--den", o.den, "Exponent denominator");
  borch->add_option("--specialize", o.specialize, "Integral functional w; zeta^l -> y^(w.l)")
      ->delimiter(',');
  borch->add_option("--max-terms", o.max_terms, "Support cap");
  borch->add_option("-o,--output", o.output, "Write the series JSON here");
  borch->add_option("--format", o.format, "json or table");

  auto* jac = app.add_subcommand("jacobian", "Jacobian determinant of truncated series");
  jac->add_option("series", o.inputs, "Series files")->required();
  jac->add_option("--weights", o.weights, "Weights, one per series")->delimiter(',')->required();
  jac->add_flag("--syzygy", o.syzygy, "Evaluate the syzygy over s+4 forms");
  jac->add_option("-o,--output", o.output, "Write the result series here");
  jac->add_option("--format", o.format, "json or table");

  auto* classify = app.add_subcommand("classify", "Reflection groups with free algebras");
  classify->add_option("--max-rank", o.max_rank, "Largest lattice rank")->check(CLI::Range(1, 8));
  classify->add_option("--format", o.format, "json or table");
  classify->add_option("-o,--output", o.output, "Write the JSON report here");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kValidation;
  }
  if (classify->parsed() && classify->count("--format") == 0) o.format = "table";

  try {
    if (lattice->parsed()) return cmd_lattice(o);
    if (roots->parsed()) return cmd_roots(o);
    if (weyl->parsed()) return cmd_weyl(o);
    if (borch->parsed()) return cmd_borch(o);
    if (jac->parsed()) return cmd_jacobian(o);
    if (classify->parsed()) {
      const int rc = cmd_classify(o);
      return rc;
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    switch (e.kind()) {
      case ErrorKind::kInternal: return kInternal;
      case ErrorKind::kValidation: return kValidation;
      case ErrorKind::kMissingData: return kMissing;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInternal;
  }
  return kInternal;
}
