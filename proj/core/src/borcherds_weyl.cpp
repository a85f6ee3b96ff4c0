#include "orthoforms/borcherds_weyl.hpp"

#include <algorithm>
#include <set>

namespace orthoforms {

namespace {

RatVector negated(RatVector v) {
  for (auto& c : v) c = -c;
  return v;
}

RatVector scaled(RatVector v, const Rational& s) {
  for (auto& c : v) c *= s;
  return v;
}

bool is_zero(const RatVector& v) {
  return std::all_of(v.begin(), v.end(), [](const Rational& c) { return c == 0; });
}

std::string vec_str(const RatVector& v) {
  std::string s = "[";
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + to_string(v[i]);
  return s + "]";
}

}  // namespace

std::optional<Integer> JacobiCoefficients::get(long n, const RatVector& l,
                                               const Rational& norm) const {
  if (auto it = values.find({n, l}); it != values.end()) return it->second;
  if (norm_rule) return norm_rule(n, norm);
  if (n <= complete_through) return Integer(0);
  return std::nullopt;
}

Rational JacobiCoefficients::hyperbolic_floor(const Lattice& lat) const {
  Rational floor_norm = 0;
  if (min_hyperbolic_norm) floor_norm = *min_hyperbolic_norm;
  else if (norm_rule) fail("a coefficient rule needs a declared minimal hyperbolic norm");
  for (const auto& [key, val] : values)
    floor_norm = std::min(floor_norm, Rational(Rational(2 * key.first) - lat.norm(key.second)));
  return floor_norm;
}

void JacobiCoefficients::add(long n, const RatVector& l, const Integer& f) {
  if (l.size() != rank) fail("coefficient vector has wrong dimension");
  if (f == 0) return;
  auto& slot = values[{n, l}];
  slot += f;
  if (slot == 0) values.erase({n, l});
}

QZeroData::QZeroData(Lattice lattice, std::map<RatVector, Integer> q0, AffineWeight f00)
    : lattice_(std::move(lattice)), f00_(f00) {
  for (auto& [l, f] : q0) {
    if (l.size() != lattice_.rank())
      fail("coefficient vector " + vec_str(l) + " has wrong dimension");
    if (is_zero(l)) fail("f(0,0) is given by the weight, not the coefficient list");
    if (!lattice_.in_dual(l)) fail("vector " + vec_str(l) + " is not in the dual lattice");
    if (f != 0) q0_.emplace(l, f);
  }
  for (const auto& [l, f] : q0_) {
    auto it = q0_.find(negated(l));
    if (it == q0_.end() || it->second != f)
      fail("coefficients are not even: f(0," + vec_str(l) + ") != f(0,-l)");
  }
}

QZeroData QZeroData::with_weight(const Rational& k) const {
  return QZeroData(lattice_, q0_, AffineWeight::fixed(2 * k));
}

Rational QZeroData::weight() const {
  if (f00_.is_symbolic()) fail("weight is symbolic; solve for it first");
  return f00_.constant / 2;
}

JacobiCoefficients QZeroData::coefficients() const {
  if (f00_.is_symbolic()) fail("f(0,0) is symbolic; solve for the weight first");
  if (!is_integral(f00_.constant)) fail("f(0,0) must be an integer");
  JacobiCoefficients jc;
  jc.rank = lattice_.rank();
  jc.complete_through = 0;
  const RatVector zero(jc.rank, Rational(0));
  jc.add(-1, zero, 1);
  jc.add(0, zero, f00_.constant.get_num());
  for (const auto& [l, f] : q0_) jc.add(0, l, f);
  return jc;
}

bool is_positive(const RatVector& l, const Lattice& lat) {
  for (const auto& p : lat.pairings(l))
    if (p != 0) return p > 0;
  return false;
}

QZeroData assemble_phi(const Lattice& lat, const std::vector<DualSet>& dual_sets,
                       const AffineWeight& f00) {
  std::map<RatVector, bool> star;  // vector -> does x/2 lie in the dual lattice
  for (const auto& set : dual_sets)
    for (const auto& e : set) {
      RatVector x = e.vector();
      if (x.size() != lat.rank()) fail("dual set vector has wrong dimension");
      const bool half = e.half_in_dual();
      auto [it, inserted] = star.emplace(std::move(x), half);
      if (!inserted && it->second != half)
        fail("coefficient conflict at " + vec_str(it->first));
    }

  std::map<RatVector, Integer> q0;
  for (const auto& [x, half] : star) {
    if (!half) {
      if (!star.count(scaled(x, 2))) q0[x] += 1;
      continue;
    }
    q0[x] += 1;
    RatVector h = scaled(x, Rational(1, 2));
    if (!star.count(h)) q0[h] -= 1;
  }
  return QZeroData(lat, std::move(q0), f00);
}

WeylVector weyl_vector(const QZeroData& phi) {
  if (phi.f00().is_symbolic()) fail("Weyl vector needs a numeric f(0,0)");
  const Lattice& lat = phi.lattice();
  WeylVector w{phi.f00().constant, RatVector(lat.rank(), Rational(0)), 0};
  for (const auto& [l, f] : phi.q0()) {
    const Rational fq(f);
    w.A += fq;
    if (is_positive(l, lat))
      for (std::size_t i = 0; i < l.size(); ++i) w.B[i] += fq * l[i] / 2;
    w.C += fq * lat.norm(l);
  }
  w.A /= 24;
  w.C /= 2 * static_cast<long>(lat.rank());
  return w;
}

QuadraticIdentityResult verify_quadratic_identity(const QZeroData& phi) {
  const Lattice& lat = phi.lattice();
  const std::size_t n = lat.rank();
  RatMatrix lhs(n, n);
  for (const auto& [l, f] : phi.q0()) {
    const RatVector p = lat.pairings(l);
    const Rational fq(f);
    for (std::size_t i = 0; i < n; ++i) {
      if (p[i] == 0) continue;
      for (std::size_t j = 0; j < n; ++j) lhs(i, j) += fq * p[i] * p[j];
    }
  }
  const Rational c = lhs(0, 0) / (2 * lat.gram_q()(0, 0));
  if (lhs == lat.gram_q().scaled(2 * c)) return {c, {}};

  // Rank of the left side tells whether R(L) fails to span.
  std::size_t rank = 0;
  RatMatrix a = lhs;
  for (std::size_t col = 0; col < n && rank < n; ++col) {
    std::size_t p = rank;
    while (p < n && a(p, col) == 0) ++p;
    if (p == n) continue;
    for (std::size_t j = 0; j < n; ++j) std::swap(a(p, j), a(rank, j));
    for (std::size_t i = rank + 1; i < n; ++i) {
      const Rational f = a(i, col) / a(rank, col);
      for (std::size_t j = col; j < n; ++j) a(i, j) -= f * a(rank, j);
    }
    ++rank;
  }
  std::string why = "sum f(0,l)(Gl)(Gl)^T is not a multiple of the Gram matrix";
  if (rank < n)
    why += " (rank " + std::to_string(rank) + " < " + std::to_string(n) +
           ": the vectors do not span)";
  return {std::nullopt, why};
}

Rational solve_weight(const QZeroData& phi) {
  if (!phi.f00().is_symbolic()) fail("solve_weight needs a symbolic weight");
  const QuadraticIdentityResult eq = verify_quadratic_identity(phi);
  if (!eq.C) fail("cannot solve for the weight: " + eq.report);
  Rational others = 0;
  for (const auto& [l, f] : phi.q0()) others += Rational(f);
  const Rational f00 = 24 * (*eq.C + 1) - others;
  return (f00 - phi.f00().constant) / phi.f00().coeff;
}

MultiplicityResult divisor_multiplicity(const JacobiCoefficients& f,
                                        const AmbientVector& v, const Lattice& lat) {
  if (v.lambda.size() != lat.rank()) fail("ambient vector does not match lattice rank");
  for (const Rational* c : {&v.e1, &v.e2, &v.f2, &v.f1})
    if (!is_integral(*c)) fail("hyperbolic coordinates must be integral");
  if (!lat.in_dual(v.lambda)) fail("lattice part must lie in the dual lattice");
  const Rational nrm = ambient_norm(v, lat);
  if (nrm >= 0) fail("divisor multiplicity needs a vector of negative norm");
  {
    // Primitive in 2U + L^v(-1): no integer k > 1 with v/k in that lattice.
    Integer g = 0;
    for (const Rational* c : {&v.e1, &v.e2, &v.f2, &v.f1}) g = gcd(g, c->get_num());
    for (const auto& p : lat.pairings(v.lambda)) g = gcd(g, p.get_num());
    if (g != 1) fail("divisor multiplicity needs a primitive vector");
  }
  // Coefficients of a weak Jacobi form vanish below the smallest hyperbolic
  // norm 2n - (l,l) carried by a nonzero coefficient, which bounds d.
  const Rational floor_norm = f.hyperbolic_floor(lat);

  const Rational n = v.e1 * v.f1 + v.e2 * v.f2;
  MultiplicityResult res{0, {}};
  for (long d = 1; Rational(d * d) * nrm >= floor_norm; ++d) {
    const Rational nd = n * d * d;
    const RatVector ld = scaled(v.lambda, Rational(d));
    const long nn = nd.get_num().get_si();
    if (auto c = f.get(nn, ld, lat.norm(ld))) {
      res.multiplicity += *c;
    } else {
      res.unknown.emplace_back(nn, ld);
    }
  }
  return res;
}

MultiplicityResult divisor_multiplicity(const QZeroData& phi, const AmbientVector& v) {
  return divisor_multiplicity(phi.coefficients(), v, phi.lattice());
}

CharacterDatum character_datum(const JacobiCoefficients& f) {
  Integer D = 0;
  for (const auto& [key, val] : f.values)
    if (key.first < 0 && is_zero(key.second)) D += divisor_count(-key.first) * val;
  return {D, mpz_even_p(D.get_mpz_t()) ? 1 : -1};
}

CharacterDatum character_datum(const QZeroData& phi) {
  return character_datum(phi.coefficients());
}

}  // namespace orthoforms
