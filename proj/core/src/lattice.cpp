#include "orthoforms/lattice.hpp"

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <functional>
#include <numeric>

namespace orthoforms {

Lattice Lattice::from_gram(IntMatrix gram, std::string label) {
  if (!gram.square() || gram.rows() == 0)
    fail("Gram matrix must be square and nonempty");
  for (std::size_t i = 0; i < gram.rows(); ++i)
    for (std::size_t j = i + 1; j < gram.cols(); ++j)
      if (gram(i, j) != gram(j, i))
        fail("Gram matrix not symmetric at entries (" + std::to_string(i) +
             "," + std::to_string(j) + ") and (" + std::to_string(j) + "," +
             std::to_string(i) + ")");
  Lattice lat;
  lat.det_ = orthoforms::determinant(gram);
  if (lat.det_ == 0) fail("degenerate lattice: singular Gram matrix");
  lat.even_ = true;
  for (std::size_t i = 0; i < gram.rows(); ++i)
    if (gram(i, i) % 2 != 0) lat.even_ = false;
  lat.gram_q_ = to_rational(gram);
  lat.gram_ = std::move(gram);
  lat.label_ = std::move(label);
  return lat;
}

bool Lattice::in_dual(const RatVector& x) const {
  for (const auto& p : pairings(x))
    if (!is_integral(p)) return false;
  return true;
}

bool Lattice::in_lattice(const RatVector& x) const {
  return std::all_of(x.begin(), x.end(),
                     [](const Rational& c) { return is_integral(c); });
}

LatticeVector make_vector(const Lattice& lat, RatVector coords) {
  if (coords.size() != lat.rank()) fail("vector dimension does not match lattice rank");
  Rational n = lat.norm(coords);
  return {std::move(coords), std::move(n)};
}

RatVector AmbientVector::flat() const {
  RatVector v;
  v.reserve(lambda.size() + 4);
  v.push_back(e1);
  v.push_back(e2);
  v.insert(v.end(), lambda.begin(), lambda.end());
  v.push_back(f2);
  v.push_back(f1);
  return v;
}

AmbientVector AmbientVector::from_flat(const RatVector& v) {
  if (v.size() < 5) fail("ambient vector needs at least five coordinates");
  AmbientVector a;
  a.e1 = v[0];
  a.e2 = v[1];
  a.lambda.assign(v.begin() + 2, v.end() - 2);
  a.f2 = v[v.size() - 2];
  a.f1 = v[v.size() - 1];
  return a;
}

RatMatrix dual_basis(const Lattice& lat) { return inverse(lat.gram_q()); }

DiscriminantGroup discriminant_group(const Lattice& lat) {
  DiscriminantGroup g;
  for (auto& d : smith_invariants(lat.gram()))
    if (d > 1) g.elementary_divisors.push_back(d);
  g.order = abs(lat.determinant());
  Integer prod = 1;
  for (const auto& d : g.elementary_divisors) prod *= d;
  if (prod != g.order) fail_internal("Smith invariants disagree with |det|");

  // Level: N (x,x) in 2Z for x in L^v; on the dual basis this means
  // N (x_i,x_i)/2 and N (x_i,x_j) integral.
  const RatMatrix inv = dual_basis(lat);
  Integer level = 1;
  for (std::size_t i = 0; i < lat.rank(); ++i)
    for (std::size_t j = i; j < lat.rank(); ++j) {
      Rational v = (i == j) ? Rational(inv(i, i) / 2) : inv(i, j);
      v.canonicalize();
      level = lcm(level, v.get_den());
    }
  g.level = level;
  return g;
}

Integer div(const RatVector& v, const Lattice& lat) {
  if (!lat.in_lattice(v)) fail("div needs integral coordinates");
  std::vector<Integer> entries;
  for (const auto& p : lat.pairings(v)) entries.push_back(p.get_num());
  Integer g = gcd_all(entries);
  if (std::all_of(v.begin(), v.end(), [](const Rational& c) { return c == 0; }))
    fail("div of the zero vector");
  return g;
}

Lattice rescale(const Lattice& lat, const Integer& a) {
  if (a == 0) fail("rescaling factor must be nonzero");
  IntMatrix g = lat.gram();
  for (std::size_t i = 0; i < g.rows(); ++i)
    for (std::size_t j = 0; j < g.cols(); ++j) g(i, j) *= a;
  std::string label = lat.label().empty() ? std::string("L") : lat.label();
  return Lattice::from_gram(std::move(g), label + "(" + a.get_str() + ")");
}

Lattice direct_sum(const Lattice& a, const Lattice& b, std::string label) {
  const std::size_t n = a.rank(), m = b.rank();
  IntMatrix g(n + m, n + m);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) g(i, j) = a.gram()(i, j);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j) g(n + i, n + j) = b.gram()(i, j);
  if (label.empty()) label = a.label() + "+" + b.label();
  return Lattice::from_gram(std::move(g), std::move(label));
}

namespace {

// Upper-triangular completion of squares:
// Q(x) = sum_i q(i,i) (x_i + sum_{j>i} q(i,j) x_j)^2.
RatMatrix completed_squares(const RatMatrix& g) {
  const std::size_t n = g.rows();
  RatMatrix q(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    Rational d = g(i, i);
    for (std::size_t k = 0; k < i; ++k) d -= q(k, k) * q(k, i) * q(k, i);
    q(i, i) = d;
    for (std::size_t j = i + 1; j < n; ++j) {
      Rational s = g(i, j);
      for (std::size_t k = 0; k < i; ++k) s -= q(k, k) * q(k, i) * q(k, j);
      q(i, j) = (d == 0) ? Rational(0) : Rational(s / d);
    }
  }
  return q;
}

}  // namespace

std::vector<Rational> ldl_pivots(const Lattice& lat) {
  const RatMatrix q = completed_squares(lat.gram_q());
  std::vector<Rational> pivots;
  for (std::size_t i = 0; i < lat.rank(); ++i) {
    pivots.push_back(q(i, i));
    if (q(i, i) <= 0) break;
  }
  return pivots;
}

bool is_positive_definite(const Lattice& lat) {
  const auto p = ldl_pivots(lat);
  return p.size() == lat.rank() &&
         std::all_of(p.begin(), p.end(), [](const Rational& x) { return x > 0; });
}

void for_each_short_vector(
    const Lattice& lat, const Rational& max_norm,
    const std::function<void(const std::vector<std::int64_t>&)>& visit) {
  if (!is_positive_definite(lat))
    fail("short vector enumeration needs a positive definite lattice");
  if (max_norm <= 0) fail("max_norm must be positive");
  const std::size_t n = lat.rank();
  const RatMatrix q = completed_squares(lat.gram_q());

  std::vector<std::int64_t> x(n, 0);
  std::function<void(std::size_t, const Rational&)> descend =
      [&](std::size_t level, const Rational& budget) {
        const std::size_t i = level - 1;
        Rational center = 0;
        for (std::size_t j = i + 1; j < n; ++j)
          if (x[j] != 0) center -= q(i, j) * Rational(static_cast<long>(x[j]));
        const Rational radius2 = budget / q(i, i);
        Rational rest;
        auto fits = [&](std::int64_t v) {
          const Rational dev = Rational(static_cast<long>(v)) - center;
          const Rational used = dev * dev;
          if (used > radius2) return false;
          rest = budget - q(i, i) * used;
          return true;
        };
        auto step = [&](std::int64_t v) {
          x[i] = v;
          if (i > 0) {
            descend(i, rest);
          } else if (std::any_of(x.begin(), x.end(), [](std::int64_t c) { return c != 0; })) {
            visit(x);
          }
        };
        // Walk outward from the integer nearest to the center.
        const std::int64_t start = floor_of(center + Rational(1, 2)).get_si();
        for (std::int64_t v = start; fits(v); ++v) step(v);
        for (std::int64_t v = start - 1; fits(v); --v) step(v);
        x[i] = 0;
      };
  descend(n, max_norm);
}

std::vector<LatticeVector> short_vectors(const Lattice& lat,
                                         const Rational& max_norm) {
  std::vector<std::vector<std::int64_t>> found;
  for_each_short_vector(lat, max_norm,
                        [&](const std::vector<std::int64_t>& v) { found.push_back(v); });
  std::sort(found.begin(), found.end());
  std::vector<LatticeVector> out;
  out.reserve(found.size());
  for (const auto& v : found) {
    RatVector c;
    c.reserve(v.size());
    for (auto e : v) c.emplace_back(static_cast<long>(e));
    out.push_back(make_vector(lat, std::move(c)));
  }
  return out;
}

RatVector reflect(const RatVector& x, const RatVector& r, const Lattice& lat) {
  const Rational rr = lat.norm(r);
  if (rr == 0) fail("cannot reflect in an isotropic vector");
  const Rational coef = 2 * lat.pair(r, x) / rr;
  RatVector out = x;
  for (std::size_t i = 0; i < out.size(); ++i) out[i] -= coef * r[i];
  return out;
}

IntMatrix ambient_gram(const Lattice& lat) {
  const std::size_t n = lat.rank();
  IntMatrix g(n + 4, n + 4);
  const std::size_t last = n + 3;
  g(0, last) = g(last, 0) = 1;          // (e1, f1)
  g(1, last - 1) = g(last - 1, 1) = 1;  // (e2, f2)
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) g(2 + i, 2 + j) = -lat.gram()(i, j);
  return g;
}

Rational ambient_pair(const AmbientVector& x, const AmbientVector& y,
                      const Lattice& lat) {
  if (x.lambda.size() != lat.rank() || y.lambda.size() != lat.rank())
    fail("ambient vector does not match lattice rank");
  return x.e1 * y.f1 + x.f1 * y.e1 + x.e2 * y.f2 + x.f2 * y.e2 -
         lat.pair(x.lambda, y.lambda);
}

Rational ambient_norm(const AmbientVector& v, const Lattice& lat) {
  return ambient_pair(v, v, lat);
}

ReflectivityResult is_reflective(const AmbientVector& r, const Lattice& lat) {
  const RatVector flat = r.flat();
  if (flat.size() != lat.rank() + 4) fail("ambient vector does not match lattice rank");
  std::vector<Integer> coords;
  for (const auto& c : flat) {
    if (!is_integral(c)) fail("reflectivity test needs a vector of M");
    coords.push_back(c.get_num());
  }
  if (gcd_all(coords) != 1) fail("reflectivity test needs a primitive vector");
  const Rational nrm = ambient_norm(r, lat);
  if (nrm >= 0) fail("reflectivity test needs negative norm");

  const RatMatrix gm = to_rational(ambient_gram(lat));
  std::vector<Integer> pairings;
  for (const auto& p : gm.apply(flat)) pairings.push_back(p.get_num());

  ReflectivityResult res;
  res.div = gcd_all(pairings);
  res.half_norm = -nrm / 2;
  const Rational dv(res.div);
  if (dv == res.half_norm) {
    res.reflective = true;
    res.tag = ReflectiveCase::kDivEqualsD;
  } else if (dv == 2 * res.half_norm) {
    res.reflective = true;
    res.tag = ReflectiveCase::kDivEqualsTwoD;
  }
  return res;
}

RatMatrix eichler_transvection(const AmbientVector& c, const AmbientVector& a,
                               const Lattice& lat) {
  if (ambient_norm(c, lat) != 0) fail("Eichler transvection needs isotropic c");
  if (ambient_pair(c, a, lat) != 0) fail("Eichler transvection needs (c,a) = 0");
  const RatMatrix gm = to_rational(ambient_gram(lat));
  const RatVector cv = c.flat(), av = a.flat();
  const RatVector gc = gm.apply(cv), ga = gm.apply(av);
  const Rational half_aa = ambient_norm(a, lat) / 2;
  const std::size_t n = cv.size();
  // Column j is the image of the j-th basis vector.
  RatMatrix t = RatMatrix::identity(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      t(i, j) += -cv[i] * ga[j] + av[i] * gc[j] - half_aa * cv[i] * gc[j];
  return t;
}

bool preserves_form(const RatMatrix& g, const IntMatrix& gram) {
  const RatMatrix gq = to_rational(gram);
  return g.transposed() * gq * g == gq;
}

bool acts_trivially_on_discriminant(const RatMatrix& g, const IntMatrix& gram) {
  const RatMatrix dual = inverse(to_rational(gram));
  const RatMatrix moved = g * dual;
  for (std::size_t i = 0; i < dual.rows(); ++i)
    for (std::size_t j = 0; j < dual.cols(); ++j)
      if (!is_integral(moved(i, j) - dual(i, j))) return false;
  return true;
}

namespace {

IntMatrix cartan_from_edges(std::size_t n,
                            const std::vector<std::pair<int, int>>& edges) {
  IntMatrix g(n, n);
  for (std::size_t i = 0; i < n; ++i) g(i, i) = 2;
  for (auto [a, b] : edges) {
    g(a, b) = -1;
    g(b, a) = -1;
  }
  return g;
}

IntMatrix gram_a(std::size_t n) {
  std::vector<std::pair<int, int>> e;
  for (std::size_t i = 0; i + 1 < n; ++i) e.emplace_back(i, i + 1);
  return cartan_from_edges(n, e);
}

IntMatrix gram_d(std::size_t n) {
  std::vector<std::pair<int, int>> e;
  for (std::size_t i = 0; i + 2 < n; ++i) e.emplace_back(i, i + 1);
  e.emplace_back(static_cast<int>(n) - 3, static_cast<int>(n) - 1);
  return cartan_from_edges(n, e);
}

// Bourbaki numbering: 1-3-4-5-...-n with 2 attached to 4 (zero based below).
IntMatrix gram_e(std::size_t n) {
  std::vector<std::pair<int, int>> e = {{0, 2}, {1, 3}, {2, 3}};
  for (std::size_t i = 3; i + 1 < n; ++i) e.emplace_back(i, i + 1);
  return cartan_from_edges(n, e);
}

}  // namespace

Lattice builtin_lattice(std::string_view name) {
  std::string base(name);
  Integer scale = 1;
  if (const auto open = base.find('('); open != std::string::npos) {
    if (base.back() != ')') fail("malformed built-in lattice name '" + std::string(name) + "'");
    const std::string s = base.substr(open + 1, base.size() - open - 2);
    if (s.empty() || !std::all_of(s.begin(), s.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); }))
      fail("malformed rescaling in '" + std::string(name) + "'");
    scale = Integer(s);
    base = base.substr(0, open);
  }
  auto number = [&](std::size_t from) -> int {
    const std::string digits = base.substr(from);
    if (digits.empty() || digits.size() > 2 ||
        !std::all_of(digits.begin(), digits.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); }))
      fail("unknown built-in lattice '" + std::string(name) + "'");
    return std::stoi(digits);
  };

  IntMatrix g;
  if (base.size() >= 3 && base.substr(base.size() - 2) == "A1" &&
      std::isdigit(static_cast<unsigned char>(base[0]))) {
    const int n = std::stoi(base.substr(0, base.size() - 2));
    if (n < 2 || n > 8) fail("nA1 is built in for 2 <= n <= 8");
    g = IntMatrix(n, n);
    for (int i = 0; i < n; ++i) g(i, i) = 2;
  } else if (!base.empty() && base[0] == 'A') {
    const int n = number(1);
    if (n < 1 || n > 8) fail("A_n is built in for 1 <= n <= 8");
    g = gram_a(n);
  } else if (!base.empty() && base[0] == 'D') {
    const int n = number(1);
    if (n < 4 || n > 8) fail("D_n is built in for 4 <= n <= 8");
    g = gram_d(n);
  } else if (!base.empty() && base[0] == 'E') {
    const int n = number(1);
    if (n < 6 || n > 8) fail("E_n is built in for n = 6, 7, 8");
    g = gram_e(n);
  } else {
    fail("unknown built-in lattice '" + std::string(name) + "'");
  }
  Lattice lat = Lattice::from_gram(std::move(g), base);
  if (scale != 1) return rescale(lat, scale);
  return lat;
}

std::vector<std::string> builtin_names() {
  std::vector<std::string> names;
  for (int n = 1; n <= 8; ++n) names.push_back("A" + std::to_string(n));
  for (int n = 2; n <= 8; ++n) names.push_back(std::to_string(n) + "A1");
  for (int n = 4; n <= 8; ++n) names.push_back("D" + std::to_string(n));
  for (int n = 6; n <= 8; ++n) names.push_back("E" + std::to_string(n));
  return names;
}

}  // namespace orthoforms
