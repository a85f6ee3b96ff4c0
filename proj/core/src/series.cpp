#include "orthoforms/series.hpp"

#include <algorithm>
#include <cstdlib>
#include <map>
#include <numeric>
#include <thread>

namespace orthoforms {

// ---- TruncatedSeries -------------------------------------------------------

std::size_t TruncatedSeries::KeyHash::operator()(const Key& k) const noexcept {
  std::size_t h = 0x9e3779b97f4a7c15ULL;
  for (auto v : k)
    h ^= std::hash<std::int64_t>{}(v) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  return h;
}

TruncatedSeries::TruncatedSeries(std::size_t rank, Region region, long den)
    : rank_(rank), den_(den), region_(std::move(region)) {
  if (den_ <= 0) fail("exponent denominator must be positive");
  if (region_.skew < 0) fail("region skew must be nonnegative");
  if (region_.t_max < 0) fail("region needs t_max >= 0");
  prefactor_.B.assign(rank_, Rational(0));
  refresh_limits();
}

void TruncatedSeries::refresh_limits() {
  bound_s_ = floor_of(region_.bound * den_).get_si();
  t_max_s_ = floor_of(region_.t_max * den_).get_si();
}

TruncatedSeries TruncatedSeries::constant(std::size_t rank, Region region,
                                          const Rational& c, long den) {
  TruncatedSeries s(rank, std::move(region), den);
  s.add_key(Key(rank + 2, 0), c);
  return s;
}

void TruncatedSeries::set_prefactor(Prefactor p) {
  if (p.B.size() != rank_) fail("prefactor B has wrong dimension");
  prefactor_ = std::move(p);
}

bool TruncatedSeries::in_cone(const Key& k) const {
  return k.back() >= 0 && weight(k) >= 0;
}

bool TruncatedSeries::in_region(const Key& k) const {
  return in_cone(k) && k.back() <= t_max_s_ && weight(k) <= bound_s_;
}

TruncatedSeries::Key TruncatedSeries::scale_key(const Rational& a, const RatVector& l,
                                                const Rational& t) const {
  if (l.size() != rank_) fail("zeta exponent has wrong dimension");
  Key k;
  k.reserve(rank_ + 2);
  auto push = [&](const Rational& e) {
    const Rational s = e * den_;
    if (!is_integral(s))
      fail("exponent " + to_string(e) + " is not a multiple of 1/" + std::to_string(den_));
    if (!s.get_num().fits_slong_p()) fail("exponent " + to_string(e) + " is too large");
    k.push_back(s.get_num().get_si());
  };
  push(a);
  for (const auto& x : l) push(x);
  push(t);
  return k;
}

void TruncatedSeries::add_key(const Key& k, const Rational& c) {
  if (c == 0) return;
  if (k.size() != rank_ + 2) fail_internal("series key has wrong length");
  if (!in_cone(k)) fail("term lies outside the support cone of the series");
  if (!in_region(k)) return;
  auto [it, inserted] = terms_.try_emplace(k, c);
  if (!inserted) {
    it->second += c;
    if (it->second == 0) terms_.erase(it);
  }
  if (terms_.size() > max_terms)
    fail("series support cap exceeded (" + std::to_string(max_terms) + " terms)");
}

void TruncatedSeries::add_term(const Rational& a, const RatVector& l, const Rational& t,
                               const Rational& c) {
  add_key(scale_key(a, l, t), c);
}

Rational TruncatedSeries::coefficient(const Rational& a, const RatVector& l,
                                      const Rational& t) const {
  auto it = terms_.find(scale_key(a, l, t));
  return it == terms_.end() ? Rational(0) : it->second;
}

std::vector<std::pair<TruncatedSeries::Key, Rational>> TruncatedSeries::sorted_terms() const {
  std::vector<std::pair<Key, Rational>> out(terms_.begin(), terms_.end());
  std::sort(out.begin(), out.end(),
            [](const auto& x, const auto& y) { return x.first < y.first; });
  return out;
}

bool operator==(const TruncatedSeries& x, const TruncatedSeries& y) {
  return x.rank_ == y.rank_ && x.den_ == y.den_ && x.region_ == y.region_ &&
         x.prefactor_ == y.prefactor_ && x.terms_ == y.terms_;
}

TruncatedSeries with_region(TruncatedSeries x, const Region& r) {
  if (r.skew < x.region_.skew) fail("cannot lower the skew of a series region");
  x.region_ = r;
  x.refresh_limits();
  for (auto it = x.terms_.begin(); it != x.terms_.end();) {
    if (x.in_region(it->first)) ++it;
    else it = x.terms_.erase(it);
  }
  return x;
}

// ---- arithmetic -------------------------------------------------------------

namespace {

void check_compatible(const TruncatedSeries& x, const TruncatedSeries& y) {
  if (x.rank() != y.rank())
    fail("rank mismatch: " + std::to_string(x.rank()) + " vs " + std::to_string(y.rank()));
  if (x.den() != y.den())
    fail("exponent denominator mismatch: " + std::to_string(x.den()) + " vs " +
         std::to_string(y.den()));
}

Region meet(const Region& a, const Region& b) {
  return {std::min(a.bound, b.bound), std::min(a.t_max, b.t_max), std::max(a.skew, b.skew)};
}

std::int64_t scaled_shift(const Rational& delta, long den) {
  const Rational s = delta * den;
  if (!is_integral(s))
    fail("prefactors differ by a monomial that is not a multiple of 1/" + std::to_string(den));
  return s.get_num().get_si();
}

}  // namespace

unsigned worker_threads() {
  unsigned n = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("ORTHOFORMS_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) n = std::min<unsigned>(n, static_cast<unsigned>(v));
  }
  return n;
}

TruncatedSeries add(const TruncatedSeries& x, const TruncatedSeries& y) {
  check_compatible(x, y);
  const std::size_t s = x.rank();
  const Prefactor& px = x.prefactor();
  const Prefactor& py = y.prefactor();
  Prefactor p{std::min(px.A, py.A), RatVector(s), std::min(px.C, py.C)};
  for (std::size_t i = 0; i < s; ++i) p.B[i] = std::min(px.B[i], py.B[i]);

  const long skew = std::max(x.region().skew, y.region().skew);
  auto shifted_region = [&](const TruncatedSeries& z) {
    const Rational da = z.prefactor().A - p.A, dt = z.prefactor().C - p.C;
    return Region{z.region().bound + da + skew * dt, z.region().t_max + dt, skew};
  };
  TruncatedSeries out(s, meet(shifted_region(x), shifted_region(y)), x.den());
  out.max_terms = std::max(x.max_terms, y.max_terms);
  out.set_prefactor(p);
  for (const TruncatedSeries* z : {&x, &y}) {
    TruncatedSeries::Key shift(s + 2);
    shift[0] = scaled_shift(z->prefactor().A - p.A, x.den());
    for (std::size_t i = 0; i < s; ++i)
      shift[1 + i] = scaled_shift(z->prefactor().B[i] - p.B[i], x.den());
    shift[s + 1] = scaled_shift(z->prefactor().C - p.C, x.den());
    for (const auto& [k, c] : z->terms()) {
      TruncatedSeries::Key moved = k;
      for (std::size_t i = 0; i < moved.size(); ++i) moved[i] += shift[i];
      out.add_key(moved, c);
    }
  }
  return out;
}

TruncatedSeries scale(const TruncatedSeries& x, const Rational& c) {
  TruncatedSeries out(x.rank(), x.region(), x.den());
  out.max_terms = x.max_terms;
  out.set_prefactor(x.prefactor());
  if (c == 0) return out;
  for (const auto& [k, v] : x.terms()) out.add_key(k, v * c);
  return out;
}

TruncatedSeries sub(const TruncatedSeries& x, const TruncatedSeries& y) {
  return add(x, scale(y, -1));
}

TruncatedSeries mul(const TruncatedSeries& x, const TruncatedSeries& y) {
  check_compatible(x, y);
  const std::size_t s = x.rank();
  TruncatedSeries out(s, meet(x.region(), y.region()), x.den());
  out.max_terms = std::max(x.max_terms, y.max_terms);
  Prefactor p{x.prefactor().A + y.prefactor().A, RatVector(s),
              x.prefactor().C + y.prefactor().C};
  for (std::size_t i = 0; i < s; ++i) p.B[i] = x.prefactor().B[i] + y.prefactor().B[i];
  out.set_prefactor(std::move(p));

  const std::int64_t bound = out.bound_scaled(), tmax = out.t_max_scaled();
  using Entry = std::pair<const TruncatedSeries::Key*, const Rational*>;
  auto collect = [&](const TruncatedSeries& z) {
    std::vector<Entry> v;
    v.reserve(z.size());
    for (const auto& [k, c] : z.terms())
      if (out.weight(k) <= bound && k.back() <= tmax) v.emplace_back(&k, &c);
    std::sort(v.begin(), v.end(), [&](const Entry& a, const Entry& b) {
      return out.weight(*a.first) < out.weight(*b.first);
    });
    return v;
  };
  const std::vector<Entry> xs = collect(x), ys = collect(y);
  if (xs.empty() || ys.empty()) return out;

  auto work = [&](std::size_t lo, std::size_t hi, TruncatedSeries::Terms& acc) {
    TruncatedSeries::Key key(s + 2);
    for (std::size_t i = lo; i < hi; ++i) {
      const auto& kx = *xs[i].first;
      const std::int64_t wx = out.weight(kx);
      for (const auto& [ky, cy] : ys) {
        if (wx + out.weight(*ky) > bound) break;
        if (kx.back() + ky->back() > tmax) continue;
        for (std::size_t j = 0; j < key.size(); ++j) key[j] = kx[j] + (*ky)[j];
        auto [it, inserted] = acc.try_emplace(key, *xs[i].second * *cy);
        if (!inserted) it->second += *xs[i].second * *cy;
      }
    }
  };

  const std::size_t pairs = xs.size() * ys.size();
  const unsigned threads =
      pairs < 50'000 ? 1u : std::min<unsigned>(worker_threads(), static_cast<unsigned>(xs.size()));
  std::vector<TruncatedSeries::Terms> partial(threads);
  if (threads == 1) {
    work(0, xs.size(), partial[0]);
  } else {
    std::vector<std::thread> pool;
    const std::size_t chunk = (xs.size() + threads - 1) / threads;
    for (unsigned t = 0; t < threads; ++t) {
      const std::size_t lo = t * chunk, hi = std::min(xs.size(), lo + chunk);
      if (lo >= hi) break;
      pool.emplace_back(work, lo, hi, std::ref(partial[t]));
    }
    for (auto& th : pool) th.join();
  }
  for (auto& part : partial)
    for (auto& [k, c] : part) out.add_key(k, c);
  return out;
}

TruncatedSeries derive(const TruncatedSeries& x, const Axis& axis) {
  if (axis.kind == Axis::kZ && axis.index >= x.rank())
    fail("derivative axis z_" + std::to_string(axis.index + 1) + " exceeds rank " +
         std::to_string(x.rank()));
  TruncatedSeries out(x.rank(), x.region(), x.den());
  out.max_terms = x.max_terms;
  out.set_prefactor(x.prefactor());
  for (const auto& [k, c] : x.terms()) {
    Rational e;
    switch (axis.kind) {
      case Axis::kTau: e = x.exponent_a(k); break;
      case Axis::kZ: e = x.exponent_l(k, axis.index); break;
      case Axis::kOmega: e = x.exponent_t(k); break;
    }
    out.add_key(k, c * e);
  }
  return out;
}

TruncatedSeries inverse(const TruncatedSeries& x) {
  const std::size_t s = x.rank();
  const TruncatedSeries::Key zero(s + 2, 0);
  TruncatedSeries u(s, x.region(), x.den());
  u.max_terms = x.max_terms;
  for (const auto& [k, c] : x.terms()) {
    if (k == zero) {
      if (c != 1) fail("series inversion needs constant term 1, found " + to_string(c));
      continue;
    }
    if (x.weight(k) == 0 && k.back() == 0)
      fail("series inversion needs the constant slice to be exactly 1");
    u.add_key(k, -c);
  }
  if (!x.terms().count(zero)) fail("series inversion needs constant term 1, found 0");

  TruncatedSeries result = TruncatedSeries::constant(s, x.region(), 1, x.den());
  result.max_terms = x.max_terms;
  TruncatedSeries power = result;
  while (true) {
    power = mul(power, u);
    if (power.is_zero()) break;
    result = add(result, power);
  }
  Prefactor p{-x.prefactor().A, RatVector(s), -x.prefactor().C};
  for (std::size_t i = 0; i < s; ++i) p.B[i] = -x.prefactor().B[i];
  result.set_prefactor(std::move(p));
  return result;
}

// ---- Borcherds products ------------------------------------------------------

namespace {

std::string vec_str(const RatVector& v) {
  std::string s = "[";
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + to_string(v[i]);
  return s + "]";
}

Integer binomial(const Integer& f, long j) {
  // Generalized binomial coefficient f(f-1)...(f-j+1)/j!, exact for any integer f.
  Integer num = 1, den = 1;
  for (long i = 0; i < j; ++i) {
    num *= f - i;
    den *= i + 1;
  }
  return num / den;
}

using Poly = std::vector<Integer>;

Poly poly_mul(const Poly& a, const Poly& b) {
  Poly c(a.size() + b.size() - 1, Integer(0));
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] == 0) continue;
    for (std::size_t j = 0; j < b.size(); ++j) c[i + j] += a[i] * b[j];
  }
  return c;
}

// (1 - Y^j)^e for e >= 0.
Poly one_minus_power(long j, const Integer& e) {
  const long ee = e.get_si();
  Poly p(static_cast<std::size_t>(j * ee + 1), Integer(0));
  for (long i = 0; i <= ee; ++i) {
    Integer c = binomial(e, i);
    p[static_cast<std::size_t>(i * j)] = (i % 2 == 0) ? c : Integer(-c);
  }
  return p;
}

void trim(Poly& p) {
  while (p.size() > 1 && p.back() == 0) p.pop_back();
}

// Exact quotient num / den, or std::nullopt when den does not divide num.
std::optional<Poly> poly_divide(Poly num, Poly den) {
  trim(num);
  trim(den);
  if (den.size() > num.size()) {
    if (den.size() == 1) return num;
    const bool num_zero = num.size() == 1 && num[0] == 0;
    if (!num_zero) return std::nullopt;
    return Poly{0};
  }
  const Integer& lead = den.back();
  Poly q(num.size() - den.size() + 1, Integer(0));
  for (std::size_t k = q.size(); k-- > 0;) {
    const Integer& top = num[k + den.size() - 1];
    if (top % lead != 0) return std::nullopt;
    q[k] = top / lead;
    if (q[k] == 0) continue;
    for (std::size_t i = 0; i < den.size(); ++i) num[k + i] -= q[k] * den[i];
  }
  for (const auto& c : num)
    if (c != 0) return std::nullopt;
  return q;
}

struct DualVectorCache {
  std::vector<std::vector<std::int64_t>> pairings;  // sorted by norm
  std::vector<Rational> norms;
};

// Integer series with keys stored contiguously in lexicographic order.
struct FlatProduct {
  std::size_t stride = 0;
  std::vector<std::int64_t> keys;
  std::vector<Integer> coef;
  std::size_t size() const { return coef.size(); }
};

FlatProduct flatten(const TruncatedSeries& x) {
  FlatProduct out;
  out.stride = x.rank() + 2;
  for (const auto& [k, c] : x.sorted_terms()) {
    if (!is_integral(c)) fail_internal("product coefficient is not integral");
    out.keys.insert(out.keys.end(), k.begin(), k.end());
    out.coef.push_back(c.get_num());
  }
  return out;
}

TruncatedSeries unflatten(const FlatProduct& x, const TruncatedSeries& shape) {
  TruncatedSeries out(shape.rank(), shape.region(), shape.den());
  out.max_terms = shape.max_terms;
  TruncatedSeries::Key k(x.stride);
  for (std::size_t i = 0; i < x.size(); ++i) {
    std::copy_n(x.keys.begin() + static_cast<std::ptrdiff_t>(i * x.stride), x.stride, k.begin());
    out.add_key(k, Rational(x.coef[i]));
  }
  return out;
}

// acc *= sum_j coeffs[j] X^j with coeffs[0] = 1. Shifting every key by j*X
// keeps the order, so the product is a sequence of linear merges.
void multiply_binomial(FlatProduct& acc, const TruncatedSeries::Key& x,
                       const std::vector<Integer>& coeffs, const TruncatedSeries& shape,
                       std::size_t max_terms) {
  const std::size_t st = acc.stride;
  const std::size_t last = st - 1;
  const std::int64_t skew = shape.region().skew;
  std::vector<std::int64_t> shift(st);
  FlatProduct res = acc;
  for (std::size_t j = 1; j < coeffs.size(); ++j) {
    for (std::size_t i = 0; i < st; ++i) shift[i] = x[i] * static_cast<std::int64_t>(j);
    FlatProduct merged;
    merged.stride = st;
    merged.keys.reserve(res.keys.size() + acc.keys.size());
    merged.coef.reserve(res.size() + acc.size());
    std::size_t p = 0, q = 0;
    const std::size_t np = res.size(), nq = acc.size();
    auto shifted_ok = [&](std::size_t idx) {
      const std::int64_t* k = &acc.keys[idx * st];
      const std::int64_t a = k[0] + shift[0], t = k[last] + shift[last];
      return t <= shape.t_max_scaled() && a + skew * t <= shape.bound_scaled();
    };
    while (q < nq && !shifted_ok(q)) ++q;
    while (p < np || q < nq) {
      int cmp;
      if (q >= nq) {
        cmp = -1;
      } else if (p >= np) {
        cmp = 1;
      } else {
        cmp = 0;
        const std::int64_t* a = &res.keys[p * st];
        const std::int64_t* b = &acc.keys[q * st];
        for (std::size_t i = 0; i < st && cmp == 0; ++i) {
          const std::int64_t bv = b[i] + shift[i];
          cmp = a[i] < bv ? -1 : (a[i] > bv ? 1 : 0);
        }
      }
      if (cmp < 0) {
        merged.keys.insert(merged.keys.end(), res.keys.begin() + static_cast<std::ptrdiff_t>(p * st),
                           res.keys.begin() + static_cast<std::ptrdiff_t>((p + 1) * st));
        merged.coef.push_back(std::move(res.coef[p]));
        ++p;
        continue;
      }
      Integer c = coeffs[j] * acc.coef[q];
      if (cmp == 0) {
        c += res.coef[p];
        ++p;
      }
      if (c != 0) {
        const std::int64_t* b = &acc.keys[q * st];
        for (std::size_t i = 0; i < st; ++i) merged.keys.push_back(b[i] + shift[i]);
        merged.coef.push_back(std::move(c));
      }
      ++q;
      while (q < nq && !shifted_ok(q)) ++q;
    }
    if (merged.size() > max_terms)
      fail("series support cap exceeded (" + std::to_string(max_terms) + " terms)");
    res = std::move(merged);
  }
  acc = std::move(res);
}

DualVectorCache enumerate_dual(const Lattice& lat, const Rational& max_norm) {
  DualVectorCache cache;
  const std::size_t r = lat.rank();
  cache.pairings.emplace_back(r, 0);
  cache.norms.emplace_back(0);
  if (max_norm <= 0) return cache;
  // Pairing coordinates of L^v are the coordinates for the Gram matrix
  // |det| G^-1 scaled back by |det|.
  const Integer det = abs(lat.determinant());
  const RatMatrix inv = inverse(lat.gram_q());
  IntMatrix scaled(r, r);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < r; ++j) scaled(i, j) = Rational(inv(i, j) * det).get_num();
  const Lattice dual = Lattice::from_gram(scaled);
  std::vector<std::vector<std::int64_t>> raw;
  for_each_short_vector(dual, max_norm * det,
                        [&](const std::vector<std::int64_t>& v) { raw.push_back(v); });
  std::vector<std::int64_t> g(r * r);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < r; ++j) g[i * r + j] = scaled(i, j).get_si();
  std::vector<std::pair<std::int64_t, std::size_t>> order;
  order.reserve(raw.size());
  for (std::size_t idx = 0; idx < raw.size(); ++idx) {
    std::int64_t q = 0;
    const auto& v = raw[idx];
    for (std::size_t i = 0; i < r; ++i)
      for (std::size_t j = 0; j < r; ++j) q += v[i] * g[i * r + j] * v[j];
    order.emplace_back(q, idx);
  }
  std::sort(order.begin(), order.end());
  for (const auto& [q, idx] : order) {
    cache.pairings.push_back(std::move(raw[idx]));
    cache.norms.push_back(Rational(Integer(q), det));
  }
  return cache;
}

// Dual vectors of one norm, counted by specialized exponent. The second
// count keeps only vectors with negative leading pairing.
struct NormClass {
  Rational norm;
  std::map<std::int64_t, std::pair<long, long>> counts;
};

bool negative_pairing(const std::vector<std::int64_t>& p);

std::vector<NormClass> specialized_classes(const DualVectorCache& cache,
                                           const RatVector& special, long den) {
  Integer common = 1;
  for (const auto& x : special) common = lcm(common, Rational(x * den).get_den());
  std::vector<std::int64_t> weights;
  for (const auto& x : special) weights.push_back(Rational(x * den * common).get_num().get_si());
  const std::int64_t scale = common.get_si();
  std::vector<NormClass> out;
  for (std::size_t idx = 0; idx < cache.norms.size(); ++idx) {
    if (out.empty() || out.back().norm != cache.norms[idx]) out.push_back({cache.norms[idx], {}});
    const auto& p = cache.pairings[idx];
    std::int64_t y = 0;
    for (std::size_t i = 0; i < p.size(); ++i) y += weights[i] * p[i];
    if (y % scale != 0)
      fail("specialized exponent is not a multiple of 1/" + std::to_string(den));
    auto& slot = out.back().counts[y / scale];
    ++slot.first;
    if (negative_pairing(p)) ++slot.second;
  }
  return out;
}

bool negative_pairing(const std::vector<std::int64_t>& p) {
  for (auto v : p)
    if (v != 0) return v < 0;
  return false;
}

}  // namespace

long borch_skew(const JacobiCoefficients& phi) {
  long nmin = 0;
  for (const auto& [key, val] : phi.values)
    if (val != 0) nmin = std::min(nmin, key.first);
  if (phi.norm_rule) {
    if (!phi.min_hyperbolic_norm) fail("a coefficient rule needs a declared minimal hyperbolic norm");
    nmin = std::min(nmin, floor_of(*phi.min_hyperbolic_norm / 2).get_si());
  }
  return -nmin;
}

std::vector<ProductFactor> borch_factors(const JacobiCoefficients& phi, const Lattice& lat,
                                         const Region& region, const BorchOptions& opt) {
  const std::size_t r = lat.rank();
  if (phi.rank != r) fail("coefficient data and lattice have different ranks");
  if (opt.specialize && opt.specialize->size() != r)
    fail("specialization functional must have " + std::to_string(r) + " entries");
  const long skew = region.skew;
  if (skew < borch_skew(phi)) fail_internal("region skew too small for the product");
  const long nmin = -borch_skew(phi);
  const Rational floor_norm = phi.hyperbolic_floor(lat);
  const long den = opt.den;

  // Zeta part of the factor exponent, scaled by den.
  RatVector special_on_pairings;
  if (opt.specialize) special_on_pairings = inverse(lat.gram_q()).apply(to_rational(*opt.specialize));
  auto exponent_from_pairings = [&](const std::vector<std::int64_t>& p) {
    std::vector<std::int64_t> e;
    if (opt.specialize) {
      Rational y = 0;
      for (std::size_t i = 0; i < r; ++i)
        if (p[i] != 0) y += special_on_pairings[i] * Rational(static_cast<long>(p[i]));
      y *= den;
      if (!is_integral(y)) fail("specialized exponent is not a multiple of 1/" + std::to_string(den));
      e.push_back(y.get_num().get_si());
    } else {
      for (auto v : p) e.push_back(v * den);
    }
    return e;
  };
  auto pairings_of = [&](const RatVector& l) {
    std::vector<std::int64_t> p;
    for (const auto& x : lat.pairings(l)) {
      if (!is_integral(x)) fail("coefficient vector " + vec_str(l) + " is not in the dual lattice");
      p.push_back(x.get_num().get_si());
    }
    return p;
  };

  // (n, m) pairs whose factors can reach the region.
  struct Slot { long n, m; };
  std::vector<Slot> slots;
  const long t_top = floor_of(region.t_max).get_si();
  for (long m = 0; m <= t_top; ++m) {
    long lo = 0;
    if (m > 0) {
      lo = std::max(-skew * m, -((-nmin) / m));
    }
    const long hi = floor_of(region.bound - Rational(skew * m)).get_si();
    for (long n = lo; n <= hi; ++n) slots.push_back({n, m});
  }

  Rational enum_norm = -1;
  auto needs_enumeration = [&](long N) { return phi.norm_rule || N > phi.complete_through; };
  for (const auto& s : slots) {
    const long N = s.n * s.m;
    if (needs_enumeration(N)) enum_norm = std::max(enum_norm, Rational(Rational(2 * N) - floor_norm));
  }
  DualVectorCache cache;
  if (enum_norm >= 0) cache = enumerate_dual(lat, enum_norm);
  std::vector<NormClass> classes;

  std::map<TruncatedSeries::Key, Integer> grouped;
  std::vector<std::string> missing;
  std::size_t missing_total = 0;
  auto emit = [&](long n, long m, const std::vector<std::int64_t>& p, const Integer& f) {
    if (f == 0) return;
    if (n == 0 && m == 0 && !negative_pairing(p)) return;
    TruncatedSeries::Key key;
    key.push_back(n * den);
    for (auto e : exponent_from_pairings(p)) key.push_back(e);
    key.push_back(m * den);
    grouped[key] += f;
  };

  for (const auto& s : slots) {
    const long N = s.n * s.m;
    const Rational reach = Rational(2 * N) - floor_norm;
    if (reach < 0) continue;
    if (!needs_enumeration(N)) {
      const RatVector none;
      for (auto it = phi.values.lower_bound({N, none});
           it != phi.values.end() && it->first.first == N; ++it)
        emit(s.n, s.m, pairings_of(it->first.second), it->second);
      continue;
    }
    const RatMatrix inv = inverse(lat.gram_q());
    const bool has_stored = [&] {
      auto it = phi.values.lower_bound({N, RatVector()});
      return it != phi.values.end() && it->first.first == N;
    }();
    if (!has_stored && phi.norm_rule && opt.specialize) {
      if (classes.empty()) classes = specialized_classes(cache, special_on_pairings, den);
      const bool boundary = s.n == 0 && s.m == 0;
      for (const auto& c : classes) {
        if (c.norm > reach) break;
        const Integer f = phi.norm_rule(N, c.norm);
        if (f == 0) continue;
        for (const auto& [y, counts] : c.counts) {
          const long count = boundary ? counts.second : counts.first;
          if (count == 0) continue;
          grouped[{s.n * den, y, s.m * den}] += f * count;
        }
      }
      continue;
    }
    for (std::size_t idx = 0; idx < cache.norms.size() && cache.norms[idx] <= reach; ++idx) {
      const auto& p = cache.pairings[idx];
      if (s.n == 0 && s.m == 0 && !negative_pairing(p)) continue;
      std::optional<Integer> f;
      RatVector l;
      if (has_stored || !phi.norm_rule) {
        RatVector pr;
        for (auto v : p) pr.emplace_back(static_cast<long>(v));
        l = inv.apply(pr);
        f = phi.get(N, l, cache.norms[idx]);
      } else {
        f = phi.norm_rule(N, cache.norms[idx]);
      }
      if (!f) {
        if (missing.size() < 20) missing.push_back("(" + std::to_string(N) + "," + vec_str(l) + ")");
        ++missing_total;
        continue;
      }
      emit(s.n, s.m, p, *f);
    }
  }
  if (missing_total > 0) {
    std::string msg = "missing coefficients f(n,l) for " + std::to_string(missing_total) +
                      " pairs:";
    for (const auto& m : missing) msg += " " + m;
    if (missing_total > missing.size()) msg += " ...";
    throw Error(ErrorKind::kMissingData, msg);
  }

  std::vector<ProductFactor> out;
  for (auto& [k, f] : grouped)
    if (f != 0) out.push_back({k, f});
  return out;
}

TruncatedSeries borch_expand(const JacobiCoefficients& phi, const WeylVector& weyl,
                             const Lattice& lat, const Rational& a_max, const Rational& t_max,
                             const BorchOptions& opt) {
  if (a_max < 0 || t_max < 0) fail("truncation rectangle must be nonnegative");
  if (weyl.B.size() != lat.rank()) fail("Weyl vector has wrong dimension");
  const long skew = borch_skew(phi);
  const Region region = Region::rect(a_max, t_max, skew);
  const std::size_t s = opt.specialize ? 1 : lat.rank();
  const auto factors = borch_factors(phi, lat, region, opt);

  TruncatedSeries acc = TruncatedSeries::constant(s, region, 1, opt.den);
  acc.max_terms = opt.max_terms;

  // Boundary factors (m = n = 0) grouped by ray; each ray gives an exact
  // rational function in one variable that must be a polynomial.
  std::map<std::vector<std::int64_t>, std::vector<std::pair<std::int64_t, Integer>>> rays;
  for (const auto& fac : factors) {
    if (fac.exponent.front() != 0 || fac.exponent.back() != 0) continue;
    std::vector<std::int64_t> e(fac.exponent.begin() + 1, fac.exponent.end() - 1);
    std::int64_t g = 0;
    for (auto v : e) g = std::gcd(g, v < 0 ? -v : v);
    if (g == 0) fail("specialization sends a boundary factor to the constant monomial");
    for (auto& v : e) v /= g;
    rays[e].emplace_back(g, fac.f);
  }
  for (const auto& [u, parts] : rays) {
    std::int64_t g0 = 0;
    for (const auto& [j, f] : parts) g0 = std::gcd(g0, j);
    Poly num{1}, dnm{1};
    for (const auto& [j, f] : parts) {
      const long jj = static_cast<long>(j / g0);
      if (f > 0) num = poly_mul(num, one_minus_power(jj, f));
      else dnm = poly_mul(dnm, one_minus_power(jj, -f));
    }
    auto q = poly_divide(num, dnm);
    if (!q) {
      std::string dir = "[";
      for (std::size_t i = 0; i < u.size(); ++i)
        dir += (i ? "," : "") + std::to_string(u[i] * g0) + "/" + std::to_string(opt.den);
      fail("meromorphic along the toric boundary: factors in direction " + dir +
           "] do not cancel to a polynomial");
    }
    TruncatedSeries poly(s, region, opt.den);
    TruncatedSeries::Key key(s + 2, 0);
    for (std::size_t k = 0; k < q->size(); ++k) {
      if ((*q)[k] == 0) continue;
      for (std::size_t i = 0; i < u.size(); ++i)
        key[1 + i] = u[i] * g0 * static_cast<std::int64_t>(k);
      poly.add_key(key, Rational((*q)[k]));
    }
    acc = mul(acc, poly);
  }

  // The remaining factors have integral binomial expansions; multiply them on
  // a sorted flat copy so each step is a merge of shifted runs.
  // Heavy factors first keeps the running product small for longer.
  std::vector<const ProductFactor*> order;
  for (const auto& fac : factors)
    if (fac.exponent.front() != 0 || fac.exponent.back() != 0) order.push_back(&fac);
  std::stable_sort(order.begin(), order.end(), [&](const auto* x, const auto* y) {
    return acc.weight(x->exponent) > acc.weight(y->exponent);
  });
  FlatProduct flat = flatten(acc);
  for (const ProductFactor* fp : order) {
    const ProductFactor& fac = *fp;
    const std::int64_t w = acc.weight(fac.exponent), t = fac.exponent.back();
    std::vector<Integer> coeffs;
    for (long j = 0;; ++j) {
      if (j > 0 && (j * w > acc.bound_scaled() || j * t > acc.t_max_scaled())) break;
      const Integer c = binomial(fac.f, j);
      coeffs.push_back(j % 2 == 0 ? c : Integer(-c));
      if (fac.f >= 0 && j >= fac.f) break;
    }
    multiply_binomial(flat, fac.exponent, coeffs, acc, opt.max_terms);
  }
  acc = unflatten(flat, acc);

  Prefactor pf{weyl.A, RatVector(s, Rational(0)), weyl.C};
  if (opt.specialize) {
    pf.B[0] = dot(to_rational(*opt.specialize), weyl.B);
  } else {
    pf.B = lat.pairings(weyl.B);
  }
  acc.set_prefactor(std::move(pf));
  return acc;
}

// ---- Jacobian ------------------------------------------------------------------

namespace {

void check_forms(const std::vector<WeightedSeries>& forms, std::size_t expected_extra) {
  if (forms.empty()) fail("jacobian needs at least one form");
  const std::size_t s = forms.front().series.rank();
  for (const auto& f : forms) {
    if (f.series.rank() != s) fail("rank mismatch between forms");
    if (f.series.den() != forms.front().series.den()) fail("exponent denominator mismatch between forms");
    if (f.weight < 0) fail("weights must be nonnegative");
  }
  if (forms.size() != s + expected_extra)
    fail("rank " + std::to_string(s) + " needs exactly " + std::to_string(s + expected_extra) +
         " forms, got " + std::to_string(forms.size()));
}

}  // namespace

TruncatedSeries jacobian(const std::vector<WeightedSeries>& forms) {
  check_forms(forms, 3);
  const std::size_t s = forms.front().series.rank();
  const std::size_t n = s + 3;

  std::vector<std::vector<TruncatedSeries>> m(n);
  Region common = forms.front().series.region();
  for (const auto& f : forms) {
    const Region& r = f.series.region();
    common = {std::min(common.bound, r.bound), std::min(common.t_max, r.t_max),
              std::max(common.skew, r.skew)};
  }
  for (const auto& f : forms) {
    m[0].push_back(scale(f.series, Rational(f.weight)));
    m[1].push_back(derive(f.series, Axis::tau()));
    for (std::size_t i = 0; i < s; ++i) m[2 + i].push_back(derive(f.series, Axis::z(i)));
    m[n - 1].push_back(derive(f.series, Axis::omega()));
  }

  // Cofactor expansion along the first row; minors keyed by column mask.
  std::map<unsigned, TruncatedSeries> memo;
  std::function<TruncatedSeries(std::size_t, unsigned)> det = [&](std::size_t row,
                                                                  unsigned mask) {
    if (row == n) {
      TruncatedSeries one = TruncatedSeries::constant(s, common, 1, forms.front().series.den());
      one.max_terms = forms.front().series.max_terms;
      return one;
    }
    if (auto it = memo.find(mask); it != memo.end()) return it->second;
    std::optional<TruncatedSeries> acc;
    int pos = 0;
    for (std::size_t c = 0; c < n; ++c) {
      if (!(mask & (1u << c))) continue;
      TruncatedSeries term = mul(m[row][c], det(row + 1, mask & ~(1u << c)));
      if (pos % 2 == 1) term = scale(term, -1);
      acc = acc ? add(*acc, term) : term;
      ++pos;
    }
    memo.emplace(mask, *acc);
    return *acc;
  };
  return det(0, (1u << n) - 1);
}

TruncatedSeries syzygy_check(const std::vector<WeightedSeries>& forms) {
  check_forms(forms, 4);
  std::optional<TruncatedSeries> total;
  for (std::size_t t = 0; t < forms.size(); ++t) {
    std::vector<WeightedSeries> rest;
    for (std::size_t i = 0; i < forms.size(); ++i)
      if (i != t) rest.push_back(forms[i]);
    TruncatedSeries term =
        mul(scale(forms[t].series, Rational(forms[t].weight)), jacobian(rest));
    // (-1)^t with t counted from 1.
    if (t % 2 == 0) term = scale(term, -1);
    total = total ? add(*total, term) : term;
  }
  return *total;
}

std::optional<LeadingOrder> leading_order(const TruncatedSeries& x) {
  if (x.is_zero()) return std::nullopt;
  std::int64_t a = x.terms().begin()->first.front(), t = x.terms().begin()->first.back();
  for (const auto& [k, c] : x.terms()) {
    a = std::min(a, k.front());
    t = std::min(t, k.back());
  }
  return LeadingOrder{Rational(a, 1) / x.den() + x.prefactor().A,
                      Rational(t, 1) / x.den() + x.prefactor().C};
}

std::string support_name(JacobiSupport s) {
  switch (s) {
    case JacobiSupport::kCusp: return "cusp";
    case JacobiSupport::kHolomorphic: return "holomorphic";
    case JacobiSupport::kWeak: return "weak";
    case JacobiSupport::kWeaklyHolomorphic: return "weakly-holomorphic";
  }
  fail_internal("unknown support class");
}

JacobiSupport jacobi_support_class(const std::vector<SliceTerm>& slice, const Rational& t,
                                   const Lattice& lat) {
  bool cusp = true, holo = true, weak = true;
  for (const auto& term : slice) {
    if (term.c == 0) continue;
    const Rational h = 2 * term.n * t - lat.norm(term.l);
    if (h <= 0) cusp = false;
    if (h < 0) holo = false;
    if (term.n < 0) weak = false;
  }
  if (cusp) return JacobiSupport::kCusp;
  if (holo) return JacobiSupport::kHolomorphic;
  if (weak) return JacobiSupport::kWeak;
  return JacobiSupport::kWeaklyHolomorphic;
}

}  // namespace orthoforms
