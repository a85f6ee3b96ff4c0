#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "orthoforms/arith.hpp"
#include "orthoforms/borcherds_weyl.hpp"
#include "orthoforms/lattice.hpp"

namespace orthoforms {

inline constexpr long kDefaultDen = 24;
inline constexpr std::size_t kDefaultMaxTerms = 2'000'000;

/// Monomial q^A zeta^B xi^C multiplying every term of a series. B is given in
/// pairing coordinates, like the zeta exponents of the terms.
struct Prefactor {
  Rational A = 0;
  RatVector B;
  Rational C = 0;

  friend bool operator==(const Prefactor&, const Prefactor&) = default;
};

/// Terms live in the cone t >= 0, a + skew*t >= 0 and are exact on
/// t <= t_max, a + skew*t <= bound. With skew 0 this is the rectangle
/// a <= bound, t <= t_max.
struct Region {
  Rational bound = 0;
  Rational t_max = 0;
  long skew = 0;

  static Region rect(const Rational& a_max, const Rational& t_max, long skew = 0) {
    return {a_max + skew * t_max, t_max, skew};
  }
  Rational a_max() const { return bound - skew * t_max; }
  friend bool operator==(const Region&, const Region&) = default;
};

struct Axis {
  enum Kind { kTau, kZ, kOmega };
  Kind kind = kTau;
  std::size_t index = 0;

  static Axis tau() { return {kTau, 0}; }
  static Axis z(std::size_t i) { return {kZ, i}; }
  static Axis omega() { return {kOmega, 0}; }
};

/// Sparse truncated expansion sum c q^a zeta^l xi^t times a prefactor.
/// Exponents are stored as integers scaled by den: [a, l_1..l_s, t].
class TruncatedSeries {
 public:
  using Key = std::vector<std::int64_t>;
  struct KeyHash {
    std::size_t operator()(const Key& k) const noexcept;
  };
  using Terms = std::unordered_map<Key, Rational, KeyHash>;

  TruncatedSeries(std::size_t rank, Region region, long den = kDefaultDen);

  static TruncatedSeries constant(std::size_t rank, Region region, const Rational& c,
                                  long den = kDefaultDen);

  std::size_t rank() const { return rank_; }
  long den() const { return den_; }
  const Region& region() const { return region_; }
  const Prefactor& prefactor() const { return prefactor_; }
  void set_prefactor(Prefactor p);
  const Terms& terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }
  bool is_zero() const { return terms_.empty(); }

  /// Adds c q^a zeta^l xi^t (relative to the prefactor). Terms outside the
  /// exact region are dropped; terms outside the cone are an error.
  void add_term(const Rational& a, const RatVector& l, const Rational& t,
                const Rational& c);
  /// Same with an already scaled key.
  void add_key(const Key& k, const Rational& c);
  Rational coefficient(const Rational& a, const RatVector& l, const Rational& t) const;

  bool in_region(const Key& k) const;
  bool in_cone(const Key& k) const;
  std::int64_t weight(const Key& k) const { return k.front() + region_.skew * k.back(); }
  std::int64_t bound_scaled() const { return bound_s_; }
  std::int64_t t_max_scaled() const { return t_max_s_; }

  Rational exponent_a(const Key& k) const { return Rational(k.front(), 1) / den_ + prefactor_.A; }
  Rational exponent_t(const Key& k) const { return Rational(k.back(), 1) / den_ + prefactor_.C; }
  Rational exponent_l(const Key& k, std::size_t i) const {
    return Rational(k[1 + i], 1) / den_ + prefactor_.B[i];
  }

  std::vector<std::pair<Key, Rational>> sorted_terms() const;
  Key scale_key(const Rational& a, const RatVector& l, const Rational& t) const;

  /// Maximum number of stored terms before arithmetic fails.
  std::size_t max_terms = kDefaultMaxTerms;

  friend bool operator==(const TruncatedSeries& x, const TruncatedSeries& y);

 private:
  friend TruncatedSeries with_region(TruncatedSeries x, const Region& r);
  void refresh_limits();

  std::size_t rank_;
  long den_;
  Region region_;
  std::int64_t bound_s_ = 0;
  std::int64_t t_max_s_ = 0;
  Prefactor prefactor_;
  Terms terms_;
};

/// Re-truncates to a smaller region (same or larger skew).
TruncatedSeries with_region(TruncatedSeries x, const Region& r);

TruncatedSeries add(const TruncatedSeries& x, const TruncatedSeries& y);
TruncatedSeries sub(const TruncatedSeries& x, const TruncatedSeries& y);
TruncatedSeries scale(const TruncatedSeries& x, const Rational& c);
TruncatedSeries mul(const TruncatedSeries& x, const TruncatedSeries& y);
TruncatedSeries derive(const TruncatedSeries& x, const Axis& axis);
/// Inverse of a series whose weight-0, t = 0 slice is exactly the constant 1.
TruncatedSeries inverse(const TruncatedSeries& x);

inline TruncatedSeries operator+(const TruncatedSeries& x, const TruncatedSeries& y) {
  return add(x, y);
}
inline TruncatedSeries operator-(const TruncatedSeries& x, const TruncatedSeries& y) {
  return sub(x, y);
}
inline TruncatedSeries operator*(const TruncatedSeries& x, const TruncatedSeries& y) {
  return mul(x, y);
}

/// Thread cap for internal parallelism: ORTHOFORMS_THREADS if set, else the
/// hardware concurrency.
unsigned worker_threads();

// ---- Borcherds products ----------------------------------------------------

/// One factor (1 - X)^f of the product, X given by its scaled key.
struct ProductFactor {
  TruncatedSeries::Key exponent;
  Integer f;
};

struct BorchOptions {
  long den = kDefaultDen;
  /// Optional integral functional w on lattice coordinates; zeta^l becomes
  /// y^{w.l} and the result has rank 1.
  std::optional<IntVector> specialize;
  std::size_t max_terms = kDefaultMaxTerms;
};

/// Factors (n,l,m) > 0 with nonzero exponent that can reach the region,
/// merged when they share a monomial. Fails with kMissingData when a needed
/// coefficient is unknown.
std::vector<ProductFactor> borch_factors(const JacobiCoefficients& phi,
                                         const Lattice& lat, const Region& region,
                                         const BorchOptions& opt = {});

/// Skew of the cone needed by the product: max(0, -min n) over nonzero f(n,l).
long borch_skew(const JacobiCoefficients& phi);

TruncatedSeries borch_expand(const JacobiCoefficients& phi, const WeylVector& weyl,
                             const Lattice& lat, const Rational& a_max,
                             const Rational& t_max, const BorchOptions& opt = {});

// ---- Jacobian ----------------------------------------------------------------

struct WeightedSeries {
  TruncatedSeries series;
  long weight = 0;
};

/// det of the (s+3)x(s+3) matrix with rows k_i f_i, D_tau f_i, D_z f_i, D_omega f_i,
/// so s+3 forms for zeta rank s.
TruncatedSeries jacobian(const std::vector<WeightedSeries>& forms);
/// sum_t (-1)^t k_t f_t J_t over s+4 forms, J_t omitting form t.
TruncatedSeries syzygy_check(const std::vector<WeightedSeries>& forms);

struct LeadingOrder {
  Rational a;
  Rational t;
};
/// Minimal q- and xi-exponent over stored terms, prefactor included;
/// std::nullopt when the series vanishes to the order of its region.
std::optional<LeadingOrder> leading_order(const TruncatedSeries& x);

enum class JacobiSupport { kCusp, kHolomorphic, kWeak, kWeaklyHolomorphic };
std::string support_name(JacobiSupport s);

struct SliceTerm {
  Rational n;
  RatVector l;  // lattice coordinates
  Rational c;
};
/// Strongest class of a Fourier-Jacobi coefficient of index t.
JacobiSupport jacobi_support_class(const std::vector<SliceTerm>& slice,
                                   const Rational& t, const Lattice& lat);

}  // namespace orthoforms
