#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "orthoforms/arith.hpp"

namespace orthoforms {

/// An integral lattice given by the Gram matrix of a fixed basis.
/// Construction validates symmetry and nondegeneracy; values are immutable.
class Lattice {
 public:
  static Lattice from_gram(IntMatrix gram, std::string label = {});

  const IntMatrix& gram() const noexcept { return gram_; }
  const RatMatrix& gram_q() const noexcept { return gram_q_; }
  std::size_t rank() const noexcept { return gram_.rows(); }
  const std::string& label() const noexcept { return label_; }
  bool is_even() const noexcept { return even_; }
  const Integer& determinant() const noexcept { return det_; }

  Rational pair(const RatVector& x, const RatVector& y) const {
    return bilinear(gram_q_, x, y);
  }
  Rational norm(const RatVector& x) const { return pair(x, x); }
  /// Coordinates of G*x, i.e. the pairings (x, e_i) with the basis.
  RatVector pairings(const RatVector& x) const { return gram_q_.apply(x); }
  /// x lies in the dual lattice iff all pairings with the basis are integral.
  bool in_dual(const RatVector& x) const;
  bool in_lattice(const RatVector& x) const;

  friend bool operator==(const Lattice& a, const Lattice& b) {
    return a.gram_ == b.gram_;
  }

 private:
  Lattice() = default;
  IntMatrix gram_;
  RatMatrix gram_q_;
  std::string label_;
  Integer det_;
  bool even_ = false;
};

struct LatticeVector {
  RatVector coords;
  Rational norm;
};

LatticeVector make_vector(const Lattice& lat, RatVector coords);

struct DiscriminantGroup {
  std::vector<Integer> elementary_divisors;  // each > 1, d_i | d_{i+1}
  Integer order;
  Integer level;
};

/// Vector of M = 2U + L(-1) in the basis (e1, e2, <basis of L>, f2, f1).
struct AmbientVector {
  Rational e1 = 0;
  Rational e2 = 0;
  RatVector lambda;
  Rational f2 = 0;
  Rational f1 = 0;

  RatVector flat() const;
  static AmbientVector from_flat(const RatVector& v);
};

enum class ReflectiveCase { kDivEqualsD, kDivEqualsTwoD };

struct ReflectivityResult {
  bool reflective = false;
  std::optional<ReflectiveCase> tag;
  Rational half_norm;  // d with (r,r) = -2d
  Integer div;
};

// ---- operations -----------------------------------------------------------

RatMatrix dual_basis(const Lattice& lat);
DiscriminantGroup discriminant_group(const Lattice& lat);
Integer div(const RatVector& v, const Lattice& lat);
Lattice rescale(const Lattice& lat, const Integer& a);
Lattice direct_sum(const Lattice& a, const Lattice& b, std::string label = {});

/// Exact rational LDL^T pivots; the lattice is positive definite iff all > 0.
std::vector<Rational> ldl_pivots(const Lattice& lat);
bool is_positive_definite(const Lattice& lat);

/// All nonzero v with (v,v) <= max_norm, both signs, lexicographic order.
std::vector<LatticeVector> short_vectors(const Lattice& lat,
                                         const Rational& max_norm);

/// Calls visit(coords) for every nonzero v with (v,v) <= max_norm, in no
/// particular order, without materializing the list.
void for_each_short_vector(const Lattice& lat, const Rational& max_norm,
                           const std::function<void(const std::vector<std::int64_t>&)>& visit);

RatVector reflect(const RatVector& x, const RatVector& r, const Lattice& lat);

/// Gram matrix of 2U + L(-1) in the (e1, e2, L, f2, f1) basis.
IntMatrix ambient_gram(const Lattice& lat);
Rational ambient_norm(const AmbientVector& v, const Lattice& lat);
Rational ambient_pair(const AmbientVector& x, const AmbientVector& y,
                      const Lattice& lat);

ReflectivityResult is_reflective(const AmbientVector& r, const Lattice& lat);

/// Matrix of t(c,a): v -> v - (a,v)c + (c,v)a - (a,a)/2 (c,v)c on M (x) Q.
RatMatrix eichler_transvection(const AmbientVector& c, const AmbientVector& a,
                               const Lattice& lat);
bool preserves_form(const RatMatrix& g, const IntMatrix& gram);
/// g x - x lies in M for every dual-basis vector x.
bool acts_trivially_on_discriminant(const RatMatrix& g, const IntMatrix& gram);

// ---- built-in table -------------------------------------------------------

/// "A1".."A8", "D4".."D8", "E6", "E7", "E8", "nA1" (2 <= n <= 8), with an
/// optional rescaling suffix such as "E8(3)".
Lattice builtin_lattice(std::string_view name);
std::vector<std::string> builtin_names();

}  // namespace orthoforms
