#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "orthoforms/lattice.hpp"
#include "orthoforms/root_systems.hpp"

namespace orthoforms {

/// f(0,0) as the affine expression constant + coeff * k.
struct AffineWeight {
  Rational constant = 0;
  Rational coeff = 0;

  static AffineWeight fixed(const Rational& value) { return {value, 0}; }
  static AffineWeight symbolic() { return {0, 2}; }
  bool is_symbolic() const { return coeff != 0; }
  Rational at(const Rational& k) const { return constant + coeff * k; }
};

using JacobiKey = std::pair<long, RatVector>;  // (n, l in lattice coordinates)

/// Sparse Fourier coefficients f(n,l) of a weight-0 Jacobi form. Every
/// coefficient with n <= complete_through is known (absent means zero);
/// anything above that bound is unknown unless stored or given by the rule.
struct JacobiCoefficients {
  std::size_t rank = 0;
  std::map<JacobiKey, Integer> values;
  long complete_through = 0;
  /// Closed form for coefficients that depend only on n and (l,l), as for a
  /// form of unimodular index. Consulted for keys absent from values.
  std::function<Integer(long n, const Rational& norm)> norm_rule;
  /// Smallest 2n - (l,l) over nonzero coefficients. Derived from values when
  /// unset; required together with norm_rule.
  std::optional<Rational> min_hyperbolic_norm;

  /// std::nullopt when the coefficient is not determined by the data.
  std::optional<Integer> get(long n, const RatVector& l, const Rational& norm) const;
  void add(long n, const RatVector& l, const Integer& f);
  Rational hyperbolic_floor(const Lattice& lat) const;
};

/// The q^-1 and q^0 layer of the input form: f(-1,0) = 1, f(0,l) integral
/// and even in l, f(0,0) possibly symbolic in the weight k.
class QZeroData {
 public:
  QZeroData(Lattice lattice, std::map<RatVector, Integer> q0, AffineWeight f00);

  const Lattice& lattice() const { return lattice_; }
  /// f(0,l) for l != 0.
  const std::map<RatVector, Integer>& q0() const { return q0_; }
  const AffineWeight& f00() const { return f00_; }
  QZeroData with_weight(const Rational& k) const;
  Rational weight() const;  // f(0,0)/2; errors when symbolic

  /// Full coefficient map with f(-1,0) = 1 and numeric f(0,0).
  JacobiCoefficients coefficients() const;

 private:
  Lattice lattice_;
  std::map<RatVector, Integer> q0_;
  AffineWeight f00_;
};

struct WeylVector {
  Rational A;
  RatVector B;  // lattice coordinates
  Rational C;
};

/// l > 0 when the first nonzero pairing coordinate (G l)_i is positive.
bool is_positive(const RatVector& l, const Lattice& lat);

QZeroData assemble_phi(const Lattice& lat, const std::vector<DualSet>& dual_sets,
                       const AffineWeight& f00 = AffineWeight::symbolic());

WeylVector weyl_vector(const QZeroData& phi);

struct QuadraticIdentityResult {
  std::optional<Rational> C;
  std::string report;  // why the identity fails, empty on success
};
/// Checks sum f(0,l) (G l)(G l)^T = 2C G for a single rational C.
QuadraticIdentityResult verify_quadratic_identity(const QZeroData& phi);

/// Solves (sum_{l != 0} f(0,l) + f(0,0))/24 - 1 = C for k.
Rational solve_weight(const QZeroData& phi);

struct MultiplicityResult {
  Integer multiplicity;
  std::vector<JacobiKey> unknown;  // coefficients the sum would need
};
/// mult D_v = sum_{d > 0} f(d^2 n, d l) for v = (e1, e2, l, f2, f1) with
/// n = e1 f1 + e2 f2 (the pairing of the hyperbolic parts).
MultiplicityResult divisor_multiplicity(const JacobiCoefficients& f,
                                        const AmbientVector& v, const Lattice& lat);
MultiplicityResult divisor_multiplicity(const QZeroData& phi, const AmbientVector& v);

struct CharacterDatum {
  Integer D;
  int chi_v;  // (-1)^D
};
CharacterDatum character_datum(const JacobiCoefficients& f);
CharacterDatum character_datum(const QZeroData& phi);

}  // namespace orthoforms
