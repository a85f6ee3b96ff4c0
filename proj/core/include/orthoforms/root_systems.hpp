#pragma once

#include <optional>
#include <string>
#include <vector>

#include "orthoforms/lattice.hpp"

namespace orthoforms {

struct RootDatum {
  Lattice lattice;
  std::vector<LatticeVector> roots;
  std::vector<Integer> divs;  // div of each root in the lattice, same order
};

enum class RootType { kA, kB, kC, kD, kE6, kE7, kE8, kF4, kG2 };

/// Which of the dual sets is used when the short roots of A1(d) or Bn(2d)
/// have div 2d: (i) only r/(2d), (ii) both r/d and r/(2d), (iii) only r/d.
enum class Subcase { kI, kII, kIII };

struct IrreducibleComponent {
  Lattice lattice;
  RootType type = RootType::kA;
  std::size_t rank = 0;
  Rational d;                     // half the norm of a short root
  std::vector<RatVector> roots;   // lattice coordinates, both signs
  std::vector<Integer> div_profile;  // [short] or [short, long]
  std::optional<Subcase> subcase;

  bool simply_laced() const;
  Rational short_norm() const { return 2 * d; }
  /// Display name such as "A2", "E8(3)", "B3(2)", "F4(2)".
  std::string label() const;
};

std::string type_name(RootType t);
std::string subcase_name(Subcase s);
Subcase parse_subcase(std::string_view s);

/// Primitive vectors of norm <= max_norm whose reflection preserves the lattice.
RootDatum detect_roots(const Lattice& lat, const Rational& max_norm);

/// Connected components of the non-orthogonality graph, typed by rank, root
/// count and norm classes. Ordered by (rank, type, d).
std::vector<IrreducibleComponent> decompose(const RootDatum& rd);

/// Classical Coxeter number |R|/rank. Also checks the quadratic identity
/// sum (r,x)(r,y) = 2c (x,y) on the span, where c = h*d for simply-laced
/// types and h_dual * (long norm)/2 otherwise.
Integer coxeter_number(const IrreducibleComponent& comp);
Integer dual_coxeter_number(RootType type, std::size_t rank);
Rational coxeter_identity_constant(const IrreducibleComponent& comp);
/// Exact check of the identity above; returns false instead of throwing.
bool coxeter_identity_holds(const IrreducibleComponent& comp);

Rational modified_coxeter(const IrreducibleComponent& comp);

/// An element x = root/m of the dual set.
struct DualElement {
  RatVector root;
  Integer root_div;
  Integer m;

  RatVector vector() const;
  /// x/2 lies in the dual lattice iff 2m divides div(root).
  bool half_in_dual() const { return root_div % (2 * m) == 0; }
};
using DualSet = std::vector<DualElement>;

DualSet build_dual_set(const IrreducibleComponent& comp);

/// Component of the given type realized on its own root lattice, scaled so
/// short roots have norm 2d. The div profile is declared, not computed, so
/// the same roots can stand in for any overlattice.
IrreducibleComponent model_component(RootType type, std::size_t rank,
                                     const Integer& d,
                                     std::vector<Integer> div_profile,
                                     std::optional<Subcase> subcase = {});

/// Gram matrix of the simple roots with short roots of norm 2d.
IntMatrix simple_root_gram(RootType type, std::size_t rank, const Integer& d);

bool type_admits_rank(RootType type, std::size_t rank);

}  // namespace orthoforms
