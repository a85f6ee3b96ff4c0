#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "orthoforms/arith.hpp"
#include "orthoforms/root_systems.hpp"

namespace orthoforms {

enum class GroupLabel { kDiscriminantKernel, kFullOPlus, kO1Plus };

/// "O~+", "O+", "O1+".
std::string group_name(GroupLabel g);

struct CandidateComponent {
  RootType type = RootType::kA;
  std::size_t rank = 0;
  Integer d = 1;  // short roots have norm 2d
  Rational h;     // modified Coxeter number

  std::string label() const;
  friend bool operator==(const CandidateComponent&, const CandidateComponent&) = default;
};

struct CandidateSystem {
  std::vector<CandidateComponent> components;
  std::size_t total_rank = 0;
  std::optional<Rational> common_h;

  std::string label() const;  // e.g. "E8(3)", "2F4(2)"
  friend bool operator==(const CandidateSystem&, const CandidateSystem&) = default;
};

enum class Verdict { kAccepted, kExcluded, kUnresolved };
enum class Evidence { kComputed, kCitedFact };

struct ArithmeticCheck {
  std::string name;
  std::string statement;
  bool passed = false;
  std::vector<std::pair<std::string, std::string>> values;
};

struct ClassificationRecord {
  CandidateSystem candidate;
  Verdict verdict = Verdict::kUnresolved;
  std::string lattice_label;          // accepted only
  std::optional<GroupLabel> group;    // accepted only
  std::string reason;                 // excluded only
  std::string citation;               // short description of the argument
  std::optional<Evidence> evidence;   // excluded only
  std::vector<ArithmeticCheck> checks;
};

/// Components allowed by the integrality and h >= rank + 1 filters, in pool order.
std::vector<CandidateComponent> allowed_pool(std::size_t max_rank = 8);

/// Multisets of pool components with equal integral h >= total rank + 1.
std::vector<CandidateSystem> enumerate_candidates(std::size_t max_rank = 8);

ClassificationRecord resolve(const CandidateSystem& candidate);

struct ClassificationReport {
  std::size_t max_rank = 8;
  bool partial = false;
  std::vector<ClassificationRecord> accepted;
  std::vector<ClassificationRecord> excluded;
  std::size_t unresolved = 0;
  std::vector<ArithmeticCheck> ledger;
};

inline constexpr std::size_t kExpectedAccepted = 26;

/// Runs the whole pipeline. With max_rank 8 anything other than 26 accepted
/// pairs, an unresolved candidate or a failing ledger check is an internal error.
ClassificationReport full_table(std::size_t max_rank = 8);

/// The exact-arithmetic checks behind the exclusions.
std::vector<ArithmeticCheck> ledger_arithmetic_checks();

/// Plain-text table of the accepted pairs, six per row.
std::string render_table(const ClassificationReport& report);

}  // namespace orthoforms
