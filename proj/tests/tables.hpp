#pragma once

// Hard-coded reference tables shared by the unit tests and the acceptance
// binary.

#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "orthoforms/root_systems.hpp"

namespace oracle {

using namespace orthoforms;

using Pair = std::pair<std::string, std::string>;

/// The 26 (lattice, group) pairs with free algebras, in the report's group
/// notation: O~+ discriminant kernel, O+ full group, O1+ the D4 extension.
inline const std::set<Pair>& expected_pairs() {
  static const std::set<Pair> pairs = {
      {"A1", "O+"},  {"2A1", "O+"}, {"3A1", "O+"}, {"4A1", "O+"},  {"A2", "O~+"},
      {"A2", "O+"},  {"A3", "O~+"}, {"A3", "O+"},  {"A4", "O~+"},  {"A5", "O~+"},
      {"A6", "O~+"}, {"A7", "O~+"}, {"D4", "O~+"}, {"D5", "O~+"},  {"D6", "O~+"},
      {"D7", "O~+"}, {"D8", "O~+"}, {"D4", "O+"},  {"D5", "O+"},   {"D6", "O+"},
      {"D7", "O+"},  {"D8", "O+"},  {"D4", "O1+"}, {"E6", "O~+"},  {"E7", "O+"},
      {"E8", "O+"},
  };
  return pairs;
}

struct TableCase {
  RootType type;
  std::size_t rank;
  long d;
  std::vector<Integer> profile;
  std::optional<Subcase> subcase;
  Rational expected;
};

/// Every (type, rank <= 8, d in 1..3, subcase) with its modified Coxeter number.
inline std::vector<TableCase> coxeter_table() {
  std::vector<TableCase> out;
  for (long d = 1; d <= 3; ++d) {
    const Rational q(d);
    for (std::size_t n = 1; n <= 8; ++n) {
      const Rational r(static_cast<long>(n));
      out.push_back({RootType::kA, n, d, {d}, {}, (r + 1) / q});
      if (n == 1) {
        out.push_back({RootType::kA, 1, d, {2 * d}, Subcase::kI, 1 / (2 * q)});
        out.push_back({RootType::kA, 1, d, {2 * d}, Subcase::kII, 2 / q});
        out.push_back({RootType::kA, 1, d, {2 * d}, Subcase::kIII, 3 / (2 * q)});
      }
      if (n >= 2) {
        out.push_back({RootType::kB, n, d, {d, 2 * d}, {}, (r + 1) / q});
        out.push_back({RootType::kB, n, d, {2 * d, 2 * d}, Subcase::kI, (2 * r - 1) / (2 * q)});
        out.push_back({RootType::kB, n, d, {2 * d, 2 * d}, Subcase::kII, (r + 1) / q});
        out.push_back({RootType::kB, n, d, {2 * d, 2 * d}, Subcase::kIII, (2 * r + 1) / (2 * q)});
      }
      if (n >= 3) out.push_back({RootType::kC, n, d, {d, 2 * d}, {}, (2 * r - 1) / q});
      if (n >= 4) out.push_back({RootType::kD, n, d, {d}, {}, 2 * (r - 1) / q});
    }
    out.push_back({RootType::kE6, 6, d, {d}, {}, 12 / q});
    out.push_back({RootType::kE7, 7, d, {d}, {}, 18 / q});
    out.push_back({RootType::kE8, 8, d, {d}, {}, 30 / q});
    out.push_back({RootType::kG2, 2, d, {d, 3 * d}, {}, 4 / q});
    out.push_back({RootType::kF4, 4, d, {d, 2 * d}, {}, 9 / q});
  }
  return out;
}

inline std::string describe(const TableCase& c) {
  return type_name(c.type) + std::to_string(c.rank) + " d=" + std::to_string(c.d) +
         (c.subcase ? " (" + subcase_name(*c.subcase) + ")" : "");
}

}  // namespace oracle
