#include "orthoforms/datasets.hpp"

#include <memory>

#include "orthoforms/lattice.hpp"

namespace orthoforms {

std::vector<Integer> e4_squared_over_delta(long n_max) {
  if (n_max < -1) fail("coefficient bound must be at least -1");
  const std::size_t len = static_cast<std::size_t>(n_max + 2);
  // E8 Eisenstein series 1 + 480 sum sigma_7(n) q^n.
  std::vector<Integer> e8(len, 0);
  e8[0] = 1;
  for (std::size_t n = 1; n < len; ++n) {
    Integer s = 0;
    for (std::size_t k = 1; k <= n; ++k)
      if (n % k == 0) {
        Integer p;
        mpz_ui_pow_ui(p.get_mpz_t(), k, 7);
        s += p;
      }
    e8[n] = 480 * s;
  }
  // prod (1 - q^n)^-24.
  std::vector<Integer> p(len, 0);
  p[0] = 1;
  for (std::size_t n = 1; n < len; ++n)
    for (int rep = 0; rep < 24; ++rep)
      for (std::size_t k = n; k < len; ++k) p[k] += p[k - n];
  std::vector<Integer> c(len, 0);
  for (std::size_t i = 0; i < len; ++i)
    for (std::size_t j = 0; i + j < len; ++j) c[i + j] += e8[i] * p[j];
  return c;
}

JacobiCoefficients e8_weak_jacobi(long n_max) {
  auto c = std::make_shared<const std::vector<Integer>>(e4_squared_over_delta(n_max));
  JacobiCoefficients jc;
  jc.rank = 8;
  jc.complete_through = n_max;
  jc.min_hyperbolic_norm = Rational(-2);
  jc.norm_rule = [c, n_max](long n, const Rational& norm) -> Integer {
    const Rational m = Rational(n) - norm / 2;
    if (!is_integral(m)) return 0;
    const long mi = m.get_num().get_si();
    if (mi < -1) return 0;
    if (mi > n_max)
      throw Error(ErrorKind::kMissingData,
                  "E8 coefficient c(" + std::to_string(mi) + ") beyond the computed range " +
                      std::to_string(n_max));
    return (*c)[static_cast<std::size_t>(mi + 1)];
  };
  return jc;
}

QZeroData e8_q0_layer() {
  const Lattice e8 = builtin_lattice("E8");
  std::map<RatVector, Integer> q0;
  for (const auto& v : short_vectors(e8, 2))
    if (v.norm == 2) q0[v.coords] = 1;
  return QZeroData(e8, std::move(q0), AffineWeight::fixed(504));
}

}  // namespace orthoforms
