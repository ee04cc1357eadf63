#pragma once

// Twisted Alexander polynomials through finite quotients.
//
// For a deficiency-one presentation, delta1 is computed Wada-style: delete
// the generator column j with phi(x_j) != 0, take the determinant of the
// remaining evaluated Fox matrix, then correct by delta0 / det(E(x_j) - I).
// delta0 itself is the order of the twisted H_0; because the regular cover is
// connected, that order is t^m - 1 where m is the divisibility of phi
// restricted to the kernel of the quotient.  The identity
//    delta1 * det(E(x_j) - I) = det(A_j) * delta0   (up to +-t^k)
// is re-verified on every computation, and the polynomial vanishes exactly
// when the deleted-column determinant does.

#include <optional>
#include <vector>

#include "fibercheck/errors.hpp"
#include "fibercheck/foxcalc.hpp"
#include "fibercheck/laurent.hpp"
#include "fibercheck/presentation.hpp"
#include "fibercheck/quotients.hpp"

namespace fibercheck {

struct TwistedAlexanderResult {
  ZPoly delta1;             // normalized; the zero polynomial iff vanishing
  bool vanishing = false;
  ZPoly delta0;             // t^div - 1
  ZPoly wada_num;           // det of the column-deleted Fox matrix, as computed
  ZPoly wada_den;           // det(E(x_j) - I) for the deleted column
  int column_used = 0;      // 1-based index of the deleted generator column
  long long quotient_order = 0;
  long long divisibility = 0;  // div of the class on the kernel of the quotient

  bool monic() const {
    if (vanishing) throw PreconditionError("vanishing polynomial has no leading coefficient");
    return is_monic(delta1);
  }
  int delta1_degree() const {
    if (vanishing) throw PreconditionError("vanishing polynomial has no degree");
    return degree(delta1);
  }
};

// det(E(x_j) - I) through the cycle structure of left multiplication by
// alpha(x_j): a cycle of length c contributes (-1)^(c+1) (t^(a c) - 1) with
// a = phi(x_j).  Nonzero whenever a != 0, which is why column j is usable.
inline ZPoly wada_denominator(const FiniteQuotient& q, const CohomologyClass& phi, int j) {
  if (j < 1 || j > static_cast<int>(phi.images.size()))
    throw PreconditionError("generator index out of range");
  long long a = phi.images[static_cast<std::size_t>(j - 1)];
  if (a == 0) throw PreconditionError("wada denominator needs phi(x_j) != 0");
  const auto& perm = q.left_mult[static_cast<std::size_t>(j - 1)];
  long long n = q.group_order;
  std::vector<char> seen(static_cast<std::size_t>(n), 0);
  ZPoly prod = ZPoly::constant(Int(1));
  long long cycles = 0;
  for (long long s = 0; s < n; ++s) {
    if (seen[static_cast<std::size_t>(s)]) continue;
    long long len = 0;
    long long x = s;
    while (!seen[static_cast<std::size_t>(x)]) {
      seen[static_cast<std::size_t>(x)] = 1;
      x = perm[static_cast<std::size_t>(x)];
      ++len;
    }
    ++cycles;
    prod *= ZPoly::from_pairs({{0, Int(-1)}, {static_cast<int>(a * len), Int(1)}});
  }
  if ((n + cycles) % 2 != 0) prod = -prod;
  return prod;
}

// Order of the twisted H_0: t^m - 1 with m = div of the class on the kernel.
inline ZPoly delta0(const Presentation& pres, const FiniteQuotient& q, const CohomologyClass& phi) {
  long long m = div_phi_alpha(q, pres, phi);
  return ZPoly::from_pairs({{0, Int(-1)}, {static_cast<int>(m), Int(1)}});
}

namespace detail {

inline LaurentMatrix fox_matrix_without_column(const Presentation& pres, const FiniteQuotient& q,
                                               const CohomologyClass& phi, int skip) {
  int n = static_cast<int>(q.group_order);
  int g = pres.generator_count;
  int r = pres.relator_count();
  LaurentMatrix m(r * n, (g - 1) * n);
  int jc = 0;
  for (int j = 1; j <= g; ++j) {
    if (j == skip) continue;
    for (int i = 0; i < r; ++i) {
      LaurentMatrix block = evaluate(fox_derivative(pres.relators[static_cast<std::size_t>(i)], j), q, phi);
      for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
          if (block.at(a, b).is_zero()) continue;
          m.at(i * n + a, jc * n + b) = std::move(block.at(a, b));
        }
    }
    ++jc;
  }
  return m;
}

}  // namespace detail

// Wada computation with an explicit column choice; twisted_alexander picks
// the smallest usable column.  Requires a deficiency-one presentation and
// phi(x_j) != 0.
inline TwistedAlexanderResult twisted_alexander_with_column(const Presentation& pres,
                                                            const FiniteQuotient& q,
                                                            const CohomologyClass& phi, int j) {
  validate_class(pres, phi);
  if (!pres.deficiency_one())
    throw PreconditionError("presentation must have deficiency one (relators = generators - 1)");
  if (j < 1 || j > pres.generator_count) throw PreconditionError("column index out of range");
  if (phi.images[static_cast<std::size_t>(j - 1)] == 0)
    throw PreconditionError("deleted column must have phi(x_j) != 0");

  TwistedAlexanderResult res;
  res.column_used = j;
  res.quotient_order = q.group_order;
  res.divisibility = div_phi_alpha(q, pres, phi);
  res.delta0 = ZPoly::from_pairs({{0, Int(-1)}, {static_cast<int>(res.divisibility), Int(1)}});
  res.wada_den = wada_denominator(q, phi, j);
  res.wada_num = det(detail::fox_matrix_without_column(pres, q, phi, j));

  if (res.wada_num.is_zero()) {
    res.vanishing = true;
    res.delta1 = ZPoly();
    return res;
  }

  auto quotient = exact_div(res.wada_num * res.delta0, res.wada_den);
  if (!quotient) throw InternalError("wada denominator failed to divide numerator * delta0");
  auto integral = to_integral(*quotient);
  if (!integral) throw InternalError("wada quotient is not integral");
  res.delta1 = normalize(*integral);
  if (normalize(res.wada_num * res.delta0) != normalize(res.delta1 * res.wada_den))
    throw InternalError("wada identity failed to re-verify");
  return res;
}

inline TwistedAlexanderResult twisted_alexander(const Presentation& pres, const FiniteQuotient& q,
                                                const CohomologyClass& phi) {
  validate_class(pres, phi);
  for (int j = 1; j <= pres.generator_count; ++j)
    if (phi.images[static_cast<std::size_t>(j - 1)] != 0)
      return twisted_alexander_with_column(pres, q, phi, j);
  throw PreconditionError("class is trivial");  // unreachable after validate_class
}

// Whether delta1 vanishes identically, decided without computing delta1 when
// possible: full-rank probes (exact certificates) settle the common case, a
// deleted-column determinant or an exact elimination settles the rest.
inline bool vanishing_test(const Presentation& pres, const FiniteQuotient& q,
                           const CohomologyClass& phi) {
  validate_class(pres, phi);
  int n = static_cast<int>(q.group_order);
  int g = pres.generator_count;
  int r = pres.relator_count();
  if (r < g - 1) return true;  // rank <= r n < (g-1) n
  int target = (g - 1) * n;
  if (target == 0) return false;  // 1-generator, deficiency-one: H_1 is torsion
  LaurentMatrix m = fox_matrix(pres, q, phi);
  // evaluation never raises rank, so hitting the ceiling is a certificate
  const int probes[][2] = {{2, 0}, {3, 1}, {-2, 2}};
  for (auto [t0, pi] : probes)
    if (rank_evaluation_probe(m, t0, pi) >= target) return false;
  if (pres.deficiency_one()) {
    for (int j = 1; j <= g; ++j)
      if (phi.images[static_cast<std::size_t>(j - 1)] != 0)
        return det(detail::fox_matrix_without_column(pres, q, phi, j)).is_zero();
  }
  return rank_over_fraction_field(m) < target;
}

// Reference computation of delta1 through minor gcds: exponential in the
// worst case, intended for small cross-checks and presentations with extra
// relators.  Requires at least g-1 relators and some column with
// phi(x_j) != 0.
inline ZPoly delta1_via_minor_gcd(const Presentation& pres, const FiniteQuotient& q,
                                  const CohomologyClass& phi) {
  validate_class(pres, phi);
  int n = static_cast<int>(q.group_order);
  int g = pres.generator_count;
  int r = pres.relator_count();
  if (r < g - 1) throw PreconditionError("minor-gcd route needs at least g-1 relators");
  int k = (g - 1) * n;  // minor order
  if (k == 0) return ZPoly();  // no columns left to delete: conventionally zero

  ZPoly d0 = delta0(pres, q, phi);
  ZPoly acc;  // gcd accumulator, starts at zero
  bool any_column = false;
  for (int j = 1; j <= g; ++j) {
    if (phi.images[static_cast<std::size_t>(j - 1)] == 0) continue;
    any_column = true;
    LaurentMatrix b = detail::fox_matrix_without_column(pres, q, phi, j);
    int rows = b.rows();

    // gcd over all maximal minors (choices of k rows out of rows)
    ZPoly val;
    std::vector<int> pick(static_cast<std::size_t>(k));
    for (int i = 0; i < k; ++i) pick[static_cast<std::size_t>(i)] = i;
    if (rows < k) {
      val = ZPoly();
    } else {
      while (true) {
        LaurentMatrix sub(k, k);
        for (int a = 0; a < k; ++a)
          for (int c = 0; c < k; ++c) sub.at(a, c) = b.at(pick[static_cast<std::size_t>(a)], c);
        val = gcd(val, det(sub));
        // next combination
        int i = k - 1;
        while (i >= 0 && pick[static_cast<std::size_t>(i)] == rows - k + i) --i;
        if (i < 0) break;
        ++pick[static_cast<std::size_t>(i)];
        for (int t = i + 1; t < k; ++t)
          pick[static_cast<std::size_t>(t)] = pick[static_cast<std::size_t>(t - 1)] + 1;
      }
    }

    ZPoly den = wada_denominator(q, phi, j);
    ZPoly dj;
    if (!val.is_zero()) {
      auto quo = exact_div(val * d0, den);
      if (!quo) throw InternalError("minor gcd correction failed to divide");
      auto integral = to_integral(*quo);
      if (!integral) throw InternalError("minor gcd correction is not integral");
      dj = normalize(*integral);
    }
    acc = gcd(acc, dj);
  }
  if (!any_column) throw PreconditionError("no generator column with phi(x_j) != 0");
  return normalize(acc);
}

}  // namespace fibercheck
