#pragma once

// Free differential (Fox) calculus and its evaluation through a finite
// quotient alpha and a class phi.  A word w evaluates to the |G| x |G| matrix
// t^{phi(w)} * (regular matrix of alpha(w)); a group-ring element evaluates
// linearly.  The Fox rules are d(x_j)/d(x_j) = 1, d(x_j^-1)/d(x_j) = -x_j^-1,
// d(uv) = d(u) + u d(v).

#include <map>
#include <vector>

#include "fibercheck/errors.hpp"
#include "fibercheck/laurent.hpp"
#include "fibercheck/presentation.hpp"
#include "fibercheck/quotients.hpp"
#include "fibercheck/word.hpp"

namespace fibercheck {

// Element of the integral group ring of the free group; no zero coefficients
// are stored.
struct GroupRingElement {
  std::map<Word, long long> terms;

  static GroupRingElement of_word(const Word& w, long long c = 1) {
    GroupRingElement e;
    if (c != 0) e.terms[w] = c;
    return e;
  }

  void add(const Word& w, long long c) {
    if (c == 0) return;
    auto [it, fresh] = terms.emplace(w, c);
    if (!fresh) {
      it->second += c;
      if (it->second == 0) terms.erase(it);
    }
  }

  GroupRingElement operator+(const GroupRingElement& rhs) const {
    GroupRingElement out = *this;
    for (const auto& [w, c] : rhs.terms) out.add(w, c);
    return out;
  }

  GroupRingElement operator-(const GroupRingElement& rhs) const {
    GroupRingElement out = *this;
    for (const auto& [w, c] : rhs.terms) out.add(w, -c);
    return out;
  }

  GroupRingElement operator*(const GroupRingElement& rhs) const {
    GroupRingElement out;
    for (const auto& [w1, c1] : terms)
      for (const auto& [w2, c2] : rhs.terms) out.add(w1 * w2, c1 * c2);
    return out;
  }

  bool operator==(const GroupRingElement& rhs) const { return terms == rhs.terms; }
};

inline GroupRingElement fox_derivative(const Word& w, int j) {
  if (j < 1) throw PreconditionError("generator index must be positive");
  GroupRingElement out;
  std::vector<int> prefix;
  for (int a : w.letters()) {
    if (a == j) {
      out.add(Word(std::vector<int>(prefix)), 1);
    } else if (a == -j) {
      std::vector<int> p = prefix;
      p.push_back(a);
      out.add(Word(std::move(p)), -1);
    }
    prefix.push_back(a);
  }
  return out;
}

namespace detail {

// Label permutation of alpha(w) acting by left multiplication: composing the
// per-letter tables from the last letter to the first gives
// h -> alpha(w) * h in element labels.
inline std::vector<int> word_label_perm(const FiniteQuotient& q, const Word& w) {
  std::size_t n = static_cast<std::size_t>(q.group_order);
  std::vector<int> v(n);
  for (std::size_t h = 0; h < n; ++h) v[h] = static_cast<int>(h);
  const auto& letters = w.letters();
  for (auto it = letters.rbegin(); it != letters.rend(); ++it) {
    int a = *it;
    const auto& table = a > 0 ? q.left_mult[static_cast<std::size_t>(a - 1)]
                              : q.left_mult_inv[static_cast<std::size_t>(-a - 1)];
    for (std::size_t h = 0; h < n; ++h) v[h] = table[static_cast<std::size_t>(v[h])];
  }
  return v;
}

}  // namespace detail

// Matrix of a single word under the tensor of the regular representation with
// t^phi; the workhorse of evaluate().
inline LaurentMatrix evaluate_word(const Word& w, const FiniteQuotient& q,
                                   const CohomologyClass& phi) {
  int n = static_cast<int>(q.group_order);
  std::vector<int> lp = detail::word_label_perm(q, w);
  long long e = evaluate_class(phi, w);
  LaurentMatrix m(n, n);
  for (int h = 0; h < n; ++h)
    m.at(lp[static_cast<std::size_t>(h)], h) = ZPoly::monomial(Int(1), static_cast<int>(e));
  return m;
}

inline LaurentMatrix evaluate(const GroupRingElement& elem, const FiniteQuotient& q,
                              const CohomologyClass& phi) {
  int n = static_cast<int>(q.group_order);
  LaurentMatrix m(n, n);
  for (const auto& [w, c] : elem.terms) {
    std::vector<int> lp = detail::word_label_perm(q, w);
    long long e = evaluate_class(phi, w);
    ZPoly term = ZPoly::monomial(Int(c), static_cast<int>(e));
    for (int h = 0; h < n; ++h) m.at(lp[static_cast<std::size_t>(h)], h) += term;
  }
  return m;
}

// The r*n by g*n matrix of evaluated Fox derivatives, block (i, j) being the
// derivative of relator i by generator j.
inline LaurentMatrix fox_matrix(const Presentation& pres, const FiniteQuotient& q,
                                const CohomologyClass& phi) {
  int n = static_cast<int>(q.group_order);
  int g = pres.generator_count;
  int r = pres.relator_count();
  LaurentMatrix m(r * n, g * n);
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < g; ++j) {
      LaurentMatrix block = evaluate(fox_derivative(pres.relators[static_cast<std::size_t>(i)], j + 1), q, phi);
      for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
          if (block.at(a, b).is_zero()) continue;
          m.at(i * n + a, j * n + b) = std::move(block.at(a, b));
        }
    }
  return m;
}

}  // namespace fibercheck
