#pragma once

// Exact arithmetic for Laurent polynomials in one variable t over Z (and Q),
// and matrices over them.  Nothing here uses floating point and no result is
// probabilistic: determinants of small matrices use fraction-free (Bareiss)
// elimination, large ones use modular evaluation/interpolation with a
// rigorous coefficient bound, so both paths are exact including units.

#include <algorithm>
#include <cstdint>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "fibercheck/errors.hpp"

namespace fibercheck {

using Int = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

// Dense Laurent polynomial: c_[i] is the coefficient of t^(min_ + i).
// Invariant: c_ is empty (the zero polynomial, min_ == 0) or both ends of c_
// are nonzero.  Interior zeros are fine; term iteration skips them.
template <typename Coeff>
class LaurentPoly {
 public:
  LaurentPoly() = default;

  static LaurentPoly constant(Coeff c) { return monomial(std::move(c), 0); }

  static LaurentPoly monomial(Coeff c, int exp) {
    LaurentPoly p;
    if (c != 0) {
      p.min_ = exp;
      p.c_.push_back(std::move(c));
    }
    return p;
  }

  static LaurentPoly from_pairs(const std::vector<std::pair<int, Coeff>>& pairs) {
    LaurentPoly p;
    for (const auto& [e, c] : pairs) p.add_term(e, c);
    return p;
  }

  bool is_zero() const { return c_.empty(); }

  int min_exp() const {
    require_nonzero();
    return min_;
  }
  int max_exp() const {
    require_nonzero();
    return min_ + static_cast<int>(c_.size()) - 1;
  }
  const Coeff& leading() const {
    require_nonzero();
    return c_.back();
  }
  const Coeff& trailing() const {
    require_nonzero();
    return c_.front();
  }

  Coeff coeff(int exp) const {
    int i = exp - min_;
    if (i < 0 || i >= static_cast<int>(c_.size())) return Coeff(0);
    return c_[static_cast<std::size_t>(i)];
  }

  std::size_t term_count() const {
    std::size_t n = 0;
    for (const Coeff& c : c_)
      if (c != 0) ++n;
    return n;
  }

  // Calls f(exponent, coefficient) for each nonzero term, ascending exponent.
  template <typename F>
  void for_each_term(F&& f) const {
    for (std::size_t i = 0; i < c_.size(); ++i)
      if (c_[i] != 0) f(min_ + static_cast<int>(i), c_[i]);
  }

  std::vector<std::pair<int, Coeff>> terms() const {
    std::vector<std::pair<int, Coeff>> out;
    for_each_term([&](int e, const Coeff& c) { out.emplace_back(e, c); });
    return out;
  }

  LaurentPoly operator-() const {
    LaurentPoly p = *this;
    for (Coeff& c : p.c_) c = -c;
    return p;
  }

  LaurentPoly operator+(const LaurentPoly& rhs) const {
    if (is_zero()) return rhs;
    if (rhs.is_zero()) return *this;
    int lo = std::min(min_, rhs.min_);
    int hi = std::max(max_exp(), rhs.max_exp());
    LaurentPoly out;
    out.min_ = lo;
    out.c_.assign(static_cast<std::size_t>(hi - lo + 1), Coeff(0));
    for (std::size_t i = 0; i < c_.size(); ++i)
      out.c_[static_cast<std::size_t>(min_ - lo) + i] += c_[i];
    for (std::size_t i = 0; i < rhs.c_.size(); ++i)
      out.c_[static_cast<std::size_t>(rhs.min_ - lo) + i] += rhs.c_[i];
    out.trim();
    return out;
  }

  LaurentPoly operator-(const LaurentPoly& rhs) const { return *this + (-rhs); }

  LaurentPoly operator*(const LaurentPoly& rhs) const {
    if (is_zero() || rhs.is_zero()) return LaurentPoly();
    LaurentPoly out;
    out.min_ = min_ + rhs.min_;
    out.c_.assign(c_.size() + rhs.c_.size() - 1, Coeff(0));
    for (std::size_t i = 0; i < c_.size(); ++i) {
      if (c_[i] == 0) continue;
      for (std::size_t j = 0; j < rhs.c_.size(); ++j) {
        if (rhs.c_[j] == 0) continue;
        out.c_[i + j] += c_[i] * rhs.c_[j];
      }
    }
    out.trim();
    return out;
  }

  LaurentPoly& operator+=(const LaurentPoly& rhs) { return *this = *this + rhs; }
  LaurentPoly& operator-=(const LaurentPoly& rhs) { return *this = *this - rhs; }
  LaurentPoly& operator*=(const LaurentPoly& rhs) { return *this = *this * rhs; }

  bool operator==(const LaurentPoly& rhs) const {
    return min_ == rhs.min_ && c_ == rhs.c_;
  }
  bool operator!=(const LaurentPoly& rhs) const { return !(*this == rhs); }

  // Multiplication by t^k.
  LaurentPoly shifted(int k) const {
    LaurentPoly p = *this;
    if (!p.c_.empty()) p.min_ += k;
    return p;
  }

  LaurentPoly scaled(const Coeff& s) const {
    if (s == 0) return LaurentPoly();
    LaurentPoly p = *this;
    for (Coeff& c : p.c_) c *= s;
    return p;
  }

  // Substitute a concrete value for t.  T must support division when the
  // polynomial has negative exponents.
  template <typename T>
  T evaluate_at(const T& x) const {
    T acc(0);
    T px(1);
    // positive part via Horner on exponents >= 0, negative part directly
    for (std::size_t i = 0; i < c_.size(); ++i) {
      int e = min_ + static_cast<int>(i);
      if (c_[i] == 0) continue;
      T val(1);
      if (e >= 0) {
        for (int k = 0; k < e; ++k) val *= x;
      } else {
        for (int k = 0; k < -e; ++k) val *= x;
        val = T(1) / val;
      }
      acc += T(c_[i]) * val;
    }
    (void)px;
    return acc;
  }

  std::string to_string() const {
    if (is_zero()) return "0";
    std::ostringstream os;
    bool first = true;
    for (int i = static_cast<int>(c_.size()) - 1; i >= 0; --i) {
      const Coeff& c = c_[static_cast<std::size_t>(i)];
      if (c == 0) continue;
      bool neg = c < 0;
      Coeff mag = neg ? Coeff(-c) : c;
      if (first) {
        if (neg) os << "-";
        first = false;
      } else {
        os << (neg ? " - " : " + ");
      }
      int e = min_ + i;
      std::ostringstream cs;
      cs << mag;
      bool unit = (cs.str() == "1");
      if (e == 0) {
        os << cs.str();
      } else {
        if (!unit) {
          // parenthesize coefficients that carry their own '/' (rationals)
          if (cs.str().find('/') != std::string::npos)
            os << "(" << cs.str() << ")";
          else
            os << cs.str();
        }
        os << "t";
        if (e != 1) os << "^" << e;
      }
    }
    return os.str();
  }

 private:
  void require_nonzero() const {
    if (c_.empty()) throw PreconditionError("zero polynomial has no degree data");
  }

  void add_term(int exp, const Coeff& c) {
    if (c == 0) return;
    if (c_.empty()) {
      min_ = exp;
      c_.push_back(c);
      return;
    }
    int lo = std::min(min_, exp);
    int hi = std::max(min_ + static_cast<int>(c_.size()) - 1, exp);
    if (lo < min_ || hi > min_ + static_cast<int>(c_.size()) - 1) {
      std::vector<Coeff> nc(static_cast<std::size_t>(hi - lo + 1), Coeff(0));
      for (std::size_t i = 0; i < c_.size(); ++i)
        nc[static_cast<std::size_t>(min_ - lo) + i] = std::move(c_[i]);
      c_ = std::move(nc);
      min_ = lo;
    }
    c_[static_cast<std::size_t>(exp - min_)] += c;
    trim();
  }

  void trim() {
    std::size_t b = 0, e = c_.size();
    while (b < e && c_[b] == 0) ++b;
    while (e > b && c_[e - 1] == 0) --e;
    if (b == e) {
      c_.clear();
      min_ = 0;
      return;
    }
    if (b > 0 || e < c_.size()) {
      std::vector<Coeff> nc(c_.begin() + static_cast<std::ptrdiff_t>(b),
                            c_.begin() + static_cast<std::ptrdiff_t>(e));
      min_ += static_cast<int>(b);
      c_ = std::move(nc);
    }
  }

  int min_ = 0;
  std::vector<Coeff> c_;
};

using ZPoly = LaurentPoly<Int>;
using QPoly = LaurentPoly<Rat>;

template <typename Coeff>
std::string to_string(const LaurentPoly<Coeff>& p) {
  return p.to_string();
}

// Span of exponents, max - min.  A nonzero constant has degree 0.
template <typename Coeff>
int degree(const LaurentPoly<Coeff>& p) {
  if (p.is_zero()) throw PreconditionError("degree of the zero polynomial is undefined");
  return p.max_exp() - p.min_exp();
}

inline bool is_monic(const ZPoly& p) {
  if (p.is_zero()) throw PreconditionError("monicness of the zero polynomial is undefined");
  return p.leading() == 1 || p.leading() == -1;
}

// Canonical associate: lowest exponent shifted to 0, leading coefficient
// positive.  Two polynomials are associates over Z[t^{±1}] iff they
// normalize identically.
inline ZPoly normalize(const ZPoly& p) {
  if (p.is_zero()) return p;
  ZPoly q = p.shifted(-p.min_exp());
  if (q.leading() < 0) q = -q;
  return q;
}

inline Int content(const ZPoly& p) {
  Int g = 0;
  p.for_each_term([&](int, const Int& c) { g = boost::multiprecision::gcd(g, c); });
  return g;  // 0 for the zero polynomial, otherwise positive
}

inline ZPoly primitive_part(const ZPoly& p) {
  if (p.is_zero()) return p;
  Int c = content(p);
  ZPoly out;
  std::vector<std::pair<int, Int>> ts;
  p.for_each_term([&](int e, const Int& v) { ts.emplace_back(e, v / c); });
  return ZPoly::from_pairs(ts);
}

namespace detail {

// Dense ordinary polynomials over Z as coefficient vectors, v[i] the
// coefficient of t^i, no trailing zeros.  Used by gcd and Bareiss division.
using ZVec = std::vector<Int>;

inline void trim_vec(ZVec& v) {
  while (!v.empty() && v.back() == 0) v.pop_back();
}

inline ZVec vec_of(const ZPoly& p) {
  ZVec v;
  if (p.is_zero()) return v;
  v.assign(static_cast<std::size_t>(p.max_exp() - p.min_exp() + 1), Int(0));
  p.for_each_term([&](int e, const Int& c) { v[static_cast<std::size_t>(e - p.min_exp())] = c; });
  return v;
}

inline ZPoly poly_of(const ZVec& v, int shift) {
  std::vector<std::pair<int, Int>> ts;
  for (std::size_t i = 0; i < v.size(); ++i)
    if (v[i] != 0) ts.emplace_back(static_cast<int>(i) + shift, v[i]);
  return ZPoly::from_pairs(ts);
}

// Pseudo-remainder: returns r with lc(b)^(deg a - deg b + 1) * a = q*b + r.
inline ZVec prem(ZVec a, const ZVec& b) {
  trim_vec(a);
  const Int& lb = b.back();
  int db = static_cast<int>(b.size()) - 1;
  int e = static_cast<int>(a.size()) - 1 - db + 1;
  while (!a.empty() && static_cast<int>(a.size()) - 1 >= db) {
    Int c = a.back();
    int shift = static_cast<int>(a.size()) - 1 - db;
    for (Int& x : a) x *= lb;
    for (int i = 0; i <= db; ++i)
      a[static_cast<std::size_t>(shift + i)] -= c * b[static_cast<std::size_t>(i)];
    trim_vec(a);
    --e;
  }
  if (e > 0) {
    Int f = boost::multiprecision::pow(lb, static_cast<unsigned>(e));
    for (Int& x : a) x *= f;
  }
  return a;
}

inline void div_const_exact(ZVec& v, const Int& d) {
  for (Int& x : v) {
    if (x % d != 0) throw InternalError("inexact constant division in polynomial computation");
    x /= d;
  }
}

// Exact division in Z[t]; nullopt when b does not divide a exactly.
inline std::optional<ZVec> exact_div_vec(ZVec a, const ZVec& b) {
  trim_vec(a);
  if (b.empty()) throw PreconditionError("polynomial division by zero");
  if (a.empty()) return ZVec{};
  int db = static_cast<int>(b.size()) - 1;
  if (static_cast<int>(a.size()) - 1 < db) return std::nullopt;
  ZVec q(a.size() - b.size() + 1, Int(0));
  while (!a.empty() && static_cast<int>(a.size()) - 1 >= db) {
    if (a.back() % b.back() != 0) return std::nullopt;
    Int c = a.back() / b.back();
    int shift = static_cast<int>(a.size()) - 1 - db;
    q[static_cast<std::size_t>(shift)] = c;
    for (int i = 0; i <= db; ++i)
      a[static_cast<std::size_t>(shift + i)] -= c * b[static_cast<std::size_t>(i)];
    trim_vec(a);
  }
  if (!a.empty()) return std::nullopt;
  return q;
}

// Subresultant polynomial remainder sequence on primitive inputs; returns the
// primitive gcd in Z[t].  Keeps coefficient growth polynomial while staying
// entirely in exact integer arithmetic.
inline ZVec subresultant_gcd(ZVec f, ZVec g) {
  trim_vec(f);
  trim_vec(g);
  if (f.empty()) return g;
  if (g.empty()) return f;
  if (f.size() < g.size()) f.swap(g);
  Int gg = 1, h = 1;
  while (true) {
    int delta = static_cast<int>(f.size()) - static_cast<int>(g.size());
    ZVec r = prem(f, g);
    if (r.empty()) break;
    Int divisor = gg * boost::multiprecision::pow(h, static_cast<unsigned>(delta));
    div_const_exact(r, divisor);
    f.swap(g);
    g = std::move(r);
    gg = f.back();
    if (delta == 0) {
      // h unchanged
    } else if (delta == 1) {
      h = gg;
    } else {
      Int num = boost::multiprecision::pow(gg, static_cast<unsigned>(delta));
      Int den = boost::multiprecision::pow(h, static_cast<unsigned>(delta - 1));
      if (num % den != 0) throw InternalError("subresultant bookkeeping went inexact");
      h = num / den;
    }
  }
  // make primitive
  Int c = 0;
  for (const Int& x : g) c = boost::multiprecision::gcd(c, x);
  if (c > 1) div_const_exact(g, c);
  return g;
}

}  // namespace detail

// Gcd in Z[t^{±1}], returned in normalized form.  gcd(p, 0) = normalize(p).
inline ZPoly gcd(const ZPoly& p, const ZPoly& q) {
  if (p.is_zero()) return normalize(q);
  if (q.is_zero()) return normalize(p);
  Int cp = content(p), cq = content(q);
  detail::ZVec f = detail::vec_of(primitive_part(p));
  detail::ZVec g = detail::vec_of(primitive_part(q));
  detail::ZVec d = detail::subresultant_gcd(std::move(f), std::move(g));
  ZPoly prim = detail::poly_of(d, 0);
  return normalize(prim.scaled(boost::multiprecision::gcd(cp, cq)));
}

inline QPoly to_rational(const ZPoly& p) {
  std::vector<std::pair<int, Rat>> ts;
  p.for_each_term([&](int e, const Int& c) { ts.emplace_back(e, Rat(c)); });
  return QPoly::from_pairs(ts);
}

// nullopt unless every coefficient is an integer.
inline std::optional<ZPoly> to_integral(const QPoly& p) {
  std::vector<std::pair<int, Int>> ts;
  bool ok = true;
  p.for_each_term([&](int e, const Rat& c) {
    if (boost::multiprecision::denominator(c) != 1) ok = false;
    else ts.emplace_back(e, boost::multiprecision::numerator(c));
  });
  if (!ok) return std::nullopt;
  return ZPoly::from_pairs(ts);
}

// Exact division of Laurent polynomials over Q: returns p/q when q divides p
// in Q[t^{±1}], nullopt otherwise.  Throws on q == 0.
inline std::optional<QPoly> exact_div(const ZPoly& p, const ZPoly& q) {
  if (q.is_zero()) throw PreconditionError("exact_div: division by the zero polynomial");
  if (p.is_zero()) return QPoly();
  // long division on the ordinary parts, shift bookkeeping at the end
  std::vector<Rat> a(static_cast<std::size_t>(degree(p) + 1), Rat(0));
  std::vector<Rat> b(static_cast<std::size_t>(degree(q) + 1), Rat(0));
  p.for_each_term([&](int e, const Int& c) { a[static_cast<std::size_t>(e - p.min_exp())] = Rat(c); });
  q.for_each_term([&](int e, const Int& c) { b[static_cast<std::size_t>(e - q.min_exp())] = Rat(c); });
  if (a.size() < b.size()) return std::nullopt;
  std::vector<Rat> quo(a.size() - b.size() + 1, Rat(0));
  for (int k = static_cast<int>(quo.size()) - 1; k >= 0; --k) {
    Rat c = a[static_cast<std::size_t>(k) + b.size() - 1] / b.back();
    quo[static_cast<std::size_t>(k)] = c;
    if (c != 0)
      for (std::size_t i = 0; i < b.size(); ++i)
        a[static_cast<std::size_t>(k) + i] -= c * b[i];
  }
  for (const Rat& r : a)
    if (r != 0) return std::nullopt;
  std::vector<std::pair<int, Rat>> ts;
  int shift = p.min_exp() - q.min_exp();
  for (std::size_t i = 0; i < quo.size(); ++i)
    if (quo[i] != 0) ts.emplace_back(static_cast<int>(i) + shift, quo[i]);
  return QPoly::from_pairs(ts);
}

// Exact division in Z[t^{±1}]; nullopt when not divisible over Z.
inline std::optional<ZPoly> exact_div_integral(const ZPoly& p, const ZPoly& q) {
  if (q.is_zero()) throw PreconditionError("exact_div: division by the zero polynomial");
  if (p.is_zero()) return ZPoly();
  auto r = detail::exact_div_vec(detail::vec_of(p), detail::vec_of(q));
  if (!r) return std::nullopt;
  return detail::poly_of(*r, p.min_exp() - q.min_exp());
}

// ---------------------------------------------------------------------------
// Matrices over Z[t^{±1}]

class LaurentMatrix {
 public:
  LaurentMatrix() = default;
  LaurentMatrix(int rows, int cols)
      : rows_(rows), cols_(cols), a_(static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols)) {}

  static LaurentMatrix identity(int n) {
    LaurentMatrix m(n, n);
    for (int i = 0; i < n; ++i) m.at(i, i) = ZPoly::constant(Int(1));
    return m;
  }

  int rows() const { return rows_; }
  int cols() const { return cols_; }

  ZPoly& at(int r, int c) { return a_[static_cast<std::size_t>(r) * cols_ + c]; }
  const ZPoly& at(int r, int c) const { return a_[static_cast<std::size_t>(r) * cols_ + c]; }

  bool operator==(const LaurentMatrix& rhs) const {
    return rows_ == rhs.rows_ && cols_ == rhs.cols_ && a_ == rhs.a_;
  }

  LaurentMatrix operator*(const LaurentMatrix& rhs) const {
    if (cols_ != rhs.rows_) throw PreconditionError("matrix product shape mismatch");
    LaurentMatrix out(rows_, rhs.cols_);
    for (int i = 0; i < rows_; ++i)
      for (int k = 0; k < cols_; ++k) {
        const ZPoly& x = at(i, k);
        if (x.is_zero()) continue;
        for (int j = 0; j < rhs.cols_; ++j) {
          if (rhs.at(k, j).is_zero()) continue;
          out.at(i, j) += x * rhs.at(k, j);
        }
      }
    return out;
  }

  LaurentMatrix operator-(const LaurentMatrix& rhs) const {
    if (rows_ != rhs.rows_ || cols_ != rhs.cols_)
      throw PreconditionError("matrix difference shape mismatch");
    LaurentMatrix out(rows_, cols_);
    for (std::size_t i = 0; i < a_.size(); ++i) out.a_[i] = a_[i] - rhs.a_[i];
    return out;
  }

  LaurentMatrix operator+(const LaurentMatrix& rhs) const {
    if (rows_ != rhs.rows_ || cols_ != rhs.cols_)
      throw PreconditionError("matrix sum shape mismatch");
    LaurentMatrix out(rows_, cols_);
    for (std::size_t i = 0; i < a_.size(); ++i) out.a_[i] = a_[i] + rhs.a_[i];
    return out;
  }

 private:
  int rows_ = 0, cols_ = 0;
  std::vector<ZPoly> a_;
};

namespace detail {

// Shift every row so its lowest exponent becomes 0; the returned shift is the
// total exponent taken out, i.e. det(M) = t^shift * det(cleared).
// Rows that are identically zero are reported via the zero_row flag.
struct ClearedRows {
  std::vector<std::vector<ZPoly>> m;
  int shift = 0;
  bool zero_row = false;
};

inline ClearedRows clear_rows(const LaurentMatrix& M) {
  ClearedRows out;
  out.m.assign(static_cast<std::size_t>(M.rows()), {});
  for (int i = 0; i < M.rows(); ++i) {
    bool any = false;
    int lo = 0;
    for (int j = 0; j < M.cols(); ++j) {
      const ZPoly& p = M.at(i, j);
      if (p.is_zero()) continue;
      if (!any || p.min_exp() < lo) lo = p.min_exp();
      any = true;
    }
    if (!any) {
      out.zero_row = true;
      out.m[static_cast<std::size_t>(i)].assign(static_cast<std::size_t>(M.cols()), ZPoly());
      continue;
    }
    out.shift += lo;
    auto& row = out.m[static_cast<std::size_t>(i)];
    row.reserve(static_cast<std::size_t>(M.cols()));
    for (int j = 0; j < M.cols(); ++j) row.push_back(M.at(i, j).shifted(-lo));
  }
  return out;
}

inline ZPoly bareiss_on_cleared(std::vector<std::vector<ZPoly>> a, int n) {
  int sign = 1;
  ZPoly prev = ZPoly::constant(Int(1));
  for (int k = 0; k < n; ++k) {
    // pick the sparsest nonzero pivot in column k for speed; first on ties
    int piv = -1;
    std::size_t best = 0;
    for (int i = k; i < n; ++i) {
      const ZPoly& e = a[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)];
      if (e.is_zero()) continue;
      std::size_t tc = e.term_count();
      if (piv < 0 || tc < best) {
        piv = i;
        best = tc;
      }
    }
    if (piv < 0) return ZPoly();  // zero column, determinant vanishes
    if (piv != k) {
      a[static_cast<std::size_t>(piv)].swap(a[static_cast<std::size_t>(k)]);
      sign = -sign;
    }
    const ZPoly& pk = a[static_cast<std::size_t>(k)][static_cast<std::size_t>(k)];
    for (int i = k + 1; i < n; ++i) {
      for (int j = k + 1; j < n; ++j) {
        ZPoly num = pk * a[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] -
                    a[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)] *
                        a[static_cast<std::size_t>(k)][static_cast<std::size_t>(j)];
        auto q = exact_div_integral(num, prev);
        if (!q) throw InternalError("Bareiss division failed to be exact");
        a[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = std::move(*q);
      }
      a[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)] = ZPoly();
    }
    prev = pk;
  }
  ZPoly d = a[static_cast<std::size_t>(n - 1)][static_cast<std::size_t>(n - 1)];
  return sign < 0 ? -d : d;
}

namespace modular {

// Primes just below 2^31 so products of two residues fit in uint64.
inline constexpr std::uint64_t kPrimes[] = {
    2147483647ull, 2147483629ull, 2147483587ull, 2147483579ull, 2147483563ull,
    2147483549ull, 2147483543ull, 2147483497ull, 2147483489ull, 2147483477ull,
    2147483423ull, 2147483399ull, 2147483353ull, 2147483323ull, 2147483269ull,
    2147483249ull, 2147483237ull, 2147483179ull, 2147483171ull, 2147483137ull,
    2147483123ull, 2147483077ull, 2147483069ull, 2147483059ull, 2147483053ull,
    2147483033ull, 2147483029ull, 2147482951ull, 2147482949ull, 2147482943ull,
    2147482937ull, 2147482921ull, 2147482877ull, 2147482873ull, 2147482867ull,
    2147482859ull, 2147482819ull, 2147482817ull, 2147482811ull, 2147482801ull,
    2147482763ull, 2147482739ull, 2147482697ull, 2147482693ull, 2147482681ull,
    2147482663ull, 2147482661ull, 2147482621ull, 2147482591ull, 2147482583ull,
    2147482577ull, 2147482507ull, 2147482501ull, 2147482481ull, 2147482417ull,
    2147482409ull, 2147482367ull, 2147482361ull, 2147482349ull, 2147482343ull,
    2147482327ull, 2147482291ull, 2147482273ull, 2147482237ull, 2147482231ull,
    2147482223ull, 2147482121ull, 2147482093ull, 2147482091ull, 2147482081ull,
    2147482063ull, 2147482021ull, 2147481997ull, 2147481967ull, 2147481949ull,
    2147481937ull, 2147481907ull, 2147481901ull, 2147481899ull, 2147481893ull,
};
inline constexpr int kPrimeCount = static_cast<int>(sizeof(kPrimes) / sizeof(kPrimes[0]));

inline std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t p) {
  return a * b % p;  // operands < 2^31
}

inline std::uint64_t powmod(std::uint64_t a, std::uint64_t e, std::uint64_t p) {
  std::uint64_t r = 1 % p;
  a %= p;
  while (e) {
    if (e & 1) r = mulmod(r, a, p);
    a = mulmod(a, a, p);
    e >>= 1;
  }
  return r;
}

inline std::uint64_t invmod(std::uint64_t a, std::uint64_t p) { return powmod(a, p - 2, p); }

inline std::uint64_t coeff_mod(const Int& c, std::uint64_t p) {
  Int r = c % Int(p);
  if (r < 0) r += Int(p);
  return r.convert_to<std::uint64_t>();
}

// In-place determinant of an n x n matrix over F_p (row-major).
inline std::uint64_t det_mod(std::vector<std::uint64_t>& a, int n, std::uint64_t p) {
  std::uint64_t det = 1;
  bool neg = false;
  for (int k = 0; k < n; ++k) {
    int piv = -1;
    for (int i = k; i < n; ++i)
      if (a[static_cast<std::size_t>(i) * n + k] % p != 0) {
        piv = i;
        break;
      }
    if (piv < 0) return 0;
    if (piv != k) {
      for (int j = k; j < n; ++j)
        std::swap(a[static_cast<std::size_t>(piv) * n + j], a[static_cast<std::size_t>(k) * n + j]);
      neg = !neg;
    }
    std::uint64_t pk = a[static_cast<std::size_t>(k) * n + k] % p;
    det = mulmod(det, pk, p);
    std::uint64_t inv = invmod(pk, p);
    for (int i = k + 1; i < n; ++i) {
      std::uint64_t f = mulmod(a[static_cast<std::size_t>(i) * n + k] % p, inv, p);
      if (f == 0) continue;
      for (int j = k; j < n; ++j) {
        std::uint64_t s = mulmod(f, a[static_cast<std::size_t>(k) * n + j] % p, p);
        std::uint64_t& x = a[static_cast<std::size_t>(i) * n + j];
        x = (x % p + p - s) % p;
      }
    }
  }
  if (neg && det) det = p - det;
  return det;
}

// Rank of an r x c matrix over F_p; destroys the input.
inline int rank_mod(std::vector<std::uint64_t>& a, int r, int c, std::uint64_t p) {
  int rank = 0;
  for (int col = 0; col < c && rank < r; ++col) {
    int piv = -1;
    for (int i = rank; i < r; ++i)
      if (a[static_cast<std::size_t>(i) * c + col] % p != 0) {
        piv = i;
        break;
      }
    if (piv < 0) continue;
    if (piv != rank)
      for (int j = col; j < c; ++j)
        std::swap(a[static_cast<std::size_t>(piv) * c + j], a[static_cast<std::size_t>(rank) * c + j]);
    std::uint64_t inv = invmod(a[static_cast<std::size_t>(rank) * c + col] % p, p);
    for (int i = rank + 1; i < r; ++i) {
      std::uint64_t f = mulmod(a[static_cast<std::size_t>(i) * c + col] % p, inv, p);
      if (f == 0) continue;
      for (int j = col; j < c; ++j) {
        std::uint64_t s = mulmod(f, a[static_cast<std::size_t>(rank) * c + j] % p, p);
        std::uint64_t& x = a[static_cast<std::size_t>(i) * c + j];
        x = (x % p + p - s) % p;
      }
    }
    ++rank;
  }
  return rank;
}

// Newton interpolation through the points (0, v[0]), ..., (D, v[D]) over F_p;
// returns monomial-basis coefficients.
inline std::vector<std::uint64_t> interpolate(const std::vector<std::uint64_t>& vals,
                                              std::uint64_t p) {
  int n = static_cast<int>(vals.size());
  std::vector<std::uint64_t> f = vals;
  std::vector<std::uint64_t> inv(static_cast<std::size_t>(n) + 1, 1);
  for (int k = 1; k <= n; ++k) inv[static_cast<std::size_t>(k)] = invmod(static_cast<std::uint64_t>(k) % p, p);
  for (int j = 1; j < n; ++j)
    for (int i = n - 1; i >= j; --i) {
      std::uint64_t diff = (f[static_cast<std::size_t>(i)] + p - f[static_cast<std::size_t>(i) - 1]) % p;
      f[static_cast<std::size_t>(i)] = mulmod(diff, inv[static_cast<std::size_t>(j)], p);
    }
  // expand Newton form: poly = (...((f_{n-1})(t - x_{n-2}) + f_{n-2}) ... )
  std::vector<std::uint64_t> coeffs(static_cast<std::size_t>(n), 0);
  std::vector<std::uint64_t> acc;  // current polynomial, low to high
  for (int i = n - 1; i >= 0; --i) {
    // acc = acc * (t - i) + f[i]
    std::vector<std::uint64_t> next(acc.size() + 1, 0);
    std::uint64_t xi = static_cast<std::uint64_t>(i) % p;
    for (std::size_t k = 0; k < acc.size(); ++k) {
      next[k + 1] = (next[k + 1] + acc[k]) % p;
      next[k] = (next[k] + p - mulmod(acc[k], xi, p)) % p;
    }
    next[0] = (next[0] + f[static_cast<std::size_t>(i)]) % p;
    acc = std::move(next);
  }
  for (std::size_t k = 0; k < acc.size() && k < coeffs.size(); ++k) coeffs[k] = acc[k];
  return coeffs;
}

// Symmetric CRT lift of residues r_k mod p_k into Z.
inline Int crt_lift(const std::vector<std::uint64_t>& residues,
                    const std::vector<std::uint64_t>& primes) {
  Int x = 0, m = 1;
  for (std::size_t k = 0; k < primes.size(); ++k) {
    std::uint64_t p = primes[k];
    std::uint64_t xm = coeff_mod(x, p);
    std::uint64_t t = (residues[k] + p - xm) % p;
    t = mulmod(t, invmod(coeff_mod(m, p), p), p);
    x += m * Int(t);
    m *= Int(p);
  }
  if (x * 2 > m) x -= m;
  return x;
}

}  // namespace modular

// Determinant by evaluation at t = 0..D followed by interpolation, run
// modulo enough primes to cover a rigorous coefficient bound (product of
// row-wise 1-norm sums dominates every coefficient of the determinant).
inline ZPoly det_interpolation_cleared(const std::vector<std::vector<ZPoly>>& m, int n) {
  // degree bound and coefficient bound from the actual entries
  long long dbound = 0;
  Int cbound = 1;
  for (int i = 0; i < n; ++i) {
    int rowdeg = 0;
    Int rownorm = 0;
    for (int j = 0; j < n; ++j) {
      const ZPoly& e = m[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
      if (e.is_zero()) continue;
      rowdeg = std::max(rowdeg, e.max_exp());
      e.for_each_term([&](int, const Int& c) { rownorm += boost::multiprecision::abs(c); });
    }
    if (rownorm == 0) return ZPoly();  // zero row
    dbound += rowdeg;
    cbound *= rownorm;
  }
  int D = static_cast<int>(dbound);

  std::vector<std::uint64_t> primes;
  Int prod = 1;
  for (int k = 0; k < modular::kPrimeCount && prod <= 2 * cbound; ++k) {
    primes.push_back(modular::kPrimes[k]);
    prod *= Int(modular::kPrimes[k]);
  }
  if (prod <= 2 * cbound) throw InternalError("determinant coefficient bound exceeds the prime table");

  std::vector<std::vector<std::uint64_t>> coeffs_mod;  // per prime
  coeffs_mod.reserve(primes.size());
  for (std::uint64_t p : primes) {
    // reduce all entry coefficients once per prime
    // entry -> (list of (exp, coeff mod p))
    std::vector<std::vector<std::pair<int, std::uint64_t>>> red(
        static_cast<std::size_t>(n) * static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        auto& slot = red[static_cast<std::size_t>(i) * n + j];
        m[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)].for_each_term(
            [&](int e, const Int& c) { slot.emplace_back(e, modular::coeff_mod(c, p)); });
      }
    std::vector<std::uint64_t> vals(static_cast<std::size_t>(D) + 1);
    std::vector<std::uint64_t> work(static_cast<std::size_t>(n) * static_cast<std::size_t>(n));
    for (int x = 0; x <= D; ++x) {
      std::uint64_t xm = static_cast<std::uint64_t>(x) % p;
      // powers of x mod p up to the max exponent present
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
          std::uint64_t v = 0;
          for (const auto& [e, c] : red[static_cast<std::size_t>(i) * n + j]) {
            // exponents are small; direct powmod keeps this simple
            v = (v + modular::mulmod(c, modular::powmod(xm, static_cast<std::uint64_t>(e), p), p)) % p;
          }
          work[static_cast<std::size_t>(i) * n + j] = v;
        }
      vals[static_cast<std::size_t>(x)] = modular::det_mod(work, n, p);
    }
    coeffs_mod.push_back(modular::interpolate(vals, p));
  }

  std::vector<std::pair<int, Int>> terms;
  std::vector<std::uint64_t> residues(primes.size());
  for (int e = 0; e <= D; ++e) {
    for (std::size_t k = 0; k < primes.size(); ++k)
      residues[k] = coeffs_mod[k][static_cast<std::size_t>(e)];
    Int c = modular::crt_lift(residues, primes);
    if (c != 0) terms.emplace_back(e, std::move(c));
  }
  return ZPoly::from_pairs(terms);
}

}  // namespace detail

// Fraction-free determinant.  Exposed separately so the two exact strategies
// can be cross-checked against each other.
inline ZPoly det_bareiss(const LaurentMatrix& M) {
  if (M.rows() != M.cols()) throw PreconditionError("determinant of a non-square matrix");
  int n = M.rows();
  if (n == 0) return ZPoly::constant(Int(1));
  detail::ClearedRows cr = detail::clear_rows(M);
  if (cr.zero_row) return ZPoly();
  return detail::bareiss_on_cleared(std::move(cr.m), n).shifted(cr.shift);
}

inline ZPoly det_interpolation(const LaurentMatrix& M) {
  if (M.rows() != M.cols()) throw PreconditionError("determinant of a non-square matrix");
  int n = M.rows();
  if (n == 0) return ZPoly::constant(Int(1));
  detail::ClearedRows cr = detail::clear_rows(M);
  if (cr.zero_row) return ZPoly();
  return detail::det_interpolation_cleared(cr.m, n).shifted(cr.shift);
}

// Exact determinant.  Small matrices go through Bareiss elimination, large
// ones through modular interpolation; both agree exactly (not only up to
// units) and the switch point is a pure performance knob.
inline ZPoly det(const LaurentMatrix& M) {
  constexpr int kBareissMax = 12;
  if (M.rows() != M.cols()) throw PreconditionError("determinant of a non-square matrix");
  return M.rows() <= kBareissMax ? det_bareiss(M) : det_interpolation(M);
}

// Rank over the fraction field Q(t), by fraction-free elimination with exact
// zero tests.  Row shifts do not change rank, so rows are cleared first.
inline int rank_over_fraction_field(const LaurentMatrix& M) {
  int r = M.rows(), c = M.cols();
  if (r == 0 || c == 0) return 0;
  detail::ClearedRows cr = detail::clear_rows(M);
  auto& a = cr.m;
  int rank = 0;
  ZPoly prev = ZPoly::constant(Int(1));
  for (int col = 0; col < c && rank < r; ++col) {
    int piv = -1;
    std::size_t best = 0;
    for (int i = rank; i < r; ++i) {
      const ZPoly& e = a[static_cast<std::size_t>(i)][static_cast<std::size_t>(col)];
      if (e.is_zero()) continue;
      std::size_t tc = e.term_count();
      if (piv < 0 || tc < best) {
        piv = i;
        best = tc;
      }
    }
    if (piv < 0) continue;
    if (piv != rank) a[static_cast<std::size_t>(piv)].swap(a[static_cast<std::size_t>(rank)]);
    const ZPoly& pk = a[static_cast<std::size_t>(rank)][static_cast<std::size_t>(col)];
    for (int i = rank + 1; i < r; ++i) {
      for (int j = col + 1; j < c; ++j) {
        ZPoly num = pk * a[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] -
                    a[static_cast<std::size_t>(i)][static_cast<std::size_t>(col)] *
                        a[static_cast<std::size_t>(rank)][static_cast<std::size_t>(j)];
        auto q = exact_div_integral(num, prev);
        if (!q) throw InternalError("fraction-free elimination division failed to be exact");
        a[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = std::move(*q);
      }
      a[static_cast<std::size_t>(i)][static_cast<std::size_t>(col)] = ZPoly();
    }
    prev = pk;
    ++rank;
  }
  return rank;
}

// Rank of M(t0) over F_p.  Evaluation and reduction are ring homomorphisms,
// so this never exceeds the true rank over Q(t): a full-rank answer here is a
// certificate, a deficient one is only a hint.
inline int rank_evaluation_probe(const LaurentMatrix& M, int t0, int prime_index) {
  std::uint64_t p = detail::modular::kPrimes[prime_index % detail::modular::kPrimeCount];
  int r = M.rows(), c = M.cols();
  if (r == 0 || c == 0) return 0;
  detail::ClearedRows cr = detail::clear_rows(M);
  std::uint64_t xm = static_cast<std::uint64_t>(((t0 % static_cast<int>(p)) + static_cast<int>(p))) % p;
  std::vector<std::uint64_t> work(static_cast<std::size_t>(r) * static_cast<std::size_t>(c), 0);
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < c; ++j) {
      std::uint64_t v = 0;
      cr.m[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)].for_each_term(
          [&](int e, const Int& cc) {
            v = (v + detail::modular::mulmod(detail::modular::coeff_mod(cc, p),
                                             detail::modular::powmod(xm, static_cast<std::uint64_t>(e), p),
                                             p)) %
                p;
          });
      work[static_cast<std::size_t>(i) * c + j] = v;
    }
  return detail::modular::rank_mod(work, r, c, p);
}

}  // namespace fibercheck
