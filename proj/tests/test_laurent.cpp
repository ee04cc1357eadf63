#include <catch2/catch_amalgamated.hpp>

#include <random>
#include <utility>
#include <vector>

#include "fibercheck/laurent.hpp"

using namespace fibercheck;

namespace {

ZPoly zp(std::initializer_list<std::pair<int, long long>> terms) {
  std::vector<std::pair<int, Int>> v;
  for (auto& [e, c] : terms) v.emplace_back(e, Int(c));
  return ZPoly::from_pairs(v);
}

std::mt19937_64 rng(20240817);

ZPoly random_poly(int max_abs_exp, int max_coeff, int max_terms) {
  std::uniform_int_distribution<int> nterms(0, max_terms);
  std::uniform_int_distribution<int> exp(-max_abs_exp, max_abs_exp);
  std::uniform_int_distribution<long long> coeff(-max_coeff, max_coeff);
  ZPoly p;
  int n = nterms(rng);
  for (int i = 0; i < n; ++i) p = p + ZPoly::monomial(Int(coeff(rng)), exp(rng));
  return p;
}

// Cofactor expansion: exponential but obviously correct.
ZPoly det_cofactor(const LaurentMatrix& m) {
  int n = m.rows();
  REQUIRE(m.cols() == n);
  if (n == 0) return ZPoly::constant(Int(1));
  if (n == 1) return m.at(0, 0);
  ZPoly acc;
  for (int j = 0; j < n; ++j) {
    if (m.at(0, j).is_zero()) continue;
    LaurentMatrix sub(n - 1, n - 1);
    for (int i = 1; i < n; ++i) {
      int cc = 0;
      for (int k = 0; k < n; ++k) {
        if (k == j) continue;
        sub.at(i - 1, cc++) = m.at(i, k);
      }
    }
    ZPoly term = m.at(0, j) * det_cofactor(sub);
    acc = (j % 2 == 0) ? acc + term : acc - term;
  }
  return acc;
}

LaurentMatrix random_matrix(int n, int max_abs_exp, int max_coeff, int max_terms) {
  LaurentMatrix m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m.at(i, j) = random_poly(max_abs_exp, max_coeff, max_terms);
  return m;
}

}  // namespace

TEST_CASE("laurent polynomial basics") {
  ZPoly p = zp({{0, 1}, {1, -1}, {2, 1}});
  CHECK(to_string(p) == "t^2 - t + 1");
  CHECK(degree(p) == 2);
  CHECK(p.min_exp() == 0);
  CHECK(p.max_exp() == 2);
  CHECK(is_monic(p));

  ZPoly q = zp({{-1, 2}, {1, 2}});
  CHECK(q.min_exp() == -1);
  CHECK(degree(q) == 2);
  CHECK_FALSE(is_monic(q));

  CHECK((p - p).is_zero());
  CHECK(to_string(ZPoly()) == "0");
  CHECK_THROWS_AS(ZPoly().leading(), PreconditionError);
}

TEST_CASE("normalization fixes sign and exponent") {
  ZPoly p = zp({{-3, -1}, {-2, 1}, {-1, -1}});  // -t^-3 + t^-2 - t^-1
  ZPoly n = normalize(p);
  CHECK(n.min_exp() == 0);
  CHECK(n.leading() > 0);
  CHECK(to_string(n) == "t^2 - t + 1");
  CHECK(normalize(ZPoly()).is_zero());
}

TEST_CASE("multiplication matches known products") {
  ZPoly a = zp({{0, 1}, {1, 1}});
  ZPoly b = zp({{0, -1}, {1, 1}});
  CHECK(a * b == zp({{0, -1}, {2, 1}}));
  ZPoly t = ZPoly::monomial(Int(1), 1);
  CHECK(t * zp({{-1, 1}}) == ZPoly::constant(Int(1)));
}

TEST_CASE("evaluation") {
  ZPoly p = zp({{0, 2}, {2, 3}});  // 3t^2 + 2
  CHECK(p.evaluate_at<Int>(Int(2)) == 14);
  ZPoly q = zp({{-1, 1}});
  CHECK(q.evaluate_at<Rat>(Rat(2)) == Rat(1, 2));
}

TEST_CASE("gcd of integral laurent polynomials") {
  ZPoly a = zp({{0, -1}, {2, 1}});            // t^2 - 1
  ZPoly b = zp({{0, -1}, {3, 1}});            // t^3 - 1
  CHECK(gcd(a, b) == zp({{0, -1}, {1, 1}}));  // t - 1

  // contents combine separately from the primitive parts
  ZPoly c = zp({{0, 6}});
  ZPoly d = zp({{1, 4}});
  CHECK(gcd(c, d) == ZPoly::constant(Int(2)));

  CHECK(gcd(ZPoly(), a) == normalize(a));

  ZPoly p = zp({{0, 1}, {1, -1}, {2, 1}});
  ZPoly u = p * zp({{0, 5}, {1, 7}});
  ZPoly v = p * zp({{0, -3}, {2, 11}});
  CHECK(exact_div_integral(gcd(u, v), normalize(p)).has_value());
}

TEST_CASE("gcd divides both arguments exactly") {
  for (int trial = 0; trial < 60; ++trial) {
    ZPoly a = random_poly(4, 9, 5);
    ZPoly b = random_poly(4, 9, 5);
    ZPoly g = gcd(a, b);
    if (a.is_zero() && b.is_zero()) {
      CHECK(g.is_zero());
      continue;
    }
    REQUIRE_FALSE(g.is_zero());
    if (!a.is_zero()) CHECK(exact_div_integral(a, g).has_value());
    if (!b.is_zero()) CHECK(exact_div_integral(b, g).has_value());
  }
}

TEST_CASE("exact division round-trips") {
  for (int trial = 0; trial < 60; ++trial) {
    ZPoly a = random_poly(3, 6, 4);
    ZPoly b = random_poly(3, 6, 4);
    if (b.is_zero()) continue;
    ZPoly prod = a * b;
    auto q = exact_div_integral(prod, b);
    REQUIRE(q.has_value());
    CHECK(*q == a);
    auto qr = exact_div(prod, b);
    REQUIRE(qr.has_value());
    auto qi = to_integral(*qr);
    REQUIRE(qi.has_value());
    CHECK(*qi == a);
  }
}

TEST_CASE("exact division detects inexactness") {
  ZPoly p = zp({{0, 1}, {1, 1}});
  ZPoly q = zp({{0, 1}, {1, 2}});
  CHECK_FALSE(exact_div_integral(p * p + ZPoly::constant(Int(1)), p).has_value());
  CHECK_FALSE(exact_div_integral(q, p).has_value());
}

TEST_CASE("determinant agrees with cofactor expansion") {
  for (int trial = 0; trial < 120; ++trial) {
    std::uniform_int_distribution<int> dim(0, 4);
    int n = dim(rng);
    auto m = random_matrix(n, 2, 5, 3);
    CHECK(det(m) == det_cofactor(m));
  }
}

TEST_CASE("determinant is multiplicative") {
  for (int trial = 0; trial < 40; ++trial) {
    auto a = random_matrix(3, 2, 4, 2);
    auto b = random_matrix(3, 2, 4, 2);
    CHECK(det(a * b) == det(a) * det(b));
  }
}

TEST_CASE("interpolation determinant agrees with bareiss") {
  for (int trial = 0; trial < 25; ++trial) {
    auto m = random_matrix(4, 3, 20, 4);
    CHECK(det_interpolation(m) == det_bareiss(m));
  }
}

TEST_CASE("determinant of diagonal monomials") {
  auto id = LaurentMatrix::identity(5);
  CHECK(det(id) == ZPoly::constant(Int(1)));
  for (int i = 0; i < 5; ++i) id.at(i, i) = ZPoly::monomial(Int(1), i - 2);
  CHECK(det(id) == ZPoly::constant(Int(1)));  // exponents -2..2 sum to zero
}

TEST_CASE("rank over the fraction field") {
  LaurentMatrix m(3, 4);
  m.at(0, 0) = zp({{0, 1}, {1, -1}});
  m.at(0, 1) = zp({{0, 1}});
  m.at(1, 0) = zp({{0, 2}, {1, -2}});
  m.at(1, 1) = zp({{0, 2}});
  m.at(2, 2) = zp({{5, 3}});
  CHECK(rank_over_fraction_field(m) == 2);  // row 1 = 2 * row 0

  LaurentMatrix z(2, 2);
  CHECK(rank_over_fraction_field(z) == 0);
  CHECK(rank_over_fraction_field(LaurentMatrix::identity(4)) == 4);
}

TEST_CASE("evaluation probe never exceeds the true rank") {
  for (int trial = 0; trial < 40; ++trial) {
    auto m = random_matrix(3, 2, 4, 2);
    int true_rank = rank_over_fraction_field(m);
    for (int probe = 0; probe < 3; ++probe)
      CHECK(rank_evaluation_probe(m, 2 + probe, probe) <= true_rank);
  }
}

TEST_CASE("to_string formatting") {
  CHECK(to_string(zp({{0, 2}, {1, -3}, {2, 2}})) == "2t^2 - 3t + 2");
  CHECK(to_string(zp({{-1, 1}})) == "t^-1");
  CHECK(to_string(zp({{0, -5}})) == "-5");
  CHECK(to_string(zp({{1, 1}})) == "t");
}
