// Acceptance gate: one [PASS]/[FAIL] line per criterion, timed; the process
// exit code is the number of failed criteria.

#include <chrono>
#include <cstdio>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "fibercheck/alexander.hpp"
#include "fibercheck/fibering.hpp"
#include "fibercheck/foxcalc.hpp"
#include "fibercheck/json_io.hpp"
#include "fibercheck/pd.hpp"
#include "fibercheck/presentation.hpp"
#include "fibercheck/quotients.hpp"

using namespace fibercheck;

namespace {

const std::string kCorpus = CORPUS_DIR;

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Presentation knot(const std::string& stem) {
  return wirtinger_from_pd(parse_pd_json(slurp(kCorpus + "/" + stem + ".pd.json")), stem);
}

void require(bool ok, const std::string& msg) {
  if (!ok) throw std::runtime_error(msg);
}

ZPoly zp(std::initializer_list<std::pair<int, long long>> terms) {
  std::vector<std::pair<int, Int>> v;
  for (auto& [e, c] : terms) v.emplace_back(e, Int(c));
  return ZPoly::from_pairs(v);
}

EnumerationOptions bounds(int max_degree, long long max_order) {
  EnumerationOptions e;
  e.max_degree = max_degree;
  e.max_order = max_order;
  return e;
}

// The deficiency-one presentations of the corpus with their classes.
struct Instance {
  std::string name;
  Presentation pres;
  CohomologyClass phi;
};

std::vector<Instance> deficiency_one_corpus() {
  std::vector<Instance> out;
  for (std::string stem : {"trefoil", "figure8", "k52"}) {
    Presentation p = knot(stem);
    out.push_back({stem, p, meridian_class(p)});
  }
  Presentation tor = parse_presentation("gens: x y\nrel: x y X Y\n");
  tor.name = "torus";
  CohomologyClass phi;
  phi.images = {1, 0};
  out.push_back({"torus", tor, phi});
  return out;
}

struct Gate {
  int failures = 0;
  void criterion(int num, const std::string& what, const std::function<void()>& body) {
    auto t0 = std::chrono::steady_clock::now();
    std::string msg;
    try {
      body();
    } catch (const std::exception& e) {
      msg = e.what();
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (msg.empty()) {
      std::printf("[PASS] criterion %2d: %s (%.2f s)\n", num, what.c_str(), secs);
    } else {
      ++failures;
      std::printf("[FAIL] criterion %2d: %s (%.2f s) -- %s\n", num, what.c_str(), secs,
                  msg.c_str());
    }
    std::fflush(stdout);
  }
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

int main() {
  Gate gate;

  gate.criterion(1, "classical trivial-quotient values from PD codes", [] {
    struct Case {
      const char* stem;
      ZPoly expect;
    };
    std::vector<Case> cases = {
        {"trefoil", zp({{0, 1}, {1, -1}, {2, 1}})},
        {"figure8", zp({{0, 1}, {1, -3}, {2, 1}})},
        {"k52", zp({{0, 2}, {1, -3}, {2, 2}})},
    };
    for (auto& [stem, expect] : cases) {
      auto t0 = std::chrono::steady_clock::now();
      Presentation p = knot(stem);
      CohomologyClass phi = meridian_class(p);
      auto en = enumerate_quotients(p, bounds(1, 10));
      require(en.quotients.size() == 1, std::string(stem) + ": expected only the trivial quotient");
      TwistedAlexanderResult r = twisted_alexander(p, en.quotients[0], phi);
      require(!r.vanishing, std::string(stem) + ": unexpected vanishing");
      require(normalize(r.delta1) == normalize(expect), std::string(stem) + ": wrong polynomial");
      require(seconds_since(t0) < 1.0, std::string(stem) + ": over the 1 s budget");
    }
  });

  gate.criterion(2, "monic with degree |G|+div across (4,24) for the fibered knots", [] {
    auto t0 = std::chrono::steady_clock::now();
    for (std::string stem : {"trefoil", "figure8"}) {
      Presentation p = knot(stem);
      CohomologyClass phi = meridian_class(p);
      auto en = enumerate_quotients(p, bounds(4, 24));
      require(!en.budget_exhausted, stem + ": enumeration budget exhausted");
      require(!en.quotients.empty(), stem + ": no quotients");
      for (const auto& q : en.quotients) {
        TwistedAlexanderResult r = twisted_alexander(p, q, phi);
        require(!r.vanishing, stem + ": vanishing on a fibered class");
        require(r.monic(), stem + ": nonmonic at |G|=" + std::to_string(q.group_order));
        long long want = q.group_order * 1 + r.divisibility;
        require(r.delta1_degree() == want,
                stem + ": degree " + std::to_string(r.delta1_degree()) + " != " +
                    std::to_string(want) + " at |G|=" + std::to_string(q.group_order));
      }
    }
    require(seconds_since(t0) < 300.0, "over the 5 min budget");
  });

  gate.criterion(3, "nonmonic for 5_2 and vanishing certificate for the free class", [] {
    auto t0 = std::chrono::steady_clock::now();
    Presentation k52 = knot("k52");
    FiberingOptions kopts;
    kopts.enumeration = bounds(3, 24);
    kopts.norm = 1;
    FiberingReport rep = check_fibered(k52, meridian_class(k52), kopts);
    require(rep.overall == OverallVerdict::kObstructedNonMonic, "5_2: expected OBSTRUCTED_NONMONIC");
    require(rep.checks.size() == 1 && rep.checks[0].order == 1,
            "5_2: obstruction not at the trivial quotient");

    Presentation f2 = parse_presentation("gens: x y\n");
    CohomologyClass phi;
    phi.images = {1, 0};
    FiberingOptions fopts;
    fopts.enumeration = bounds(3, 24);
    FiberingReport frep = check_fibered(f2, phi, fopts);
    require(frep.overall == OverallVerdict::kVanishingFound, "free2: expected VANISHING_FOUND");
    require(frep.checks.size() == 1 && frep.checks[0].order == 1,
            "free2: certificate is not the order-1 quotient");
    VanishingSearch s = search_vanishing(f2, phi, fopts);
    require(s.certificate && s.certificate->group_order == 1, "free2: search found no |G|=1 certificate");
    require(seconds_since(t0) < 1.0, "over the 1 s budget");
  });

  gate.criterion(4, "nested kernels imply divisibility over >= 50 pairs (order <= 24)", [] {
    long long pairs = 0;
    for (const auto& inst : deficiency_one_corpus()) {
      auto en = enumerate_quotients(inst.pres, bounds(6, 24));
      require(!en.budget_exhausted, inst.name + ": enumeration budget exhausted");
      std::vector<TwistedAlexanderResult> rs;
      rs.reserve(en.quotients.size());
      for (const auto& q : en.quotients) rs.push_back(twisted_alexander(inst.pres, q, inst.phi));
      for (std::size_t a = 0; a < en.quotients.size(); ++a)
        for (std::size_t b = 0; b < en.quotients.size(); ++b) {
          if (a == b || !kernel_contained(en.quotients[a], en.quotients[b])) continue;
          ++pairs;
          if (rs[b].vanishing) {
            require(rs[a].vanishing, inst.name + ": coarser vanishes but finer does not");
          } else {
            require(exact_div(rs[a].delta1, rs[b].delta1).has_value(),
                    inst.name + ": divisibility fails at pair (" + std::to_string(a) + "," +
                        std::to_string(b) + ")");
          }
        }
    }
    require(pairs >= 50, "only " + std::to_string(pairs) + " comparable pairs exercised");
  });

  gate.criterion(5, "fox fundamental formula on 200 random presentations", [] {
    std::mt19937_64 rng(20240817);
    auto random_word = [&](int gens, int max_len) {
      std::uniform_int_distribution<int> len(0, max_len);
      std::uniform_int_distribution<int> letter(1, gens);
      std::uniform_int_distribution<int> sign(0, 1);
      std::vector<int> ls;
      int n = len(rng);
      for (int i = 0; i < n; ++i) ls.push_back(letter(rng) * (sign(rng) ? 1 : -1));
      return Word(ls);
    };
    for (int trial = 0; trial < 200; ++trial) {
      std::uniform_int_distribution<int> gdist(1, 4), rdist(0, 3);
      Presentation p;
      p.generator_count = gdist(rng);
      for (int j = 1; j <= p.generator_count; ++j)
        p.generator_names.push_back("x" + std::to_string(j));
      int nr = rdist(rng);
      for (int i = 0; i < nr; ++i) p.relators.push_back(random_word(p.generator_count, 20));

      EnumerationOptions opts = bounds(2, 16);
      opts.budget_nodes = 200000;
      auto res = enumerate_quotients(p, opts);
      require(!res.quotients.empty(), "no quotient to evaluate against");
      std::uniform_int_distribution<std::size_t> pick(0, res.quotients.size() - 1);
      const FiniteQuotient& q = res.quotients[pick(rng)];
      int n = static_cast<int>(q.group_order);

      // any integer class killing the abelianized relators works for phi
      CohomologyClass phi;
      phi.images.assign(static_cast<std::size_t>(p.generator_count), 0);
      std::vector<std::vector<Int>> m(
          p.relators.size(), std::vector<Int>(static_cast<std::size_t>(p.generator_count), Int(0)));
      for (std::size_t r = 0; r < p.relators.size(); ++r)
        for (int a : p.relators[r].letters())
          m[r][static_cast<std::size_t>((a > 0 ? a : -a) - 1)] += (a > 0 ? 1 : -1);
      auto kernel = integer_kernel(m);
      if (!kernel.empty())
        for (std::size_t j = 0; j < kernel[0].size(); ++j)
          phi.images[j] = static_cast<std::int64_t>(kernel[0][j].convert_to<long long>());

      LaurentMatrix zero(n, n);
      for (const Word& r : p.relators) {
        LaurentMatrix acc(n, n);
        for (int j = 1; j <= p.generator_count; ++j) {
          LaurentMatrix dj = evaluate(fox_derivative(r, j), q, phi);
          LaurentMatrix ej = evaluate_word(Word({j}), q, phi);
          acc = acc + dj * (ej - LaurentMatrix::identity(n));
        }
        require(acc == zero, "fundamental formula violated at trial " + std::to_string(trial));
      }
    }
  });

  gate.criterion(6, "column independence on corpus knots with |G| <= 12", [] {
    for (std::string stem : {"trefoil", "figure8", "k52"}) {
      Presentation p = knot(stem);
      CohomologyClass phi = meridian_class(p);
      auto en = enumerate_quotients(p, bounds(4, 12));
      for (const auto& q : en.quotients) {
        TwistedAlexanderResult first = twisted_alexander_with_column(p, q, phi, 1);
        for (int j = 2; j <= p.generator_count; ++j) {
          TwistedAlexanderResult other = twisted_alexander_with_column(p, q, phi, j);
          require(other.vanishing == first.vanishing,
                  stem + ": vanishing flag depends on the column");
          require(other.delta1 == first.delta1, stem + ": column " + std::to_string(j) +
                                                    " disagrees at |G|=" +
                                                    std::to_string(q.group_order));
        }
      }
    }
  });

  gate.criterion(7, "wada route matches the minor-gcd oracle for |G| <= 6", [] {
    for (std::string stem : {"trefoil", "figure8", "k52"}) {
      Presentation p = knot(stem);
      CohomologyClass phi = meridian_class(p);
      for (const auto& q : enumerate_quotients(p, bounds(4, 6)).quotients) {
        TwistedAlexanderResult fast = twisted_alexander(p, q, phi);
        ZPoly slow = delta1_via_minor_gcd(p, q, phi);
        if (fast.vanishing)
          require(slow.is_zero(), stem + ": oracle nonzero where wada vanishes");
        else
          require(normalize(fast.delta1) == normalize(slow),
                  stem + ": oracle mismatch at |G|=" + std::to_string(q.group_order));
      }
    }
  });

  gate.criterion(8, "bareiss determinant vs cofactor oracle; multiplicativity", [] {
    std::mt19937_64 rng(424242);
    auto random_poly = [&](int max_terms, int max_exp, int max_coeff) {
      std::uniform_int_distribution<int> terms(0, max_terms);
      std::uniform_int_distribution<int> exp(-1, max_exp);
      std::uniform_int_distribution<long long> coeff(-max_coeff, max_coeff);
      std::vector<std::pair<int, Int>> ts;
      int n = terms(rng);
      for (int i = 0; i < n; ++i) ts.emplace_back(exp(rng), Int(coeff(rng)));
      return ZPoly::from_pairs(ts);
    };
    auto random_matrix = [&](int n, int max_terms, int max_exp, int max_coeff) {
      LaurentMatrix m(n, n);
      for (int r = 0; r < n; ++r)
        for (int c = 0; c < n; ++c) m.at(r, c) = random_poly(max_terms, max_exp, max_coeff);
      return m;
    };
    std::function<ZPoly(const LaurentMatrix&, std::vector<int>, int)> cof =
        [&](const LaurentMatrix& m, std::vector<int> cols, int row) -> ZPoly {
      if (cols.empty()) return ZPoly::constant(Int(1));
      ZPoly acc;
      for (std::size_t k = 0; k < cols.size(); ++k) {
        std::vector<int> rest;
        for (std::size_t i = 0; i < cols.size(); ++i)
          if (i != k) rest.push_back(cols[i]);
        ZPoly sub = cof(m, rest, row + 1);
        ZPoly term = m.at(row, cols[k]) * sub;
        if (k % 2 == 0) acc = acc + term;
        else acc = acc - term;
      }
      return acc;
    };
    auto det_cofactor = [&](const LaurentMatrix& m) {
      std::vector<int> cols(static_cast<std::size_t>(m.rows()));
      for (int i = 0; i < m.rows(); ++i) cols[static_cast<std::size_t>(i)] = i;
      return cof(m, cols, 0);
    };

    std::uniform_int_distribution<int> size(1, 5);
    for (int trial = 0; trial < 500; ++trial) {
      LaurentMatrix m = random_matrix(size(rng), 3, 2, 4);  // entry degree span <= 3
      require(det_bareiss(m) == det_cofactor(m),
              "bareiss/cofactor mismatch at trial " + std::to_string(trial));
    }
    std::uniform_int_distribution<int> psize(1, 4);
    for (int trial = 0; trial < 200; ++trial) {
      int n = psize(rng);
      LaurentMatrix a = random_matrix(n, 2, 2, 3);
      LaurentMatrix b = random_matrix(n, 2, 2, 3);
      require(det(a * b) == det(a) * det(b),
              "multiplicativity fails at trial " + std::to_string(trial));
    }
  });

  gate.criterion(9, "vanishing test agrees with delta1 == 0 on every instance", [] {
    for (const auto& inst : deficiency_one_corpus()) {
      for (const auto& q : enumerate_quotients(inst.pres, bounds(6, 24)).quotients) {
        TwistedAlexanderResult r = twisted_alexander(inst.pres, q, inst.phi);
        require(vanishing_test(inst.pres, q, inst.phi) == r.vanishing,
                inst.name + ": probe disagrees at |G|=" + std::to_string(q.group_order));
      }
    }
  });

  gate.criterion(10, "corpus report is byte-identical for 1 and 8 threads", [] {
    FiberingOptions one;
    one.enumeration = bounds(4, 24);
    one.threads = 1;
    std::string base = to_json(run_corpus(kCorpus, one)).dump(2);
    for (int n : {3, 8}) {
      FiberingOptions many = one;
      many.threads = n;
      require(to_json(run_corpus(kCorpus, many)).dump(2) == base,
              "report differs with " + std::to_string(n) + " threads");
    }
  });

  if (gate.failures == 0) std::printf("acceptance: all 10 criteria passed\n");
  else std::printf("acceptance: %d criterion(s) failed\n", gate.failures);
  return gate.failures;
}
