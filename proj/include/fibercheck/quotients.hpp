#pragma once

// Enumeration of finite quotients of a finitely presented group.
//
// Strategy: depth-first search over standardized coset tables of subgroups of
// index <= max_degree (each subgroup corresponds to exactly one standardized
// table, so nothing is missed and nothing repeats), with relator-scan
// deductions pruning the search.  Every complete table yields a transitive
// permutation representation; its image group is closed under products, and
// two representations are kept only once per kernel, detected through a
// canonical labeling of the image's left-multiplication action on itself.
// That canonical regular action is also exactly what the twisted chain
// complexes need, so it is precomputed here once per quotient.

#include <algorithm>
#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "fibercheck/errors.hpp"
#include "fibercheck/laurent.hpp"
#include "fibercheck/presentation.hpp"
#include "fibercheck/word.hpp"

namespace fibercheck {

// A finite quotient alpha: pi -> G, recorded as a transitive permutation
// action of the generators (the coset action that produced it) together with
// the regular action of G on itself.  Element labels come from a breadth
// first walk of G starting at the identity and multiplying by generator
// images on the left, so they depend only on the marked group (G; alpha(x_1),
// ..., alpha(x_g)) and never on which coset table produced it.
struct FiniteQuotient {
  int degree = 0;                                  // points of the defining action
  std::vector<std::vector<int>> generator_perms;   // [g][degree], 0-based images
  long long group_order = 0;                       // |G|
  std::vector<std::vector<int>> coset_table;       // [degree][2g]; col 2j fwd, 2j+1 back

  std::vector<std::vector<int>> left_mult;         // [g][|G|] label action of alpha(x_j) h
  std::vector<std::vector<int>> left_mult_inv;     // inverse tables
  std::vector<Word> transversal;                   // word mapping onto each element label
  std::vector<int> canonical_key;                  // {|G|, g, left_mult flattened}

  bool is_trivial() const { return group_order == 1; }
};

struct EnumerationOptions {
  int max_degree = 6;
  long long max_order = 120;
  long long budget_nodes = 10'000'000;
};

struct EnumerationResult {
  std::vector<FiniteQuotient> quotients;
  bool budget_exhausted = false;
  long long nodes = 0;
};

namespace detail {

// Composition convention: words act the way coset tables read them, left
// factor first.  mul(a, b) is "a then b"; for the regular action the map
// h -> mul(a, h) is what "left multiplication by a" means here.
inline std::vector<int> perm_mul(const std::vector<int>& a, const std::vector<int>& b) {
  std::vector<int> r(a.size());
  for (std::size_t x = 0; x < a.size(); ++x) r[x] = b[static_cast<std::size_t>(a[x])];
  return r;
}

inline std::vector<int> perm_inverse(const std::vector<int>& a) {
  std::vector<int> r(a.size());
  for (std::size_t x = 0; x < a.size(); ++x) r[static_cast<std::size_t>(a[x])] = static_cast<int>(x);
  return r;
}

inline bool is_permutation(const std::vector<int>& a) {
  std::vector<char> seen(a.size(), 0);
  for (int v : a) {
    if (v < 0 || v >= static_cast<int>(a.size()) || seen[static_cast<std::size_t>(v)]) return false;
    seen[static_cast<std::size_t>(v)] = 1;
  }
  return true;
}

}  // namespace detail

// Builds the full quotient record from generator permutations.  Returns
// nullopt when the image group would exceed max_order.  Throws when the input
// is not a well-defined transitive quotient of the presentation.
inline std::optional<FiniteQuotient> quotient_from_perms(const Presentation& pres,
                                                         std::vector<std::vector<int>> perms,
                                                         long long max_order) {
  int g = pres.generator_count;
  if (static_cast<int>(perms.size()) != g)
    throw PreconditionError("expected one permutation per generator");
  int d = perms.empty() ? 1 : static_cast<int>(perms[0].size());
  for (const auto& p : perms)
    if (static_cast<int>(p.size()) != d || !detail::is_permutation(p))
      throw PreconditionError("generator images must be permutations of equal degree");

  std::vector<std::vector<int>> inv(static_cast<std::size_t>(g));
  for (int j = 0; j < g; ++j) inv[static_cast<std::size_t>(j)] = detail::perm_inverse(perms[static_cast<std::size_t>(j)]);

  auto word_perm = [&](const Word& w) {
    std::vector<int> r(static_cast<std::size_t>(d));
    std::iota(r.begin(), r.end(), 0);
    for (int a : w.letters()) {
      const auto& s = a > 0 ? perms[static_cast<std::size_t>(a - 1)] : inv[static_cast<std::size_t>(-a - 1)];
      r = detail::perm_mul(r, s);
    }
    return r;
  };

  std::vector<int> ident(static_cast<std::size_t>(d));
  std::iota(ident.begin(), ident.end(), 0);
  for (std::size_t i = 0; i < pres.relators.size(); ++i)
    if (word_perm(pres.relators[i]) != ident)
      throw PreconditionError("relator " + std::to_string(i + 1) + " does not act trivially");

  {
    // transitivity of the defining action
    std::vector<char> seen(static_cast<std::size_t>(d), 0);
    std::vector<int> stack{0};
    seen[0] = 1;
    int cnt = 1;
    while (!stack.empty()) {
      int x = stack.back();
      stack.pop_back();
      for (int j = 0; j < g; ++j)
        for (const auto* t : {&perms[static_cast<std::size_t>(j)], &inv[static_cast<std::size_t>(j)]}) {
          int y = (*t)[static_cast<std::size_t>(x)];
          if (!seen[static_cast<std::size_t>(y)]) {
            seen[static_cast<std::size_t>(y)] = 1;
            ++cnt;
            stack.push_back(y);
          }
        }
    }
    if (cnt != d) throw PreconditionError("defining action is not transitive");
  }

  FiniteQuotient q;
  q.degree = d;
  q.generator_perms = perms;
  q.coset_table.assign(static_cast<std::size_t>(d), std::vector<int>(static_cast<std::size_t>(2 * g), 0));
  for (int c = 0; c < d; ++c)
    for (int j = 0; j < g; ++j) {
      q.coset_table[static_cast<std::size_t>(c)][static_cast<std::size_t>(2 * j)] =
          perms[static_cast<std::size_t>(j)][static_cast<std::size_t>(c)];
      q.coset_table[static_cast<std::size_t>(c)][static_cast<std::size_t>(2 * j + 1)] =
          inv[static_cast<std::size_t>(j)][static_cast<std::size_t>(c)];
    }

  // close the image group under left multiplication by generator images,
  // labeling elements in breadth-first discovery order from the identity
  std::map<std::vector<int>, int> label_of;
  std::vector<std::vector<int>> elems;
  elems.push_back(ident);
  label_of[ident] = 0;
  q.transversal.push_back(Word());
  std::vector<std::vector<int>> lm(static_cast<std::size_t>(g));
  for (std::size_t head = 0; head < elems.size(); ++head) {
    for (int j = 0; j < g; ++j) {
      std::vector<int> child = detail::perm_mul(perms[static_cast<std::size_t>(j)], elems[head]);
      auto it = label_of.find(child);
      int lbl;
      if (it == label_of.end()) {
        if (max_order >= 0 && static_cast<long long>(elems.size()) >= max_order)
          return std::nullopt;
        lbl = static_cast<int>(elems.size());
        label_of[child] = lbl;
        elems.push_back(std::move(child));
        std::vector<int> letters{j + 1};
        const auto& parent = q.transversal[head].letters();
        letters.insert(letters.end(), parent.begin(), parent.end());
        q.transversal.push_back(Word(std::move(letters)));
      } else {
        lbl = it->second;
      }
      lm[static_cast<std::size_t>(j)].push_back(lbl);
    }
  }
  // lm[j] was appended once per processed element in label order
  long long order = static_cast<long long>(elems.size());
  q.group_order = order;
  q.left_mult = std::move(lm);
  q.left_mult_inv.assign(static_cast<std::size_t>(g), {});
  for (int j = 0; j < g; ++j)
    q.left_mult_inv[static_cast<std::size_t>(j)] = detail::perm_inverse(q.left_mult[static_cast<std::size_t>(j)]);

  q.canonical_key.clear();
  q.canonical_key.push_back(static_cast<int>(order));
  q.canonical_key.push_back(g);
  for (int j = 0; j < g; ++j)
    q.canonical_key.insert(q.canonical_key.end(), q.left_mult[static_cast<std::size_t>(j)].begin(),
                           q.left_mult[static_cast<std::size_t>(j)].end());
  return q;
}

namespace detail {

class CosetEnumerator {
 public:
  CosetEnumerator(const Presentation& pres, const EnumerationOptions& opts)
      : g_(pres.generator_count), opts_(opts), pres_(pres) {
    for (const Word& r : pres.relators) rels_.push_back(r.letters());
    tab_.assign(static_cast<std::size_t>(opts.max_degree) * cols(), -1);
  }

  EnumerationResult run() {
    n_ = 1;
    dfs();
    EnumerationResult out;
    out.nodes = nodes_;
    out.budget_exhausted = exhausted_;
    for (auto& [key, cand] : found_) out.quotients.push_back(std::move(cand.q));
    std::sort(out.quotients.begin(), out.quotients.end(),
              [](const FiniteQuotient& a, const FiniteQuotient& b) {
                if (a.group_order != b.group_order) return a.group_order < b.group_order;
                return a.canonical_key < b.canonical_key;
              });
    return out;
  }

 private:
  struct Candidate {
    int degree;
    std::vector<int> table_flat;
    FiniteQuotient q;
  };

  std::size_t cols() const { return static_cast<std::size_t>(2 * g_); }
  int& cell(int c, int col) { return tab_[static_cast<std::size_t>(c) * cols() + static_cast<std::size_t>(col)]; }
  int cellv(int c, int col) const {
    return tab_[static_cast<std::size_t>(c) * cols() + static_cast<std::size_t>(col)];
  }
  static int col_of(int letter) { return letter > 0 ? 2 * (letter - 1) : 2 * (-letter - 1) + 1; }

  // sets entry and its mirror, recording both for undo; false on conflict
  bool checked_assign(int x, int letter, int y) {
    int c = col_of(letter);
    int m = c ^ 1;
    int cur = cellv(x, c);
    if (cur != -1) return cur == y;
    int mir = cellv(y, m);
    if (mir != -1 && mir != x) return false;
    cell(x, c) = y;
    trail_.emplace_back(x, c);
    if (cellv(y, m) == -1) {
      cell(y, m) = x;
      trail_.emplace_back(y, m);
    }
    return true;
  }

  // relator scan from every coset; forced deductions applied until stable
  bool propagate() {
    bool progress = true;
    while (progress) {
      progress = false;
      for (int c = 0; c < n_; ++c) {
        for (const auto& r : rels_) {
          int L = static_cast<int>(r.size());
          int f = c, i = 0;
          while (i < L) {
            int nx = cellv(f, col_of(r[static_cast<std::size_t>(i)]));
            if (nx == -1) break;
            f = nx;
            ++i;
          }
          if (i == L) {
            if (f != c) return false;
            continue;
          }
          int b = c, k = L;
          while (k > i) {
            int nx = cellv(b, col_of(-r[static_cast<std::size_t>(k - 1)]));
            if (nx == -1) break;
            b = nx;
            --k;
          }
          if (k == i + 1) {
            std::size_t before = trail_.size();
            if (!checked_assign(f, r[static_cast<std::size_t>(i)], b)) return false;
            if (trail_.size() != before) progress = true;
          } else if (k == i) {
            // both traversals met with the connecting entry missing on one
            // side only; no completion can close this relator
            return false;
          }
        }
      }
    }
    return true;
  }

  void undo_to(std::size_t mark) {
    while (trail_.size() > mark) {
      auto [c, col] = trail_.back();
      trail_.pop_back();
      cell(c, col) = -1;
    }
  }

  void emit() {
    std::vector<std::vector<int>> perms(static_cast<std::size_t>(g_),
                                        std::vector<int>(static_cast<std::size_t>(n_)));
    for (int c = 0; c < n_; ++c)
      for (int j = 0; j < g_; ++j) perms[static_cast<std::size_t>(j)][static_cast<std::size_t>(c)] = cellv(c, 2 * j);
    auto q = quotient_from_perms(pres_, std::move(perms), opts_.max_order);
    if (!q) return;  // image too large
    Candidate cand;
    cand.degree = n_;
    cand.table_flat.assign(tab_.begin(), tab_.begin() + static_cast<std::ptrdiff_t>(static_cast<std::size_t>(n_) * cols()));
    cand.q = std::move(*q);
    auto it = found_.find(cand.q.canonical_key);
    if (it == found_.end()) {
      found_.emplace(cand.q.canonical_key, std::move(cand));
    } else if (std::pair<int, const std::vector<int>&>(cand.degree, cand.table_flat) <
               std::pair<int, const std::vector<int>&>(it->second.degree, it->second.table_flat)) {
      it->second = std::move(cand);  // keep the canonical representative
    }
  }

  void dfs() {
    if (exhausted_) return;
    // first undefined cell in row-major order
    int fc = -1, fcol = -1;
    for (int c = 0; c < n_ && fc < 0; ++c)
      for (int col = 0; col < 2 * g_; ++col)
        if (cellv(c, col) == -1) {
          fc = c;
          fcol = col;
          break;
        }
    if (fc < 0) {
      emit();
      return;
    }
    int letter = (fcol % 2 == 0) ? fcol / 2 + 1 : -(fcol / 2 + 1);
    int mcol = fcol ^ 1;
    for (int e = 0; e <= n_ && !exhausted_; ++e) {
      bool fresh = (e == n_);
      if (fresh && n_ >= opts_.max_degree) break;
      if (!fresh && cellv(e, mcol) != -1) continue;
      if (++nodes_ > opts_.budget_nodes) {
        exhausted_ = true;
        break;
      }
      std::size_t mark = trail_.size();
      if (fresh) ++n_;
      if (checked_assign(fc, letter, e) && propagate()) dfs();
      undo_to(mark);
      if (fresh) --n_;
    }
  }

  int g_;
  EnumerationOptions opts_;
  const Presentation& pres_;
  std::vector<std::vector<int>> rels_;
  std::vector<int> tab_;
  std::vector<std::pair<int, int>> trail_;
  int n_ = 1;
  long long nodes_ = 0;
  bool exhausted_ = false;
  std::map<std::vector<int>, Candidate> found_;
};

}  // namespace detail

// All finite quotients with a transitive action of degree <= max_degree and
// |G| <= max_order, one per kernel, ordered by |G| then canonical key.  When
// the node budget runs out the list so far is returned with the flag set.
inline EnumerationResult enumerate_quotients(const Presentation& pres,
                                             const EnumerationOptions& opts = {}) {
  if (pres.generator_count < 1) throw PreconditionError("presentation has no generators");
  if (opts.max_degree < 1) throw PreconditionError("max_degree must be at least 1");
  detail::CosetEnumerator e(pres, opts);
  return e.run();
}

// Schreier generators of ker(alpha) for the Schreier transversal recorded in
// the quotient: one word per (element label, generator) edge of the Cayley
// graph, with tree edges contributing the empty word (skipped).
inline std::vector<Word> schreier_generators(const FiniteQuotient& q, const Presentation& pres) {
  int g = pres.generator_count;
  if (static_cast<int>(q.left_mult.size()) != g)
    throw PreconditionError("quotient and presentation generator counts differ");
  std::vector<Word> out;
  for (long long l = 0; l < q.group_order; ++l)
    for (int j = 0; j < g; ++j) {
      int l2 = q.left_mult[static_cast<std::size_t>(j)][static_cast<std::size_t>(l)];
      Word s = q.transversal[static_cast<std::size_t>(l2)].inverse() *
               Word(std::vector<int>{j + 1}) * q.transversal[static_cast<std::size_t>(l)];
      if (!s.empty()) out.push_back(std::move(s));
    }
  return out;
}

// Divisibility of the class restricted to ker(alpha): the positive generator
// of phi(ker alpha) as a subgroup of Z.  Schreier generators generate the
// kernel, so the gcd of their phi-values is exactly that generator.
inline long long div_phi_alpha(const FiniteQuotient& q, const Presentation& pres,
                               const CohomologyClass& phi) {
  if (phi.trivial()) throw PreconditionError("class is trivial");
  long long g = 0;
  for (const Word& s : schreier_generators(q, pres)) {
    long long v = evaluate_class(phi, s);
    g = std::gcd(g, v < 0 ? -v : v);
    if (g == 1) break;
  }
  if (g == 0)
    throw InternalError("class vanishes on a finite-index kernel but is nontrivial");
  return g;
}

// Matrix of left multiplication by alpha(x_j) on the group algebra, in the
// element-label basis: a |G| x |G| permutation matrix.
inline LaurentMatrix regular_representation(const FiniteQuotient& q, int gen_index) {
  if (gen_index < 1 || gen_index > static_cast<int>(q.left_mult.size()))
    throw PreconditionError("generator index out of range");
  int n = static_cast<int>(q.group_order);
  LaurentMatrix m(n, n);
  for (int h = 0; h < n; ++h)
    m.at(q.left_mult[static_cast<std::size_t>(gen_index - 1)][static_cast<std::size_t>(h)], h) =
        ZPoly::constant(Int(1));
  return m;
}

// ker(a) <= ker(b), decided by propagating the label map G_a -> G_b along the
// Cayley graphs; the map exists iff the kernels are nested.
inline bool kernel_contained(const FiniteQuotient& a, const FiniteQuotient& b) {
  if (a.left_mult.size() != b.left_mult.size())
    throw PreconditionError("quotients of different presentations are not comparable");
  if (a.group_order % b.group_order != 0) return false;
  std::vector<int> f(static_cast<std::size_t>(a.group_order), -1);
  f[0] = 0;
  for (long long l = 0; l < a.group_order; ++l) {
    if (f[static_cast<std::size_t>(l)] < 0)
      throw InternalError("element labels are not breadth-first reachable");
    for (std::size_t j = 0; j < a.left_mult.size(); ++j) {
      int la = a.left_mult[j][static_cast<std::size_t>(l)];
      int lb = b.left_mult[j][static_cast<std::size_t>(f[static_cast<std::size_t>(l)])];
      if (f[static_cast<std::size_t>(la)] < 0)
        f[static_cast<std::size_t>(la)] = lb;
      else if (f[static_cast<std::size_t>(la)] != lb)
        return false;
    }
  }
  return true;
}

}  // namespace fibercheck
