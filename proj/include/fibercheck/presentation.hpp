#pragma once

// Finite presentations, integral cohomology classes (homomorphisms to Z), and
// the text format used by the tools:
//
//   gens: x y
//   rel: x y x Y X Y        # uppercase letter = inverse of the generator
//   phi: 1 1                # optional; one integer per generator
//   closed: true            # optional, defaults to false
//   label: fibered          # optional corpus metadata
//   genus: 1
//   norm: 1
//
// '#' starts a comment; blank lines are ignored.

#include <cctype>
#include <cstdint>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "fibercheck/errors.hpp"
#include "fibercheck/laurent.hpp"
#include "fibercheck/word.hpp"

namespace fibercheck {

struct Presentation {
  std::string name;
  int generator_count = 0;
  std::vector<std::string> generator_names;  // display only; indices are what matter
  std::vector<Word> relators;
  bool closed = false;  // marks presentations of closed-manifold groups

  int relator_count() const { return static_cast<int>(relators.size()); }
  // deficiency-one presentations are the ones the Wada machinery accepts
  bool deficiency_one() const { return relator_count() == generator_count - 1; }
};

// A homomorphism to Z, recorded by the images of the generators.
struct CohomologyClass {
  std::vector<std::int64_t> images;

  bool trivial() const {
    for (auto v : images)
      if (v != 0) return false;
    return true;
  }
};

inline std::int64_t evaluate_class(const CohomologyClass& phi, const Word& w) {
  std::int64_t s = 0;
  for (int a : w.letters()) {
    int j = a > 0 ? a : -a;
    if (j > static_cast<int>(phi.images.size()))
      throw PreconditionError("word mentions a generator outside the class's range");
    s += a > 0 ? phi.images[static_cast<std::size_t>(j - 1)]
               : -phi.images[static_cast<std::size_t>(j - 1)];
  }
  return s;
}

struct PresentationFile {
  Presentation presentation;
  std::optional<CohomologyClass> phi;
  std::optional<std::string> label;
  std::optional<int> genus;
  std::optional<int> norm;
};

namespace detail {

inline std::string strip_comment(const std::string& line) {
  auto pos = line.find('#');
  return pos == std::string::npos ? line : line.substr(0, pos);
}

inline std::vector<std::pair<std::string, int>> split_tokens(const std::string& s) {
  std::vector<std::pair<std::string, int>> out;  // token, 1-based column
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    if (i >= s.size()) break;
    std::size_t b = i;
    while (i < s.size() && !std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    out.emplace_back(s.substr(b, i - b), static_cast<int>(b) + 1);
  }
  return out;
}

}  // namespace detail

// Parses the full file, including the optional class and corpus metadata.
inline PresentationFile parse_presentation_file(const std::string& text) {
  PresentationFile out;
  Presentation& pres = out.presentation;
  std::map<std::string, int> gen_index;  // lowercase name -> 1-based index
  bool saw_gens = false;

  std::istringstream in(text);
  std::string raw;
  int lineno = 0;
  std::vector<std::pair<std::vector<std::pair<std::string, int>>, int>> relator_lines;
  std::optional<std::pair<std::vector<std::pair<std::string, int>>, int>> phi_line;

  while (std::getline(in, raw)) {
    ++lineno;
    std::string line = detail::strip_comment(raw);
    auto toks = detail::split_tokens(line);
    if (toks.empty()) continue;
    const auto& [key, keycol] = toks[0];
    if (key.back() != ':')
      throw ParseError("expected 'key:' at the start of the line", lineno, keycol);
    std::string k = key.substr(0, key.size() - 1);
    std::vector<std::pair<std::string, int>> rest(toks.begin() + 1, toks.end());

    if (k == "gens") {
      if (saw_gens) throw ParseError("duplicate gens line", lineno, keycol);
      saw_gens = true;
      if (rest.empty()) throw ParseError("gens line lists no generators", lineno, keycol);
      for (const auto& [name, col] : rest) {
        for (char ch : name)
          if (!std::isalpha(static_cast<unsigned char>(ch)) && !std::isdigit(static_cast<unsigned char>(ch)) && ch != '_')
            throw ParseError("generator names must be alphanumeric", lineno, col);
        if (!std::islower(static_cast<unsigned char>(name[0])))
          throw ParseError("generator names must start lowercase (uppercase is reserved for inverses)",
                           lineno, col);
        std::string lower = name;
        if (gen_index.count(lower))
          throw ParseError("duplicate generator name '" + name + "'", lineno, col);
        gen_index[lower] = static_cast<int>(gen_index.size()) + 1;
        pres.generator_names.push_back(name);
      }
      pres.generator_count = static_cast<int>(pres.generator_names.size());
    } else if (k == "rel") {
      relator_lines.emplace_back(rest, lineno);
    } else if (k == "phi") {
      if (phi_line) throw ParseError("duplicate phi line", lineno, keycol);
      phi_line = std::make_pair(rest, lineno);
    } else if (k == "closed") {
      if (rest.size() != 1 || (rest[0].first != "true" && rest[0].first != "false"))
        throw ParseError("closed takes exactly one of true/false", lineno, keycol);
      pres.closed = rest[0].first == "true";
    } else if (k == "label") {
      if (rest.size() != 1) throw ParseError("label takes one token", lineno, keycol);
      out.label = rest[0].first;
    } else if (k == "genus" || k == "norm") {
      if (rest.size() != 1) throw ParseError(k + " takes one integer", lineno, keycol);
      try {
        int v = std::stoi(rest[0].first);
        if (k == "genus") out.genus = v;
        else out.norm = v;
      } catch (const std::exception&) {
        throw ParseError(k + " takes one integer", lineno, rest[0].second);
      }
    } else {
      throw ParseError("unknown key '" + k + "'", lineno, keycol);
    }
  }

  if (!saw_gens) throw ParseError("missing gens line");

  for (const auto& [toks, ln] : relator_lines) {
    std::vector<int> letters;
    for (const auto& [tok, col] : toks) {
      bool upper = std::isupper(static_cast<unsigned char>(tok[0]));
      std::string lower = tok;
      for (char& ch : lower) ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
      auto it = gen_index.find(lower);
      if (it == gen_index.end())
        throw ParseError("relator mentions undeclared generator '" + tok + "'", ln, col);
      letters.push_back(upper ? -it->second : it->second);
    }
    pres.relators.emplace_back(std::move(letters));
  }

  if (phi_line) {
    const auto& [toks, ln] = *phi_line;
    if (static_cast<int>(toks.size()) != pres.generator_count)
      throw ParseError("phi must list one integer per generator", ln, 1);
    CohomologyClass phi;
    for (const auto& [tok, col] : toks) {
      try {
        phi.images.push_back(std::stoll(tok));
      } catch (const std::exception&) {
        throw ParseError("phi entries must be integers", ln, col);
      }
    }
    out.phi = phi;
  }
  return out;
}

inline Presentation parse_presentation(const std::string& text) {
  return parse_presentation_file(text).presentation;
}

// ---------------------------------------------------------------------------
// Abelianization via Smith normal form of the relator exponent matrix.

struct Abelianization {
  std::int64_t betti = 0;            // rank of H_1
  std::vector<Int> torsion;          // invariant factors > 1, in divisibility order
};

namespace detail {

// Exponent matrix: rows = generators, columns = relators.
inline std::vector<std::vector<Int>> exponent_matrix(const Presentation& p) {
  std::vector<std::vector<Int>> m(static_cast<std::size_t>(p.generator_count),
                                  std::vector<Int>(p.relators.size(), Int(0)));
  for (std::size_t r = 0; r < p.relators.size(); ++r)
    for (int a : p.relators[r].letters()) {
      int j = a > 0 ? a : -a;
      m[static_cast<std::size_t>(j - 1)][r] += (a > 0 ? 1 : -1);
    }
  return m;
}

inline std::vector<Int> smith_invariant_factors(std::vector<std::vector<Int>> m) {
  int rows = static_cast<int>(m.size());
  int cols = rows ? static_cast<int>(m[0].size()) : 0;
  int k = 0;
  auto nonzero_in_block = [&](int& bi, int& bj) {
    Int best = 0;
    bi = -1;
    for (int i = k; i < rows; ++i)
      for (int j = k; j < cols; ++j) {
        if (m[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] == 0) continue;
        Int a = boost::multiprecision::abs(m[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]);
        if (bi < 0 || a < best) {
          best = a;
          bi = i;
          bj = j;
        }
      }
    return bi >= 0;
  };
  std::vector<Int> diag;
  while (k < rows && k < cols) {
    int bi, bj;
    if (!nonzero_in_block(bi, bj)) break;
    std::swap(m[static_cast<std::size_t>(k)], m[static_cast<std::size_t>(bi)]);
    for (int i = 0; i < rows; ++i)
      std::swap(m[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)],
                m[static_cast<std::size_t>(i)][static_cast<std::size_t>(bj)]);
    bool clean = false;
    while (!clean) {
      clean = true;
      Int pivot = m[static_cast<std::size_t>(k)][static_cast<std::size_t>(k)];
      for (int i = k + 1; i < rows; ++i) {
        Int q = m[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)] / pivot;
        if (q != 0)
          for (int j = k; j < cols; ++j)
            m[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] -=
                q * m[static_cast<std::size_t>(k)][static_cast<std::size_t>(j)];
        if (m[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)] != 0) {
          std::swap(m[static_cast<std::size_t>(k)], m[static_cast<std::size_t>(i)]);
          clean = false;
          pivot = m[static_cast<std::size_t>(k)][static_cast<std::size_t>(k)];
        }
      }
      for (int j = k + 1; j < cols; ++j) {
        Int q = m[static_cast<std::size_t>(k)][static_cast<std::size_t>(j)] / pivot;
        if (q != 0)
          for (int i = k; i < rows; ++i)
            m[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] -=
                q * m[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)];
        if (m[static_cast<std::size_t>(k)][static_cast<std::size_t>(j)] != 0) {
          for (int i = 0; i < rows; ++i)
            std::swap(m[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)],
                      m[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]);
          clean = false;
        }
      }
    }
    diag.push_back(boost::multiprecision::abs(m[static_cast<std::size_t>(k)][static_cast<std::size_t>(k)]));
    ++k;
  }
  // enforce the divisibility chain d_i | d_{i+1}
  for (std::size_t i = 0; i + 1 < diag.size(); ++i)
    for (std::size_t j = i + 1; j < diag.size(); ++j) {
      if (diag[i] == 0) std::swap(diag[i], diag[j]);
      if (diag[j] % diag[i] != 0) {
        Int g = boost::multiprecision::gcd(diag[i], diag[j]);
        Int l = diag[i] / g * diag[j];
        diag[i] = g;
        diag[j] = l;
      }
    }
  return diag;
}

}  // namespace detail

inline Abelianization abelianization(const Presentation& p) {
  auto diag = detail::smith_invariant_factors(detail::exponent_matrix(p));
  Abelianization ab;
  int nonzero = 0;
  for (const Int& d : diag)
    if (d != 0) ++nonzero;
  ab.betti = p.generator_count - nonzero;
  for (const Int& d : diag)
    if (d > 1) ab.torsion.push_back(d);
  return ab;
}

// Basis of the integer kernel of a (rows x cols) matrix, as column vectors,
// via unimodular column reduction of the matrix stacked over an identity.
inline std::vector<std::vector<Int>> integer_kernel(const std::vector<std::vector<Int>>& a) {
  int rows = static_cast<int>(a.size());
  int cols = rows ? static_cast<int>(a[0].size()) : 0;
  if (cols == 0) return {};
  std::vector<std::vector<Int>> top = a;
  std::vector<std::vector<Int>> bot(static_cast<std::size_t>(cols),
                                    std::vector<Int>(static_cast<std::size_t>(cols), Int(0)));
  for (int j = 0; j < cols; ++j) bot[static_cast<std::size_t>(j)][static_cast<std::size_t>(j)] = 1;
  std::vector<bool> consumed(static_cast<std::size_t>(cols), false);

  auto col_op = [&](int dst, int src, const Int& q) {  // col_dst -= q * col_src
    for (int i = 0; i < rows; ++i)
      top[static_cast<std::size_t>(i)][static_cast<std::size_t>(dst)] -=
          q * top[static_cast<std::size_t>(i)][static_cast<std::size_t>(src)];
    for (int i = 0; i < cols; ++i)
      bot[static_cast<std::size_t>(i)][static_cast<std::size_t>(dst)] -=
          q * bot[static_cast<std::size_t>(i)][static_cast<std::size_t>(src)];
  };

  for (int i = 0; i < rows; ++i) {
    while (true) {
      int jmin = -1;
      Int best = 0;
      int live = 0;
      for (int j = 0; j < cols; ++j) {
        if (consumed[static_cast<std::size_t>(j)]) continue;
        const Int& v = top[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
        if (v == 0) continue;
        ++live;
        Int av = boost::multiprecision::abs(v);
        if (jmin < 0 || av < best) {
          best = av;
          jmin = j;
        }
      }
      if (jmin < 0) break;  // row already zero on active columns
      if (live == 1) {
        consumed[static_cast<std::size_t>(jmin)] = true;
        break;
      }
      const Int& pv = top[static_cast<std::size_t>(i)][static_cast<std::size_t>(jmin)];
      for (int j = 0; j < cols; ++j) {
        if (j == jmin || consumed[static_cast<std::size_t>(j)]) continue;
        const Int& v = top[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
        if (v == 0) continue;
        col_op(j, jmin, v / pv);
      }
    }
  }

  std::vector<std::vector<Int>> kernel;
  for (int j = 0; j < cols; ++j) {
    if (consumed[static_cast<std::size_t>(j)]) continue;
    std::vector<Int> v;
    v.reserve(static_cast<std::size_t>(cols));
    for (int i = 0; i < cols; ++i) v.push_back(bot[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]);
    kernel.push_back(std::move(v));
  }
  return kernel;
}

// Checks that phi really is a homomorphism on the presented group and that it
// is nontrivial.
inline void validate_class(const Presentation& p, const CohomologyClass& phi) {
  if (static_cast<int>(phi.images.size()) != p.generator_count)
    throw PreconditionError("class has the wrong number of generator images");
  for (std::size_t i = 0; i < p.relators.size(); ++i)
    if (evaluate_class(phi, p.relators[i]) != 0)
      throw PreconditionError("class does not vanish on relator " + std::to_string(i + 1) +
                              ": not a homomorphism");
  if (phi.trivial()) throw PreconditionError("class is trivial");
}

// For presentations with first Betti number 1 there is a canonical primitive
// class (up to sign); we fix the sign to make the first nonzero image
// positive.  Throws when b_1 != 1.
inline CohomologyClass derive_primitive_class(const Presentation& p) {
  if (p.relators.empty()) {
    // free group: b_1 equals the rank
    if (p.generator_count != 1)
      throw PreconditionError("presentation has first Betti number " +
                              std::to_string(p.generator_count) +
                              "; a class must be supplied explicitly");
    CohomologyClass phi;
    phi.images = {1};
    return phi;
  }
  // kernel of the transpose exponent matrix = all valid classes
  std::vector<std::vector<Int>> m(static_cast<std::size_t>(p.relators.size()),
                                  std::vector<Int>(static_cast<std::size_t>(p.generator_count), Int(0)));
  for (std::size_t r = 0; r < p.relators.size(); ++r)
    for (int a : p.relators[r].letters()) {
      int j = a > 0 ? a : -a;
      m[r][static_cast<std::size_t>(j - 1)] += (a > 0 ? 1 : -1);
    }
  auto kernel = integer_kernel(m);
  if (kernel.size() != 1)
    throw PreconditionError("presentation has first Betti number " + std::to_string(kernel.size()) +
                            "; a class must be supplied explicitly");
  std::vector<Int>& v = kernel[0];
  Int g = 0;
  for (const Int& x : v) g = boost::multiprecision::gcd(g, x);
  if (g == 0) throw InternalError("kernel basis vector is zero");
  for (Int& x : v) x /= g;
  for (const Int& x : v) {
    if (x == 0) continue;
    if (x < 0)
      for (Int& y : v) y = -y;
    break;
  }
  CohomologyClass phi;
  for (const Int& x : v) phi.images.push_back(x.convert_to<std::int64_t>());
  return phi;
}

// Stable content hash of the abstract presentation (names excluded), used to
// key the quotient cache.
inline std::uint64_t presentation_hash(const Presentation& p) {
  std::ostringstream os;
  os << "g=" << p.generator_count << ";closed=" << (p.closed ? 1 : 0) << ";";
  for (const Word& r : p.relators) {
    os << "r=";
    for (int a : r.letters()) os << a << ",";
    os << ";";
  }
  std::string s = os.str();
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

}  // namespace fibercheck
