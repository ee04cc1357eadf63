#pragma once

// Fibering obstructions assembled from twisted Alexander polynomials.
//
// For a fibered class, every finite quotient must produce a monic delta1 of
// degree exactly |G| * norm + (1 + b3) * div; a single quotient violating
// monicness or the degree, or making delta1 vanish, refutes fiberedness.  The
// converse direction quantifies over all finite quotients, so a finite run
// can only ever report consistency up to its enumeration bounds, never a
// proof.  Quotients are processed in their deterministic enumeration order;
// worker threads only parallelize the per-quotient computations, so reports
// are byte-identical for any thread count.

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <exception>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "fibercheck/alexander.hpp"
#include "fibercheck/errors.hpp"
#include "fibercheck/presentation.hpp"
#include "fibercheck/quotients.hpp"

namespace fibercheck {

enum class QuotientVerdict { kPasses, kVanishes, kNonMonic, kWrongDegree };

enum class OverallVerdict {
  kVanishingFound,
  kObstructedNonMonic,
  kObstructedDegree,
  kConsistentWithFibered,
  kInconclusive,
};

inline const char* to_string(QuotientVerdict v) {
  switch (v) {
    case QuotientVerdict::kPasses: return "PASSES";
    case QuotientVerdict::kVanishes: return "VANISHES";
    case QuotientVerdict::kNonMonic: return "NONMONIC";
    case QuotientVerdict::kWrongDegree: return "WRONG_DEGREE";
  }
  return "?";
}

inline const char* to_string(OverallVerdict v) {
  switch (v) {
    case OverallVerdict::kVanishingFound: return "VANISHING_FOUND";
    case OverallVerdict::kObstructedNonMonic: return "OBSTRUCTED_NONMONIC";
    case OverallVerdict::kObstructedDegree: return "OBSTRUCTED_DEGREE";
    case OverallVerdict::kConsistentWithFibered: return "CONSISTENT_WITH_FIBERED";
    case OverallVerdict::kInconclusive: return "INCONCLUSIVE";
  }
  return "?";
}

struct QuotientCheck {
  std::size_t index = 0;  // position in the enumeration order
  int degree = 0;
  long long order = 0;
  long long divisibility = 0;
  std::vector<std::vector<int>> generator_perms;
  std::optional<TwistedAlexanderResult> alexander;  // absent when deficiency != 1
  bool vanishes = false;
  bool deficiency_note = false;  // monic/degree checks skipped, vanishing only
  std::optional<long long> expected_degree;
  QuotientVerdict verdict = QuotientVerdict::kPasses;
  std::optional<Rat> norm_estimate;  // (deg - (1+b3) div) / |G| when nonvanishing
};

struct FiberingOptions {
  EnumerationOptions enumeration;
  std::optional<long long> norm;  // Thurston norm of the class, if known
  int threads = 1;
};

struct FiberingReport {
  std::string name;
  std::vector<std::int64_t> phi_images;
  bool closed = false;
  int b3 = 0;
  std::optional<long long> norm;
  EnumerationOptions bounds;
  bool budget_exhausted = false;
  long long quotients_enumerated = 0;
  std::vector<QuotientCheck> checks;  // truncated just past the first obstruction
  OverallVerdict overall = OverallVerdict::kInconclusive;
  std::optional<Rat> norm_lower_bound;
  std::optional<std::size_t> norm_bound_index;
  std::optional<std::string> label;   // corpus metadata, when present
  bool contradiction = false;         // label fibered but an obstruction found
};

namespace detail {

// Runs fn(i) for i in [0, count) on up to `threads` workers.  The first
// exception in index order is rethrown after all workers drain.
template <typename F>
void parallel_for_indexed(std::size_t count, int threads, F&& fn) {
  if (threads <= 1 || count <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> errors(count);
  auto worker = [&]() {
    while (true) {
      std::size_t i = next.fetch_add(1);
      if (i >= count) break;
      try {
        fn(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  int nthreads = std::min<std::size_t>(static_cast<std::size_t>(threads), count);
  pool.reserve(static_cast<std::size_t>(nthreads));
  for (int k = 0; k < nthreads; ++k) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

}  // namespace detail

// One quotient, one verdict.  For deficiency-one presentations the full Wada
// computation runs; otherwise only the vanishing test applies and the record
// carries a deficiency note instead of monic/degree data.
inline QuotientCheck check_quotient(const Presentation& pres, const CohomologyClass& phi,
                                    const FiniteQuotient& q, std::optional<long long> norm,
                                    int b3) {
  QuotientCheck c;
  c.degree = q.degree;
  c.order = q.group_order;
  c.generator_perms = q.generator_perms;
  if (pres.deficiency_one()) {
    TwistedAlexanderResult res = twisted_alexander(pres, q, phi);
    c.divisibility = res.divisibility;
    c.vanishes = res.vanishing;
    if (res.vanishing) {
      c.verdict = QuotientVerdict::kVanishes;
    } else {
      long long d = res.delta1_degree();
      c.norm_estimate = Rat(Int(d - (1 + b3) * res.divisibility), Int(res.quotient_order));
      if (!res.monic()) {
        c.verdict = QuotientVerdict::kNonMonic;
      } else if (norm) {
        long long expected = q.group_order * *norm + (1 + b3) * res.divisibility;
        c.expected_degree = expected;
        c.verdict = d == expected ? QuotientVerdict::kPasses : QuotientVerdict::kWrongDegree;
      } else {
        c.verdict = QuotientVerdict::kPasses;
      }
    }
    c.alexander = std::move(res);
  } else {
    c.deficiency_note = true;
    c.divisibility = div_phi_alpha(q, pres, phi);
    c.vanishes = vanishing_test(pres, q, phi);
    c.verdict = c.vanishes ? QuotientVerdict::kVanishes : QuotientVerdict::kPasses;
  }
  return c;
}

// Thurston-norm estimate from a batch of nonvanishing results:
// (deg delta1 - (1+b3) div) / |G|, maximized over the batch.
struct NormBound {
  Rat value;
  std::size_t index = 0;  // which result achieves it
};

inline NormBound norm_lower_bound(const std::vector<TwistedAlexanderResult>& results, int b3) {
  std::optional<NormBound> best;
  for (std::size_t i = 0; i < results.size(); ++i) {
    const auto& r = results[i];
    if (r.vanishing) continue;
    Rat est(Int(r.delta1_degree() - (1 + b3) * r.divisibility), Int(r.quotient_order));
    if (!best || est > best->value) best = NormBound{est, i};
  }
  if (!best) throw PreconditionError("all results vanish; no norm estimate available");
  return *best;
}

// Full fibering check: enumerate quotients (or accept a pre-enumerated
// batch), examine them in order, stop just past the first obstruction.
inline FiberingReport check_fibered(const Presentation& pres, const CohomologyClass& phi,
                                    const FiberingOptions& opts,
                                    const EnumerationResult* pre_enumerated = nullptr,
                                    const std::string& name = "") {
  validate_class(pres, phi);
  FiberingReport rep;
  rep.name = name.empty() ? pres.name : name;
  rep.phi_images = std::vector<std::int64_t>(phi.images.begin(), phi.images.end());
  rep.closed = pres.closed;
  rep.b3 = pres.closed ? 1 : 0;
  rep.norm = opts.norm;
  rep.bounds = opts.enumeration;

  EnumerationResult local;
  const EnumerationResult* en = pre_enumerated;
  if (!en) {
    local = enumerate_quotients(pres, opts.enumeration);
    en = &local;
  }
  rep.budget_exhausted = en->budget_exhausted;
  rep.quotients_enumerated = static_cast<long long>(en->quotients.size());

  const auto& quotients = en->quotients;
  std::size_t total = quotients.size();
  std::size_t block = static_cast<std::size_t>(std::max(1, opts.threads)) * 4;
  std::optional<QuotientVerdict> obstruction;

  for (std::size_t base = 0; base < total && !obstruction; base += block) {
    std::size_t hi = std::min(total, base + block);
    std::vector<QuotientCheck> chunk(hi - base);
    detail::parallel_for_indexed(hi - base, opts.threads, [&](std::size_t k) {
      chunk[k] = check_quotient(pres, phi, quotients[base + k], opts.norm, rep.b3);
      chunk[k].index = base + k;
    });
    for (auto& c : chunk) {
      QuotientVerdict v = c.verdict;
      rep.checks.push_back(std::move(c));
      if (v != QuotientVerdict::kPasses) {
        obstruction = v;
        break;  // deterministic truncation at the first obstruction
      }
    }
  }

  if (obstruction) {
    switch (*obstruction) {
      case QuotientVerdict::kVanishes: rep.overall = OverallVerdict::kVanishingFound; break;
      case QuotientVerdict::kNonMonic: rep.overall = OverallVerdict::kObstructedNonMonic; break;
      case QuotientVerdict::kWrongDegree: rep.overall = OverallVerdict::kObstructedDegree; break;
      case QuotientVerdict::kPasses: break;
    }
  } else if (rep.norm && !rep.budget_exhausted) {
    rep.overall = OverallVerdict::kConsistentWithFibered;
  } else {
    rep.overall = OverallVerdict::kInconclusive;
  }

  for (const auto& c : rep.checks) {
    if (!c.norm_estimate) continue;
    if (!rep.norm_lower_bound || *c.norm_estimate > *rep.norm_lower_bound) {
      rep.norm_lower_bound = c.norm_estimate;
      rep.norm_bound_index = c.index;
    }
  }
  return rep;
}

struct VanishingSearch {
  std::optional<FiniteQuotient> certificate;  // minimal vanishing quotient
  std::optional<std::size_t> index;           // its enumeration position
  long long examined = 0;
  bool budget_exhausted = false;
  bool exhausted_all = false;  // enumeration complete, nothing vanished
};

// Looks for a quotient whose twisted polynomial vanishes; the certificate is
// minimal in the deterministic enumeration order regardless of thread count.
inline VanishingSearch search_vanishing(const Presentation& pres, const CohomologyClass& phi,
                                        const FiberingOptions& opts,
                                        const EnumerationResult* pre_enumerated = nullptr) {
  validate_class(pres, phi);
  EnumerationResult local;
  const EnumerationResult* en = pre_enumerated;
  if (!en) {
    local = enumerate_quotients(pres, opts.enumeration);
    en = &local;
  }
  VanishingSearch out;
  out.budget_exhausted = en->budget_exhausted;
  const auto& quotients = en->quotients;
  std::size_t total = quotients.size();
  std::size_t block = static_cast<std::size_t>(std::max(1, opts.threads)) * 4;

  for (std::size_t base = 0; base < total; base += block) {
    std::size_t hi = std::min(total, base + block);
    std::vector<char> hit(hi - base, 0);
    detail::parallel_for_indexed(hi - base, opts.threads, [&](std::size_t k) {
      hit[k] = vanishing_test(pres, quotients[base + k], phi) ? 1 : 0;
    });
    for (std::size_t k = 0; k < hit.size(); ++k) {
      ++out.examined;
      if (hit[k]) {
        out.index = base + k;
        out.certificate = quotients[base + k];
        return out;
      }
    }
  }
  out.exhausted_all = !en->budget_exhausted;
  return out;
}

// ---------------------------------------------------------------------------
// Corpus runner

struct CorpusEntry {
  std::string file;  // basename
  FiberingReport report;
};

struct CorpusResult {
  std::vector<CorpusEntry> entries;
  std::vector<std::string> errors;          // "<file>: <message>"
  std::vector<std::string> contradictions;  // files whose label conflicts with the verdict
};

inline std::string read_text_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw ParseError("cannot open " + p.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Runs the fibering check over every *.pres file in the directory, sorted by
// name.  A fibered label contradicted by an obstruction is recorded; file
// errors are collected without aborting the batch.
inline CorpusResult run_corpus(const std::filesystem::path& dir, const FiberingOptions& base_opts) {
  namespace fs = std::filesystem;
  if (!fs::is_directory(dir)) throw ParseError("corpus path is not a directory: " + dir.string());
  std::vector<fs::path> files;
  for (const auto& e : fs::directory_iterator(dir))
    if (e.is_regular_file() && e.path().extension() == ".pres") files.push_back(e.path());
  std::sort(files.begin(), files.end(),
            [](const fs::path& a, const fs::path& b) { return a.filename() < b.filename(); });

  CorpusResult out;
  for (const auto& f : files) {
    std::string base = f.filename().string();
    try {
      PresentationFile pf = parse_presentation_file(read_text_file(f));
      pf.presentation.name = f.stem().string();
      CohomologyClass phi = pf.phi ? *pf.phi : derive_primitive_class(pf.presentation);

      FiberingOptions opts = base_opts;
      if (!opts.norm) {
        if (pf.norm) opts.norm = *pf.norm;
        else if (pf.genus && *pf.genus >= 1) opts.norm = 2LL * *pf.genus - 1;
      }

      FiberingReport rep = check_fibered(pf.presentation, phi, opts, nullptr, f.stem().string());
      rep.label = pf.label;
      bool obstructed = rep.overall == OverallVerdict::kVanishingFound ||
                        rep.overall == OverallVerdict::kObstructedNonMonic ||
                        rep.overall == OverallVerdict::kObstructedDegree;
      if (pf.label && *pf.label == "fibered" && obstructed) {
        rep.contradiction = true;
        out.contradictions.push_back(base);
      }
      out.entries.push_back(CorpusEntry{base, std::move(rep)});
    } catch (const Error& e) {
      out.errors.push_back(base + ": " + e.what());
    }
  }
  return out;
}

}  // namespace fibercheck
