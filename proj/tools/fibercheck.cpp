// fibercheck: fibering obstructions for finitely presented groups via
// twisted Alexander polynomials over finite quotients.
//
// Exit codes: 0 completed; 1 corpus verdict contradicts a corpus label;
// 2 parse/usage error; 3 precondition violation; 4 internal error.

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "fibercheck/alexander.hpp"
#include "fibercheck/config.hpp"
#include "fibercheck/errors.hpp"
#include "fibercheck/fibering.hpp"
#include "fibercheck/json_io.hpp"
#include "fibercheck/pd.hpp"
#include "fibercheck/presentation.hpp"
#include "fibercheck/quotients.hpp"

namespace {

using namespace fibercheck;

bool ends_with(const std::string& s, const std::string& suffix) {
  return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

// Accepts a presentation file (*.pres) or a PD code (*.json, a JSON array of
// 4-integer crossing tuples).  PD input yields the Wirtinger presentation
// with the meridian class.
PresentationFile load_input(const std::string& path) {
  if (ends_with(path, ".json")) {
    PdCode pd = parse_pd_json(read_text_file(path));
    PresentationFile pf;
    pf.presentation = wirtinger_from_pd(pd);
    std::string name = std::filesystem::path(path).stem().string();
    if (ends_with(name, ".pd")) name.resize(name.size() - 3);
    pf.presentation.name = name;
    pf.phi = meridian_class(pf.presentation);
    return pf;
  }
  PresentationFile pf = parse_presentation_file(read_text_file(path));
  pf.presentation.name = std::filesystem::path(path).stem().string();
  return pf;
}

CohomologyClass resolve_phi(const PresentationFile& pf, const std::vector<std::int64_t>& flag) {
  if (!flag.empty()) {
    CohomologyClass phi;
    phi.images = flag;
    validate_class(pf.presentation, phi);
    return phi;
  }
  if (pf.phi) return *pf.phi;
  return derive_primitive_class(pf.presentation);
}

// Enumerates quotients, consulting/updating the cache when configured.
EnumerationResult enumerate_with_cache(const Presentation& pres, const Config& cfg) {
  auto cache = resolve_cache_path(cfg.cache_path);
  EnumerationOptions opts = cfg.enumeration();
  if (cache) {
    if (auto hit = load_cached_quotients(*cache, pres, opts)) return std::move(*hit);
  }
  EnumerationResult res = enumerate_quotients(pres, opts);
  if (cache) save_cached_quotients(*cache, pres, opts, res);
  return res;
}

std::string phi_text(const std::vector<std::int64_t>& images) {
  std::string s;
  for (std::size_t i = 0; i < images.size(); ++i) {
    if (i) s += ' ';
    s += std::to_string(images[i]);
  }
  return s;
}

void add_common_flags(CLI::App* cmd, Config& cfg) {
  cmd->add_option("--max-degree", cfg.max_degree, "largest quotient action degree")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  cmd->add_option("--max-order", cfg.max_order, "largest quotient group order")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  cmd->add_option("--budget", cfg.budget_nodes, "search-node budget for enumeration")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  cmd->add_option("--threads", cfg.threads, "worker threads")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  cmd->add_option("--output", cfg.output, "report format")
      ->check(CLI::IsMember({"text", "json"}))
      ->capture_default_str();
  cmd->add_option("--cache", cfg.cache_path,
                  "quotient cache file (FIBERCHECK_CACHE overrides)");
}

void emit_json(const ordered_json& j) { std::cout << j.dump(2) << '\n'; }

// --- compute -------------------------------------------------------------

struct ComputeRow {
  const FiniteQuotient* q = nullptr;
  bool deficiency_one = false;
  std::optional<TwistedAlexanderResult> result;
  bool vanishes = false;
};

int cmd_compute(const std::string& file, const std::vector<std::int64_t>& phi_flag,
                const Config& cfg) {
  PresentationFile pf = load_input(file);
  CohomologyClass phi = resolve_phi(pf, phi_flag);
  EnumerationResult en = enumerate_with_cache(pf.presentation, cfg);

  std::vector<ComputeRow> rows(en.quotients.size());
  detail::parallel_for_indexed(en.quotients.size(), cfg.threads, [&](std::size_t i) {
    ComputeRow& row = rows[i];
    row.q = &en.quotients[i];
    row.deficiency_one = pf.presentation.deficiency_one();
    if (row.deficiency_one) {
      row.result = twisted_alexander(pf.presentation, en.quotients[i], phi);
      row.vanishes = row.result->vanishing;
    } else {
      row.vanishes = vanishing_test(pf.presentation, en.quotients[i], phi);
    }
  });

  if (cfg.output == "json") {
    ordered_json j;
    j["schema"] = 1;
    j["name"] = pf.presentation.name;
    j["phi"] = std::vector<std::int64_t>(phi.images.begin(), phi.images.end());
    j["bounds"] = ordered_json{{"max_degree", cfg.max_degree},
                               {"max_order", cfg.max_order},
                               {"budget_nodes", cfg.budget_nodes}};
    j["budget_exhausted"] = en.budget_exhausted;
    ordered_json results = ordered_json::array();
    for (std::size_t i = 0; i < rows.size(); ++i) {
      const ComputeRow& row = rows[i];
      ordered_json rj;
      rj["index"] = i;
      rj["quotient"] = ordered_json{
          {"degree", row.q->degree},
          {"order", row.q->group_order},
          {"perms", fibercheck::detail::perms_one_based(row.q->generator_perms)}};
      rj["deficiency_one"] = row.deficiency_one;
      rj["vanishes"] = row.vanishes;
      rj["alexander"] = row.result ? to_json(*row.result) : ordered_json(nullptr);
      results.push_back(std::move(rj));
    }
    j["results"] = results;
    emit_json(j);
  } else {
    std::cout << "name: " << pf.presentation.name << "\n";
    std::cout << "phi: " << phi_text({phi.images.begin(), phi.images.end()}) << "\n";
    std::cout << "quotients: " << rows.size() << (en.budget_exhausted ? " (budget exhausted)" : "")
              << "\n";
    for (std::size_t i = 0; i < rows.size(); ++i) {
      const ComputeRow& row = rows[i];
      std::cout << "  #" << i << " degree=" << row.q->degree << " |G|=" << row.q->group_order;
      if (row.result) {
        const auto& r = *row.result;
        std::cout << " div=" << r.divisibility;
        if (r.vanishing) {
          std::cout << " delta1 = 0 (vanishing)";
        } else {
          std::cout << " delta1 = " << to_string(r.delta1)
                    << (r.monic() ? " (monic" : " (nonmonic") << ", degree " << r.delta1_degree()
                    << ")";
        }
      } else {
        std::cout << (row.vanishes ? " delta1 vanishes" : " delta1 does not vanish")
                  << " (vanishing test only; presentation is not deficiency-one)";
      }
      std::cout << "\n";
    }
  }
  return 0;
}

// --- check-fibered ---------------------------------------------------------

void print_report_text(const FiberingReport& rep) {
  std::cout << "name: " << rep.name << "\n";
  std::cout << "phi: " << phi_text(rep.phi_images) << "\n";
  if (rep.norm) std::cout << "norm: " << *rep.norm << "\n";
  std::cout << "quotients: " << rep.quotients_enumerated
            << (rep.budget_exhausted ? " (budget exhausted)" : "") << "\n";
  for (const auto& c : rep.checks) {
    std::cout << "  #" << c.index << " degree=" << c.degree << " |G|=" << c.order
              << " div=" << c.divisibility;
    if (c.deficiency_note) std::cout << " (vanishing test only)";
    if (c.alexander && !c.alexander->vanishing)
      std::cout << " delta1 = " << to_string(c.alexander->delta1);
    if (c.expected_degree) std::cout << " expected degree " << *c.expected_degree;
    std::cout << " " << to_string(c.verdict) << "\n";
  }
  if (rep.norm_lower_bound)
    std::cout << "norm lower bound: " << rep.norm_lower_bound->str() << " (from quotient #"
              << *rep.norm_bound_index << ")\n";
  std::cout << "verdict: " << to_string(rep.overall) << "\n";
}

int cmd_check_fibered(const std::string& file, const std::vector<std::int64_t>& phi_flag,
                      std::optional<long long> norm_flag, const Config& cfg) {
  PresentationFile pf = load_input(file);
  CohomologyClass phi = resolve_phi(pf, phi_flag);

  FiberingOptions opts;
  opts.enumeration = cfg.enumeration();
  opts.threads = cfg.threads;
  if (norm_flag) opts.norm = norm_flag;
  else if (pf.norm) opts.norm = *pf.norm;
  else if (pf.genus && *pf.genus >= 1) opts.norm = 2LL * *pf.genus - 1;

  EnumerationResult en = enumerate_with_cache(pf.presentation, cfg);
  FiberingReport rep = check_fibered(pf.presentation, phi, opts, &en);
  rep.label = pf.label;

  if (cfg.output == "json") emit_json(to_json(rep));
  else print_report_text(rep);
  return 0;
}

// --- search-vanishing ------------------------------------------------------

int cmd_search_vanishing(const std::string& file, const std::vector<std::int64_t>& phi_flag,
                         const Config& cfg) {
  PresentationFile pf = load_input(file);
  CohomologyClass phi = resolve_phi(pf, phi_flag);
  FiberingOptions opts;
  opts.enumeration = cfg.enumeration();
  opts.threads = cfg.threads;
  EnumerationResult en = enumerate_with_cache(pf.presentation, cfg);
  VanishingSearch s = search_vanishing(pf.presentation, phi, opts, &en);

  if (cfg.output == "json") {
    emit_json(to_json(s));
  } else {
    if (s.certificate) {
      std::cout << "vanishing quotient found: #" << *s.index << " degree="
                << s.certificate->degree << " |G|=" << s.certificate->group_order << "\n";
    } else if (s.exhausted_all) {
      std::cout << "no vanishing quotient within bounds (enumeration complete)\n";
    } else {
      std::cout << "no vanishing quotient found (budget exhausted)\n";
    }
    std::cout << "examined: " << s.examined << "\n";
  }
  return 0;
}

// --- corpus ----------------------------------------------------------------

int cmd_corpus(const std::string& dir, const Config& cfg) {
  FiberingOptions opts;
  opts.enumeration = cfg.enumeration();
  opts.threads = cfg.threads;
  CorpusResult res = run_corpus(dir, opts);

  if (cfg.output == "json") {
    emit_json(to_json(res));
  } else {
    for (const auto& e : res.entries) {
      std::cout << e.file << ": " << to_string(e.report.overall);
      if (e.report.label) std::cout << " (label: " << *e.report.label << ")";
      if (e.report.contradiction) std::cout << " CONTRADICTION";
      std::cout << "\n";
    }
    for (const auto& err : res.errors) std::cout << "error: " << err << "\n";
    if (!res.contradictions.empty())
      std::cout << "contradictions: " << res.contradictions.size() << "\n";
  }
  return res.contradictions.empty() ? 0 : 1;
}

// --- wirtinger ---------------------------------------------------------------

int cmd_wirtinger(const std::string& file) {
  PdCode pd = parse_pd_json(read_text_file(file));
  Presentation pres = wirtinger_from_pd(pd);
  std::cout << "gens:";
  for (const auto& n : pres.generator_names) std::cout << ' ' << n;
  std::cout << "\n";
  for (const Word& r : pres.relators) {
    std::cout << "rel:";
    for (int a : r.letters()) {
      const std::string& n = pres.generator_names[static_cast<std::size_t>(std::abs(a) - 1)];
      std::string u = n;
      if (a < 0)
        for (auto& ch : u) ch = static_cast<char>(std::toupper(static_cast<unsigned char>(ch)));
      std::cout << ' ' << u;
    }
    std::cout << "\n";
  }
  std::cout << "phi:";
  for (std::size_t i = 0; i < static_cast<std::size_t>(pres.generator_count); ++i)
    std::cout << " 1";
  std::cout << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"fibering obstructions from twisted Alexander polynomials"};
  app.require_subcommand(1);

  Config cfg;
  std::string file;
  std::string dir;
  std::vector<std::int64_t> phi_flag;
  std::optional<long long> norm_flag;

  CLI::App* compute = app.add_subcommand("compute", "twisted polynomials over all quotients");
  compute->add_option("file", file, "presentation (*.pres) or PD code (*.json)")->required();
  compute->add_option("--phi", phi_flag, "cohomology class images, comma separated")
      ->delimiter(',');
  add_common_flags(compute, cfg);

  CLI::App* check = app.add_subcommand("check-fibered", "monic/degree fibering obstructions");
  check->add_option("file", file, "presentation (*.pres) or PD code (*.json)")->required();
  check->add_option("--phi", phi_flag, "cohomology class images, comma separated")->delimiter(',');
  check->add_option("--norm", norm_flag, "Thurston norm of the class");
  add_common_flags(check, cfg);

  CLI::App* search = app.add_subcommand("search-vanishing", "hunt for a vanishing quotient");
  search->add_option("file", file, "presentation (*.pres) or PD code (*.json)")->required();
  search->add_option("--phi", phi_flag, "cohomology class images, comma separated")->delimiter(',');
  add_common_flags(search, cfg);

  CLI::App* corpus = app.add_subcommand("corpus", "run the checker over a directory of presentations");
  corpus->add_option("dir", dir, "directory containing *.pres files")->required();
  add_common_flags(corpus, cfg);

  CLI::App* wirt = app.add_subcommand("wirtinger", "convert a PD code to a presentation file");
  wirt->add_option("file", file, "PD code (*.json)")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int r = app.exit(e);
    return r == 0 ? 0 : 2;
  }

  try {
    if (compute->parsed()) return cmd_compute(file, phi_flag, cfg);
    if (check->parsed()) return cmd_check_fibered(file, phi_flag, norm_flag, cfg);
    if (search->parsed()) return cmd_search_vanishing(file, phi_flag, cfg);
    if (corpus->parsed()) return cmd_corpus(dir, cfg);
    if (wirt->parsed()) return cmd_wirtinger(file);
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const PreconditionError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 4;
  }
  return 0;
}
