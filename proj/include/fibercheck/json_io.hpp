#pragma once

// JSON serialization for reports and the quotient cache.  Everything uses
// ordered_json so key order is fixed by construction and report bytes do not
// depend on thread count or map iteration order.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "fibercheck/alexander.hpp"
#include "fibercheck/errors.hpp"
#include "fibercheck/fibering.hpp"
#include "fibercheck/laurent.hpp"
#include "fibercheck/presentation.hpp"
#include "fibercheck/quotients.hpp"

namespace fibercheck {

using ordered_json = nlohmann::ordered_json;

namespace detail {

inline ordered_json coeff_json(const Int& v) {
  static const Int lo = std::numeric_limits<std::int64_t>::min();
  static const Int hi = std::numeric_limits<std::int64_t>::max();
  if (v >= lo && v <= hi) return static_cast<std::int64_t>(v);
  return v.str();
}

inline std::vector<std::vector<int>> perms_one_based(const std::vector<std::vector<int>>& perms) {
  std::vector<std::vector<int>> out = perms;
  for (auto& p : out)
    for (auto& x : p) ++x;
  return out;
}

inline std::vector<std::vector<int>> perms_zero_based(const std::vector<std::vector<int>>& perms) {
  std::vector<std::vector<int>> out = perms;
  for (auto& p : out)
    for (auto& x : p) --x;
  return out;
}

}  // namespace detail

inline ordered_json to_json(const ZPoly& p) {
  ordered_json pairs = ordered_json::array();
  p.for_each_term([&](int e, const Int& c) { pairs.push_back({e, detail::coeff_json(c)}); });
  return ordered_json{{"str", to_string(p)}, {"pairs", pairs}};
}

inline ordered_json to_json(const TwistedAlexanderResult& r) {
  ordered_json j;
  j["vanishing"] = r.vanishing;
  j["delta1"] = r.vanishing ? ordered_json(nullptr) : to_json(r.delta1);
  j["monic"] = r.vanishing ? ordered_json(nullptr) : ordered_json(r.monic());
  j["degree"] = r.vanishing ? ordered_json(nullptr) : ordered_json(r.delta1_degree());
  j["delta0"] = to_json(r.delta0);
  j["numerator"] = to_json(r.wada_num);
  j["denominator"] = to_json(r.wada_den);
  j["column"] = r.column_used;
  j["order"] = r.quotient_order;
  j["divisibility"] = r.divisibility;
  return j;
}

inline ordered_json to_json(const QuotientCheck& c) {
  ordered_json j;
  j["index"] = c.index;
  j["degree"] = c.degree;
  j["order"] = c.order;
  j["divisibility"] = c.divisibility;
  j["perms"] = detail::perms_one_based(c.generator_perms);
  j["verdict"] = to_string(c.verdict);
  j["vanishes"] = c.vanishes;
  j["deficiency_note"] = c.deficiency_note;
  j["expected_degree"] = c.expected_degree ? ordered_json(*c.expected_degree) : ordered_json(nullptr);
  j["norm_estimate"] = c.norm_estimate ? ordered_json(c.norm_estimate->str()) : ordered_json(nullptr);
  j["alexander"] = c.alexander ? to_json(*c.alexander) : ordered_json(nullptr);
  return j;
}

inline ordered_json to_json(const FiberingReport& r) {
  ordered_json j;
  j["schema"] = 1;
  j["name"] = r.name;
  j["phi"] = r.phi_images;
  j["closed"] = r.closed;
  j["b3"] = r.b3;
  j["norm"] = r.norm ? ordered_json(*r.norm) : ordered_json(nullptr);
  j["bounds"] = ordered_json{{"max_degree", r.bounds.max_degree},
                             {"max_order", r.bounds.max_order},
                             {"budget_nodes", r.bounds.budget_nodes}};
  j["budget_exhausted"] = r.budget_exhausted;
  j["quotients_enumerated"] = r.quotients_enumerated;
  j["verdict"] = to_string(r.overall);
  j["norm_lower_bound"] =
      r.norm_lower_bound ? ordered_json(r.norm_lower_bound->str()) : ordered_json(nullptr);
  j["norm_lower_bound_index"] =
      r.norm_bound_index ? ordered_json(*r.norm_bound_index) : ordered_json(nullptr);
  j["label"] = r.label ? ordered_json(*r.label) : ordered_json(nullptr);
  j["contradiction"] = r.contradiction;
  ordered_json checks = ordered_json::array();
  for (const auto& c : r.checks) checks.push_back(to_json(c));
  j["checks"] = checks;
  return j;
}

inline ordered_json to_json(const VanishingSearch& s) {
  ordered_json j;
  j["schema"] = 1;
  j["found"] = s.certificate.has_value();
  if (s.certificate) {
    j["index"] = *s.index;
    j["certificate"] = ordered_json{{"degree", s.certificate->degree},
                                    {"order", s.certificate->group_order},
                                    {"perms", detail::perms_one_based(s.certificate->generator_perms)}};
  } else {
    j["index"] = nullptr;
    j["certificate"] = nullptr;
  }
  j["examined"] = s.examined;
  j["budget_exhausted"] = s.budget_exhausted;
  j["exhausted_all"] = s.exhausted_all;
  return j;
}

inline ordered_json to_json(const CorpusResult& r) {
  ordered_json j;
  j["schema"] = 1;
  ordered_json entries = ordered_json::array();
  for (const auto& e : r.entries)
    entries.push_back(ordered_json{{"file", e.file}, {"report", to_json(e.report)}});
  j["entries"] = entries;
  j["errors"] = r.errors;
  j["contradictions"] = r.contradictions;
  return j;
}

// ---------------------------------------------------------------------------
// Quotient cache
//
// File layout: {"schema": 1, "entries": {"<presentation hash>": {
//   "max_degree", "max_order", "budget_exhausted",
//   "quotients": [{"degree", "perms"}, ...]}}}
// An entry is reusable when its bounds dominate the request and its
// enumeration completed; the stored list is then filtered down to the
// requested bounds.  Saving keeps whichever entry has the wider bounds.

inline std::optional<EnumerationResult> load_cached_quotients(const std::filesystem::path& path,
                                                              const Presentation& pres,
                                                              const EnumerationOptions& want) {
  std::ifstream in(path);
  if (!in) return std::nullopt;
  ordered_json doc;
  try {
    doc = ordered_json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("quotient cache: ") + e.what());
  }
  if (!doc.is_object() || doc.value("schema", 0) != 1) return std::nullopt;
  const std::string key = std::to_string(presentation_hash(pres));
  auto entries = doc.find("entries");
  if (entries == doc.end() || !entries->is_object()) return std::nullopt;
  auto it = entries->find(key);
  if (it == entries->end()) return std::nullopt;
  const auto& e = *it;
  if (e.value("budget_exhausted", true)) return std::nullopt;
  if (e.value("max_degree", 0) < want.max_degree) return std::nullopt;
  if (e.value("max_order", 0LL) < want.max_order) return std::nullopt;

  EnumerationResult res;
  res.budget_exhausted = false;
  for (const auto& qj : e.at("quotients")) {
    int deg = qj.at("degree").get<int>();
    if (deg > want.max_degree) continue;
    auto perms = detail::perms_zero_based(qj.at("perms").get<std::vector<std::vector<int>>>());
    auto q = quotient_from_perms(pres, perms, want.max_order);
    if (q) res.quotients.push_back(std::move(*q));
  }
  return res;
}

inline void save_cached_quotients(const std::filesystem::path& path, const Presentation& pres,
                                  const EnumerationOptions& used, const EnumerationResult& res) {
  ordered_json doc;
  {
    std::ifstream in(path);
    if (in) {
      try {
        doc = ordered_json::parse(in);
      } catch (const nlohmann::json::exception&) {
        doc = ordered_json();  // unreadable cache gets rebuilt
      }
    }
  }
  if (!doc.is_object() || doc.value("schema", 0) != 1)
    doc = ordered_json{{"schema", 1}, {"entries", ordered_json::object()}};
  if (!doc.contains("entries") || !doc["entries"].is_object())
    doc["entries"] = ordered_json::object();

  const std::string key = std::to_string(presentation_hash(pres));
  auto& entries = doc["entries"];
  if (auto it = entries.find(key); it != entries.end()) {
    bool stored_wider = !it->value("budget_exhausted", true) &&
                        it->value("max_degree", 0) >= used.max_degree &&
                        it->value("max_order", 0LL) >= used.max_order;
    bool ours_wider = !res.budget_exhausted && used.max_degree >= it->value("max_degree", 0) &&
                      used.max_order >= it->value("max_order", 0LL);
    if (stored_wider || !ours_wider) return;  // keep the better entry
  }

  ordered_json quotients = ordered_json::array();
  for (const auto& q : res.quotients)
    quotients.push_back(ordered_json{{"degree", q.degree},
                                     {"perms", detail::perms_one_based(q.generator_perms)}});
  entries[key] = ordered_json{{"max_degree", used.max_degree},
                              {"max_order", used.max_order},
                              {"budget_exhausted", res.budget_exhausted},
                              {"quotients", quotients}};

  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write quotient cache: " + path.string());
  out << doc.dump(2) << '\n';
}

}  // namespace fibercheck
