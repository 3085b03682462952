#pragma once

#include "conelab/constructions.hpp"
#include "conelab/io.hpp"
#include "conelab/properties.hpp"
#include "conelab/random.hpp"

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <map>
#include <ostream>
#include <string>
#include <thread>
#include <vector>

namespace conelab {

struct SuiteConfig {
  int dim_lo = 3;
  int dim_hi = 6;
  int trials_per_dim = 20;
  std::uint64_t seed = 42;
  double delta = 1e-2;
  std::vector<ConeKind> kinds{ConeKind::Ellipsoidal, ConeKind::Simplicial, ConeKind::PolyhedralMGon,
                              ConeKind::PerturbedEllipsoidal};
  double tol_sym = 1e-8;
  double tol_rank = 1e-7;
  double tol_fit = 1e-6;
  int css_sections = 200;
  int fbi_apexes = 8;
  int certify_pairs = 64;
  std::string output_path;
  unsigned threads = 0;  // 0: hardware concurrency
  bool timings = false;  // include wall-clock fields in the JSON (breaks byte-identical output)

  void validate() const {
    if (dim_lo < 2 || dim_hi > 16 || dim_lo > dim_hi) throw Error(ErrorCode::ConfigError, "dims must lie within [2, 16]");
    if (trials_per_dim < 1) throw Error(ErrorCode::ConfigError, "trials must be at least 1");
    if (kinds.empty()) throw Error(ErrorCode::ConfigError, "no cone kinds selected");
    if (css_sections < 1 || fbi_apexes < 1 || certify_pairs < 1) throw Error(ErrorCode::ConfigError, "sample counts must be positive");
    if (!(delta >= 0.0)) throw Error(ErrorCode::ConfigError, "delta must be nonnegative");
  }
};

/// CONELAB_SEED, when set to an unsigned integer, replaces the configured seed.
inline void apply_env_overrides(SuiteConfig& config) {
  if (const char* env = std::getenv("CONELAB_SEED")) {
    try {
      std::size_t used = 0;
      const unsigned long long v = std::stoull(env, &used);
      if (used != std::string(env).size()) throw std::invalid_argument(env);
      config.seed = v;
    } catch (const std::exception&) {
      throw Error(ErrorCode::ConfigError, std::string("CONELAB_SEED is not an unsigned integer: ") + env);
    }
  }
}

struct ConeOutcome {
  std::string id;
  ConeKind kind = ConeKind::Ellipsoidal;
  int dim = 0;
  std::uint64_t seed = 0;
  PropertyReport css;
  PropertyReport fbi;
  PropertyReport ellipsoidal;
};

struct SuiteResult {
  SuiteConfig config;
  std::vector<ConeOutcome> cones;  // sorted by id
  // kind -> property -> verdict -> count
  std::map<std::string, std::map<std::string, std::map<std::string, int>>> confusion;
  bool css_agreement = true;
  bool fbi_agreement = true;
  std::int64_t wall_ms = 0;
};

/// Base body used for certification: the u-section of an ellipsoidal cone,
/// or the section by a strictly positive functional.
inline ConvexBody cone_base(const ConeRep& C) {
  if (C.is_ellipsoidal()) {
    const Ellipsoid e = C.ellipsoidal().base();
    return make_ellipsoid(e.center, e.basis, e.form);
  }
  const std::optional<Vec> phi = bounded_section_functional(C);
  if (!phi) throw Error(ErrorCode::NoBoundedSection, "cone_base: cone is not pointed");
  const Section s = section_by_functional(C, *phi);
  if (!is_body(s)) throw Error(ErrorCode::NoBoundedSection, "cone_base: section is not bounded");
  return body_of(s);
}

namespace detail {

inline PropertyReport quarantined(const std::string& id, Property p, std::uint64_t seed, const std::string& why) {
  PropertyReport r;
  r.cone_id = id;
  r.property = p;
  r.seed = seed;
  r.verdict = Verdict::INCONCLUSIVE;
  r.witnesses.push_back({"error: " + why, Vec(), 0.0});
  return r;
}

inline ConeOutcome run_one(const SuiteConfig& config, ConeKind kind, int dim, int trial, std::uint64_t stream) {
  char trial_tag[16];
  std::snprintf(trial_tag, sizeof trial_tag, "%02d", trial);
  ConeOutcome out;
  out.kind = kind;
  out.dim = dim;
  out.id = std::string(to_string(kind)) + "-n" + std::to_string(dim) + "-t" + trial_tag;
  out.seed = substream_seed(config.seed, stream);
  const std::uint64_t s_css = substream_seed(out.seed, 1);
  const std::uint64_t s_fbi = substream_seed(out.seed, 2);
  const std::uint64_t s_ell = substream_seed(out.seed, 3);
  ConeRep C;
  try {
    C = generate_cone(kind, dim, out.seed, config.delta);
    C.id = out.id;
  } catch (const std::exception& e) {
    out.css = quarantined(out.id, Property::CSS, s_css, e.what());
    out.fbi = quarantined(out.id, Property::FBI, s_fbi, e.what());
    out.ellipsoidal = quarantined(out.id, Property::ELLIPSOIDAL, s_ell, e.what());
    return out;
  }
  try {
    out.css = check_css(C, config.css_sections, config.tol_sym, s_css).report;
  } catch (const std::exception& e) {
    out.css = quarantined(out.id, Property::CSS, s_css, e.what());
  }
  try {
    out.fbi = check_fbi(C, config.fbi_apexes, 0, config.tol_rank, s_fbi).report;
  } catch (const std::exception& e) {
    out.fbi = quarantined(out.id, Property::FBI, s_fbi, e.what());
  }
  try {
    out.ellipsoidal = certify_ellipsoid(cone_base(C), config.certify_pairs, config.tol_fit, s_ell, config.tol_sym);
    out.ellipsoidal.cone_id = out.id;
  } catch (const std::exception& e) {
    out.ellipsoidal = quarantined(out.id, Property::ELLIPSOIDAL, s_ell, e.what());
  }
  return out;
}

}  // namespace detail

/// Generates the configured cone population, runs the three checkers on each
/// cone, and records whether CSS and FBI verdicts agree with certification.
inline SuiteResult run_suite(const SuiteConfig& config) {
  config.validate();
  detail::Stopwatch clock;
  struct Job {
    ConeKind kind;
    int dim;
    int trial;
    std::uint64_t stream;
  };
  std::vector<Job> jobs;
  for (ConeKind kind : config.kinds)
    for (int dim = config.dim_lo; dim <= config.dim_hi; ++dim)
      for (int trial = 0; trial < config.trials_per_dim; ++trial)
        jobs.push_back({kind, dim, trial,
                        (static_cast<std::uint64_t>(kind) << 40) | (static_cast<std::uint64_t>(dim) << 20) |
                            static_cast<std::uint64_t>(trial)});

  SuiteResult result;
  result.config = config;
  result.cones.resize(jobs.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < jobs.size(); i = next++)
      result.cones[i] = detail::run_one(config, jobs[i].kind, jobs[i].dim, jobs[i].trial, jobs[i].stream);
  };
  unsigned threads = config.threads ? config.threads : std::max(1U, std::thread::hardware_concurrency());
  threads = std::min<unsigned>(threads, static_cast<unsigned>(jobs.size()));
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (std::thread& t : pool) t.join();

  std::sort(result.cones.begin(), result.cones.end(),
            [](const ConeOutcome& a, const ConeOutcome& b) { return a.id < b.id; });
  for (const ConeOutcome& c : result.cones) {
    auto& row = result.confusion[std::string(to_string(c.kind))];
    for (const PropertyReport* r : {&c.css, &c.fbi, &c.ellipsoidal})
      ++row[std::string(to_string(r->property))][std::string(to_string(r->verdict))];
    if (c.dim < 3) continue;
    const bool ell = c.ellipsoidal.verdict == Verdict::PASS;
    result.css_agreement = result.css_agreement && ((c.css.verdict == Verdict::PASS) == ell);
    result.fbi_agreement = result.fbi_agreement && ((c.fbi.verdict == Verdict::PASS) == ell);
  }
  result.wall_ms = clock.ms();
  return result;
}

inline Json to_json(const SuiteResult& r) {
  const SuiteConfig& c = r.config;
  Json kinds = Json::array();
  for (ConeKind k : c.kinds) kinds.push_back(std::string(to_string(k)));
  Json config = {{"dims", {c.dim_lo, c.dim_hi}},
                 {"trials_per_dim", c.trials_per_dim},
                 {"seed", c.seed},
                 {"delta", c.delta},
                 {"kinds", kinds},
                 {"tolerances", {{"tol_sym", c.tol_sym}, {"tol_rank", c.tol_rank}, {"tol_fit", c.tol_fit}}},
                 {"samples", {{"css_sections", c.css_sections}, {"fbi_apexes", c.fbi_apexes}, {"certify_pairs", c.certify_pairs}}}};
  Json cones = Json::array();
  for (const ConeOutcome& o : r.cones) {
    cones.push_back({{"id", o.id},
                     {"kind", std::string(to_string(o.kind))},
                     {"dim", o.dim},
                     {"seed", o.seed},
                     {"reports",
                      {{"CSS", to_json(o.css, c.timings, 16)},
                       {"FBI", to_json(o.fbi, c.timings, 16)},
                       {"ELLIPSOIDAL", to_json(o.ellipsoidal, c.timings, 16)}}}});
  }
  Json out = {{"config", config},
              {"cones", cones},
              {"confusion", r.confusion},
              {"agreement", {{"css_iff_ellipsoidal", r.css_agreement}, {"fbi_iff_ellipsoidal", r.fbi_agreement}}}};
  if (c.timings) out["wall_ms"] = r.wall_ms;
  return out;
}

/// Human-readable summary: verdict counts per kind and property, the two
/// agreement flags, and the first FAIL witness of each kind and property.
inline void print_summary(const SuiteResult& r, std::ostream& os) {
  char line[160];
  std::snprintf(line, sizeof line, "%-24s %-12s %6s %6s %13s\n", "kind", "property", "PASS", "FAIL", "INCONCLUSIVE");
  os << line;
  for (const auto& [kind, props] : r.confusion) {
    for (const auto& [prop, verdicts] : props) {
      auto count = [&](const char* v) {
        const auto it = verdicts.find(v);
        return it == verdicts.end() ? 0 : it->second;
      };
      std::snprintf(line, sizeof line, "%-24s %-12s %6d %6d %13d\n", kind.c_str(), prop.c_str(), count("PASS"),
                    count("FAIL"), count("INCONCLUSIVE"));
      os << line;
    }
  }
  os << "CSS <=> ELLIPSOIDAL agreement: " << (r.css_agreement ? "true" : "false") << '\n';
  os << "FBI <=> ELLIPSOIDAL agreement: " << (r.fbi_agreement ? "true" : "false") << '\n';
  std::map<std::string, bool> shown;
  for (const ConeOutcome& o : r.cones) {
    for (const PropertyReport* rep : {&o.css, &o.fbi, &o.ellipsoidal}) {
      if (rep->verdict != Verdict::FAIL || rep->witnesses.empty()) continue;
      const std::string key = std::string(to_string(o.kind)) + "/" + std::string(to_string(rep->property));
      if (shown[key]) continue;
      shown[key] = true;
      const Witness& w = rep->witnesses.front();
      os << "FAIL " << key << " " << o.id << " " << w.what << " value=" << w.value << " at [";
      for (Eigen::Index i = 0; i < w.point.size(); ++i) os << (i ? ", " : "") << w.point(i);
      os << "]\n";
    }
  }
}

}  // namespace conelab
