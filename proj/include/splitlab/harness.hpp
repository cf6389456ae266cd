#pragma once

// Experiment runner behind the command-line tool.
//
// An experiment is a grid of cells (algorithm, K, alpha, seed, reference). Each
// cell is independent and may run on a worker thread; rows are written back by
// cell index, so the report order never depends on scheduling.

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <exception>
#include <optional>
#include <ostream>
#include <string>
#include <thread>
#include <vector>

#include "splitlab/certificates.hpp"
#include "splitlab/errors.hpp"
#include "splitlab/io.hpp"
#include "splitlab/random_instances.hpp"
#include "splitlab/solvers.hpp"
#include "splitlab/worstcase.hpp"

namespace splitlab {

enum class Mode { Run, Certify, Worstcase, Sweep };
enum class OutputFormat { Csv, Json };

inline std::string_view to_string(Mode m) {
  switch (m) {
    case Mode::Run: return "run";
    case Mode::Certify: return "certify";
    case Mode::Worstcase: return "worstcase";
    case Mode::Sweep: return "sweep";
  }
  return "?";
}

inline Mode parse_mode(std::string_view tag) {
  for (Mode m : {Mode::Run, Mode::Certify, Mode::Worstcase, Mode::Sweep})
    if (to_string(m) == tag) return m;
  throw ConfigError("unknown mode '" + std::string(tag) + "'");
}

inline OutputFormat parse_format(std::string_view tag) {
  if (tag == "csv") return OutputFormat::Csv;
  if (tag == "json") return OutputFormat::Json;
  throw ConfigError("unknown output format '" + std::string(tag) + "'");
}

struct RandomSource {
  Family family = Family::QuadraticL1;
  std::size_t count = 1;
  std::size_t dim = 3;
};

struct UserReference {
  DenseVector x;
  DenseVector u;
};

/// Default per-row tolerances.
inline constexpr double kResidualTol = 1e-8;  // relative to 1 + |gap|
inline constexpr double kSignTolI = 1e-10;
inline constexpr double kSignTolS = 1e-12;
inline constexpr double kBoundTol = 1e-10;

struct ExperimentSpec {
  Mode mode = Mode::Run;
  std::vector<Algorithm> algorithms;      // empty: every algorithm applicable to the instance
  std::optional<ProblemInstance> problem;  // inline problem document
  std::optional<RandomSource> random;      // seeded generator, seeds seed .. seed+count-1
  std::vector<std::size_t> Ks;            // empty: mode default
  std::vector<double> alphas{1.0};        // bundle step sizes (worstcase, sweep)
  std::size_t dim = 1;                    // bundle dimension
  std::size_t unit_index = 1;             // bundle unit vector, 1-based
  std::vector<UserReference> references;  // empty: defaults
  std::uint64_t seed = 0;
  unsigned jobs = 1;
  std::optional<double> tol;  // overrides kResidualTol
  OutputFormat format = OutputFormat::Csv;
};

struct RateRecord {
  Algorithm algorithm{};
  std::size_t K = 0;
  double alpha = 0.0;
  double gap = 0.0;
  double bound = 0.0;
  double ratio = 0.0;
  double residual = 0.0;
  bool sign_pass = false;
  double wall_ms = 0.0;

  // JSON-only detail.
  std::string source;     // "problem", "random:<family>", "bundle:<kind>"
  std::uint64_t seed = 0;
  std::string reference;  // "origin", "near_saddle", "user[i]"
  double envelope_k = 0.0;          // distance^2 / (alpha K)
  double envelope_k_plus_1 = 0.0;   // distance^2 / (alpha (K+1))
  std::optional<double> expected_gap;
  std::optional<DecompositionReport> report;
  std::optional<BundleVerification> verification;
  std::optional<Json> trace_summary;
  std::string error;
  bool pass = false;
};

struct ExperimentReport {
  Mode mode{};
  std::vector<RateRecord> rows;

  bool all_pass() const {
    return std::all_of(rows.begin(), rows.end(), [](const RateRecord& r) { return r.pass; });
  }
};

// ---------------------------------------------------------------------------
// Argument lists

/// "5", "1..20" (inclusive) or "1,2,5,10".
inline std::vector<std::size_t> parse_k_list(const std::string& text) {
  auto parse_one = [&](const std::string& s) -> std::size_t {
    std::size_t pos = 0;
    long long v = 0;
    try {
      v = std::stoll(s, &pos);
    } catch (const std::exception&) {
      throw ConfigError("bad K value '" + s + "'");
    }
    if (pos != s.size() || v < 1) throw ConfigError("K must be a positive integer (got '" + s + "')");
    return static_cast<std::size_t>(v);
  };
  std::vector<std::size_t> out;
  if (auto dots = text.find(".."); dots != std::string::npos) {
    const std::size_t lo = parse_one(text.substr(0, dots)), hi = parse_one(text.substr(dots + 2));
    if (lo > hi) throw ConfigError("empty K range '" + text + "'");
    for (std::size_t k = lo; k <= hi; ++k) out.push_back(k);
    return out;
  }
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t comma = text.find(',', start);
    out.push_back(parse_one(text.substr(start, comma - start)));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

inline std::vector<double> parse_alpha_list(const std::string& text) {
  std::vector<double> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t comma = text.find(',', start);
    const std::string s = text.substr(start, comma - start);
    std::size_t pos = 0;
    double v = 0.0;
    try {
      v = std::stod(s, &pos);
    } catch (const std::exception&) {
      throw ConfigError("bad alpha value '" + s + "'");
    }
    if (pos != s.size() || !(v > 0.0) || !std::isfinite(v))
      throw ConfigError("alpha must be a finite positive number (got '" + s + "')");
    out.push_back(v);
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

/// Comma-separated algorithm tags, or "all".
inline std::vector<Algorithm> parse_algorithm_list(const std::string& text) {
  if (text == "all") return {std::begin(kAllAlgorithms), std::end(kAllAlgorithms)};
  std::vector<Algorithm> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t comma = text.find(',', start);
    out.push_back(parse_algorithm(text.substr(start, comma - start)));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

/// Reads an experiment document. A document with a top-level "f" is taken to
/// be a bare problem. Recognised keys: problem, random {family, count, dim},
/// algorithms, K, alpha, seed, dim, unit_index, references [{x, u}], jobs, tol.
inline ExperimentSpec parse_experiment_spec(const Json& doc, Mode mode) {
  if (!doc.is_object()) throw ParseError("$", "expected a JSON object");
  ExperimentSpec spec;
  spec.mode = mode;

  if (auto it = doc.find("algorithms"); it != doc.end()) {
    if (it->is_string()) {
      spec.algorithms = parse_algorithm_list(it->get<std::string>());
    } else if (it->is_array()) {
      for (std::size_t i = 0; i < it->size(); ++i) {
        if (!(*it)[i].is_string()) throw ParseError("$.algorithms[" + std::to_string(i) + "]", "expected a string");
        spec.algorithms.push_back(parse_algorithm((*it)[i].get<std::string>()));
      }
    } else {
      throw ParseError("$.algorithms", "expected a string or an array of strings");
    }
  }
  if (auto it = doc.find("K"); it != doc.end()) {
    if (it->is_string()) {
      spec.Ks = parse_k_list(it->get<std::string>());
    } else {
      for (double k : detail::parse_real_list(*it, "$.K")) {
        if (k < 1 || k != std::floor(k)) throw ParseError("$.K", "K must be a positive integer");
        spec.Ks.push_back(static_cast<std::size_t>(k));
      }
    }
  }
  if (auto it = doc.find("alpha"); it != doc.end() && !doc.contains("f")) {
    spec.alphas = detail::parse_real_list(*it, "$.alpha");
    for (double a : spec.alphas)
      if (!(a > 0.0) || !std::isfinite(a)) throw ConfigError("alpha must be a finite positive number");
  }
  auto read_count = [&](const char* key, std::size_t& dst) {
    if (auto it = doc.find(key); it != doc.end()) {
      if (!it->is_number_unsigned() || it->get<std::uint64_t>() == 0)
        throw ParseError(std::string("$.") + key, "expected a positive integer");
      dst = it->get<std::size_t>();
    }
  };
  read_count("dim", spec.dim);
  read_count("unit_index", spec.unit_index);
  if (auto it = doc.find("seed"); it != doc.end()) {
    if (!it->is_number_unsigned()) throw ParseError("$.seed", "expected an unsigned integer");
    spec.seed = it->get<std::uint64_t>();
  }
  if (auto it = doc.find("jobs"); it != doc.end()) {
    if (!it->is_number_unsigned()) throw ParseError("$.jobs", "expected an unsigned integer");
    spec.jobs = std::max(1u, it->get<unsigned>());
  }
  if (auto it = doc.find("tol"); it != doc.end()) spec.tol = detail::parse_real(*it, "$.tol");

  if (doc.contains("f")) {
    spec.problem = parse_problem_spec(doc, spec.algorithms);
  } else if (auto it = doc.find("problem"); it != doc.end()) {
    try {
      spec.problem = parse_problem_spec(*it, spec.algorithms);
    } catch (const ParseError& e) {
      throw ParseError("$.problem" + e.path().substr(1), std::string(e.what()).substr(e.path().size() + 2));
    }
  }
  if (auto it = doc.find("random"); it != doc.end()) {
    RandomSource src;
    const Json& family = detail::require_field(*it, "family", "$.random");
    if (!family.is_string()) throw ParseError("$.random.family", "expected a string");
    src.family = parse_family(family.get<std::string>());
    if (auto c = it->find("count"); c != it->end()) {
      if (!c->is_number_unsigned() || c->get<std::uint64_t>() == 0)
        throw ParseError("$.random.count", "expected a positive integer");
      src.count = c->get<std::size_t>();
    }
    if (auto d = it->find("dim"); d != it->end()) {
      if (!d->is_number_unsigned() || d->get<std::uint64_t>() == 0)
        throw ParseError("$.random.dim", "expected a positive integer");
      src.dim = d->get<std::size_t>();
    }
    spec.random = src;
  }
  if (auto it = doc.find("references"); it != doc.end()) {
    if (!it->is_array()) throw ParseError("$.references", "expected an array");
    for (std::size_t i = 0; i < it->size(); ++i) {
      const std::string path = "$.references[" + std::to_string(i) + "]";
      const Json& r = (*it)[i];
      spec.references.push_back({detail::parse_vector(detail::require_field(r, "x", path), path + ".x"),
                                 detail::parse_vector(detail::require_field(r, "u", path), path + ".u")});
    }
  }
  if (spec.problem && spec.random) throw ConfigError("give either a problem or a random source, not both");
  return spec;
}

// ---------------------------------------------------------------------------
// Execution

/// Runs body(i) for i in [0, n) on up to `jobs` threads.
template <typename Body>
void parallel_for(std::size_t n, unsigned jobs, Body body) {
  const unsigned workers = static_cast<unsigned>(std::min<std::size_t>(std::max(1u, jobs), n));
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w)
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) body(i);
    });
  for (auto& t : pool) t.join();
}

namespace detail {

struct PreparedInstance {
  ProblemInstance instance;
  std::string source;
  std::uint64_t seed = 0;
  std::vector<std::pair<std::string, ReferencePoint>> references;
  std::string reference_error;  // set when no admissible reference exists
};

struct Cell {
  Algorithm algorithm{};
  std::size_t K = 0;
  double alpha = 0.0;
  std::size_t instance = 0;   // index into prepared instances (run, certify)
  std::size_t reference = 0;  // index into that instance's references
};

inline std::vector<std::pair<std::string, ReferencePoint>> default_references(const ProblemInstance& inst,
                                                                             const ExperimentSpec& spec,
                                                                             bool near_saddle,
                                                                             std::string& error) {
  std::vector<std::pair<std::string, ReferencePoint>> refs;
  try {
    if (!spec.references.empty()) {
      for (std::size_t i = 0; i < spec.references.size(); ++i)
        refs.emplace_back("user[" + std::to_string(i) + "]",
                          make_reference(inst, spec.references[i].x, spec.references[i].u));
      return refs;
    }
    try {
      refs.emplace_back("origin", origin_reference(inst));
    } catch (const DomainError&) {
      // the origin may lie outside dom f x dom g*; fall through to the next default
    }
    if (near_saddle) refs.emplace_back("near_saddle", near_saddle_reference(inst));
    if (refs.empty()) error = "no admissible default reference; pass one explicitly";
  } catch (const std::exception& e) {
    error = e.what();
    refs.clear();
  }
  return refs;
}

inline std::vector<Algorithm> applicable_algorithms(const ExperimentSpec& spec, bool has_h) {
  if (!spec.algorithms.empty()) return spec.algorithms;
  if (spec.mode == Mode::Sweep) return {Algorithm::DysGf, Algorithm::DysFg};
  if (has_h) return {Algorithm::DysGf, Algorithm::DysFg};
  return {std::begin(kAllAlgorithms), std::end(kAllAlgorithms)};
}

inline std::vector<std::size_t> ks_or_default(const ExperimentSpec& spec) {
  if (!spec.Ks.empty()) return spec.Ks;
  if (spec.mode == Mode::Worstcase || spec.mode == Mode::Sweep) return parse_k_list("1..20");
  return {10};
}

inline double elapsed_ms(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
}

/// Fills the certificate columns and the pass flag.
inline void certify_row(RateRecord& row, const SolverTrace& trace, const ReferencePoint& ref, double res_tol) {
  const DecompositionReport r = decompose(trace, ref);
  row.gap = r.gap;
  row.bound = r.bound;
  row.residual = r.residual;
  row.ratio = r.bound > 0.0 ? r.gap / r.bound : (r.gap <= 0.0 ? 0.0 : INFINITY);
  row.sign_pass = sign_report(r, kSignTolI, kSignTolS).pass;
  const double K = static_cast<double>(row.K);
  row.envelope_k = r.distance_sq / (row.alpha * K);
  row.envelope_k_plus_1 = r.distance_sq / (row.alpha * (K + 1.0));
  row.report = r;
  row.pass = row.residual <= res_tol * (1.0 + std::abs(row.gap)) && row.sign_pass &&
             row.gap <= row.bound + kBoundTol * std::max(1.0, row.bound);
}

inline Json trace_summary(const SolverTrace& t) {
  return {{"x_final", to_json(t.records.back().x)},
          {"u_final", to_json(t.records.back().u)},
          {"ergodic_x", to_json(t.ergodic_x)},
          {"ergodic_u", to_json(t.ergodic_u)}};
}

inline ExperimentReport run_instance_grid(const ExperimentSpec& spec) {
  // Instances: the inline problem, or one per seed.
  std::vector<PreparedInstance> prepared;
  if (spec.problem) {
    prepared.push_back({*spec.problem, "problem", spec.seed, {}, {}});
  } else if (spec.random) {
    prepared.resize(spec.random->count);
    parallel_for(prepared.size(), spec.jobs, [&](std::size_t i) {
      const std::uint64_t seed = spec.seed + i;
      RandomInstance ri = random_instance(seed, {spec.random->family, spec.random->dim});
      prepared[i].instance = std::move(ri.instance);
      prepared[i].source = "random:" + std::string(to_string(spec.random->family));
      prepared[i].seed = seed;
    });
  } else {
    throw ConfigError(std::string(to_string(spec.mode)) + " mode needs a problem (--spec) or a random source");
  }
  const bool near_saddle = spec.mode == Mode::Certify && spec.random.has_value();
  parallel_for(prepared.size(), spec.jobs, [&](std::size_t i) {
    prepared[i].references = default_references(prepared[i].instance, spec, near_saddle, prepared[i].reference_error);
  });

  const bool has_h = !prepared.front().instance.h.is_zero();
  std::vector<Cell> cells;
  for (Algorithm a : applicable_algorithms(spec, has_h))
    for (std::size_t K : ks_or_default(spec))
      for (std::size_t i = 0; i < prepared.size(); ++i) {
        const std::size_t nref = spec.mode == Mode::Run ? 1 : std::max<std::size_t>(1, prepared[i].references.size());
        for (std::size_t r = 0; r < nref; ++r) cells.push_back({a, K, prepared[i].instance.alpha, i, r});
      }

  const double res_tol = spec.tol.value_or(kResidualTol);
  ExperimentReport report{spec.mode, std::vector<RateRecord>(cells.size())};
  parallel_for(cells.size(), spec.jobs, [&](std::size_t c) {
    const Cell& cell = cells[c];
    const PreparedInstance& p = prepared[cell.instance];
    RateRecord& row = report.rows[c];
    row.algorithm = cell.algorithm;
    row.K = cell.K;
    row.alpha = cell.alpha;
    row.source = p.source;
    row.seed = p.seed;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      if (p.references.empty()) throw DomainError(p.reference_error);
      const auto& [ref_name, ref] = p.references[cell.reference];
      row.reference = ref_name;
      const SolverTrace trace = run(cell.algorithm, p.instance, cell.K);
      certify_row(row, trace, ref, res_tol);
      if (spec.mode == Mode::Run) {
        row.trace_summary = trace_summary(trace);
        row.report.reset();
      }
    } catch (const std::exception& e) {
      row.error = e.what();
      row.pass = false;
    }
    row.wall_ms = elapsed_ms(t0);
  });
  return report;
}

inline ExperimentReport run_bundle_grid(const ExperimentSpec& spec) {
  if (spec.problem || spec.random)
    throw ConfigError(std::string(to_string(spec.mode)) + " mode uses built-in instances; drop the problem source");
  const std::vector<Algorithm> algos = applicable_algorithms(spec, false);
  std::vector<Cell> cells;
  for (Algorithm a : algos)
    for (std::size_t K : ks_or_default(spec))
      for (double alpha : spec.alphas) cells.push_back({a, K, alpha, 0, 0});

  const double res_tol = spec.tol.value_or(kResidualTol);
  ExperimentReport report{spec.mode, std::vector<RateRecord>(cells.size())};
  parallel_for(cells.size(), spec.jobs, [&](std::size_t c) {
    const Cell& cell = cells[c];
    RateRecord& row = report.rows[c];
    row.algorithm = cell.algorithm;
    row.K = cell.K;
    row.alpha = cell.alpha;
    row.seed = spec.seed;
    row.reference = "origin";
    const auto t0 = std::chrono::steady_clock::now();
    try {
      // The sweep runs both DYS variants on the DYS-gf bad case so that their
      // envelopes can be compared on one instance.
      const Algorithm family =
          spec.mode == Mode::Sweep && is_dys(cell.algorithm) ? Algorithm::DysGf : cell.algorithm;
      const WorstCaseBundle b = make_bundle(family, cell.K, cell.alpha, spec.dim, spec.unit_index);
      row.source = "bundle:" + std::string(to_string(b.algorithm)) + ":" + std::string(to_string(b.kind));
      const SolverTrace trace = run(cell.algorithm, b.instance, cell.K);
      certify_row(row, trace, b.reference, res_tol);
      if (b.algorithm == cell.algorithm) {
        row.expected_gap = b.expected_gap;
        row.verification = verify_bundle(b, trace);
        row.pass = row.pass && row.verification->pass;
      }
    } catch (const std::exception& e) {
      row.error = e.what();
      row.pass = false;
    }
    row.wall_ms = elapsed_ms(t0);
  });
  return report;
}

}  // namespace detail

/// Runs every cell of the experiment. Per-cell failures land in the row's
/// `error` field; only a malformed spec throws.
inline ExperimentReport run_experiment(const ExperimentSpec& spec) {
  if (spec.mode == Mode::Worstcase || (spec.mode == Mode::Sweep && !spec.problem && !spec.random))
    return detail::run_bundle_grid(spec);
  return detail::run_instance_grid(spec);
}

// ---------------------------------------------------------------------------
// Rendering

inline std::string render_csv(const ExperimentReport& report) {
  std::vector<CsvRow> rows;
  rows.reserve(report.rows.size());
  for (const auto& r : report.rows)
    rows.push_back({std::string(to_string(r.algorithm)), r.K, r.alpha, r.gap, r.bound, r.ratio, r.residual,
                    r.sign_pass, r.wall_ms});
  return format_csv(rows);
}

inline Json row_to_json(const RateRecord& r) {
  // Non-finite values are not representable in JSON; they become null.
  Json j = {{"algorithm", std::string(to_string(r.algorithm))},
            {"K", r.K},
            {"alpha", r.alpha},
            {"gap", r.gap},
            {"bound", r.bound},
            {"ratio", r.ratio},
            {"residual", r.residual},
            {"sign_pass", r.sign_pass},
            {"wall_ms", r.wall_ms},
            {"source", r.source},
            {"seed", r.seed},
            {"reference", r.reference},
            {"envelope_1_over_alpha_K", r.envelope_k},
            {"envelope_1_over_alpha_K_plus_1", r.envelope_k_plus_1},
            {"pass", r.pass}};
  if (r.expected_gap) j["expected_gap"] = *r.expected_gap;
  if (r.report) {
    const auto& d = *r.report;
    j["terms"] = {{"lhs", d.lhs},   {"i_f", d.i_f}, {"i_g", d.i_g}, {"i_h", d.i_h},
                  {"s_1", d.s_1},   {"s_2", d.s_2}, {"s_h", d.s_h}, {"distance_sq", d.distance_sq}};
  }
  if (r.verification) {
    const auto& v = *r.verification;
    j["verification"] = {{"max_x_dev", v.max_x_dev}, {"max_u_dev", v.max_u_dev}, {"ergodic_dev", v.ergodic_dev},
                         {"gap_dev", v.gap_dev},     {"pass", v.pass}};
  }
  if (r.trace_summary) j["trace"] = *r.trace_summary;
  if (!r.error.empty()) j["error"] = r.error;
  return j;
}

inline std::string render_json(const ExperimentReport& report) {
  Json rows = Json::array();
  for (const auto& r : report.rows) rows.push_back(row_to_json(r));
  Json doc = {{"mode", std::string(to_string(report.mode))}, {"all_pass", report.all_pass()}, {"rows", rows}};
  return doc.dump(2) + "\n";
}

inline std::string render(const ExperimentReport& report, OutputFormat format) {
  return format == OutputFormat::Csv ? render_csv(report) : render_json(report);
}

/// Runs the experiment, writes the report and returns the process exit status
/// (0 iff every row passes).
inline int run_command(const ExperimentSpec& spec, std::ostream& out) {
  const ExperimentReport report = run_experiment(spec);
  out << render(report, spec.format);
  return report.all_pass() ? 0 : 1;
}

}  // namespace splitlab
