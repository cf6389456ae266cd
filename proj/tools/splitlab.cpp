// Command-line front end: run | certify | worstcase | sweep.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "splitlab/splitlab.hpp"

namespace {

struct Options {
  std::string spec_path;
  std::string algorithms;
  std::string ks;
  std::string alphas;
  std::optional<std::uint64_t> seed;
  std::string out;
  std::string format = "csv";
  std::optional<unsigned> jobs;
  std::optional<double> tol;
  std::optional<std::size_t> dim;
  std::optional<std::size_t> unit_index;
  std::string family;
  std::optional<std::size_t> count;
};

void add_common(CLI::App* cmd, Options& o) {
  cmd->add_option("--spec", o.spec_path, "JSON problem or experiment document")->check(CLI::ExistingFile);
  cmd->add_option("--algorithm", o.algorithms, "drs_gf,drs_fg,dys_gf,dys_fg or all");
  cmd->add_option("--K", o.ks, "horizon: 10, 1..20 or 1,2,5");
  cmd->add_option("--alpha", o.alphas, "step size(s) for built-in instances, e.g. 0.05,1,20");
  cmd->add_option("--seed", o.seed, "base seed for random instances");
  cmd->add_option("--out", o.out, "output file (default stdout)");
  cmd->add_option("--format", o.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  cmd->add_option("--jobs", o.jobs, "worker threads")->check(CLI::PositiveNumber);
  cmd->add_option("--tol", o.tol, "relative residual tolerance")->check(CLI::PositiveNumber);
  cmd->add_option("--dim", o.dim, "dimension of built-in or random instances")->check(CLI::PositiveNumber);
  cmd->add_option("--unit-index", o.unit_index, "1-based unit vector of built-in instances")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--family", o.family, "random instance family, e.g. quadratic+l1");
  cmd->add_option("--count", o.count, "number of random instances")->check(CLI::PositiveNumber);
}

splitlab::ExperimentSpec build_spec(splitlab::Mode mode, const Options& o) {
  using namespace splitlab;
  ExperimentSpec spec;
  if (!o.spec_path.empty()) {
    Json doc = load_json_file(o.spec_path);
    // Command-line algorithms take part in problem validation.
    if (!o.algorithms.empty()) {
      Json algos = Json::array();
      for (Algorithm a : parse_algorithm_list(o.algorithms)) algos.push_back(std::string(to_string(a)));
      doc["algorithms"] = algos;
    }
    spec = parse_experiment_spec(doc, mode);
  }
  spec.mode = mode;
  if (!o.algorithms.empty()) spec.algorithms = parse_algorithm_list(o.algorithms);
  if (!o.ks.empty()) spec.Ks = parse_k_list(o.ks);
  if (!o.alphas.empty()) spec.alphas = parse_alpha_list(o.alphas);
  if (o.seed) spec.seed = *o.seed;
  if (o.jobs) spec.jobs = *o.jobs;
  if (o.tol) spec.tol = *o.tol;
  if (o.unit_index) spec.unit_index = *o.unit_index;
  if (!o.family.empty()) {
    if (spec.problem) throw ConfigError("--family conflicts with the problem in --spec");
    RandomSource src = spec.random.value_or(RandomSource{});
    src.family = parse_family(o.family);
    spec.random = src;
  }
  if (o.count) {
    if (!spec.random) throw ConfigError("--count needs a random source (--family)");
    spec.random->count = *o.count;
  }
  if (o.dim) {
    spec.dim = *o.dim;
    if (spec.random) spec.random->dim = *o.dim;
  }
  spec.format = parse_format(o.format);
  return spec;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Douglas-Rachford and Davis-Yin splitting: runs, certificates and worst-case checks"};
  app.require_subcommand(1);
  Options opts;
  struct Sub {
    splitlab::Mode mode;
    const char* name;
    const char* help;
  };
  const Sub subs[] = {
      {splitlab::Mode::Run, "run", "run solvers and report gaps"},
      {splitlab::Mode::Certify, "certify", "evaluate the equality decompositions"},
      {splitlab::Mode::Worstcase, "worstcase", "check the closed-form worst-case instances"},
      {splitlab::Mode::Sweep, "sweep", "gap versus bound across a K range"},
  };
  for (const auto& s : subs) add_common(app.add_subcommand(s.name, s.help), opts);

  CLI11_PARSE(app, argc, argv);

  try {
    splitlab::Mode mode{};
    for (const auto& s : subs)
      if (app.got_subcommand(s.name)) mode = s.mode;
    const splitlab::ExperimentSpec spec = build_spec(mode, opts);
    if (opts.out.empty()) return splitlab::run_command(spec, std::cout);
    std::ofstream out(opts.out);
    if (!out) {
      std::cerr << "error: cannot write '" << opts.out << "'\n";
      return 2;
    }
    return splitlab::run_command(spec, out);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
}
