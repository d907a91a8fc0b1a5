// p0: fit and test degree heterogeneity in directed networks.
//
// Subcommands: fit, test, wald, simulate, qq, analyze. Data goes to stdout
// (or --output); diagnostics go to stderr. Exit codes: 0 success, 2 input or
// parse failure, 3 degenerate degrees, 4 non-convergence, 5 invalid
// null/reference combination, 1 anything else.

#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "p0/errors.hpp"
#include "p0/serialize.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitOther = 1;
constexpr int kExitInput = 2;
constexpr int kExitDegenerate = 3;
constexpr int kExitNonConvergence = 4;
constexpr int kExitInvalidReference = 5;

struct IoOptions {
  std::string input;
  std::string output;
  std::string format = "json";
};

struct IngestOptions {
  bool weighted = false;
  double threshold = 1.0;
};

struct SolverOptions {
  double eps = 1e-8;
  int max_iter = 5000;
};

struct NullOptions {
  std::string null_kind = "homogeneous";
  std::string side = "alpha";
  std::string indices;  // comma-separated, 1-based
  int top_r = 0;
  std::string values;   // comma-separated reals (specified nulls)
};

struct TestOptions {
  std::string test = "lrt";
  std::string ref = "auto";
  int r_switch = 30;
};

std::vector<double> parse_doubles(const std::string& csv, const std::string& what) {
  std::vector<double> out;
  std::stringstream ss(csv);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    if (tok.empty()) continue;
    try {
      std::size_t pos = 0;
      out.push_back(std::stod(tok, &pos));
      if (pos != tok.size()) throw std::invalid_argument(tok);
    } catch (const std::exception&) {
      throw CLI::ValidationError(what + ": '" + tok + "' is not a number");
    }
  }
  return out;
}

std::vector<int> parse_indices(const std::string& csv) {
  std::vector<int> out;
  for (double v : parse_doubles(csv, "--indices")) {
    const int i = static_cast<int>(v);
    if (i != v || i < 1) throw CLI::ValidationError("--indices must be positive integers");
    out.push_back(i - 1);  // CLI is 1-based, the library 0-based
  }
  return out;
}

p0::DirectedGraph load_graph(const IoOptions& io, const IngestOptions& ingest) {
  std::ifstream in(io.input);
  if (!in) throw p0::ParseError("cannot open input file '" + io.input + "'", 0);
  p0::EdgeListOptions opts;
  opts.weighted = ingest.weighted;
  opts.threshold = ingest.threshold;
  return p0::from_edge_list(in, opts);
}

void emit(const IoOptions& io, const std::string& text) {
  if (io.output.empty()) {
    std::cout << text;
    if (!text.empty() && text.back() != '\n') std::cout << '\n';
    return;
  }
  std::ofstream out(io.output);
  if (!out) throw std::runtime_error("cannot open output file '" + io.output + "'");
  out << text;
  if (!text.empty() && text.back() != '\n') out << '\n';
}

// Maps --indices/--top-r onto 0-based node indices. On the beta side the
// top-r window slides off node n, whose beta anchors the identification.
std::vector<int> resolve_indices(const NullOptions& null, p0::Side side, int n) {
  if (!null.indices.empty() && null.top_r > 0)
    throw CLI::ValidationError("give either --indices or --top-r, not both");
  if (!null.indices.empty()) return parse_indices(null.indices);
  if (null.top_r > 0) {
    const int r = null.top_r;
    if (r > n) throw CLI::ValidationError("--top-r exceeds the node count");
    std::vector<int> idx;
    if (side == p0::Side::Alpha) {
      for (int i = n - r; i < n; ++i) idx.push_back(i);
    } else {
      if (r > n - 1) throw CLI::ValidationError("--top-r on the beta side admits at most n-1 nodes");
      for (int i = n - r - 1; i < n - 1; ++i) idx.push_back(i);
    }
    return idx;
  }
  throw CLI::ValidationError("a null specification needs --indices or --top-r");
}

p0::Side parse_side(const std::string& s) {
  return s == "beta" ? p0::Side::Beta : p0::Side::Alpha;
}

p0::LrtReference parse_ref(const std::string& s) {
  if (s == "chisq") return p0::LrtReference::ChiSquareFixedR;
  if (s == "normal") return p0::LrtReference::NormalIncreasingR;
  return p0::LrtReference::Auto;
}

p0::NullHypothesis build_null(const NullOptions& null, int n) {
  const p0::Side side = parse_side(null.side);
  std::vector<int> idx = resolve_indices(null, side, n);
  if (null.null_kind == "specified") {
    std::vector<double> vals = parse_doubles(null.values, "--values");
    if (vals.size() == 1 && idx.size() > 1) vals.assign(idx.size(), vals[0]);
    return p0::NullHypothesis::specified(side, std::move(idx), std::move(vals));
  }
  return p0::NullHypothesis::homogeneous(side, std::move(idx));
}

int run_fit(const IoOptions& io, const IngestOptions& ingest, const SolverOptions& solver) {
  p0::DirectedGraph g = load_graph(io, ingest);
  p0::FitOptions opts;
  opts.eps = solver.eps;
  opts.max_iter = solver.max_iter;
  p0::FitResult fit = p0::fit_mle(g, opts);
  if (io.format == "csv") {
    std::ostringstream os;
    p0::write_csv(os, fit);
    emit(io, os.str());
  } else {
    emit(io, p0::to_json(fit));
  }
  return kExitOk;
}

int run_test(const IoOptions& io, const IngestOptions& ingest, const SolverOptions& solver,
             const NullOptions& null, const TestOptions& test) {
  p0::DirectedGraph g = load_graph(io, ingest);
  p0::FitOptions fit_opts;
  fit_opts.eps = solver.eps;
  fit_opts.max_iter = solver.max_iter;
  p0::NullHypothesis hyp = build_null(null, g.node_count());

  p0::TestResult result;
  if (test.test == "wald") {
    if (hyp.kind != p0::NullHypothesis::Kind::Homogeneous)
      throw p0::InvalidReferenceError("the Wald test applies to homogeneous nulls only");
    result = p0::wald(g, hyp.side, hyp.indices, fit_opts);
  } else {
    p0::LrtOptions lrt_opts;
    lrt_opts.fit = fit_opts;
    lrt_opts.r_switch = test.r_switch;
    result = p0::lrt(g, hyp, parse_ref(test.ref), lrt_opts);
  }

  if (io.format == "csv") {
    std::ostringstream os;
    p0::write_csv(os, result);
    emit(io, os.str());
  } else {
    emit(io, p0::to_json(result));
  }
  return kExitOk;
}

struct SimOptions {
  std::string scenario = "h01";
  int n = 100;
  int r = 0;  // 0: scenario default (h02: n/2, h03: 10, power: 5)
  double L = 0.0;
  std::string Lmode = "const";
  double c = 0.0;
  int reps = 1000;
  std::uint64_t seed = 1;
  int workers = 1;
  std::string levels = "0.05,0.1";
};

int run_simulate(const IoOptions& io, const SolverOptions& solver, const TestOptions& test,
                 const SimOptions& sim) {
  const double L = sim.Lmode == "logn" ? sim.L * std::log(static_cast<double>(sim.n)) : sim.L;
  p0::Scenario scenario;
  if (sim.scenario == "h01") {
    scenario = p0::scenario_h01(sim.n, L);
  } else if (sim.scenario == "h02") {
    scenario = p0::scenario_h02_h03(sim.n, sim.r > 0 ? sim.r : sim.n / 2, L);
  } else if (sim.scenario == "h03") {
    scenario = p0::scenario_h02_h03(sim.n, sim.r > 0 ? sim.r : 10, L);
  } else if (sim.scenario == "power") {
    scenario = p0::scenario_power(sim.n, sim.r > 0 ? sim.r : 5, sim.c);
  } else {
    throw CLI::ValidationError("unknown scenario '" + sim.scenario + "'");
  }

  p0::TestSpec spec;
  spec.type = test.test == "wald" ? p0::TestSpec::Type::Wald : p0::TestSpec::Type::Lrt;
  spec.ref = parse_ref(test.ref);
  spec.r_switch = test.r_switch;

  p0::FitOptions fit_opts;
  fit_opts.eps = solver.eps;
  fit_opts.max_iter = solver.max_iter;

  std::vector<double> levels = parse_doubles(sim.levels, "--levels");
  if (levels.empty()) levels = {0.05, 0.10};

  p0::SimulationReport report =
      p0::monte_carlo(scenario, spec, sim.reps, sim.seed, sim.workers, levels, fit_opts);
  std::cerr << "simulate: scenario=" << scenario.label << " seed=" << sim.seed
            << " n_failed=" << report.n_failed << '\n';

  if (io.format == "csv") {
    std::ostringstream os;
    p0::write_csv(os, report);
    emit(io, os.str());
  } else {
    emit(io, p0::to_json(report));
  }
  return kExitOk;
}

int run_qq(const IoOptions& io, const std::string& ref_override) {
  std::ifstream in(io.input);
  if (!in) throw p0::ParseError("cannot open input file '" + io.input + "'", 0);
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw p0::ParseError(std::string("input is not a simulation report: ") + e.what(), 0);
  }
  if (!doc.contains("statistics") || !doc["statistics"].is_array())
    throw p0::ParseError("input is not a simulation report: missing statistics", 0);
  std::vector<double> stats = doc["statistics"].get<std::vector<double>>();

  p0::ReferenceDistribution ref = p0::ReferenceDistribution::none();
  if (ref_override == "normal") {
    ref = p0::ReferenceDistribution::std_normal();
  } else if (ref_override == "chisq") {
    if (!doc.contains("reference") || !doc["reference"].contains("df"))
      throw p0::ParseError("chisq reference needs a df in the report", 0);
    ref = p0::ReferenceDistribution::chi_square(doc["reference"]["df"].get<int>());
  } else if (doc.contains("reference")) {
    const auto& r = doc["reference"];
    const std::string type = r.value("type", "none");
    if (type == "chisq")
      ref = p0::ReferenceDistribution::chi_square(r.value("df", 1));
    else if (type == "normal")
      ref = p0::ReferenceDistribution::std_normal();
  }
  if (ref.type == p0::ReferenceDistribution::Type::None)
    throw p0::InvalidReferenceError("the report carries no usable reference; pass --ref");

  auto qq = p0::qq_data(std::move(stats), ref);
  if (io.format == "json") {
    emit(io, p0::qq_to_json(qq, ref));
  } else {
    std::ostringstream os;
    p0::write_qq_csv(os, qq);
    emit(io, os.str());
  }
  return kExitOk;
}

int run_analyze(const IoOptions& io, const IngestOptions& ingest, const SolverOptions& solver,
                int top_r, const TestOptions& test) {
  p0::DirectedGraph g = load_graph(io, ingest);
  const int n = g.node_count();
  p0::FitOptions fit_opts;
  fit_opts.eps = solver.eps;
  fit_opts.max_iter = solver.max_iter;
  p0::LrtOptions lrt_opts;
  lrt_opts.fit = fit_opts;
  lrt_opts.r_switch = test.r_switch;

  std::string out = "{";
  out += "\"input\":\"" + io.input + "\"";
  out += ",\"n\":" + std::to_string(n);
  out += ",\"edges\":" + std::to_string(g.edge_count());
  {
    std::ostringstream ds;
    ds << g.density();
    out += ",\"density\":" + ds.str();
  }
  out += ",\"top_r\":" + std::to_string(top_r);

  for (p0::Side side : {p0::Side::Alpha, p0::Side::Beta}) {
    NullOptions null;
    null.top_r = top_r;
    null.side = side == p0::Side::Alpha ? "alpha" : "beta";
    std::vector<int> idx = resolve_indices(null, side, n);
    p0::NullHypothesis hyp = p0::NullHypothesis::homogeneous(side, idx);
    p0::TestResult lrt_result = p0::lrt(g, hyp, parse_ref(test.ref), lrt_opts);
    p0::TestResult wald_result = p0::wald(g, side, idx, fit_opts);
    out += std::string(",\"") + (side == p0::Side::Alpha ? "alpha" : "beta") + "\":{";
    out += "\"lrt\":" + p0::to_json(lrt_result);
    out += ",\"wald\":" + p0::to_json(wald_result);
    out += "}";
  }
  out += "}";
  emit(io, out);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"p0: degree-heterogeneity fitting and testing for directed networks"};
  app.require_subcommand(1);

  IoOptions io;
  IngestOptions ingest;
  SolverOptions solver;
  NullOptions null;
  TestOptions test;
  SimOptions sim;
  int top_r = 10;
  std::string qq_ref;

  auto add_io = [&](CLI::App* cmd, bool needs_input) {
    if (needs_input) cmd->add_option("--input", io.input, "edge-list or report file")->required();
    cmd->add_option("--output", io.output, "write here instead of stdout");
    cmd->add_option("--format", io.format, "json or csv")
        ->check(CLI::IsMember({"json", "csv"}));
  };
  auto add_ingest = [&](CLI::App* cmd) {
    cmd->add_flag("--weighted", ingest.weighted, "third column is a weight");
    cmd->add_option("--threshold", ingest.threshold, "weighted edges need weight >= threshold (default 1)");
  };
  auto add_solver = [&](CLI::App* cmd) {
    cmd->add_option("--eps", solver.eps, "fixed-point tolerance (default 1e-8)");
    cmd->add_option("--max-iter", solver.max_iter, "sweep limit (default 5000)");
  };
  auto add_null = [&](CLI::App* cmd) {
    cmd->add_option("--null", null.null_kind, "homogeneous or specified")
        ->check(CLI::IsMember({"homogeneous", "specified"}));
    cmd->add_option("--side", null.side, "alpha or beta")->check(CLI::IsMember({"alpha", "beta"}));
    cmd->add_option("--indices", null.indices, "comma-separated 1-based node indices");
    cmd->add_option("--top-r", null.top_r, "constrain the r largest node indices");
    cmd->add_option("--values", null.values, "pinned values for a specified null");
  };
  auto add_test = [&](CLI::App* cmd) {
    cmd->add_option("--test", test.test, "lrt or wald")->check(CLI::IsMember({"lrt", "wald"}));
    cmd->add_option("--ref", test.ref, "chisq, normal, or auto")
        ->check(CLI::IsMember({"chisq", "normal", "auto"}));
    cmd->add_option("--r-switch", test.r_switch, "Auto: chi-square up to this r (default 30)");
  };

  CLI::App* cmd_fit = app.add_subcommand("fit", "unrestricted MLE of an edge list");
  add_io(cmd_fit, true);
  add_ingest(cmd_fit);
  add_solver(cmd_fit);

  CLI::App* cmd_test = app.add_subcommand("test", "likelihood-ratio or Wald test of a null");
  add_io(cmd_test, true);
  add_ingest(cmd_test);
  add_solver(cmd_test);
  add_null(cmd_test);
  add_test(cmd_test);

  CLI::App* cmd_wald = app.add_subcommand("wald", "Wald test of a homogeneous null");
  add_io(cmd_wald, true);
  add_ingest(cmd_wald);
  add_solver(cmd_wald);
  add_null(cmd_wald);

  CLI::App* cmd_sim = app.add_subcommand("simulate", "Monte Carlo calibration of the tests");
  add_io(cmd_sim, false);
  add_solver(cmd_sim);
  add_test(cmd_sim);
  cmd_sim->add_option("--scenario", sim.scenario, "h01, h02, h03, or power")
      ->check(CLI::IsMember({"h01", "h02", "h03", "power"}));
  cmd_sim->add_option("--n", sim.n, "number of nodes");
  cmd_sim->add_option("--r", sim.r, "constrained set size (scenario default if omitted)");
  cmd_sim->add_option("--L", sim.L, "heterogeneity slope L");
  cmd_sim->add_option("--Lmode", sim.Lmode, "const: use L as is; logn: use L*log(n)")
      ->check(CLI::IsMember({"const", "logn"}));
  cmd_sim->add_option("--c", sim.c, "power-design effect size");
  cmd_sim->add_option("--reps", sim.reps, "number of replicates");
  cmd_sim->add_option("--seed", sim.seed, "master seed");
  cmd_sim->add_option("--workers", sim.workers, "worker threads (result is identical for any count)");
  cmd_sim->add_option("--levels", sim.levels, "comma-separated nominal levels");

  CLI::App* cmd_qq = app.add_subcommand("qq", "QQ data from a simulation report");
  cmd_qq->add_option("--input", io.input, "edge-list or report file")->required();
  cmd_qq->add_option("--output", io.output, "write here instead of stdout");
  std::string qq_format = "csv";
  cmd_qq->add_option("--format", qq_format, "csv or json")->check(CLI::IsMember({"json", "csv"}));
  cmd_qq->add_option("--ref", qq_ref, "override the report's reference (chisq or normal)")
      ->check(CLI::IsMember({"chisq", "normal"}));

  CLI::App* cmd_an = app.add_subcommand("analyze", "top-r heterogeneity tests on both sides");
  add_io(cmd_an, true);
  add_ingest(cmd_an);
  add_solver(cmd_an);
  cmd_an->add_option("--ref", test.ref, "chisq, normal, or auto")
      ->check(CLI::IsMember({"chisq", "normal", "auto"}));
  cmd_an->add_option("--r-switch", test.r_switch, "Auto: chi-square up to this r (default 30)");
  cmd_an->add_option("--top-r", top_r, "test the r largest node indices (default 10)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (cmd_fit->parsed()) return run_fit(io, ingest, solver);
    if (cmd_test->parsed()) return run_test(io, ingest, solver, null, test);
    if (cmd_wald->parsed()) {
      test.test = "wald";
      return run_test(io, ingest, solver, null, test);
    }
    if (cmd_sim->parsed()) return run_simulate(io, solver, test, sim);
    if (cmd_qq->parsed()) {
      io.format = qq_format;
      return run_qq(io, qq_ref);
    }
    if (cmd_an->parsed()) return run_analyze(io, ingest, solver, top_r, test);
  } catch (const p0::ParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInput;
  } catch (const p0::EmptyInputError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInput;
  } catch (const p0::DegenerateDegreeError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitDegenerate;
  } catch (const p0::NonConvergenceError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitNonConvergence;
  } catch (const p0::InvalidReferenceError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInvalidReference;
  } catch (const CLI::ValidationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitOther;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitOther;
  }
  return kExitOther;
}
