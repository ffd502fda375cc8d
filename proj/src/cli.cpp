#include "qfs/cli.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <optional>
#include <sstream>
#include <stdexcept>

#include "qfs/classical.hpp"
#include "qfs/dataset.hpp"
#include "qfs/hrqaoa.hpp"
#include "qfs/pcbo.hpp"
#include "qfs/resource.hpp"
#include "qfs/rng.hpp"
#include "qfs/sparsify.hpp"

namespace qfs {

namespace {

struct DataError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct ResourceError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string format_full(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::ofstream open_output(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot open output file: " + path);
  return out;
}

// ---- discretize ----------------------------------------------------------

struct DiscretizeOpts {
  std::string input;
  std::string label_column = "label";
  int levels = 5;
  std::string output;
  std::string binspec_out;
  std::string apply_spec;  // reuse previously saved edges instead of refitting
};

void cmd_discretize(const DiscretizeOpts& opt, std::ostream& log) {
  const RealTable table = load_real_table(opt.input);
  int label_idx = -1;
  for (std::size_t i = 0; i < table.column_names.size(); ++i)
    if (table.column_names[i] == opt.label_column) label_idx = static_cast<int>(i);
  if (label_idx < 0) throw DataError("label column '" + opt.label_column + "' not found");

  FeatureMatrix m;
  m.num_rows = table.num_rows;
  m.num_features = static_cast<int>(table.column_names.size()) - 1;
  if (m.num_features < 1) throw DataError("need at least one feature column");
  m.values.resize(static_cast<std::size_t>(m.num_rows) * m.num_features);

  std::vector<BinSpec> specs;
  std::vector<std::string> names;
  std::optional<std::pair<std::vector<std::string>, std::vector<BinSpec>>> loaded;
  if (!opt.apply_spec.empty()) {
    std::ifstream in(opt.apply_spec);
    if (!in) throw DataError("cannot open binspec sidecar: " + opt.apply_spec);
    loaded = load_binspecs(in);
  }

  int out_col = 0;
  for (std::size_t i = 0; i < table.column_names.size(); ++i) {
    if (static_cast<int>(i) == label_idx) continue;
    std::vector<int> levels;
    BinSpec spec;
    if (loaded) {
      const auto& [spec_names, spec_list] = *loaded;
      int found = -1;
      for (std::size_t j = 0; j < spec_names.size(); ++j)
        if (spec_names[j] == table.column_names[i]) found = static_cast<int>(j);
      if (found < 0) throw DataError("no stored edges for column '" + table.column_names[i] + "'");
      spec = spec_list[found];
      levels = apply_bins(table.columns[i], spec);
    } else {
      std::tie(levels, spec) = quantile_discretize(table.columns[i], opt.levels);
    }
    for (int r = 0; r < m.num_rows; ++r) m.values[static_cast<std::size_t>(r) * m.num_features + out_col] = levels[r];
    m.alphabets.push_back(*std::max_element(levels.begin(), levels.end()) + 1);
    m.feature_names.push_back(table.column_names[i]);
    names.push_back(table.column_names[i]);
    specs.push_back(std::move(spec));
    ++out_col;
  }
  for (int r = 0; r < m.num_rows; ++r) {
    const double v = table.columns[label_idx][r];
    if (v != std::floor(v) || v < 0) throw DataError("label column must hold nonnegative integers");
    m.labels.push_back(static_cast<int>(v));
  }
  m.label_alphabet = *std::max_element(m.labels.begin(), m.labels.end()) + 1;
  m.validate();

  std::ofstream out = open_output(opt.output);
  save_table(out, m, opt.label_column);
  if (!opt.binspec_out.empty()) {
    std::ofstream side = open_output(opt.binspec_out);
    save_binspecs(side, names, specs);
  }
  log << "discretized " << m.num_rows << " rows x " << m.num_features << " features -> " << opt.output << "\n";
}

// ---- build ---------------------------------------------------------------

struct BuildOpts {
  std::string input;
  std::string label_column = "label";
  std::string formulation = "entropy-cubo";
  double lambda = 1.0;
  std::vector<double> alpha{0.0, 0.0, 1.0};
  int k = 10;
  int select = -1;             // cardinality for the second-order builders
  std::vector<int> features;   // optional restriction to a column subset
  std::string output;
};

void cmd_build(const BuildOpts& opt, std::ostream& log) {
  FeatureMatrix m = load_table(opt.input, opt.label_column);
  if (!opt.features.empty()) m = select_features(m, opt.features);
  PolyBinaryProblem p;
  if (opt.formulation == "mrmr") {
    p = build_mrmr(m, opt.lambda);
  } else if (opt.formulation == "miqubo") {
    p = build_miqubo(m, opt.lambda);
  } else if (opt.formulation == "full-qubo") {
    p = build_full_qubo(m, opt.lambda);
  } else if (opt.formulation == "entropy-cubo") {
    if (opt.alpha.size() != 3) throw DataError("alpha needs exactly three weights");
    p = build_entropy_cubo(m, AlphaWeights{opt.alpha[0], opt.alpha[1], opt.alpha[2]}, opt.k);
  } else {
    throw CLI::ValidationError("unknown formulation: " + opt.formulation);
  }
  if (opt.select > 0) p.cardinality = opt.select;
  std::ofstream out = open_output(opt.output);
  save_problem(out, p);
  log << "built " << opt.formulation << " problem: " << p.num_vars << " vars, " << p.terms.size()
      << " terms -> " << opt.output << "\n";
}

// ---- solve ---------------------------------------------------------------

struct SolveOpts {
  std::string problem;
  std::string method = "brute";
  std::string finisher = "brute";
  double lambda_c = kDefaultCardinalityPenalty;
  int donor_size = 10;
  int donor_count = 3;
  int depth = 1;
  int rounds = 4;
  int cutoff = -1;
  int max_opt_iters = 5000;
  int opt_restarts = 4;
  bool reuse_donors = false;
  bool fix_smallest = false;
  int brute_cap = kDefaultQubitCap;
  std::uint64_t seed = 0;
  int threads = 1;
  std::string matrix;  // optional table for feature names
  std::string label_column = "label";
  std::string output;
  std::string trace_out;
};

void solve_reduced(const SpinHamiltonian& reduced, const std::string& finisher, const SolveOpts& opt,
                   std::vector<int>& spins, double& energy, std::ostream& log) {
  if (reduced.terms.empty()) {
    // Fully collapsed: every assignment is optimal, pick all +1.
    spins.assign(reduced.num_vars, +1);
    energy = reduced.offset;
    return;
  }
  if (finisher == "brute") {
    if (reduced.num_vars > opt.brute_cap)
      throw ResourceError("reduced problem still exceeds the exhaustive-search cap");
    const SpinSolution sol = brute_force(reduced, opt.brute_cap);
    spins = sol.spins;
    energy = sol.energy;
  } else if (finisher == "tabu") {
    TabuConfig tc;
    tc.seed = derive_seed(opt.seed, 99);
    const TabuResult sol = tabu_search(reduced, tc);
    spins = sol.spins;
    energy = sol.energy;
  } else {
    throw CLI::ValidationError("unknown finisher: " + finisher);
  }
  (void)log;
}

void cmd_solve(const SolveOpts& opt, std::ostream& log) {
  PolyBinaryProblem p = load_problem_file(opt.problem);
  if (p.cardinality && opt.method == "brute") {
    // Constrained exhaustive search enumerates only the feasible selections.
    const BinarySolution sol = brute_force_cardinality(p);
    std::ofstream out = open_output(opt.output);
    out << "method brute-cardinality\n";
    out << "energy " << format_full(sol.energy) << "\n";
    out << "bits ";
    for (std::size_t i = 0; i < sol.bits.size(); ++i) out << (i ? "," : "") << sol.bits[i];
    out << "\nselected";
    for (std::size_t i = 0; i < sol.bits.size(); ++i)
      if (sol.bits[i]) out << " " << i;
    out << "\n";
    if (!opt.matrix.empty()) {
      const FeatureMatrix m = load_table(opt.matrix, opt.label_column);
      out << "selected_names";
      for (std::size_t i = 0; i < sol.bits.size(); ++i)
        if (sol.bits[i] && static_cast<int>(i) < m.num_features) out << " " << m.feature_names[i];
      out << "\n";
    }
    log << "solved " << opt.problem << " exactly over size-" << *p.cardinality << " selections\n";
    return;
  }

  SpinHamiltonian h;
  if (p.cardinality) {
    h = to_spin(apply_cardinality_penalty(p, opt.lambda_c));
  } else {
    h = to_spin(p);
  }

  std::vector<int> spins;
  double energy = 0.0;
  ReductionTrace trace;
  std::string method_label = opt.method;
  bool have_trace = false;

  if (opt.method == "brute") {
    if (h.num_vars > opt.brute_cap) throw ResourceError("problem exceeds the exhaustive-search cap");
    const SpinSolution sol = brute_force(h, opt.brute_cap);
    spins = sol.spins;
    energy = sol.energy;
  } else if (opt.method == "tabu") {
    TabuConfig tc;
    tc.seed = opt.seed;
    const TabuResult sol = tabu_search(h, tc);
    spins = sol.spins;
    energy = sol.energy;
  } else if (opt.method == "hrqaoa" || opt.method == "rqaoa") {
    HrqaoaConfig cfg;
    cfg.donor_size = opt.donor_size;
    cfg.donor_count = opt.donor_count;
    cfg.depth = opt.depth;
    cfg.rounds = opt.rounds;
    if (opt.cutoff > 0) cfg.cutoff = opt.cutoff;
    cfg.optimizer.max_evals = opt.max_opt_iters;
    cfg.optimizer.restarts = opt.opt_restarts;
    cfg.reuse_donors = opt.reuse_donors;
    cfg.deterministic_elimination = opt.fix_smallest;
    cfg.seed = opt.seed;
    cfg.threads = opt.threads;
    try {
      trace = opt.method == "hrqaoa" ? run_hrqaoa(h, cfg) : run_rqaoa(h, cfg);
    } catch (const std::invalid_argument& e) {
      if (std::string(e.what()).find("cap") != std::string::npos) throw ResourceError(e.what());
      throw;
    }
    have_trace = true;
    std::vector<int> reduced_spins;
    double reduced_energy = 0.0;
    solve_reduced(trace.final_problem, opt.finisher, opt, reduced_spins, reduced_energy, log);
    spins = reconstruct_solution(trace, reduced_spins);
    energy = evaluate_spin(h, spins);
    method_label += "+" + opt.finisher;
  } else if (opt.method == "random-fix") {
    const int cutoff = opt.cutoff > 0 ? opt.cutoff : std::max(1, h.num_vars - opt.rounds);
    trace = random_edge_fix(h, cutoff, opt.seed);
    have_trace = true;
    std::vector<int> reduced_spins;
    double reduced_energy = 0.0;
    solve_reduced(trace.final_problem, opt.finisher, opt, reduced_spins, reduced_energy, log);
    spins = reconstruct_solution(trace, reduced_spins);
    energy = evaluate_spin(h, spins);
    method_label += "+" + opt.finisher;
  } else {
    throw CLI::ValidationError("unknown method: " + opt.method);
  }

  std::ofstream out = open_output(opt.output);
  out << "method " << method_label << "\n";
  out << "energy " << format_full(energy) << "\n";
  out << "spins ";
  for (std::size_t i = 0; i < spins.size(); ++i) out << (i ? "," : "") << (spins[i] > 0 ? "+1" : "-1");
  out << "\nbits ";
  for (std::size_t i = 0; i < spins.size(); ++i) out << (i ? "," : "") << (spins[i] > 0 ? 0 : 1);
  out << "\nselected";
  for (std::size_t i = 0; i < spins.size(); ++i)
    if (spins[i] < 0) out << " " << i;
  out << "\n";
  if (!opt.matrix.empty()) {
    const FeatureMatrix m = load_table(opt.matrix, opt.label_column);
    out << "selected_names";
    for (std::size_t i = 0; i < spins.size(); ++i)
      if (spins[i] < 0 && static_cast<int>(i) < m.num_features) out << " " << m.feature_names[i];
    out << "\n";
  }
  if (have_trace && !opt.trace_out.empty()) {
    std::ofstream tout = open_output(opt.trace_out);
    write_trace_report(tout, trace, method_label);
  }
  log << "solved " << opt.problem << " with " << method_label << ", energy " << format_full(energy) << "\n";
}

// ---- sparsify ------------------------------------------------------------

struct SparsifyOpts {
  std::string problem;
  std::string method = "truncate";
  double keep = 0.5;
  double threshold = 0.0;
  double surrogate = 0.0;
  long budget = 0;
  int rows = 3;
  int cols = 3;
  int max_swap_cost = 0;
  std::uint64_t seed = 0;
  std::string output;
  std::string report_out;
  std::string layout_out;
};

void cmd_sparsify(const SparsifyOpts& opt, std::ostream& log) {
  // The shared term-map format lets sparsification act on either form; the
  // cardinality line, when present, passes through untouched.
  PolyBinaryProblem p = load_problem_file(opt.problem);
  SpinHamiltonian working;
  working.num_vars = p.num_vars;
  working.terms = p.terms;
  working.offset = p.constant;

  SpinHamiltonian result;
  SparsifyReport report;
  std::optional<Layout> layout;
  if (opt.method == "truncate") {
    std::tie(result, report) = truncate_by_weight(working, opt.keep);
  } else if (opt.method == "random-tail") {
    if (!(opt.threshold > 0.0)) throw CLI::ValidationError("random-tail needs a positive --threshold");
    std::tie(result, report) = randomized_tail(working, opt.threshold, opt.surrogate, opt.budget, opt.seed);
  } else if (opt.method == "heavy-hex") {
    const HeavyHexGraph graph = heavy_hex_graph(opt.rows, opt.cols);
    if (graph.num_nodes < working.num_vars)
      throw ResourceError("lattice " + std::to_string(opt.rows) + "x" + std::to_string(opt.cols) +
                          " has only " + std::to_string(graph.num_nodes) + " nodes");
    HeavyHexResult r = map_heavy_hex(working, graph, opt.max_swap_cost);
    result = std::move(r.retained);
    report = std::move(r.report);
    layout = std::move(r.layout);
  } else {
    throw CLI::ValidationError("unknown sparsify method: " + opt.method);
  }

  PolyBinaryProblem out_problem;
  out_problem.num_vars = result.num_vars;
  out_problem.terms = std::move(result.terms);
  out_problem.constant = result.offset;
  out_problem.cardinality = p.cardinality;
  std::ofstream out = open_output(opt.output);
  save_problem(out, out_problem);
  if (!opt.report_out.empty()) {
    std::ofstream rout = open_output(opt.report_out);
    write_sparsify_report(rout, report);
  }
  if (layout && !opt.layout_out.empty()) {
    std::ofstream lout = open_output(opt.layout_out);
    write_layout(lout, *layout);
  }
  log << "sparsified " << opt.problem << ": kept " << out_problem.terms.size() << " of " << p.terms.size()
      << " terms -> " << opt.output << "\n";
}

// ---- bench ---------------------------------------------------------------

struct BenchOpts {
  std::vector<int> sizes{10, 12, 14, 16};
  int seeds = 1;
  std::vector<std::string> solvers{"brute", "tabu"};
  double timeout_seconds = 10.0;
  long timeout_iters = 0;
  std::string timeout_mode = "wall";  // wall | iters
  bool no_timing = false;
  std::string generator = "random";
  std::uint64_t seed = 0;
  std::string output;
};

void cmd_bench(const BenchOpts& opt, std::ostream& log) {
  HarnessConfig cfg;
  cfg.sizes = opt.sizes;
  cfg.seeds_per_size = opt.seeds;
  cfg.solvers = opt.solvers;
  cfg.generator = opt.generator;
  cfg.seed = opt.seed;
  if (opt.timeout_mode == "wall") {
    cfg.improvement_timeout_seconds = opt.timeout_seconds;
    cfg.improvement_timeout_iters = 0;
  } else if (opt.timeout_mode == "iters") {
    cfg.improvement_timeout_seconds = 0.0;
    cfg.improvement_timeout_iters = opt.timeout_iters > 0 ? opt.timeout_iters : 10000;
  } else {
    throw CLI::ValidationError("timeout mode must be wall or iters");
  }
  cfg.record_time = !opt.no_timing;
  const std::vector<HarnessRow> rows = scaling_harness(cfg);
  std::ofstream out = open_output(opt.output);
  write_harness_csv(out, rows, cfg.record_time);
  log << "benchmark wrote " << rows.size() << " rows -> " << opt.output << "\n";
}

// ---- resources -----------------------------------------------------------

struct ResourcesOpts {
  double gate_time = 1e-6;
  double per_shot_overhead = 1e-3;
  double optimizer_baseline = 1.0;
  double epsilon = 0.1;
  double delta = 0.05;
  int depth = 1;
  double fit_a = 1e-3;
  double fit_b = 0.5;
  double fit_c = 0.0;
  std::string fit_csv;  // optional: fit a,b,c from a bench CSV (brute rows)
  int rounds = 10;
  int n_min = 10;
  int n_max = 200;
  std::string output;
};

void cmd_resources(const ResourcesOpts& opt, std::ostream& log) {
  RuntimeModelParams params;
  params.gate_time = opt.gate_time;
  params.per_shot_overhead = opt.per_shot_overhead;
  params.optimizer_baseline = opt.optimizer_baseline;
  params.epsilon = opt.epsilon;
  params.delta = opt.delta;
  params.depth = opt.depth;
  params.validate();

  ExponentialFit fit;
  if (!opt.fit_csv.empty()) {
    std::ifstream in(opt.fit_csv);
    if (!in) throw DataError("cannot open fit csv: " + opt.fit_csv);
    std::string line;
    std::getline(in, line);  // header
    std::vector<double> xs, ys;
    while (std::getline(in, line)) {
      std::istringstream ss(line);
      std::string size_s, seed_s, solver, time_s;
      std::getline(ss, size_s, ',');
      std::getline(ss, seed_s, ',');
      std::getline(ss, solver, ',');
      std::getline(ss, time_s, ',');
      if (solver != "brute" || time_s.empty()) continue;
      xs.push_back(std::stod(size_s));
      ys.push_back(std::stod(time_s));
    }
    if (xs.size() < 3) throw DataError("fit csv needs at least 3 brute rows with timing");
    // Average repeated sizes before fitting.
    std::map<double, std::pair<double, int>> grouped;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      grouped[xs[i]].first += ys[i];
      grouped[xs[i]].second += 1;
    }
    xs.clear();
    ys.clear();
    for (const auto& [x, acc] : grouped) {
      xs.push_back(x);
      ys.push_back(acc.first / acc.second);
    }
    fit = fit_exponential(xs, ys);
  } else {
    fit.a = opt.fit_a;
    fit.b = opt.fit_b;
    fit.c = opt.fit_c;
  }

  std::ofstream out = open_output(opt.output);
  out << "model gate_time " << format_full(params.gate_time) << " per_shot_overhead "
      << format_full(params.per_shot_overhead) << " optimizer_baseline "
      << format_full(params.optimizer_baseline) << " epsilon " << format_full(params.epsilon) << " delta "
      << format_full(params.delta) << " depth " << params.depth << "\n";
  out << "fit a " << format_full(fit.a) << " b " << format_full(fit.b) << " c " << format_full(fit.c)
      << (fit.degenerate ? " degenerate" : "") << "\n";
  out << "reduction_rounds " << opt.rounds << "\n";
  out << "shots_table\n";
  for (int n : {10, 20, 50, 100, 200}) {
    out << "n " << n << " shots " << shots_required(n, params.epsilon, params.delta) << " time_per_shot "
        << format_full(time_per_shot(n, params)) << " round_time " << format_full(single_round_time(n, params))
        << "\n";
  }
  const std::optional<int> crossover = crossover_size(fit, params, opt.rounds, opt.n_min, opt.n_max);
  if (crossover) {
    out << "crossover_size " << *crossover << "\n";
    out << "ratio_at_crossover "
        << format_full(hybrid_speedup_ratio(*crossover, *crossover - opt.rounds, fit, params)) << "\n";
  } else {
    out << "crossover_size none\n";
  }
  log << "resource report -> " << opt.output << "\n";
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Hybrid feature-selection pipeline: information-theoretic problem builders, "
               "recursive quantum-style reduction in exact simulation, classical baselines, "
               "hardware-aware sparsification, and runtime models."};
  app.require_subcommand(1);

  DiscretizeOpts disc;
  CLI::App* cmd_disc = app.add_subcommand("discretize", "Quantile-bin a real-valued table to integer levels");
  cmd_disc->add_option("--input", disc.input, "delimiter-separated table with header")->required();
  cmd_disc->add_option("--label-column", disc.label_column, "name of the label column");
  cmd_disc->add_option("--levels", disc.levels, "number of levels per feature")->check(CLI::Range(2, 64));
  cmd_disc->add_option("--output", disc.output, "discretized table path")->required();
  cmd_disc->add_option("--binspec-out", disc.binspec_out, "sidecar path for the fitted bin edges");
  cmd_disc->add_option("--apply", disc.apply_spec, "apply a stored sidecar instead of fitting edges");

  BuildOpts build;
  CLI::App* cmd_bld = app.add_subcommand("build", "Score a discretized table into a selection problem");
  cmd_bld->add_option("--input", build.input, "integer table with header")->required();
  cmd_bld->add_option("--label-column", build.label_column, "name of the label column");
  cmd_bld->add_option("--formulation", build.formulation, "mrmr | miqubo | full-qubo | entropy-cubo");
  cmd_bld->add_option("--lambda", build.lambda, "relevance weight for the second-order builders");
  cmd_bld->add_option("--alpha", build.alpha, "three order weights, must sum to 1")->expected(3);
  cmd_bld->add_option("--k", build.k, "selection size for entropy-cubo");
  cmd_bld->add_option("--select", build.select, "attach a selection-size target to any formulation");
  cmd_bld->add_option("--features", build.features, "restrict scoring to these feature columns");
  cmd_bld->add_option("--output", build.output, "problem file path")->required();

  SolveOpts solve;
  CLI::App* cmd_slv = app.add_subcommand("solve", "Solve a problem file");
  cmd_slv->add_option("--problem", solve.problem, "problem file")->required();
  cmd_slv->add_option("--method", solve.method, "brute | tabu | rqaoa | hrqaoa | random-fix");
  cmd_slv->add_option("--finisher", solve.finisher, "brute | tabu (for the reduced problem)");
  cmd_slv->add_option("--lambda-c", solve.lambda_c, "selection-penalty multiplier");
  cmd_slv->add_option("--ds", solve.donor_size, "donor subproblem size");
  cmd_slv->add_option("--ns", solve.donor_count, "number of donor subproblems");
  cmd_slv->add_option("--p", solve.depth, "circuit depth");
  cmd_slv->add_option("--rounds", solve.rounds, "edge-fixing rounds");
  cmd_slv->add_option("--cutoff", solve.cutoff, "stop when this many variables remain");
  cmd_slv->add_option("--max-opt-iters", solve.max_opt_iters, "optimizer evaluation budget");
  cmd_slv->add_option("--opt-restarts", solve.opt_restarts, "optimizer restarts within the budget");
  cmd_slv->add_flag("--reuse-donors", solve.reuse_donors, "train the donor pool once and reuse it each round");
  cmd_slv->add_flag("--fix-smallest", solve.fix_smallest, "eliminate the smallest index instead of a random one");
  cmd_slv->add_option("--brute-cap", solve.brute_cap, "exhaustive-search size cap");
  cmd_slv->add_option("--seed", solve.seed, "run seed");
  cmd_slv->add_option("--threads", solve.threads, "worker cap for donor training");
  cmd_slv->add_option("--matrix", solve.matrix, "table used to print selected feature names");
  cmd_slv->add_option("--label-column", solve.label_column, "label column of --matrix");
  cmd_slv->add_option("--output", solve.output, "solution file path")->required();
  cmd_slv->add_option("--trace", solve.trace_out, "reduction trace report path");

  SparsifyOpts spars;
  CLI::App* cmd_sps = app.add_subcommand("sparsify", "Reduce the term count of a problem file");
  cmd_sps->add_option("--problem", spars.problem, "problem file")->required();
  cmd_sps->add_option("--method", spars.method, "truncate | random-tail | heavy-hex");
  cmd_sps->add_option("--keep", spars.keep, "fraction of terms kept by truncate");
  cmd_sps->add_option("--threshold", spars.threshold, "random-tail: keep terms at or above this weight");
  cmd_sps->add_option("--surrogate", spars.surrogate, "random-tail: surrogate angle magnitude");
  cmd_sps->add_option("--budget", spars.budget, "random-tail: sampled tail terms");
  cmd_sps->add_option("--rows", spars.rows, "heavy-hex: lattice cell rows");
  cmd_sps->add_option("--cols", spars.cols, "heavy-hex: lattice cell columns");
  cmd_sps->add_option("--max-swap-cost", spars.max_swap_cost, "heavy-hex: routing budget per term");
  cmd_sps->add_option("--seed", spars.seed, "sampling seed");
  cmd_sps->add_option("--output", spars.output, "sparsified problem path")->required();
  cmd_sps->add_option("--report", spars.report_out, "kept/dropped report path");
  cmd_sps->add_option("--layout", spars.layout_out, "heavy-hex placement path");

  BenchOpts bench;
  CLI::App* cmd_bch = app.add_subcommand("bench", "Runtime scaling study of the classical solvers");
  cmd_bch->add_option("--sizes", bench.sizes, "problem sizes");
  cmd_bch->add_option("--seeds", bench.seeds, "instances per size");
  cmd_bch->add_option("--solvers", bench.solvers, "subset of {brute, tabu}");
  cmd_bch->add_option("--timeout", bench.timeout_seconds, "improvement timeout in seconds (wall mode)");
  cmd_bch->add_option("--timeout-iters", bench.timeout_iters, "improvement timeout in iterations (iters mode)");
  cmd_bch->add_option("--timeout-mode", bench.timeout_mode, "wall | iters");
  cmd_bch->add_flag("--no-timing", bench.no_timing, "omit measured times for byte-reproducible output");
  cmd_bch->add_option("--generator", bench.generator, "random | planted");
  cmd_bch->add_option("--seed", bench.seed, "run seed");
  cmd_bch->add_option("--output", bench.output, "results CSV path")->required();

  ResourcesOpts res;
  CLI::App* cmd_res = app.add_subcommand("resources", "Shot/runtime models and the crossover estimate");
  cmd_res->add_option("--tg", res.gate_time, "gate time in seconds");
  cmd_res->add_option("--tp", res.per_shot_overhead, "per-shot overhead in seconds");
  cmd_res->add_option("--topt", res.optimizer_baseline, "per-round classical baseline in seconds");
  cmd_res->add_option("--eps", res.epsilon, "estimation tolerance");
  cmd_res->add_option("--delta", res.delta, "failure rate");
  cmd_res->add_option("--depth", res.depth, "circuit depth");
  cmd_res->add_option("--fit-a", res.fit_a, "classical fit coefficient a");
  cmd_res->add_option("--fit-b", res.fit_b, "classical fit exponent b");
  cmd_res->add_option("--fit-c", res.fit_c, "classical fit offset c");
  cmd_res->add_option("--fit-csv", res.fit_csv, "fit a,b,c from a bench CSV instead");
  cmd_res->add_option("--rounds", res.rounds, "reduction rounds assumed for the hybrid");
  cmd_res->add_option("--n-min", res.n_min, "crossover search lower bound");
  cmd_res->add_option("--n-max", res.n_max, "crossover search upper bound");
  cmd_res->add_option("--output", res.output, "report path")->required();

  app.set_config("--config");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {  // --help
      out << app.help();
      return kExitOk;
    }
    err << "usage error: " << e.what() << "\n";
    return kExitUsage;
  }

  try {
    if (cmd_disc->parsed()) cmd_discretize(disc, out);
    if (cmd_bld->parsed()) cmd_build(build, out);
    if (cmd_slv->parsed()) cmd_solve(solve, out);
    if (cmd_sps->parsed()) cmd_sparsify(spars, out);
    if (cmd_bch->parsed()) cmd_bench(bench, out);
    if (cmd_res->parsed()) cmd_resources(res, out);
  } catch (const CLI::ValidationError& e) {
    err << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const ResourceError& e) {
    err << "resource error: " << e.what() << "\n";
    return kExitResource;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitData;
  }
  return kExitOk;
}

}  // namespace qfs
