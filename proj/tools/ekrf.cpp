// ekrf: simulate the random greedy intersecting process, evaluate exact
// counts and functionals, and compare phase statistics with limit laws.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>

#include "CLI11.hpp"

#include "ekrf/counting.hpp"
#include "ekrf/functionals.hpp"
#include "ekrf/io.hpp"
#include "ekrf/process.hpp"
#include "ekrf/stats.hpp"

namespace {

constexpr int kExitTrialFailure = 1;
constexpr int kExitInvalid = 2;

struct InvalidInput : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string env_name(const std::string& flag) {
  std::string out = "EKRF_";
  for (char c : flag) out += c == '-' ? '_' : static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return out;
}

// Adds a long option that is mirrored by EKRF_<NAME>.
template <typename T>
CLI::Option* opt(CLI::App* app, const std::string& name, T& target, const std::string& help) {
  return app->add_option("--" + name, target, help)->envname(env_name(name))->capture_default_str();
}

// Config-file values only fill options the user did not give by flag or
// environment.
std::vector<std::string> merge_config_file(const std::vector<std::string>& args, const std::string& sub) {
  std::string path;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) path = args[i + 1];
    if (args[i].rfind("--config=", 0) == 0) path = args[i].substr(9);
  }
  if (path.empty()) {
    if (const char* env = std::getenv("EKRF_CONFIG")) path = env;
  }
  if (path.empty()) return args;
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open config file " + path);
  std::map<std::string, std::string> kv;
  try {
    kv = ekrf::parse_config_file(in);
  } catch (const std::invalid_argument& e) {
    throw InvalidInput(e.what());
  }
  std::set<std::string> given;
  for (const auto& a : args) {
    if (a.rfind("--", 0) == 0) given.insert(a.substr(2, a.find('=') == std::string::npos ? std::string::npos : a.find('=') - 2));
  }
  std::vector<std::string> out = args;
  auto pos = std::find(out.begin(), out.end(), sub);
  pos = pos == out.end() ? out.end() : pos + 1;
  std::vector<std::string> extra;
  for (const auto& [name, value] : kv) {
    std::string key = name;
    std::replace(key.begin(), key.end(), '_', '-');
    if (given.contains(key) || std::getenv(env_name(key).c_str())) continue;
    extra.push_back("--" + key);
    extra.push_back(value);
  }
  out.insert(pos, extra.begin(), extra.end());
  return out;
}

ekrf::SamplerKind parse_strategy(const std::string& s) {
  try {
    return ekrf::sampler_kind_from_string(s);
  } catch (const std::invalid_argument& e) {
    throw InvalidInput(e.what());
  }
}

std::ostream& open_out(const std::string& path, std::ofstream& file) {
  if (path.empty() || path == "-") return std::cout;
  file.open(path);
  if (!file) throw InvalidInput("cannot open output file " + path);
  return file;
}

// ------------------------------------------------------------------ simulate

struct SimulateArgs {
  int n = 0;
  int r = 0;
  std::uint64_t trials = 1;
  std::uint64_t seed = 0;
  std::string strategy = "auto";
  std::string mode = "structural";
  std::uint64_t pool_cap = ekrf::SamplerSettings{}.pool_cap;
  std::uint64_t rejection_cap = ekrf::SamplerSettings{}.rejection_cap;
  double rejection_floor = ekrf::SamplerSettings{}.rejection_floor;
  int ie_cap = ekrf::SamplerSettings{}.ie_cap;
  std::uint64_t t_max = ekrf::StoppingPolicy{}.t_max;
  int delta_stop = 0;
  double eps_fix = ekrf::StoppingPolicy{}.eps_fix;
  bool continue_after_verdict = true;
  unsigned workers = 1;
  std::string out = "-";
  std::string config;
};

void add_simulate(CLI::App& app, SimulateArgs& a) {
  auto* sub = app.add_subcommand("simulate", "Run independent trials and write JSONL records");
  opt(sub, "n", a.n, "Vertex count")->required();
  opt(sub, "r", a.r, "Edge size")->required();
  opt(sub, "trials", a.trials, "Number of trials");
  opt(sub, "seed", a.seed, "Seed base; trial i uses seed ^ mix64(i)");
  opt(sub, "strategy", a.strategy, "pool | rejection | structured | auto");
  opt(sub, "mode", a.mode, "exact | structural");
  opt(sub, "pool-cap", a.pool_cap, "Largest C(n, r) enumerated in pool mode");
  opt(sub, "rejection-cap", a.rejection_cap, "Rejection attempts per step");
  opt(sub, "rejection-floor", a.rejection_floor, "Smallest acceptance rate for rejection sampling");
  opt(sub, "ie-cap", a.ie_cap, "Largest number of constraints for inclusion-exclusion");
  opt(sub, "t-max", a.t_max, "Step horizon");
  opt(sub, "delta-stop", a.delta_stop, "Degree threshold for predicted fixation (0: default)");
  opt(sub, "eps-fix", a.eps_fix, "Residual ratio threshold for predicted fixation");
  opt(sub, "continue-after-verdict", a.continue_after_verdict, "Keep running after an exact verdict");
  opt(sub, "workers", a.workers, "Worker threads");
  opt(sub, "out", a.out, "Output path ('-' for stdout)");
  opt(sub, "config", a.config, "Flat key=value file; flags and environment take precedence");
}

int run_simulate(const SimulateArgs& a) {
  ekrf::RunConfig rc;
  rc.trial.n = a.n;
  rc.trial.r = a.r;
  rc.trial.sampler.kind = parse_strategy(a.strategy);
  rc.trial.sampler.pool_cap = a.pool_cap;
  rc.trial.sampler.rejection_cap = a.rejection_cap;
  rc.trial.sampler.rejection_floor = a.rejection_floor;
  rc.trial.sampler.ie_cap = a.ie_cap;
  try {
    rc.trial.stopping.mode = ekrf::stop_mode_from_string(a.mode);
  } catch (const std::invalid_argument& e) {
    throw InvalidInput(e.what());
  }
  rc.trial.stopping.t_max = a.t_max;
  rc.trial.stopping.delta_stop = a.delta_stop;
  rc.trial.stopping.eps_fix = a.eps_fix;
  rc.trial.stopping.continue_after_verdict = a.continue_after_verdict;
  rc.trials = a.trials;
  rc.seed_base = a.seed;
  rc.workers = std::max(1u, a.workers);
  try {
    ekrf::validate_config(rc.trial);
  } catch (const std::invalid_argument& e) {
    throw InvalidInput(e.what());
  }
  for (const auto& w : ekrf::regime_warnings(a.n, a.r)) std::cerr << "warning: " << w << '\n';

  std::ofstream file;
  std::ostream& out = open_out(a.out, file);
  std::vector<ekrf::TrialRecord> records;
  try {
    ekrf::run_trials(rc, [&](const ekrf::TrialRecord& rec) {
      out << ekrf::record_to_jsonl(rec) << '\n';
      records.push_back(rec);
    });
  } catch (const ekrf::TrialError& e) {
    out.flush();
    std::cerr << "error: " << e.what() << "\nreplay: " << e.replay() << '\n';
    return kExitTrialFailure;
  }
  if (!records.empty()) {
    const auto summary = ekrf::summarize(records);
    out << ekrf::summary_to_json(summary).dump() << '\n';
    std::cerr << "trials " << summary.trials << "  fixed " << summary.fixed << "  predicted_fixed "
              << summary.predicted_fixed << "  simple_at_t4 " << summary.simple_at_t4 << "  t4=t3+1 " << summary.gap_one
              << "  mean_steps " << summary.mean_steps << '\n';
  }
  return 0;
}

// ------------------------------------------------------------------ count

struct CountArgs {
  int n = 0;
  int r = 0;
  std::string edges;
  ekrf::Vertex required = 0;
  ekrf::Vertex excluded = 0;
  ekrf::Vertex split = 0;
  bool final_size = false;
  int tbar = 0;
  int ie_cap = ekrf::kDefaultIeCap;
};

void add_count(CLI::App& app, CountArgs& a) {
  auto* sub = app.add_subcommand("count", "Exact counts of r-sets meeting every edge");
  opt(sub, "n", a.n, "Vertex count")->required();
  opt(sub, "r", a.r, "Edge size")->required();
  opt(sub, "edges", a.edges, "Edge file: one edge per line, ascending vertices");
  opt(sub, "required", a.required, "Vertex every counted set must contain");
  opt(sub, "excluded", a.excluded, "Vertex every counted set must avoid");
  opt(sub, "split", a.split, "Also print the counts with and without this vertex");
  sub->add_flag("--final-size", a.final_size, "Print final_family_size(n, r, tbar) instead")->envname("EKRF_FINAL_SIZE");
  opt(sub, "tbar", a.tbar, "Edges avoiding the hub, for --final-size");
  opt(sub, "ie-cap", a.ie_cap, "Largest number of constraints for inclusion-exclusion");
}

int run_count(const CountArgs& a) {
  if (a.n < 1 || a.r < 0 || a.r > a.n) throw InvalidInput("need 0 <= r <= n and n >= 1");
  if (a.final_size) {
    try {
      std::cout << "final_family_size " << ekrf::final_family_size(a.n, a.r, a.tbar).to_string() << '\n';
    } catch (const std::exception& e) {
      throw InvalidInput(e.what());
    }
    return 0;
  }
  ekrf::ConstraintInstance inst;
  inst.universe_size = a.n;
  inst.subset_size = a.r;
  if (!a.edges.empty()) {
    std::ifstream in(a.edges);
    if (!in) throw InvalidInput("cannot open edge file " + a.edges);
    try {
      for (const auto& e : ekrf::read_edges(in, a.n, a.r)) inst.edges.emplace_back(e.vertices().begin(), e.vertices().end());
    } catch (const std::invalid_argument& e) {
      throw InvalidInput(e.what());
    }
  }
  if (a.required) inst.required_vertex = a.required;
  if (a.excluded) inst.excluded_vertex = a.excluded;
  try {
    std::cout << "nu_all " << ekrf::nu_all(inst, a.ie_cap).to_string() << '\n';
    if (a.split) {
      const auto [with, without] = ekrf::nu_split(inst, a.split, a.ie_cap);
      std::cout << "containing " << with.to_string() << '\n' << "avoiding " << without.to_string() << '\n';
    }
  } catch (const std::invalid_argument& e) {
    throw InvalidInput(e.what());
  }
  return 0;
}

// ------------------------------------------------------------------ functional

struct FunctionalArgs {
  int t = 0;
  int tbar = 0;
  int delta = 0;
  int f = 0;
  int h = 0;
  int u = 0;
  int l = 0;
  double x = 1;
  double y = 1;
  std::string cls = "all";
};

void add_functional(CLI::App& app, FunctionalArgs& a) {
  auto* sub = app.add_subcommand("functional", "Graph and grid functionals");
  sub->require_subcommand(1);
  auto* graph = sub->add_subcommand("graph", "Sums over subgraphs of K_t");
  opt(graph, "t", a.t, "Vertices of K_t")->required();
  opt(graph, "x", a.x, "Weight per edge");
  opt(graph, "y", a.y, "Weight per covered vertex");
  opt(graph, "class", a.cls, "f1 | nonmatching | matching-f2plus | all");
  auto* grid = sub->add_subcommand("grid", "Sum over nonempty subsets of [tbar] x [delta]");
  opt(grid, "tbar", a.tbar, "Rows")->required();
  opt(grid, "delta", a.delta, "Columns")->required();
  opt(grid, "x", a.x, "Weight per cell")->required();
  opt(grid, "y", a.y, "Weight per occupied row or column")->required();
  auto* matching = sub->add_subcommand("matching", "Number of f-edge matchings in K_t");
  opt(matching, "t", a.t, "Vertices")->required();
  opt(matching, "f", a.f, "Edges")->required();
  auto* nhul = sub->add_subcommand("nhul", "Bound on grids with h cells meeting u rows and l columns");
  nhul->set_help_flag("--help", "Print this help message and exit");
  opt(nhul, "h", a.h, "Cells")->required();
  opt(nhul, "u", a.u, "Rows")->required();
  opt(nhul, "l", a.l, "Columns")->required();
}

int run_functional(const CLI::App& sub, const FunctionalArgs& a) {
  std::cout.precision(15);
  if (sub.got_subcommand("graph")) {
    const ekrf::GraphParams p{a.t, a.x, a.y};
    const bool all = a.cls == "all";
    if (a.cls != "all" && a.cls != "f1" && a.cls != "nonmatching" && a.cls != "matching-f2plus") {
      throw InvalidInput("unknown class " + a.cls);
    }
    std::ostringstream os;
    os.precision(15);
    if (all || a.cls == "f1") os << "f1 " << ekrf::graph_sum_f1(p) << '\n';
    if (all || a.cls == "nonmatching") {
      os << "nonmatching " << ekrf::graph_sum_class(p, ekrf::GraphClass::NonMatching) << '\n';
    }
    if (all || a.cls == "matching-f2plus") {
      os << "matching_f2plus " << ekrf::graph_sum_class(p, ekrf::GraphClass::MatchingF2Plus) << '\n';
    }
    std::cout << os.str();
  } else if (sub.got_subcommand("grid")) {
    const ekrf::GridParams p{a.tbar, a.delta, a.x, a.y};
    const double sum = ekrf::grid_sum(p), lead = ekrf::grid_leading(p);
    std::cout << "grid_sum " << sum << "\ngrid_leading " << lead << "\nratio " << sum / lead << '\n';
  } else if (sub.got_subcommand("matching")) {
    std::cout << "matching_count " << ekrf::matching_count(a.t, a.f).to_string() << '\n';
  } else {
    std::cout << "nhul_bound " << ekrf::grid_bound_nhul(a.h, a.u, a.l).to_string() << '\n';
  }
  return 0;
}

// ------------------------------------------------------------------ stats

struct StatsArgs {
  std::string in;
  std::string out = "-";
  std::string law = "all";
  std::vector<double> alpha;
  std::vector<double> c;
  std::vector<double> xi;
  double x = 1.0;
};

void add_stats(CLI::App& app, StatsArgs& a) {
  auto* sub = app.add_subcommand("stats", "Compare simulate output with the limit laws (CSV)");
  opt(sub, "in", a.in, "JSONL file from simulate")->required();
  opt(sub, "out", a.out, "CSV path ('-' for stdout)");
  opt(sub, "law", a.law, "t3 | t4 | scaled | fix | gap | all (full law names also accepted)");
  opt(sub, "alpha", a.alpha, "t3 tail points (multiples of r/n^(1/3))");
  opt(sub, "c", a.c, "t4 tail points (multiples of r/n^(1/3)); a single value also sets the fixation law argument");
  opt(sub, "xi", a.xi, "Gap tail points");
  opt(sub, "x", a.x, "Tail point of n t4^3/(6 r^3)");
}

std::string canonical_law(const std::string& name) {
  static const std::map<std::string, std::string> alias{{"t3", "t3_tail"},
                                                        {"t4", "t4_tail"},
                                                        {"scaled", "t4_scaled_exponential"},
                                                        {"fix", "fix_probability"},
                                                        {"gap", "t4_gap_geometric"}};
  if (name == "all") return name;
  if (auto it = alias.find(name); it != alias.end()) return it->second;
  try {
    return ekrf::to_string(ekrf::law_from_string(name));
  } catch (const std::invalid_argument& e) {
    throw InvalidInput(e.what());
  }
}

int run_stats(const StatsArgs& a) {
  std::ifstream in(a.in);
  if (!in) throw InvalidInput("cannot open " + a.in);
  std::vector<ekrf::TrialRecord> records;
  try {
    records = ekrf::read_jsonl(in);
  } catch (const std::invalid_argument& e) {
    throw InvalidInput(e.what());
  }
  if (records.empty()) throw InvalidInput("no trial records in " + a.in);
  const auto first = ekrf::config_to_json(records.front().config);
  for (const auto& rec : records) {
    if (ekrf::config_to_json(rec.config) != first) throw InvalidInput("records come from different configurations");
  }
  ekrf::SummaryRequest req;
  if (!a.alpha.empty()) req.alphas = a.alpha;
  if (!a.c.empty()) req.cs = a.c;
  if (!a.xi.empty()) req.xis = a.xi;
  if (a.c.size() == 1) req.fix_c = a.c.front();
  req.scaled_x = a.x;
  ekrf::Summary s;
  try {
    s = ekrf::summarize(records, req);
  } catch (const std::invalid_argument& e) {
    throw InvalidInput(e.what());
  }
  const std::string law = canonical_law(a.law);
  std::vector<ekrf::LawComparison> rows;
  for (const auto& row : s.comparisons) {
    if (law == "all" || row.law == law) rows.push_back(row);
  }
  std::ofstream file;
  ekrf::write_comparisons_csv(open_out(a.out, file), rows);
  if (s.ks_scaled_t4) std::cerr << "ks(n t4^3/(6 r^3), Exp(1)) " << *s.ks_scaled_t4 << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Random greedy intersecting hypergraph process: simulation, exact counts, functionals, statistics"};
  app.require_subcommand(1);
  SimulateArgs sim;
  CountArgs count;
  FunctionalArgs func;
  StatsArgs stats;
  add_simulate(app, sim);
  add_count(app, count);
  add_functional(app, func);
  add_stats(app, stats);

  try {
    std::vector<std::string> args(argv + 1, argv + argc);
    if (!args.empty() && args.front() == "simulate") args = merge_config_file(args, "simulate");
    std::reverse(args.begin(), args.end());
    app.parse(args);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitInvalid;
  } catch (const InvalidInput& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInvalid;
  }

  try {
    if (app.got_subcommand("simulate")) return run_simulate(sim);
    if (app.got_subcommand("count")) return run_count(count);
    if (app.got_subcommand("functional")) return run_functional(*app.get_subcommand("functional"), func);
    return run_stats(stats);
  } catch (const InvalidInput& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInvalid;
  } catch (const ekrf::CapExceeded& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInvalid;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInvalid;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitTrialFailure;
  }
}
