#include "ekrf/io.hpp"

#include <algorithm>
#include <atomic>
#include <condition_variable>
#include <exception>
#include <iomanip>
#include <istream>
#include <mutex>
#include <optional>
#include <ostream>
#include <sstream>
#include <thread>

#include "ekrf/process.hpp"
#include "ekrf/rng.hpp"

namespace ekrf {

using nlohmann::json;

namespace {

template <typename T>
json opt(const std::optional<T>& v) {
  return v ? json(*v) : json(nullptr);
}

json opt_count(const std::optional<BigCount>& v) { return v ? json(v->to_string()) : json(nullptr); }

template <typename T>
std::optional<T> get_opt(const json& j, const char* key) {
  if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
  return j.at(key).get<T>();
}

std::optional<BigCount> get_count(const json& j, const char* key) {
  if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
  return BigCount::from_string(j.at(key).get<std::string>());
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

}  // namespace

json config_to_json(const TrialConfig& c) {
  return json{{"n", c.n},
              {"r", c.r},
              {"strategy", to_string(c.sampler.kind)},
              {"pool_cap", c.sampler.pool_cap},
              {"rejection_cap", c.sampler.rejection_cap},
              {"rejection_floor", c.sampler.rejection_floor},
              {"ie_cap", c.sampler.ie_cap},
              {"mode", to_string(c.stopping.mode)},
              {"t_max", c.stopping.t_max},
              {"delta_stop", c.stopping.delta_stop},
              {"eps_fix", c.stopping.eps_fix},
              {"continue_after_verdict", c.stopping.continue_after_verdict}};
}

TrialConfig config_from_json(const json& j) {
  TrialConfig c;
  c.n = j.at("n").get<int>();
  c.r = j.at("r").get<int>();
  c.sampler.kind = sampler_kind_from_string(j.at("strategy").get<std::string>());
  c.sampler.pool_cap = j.at("pool_cap").get<std::uint64_t>();
  c.sampler.rejection_cap = j.at("rejection_cap").get<std::uint64_t>();
  c.sampler.rejection_floor = j.at("rejection_floor").get<double>();
  c.sampler.ie_cap = j.at("ie_cap").get<int>();
  c.stopping.mode = stop_mode_from_string(j.at("mode").get<std::string>());
  c.stopping.t_max = j.at("t_max").get<std::uint64_t>();
  c.stopping.delta_stop = j.at("delta_stop").get<int>();
  c.stopping.eps_fix = j.at("eps_fix").get<double>();
  c.stopping.continue_after_verdict = j.at("continue_after_verdict").get<bool>();
  return c;
}

json record_to_json(const TrialRecord& rec) {
  json t_k = json::object();
  for (const auto& [k, t] : rec.phases.t_k) t_k[std::to_string(k)] = t;
  json log = json::array();
  for (const auto& run : rec.strategy_log) log.push_back({{"kind", to_string(run.kind)}, {"steps", run.steps}});
  return json{{"n", rec.config.n},
              {"r", rec.config.r},
              {"seed", rec.seed},
              {"trial", rec.trial_index},
              {"t3", opt(rec.phases.t3())},
              {"t4", opt(rec.phases.t4())},
              {"t_nonsimple", opt(rec.phases.t_nonsimple)},
              {"simple_at_t4", opt(rec.simple_at_t4)},
              {"unique_v", opt(rec.unique_v)},
              {"verdict", to_string(rec.verdict.kind)},
              {"fixed_vertex", opt(rec.verdict.vertex)},
              {"verdict_size", opt_count(rec.verdict.size)},
              {"verdict_at", opt(rec.verdict_at)},
              {"final_size_exact", opt_count(rec.final_size_exact)},
              {"final_size_predicted", opt_count(rec.final_size_predicted)},
              {"residual_ratio", opt(rec.verdict.residual_ratio)},
              {"stop_reason", to_string(rec.stop_reason)},
              {"steps", rec.steps},
              {"strategy_log", std::move(log)},
              {"t_k", std::move(t_k)},
              {"t_delta0", opt(rec.phases.t_delta0)},
              {"t_common_empty", opt(rec.phases.t_common_empty)},
              {"deg3_multiplicity", rec.phases.deg3_multiplicity},
              {"config", config_to_json(rec.config)}};
}

TrialRecord record_from_json(const json& j) {
  try {
    TrialRecord rec;
    rec.config = config_from_json(j.at("config"));
    if (rec.config.n != j.at("n").get<int>() || rec.config.r != j.at("r").get<int>()) {
      throw std::invalid_argument("record: (n, r) disagree with the config echo");
    }
    rec.seed = j.at("seed").get<std::uint64_t>();
    rec.trial_index = j.at("trial").get<std::uint64_t>();
    for (const auto& [k, t] : j.at("t_k").items()) rec.phases.t_k[std::stoi(k)] = t.get<std::uint64_t>();
    rec.phases.t_nonsimple = get_opt<std::uint64_t>(j, "t_nonsimple");
    rec.phases.t_delta0 = get_opt<std::uint64_t>(j, "t_delta0");
    rec.phases.t_common_empty = get_opt<std::uint64_t>(j, "t_common_empty");
    rec.phases.deg3_multiplicity = j.at("deg3_multiplicity").get<int>();
    if (get_opt<std::uint64_t>(j, "t3") != rec.phases.t3() || get_opt<std::uint64_t>(j, "t4") != rec.phases.t4()) {
      throw std::invalid_argument("record: t3/t4 disagree with t_k");
    }
    rec.simple_at_t4 = get_opt<bool>(j, "simple_at_t4");
    rec.unique_v = get_opt<Vertex>(j, "unique_v");
    rec.verdict.kind = verdict_kind_from_string(j.at("verdict").get<std::string>());
    rec.verdict.vertex = get_opt<Vertex>(j, "fixed_vertex");
    rec.verdict.size = get_count(j, "verdict_size");
    rec.verdict.residual_ratio = get_opt<double>(j, "residual_ratio");
    rec.verdict_at = get_opt<std::uint64_t>(j, "verdict_at");
    rec.final_size_exact = get_count(j, "final_size_exact");
    rec.final_size_predicted = get_count(j, "final_size_predicted");
    rec.stop_reason = stop_reason_from_string(j.at("stop_reason").get<std::string>());
    rec.steps = j.at("steps").get<std::uint64_t>();
    for (const auto& run : j.at("strategy_log")) {
      rec.strategy_log.push_back({sampler_kind_from_string(run.at("kind").get<std::string>()),
                                  run.at("steps").get<std::uint64_t>()});
    }
    return rec;
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("malformed record: ") + e.what());
  }
}

std::string record_to_jsonl(const TrialRecord& rec) { return record_to_json(rec).dump(); }

std::vector<TrialRecord> read_jsonl(std::istream& in) {
  std::vector<TrialRecord> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    json j;
    try {
      j = json::parse(line);
    } catch (const json::exception& e) {
      throw std::invalid_argument("line " + std::to_string(lineno) + ": " + e.what());
    }
    if (j.contains("summary")) continue;
    out.push_back(record_from_json(j));
  }
  return out;
}

json summary_to_json(const Summary& s) {
  json rows = json::array();
  for (const auto& c : s.comparisons) {
    rows.push_back({{"law", c.law}, {"parameter", c.parameter}, {"empirical", c.empirical}, {"se", c.se},
                    {"theory", c.theory}, {"n", c.count}});
  }
  return json{{"summary",
               {{"n", s.n},
                {"r", s.r},
                {"trials", s.trials},
                {"simple_at_t4", s.simple_at_t4},
                {"simple_unique_v", s.simple_unique_v},
                {"gap_one", s.gap_one},
                {"fixed", s.fixed},
                {"predicted_fixed", s.predicted_fixed},
                {"mean_steps", s.mean_steps},
                {"ks_scaled_t4", opt(s.ks_scaled_t4)},
                {"laws", std::move(rows)}}}};
}

void write_edges(std::ostream& out, std::span<const Edge> edges) {
  for (const Edge& e : edges) {
    bool first = true;
    for (Vertex v : e.vertices()) {
      out << (first ? "" : " ") << v;
      first = false;
    }
    out << '\n';
  }
}

std::vector<Edge> read_edges(std::istream& in, int n, int r) {
  std::vector<Edge> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string body = trim(line);
    if (body.empty() || body.front() == '#') continue;
    std::istringstream fields(body);
    std::vector<Vertex> vs;
    long long v = 0;
    while (fields >> v) {
      if (v < 1 || v > n) throw std::invalid_argument("edge file line " + std::to_string(lineno) + ": vertex out of range");
      vs.push_back(static_cast<Vertex>(v));
    }
    if (!fields.eof()) throw std::invalid_argument("edge file line " + std::to_string(lineno) + ": not an integer");
    if (!std::is_sorted(vs.begin(), vs.end()) || std::adjacent_find(vs.begin(), vs.end()) != vs.end()) {
      throw std::invalid_argument("edge file line " + std::to_string(lineno) + ": vertices must be strictly ascending");
    }
    try {
      out.push_back(Edge::make(std::move(vs), n, r));
    } catch (const std::invalid_argument& e) {
      throw std::invalid_argument("edge file line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  return out;
}

void write_comparisons_csv(std::ostream& out, std::span<const LawComparison> rows) {
  out << kCsvHeader << '\n';
  const auto old_precision = out.precision(17);
  for (const auto& c : rows) {
    out << c.law << ',' << c.parameter << ',' << c.empirical << ',' << c.se << ',' << c.theory << ',' << c.count << '\n';
  }
  out.precision(old_precision);
}

std::vector<LawComparison> read_comparisons_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || trim(line) != kCsvHeader) throw std::invalid_argument("csv: missing header");
  std::vector<LawComparison> out;
  while (std::getline(in, line)) {
    if (trim(line).empty()) continue;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (cells.size() != 6) throw std::invalid_argument("csv: expected 6 columns");
    out.push_back({cells[0], std::stod(cells[1]), std::stod(cells[2]), std::stod(cells[3]), std::stod(cells[4]),
                   static_cast<std::size_t>(std::stoull(cells[5]))});
  }
  return out;
}

std::map<std::string, std::string> parse_config_file(std::istream& in) {
  std::map<std::string, std::string> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string body = trim(line);
    if (body.empty() || body.front() == '#') continue;
    const auto eq = body.find('=');
    if (eq == std::string::npos) throw std::invalid_argument("config line " + std::to_string(lineno) + ": expected key=value");
    out[trim(body.substr(0, eq))] = trim(body.substr(eq + 1));
  }
  return out;
}

void run_trials(const RunConfig& config, const std::function<void(const TrialRecord&)>& sink) {
  validate_config(config.trial);
  const std::uint64_t total = config.trials;
  auto run_one = [&](std::uint64_t i) {
    return run_trial(config.trial, RngStream::derive_seed(config.seed_base, i), i);
  };
  const unsigned workers = static_cast<unsigned>(std::clamp<std::uint64_t>(config.workers, 1, std::max<std::uint64_t>(total, 1)));
  if (workers == 1) {
    for (std::uint64_t i = 0; i < total; ++i) sink(run_one(i));
    return;
  }

  std::vector<std::optional<TrialRecord>> slots(total);
  std::vector<std::exception_ptr> errors(total);
  std::vector<char> done(total, 0);
  std::mutex mu;
  std::condition_variable cv;
  std::atomic<std::uint64_t> next{0};
  std::atomic<bool> stop{false};

  std::vector<std::thread> pool;
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      while (!stop) {
        const std::uint64_t i = next++;
        if (i >= total) break;
        std::optional<TrialRecord> rec;
        std::exception_ptr err;
        try {
          rec = run_one(i);
        } catch (...) {
          err = std::current_exception();
        }
        {
          std::lock_guard lock(mu);
          slots[i] = std::move(rec);
          errors[i] = err;
          done[i] = 1;
        }
        cv.notify_all();
      }
    });
  }
  auto shutdown = [&] {
    stop = true;
    for (auto& th : pool) th.join();
  };
  try {
    for (std::uint64_t i = 0; i < total; ++i) {
      std::optional<TrialRecord> rec;
      {
        std::unique_lock lock(mu);
        cv.wait(lock, [&] { return done[i] != 0; });
        if (errors[i]) std::rethrow_exception(errors[i]);
        rec = std::move(slots[i]);
        slots[i].reset();
      }
      sink(*rec);
    }
  } catch (...) {
    shutdown();
    throw;
  }
  shutdown();
}

}  // namespace ekrf
