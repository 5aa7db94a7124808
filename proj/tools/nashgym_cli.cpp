// Experiment front-end for the nashgym library. Links only the C API; all
// numerics live behind it. Modes: learn, sweep-k, ftrl-regret, eval, solve.
//
// Exit codes: 0 success, 1 usage/config/file error, 2 invariant or regret
// bound violation.

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <mutex>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "nashgym.h"

namespace {

using nlohmann::json;

class CliError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ViolationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

void check(nashgym_status status, const std::string& context) {
  if (status != NASHGYM_OK) {
    throw CliError(context + ": " + nashgym_status_name(status) + " (" + nashgym_last_error() +
                   ")");
  }
}

template <typename T, void (*FreeFn)(T*)>
struct HandleDeleter {
  void operator()(T* ptr) const { FreeFn(ptr); }
};
using GameHandle = std::unique_ptr<nashgym_game, HandleDeleter<nashgym_game, nashgym_game_free>>;
using PolicyHandle =
    std::unique_ptr<nashgym_policy, HandleDeleter<nashgym_policy, nashgym_policy_free>>;
using ResultHandle = std::unique_ptr<nashgym_learner_result,
                                     HandleDeleter<nashgym_learner_result, nashgym_result_free>>;
using ScheduleHandle =
    std::unique_ptr<nashgym_schedule, HandleDeleter<nashgym_schedule, nashgym_schedule_free>>;

std::string fmt(double value) {
  char buffer[40];
  std::snprintf(buffer, sizeof(buffer), "%.17g", value);
  return buffer;
}

// splitmix64, used only to derive reproducible loss instances.
std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

struct SplitMix {
  std::uint64_t state;
  std::uint64_t next() { return mix64(state += 0x9E3779B97F4A7C15ull); }
  double unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
};

// ---- configuration -------------------------------------------------------

struct Options {
  std::string mode;
  std::string config_path;
  std::string out_path;
  std::string game_path;
  std::string policies_path;
  std::string seeds_arg;
  std::string k_grid_arg;
};

json load_config(const Options& options) {
  if (options.config_path.empty()) return json::object();
  std::ifstream in(options.config_path);
  if (!in.good()) throw CliError("cannot open config " + options.config_path);
  json config = json::parse(in, nullptr, false);
  if (config.is_discarded()) throw CliError("malformed config JSON in " + options.config_path);
  if (!config.is_object()) throw CliError("config root must be a JSON object");
  return config;
}

std::vector<std::int64_t> parse_int_list(const std::string& text, const char* what) {
  std::vector<std::int64_t> out;
  std::stringstream stream(text);
  std::string token;
  while (std::getline(stream, token, ',')) {
    try {
      out.push_back(std::stoll(token));
    } catch (const std::exception&) {
      throw CliError(std::string("cannot parse ") + what + " entry '" + token + "'");
    }
  }
  if (out.empty()) throw CliError(std::string(what) + " list is empty");
  return out;
}

std::vector<std::int64_t> int_list_field(const json& config, const char* name) {
  std::vector<std::int64_t> out;
  for (const json& v : config.at(name)) {
    if (!v.is_number_integer()) throw CliError(std::string(name) + " must hold integers");
    out.push_back(v.get<std::int64_t>());
  }
  if (out.empty()) throw CliError(std::string(name) + " list is empty");
  return out;
}

std::vector<std::int64_t> resolve_seeds(const json& config, const Options& options) {
  if (!options.seeds_arg.empty()) return parse_int_list(options.seeds_arg, "--seeds");
  if (config.contains("seeds")) return int_list_field(config, "seeds");
  throw CliError("no seeds given (config \"seeds\" or --seeds)");
}

std::vector<std::int64_t> resolve_k_grid(const json& config, const Options& options) {
  std::vector<std::int64_t> grid;
  if (!options.k_grid_arg.empty()) {
    grid = parse_int_list(options.k_grid_arg, "--k");
  } else if (config.contains("kGrid")) {
    grid = int_list_field(config, "kGrid");
  } else {
    throw CliError("no K grid given (config \"kGrid\" or --k)");
  }
  for (std::size_t i = 1; i < grid.size(); ++i) {
    if (grid[i] <= grid[i - 1]) throw CliError("kGrid must be strictly increasing");
  }
  return grid;
}

GameHandle resolve_game(const json& config, const Options& options) {
  nashgym_game* raw = nullptr;
  if (!options.game_path.empty()) {
    check(nashgym_game_load(options.game_path.c_str(), &raw), "loading game");
    return GameHandle(raw);
  }
  if (!config.contains("game")) throw CliError("no game given (config \"game\" or --game)");
  const json& spec = config.at("game");
  if (spec.contains("path")) {
    check(nashgym_game_load(spec.at("path").get<std::string>().c_str(), &raw), "loading game");
    return GameHandle(raw);
  }
  const std::string generator = spec.value("generator", "");
  if (generator == "matching-pennies") {
    check(nashgym_game_matching_pennies(&raw), "building matching pennies");
    return GameHandle(raw);
  }
  if (generator == "random") {
    for (const char* key : {"S", "A", "B", "H"}) {
      if (!spec.contains(key)) throw CliError(std::string("random game spec misses ") + key);
    }
    check(nashgym_game_random(spec.at("S").get<int>(), spec.at("A").get<int>(),
                              spec.at("B").get<int>(), spec.at("H").get<int>(),
                              spec.value("seed", 0ull), &raw),
          "building random game");
    return GameHandle(raw);
  }
  throw CliError("game spec needs \"path\" or generator \"matching-pennies\"/\"random\"");
}

nashgym_learner_config resolve_learner(const json& config) {
  nashgym_learner_config learner;
  nashgym_learner_config_init(&learner);
  if (config.contains("learner")) {
    const json& spec = config.at("learner");
    learner.rounds = spec.value("K", learner.rounds);
    learner.c_alpha = spec.value("cAlpha", learner.c_alpha);
    learner.c_bonus = spec.value("cB", learner.c_bonus);
    learner.delta = spec.value("delta", learner.delta);
    learner.record_trace = spec.value("recordTrace", false) ? 1 : 0;
  }
  if (learner.rounds < 2) throw CliError("learner.K must be set and >= 2");
  return learner;
}

int thread_cap(std::size_t tasks) {
  unsigned hw = std::thread::hardware_concurrency();
  if (hw == 0) hw = 1;
  int cap = static_cast<int>(std::min<std::size_t>(hw, tasks));
  if (const char* env = std::getenv("NASHGYM_THREADS")) {
    try {
      cap = std::max(1, std::min(cap, std::stoi(env)));
    } catch (const std::exception&) {
      throw CliError("NASHGYM_THREADS is not an integer");
    }
  }
  return cap;
}

// Runs fn(i) for i in [0, count) on a bounded pool; outputs are stored by
// index, so scheduling never changes any file we write.
template <typename Fn>
void parallel_for(std::size_t count, Fn&& fn) {
  const int threads = thread_cap(count);
  if (threads <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> cursor{0};
  std::atomic<bool> failed{false};
  std::string first_error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (int t = 0; t < threads; ++t) {
    pool.emplace_back([&] {
      for (;;) {
        const std::size_t i = cursor.fetch_add(1);
        if (i >= count || failed.load()) return;
        try {
          fn(i);
        } catch (const std::exception& e) {
          std::lock_guard<std::mutex> lock(error_mutex);
          if (!failed.exchange(true)) first_error = e.what();
          return;
        }
      }
    });
  }
  for (std::thread& t : pool) t.join();
  if (failed.load()) throw CliError(first_error);
}

class OutputWriter {
 public:
  explicit OutputWriter(const std::string& path) {
    if (!path.empty()) {
      file_.open(path, std::ios::trunc);
      if (!file_.good()) throw CliError("cannot open " + path + " for writing");
    }
  }
  std::ostream& stream() { return file_.is_open() ? file_ : std::cout; }

 private:
  std::ofstream file_;
};

// out/mp.csv + "_seed3" -> out/mp_seed3.json
std::string result_json_path(const std::string& out_path, std::int64_t seed) {
  std::string base = out_path;
  const std::size_t dot = base.find_last_of('.');
  const std::size_t slash = base.find_last_of('/');
  if (dot != std::string::npos && (slash == std::string::npos || dot > slash)) {
    base = base.substr(0, dot);
  }
  return base + "_seed" + std::to_string(seed) + ".json";
}

double lower_median(std::vector<double> values) {
  std::sort(values.begin(), values.end());
  return values[(values.size() - 1) / 2];
}

// ---- shared run plumbing ---------------------------------------------------

struct RunRecord {
  std::int64_t k = 0;
  std::int64_t seed = 0;
  double ne_gap = 0.0;
  double max_side = 0.0;
  double min_side = 0.0;
  std::int64_t sample_count = 0;
  double wall_clock_ms = 0.0;
};

RunRecord run_one(const nashgym_game* game, nashgym_learner_config config, std::int64_t k,
                  std::int64_t seed, ResultHandle* result_out) {
  config.rounds = k;
  config.seed = static_cast<std::uint64_t>(seed);
  const auto started = std::chrono::steady_clock::now();
  nashgym_learner_result* raw = nullptr;
  check(nashgym_learner_run(game, &config, &raw), "learner run");
  ResultHandle result(raw);
  RunRecord record;
  record.k = k;
  record.seed = seed;
  record.sample_count = nashgym_result_sample_count(result.get());
  check(nashgym_ne_gap(game, nashgym_result_mu(result.get()), nashgym_result_nu(result.get()),
                       &record.ne_gap, &record.max_side, &record.min_side, nullptr),
        "ne-gap evaluation");
  record.wall_clock_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - started)
          .count();
  if (result_out != nullptr) *result_out = std::move(result);
  return record;
}

// ---- modes -----------------------------------------------------------------

int cmd_learn(const json& config, const Options& options) {
  GameHandle game = resolve_game(config, options);
  const nashgym_learner_config learner = resolve_learner(config);
  const std::vector<std::int64_t> seeds = resolve_seeds(config, options);

  std::vector<RunRecord> records(seeds.size());
  std::vector<ResultHandle> results(seeds.size());
  parallel_for(seeds.size(), [&](std::size_t i) {
    records[i] = run_one(game.get(), learner, learner.rounds, seeds[i], &results[i]);
  });

  OutputWriter out(options.out_path);
  out.stream() << "seed,neGap,maxSideGap,minSideGap,sampleCount,wallClockMs\n";
  for (const RunRecord& r : records) {
    out.stream() << r.seed << ',' << fmt(r.ne_gap) << ',' << fmt(r.max_side) << ','
                 << fmt(r.min_side) << ',' << r.sample_count << ',' << fmt(r.wall_clock_ms)
                 << '\n';
  }
  if (!options.out_path.empty()) {
    for (std::size_t i = 0; i < seeds.size(); ++i) {
      const std::string json_path = result_json_path(options.out_path, seeds[i]);
      check(nashgym_result_save_json(results[i].get(), json_path.c_str()), "saving result");
    }
  }
  return 0;
}

int cmd_sweep_k(const json& config, const Options& options) {
  GameHandle game = resolve_game(config, options);
  const nashgym_learner_config learner = resolve_learner(config);
  const std::vector<std::int64_t> seeds = resolve_seeds(config, options);
  const std::vector<std::int64_t> grid = resolve_k_grid(config, options);

  std::vector<std::pair<std::int64_t, std::int64_t>> tasks;
  for (std::int64_t k : grid) {
    for (std::int64_t seed : seeds) tasks.emplace_back(k, seed);
  }
  std::vector<RunRecord> records(tasks.size());
  parallel_for(tasks.size(), [&](std::size_t i) {
    records[i] = run_one(game.get(), learner, tasks[i].first, tasks[i].second, nullptr);
  });
  std::sort(records.begin(), records.end(), [](const RunRecord& a, const RunRecord& b) {
    return a.k != b.k ? a.k < b.k : a.seed < b.seed;
  });

  OutputWriter out(options.out_path);
  out.stream() << "kind,K,seed,neGap,maxSideGap,minSideGap,sampleCount,wallClockMs\n";
  for (const RunRecord& r : records) {
    out.stream() << "run," << r.k << ',' << r.seed << ',' << fmt(r.ne_gap) << ','
                 << fmt(r.max_side) << ',' << fmt(r.min_side) << ',' << r.sample_count << ','
                 << fmt(r.wall_clock_ms) << '\n';
  }
  for (std::int64_t k : grid) {
    std::vector<double> gaps, max_sides, min_sides;
    std::int64_t samples = 0;
    for (const RunRecord& r : records) {
      if (r.k != k) continue;
      gaps.push_back(r.ne_gap);
      max_sides.push_back(r.max_side);
      min_sides.push_back(r.min_side);
      samples = r.sample_count;
    }
    out.stream() << "median," << k << ",-1," << fmt(lower_median(gaps)) << ','
                 << fmt(lower_median(max_sides)) << ',' << fmt(lower_median(min_sides)) << ','
                 << samples << ",0\n";
  }
  return 0;
}

struct FtrlSettings {
  int actions = 4;
  std::int64_t n = 200;
  double horizon_scale = 1.0;
  double c_alpha = 24.0;
  double max_loss = 1.0;
  std::int64_t instances = 200;
  std::uint64_t seed = 0;
};

std::vector<double> make_losses(const std::string& family, const FtrlSettings& settings,
                                std::int64_t instance) {
  SplitMix rng{mix64(settings.seed + 0x51ED5A1ull) ^ mix64(instance + 1)};
  std::vector<double> losses(static_cast<std::size_t>(settings.n) * settings.actions, 0.0);
  if (family == "constant") {
    const double level = settings.max_loss * rng.unit();
    for (double& x : losses) x = level;
  } else if (family == "random") {
    for (double& x : losses) x = settings.max_loss * rng.unit();
  } else if (family == "spike") {
    // One huge early loss on a single action drives hat_eta_k alpha_k
    // ||loss||_inf above 1/3 and exercises the indicator term of the bound.
    for (double& x : losses) x = 0.1 * settings.max_loss * rng.unit();
    const int hot = static_cast<int>(rng.next() % settings.actions);
    losses[hot] = settings.max_loss;
  } else {
    throw CliError("unknown loss family " + family);
  }
  return losses;
}

int cmd_ftrl_regret(const json& config, const Options& options) {
  FtrlSettings settings;
  if (config.contains("ftrl")) {
    const json& spec = config.at("ftrl");
    settings.actions = spec.value("actions", settings.actions);
    settings.n = spec.value("n", settings.n);
    settings.horizon_scale = spec.value("horizonScale", settings.horizon_scale);
    settings.c_alpha = spec.value("cAlpha", settings.c_alpha);
    settings.max_loss = spec.value("maxLoss", settings.horizon_scale);
    settings.instances = spec.value("instances", settings.instances);
    settings.seed = spec.value("seed", settings.seed);
  }
  if (settings.actions < 1 || settings.n < 1 || settings.instances < 1) {
    throw CliError("ftrl settings must be positive");
  }

  nashgym_schedule* raw_schedule = nullptr;
  check(nashgym_schedule_create(std::max<std::int64_t>(settings.n, 2), settings.c_alpha,
                                settings.horizon_scale, &raw_schedule),
        "building schedule");
  ScheduleHandle schedule(raw_schedule);

  OutputWriter out(options.out_path);
  out.stream() << "family,instance,k,regret_so_far,bound_rhs,variance_term,norm_term\n";
  std::int64_t violations = 0;
  const std::size_t flat = static_cast<std::size_t>(settings.n) * settings.actions;
  std::vector<double> predictions(flat);
  for (const char* family : {"constant", "random", "spike"}) {
    for (std::int64_t instance = 0; instance < settings.instances; ++instance) {
      const std::vector<double> losses = make_losses(family, settings, instance);
      check(nashgym_ftrl_run(schedule.get(), losses.data(), settings.n, settings.actions,
                             predictions.data()),
            "ftrl run");
      for (std::int64_t k = 1; k <= settings.n; ++k) {
        double regret = 0.0, total = 0.0, variance_term = 0.0, log_term = 0.0, norm_term = 0.0;
        check(nashgym_ftrl_weighted_regret(schedule.get(), losses.data(), predictions.data(), k,
                                           settings.actions, &regret, nullptr),
              "weighted regret");
        check(nashgym_ftrl_regret_bound(schedule.get(), losses.data(), predictions.data(), k,
                                        settings.actions, &total, &variance_term, &log_term,
                                        &norm_term),
              "regret bound");
        out.stream() << family << ',' << instance << ',' << k << ',' << fmt(regret) << ','
                     << fmt(total) << ',' << fmt(variance_term) << ',' << fmt(norm_term) << '\n';
        if (regret > total + 1e-9) ++violations;
      }
    }
  }
  if (violations > 0) {
    throw ViolationError("regret exceeded its bound on " + std::to_string(violations) +
                         " rows; this indicates an implementation bug");
  }
  return 0;
}

int cmd_eval(const json& config, const Options& options) {
  GameHandle game = resolve_game(config, options);
  std::string policies_path = options.policies_path;
  if (policies_path.empty() && config.contains("policies")) {
    policies_path = config.at("policies").get<std::string>();
  }
  if (policies_path.empty()) throw CliError("eval needs --policies or config \"policies\"");
  nashgym_policy* raw_mu = nullptr;
  nashgym_policy* raw_nu = nullptr;
  check(nashgym_load_policy_pair(policies_path.c_str(), &raw_mu, &raw_nu), "loading policies");
  PolicyHandle mu(raw_mu), nu(raw_nu);

  int32_t states = 0;
  nashgym_game_dims(game.get(), &states, nullptr, nullptr, nullptr);
  double gap = 0.0, max_side = 0.0, min_side = 0.0;
  std::vector<double> per_state(states);
  check(nashgym_ne_gap(game.get(), mu.get(), nu.get(), &gap, &max_side, &min_side,
                       per_state.data()),
        "ne-gap evaluation");

  OutputWriter out(options.out_path);
  out.stream() << "{\"gap\":" << fmt(gap) << ",\"maxSide\":" << fmt(max_side)
               << ",\"minSide\":" << fmt(min_side) << ",\"perState\":[";
  for (int s = 0; s < states; ++s) out.stream() << (s ? "," : "") << fmt(per_state[s]);
  out.stream() << "]}\n";
  return 0;
}

void print_policy_json(std::ostream& out, const nashgym_policy* policy) {
  int32_t horizon = 0, states = 0, actions = 0;
  nashgym_policy_dims(policy, &horizon, &states, &actions);
  out << '[';
  for (int h = 0; h < horizon; ++h) {
    out << (h ? ",[" : "[");
    for (int s = 0; s < states; ++s) {
      out << (s ? ",[" : "[");
      for (int a = 0; a < actions; ++a) {
        out << (a ? "," : "") << fmt(nashgym_policy_prob(policy, h, s, a));
      }
      out << ']';
    }
    out << ']';
  }
  out << ']';
}

int cmd_solve(const json& config, const Options& options) {
  GameHandle game = resolve_game(config, options);
  int32_t states = 0, horizon = 0;
  nashgym_game_dims(game.get(), &states, nullptr, nullptr, &horizon);
  nashgym_policy* raw_mu = nullptr;
  nashgym_policy* raw_nu = nullptr;
  std::vector<double> values(static_cast<std::size_t>(horizon + 1) * states);
  check(nashgym_solve_nash(game.get(), &raw_mu, &raw_nu, values.data()), "solving game");
  PolicyHandle mu(raw_mu), nu(raw_nu);

  OutputWriter out(options.out_path);
  out.stream() << "{\"value\":[";
  for (int h = 0; h <= horizon; ++h) {
    out.stream() << (h ? ",[" : "[");
    for (int s = 0; s < states; ++s) {
      out.stream() << (s ? "," : "") << fmt(values[static_cast<std::size_t>(h) * states + s]);
    }
    out.stream() << ']';
  }
  out.stream() << "],\"muStar\":";
  print_policy_json(out.stream(), mu.get());
  out.stream() << ",\"nuStar\":";
  print_policy_json(out.stream(), nu.get());
  out.stream() << "}\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  Options options;
  CLI::App app{"nashgym: zero-sum Markov game learning experiments"};
  app.add_option("mode", options.mode, "one of learn, sweep-k, ftrl-regret, eval, solve")
      ->required();
  app.add_option("--config", options.config_path, "JSON config file");
  app.add_option("--out", options.out_path, "output file (default stdout)");
  app.add_option("--game", options.game_path, "game file, overrides config game.path");
  app.add_option("--policies", options.policies_path, "policy-pair JSON (eval mode)");
  app.add_option("--seeds", options.seeds_arg, "comma-separated seed list, overrides config");
  app.add_option("--k", options.k_grid_arg, "comma-separated K grid, overrides config");
  CLI11_PARSE(app, argc, argv);

  try {
    const json config = load_config(options);
    if (options.mode == "learn") return cmd_learn(config, options);
    if (options.mode == "sweep-k") return cmd_sweep_k(config, options);
    if (options.mode == "ftrl-regret") return cmd_ftrl_regret(config, options);
    if (options.mode == "eval") return cmd_eval(config, options);
    if (options.mode == "solve") return cmd_solve(config, options);
    std::cerr << "error: unknown mode '" << options.mode << "'\n";
    return 1;
  } catch (const ViolationError& e) {
    std::cerr << "violation: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
