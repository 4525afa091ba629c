#include "resched/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <exception>
#include <fstream>
#include <mutex>
#include <set>
#include <sstream>
#include <stdexcept>
#include <system_error>
#include <thread>

#include "json.hpp"

namespace resched {

namespace {

using json = nlohmann::json;

const char* const kResultsHeader =
    "scheduler,alpha,heuristic,N,T,D,R,n_slots,n_iterations,master_seed,f_cst_mean,f_cst_stderr";

bool is_solver_id(std::string_view id) { return id.starts_with("ols-") || id.starts_with("olt-"); }

void reject_unknown(const json& obj, const std::string& path,
                    std::initializer_list<std::string_view> allowed) {
  if (!obj.is_object()) throw ConfigError(path, "expected an object");
  for (const auto& [key, value] : obj.items()) {
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end())
      throw ConfigError(path.empty() ? key : path + "." + key, "unknown key");
  }
}

std::string join(const std::string& path, std::string_view key) {
  return path.empty() ? std::string(key) : path + "." + std::string(key);
}

template <typename Int>
void read_int(const json& obj, const std::string& path, std::string_view key, Int& out) {
  const auto it = obj.find(key);
  if (it == obj.end()) return;
  if (!it->is_number_integer()) throw ConfigError(join(path, key), "expected an integer");
  if constexpr (std::is_unsigned_v<Int>) {
    if (it->is_number_unsigned()) {
      out = it->template get<Int>();
      return;
    }
    if (it->template get<std::int64_t>() < 0)
      throw ConfigError(join(path, key), "must be non-negative");
  }
  out = it->template get<Int>();
}

void read_double(const json& obj, const std::string& path, std::string_view key, double& out) {
  const auto it = obj.find(key);
  if (it == obj.end()) return;
  if (!it->is_number()) throw ConfigError(join(path, key), "expected a number");
  out = it->get<double>();
}

void read_bool(const json& obj, const std::string& path, std::string_view key, bool& out) {
  const auto it = obj.find(key);
  if (it == obj.end()) return;
  if (!it->is_boolean()) throw ConfigError(join(path, key), "expected a boolean");
  out = it->get<bool>();
}

void read_path(const json& obj, const std::string& path, std::string_view key,
               std::optional<std::filesystem::path>& out) {
  const auto it = obj.find(key);
  if (it == obj.end()) return;
  if (it->is_null()) {
    out.reset();
    return;
  }
  if (!it->is_string()) throw ConfigError(join(path, key), "expected a string or null");
  out = it->get<std::string>();
}

}  // namespace

std::string format_double(double value) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, res.ptr);
}

void ExperimentConfig::validate() const {
  if (n_agents == 0) throw ConfigError("agents.n_agents", "must be positive");
  if (period_T < 1) throw ConfigError("agents.period_T", "must be positive");
  if (lifetime_D < 1 || lifetime_D > period_T)
    throw ConfigError("agents.lifetime_D", "must lie in [1, period_T]");
  if (resilience_R.empty()) throw ConfigError("agents.resilience_R", "must not be empty");
  std::set<Slot> seen_r;
  for (Slot r : resilience_R) {
    if (r < 1) throw ConfigError("agents.resilience_R", "entries must be positive");
    if (!seen_r.insert(r).second) throw ConfigError("agents.resilience_R", "duplicate entry");
  }
  if (!(p_lo > 0.0 && p_hi < 1.0 && (p_lo < p_hi || n_agents == 1)))
    throw ConfigError("channel.p_lo", "require 0 < p_lo < p_hi < 1");
  if (!(jitter_factor >= 1.0)) throw ConfigError("channel.jitter_factor", "must be >= 1");
  if (n_slots < 1) throw ConfigError("run.n_slots", "must be positive");
  if (n_iterations < 1) throw ConfigError("run.n_iterations", "must be at least 1");
  if (slope_window < 2 || static_cast<Slot>(slope_window) > n_slots)
    throw ConfigError("run.slope_window", "must lie in [2, n_slots]");
  if (schedulers.empty()) throw ConfigError("schedulers", "must list at least one scheduler");
  std::set<std::pair<std::string, double>> seen;
  for (std::size_t i = 0; i < schedulers.size(); ++i) {
    const auto& entry = schedulers[i];
    const std::string path = "schedulers[" + std::to_string(i) + "]";
    try {
      SchedulerSpec::parse(entry.id, 0.0);
    } catch (const ConfigError& e) {
      throw ConfigError(path + ".id", e.what());
    }
    if (is_solver_id(entry.id)) {
      if (entry.alphas.empty()) throw ConfigError(path + ".alpha", "must not be empty");
      for (double a : entry.alphas) {
        if (!(a <= 0.0)) throw ConfigError(path + ".alpha", "solvers support alpha <= 0");
        if (!seen.insert({entry.id, a}).second)
          throw ConfigError(path, "duplicate scheduler variant");
      }
    } else {
      if (!(entry.alphas.empty() || (entry.alphas.size() == 1 && entry.alphas[0] == 0.0)))
        throw ConfigError(path + ".alpha", "baselines take no alpha");
      if (!seen.insert({entry.id, 0.0}).second)
        throw ConfigError(path, "duplicate scheduler variant");
    }
  }
}

ExperimentConfig default_config() {
  ExperimentConfig config;
  config.schedulers = {
      {"ols-r", {0.0}},
      {"olt-r", {0.0, -1.0, -2.0, -5.0}},
      {"olt-q", {0.0, -1.0, -2.0, -5.0}},
      {"round-robin", {}},
      {"pf-like", {}},
  };
  config.plot_dir = "plots";
  return config;
}

ExperimentConfig parse_config(std::string_view json_text) {
  json root;
  try {
    root = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError("<root>", std::string("malformed JSON: ") + e.what());
  }
  reject_unknown(root, "", {"agents", "channel", "run", "model", "schedulers", "output"});
  ExperimentConfig config;

  if (auto it = root.find("agents"); it != root.end()) {
    reject_unknown(*it, "agents", {"n_agents", "period_T", "lifetime_D", "resilience_R"});
    read_int(*it, "agents", "n_agents", config.n_agents);
    read_int(*it, "agents", "period_T", config.period_T);
    read_int(*it, "agents", "lifetime_D", config.lifetime_D);
    if (auto r = it->find("resilience_R"); r != it->end()) {
      if (!r->is_array()) throw ConfigError("agents.resilience_R", "expected an array");
      config.resilience_R.clear();
      for (const auto& v : *r) {
        if (!v.is_number_integer())
          throw ConfigError("agents.resilience_R", "entries must be integers");
        config.resilience_R.push_back(v.get<Slot>());
      }
    }
  }
  if (auto it = root.find("channel"); it != root.end()) {
    reject_unknown(*it, "channel", {"p_lo", "p_hi", "jitter_factor", "spacing"});
    read_double(*it, "channel", "p_lo", config.p_lo);
    read_double(*it, "channel", "p_hi", config.p_hi);
    read_double(*it, "channel", "jitter_factor", config.jitter_factor);
    if (auto sp = it->find("spacing"); sp != it->end()) {
      if (*sp == "log")
        config.spacing = MeanSpacing::Log;
      else if (*sp == "linear")
        config.spacing = MeanSpacing::Linear;
      else
        throw ConfigError("channel.spacing", "expected \"log\" or \"linear\"");
    }
  }
  if (auto it = root.find("run"); it != root.end()) {
    reject_unknown(*it, "run",
                   {"n_slots", "n_iterations", "master_seed", "worker_count", "slope_window"});
    read_int(*it, "run", "n_slots", config.n_slots);
    read_int(*it, "run", "n_iterations", config.n_iterations);
    read_int(*it, "run", "master_seed", config.master_seed);
    read_int(*it, "run", "worker_count", config.worker_count);
    read_int(*it, "run", "slope_window", config.slope_window);
  }
  if (auto it = root.find("model"); it != root.end()) {
    reject_unknown(*it, "model",
                   {"consume_on_success", "floor_history", "redraw_channel_per_slot"});
    read_bool(*it, "model", "consume_on_success", config.consume_on_success);
    read_bool(*it, "model", "floor_history", config.floor_history);
    read_bool(*it, "model", "redraw_channel_per_slot", config.redraw_channel_per_slot);
  }
  if (auto it = root.find("schedulers"); it != root.end()) {
    if (!it->is_array()) throw ConfigError("schedulers", "expected an array");
    for (std::size_t i = 0; i < it->size(); ++i) {
      const json& e = (*it)[i];
      const std::string path = "schedulers[" + std::to_string(i) + "]";
      reject_unknown(e, path, {"id", "alpha"});
      auto id = e.find("id");
      if (id == e.end() || !id->is_string()) throw ConfigError(path + ".id", "expected a string");
      SchedulerEntry entry{id->get<std::string>(), {}};
      if (auto a = e.find("alpha"); a != e.end()) {
        if (a->is_number()) {
          entry.alphas.push_back(a->get<double>());
        } else if (a->is_array()) {
          for (const auto& v : *a) {
            if (!v.is_number()) throw ConfigError(path + ".alpha", "entries must be numbers");
            entry.alphas.push_back(v.get<double>());
          }
        } else {
          throw ConfigError(path + ".alpha", "expected a number or an array");
        }
      } else if (is_solver_id(entry.id)) {
        entry.alphas.push_back(0.0);
      }
      config.schedulers.push_back(std::move(entry));
    }
  }
  if (auto it = root.find("output"); it != root.end()) {
    reject_unknown(*it, "output", {"results_path", "plot_dir", "trace_dir"});
    std::optional<std::filesystem::path> results;
    read_path(*it, "output", "results_path", results);
    if (results) config.results_path = *results;
    read_path(*it, "output", "plot_dir", config.plot_dir);
    read_path(*it, "output", "trace_dir", config.trace_dir);
  }
  config.validate();
  return config;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

std::string dump_config(const ExperimentConfig& config) {
  json root;
  root["agents"] = {{"n_agents", config.n_agents},
                    {"period_T", config.period_T},
                    {"lifetime_D", config.lifetime_D},
                    {"resilience_R", config.resilience_R}};
  root["channel"] = {
      {"p_lo", config.p_lo},
      {"p_hi", config.p_hi},
      {"jitter_factor", config.jitter_factor},
      {"spacing", config.spacing == MeanSpacing::Log ? "log" : "linear"}};
  root["run"] = {{"n_slots", config.n_slots},
                 {"n_iterations", config.n_iterations},
                 {"master_seed", config.master_seed},
                 {"worker_count", config.worker_count},
                 {"slope_window", config.slope_window}};
  root["model"] = {{"consume_on_success", config.consume_on_success},
                   {"floor_history", config.floor_history},
                   {"redraw_channel_per_slot", config.redraw_channel_per_slot}};
  root["schedulers"] = json::array();
  for (const auto& e : config.schedulers) {
    json entry = {{"id", e.id}};
    if (!e.alphas.empty()) entry["alpha"] = e.alphas;
    root["schedulers"].push_back(entry);
  }
  auto opt = [](const std::optional<std::filesystem::path>& p) {
    return p ? json(p->string()) : json(nullptr);
  };
  root["output"] = {{"results_path", config.results_path.string()},
                    {"plot_dir", opt(config.plot_dir)},
                    {"trace_dir", opt(config.trace_dir)}};
  return root.dump(2) + "\n";
}

std::vector<Variant> expand_variants(const ExperimentConfig& config) {
  std::vector<Variant> out;
  for (const auto& entry : config.schedulers) {
    const std::vector<double> alphas =
        is_solver_id(entry.id) ? entry.alphas : std::vector<double>{0.0};
    for (double alpha : alphas) {
      Variant v;
      v.spec = SchedulerSpec::parse(entry.id, alpha);
      v.spec.utility.floor_history = config.floor_history;
      v.scheduler = entry.id;
      v.alpha = v.spec.utility.alpha;
      v.heuristic = !v.spec.uses_utility() ? "-"
                    : v.spec.utility.heuristic == Heuristic::R ? "R"
                                                               : "Q";
      out.push_back(std::move(v));
    }
  }
  return out;
}

IterationConfig iteration_config(const ExperimentConfig& config, const Variant& variant, Slot R,
                                 std::uint64_t iteration_index) {
  IterationConfig it;
  it.n_agents = config.n_agents;
  it.n_slots = config.n_slots;
  it.period_T = config.period_T;
  it.lifetime_D = config.lifetime_D;
  it.resilience_R = R;
  it.scheduler = variant.spec;
  it.master_seed = config.master_seed;
  it.iteration_index = iteration_index;
  it.p_lo = config.p_lo;
  it.p_hi = config.p_hi;
  it.jitter_factor = config.jitter_factor;
  it.spacing = config.spacing;
  it.consume_on_success = config.consume_on_success;
  it.redraw_channel_per_slot = config.redraw_channel_per_slot;
  return it;
}

std::string variant_stem(std::string_view scheduler, double alpha, bool uses_utility) {
  std::string stem(scheduler);
  if (uses_utility) stem += "_alpha" + format_double(alpha);
  return stem;
}

ResultsTable run_experiment(const ExperimentConfig& config) {
  config.validate();
  const std::vector<Variant> variants = expand_variants(config);

  struct Cell {
    const Variant* variant;
    Slot R;
  };
  std::vector<Cell> cells;
  for (const auto& v : variants)
    for (Slot r : config.resilience_R) cells.push_back({&v, r});

  const std::size_t n_iter = config.n_iterations;
  const std::size_t n_tasks = cells.size() * n_iter;
  std::vector<RunSummary> summaries(n_tasks);
  std::vector<IterationTrace> traces(config.trace_dir ? cells.size() : 0);

  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (;;) {
      const std::size_t task = next.fetch_add(1);
      if (task >= n_tasks) return;
      const std::size_t cell_index = task / n_iter;
      const std::size_t iter = task % n_iter;
      const Cell& cell = cells[cell_index];
      try {
        IterationConfig it = iteration_config(config, *cell.variant, cell.R, iter);
        it.record_log = config.trace_dir.has_value() && iter == 0;
        IterationTrace trace = run_iteration(it);
        RunSummary& s = summaries[task];
        s.scheduler_id = cell.variant->scheduler;
        s.alpha = cell.variant->alpha;
        s.heuristic = cell.variant->heuristic;
        s.resilience_R = cell.R;
        s.f_cst = steady_slope(std::span<const std::int64_t>(trace.s_series), config.slope_window);
        s.final_S = trace.s_series.back();
        s.n_slots = config.n_slots;
        if (it.record_log) traces[cell_index] = std::move(trace);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next.store(n_tasks);
        return;
      }
    }
  };

  std::size_t workers = config.worker_count;
  if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
  workers = std::min(workers, std::max<std::size_t>(n_tasks, 1));
  {
    std::vector<std::jthread> pool;
    for (std::size_t w = 1; w < workers; ++w) pool.emplace_back(worker);
    worker();
  }
  if (failure) std::rethrow_exception(failure);

  ResultsTable table;
  table.reserve(cells.size());
  for (std::size_t c = 0; c < cells.size(); ++c) {
    const Aggregate agg =
        aggregate(std::span<const RunSummary>(summaries).subspan(c * n_iter, n_iter));
    ResultRow row;
    row.scheduler = cells[c].variant->scheduler;
    row.alpha = cells[c].variant->alpha;
    row.heuristic = cells[c].variant->heuristic;
    row.n_agents = config.n_agents;
    row.period_T = config.period_T;
    row.lifetime_D = config.lifetime_D;
    row.resilience_R = cells[c].R;
    row.n_slots = config.n_slots;
    row.n_iterations = n_iter;
    row.master_seed = config.master_seed;
    row.f_cst_mean = agg.mean;
    row.f_cst_stderr = agg.std_error;
    table.push_back(std::move(row));
  }

  if (config.trace_dir) {
    std::filesystem::create_directories(*config.trace_dir);
    for (std::size_t c = 0; c < cells.size(); ++c) {
      const Variant& v = *cells[c].variant;
      const auto path = *config.trace_dir / (variant_stem(v.scheduler, v.alpha, v.spec.uses_utility()) +
                                             "_R" + std::to_string(cells[c].R) + ".csv");
      std::ofstream out(path, std::ios::binary);
      if (!out) throw std::runtime_error("cannot write trace file " + path.string());
      write_trace_csv(traces[c], out);
    }
  }

  sort_results(table);
  return table;
}

void sort_results(ResultsTable& table) {
  std::stable_sort(table.begin(), table.end(), [](const ResultRow& a, const ResultRow& b) {
    if (a.scheduler != b.scheduler) return a.scheduler < b.scheduler;
    if (a.alpha != b.alpha) return a.alpha < b.alpha;
    return a.resilience_R < b.resilience_R;
  });
}

void write_results(const ResultsTable& table, std::ostream& out) {
  out << kResultsHeader << '\n';
  for (const auto& r : table) {
    out << r.scheduler << ',' << format_double(r.alpha) << ',' << r.heuristic << ',' << r.n_agents
        << ',' << r.period_T << ',' << r.lifetime_D << ',' << r.resilience_R << ',' << r.n_slots
        << ',' << r.n_iterations << ',' << r.master_seed << ',' << format_double(r.f_cst_mean)
        << ',' << format_double(r.f_cst_stderr) << '\n';
  }
}

void emit_results(const ResultsTable& table, const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write results file " + path.string());
  write_results(table, out);
  if (!out) throw std::runtime_error("write failed for " + path.string());
}

namespace {

template <typename T>
T parse_field(std::string_view text, std::string_view name) {
  T value{};
  const auto res = std::from_chars(text.data(), text.data() + text.size(), value);
  if (res.ec != std::errc() || res.ptr != text.data() + text.size())
    throw std::runtime_error("results: bad value for " + std::string(name) + ": '" +
                             std::string(text) + "'");
  return value;
}

}  // namespace

ResultsTable read_results(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != kResultsHeader)
    throw std::runtime_error("results: missing or unexpected header");
  ResultsTable table;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string_view> f;
    std::string_view rest(line);
    for (;;) {
      const auto pos = rest.find(',');
      f.push_back(rest.substr(0, pos));
      if (pos == std::string_view::npos) break;
      rest.remove_prefix(pos + 1);
    }
    if (f.size() != 12) throw std::runtime_error("results: expected 12 fields per row");
    ResultRow r;
    r.scheduler = std::string(f[0]);
    r.alpha = parse_field<double>(f[1], "alpha");
    r.heuristic = std::string(f[2]);
    r.n_agents = parse_field<std::size_t>(f[3], "N");
    r.period_T = parse_field<Slot>(f[4], "T");
    r.lifetime_D = parse_field<Slot>(f[5], "D");
    r.resilience_R = parse_field<Slot>(f[6], "R");
    r.n_slots = parse_field<Slot>(f[7], "n_slots");
    r.n_iterations = parse_field<std::size_t>(f[8], "n_iterations");
    r.master_seed = parse_field<std::uint64_t>(f[9], "master_seed");
    r.f_cst_mean = parse_field<double>(f[10], "f_cst_mean");
    r.f_cst_stderr = parse_field<double>(f[11], "f_cst_stderr");
    table.push_back(std::move(r));
  }
  return table;
}

std::vector<std::filesystem::path> emit_plot_data(const ResultsTable& table,
                                                  const std::filesystem::path& dir) {
  ResultsTable sorted = table;
  sort_results(sorted);
  std::filesystem::create_directories(dir);
  std::vector<std::filesystem::path> written;
  std::size_t i = 0;
  while (i < sorted.size()) {
    std::size_t j = i;
    while (j < sorted.size() && sorted[j].scheduler == sorted[i].scheduler &&
           sorted[j].alpha == sorted[i].alpha)
      ++j;
    const auto path =
        dir / (variant_stem(sorted[i].scheduler, sorted[i].alpha, is_solver_id(sorted[i].scheduler)) +
               ".csv");
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write plot file " + path.string());
    out << "R,f_cst_mean,f_cst_stderr\n";
    for (std::size_t k = i; k < j; ++k)
      out << sorted[k].resilience_R << ',' << format_double(sorted[k].f_cst_mean) << ','
          << format_double(sorted[k].f_cst_stderr) << '\n';
    written.push_back(path);
    i = j;
  }
  return written;
}

}  // namespace resched
