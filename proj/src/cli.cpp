#include "flexics/cli.hpp"

#include <chrono>
#include <condition_variable>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <mutex>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "json.hpp"

#include "flexics/check.hpp"
#include "flexics/data.hpp"
#include "flexics/eval.hpp"
#include "flexics/measures.hpp"
#include "flexics/oracle_cp.hpp"
#include "flexics/oracle_eclat.hpp"
#include "flexics/util.hpp"
#include "flexics/weightgen.hpp"

namespace flexics {

namespace {

using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitUnsat = 2;
constexpr int kExitUnsound = 3;

struct SoundnessError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct TaskConfig {
  std::string dataset;
  std::string format = "fimi";
  std::string oracle = "eclat";
  std::string constraints_text;
  bool tiling = false;
  std::string measure = "uniform";
  double kappa = 0.9;
  std::uint64_t seed = 1;
  std::size_t n_samples = 100;
  int jobs = 1;
  std::string output;
};

Constraints parse_constraints(const std::string& text, int num_transactions) {
  double theta = -1.0;
  bool closed = false;
  int minlen = 0;
  std::stringstream parts(text);
  std::string item;
  while (std::getline(parts, item, ',')) {
    if (item.empty()) continue;
    const auto eq = item.find('=');
    const std::string name = item.substr(0, eq);
    if (name == "minfreq") {
      if (eq == std::string::npos) throw ConfigError("minfreq needs a value");
      theta = std::stod(item.substr(eq + 1));
    } else if (name == "closed") {
      closed = true;
    } else if (name == "minlen") {
      if (eq == std::string::npos) throw ConfigError("minlen needs a value");
      minlen = std::stoi(item.substr(eq + 1));
      if (minlen < 1) throw ConfigError("minlen must be >= 1");
    } else {
      throw ConfigError("unknown constraint '" + name + "'");
    }
  }
  if (theta < 0.0) throw ConfigError("the constraint set must include minfreq");
  return Constraints::from_fraction(theta, num_transactions, closed, minlen);
}

// Loaded dataset plus everything derived from the task configuration.
struct Task {
  TaskConfig config;
  TransactionDatabase db;
  VerticalIndex index;
  Constraints constraints;
  MeasureSpec measure;
  std::unique_ptr<BoundedOracle> oracle;
  int k = 1;
};

Task build_task(const TaskConfig& config) {
  Task task;
  task.config = config;

  std::ifstream in(config.dataset);
  if (!in) throw ConfigError("cannot open dataset '" + config.dataset + "'");
  if (config.format == "fimi") {
    task.db = parse_fimi(in);
  } else if (config.format == "cp4im") {
    task.db = parse_cp4im(in);
  } else {
    throw ConfigError("unknown format '" + config.format + "'");
  }

  task.constraints = parse_constraints(config.constraints_text, task.db.num_transactions);

  const MeasureKind kind = parse_measure_kind(config.measure);
  if (config.tiling) {
    if (config.oracle != "cp") throw ConfigError("tiling mode requires the cp oracle");
    if (kind != MeasureKind::area && kind != MeasureKind::uniform)
      throw ConfigError("tiling mode supports the area or uniform measure");
  } else {
    if (kind == MeasureKind::area) throw ConfigError("the area measure requires --tiling");
  }
  if (kind == MeasureKind::purity && config.format != "cp4im")
    throw ConfigError("purity requires the labeled cp4im format");

  task.measure = measure_spec(kind, task.db, task.constraints);

  if (config.oracle == "eclat") {
    if (task.constraints.closed || task.constraints.minlen > 0)
      throw ConfigError("the eclat oracle supports only the minfreq constraint");
    task.index = build_vertical_index(task.db);
    task.oracle = std::make_unique<EclatOracle>(task.db, task.index,
                                                task.constraints.minfreq_abs, task.measure);
  } else if (config.oracle == "cp") {
    const MiningCsp csp = config.tiling ? build_tiling_csp(task.db, task.constraints)
                                        : build_itemset_csp(task.db, task.constraints);
    task.k = csp.k;
    task.oracle = std::make_unique<CpOracle>(csp, task.measure);
  } else {
    throw ConfigError("unknown oracle '" + config.oracle + "'");
  }
  return task;
}

std::vector<int> to_original_ids(const TransactionDatabase& db, const Bitset& pattern) {
  std::vector<int> out;
  for (int i = pattern.find_first(); i >= 0; i = pattern.find_next(i))
    out.push_back(db.original_ids[std::size_t(i)]);
  return out;
}

json solution_json(const Task& task, const Bitset& item_vars, double quality, double weight_value,
                   bool include_weight) {
  json line;
  if (task.k == 1) {
    line["items"] = to_original_ids(task.db, item_vars);
    line["quality"] = quality;
  } else {
    auto patterns = split_solution(item_vars, task.k, task.db.num_items);
    json arr = json::array();
    for (const auto& p : patterns) arr.push_back(to_original_ids(task.db, p));
    line["patterns"] = arr;
    line["area"] = quality;
  }
  if (include_weight) line["weight"] = weight_value;
  return line;
}

json estimation_json(const EstimationResult& est) {
  json trace = json::array();
  for (const auto& it : est.trace) {
    trace.push_back({{"cell_weight", it.cell_weight},
                     {"estimate", it.estimate},
                     {"iteration", it.iteration},
                     {"n_xors", it.n_xors},
                     {"restarts", it.restarts}});
  }
  return {{"converged_early", est.converged_early},
          {"iterations", int(est.trace.size())},
          {"n_xor_initial", est.n_xor_initial},
          {"total_weight_estimate", est.total_weight_estimate},
          {"trace", trace},
          {"w_max_hat", est.w_max_hat},
          {"w_min_observed", est.w_min_observed}};
}

std::ostream& open_output(const TaskConfig& config, std::ofstream& file) {
  if (config.output.empty()) return std::cout;
  file.open(config.output);
  if (!file) throw ConfigError("cannot open output '" + config.output + "'");
  return file;
}

void recheck_or_throw(const Task& task, const Bitset& item_vars) {
  const auto patterns = split_solution(item_vars, task.k, task.db.num_items);
  const CheckReport report =
      check_solution(task.db, task.constraints, task.config.tiling, patterns);
  if (!report.ok) throw SoundnessError("emitted sample failed validation: " + report.violation);
}

int cmd_sample(const TaskConfig& config) {
  const auto started = std::chrono::steady_clock::now();
  Task task = build_task(config);
  std::ofstream file;
  std::ostream& out = open_output(config, file);

  Sampler sampler(*task.oracle, task.measure, SamplerParams::from_kappa(config.kappa),
                  config.seed);
  const EstimationResult est = sampler.estimate_total_weight();

  // Workers deposit finished lines; the flusher writes them strictly in
  // sample-index order so output bytes do not depend on --jobs.
  std::mutex mu;
  std::map<std::size_t, std::string> pending;
  std::size_t next_to_write = 0;
  std::size_t failures = 0;
  std::atomic<std::size_t> next_index{0};
  std::exception_ptr worker_error;

  auto worker = [&]() {
    while (true) {
      const std::size_t i = next_index.fetch_add(1);
      if (i >= config.n_samples) break;
      try {
        const SampleResult res = sampler.generate_one_sample(est, i);
        std::string line;
        if (res.success) {
          recheck_or_throw(task, res.item_vars);
          json j = solution_json(task, res.item_vars, res.quality, res.weight, true);
          j["cell_size"] = res.cell_size;
          line = j.dump();
        }
        std::lock_guard<std::mutex> lock(mu);
        if (!res.success) ++failures;
        pending.emplace(i, std::move(line));
        while (!pending.empty() && pending.begin()->first == next_to_write) {
          if (!pending.begin()->second.empty()) out << pending.begin()->second << '\n';
          pending.erase(pending.begin());
          ++next_to_write;
        }
      } catch (...) {
        std::lock_guard<std::mutex> lock(mu);
        if (!worker_error) worker_error = std::current_exception();
        next_index.store(config.n_samples);
        break;
      }
    }
  };

  const int jobs = std::max(1, config.jobs);
  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int j = 0; j < jobs; ++j) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  if (worker_error) std::rethrow_exception(worker_error);

  json summary = {{"estimation", estimation_json(est)},
                  {"failures", failures},
                  {"n_accepted", config.n_samples - failures},
                  {"n_requested", config.n_samples}};
  out << summary.dump() << '\n';
  out.flush();

  if (config.n_samples > 0 && failures == config.n_samples)
    log_line(LogLevel::warn,
             "every attempt failed: the task's total weight likely sits below the "
             "acceptance band (estimate reported " +
                 std::to_string(est.total_weight_estimate) +
                 "); tiny tasks are better served by enumerate");

  const auto elapsed =
      std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - started);
  log_line(LogLevel::info, "sample: wall-clock " + std::to_string(elapsed.count()) + " ms");
  return kExitOk;
}

int cmd_estimate(const TaskConfig& config) {
  const auto started = std::chrono::steady_clock::now();
  Task task = build_task(config);
  std::ofstream file;
  std::ostream& out = open_output(config, file);

  Sampler sampler(*task.oracle, task.measure, SamplerParams::from_kappa(config.kappa),
                  config.seed);
  const EstimationResult est = sampler.estimate_total_weight();
  out << estimation_json(est).dump() << '\n';
  out.flush();

  const auto elapsed =
      std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - started);
  log_line(LogLevel::info, "estimate: wall-clock " + std::to_string(elapsed.count()) + " ms");
  return kExitOk;
}

int cmd_enumerate(const TaskConfig& config) {
  Task task = build_task(config);
  std::ofstream file;
  std::ostream& out = open_output(config, file);

  const Cell cell = task.oracle->solve_bounded({}, kNoCap);
  if (cell.solutions.empty())
    throw UnsatisfiableTaskError("the constrained task has no solutions");

  KahanSum z;
  for (const auto& s : cell.solutions) {
    recheck_or_throw(task, s.item_vars);
    out << solution_json(task, s.item_vars, s.quality, 0.0, false).dump() << '\n';
    z.add(s.quality);
  }
  json summary = {{"count", cell.solutions.size()}, {"z", z.value()}};
  out << summary.dump() << '\n';
  out.flush();
  return kExitOk;
}

// Canonical key for a parsed JSON solution line: sorted ids joined by
// commas, tiling constituents separated by '|' in file order.
std::string key_of_line(const json& line) {
  std::ostringstream key;
  if (line.contains("items")) {
    std::vector<int> ids = line["items"].get<std::vector<int>>();
    std::sort(ids.begin(), ids.end());
    for (std::size_t i = 0; i < ids.size(); ++i) {
      if (i) key << ',';
      key << ids[i];
    }
  } else {
    const auto& patterns = line["patterns"];
    for (std::size_t p = 0; p < patterns.size(); ++p) {
      if (p) key << '|';
      std::vector<int> ids = patterns[p].get<std::vector<int>>();
      std::sort(ids.begin(), ids.end());
      for (std::size_t i = 0; i < ids.size(); ++i) {
        if (i) key << ',';
        key << ids[i];
      }
    }
  }
  return key.str();
}

bool is_solution_line(const json& line) {
  return line.contains("items") || line.contains("patterns");
}

double quality_of_line(const json& line) {
  if (line.contains("quality")) return line["quality"].get<double>();
  if (line.contains("area")) return line["area"].get<double>();
  throw ConfigError("enumeration line lacks a quality");
}

std::vector<json> read_json_lines(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open '" + path + "'");
  std::vector<json> lines;
  std::string text;
  while (std::getline(in, text)) {
    if (text.empty()) continue;
    lines.push_back(json::parse(text));
  }
  return lines;
}

int cmd_evaluate(const std::string& samples_path, const std::string& enumeration_path,
                 double factor, const std::string& output) {
  std::vector<std::string> keys;
  std::vector<double> qualities;
  for (const auto& line : read_json_lines(enumeration_path)) {
    if (!is_solution_line(line)) continue;
    keys.push_back(key_of_line(line));
    qualities.push_back(quality_of_line(line));
  }
  const TargetDistribution target = make_target(std::move(keys), std::move(qualities));

  EmpiricalDistribution empirical;
  for (const auto& line : read_json_lines(samples_path)) {
    if (!is_solution_line(line)) continue;
    const std::string key = key_of_line(line);
    if (!target.index.count(key))
      throw SoundnessError("sampled solution '" + key + "' is not in the enumeration");
    empirical.add(key);
  }

  const auto [kl_t_m, kl_e_m] = js_divergence_parts(target, empirical);
  json per_pattern = json::array();
  {
    std::vector<std::size_t> order(target.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return target.support[a] < target.support[b];
    });
    for (std::size_t i : order) {
      per_pattern.push_back({{"empirical", empirical.probability(target.support[i])},
                             {"key", target.support[i]},
                             {"target", target.probabilities[i]}});
    }
  }
  json doc = {{"factor", factor},
              {"factor2_fraction", factor_band_profile(target, empirical, 2.0)},
              {"factor_fraction", factor_band_profile(target, empirical, factor)},
              {"js", 0.5 * (kl_t_m + kl_e_m)},
              {"kl_e_m", kl_e_m},
              {"kl_t_m", kl_t_m},
              {"n_samples", empirical.total},
              {"per_pattern", per_pattern},
              {"support_size", target.size()}};

  std::ofstream file;
  TaskConfig fake;
  fake.output = output;
  std::ostream& out = open_output(fake, file);
  out << doc.dump() << '\n';
  out.flush();
  return kExitOk;
}

void add_task_flags(CLI::App* cmd, TaskConfig& config, bool with_sampling) {
  cmd->add_option("--dataset", config.dataset, "dataset path")->required();
  cmd->add_option("--format", config.format, "fimi|cp4im");
  cmd->add_option("--oracle", config.oracle, "eclat|cp");
  cmd->add_option("--constraints", config.constraints_text,
                  "e.g. minfreq=0.09,closed,minlen=7")
      ->required();
  cmd->add_flag("--tiling", config.tiling, "sample non-overlapping 2-tilings");
  cmd->add_option("--measure", config.measure, "uniform|freq|purity|area");
  cmd->add_option("--output", config.output, "output path (default stdout)");
  if (with_sampling) {
    cmd->add_option("--kappa", config.kappa, "error tolerance in (0,1)");
    cmd->add_option("--seed", config.seed, "random seed");
  }
}

}  // namespace

int run_cli(int argc, const char* const* argv) {
  CLI::App app{"weighted constrained pattern sampling"};
  app.require_subcommand(1);

  TaskConfig config;
  double factor = 2.0;
  std::string samples_path, enumeration_path, eval_output;

  CLI::App* sample = app.add_subcommand("sample", "draw weighted random patterns");
  add_task_flags(sample, config, true);
  sample->add_option("--n", config.n_samples, "number of samples");
  sample->add_option("--jobs", config.jobs, "parallel sample generation");

  CLI::App* estimate = app.add_subcommand("estimate", "estimate the total solution weight");
  add_task_flags(estimate, config, true);

  CLI::App* enumerate = app.add_subcommand("enumerate", "list every solution with its quality");
  add_task_flags(enumerate, config, false);

  CLI::App* evaluate = app.add_subcommand("evaluate", "compare samples against an enumeration");
  evaluate->add_option("--samples", samples_path, "JSON-lines samples")->required();
  evaluate->add_option("--enumeration", enumeration_path, "JSON-lines enumeration")->required();
  evaluate->add_option("--factor", factor, "error-band factor");
  evaluate->add_option("--output", eval_output, "output path (default stdout)");

  try {
    app.parse(argc, argv);
    if (sample->parsed()) return cmd_sample(config);
    if (estimate->parsed()) return cmd_estimate(config);
    if (enumerate->parsed()) return cmd_enumerate(config);
    if (evaluate->parsed())
      return cmd_evaluate(samples_path, enumeration_path, factor, eval_output);
    return kExitConfig;
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  } catch (const UnsatisfiableTaskError& e) {
    log_line(LogLevel::error, e.what());
    return kExitUnsat;
  } catch (const SoundnessError& e) {
    log_line(LogLevel::error, e.what());
    return kExitUnsound;
  } catch (const std::exception& e) {
    log_line(LogLevel::error, e.what());
    return kExitConfig;
  }
}

}  // namespace flexics
