#include "commands.hpp"

#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <optional>
#include <ostream>
#include <sstream>
#include <thread>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "irtcat/digest.hpp"
#include "irtcat/engine.hpp"
#include "irtcat/error.hpp"
#include "irtcat/item_bank.hpp"
#include "irtcat/llm_respondent.hpp"
#include "irtcat/session_log.hpp"
#include "irtcat/simulation.hpp"
#include "irtcat/summary.hpp"

namespace irtcat::cli {

namespace {

namespace fs = std::filesystem;
using Json = nlohmann::json;

// Stream id for the simulated respondent of `run --respondent sim:<theta>`.
constexpr std::uint64_t kRespondentStream = 0x5113;

double parse_real(std::string_view text, std::string_view what) {
  double value = 0.0;
  const char* first = text.data();
  const char* last = text.data() + text.size();
  if (first != last && *first == '+') ++first;
  const auto r = std::from_chars(first, last, value);
  if (text.empty() || r.ec != std::errc() || r.ptr != last || !std::isfinite(value)) {
    throw UsageError(fmt::format("{}: '{}' is not a finite number", what, text));
  }
  return value;
}

// Re-raise a library ConfigError from flag interpretation as a usage error.
template <class Fn>
auto interpret(Fn fn) -> decltype(fn()) {
  try {
    return fn();
  } catch (const ConfigError& e) {
    throw UsageError(e.what());
  }
}

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> parts;
  std::string part;
  std::istringstream in(text);
  while (std::getline(in, part, sep)) {
    if (!part.empty()) parts.push_back(part);
  }
  return parts;
}

ParameterDistribution parse_distribution(const std::string& text, const char* flag) {
  const auto parts = split(text, ',');
  if (parts.size() != 4) throw UsageError(fmt::format("{} expects mean,sd,min,max; got '{}'", flag, text));
  return {parse_real(parts[0], flag), parse_real(parts[1], flag), parse_real(parts[2], flag),
          parse_real(parts[3], flag)};
}

Json distribution_json(const ParameterDistribution& d) { return Json::array({d.mean, d.sd, d.min, d.max}); }

void write_file(const fs::path& path, const std::string& content) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write " + path.string());
  out << content;
  if (!out.flush()) throw Error("failed writing " + path.string());
}

std::string manifest_line(const RunManifest& manifest) { return "# manifest " + manifest.digest() + "\n"; }

std::uint64_t seed_from_label(const std::string& label) {
  const std::string hex = sha256_hex(label).substr(0, 16);
  std::uint64_t value = 0;
  std::from_chars(hex.data(), hex.data() + hex.size(), value, 16);
  return value;
}

// ---------------------------------------------------------------- genbank

struct GenbankOptions {
  std::size_t n = 0;
  std::string alpha = "1.01,0.08,0.44,1.52";
  std::string beta = "-0.01,0.20,-1.11,1.44";
  std::uint64_t seed = 0;
  std::string out;
  std::string name = "synthetic";
  bool placeholder_content = false;
};

void cmd_genbank(const GenbankOptions& o, std::ostream& out) {
  BankSpec spec;
  spec.n_items = o.n;
  spec.alpha = parse_distribution(o.alpha, "--alpha");
  spec.beta = parse_distribution(o.beta, "--beta");
  spec.seed = o.seed;
  spec.name = o.name;
  interpret([&] { validate_bank_spec(spec); });
  ItemBank bank = generate_synthetic_bank(spec);
  if (o.placeholder_content) bank = with_placeholder_content(bank, derive_seed(o.seed, 3));

  std::ostringstream text;
  write_bank(text, bank);
  Json config;
  config["n"] = o.n;
  config["alpha"] = distribution_json(spec.alpha);
  config["beta"] = distribution_json(spec.beta);
  config["name"] = o.name;
  config["placeholder_content"] = o.placeholder_content;
  const auto manifest = make_manifest("genbank", config.dump(), sha256_hex(text.str()), o.seed);

  Json extra;
  extra["manifest"] = Json::parse(manifest.to_json());
  save_bank(o.out, bank, extra.dump());
  out << fmt::format("wrote {} ({} items, sha256 {}, manifest {})\n", o.out, bank.size(), manifest.bank_digest,
                     manifest.digest());
}

// ---------------------------------------------------------------- simulate

struct SimulateOptions {
  std::string bank;
  std::string grid = "-3.5:3.5:0.2x100";
  std::string conditions = "paper";
  std::string strategies;
  std::uint64_t seed = 0;
  std::size_t parallel = 0;
  std::string out;
  bool shared_responses = false;
  bool no_baseline = false;
  bool indexed_mfi = false;
};

std::vector<StudyCondition> study_conditions(const SimulateOptions& o, std::size_t bank_size) {
  const bool paper = o.conditions == "paper";
  std::vector<SelectionStrategy> strategies;
  for (const auto& s : split(o.strategies.empty() ? (paper ? "mfi,rs" : "mfi") : o.strategies, ',')) {
    strategies.push_back(interpret([&] { return parse_strategy(s); }));
  }
  if (strategies.empty()) throw UsageError("--strategies lists no strategy");

  std::vector<LabeledRule> rules;
  if (paper) {
    rules = paper_conditions(bank_size);
  } else {
    for (const auto& text : split(o.conditions, ';')) {
      const auto rule = interpret([&] { return parse_rule(text); });
      rules.push_back({rule_label(rule), rule});
    }
  }
  if (rules.empty()) throw UsageError("--conditions lists no stopping rule");

  std::vector<StudyCondition> out;
  for (auto strategy : strategies) {
    for (const auto& r : rules) {
      const auto label = fmt::format("{}_{}", to_string(strategy), r.label);
      for (const auto& c : out) {
        if (c.label == label) throw UsageError("condition " + label + " is listed twice");
      }
      out.push_back({label, r.rule, strategy});
    }
  }
  for (const auto& c : out) interpret([&] { validate_rule(c.rule, bank_size); });
  return out;
}

void cmd_simulate(const SimulateOptions& o, std::ostream& out) {
  const ItemBank bank = load_bank(o.bank);
  StudyDesign design;
  design.grid = interpret([&] { return parse_simulee_grid(o.grid, o.seed); });
  design.conditions = study_conditions(o, bank.size());
  design.include_full_bank_baseline = !o.no_baseline;
  design.response_mode = o.shared_responses ? ResponseMode::Shared : ResponseMode::Fresh;
  design.indexed_selection = o.indexed_mfi;

  Json config;
  config["grid"] = o.grid;
  config["response_mode"] = o.shared_responses ? "shared" : "fresh";
  config["baseline"] = !o.no_baseline;
  config["quadrature"] = {{"points", design.quadrature.size()},
                          {"lower", design.quadrature.lower()},
                          {"upper", design.quadrature.upper()}};
  auto& conditions = config["conditions"] = Json::array();
  for (const auto& c : design.conditions) {
    conditions.push_back({{"label", c.label}, {"rule", format_rule(c.rule)}, {"strategy", to_string(c.strategy)}});
  }
  const auto manifest = make_manifest("simulate", config.dump(), sha256_file(o.bank), o.seed);

  const StudyReport report = run_study(bank, design, o.parallel);

  const fs::path dir(o.out);
  std::ostringstream cells;
  std::ostringstream aggregate;
  write_cells_csv(cells, report);
  write_aggregate_csv(aggregate, report);
  write_file(dir / "cells.csv", manifest_line(manifest) + cells.str());
  write_file(dir / "aggregate.csv", manifest_line(manifest) + aggregate.str());
  if (report.baseline) {
    std::ostringstream tradeoff;
    write_tradeoff_csv(tradeoff, tradeoff_table(report));
    write_file(dir / "tradeoff.csv", manifest_line(manifest) + tradeoff.str());
  }
  write_file(dir / "manifest.json", Json::parse(manifest.to_json()).dump(2) + "\n");
  out << aggregate.str();
}

// ---------------------------------------------------------------- run

struct RunOptions {
  std::string bank;
  std::string respondent;
  std::string rule = "se:0.316";
  std::string strategy = "mfi";
  std::optional<std::uint64_t> seed;
  bool full_bank = false;
  std::string log;
  std::string resume;
  std::string label;
  std::string summary_out;
  std::string batch;
  std::string log_dir;
  std::size_t parallel = 1;
  // Remote respondents.
  std::string endpoint;
  std::string model;
  std::string api_key_env = "IRTCAT_API_KEY";
  double temperature = 0.0;
  double top_p = 1.0;
  double timeout_s = 120.0;
  int retries = 3;
  double backoff_s = 1.0;
  bool allow_sampling_override = false;
};

// One session to drive: who answers and under which name.
struct SessionJob {
  std::string label;
  std::string respondent;  // sim:<theta> | script:<file> | llm
  std::string model;
  std::string log;
  std::string resume;
};

std::string default_label(const SessionJob& job) {
  if (job.respondent == "llm") return job.model;
  if (job.respondent.rfind("script:", 0) == 0) return fs::path(job.respondent.substr(7)).stem().string();
  return job.respondent;
}

std::unique_ptr<Respondent> make_respondent(const RunOptions& o, const SessionJob& job, std::uint64_t seed,
                                            const ItemBank& bank) {
  const std::string& spec = job.respondent;
  if (spec.rfind("sim:", 0) == 0) {
    const double theta = parse_real(spec.substr(4), "--respondent sim:<theta>");
    return std::make_unique<SimulatedRespondent>(theta, derive_seed(seed, kRespondentStream));
  }
  if (spec.rfind("script:", 0) == 0) return std::make_unique<ScriptedRespondent>(load_script(spec.substr(7)));
  if (spec == "llm") {
    for (const auto& item : bank.items()) {
      if (!item.has_content()) {
        throw ConfigError("item '" + item.id + "' has no stem/options; a remote respondent needs item content");
      }
    }
    LlmEndpointConfig config;
    config.base_url = o.endpoint;
    config.model = job.model;
    if (const char* key = std::getenv(o.api_key_env.c_str())) config.api_key = key;
    config.temperature = o.temperature;
    config.top_p = o.top_p;
    config.request_timeout_s = o.timeout_s;
    config.max_retries = o.retries;
    config.retry_backoff_s = o.backoff_s;
    config.allow_sampling_override = o.allow_sampling_override;
    interpret([&] { validate_endpoint(config); });
    return std::make_unique<LlmRespondent>(config);
  }
  throw UsageError("--respondent must be sim:<theta>, script:<file> or llm; got '" + spec + "'");
}

SummaryRow summary_row(const std::string& label, const SessionResult& r) {
  return {label,
          r.final_estimate.theta_hat,
          r.accuracy,
          static_cast<double>(r.length()),
          static_cast<double>(r.tokens_total()),
          r.time_total_s};
}

struct SessionOutcome {
  SummaryRow row;
  std::string manifest_digest;
};

SessionOutcome run_one(const RunOptions& o, const SessionJob& job, const ItemBank& bank,
                       const std::string& bank_digest, const StoppingRule& rule, SelectionStrategy strategy) {
  const std::uint64_t seed = o.seed ? *o.seed : seed_from_label(job.label);
  Json config;
  config["mode"] = o.full_bank ? "full" : "cat";
  if (!o.full_bank) {
    config["rule"] = format_rule(rule);
    config["strategy"] = to_string(strategy);
  }
  config["respondent"] = job.respondent;
  config["label"] = job.label;
  if (job.respondent == "llm") {
    config["model"] = job.model;
    config["endpoint"] = o.endpoint;
    config["temperature"] = o.temperature;
    config["top_p"] = o.top_p;
  }
  const auto manifest = make_manifest("run", config.dump(), bank_digest, seed);

  auto live = make_respondent(o, job, seed, bank);
  std::unique_ptr<ReplayRespondent> replay;
  Respondent* respondent = live.get();
  if (!job.resume.empty()) {
    auto previous = read_session_log(job.resume);
    const auto recorded = Json::parse(previous.manifest_json.empty() ? "{}" : previous.manifest_json);
    if (recorded.value("digest", std::string{}) != manifest.digest()) {
      throw UsageError("cannot resume " + job.resume + ": it was written with different settings");
    }
    replay = std::make_unique<ReplayRespondent>(std::move(previous.answers), *live);
    respondent = replay.get();
  }

  std::optional<SessionLogWriter> log;
  const std::string log_path = job.log.empty() ? job.resume : job.log;
  if (!log_path.empty()) {
    if (fs::path(log_path).has_parent_path()) fs::create_directories(fs::path(log_path).parent_path());
    log.emplace(log_path, manifest.to_json());
  }
  SessionHooks hooks;
  if (log) hooks.on_step = [&](const SessionStep& step) { log->write_step(step); };

  SessionResult result;
  try {
    if (o.full_bank) {
      result = run_full_bank(bank, *respondent, default_grid(), hooks);
    } else {
      SessionConfig session{strategy, rule, default_grid(), seed};
      result = run_cat_session(bank, *respondent, session, hooks);
    }
  } catch (const SessionError& e) {
    std::string hint;
    if (!log_path.empty()) hint = fmt::format("; transcript kept in {}, continue with --resume {}", log_path, log_path);
    throw Error(fmt::format("{}: {}{}", job.label, e.what(), hint));
  }
  if (log) log->write_summary(job.label, result);
  return {summary_row(job.label, result), manifest.digest()};
}

std::vector<SessionJob> load_batch(const std::string& path, const RunOptions& o) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open batch file " + path);
  std::vector<SessionJob> jobs;
  std::string line;
  bool header = true;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    if (header) {
      if (line != "label,respondent,model") throw ConfigError("batch header must be 'label,respondent,model'");
      header = false;
      continue;
    }
    auto fields = split(line + ",", ',');
    if (line.find(',') == std::string::npos || fields.size() < 2 || fields.size() > 3) {
      throw ConfigError("batch line '" + line + "' must be label,respondent[,model]");
    }
    SessionJob job{fields[0], fields[1], fields.size() == 3 ? fields[2] : o.model, {}, {}};
    if (!o.log_dir.empty()) job.log = (fs::path(o.log_dir) / (job.label + ".jsonl")).string();
    jobs.push_back(std::move(job));
  }
  if (jobs.empty()) throw ConfigError("batch file " + path + " lists no sessions");
  return jobs;
}

void cmd_run(const RunOptions& o, std::ostream& out) {
  const StoppingRule rule = interpret([&] { return parse_rule(o.rule); });
  const SelectionStrategy strategy = interpret([&] { return parse_strategy(o.strategy); });
  if (o.batch.empty() == o.respondent.empty()) throw UsageError("give exactly one of --respondent or --batch");
  if (!o.batch.empty() && (!o.log.empty() || !o.resume.empty() || !o.label.empty())) {
    throw UsageError("--log, --resume and --label apply to single sessions; use --log-dir with --batch");
  }

  const ItemBank bank = load_bank(o.bank);
  const std::string bank_digest = sha256_file(o.bank);
  if (!o.full_bank) interpret([&] { validate_rule(rule, bank.size()); });

  std::vector<SessionJob> jobs;
  if (o.batch.empty()) {
    SessionJob job{o.label, o.respondent, o.model, o.log, o.resume};
    if (job.label.empty()) job.label = default_label(job);
    jobs.push_back(std::move(job));
  } else {
    jobs = load_batch(o.batch, o);
  }
  for (const auto& job : jobs) {
    if (job.respondent == "llm" && (o.endpoint.empty() || job.model.empty())) {
      throw UsageError("an llm respondent needs --endpoint and --model");
    }
    if (job.label.empty()) throw UsageError("session label is empty");
  }

  // Sessions are independent; run them on up to `parallel` threads and
  // report in input order.
  std::vector<std::optional<SessionOutcome>> outcomes(jobs.size());
  std::vector<std::string> failures(jobs.size());
  std::atomic<std::size_t> next{0};
  const auto worker = [&] {
    for (std::size_t i = next++; i < jobs.size(); i = next++) {
      try {
        outcomes[i] = run_one(o, jobs[i], bank, bank_digest, rule, strategy);
      } catch (const std::exception& e) {
        failures[i] = e.what();
      }
    }
  };
  if (jobs.size() == 1) {
    outcomes[0] = run_one(o, jobs[0], bank, bank_digest, rule, strategy);
  } else {
    const std::size_t workers = std::max<std::size_t>(1, std::min(o.parallel, jobs.size()));
    std::vector<std::thread> threads;
    for (std::size_t w = 0; w < workers; ++w) threads.emplace_back(worker);
    for (auto& t : threads) t.join();
  }

  std::string table = std::string(kSummaryHeader) + "\n";
  std::vector<std::string> digests;
  for (std::size_t i = 0; i < jobs.size(); ++i) {
    if (outcomes[i]) {
      table += format_summary_row(outcomes[i]->row) + "\n";
      digests.push_back(outcomes[i]->manifest_digest);
    }
  }
  out << table;
  if (!o.summary_out.empty()) {
    std::string header;
    for (const auto& d : digests) header += "# manifest " + d + "\n";
    write_file(o.summary_out, header + table);
  }
  std::string failed;
  for (std::size_t i = 0; i < jobs.size(); ++i) {
    if (!failures[i].empty()) failed += "\n  " + failures[i];
  }
  if (!failed.empty()) throw Error("some sessions failed:" + failed);
}

// ---------------------------------------------------------------- compare

std::string format_optional(const std::optional<double>& v, const char* spec) {
  return v ? fmt::format(fmt::runtime(spec), *v) : std::string("NA");
}

void cmd_compare(const std::vector<std::string>& files, std::ostream& out) {
  const auto reference = load_summaries(files.front());
  for (std::size_t f = 1; f < files.size(); ++f) {
    const auto candidate = load_summaries(files[f]);
    const auto cmp = compare_summaries(reference, candidate);
    out << "# reference " << files.front() << "\n# candidate " << files[f] << "\n";
    out << "model,theta_ref,theta_cand,accuracy_ref,accuracy_cand,length_ref,length_cand,tokens_ref,tokens_cand,"
           "time_ref,time_cand\n";
    for (const auto& p : cmp.pairs) {
      const auto& r = p.reference;
      const auto& c = p.candidate;
      out << fmt::format("{},{},{},{},{},{},{},{},{},{},{}\n", r.model, r.theta, c.theta, r.accuracy, c.accuracy,
                         r.length, c.length, r.tokens, c.tokens, r.time_s, c.time_s);
    }
    out << "metric,value\n";
    out << fmt::format("pairs,{}\n", cmp.pairs.size());
    out << fmt::format("pearson_theta,{:.6f}\n", cmp.pearson_theta);
    out << fmt::format("spearman_theta,{:.6f}\n", cmp.spearman_theta);
    out << fmt::format("leaderboard_rho,{:.6f}\n", cmp.leaderboard_rho);
    out << fmt::format("pearson_accuracy,{}\n", format_optional(cmp.pearson_accuracy, "{:.6f}"));
    out << fmt::format("length_reduction_pct,{}\n", format_optional(cmp.length_reduction, "{:.3f}"));
    out << fmt::format("token_reduction_pct,{}\n", format_optional(cmp.token_reduction, "{:.3f}"));
    out << fmt::format("time_reduction_pct,{}\n", format_optional(cmp.time_reduction, "{:.3f}"));
    if (f + 1 < files.size()) out << "\n";
  }
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Computerized adaptive testing under the 2PL model", "irtcat"};
  app.set_config("--config", "", "Read flags from a key = value file ([command] sections)");
  app.set_version_flag("--version", version());
  app.require_subcommand(1);

  GenbankOptions gen;
  auto* genbank = app.add_subcommand("genbank", "Generate a synthetic item bank");
  genbank->add_option("--n", gen.n, "Number of items")->required()->check(CLI::PositiveNumber);
  genbank->add_option("--alpha", gen.alpha, "Discrimination mean,sd,min,max")->capture_default_str();
  genbank->add_option("--beta", gen.beta, "Difficulty mean,sd,min,max")->capture_default_str();
  genbank->add_option("--seed", gen.seed, "Random seed")->capture_default_str();
  genbank->add_option("-o,--out", gen.out, "Bank file to write")->required();
  genbank->add_option("--name", gen.name, "Bank name recorded in the sidecar")->capture_default_str();
  genbank->add_flag("--placeholder-content", gen.placeholder_content,
                    "Add placeholder stems, options and keys to every item");

  SimulateOptions sim;
  auto* simulate = app.add_subcommand("simulate", "Monte Carlo study over a simulee grid");
  simulate->add_option("--bank", sim.bank, "Bank file")->required();
  simulate->add_option("--grid", sim.grid, "Simulees as min:max:stepxreps")->capture_default_str();
  simulate->add_option("--conditions", sim.conditions, "'paper' or stopping rules separated by ';'")
      ->capture_default_str();
  simulate->add_option("--strategies", sim.strategies, "Comma-separated selection strategies (mfi, rs)");
  simulate->add_option("--seed", sim.seed, "Random seed")->capture_default_str();
  simulate->add_option("--parallel", sim.parallel, "Worker threads (0 = all cores)")->capture_default_str();
  simulate->add_option("--out", sim.out, "Output directory")->required();
  simulate->add_flag("--shared-responses", sim.shared_responses,
                     "Every condition replays each simulee's full-bank responses");
  simulate->add_flag("--no-baseline", sim.no_baseline, "Skip the full-bank baseline");
  simulate->add_flag("--indexed-mfi", sim.indexed_mfi,
                     "Find MFI items with a difficulty index instead of a full scan (same results)");

  RunOptions run;
  auto* run_cmd = app.add_subcommand("run", "Administer one adaptive or full-bank session");
  run_cmd->add_option("--bank", run.bank, "Bank file")->required();
  run_cmd->add_option("--respondent", run.respondent, "sim:<theta>, script:<file> or llm");
  run_cmd->add_option("--batch", run.batch, "CSV of sessions (label,respondent,model) to run");
  run_cmd->add_option("--parallel", run.parallel, "Concurrent sessions for --batch")->capture_default_str();
  run_cmd->add_option("--rule", run.rule, "length:<n> or se:<x>[,min=<m>][,max=<M>]")->capture_default_str();
  run_cmd->add_option("--strategy", run.strategy, "mfi or rs")->capture_default_str();
  run_cmd->add_option("--seed", run.seed, "Random seed (default: derived from the label)");
  run_cmd->add_flag("--full-bank", run.full_bank, "Administer every item in bank order");
  run_cmd->add_option("--log", run.log, "Session log to write");
  run_cmd->add_option("--log-dir", run.log_dir, "Directory for per-session logs with --batch");
  run_cmd->add_option("--resume", run.resume, "Continue from an interrupted session log");
  run_cmd->add_option("--label", run.label, "Name in the summary row");
  run_cmd->add_option("--summary-out", run.summary_out, "Also write the summary table here");
  run_cmd->add_option("--endpoint", run.endpoint, "Chat-completions base URL");
  run_cmd->add_option("--model", run.model, "Model name sent to the endpoint");
  run_cmd->add_option("--api-key-env", run.api_key_env, "Environment variable holding the API key")
      ->capture_default_str();
  run_cmd->add_option("--temperature", run.temperature)->capture_default_str();
  run_cmd->add_option("--top-p", run.top_p)->capture_default_str();
  run_cmd->add_option("--timeout", run.timeout_s, "Per-request timeout in seconds")->capture_default_str();
  run_cmd->add_option("--retries", run.retries, "Retries for transport failures")->capture_default_str();
  run_cmd->add_option("--backoff", run.backoff_s, "Initial retry backoff in seconds")->capture_default_str();
  run_cmd->add_flag("--allow-sampling-override", run.allow_sampling_override,
                    "Permit temperature/top_p other than 0/1");

  std::vector<std::string> files;
  auto* compare = app.add_subcommand("compare", "Compare summary tables against the first one");
  compare->add_option("files", files, "Summary files; the first is the reference")->required()->expected(2, -1);

  std::vector<const char*> argv{"irtcat"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (genbank->parsed()) cmd_genbank(gen, out);
    if (simulate->parsed()) cmd_simulate(sim, out);
    if (run_cmd->parsed()) cmd_run(run, out);
    if (compare->parsed()) cmd_compare(files, out);
  } catch (const UsageError& e) {
    err << "irtcat: usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "irtcat: error: " << e.what() << "\n";
    return kExitFailure;
  }
  return kExitOk;
}

}  // namespace irtcat::cli
