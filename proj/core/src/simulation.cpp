#include "irtcat/simulation.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <exception>
#include <mutex>
#include <ostream>
#include <thread>

#include <fmt/format.h>

#include "irtcat/engine.hpp"
#include "irtcat/error.hpp"
#include "irtcat/random.hpp"
#include "irtcat/respondent.hpp"

namespace irtcat {

namespace {

// Sub-streams of a simulee seed. Stream 0 is the full-bank baseline, stream
// c + 1 is condition c.
constexpr std::uint64_t kResponseStream = 0x7e5b;

std::uint64_t cell_seed(const Simulee& s, std::optional<std::size_t> condition) {
  return derive_seed(s.seed, condition ? *condition + 1 : 0);
}

double parse_double(std::string_view text, std::string_view what) {
  double value = 0.0;
  const auto r = std::from_chars(text.data(), text.data() + text.size(), value);
  if (text.empty() || r.ec != std::errc() || r.ptr != text.data() + text.size() || !std::isfinite(value)) {
    throw ConfigError(fmt::format("simulee grid: invalid {} '{}'", what, text));
  }
  return value;
}

// Replays a presampled full-bank response vector.
class VectorRespondent final : public Respondent {
 public:
  VectorRespondent(const ItemBank& bank, const std::vector<std::uint8_t>& scores) : bank_(bank), scores_(scores) {}

  AnswerOutcome answer(const ItemParameters& item) override {
    const auto index = static_cast<std::size_t>(&item - bank_.items().data());
    if (index >= scores_.size()) throw InternalError("item does not belong to the study bank");
    AnswerOutcome out;
    out.score = scores_[index];
    return out;
  }

 private:
  const ItemBank& bank_;
  const std::vector<std::uint8_t>& scores_;
};

SimuleeRow to_row(const Simulee& s, const SessionResult& result) {
  return {s.id, s.theta_true, result.final_estimate.theta_hat, result.final_estimate.se, result.length()};
}

// Runs `fn(i)` for i in [0, n) on `workers` threads; rethrows the first failure.
template <class Fn>
void parallel_for(std::size_t n, std::size_t workers, Fn fn) {
  workers = std::max<std::size_t>(1, std::min(workers, n));
  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto work = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= n || failed.load()) return;
      try {
        fn(i);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
        failed = true;
        return;
      }
    }
  };
  if (workers == 1) {
    work();
  } else {
    std::vector<std::thread> threads;
    threads.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) threads.emplace_back(work);
    for (auto& t : threads) t.join();
  }
  if (error) std::rethrow_exception(error);
}

void write_optional(std::ostream& out, const std::optional<double>& value, const char* spec) {
  if (value) {
    out << fmt::format(fmt::runtime(spec), *value);
  } else {
    out << "NA";
  }
}

}  // namespace

std::size_t SimuleeGrid::levels() const {
  if (!std::isfinite(theta_min) || !std::isfinite(theta_max) || !std::isfinite(step)) {
    throw ConfigError("simulee grid bounds must be finite");
  }
  if (!(step > 0.0)) throw ConfigError("simulee grid step must be positive");
  if (theta_max < theta_min) throw ConfigError("simulee grid max is below min");
  if (replications == 0) throw ConfigError("simulee grid needs at least one replication");
  const double spans = (theta_max - theta_min) / step;
  const double rounded = std::round(spans);
  if (std::abs(spans - rounded) > 1e-9 * std::max(1.0, spans)) {
    throw ConfigError(fmt::format("simulee grid: ({} - {}) / {} is not a whole number of steps", theta_max,
                                  theta_min, step));
  }
  return static_cast<std::size_t>(rounded) + 1;
}

SimuleeGrid parse_simulee_grid(std::string_view text, std::uint64_t seed) {
  const auto c1 = text.find(':');
  const auto c2 = c1 == std::string_view::npos ? c1 : text.find(':', c1 + 1);
  const auto x = c2 == std::string_view::npos ? c2 : text.find('x', c2 + 1);
  if (x == std::string_view::npos) {
    throw ConfigError(fmt::format("simulee grid '{}' is not of the form min:max:stepxreps", text));
  }
  SimuleeGrid grid;
  grid.theta_min = parse_double(text.substr(0, c1), "min");
  grid.theta_max = parse_double(text.substr(c1 + 1, c2 - c1 - 1), "max");
  grid.step = parse_double(text.substr(c2 + 1, x - c2 - 1), "step");
  const auto reps = text.substr(x + 1);
  const auto r = std::from_chars(reps.data(), reps.data() + reps.size(), grid.replications);
  if (reps.empty() || r.ec != std::errc() || r.ptr != reps.data() + reps.size()) {
    throw ConfigError(fmt::format("simulee grid: invalid replications '{}'", reps));
  }
  grid.seed = seed;
  grid.levels();
  return grid;
}

std::vector<Simulee> build_simulees(const SimuleeGrid& grid) {
  const std::size_t levels = grid.levels();
  std::vector<Simulee> out;
  out.reserve(levels * grid.replications);
  for (std::size_t level = 0; level < levels; ++level) {
    const double theta = grid.theta_min + static_cast<double>(level) * grid.step;
    for (std::size_t rep = 0; rep < grid.replications; ++rep) {
      const std::size_t id = out.size();
      out.push_back({id, theta, derive_seed(grid.seed, id)});
    }
  }
  return out;
}

std::vector<StudyCondition> paper_study_conditions(std::size_t bank_size) {
  std::vector<StudyCondition> out;
  for (auto strategy : {SelectionStrategy::MaxInformation, SelectionStrategy::Random}) {
    for (auto& rule : paper_conditions(bank_size)) {
      out.push_back({fmt::format("{}_{}", to_string(strategy), rule.label), rule.rule, strategy});
    }
  }
  return out;
}

ConditionSummary summarize(const std::vector<SimuleeRow>& rows, std::size_t bank_size,
                           const ConditionSummary* baseline) {
  if (rows.empty()) throw MetricError("no simulees to summarize");
  std::vector<double> est;
  std::vector<double> truth;
  std::vector<std::size_t> lengths;
  for (const auto& r : rows) {
    est.push_back(r.theta_hat);
    truth.push_back(r.theta_true);
    lengths.push_back(r.length);
  }
  ConditionSummary s;
  const PairedVector v{est, truth};
  s.bias = bias(v);
  s.rmse = rmse(v);
  try {
    s.cor = pearson(v);
  } catch (const MetricError&) {
    s.cor.reset();
  }
  s.atl = atl(lengths);
  s.tlr = tlr(s.atl, bank_size);
  if (baseline != nullptr) {
    s.bir = bir(s.bias, baseline->bias);
    s.rir = rir(s.rmse, baseline->rmse);
    if (s.cor && baseline->cor) s.clr = clr(*s.cor, *baseline->cor);
  }
  return s;
}

StudyReport run_study(const ItemBank& bank, const StudyDesign& design, std::size_t parallelism) {
  for (std::size_t i = 0; i < design.conditions.size(); ++i) {
    const auto& c = design.conditions[i];
    validate_rule(c.rule, bank.size());
    if (c.label.empty() || c.label == kFullBankLabel) throw ConfigError("invalid condition label '" + c.label + "'");
    for (std::size_t j = 0; j < i; ++j) {
      if (design.conditions[j].label == c.label) throw ConfigError("duplicate condition label " + c.label);
    }
  }
  if (design.conditions.empty() && !design.include_full_bank_baseline) {
    throw ConfigError("study has no conditions and no baseline");
  }
  if (parallelism == 0) parallelism = std::max(1u, std::thread::hardware_concurrency());

  const auto simulees = build_simulees(design.grid);
  const std::size_t n_sim = simulees.size();
  const LogLikelihoodTable table(bank, design.quadrature);
  std::optional<InformationIndex> index;
  if (design.indexed_selection) index.emplace(bank);
  SessionHooks hooks;
  hooks.table = &table;
  hooks.index = index ? &*index : nullptr;

  // Shared mode presamples each simulee's full-bank responses, drawn from the
  // same stream the fresh-mode baseline uses, so the baseline is identical.
  std::vector<std::vector<std::uint8_t>> shared;
  if (design.response_mode == ResponseMode::Shared) {
    shared.resize(n_sim);
    parallel_for(n_sim, parallelism, [&](std::size_t i) {
      const Simulee& s = simulees[i];
      SimulatedRespondent r(s.theta_true, derive_seed(cell_seed(s, std::nullopt), kResponseStream));
      auto& scores = shared[i];
      scores.resize(bank.size());
      for (std::size_t k = 0; k < bank.size(); ++k) scores[k] = static_cast<std::uint8_t>(r.answer(bank[k]).score);
    });
  }

  const std::size_t n_rows = design.conditions.size() + (design.include_full_bank_baseline ? 1 : 0);
  std::vector<std::vector<SimuleeRow>> rows(n_rows, std::vector<SimuleeRow>(n_sim));

  // Cell index = row * n_sim + simulee; the baseline (if any) is the last row.
  parallel_for(n_rows * n_sim, parallelism, [&](std::size_t cell) {
    const std::size_t row = cell / n_sim;
    const Simulee& s = simulees[cell % n_sim];
    const bool is_baseline = row == design.conditions.size();
    const std::uint64_t seed = cell_seed(s, is_baseline ? std::nullopt : std::optional<std::size_t>(row));
    const auto run = [&](Respondent& r) {
      try {
        if (is_baseline) return run_full_bank(bank, r, design.quadrature, hooks);
        const auto& c = design.conditions[row];
        return run_cat_session(bank, r, SessionConfig{c.strategy, c.rule, design.quadrature, seed}, hooks);
      } catch (const Error& e) {
        const std::string label = is_baseline ? std::string(kFullBankLabel) : design.conditions[row].label;
        throw Error(fmt::format("condition {} simulee {}: {}", label, s.id, e.what()));
      }
    };
    SessionResult result;
    if (design.response_mode == ResponseMode::Shared) {
      VectorRespondent r(bank, shared[s.id]);
      result = run(r);
    } else {
      SimulatedRespondent r(s.theta_true, derive_seed(seed, kResponseStream));
      result = run(r);
    }
    rows[row][s.id] = to_row(s, result);
  });

  StudyReport report;
  report.bank_size = bank.size();
  if (design.include_full_bank_baseline) {
    ConditionResult base{std::string(kFullBankLabel), std::move(rows.back()), {}};
    base.summary = summarize(base.rows, bank.size(), nullptr);
    base.summary.bir = bir(base.summary.bias, base.summary.bias);
    base.summary.rir = rir(base.summary.rmse, base.summary.rmse);
    if (base.summary.cor) base.summary.clr = clr(*base.summary.cor, *base.summary.cor);
    report.baseline = std::move(base);
  }
  const ConditionSummary* baseline = report.baseline ? &report.baseline->summary : nullptr;
  for (std::size_t c = 0; c < design.conditions.size(); ++c) {
    ConditionResult result{design.conditions[c].label, std::move(rows[c]), {}};
    result.summary = summarize(result.rows, bank.size(), baseline);
    report.conditions.push_back(std::move(result));
  }
  return report;
}

std::vector<TradeoffRow> tradeoff_table(const StudyReport& report) {
  if (!report.baseline) throw ConfigError("tradeoff table needs the full-bank baseline");
  std::vector<TradeoffRow> out;
  for (const auto& c : report.conditions) {
    out.push_back({c.label, c.summary.tlr, c.summary.bir, c.summary.rir, c.summary.clr});
  }
  return out;
}

void write_cells_csv(std::ostream& out, const StudyReport& report) {
  out << "condition,simulee,theta_true,theta_hat,se,length\n";
  const auto emit = [&](const ConditionResult& c) {
    for (const auto& r : c.rows) {
      out << fmt::format("{},{},{:.6f},{:.6f},{:.6f},{}\n", c.label, r.simulee, r.theta_true, r.theta_hat, r.se,
                         r.length);
    }
  };
  if (report.baseline) emit(*report.baseline);
  for (const auto& c : report.conditions) emit(c);
}

void write_aggregate_csv(std::ostream& out, const StudyReport& report) {
  out << "condition,bias,rmse,cor,atl,tlr,bir,rir,clr\n";
  const auto emit = [&](const ConditionResult& c) {
    const auto& s = c.summary;
    out << fmt::format("{},{:.6f},{:.6f},", c.label, s.bias, s.rmse);
    write_optional(out, s.cor, "{:.6f}");
    out << fmt::format(",{:.2f},{},{},{},{}\n", s.atl, format_percent(s.tlr), format_percent(s.bir),
                       format_percent(s.rir), format_percent(s.clr));
  };
  if (report.baseline) emit(*report.baseline);
  for (const auto& c : report.conditions) emit(c);
}

void write_tradeoff_csv(std::ostream& out, const std::vector<TradeoffRow>& rows) {
  out << "condition,tlr,bir,rir,clr\n";
  for (const auto& r : rows) {
    out << fmt::format("{},{},{},{},{}\n", r.label, format_percent(r.tlr), format_percent(r.bir),
                       format_percent(r.rir), format_percent(r.clr));
  }
}

}  // namespace irtcat
