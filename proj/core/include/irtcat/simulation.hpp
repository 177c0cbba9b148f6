#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "irtcat/estimation.hpp"
#include "irtcat/item_bank.hpp"
#include "irtcat/metrics.hpp"
#include "irtcat/selection.hpp"
#include "irtcat/stopping.hpp"

namespace irtcat {

/// Simulee abilities: levels theta_min, theta_min + step, ..., theta_max,
/// each replicated `replications` times.
struct SimuleeGrid {
  double theta_min = -3.5;
  double theta_max = 3.5;
  double step = 0.2;
  std::size_t replications = 100;
  std::uint64_t seed = 0;

  /// Number of levels; throws ConfigError when (max - min) / step is not integral.
  std::size_t levels() const;
};

/// Parse `<min>:<max>:<step>x<replications>`, e.g. `-3.5:3.5:0.2x100`.
SimuleeGrid parse_simulee_grid(std::string_view text, std::uint64_t seed);

struct Simulee {
  std::size_t id = 0;
  double theta_true = 0.0;
  std::uint64_t seed = 0;

  friend bool operator==(const Simulee&, const Simulee&) = default;
};

/// Level-major enumeration with per-simulee seeds derived from grid.seed.
std::vector<Simulee> build_simulees(const SimuleeGrid& grid);

struct StudyCondition {
  std::string label;
  StoppingRule rule;
  SelectionStrategy strategy = SelectionStrategy::MaxInformation;
};

/// The eleven recoverable stopping rules crossed with MFI and RS; labels
/// look like "MFI_SE_0.316" and "RS_Length_50".
std::vector<StudyCondition> paper_study_conditions(std::size_t bank_size);

enum class ResponseMode {
  Fresh,   // every (condition, simulee) cell draws its own responses
  Shared,  // every cell replays the simulee's full-bank response vector
};

struct StudyDesign {
  SimuleeGrid grid;
  std::vector<StudyCondition> conditions;
  bool include_full_bank_baseline = true;
  ResponseMode response_mode = ResponseMode::Fresh;
  QuadratureGrid quadrature = default_grid();
  /// Use InformationIndex for MFI instead of the full scan. Same selections,
  /// fewer information evaluations; off by default.
  bool indexed_selection = false;
};

struct SimuleeRow {
  std::size_t simulee = 0;
  double theta_true = 0.0;
  double theta_hat = 0.0;
  double se = 0.0;
  std::size_t length = 0;

  friend bool operator==(const SimuleeRow&, const SimuleeRow&) = default;
};

struct ConditionSummary {
  double bias = 0.0;
  double rmse = 0.0;
  std::optional<double> cor;  // undefined when theta_true or theta_hat is constant
  double atl = 0.0;
  Percent tlr;
  Percent bir;
  Percent rir;
  Percent clr;
};

struct ConditionResult {
  std::string label;
  std::vector<SimuleeRow> rows;
  ConditionSummary summary;
};

inline constexpr std::string_view kFullBankLabel = "FullBank";

struct StudyReport {
  std::size_t bank_size = 0;
  std::optional<ConditionResult> baseline;
  std::vector<ConditionResult> conditions;
};

/// Aggregate metrics for a set of rows. Relative metrics use `baseline` when
/// given; TLR only needs the bank size.
ConditionSummary summarize(const std::vector<SimuleeRow>& rows, std::size_t bank_size,
                           const ConditionSummary* baseline);

/// Run every (condition x simulee) cell. Condition labels must be unique. The report is identical for any
/// `parallelism` (0 = hardware concurrency).
StudyReport run_study(const ItemBank& bank, const StudyDesign& design, std::size_t parallelism);

struct TradeoffRow {
  std::string label;
  Percent tlr;
  Percent bir;
  Percent rir;
  Percent clr;
};

/// One row per non-baseline condition. Throws ConfigError without a baseline.
std::vector<TradeoffRow> tradeoff_table(const StudyReport& report);

/// `condition,simulee,theta_true,theta_hat,se,length`, baseline first.
void write_cells_csv(std::ostream& out, const StudyReport& report);

/// `condition,bias,rmse,cor,atl,tlr,bir,rir,clr`, baseline first.
void write_aggregate_csv(std::ostream& out, const StudyReport& report);

/// `condition,tlr,bir,rir,clr`.
void write_tradeoff_csv(std::ostream& out, const std::vector<TradeoffRow>& rows);

}  // namespace irtcat
