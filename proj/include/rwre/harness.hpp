#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "rwre/env_models.hpp"
#include "rwre/mle.hpp"

namespace rwre {

struct ExperimentSpec {
  explicit ExperimentSpec(EnvModel m) : model(std::move(m)) {}

  std::string example;  // label used in output rows; family name if empty
  EnvModel model;       // carries theta* and the box
  std::vector<long long> n_list = {100, 200, 300, 400, 500,
                                   600, 700, 800, 900, 1000};
  long long replicates = 1000;
  std::uint64_t seed = 1;
  double t_max_factor = 500.0;
  std::vector<double> theta0;  // empty = box center
  double level = 0.95;
  bool fresh_walk_per_n = false;
  int threads = 0;  // 0 = hardware concurrency

  void validate() const;  // throws ConfigError
  // Single step cap used for the whole continuation, from the largest n.
  std::uint64_t step_cap() const;
};

struct ReplicateRecord {
  std::string example;
  long long n = 0;
  long long replicate = 0;
  std::uint64_t env_seed = 0;
  std::uint64_t walk_seed = 0;
  bool censored = false;
  std::uint64_t total_steps = 0;
  std::vector<double> theta_mle;            // empty when censored or failed
  std::vector<double> sigma;                // packed {s00} or {s00,s01,s11}
  std::vector<double> ci_lo, ci_hi;
  std::optional<double> theta_mom;
  std::optional<bool> clipped_mom;
  double wall_ms = 0;  // not serialized
};

struct SummaryRow {
  std::string example;
  long long n = 0;
  std::string estimator;  // "mle" or "moment"
  long long count = 0;    // non-censored values summarized
  double censored_frac = 0;
  double q1 = 0, median = 0, q3 = 0, iqr = 0;
  long long outliers = 0;
  double whisker_lo = 0, whisker_hi = 0;  // not serialized; drives the SVG
};

// Parse a key = value spec file with [model] / [run] / [estimate] sections.
// Unknown keys or sections are errors.
ExperimentSpec parse_spec_file(const std::string& path);
ExperimentSpec parse_spec_text(const std::string& text);

// One environment and one walk per replicate, stopped at each n in the
// n-list by continuation under a single step cap; estimates at each stop.
// Deterministic in the master seed, independent of thread scheduling.
std::vector<ReplicateRecord> run_experiment(const ExperimentSpec& spec);

std::vector<SummaryRow> summarize(const std::vector<ReplicateRecord>& records);

std::string emit_records_csv(const std::vector<ReplicateRecord>& records);
std::string emit_summary_csv(const std::vector<SummaryRow>& rows);
std::vector<ReplicateRecord> parse_records_csv(const std::string& text);
void write_file(const std::string& path, const std::string& content);
std::string read_file(const std::string& path);

// Vertical scale of one boxplot panel: data range padded, then mapped
// linearly onto [y_top, y_bottom] pixels.
struct PanelScale {
  double vmin = 0, vmax = 1;
  double y_top = 0, y_bottom = 1;
  double y_of(double value) const {
    return y_bottom - (value - vmin) / (vmax - vmin) * (y_bottom - y_top);
  }
};

PanelScale panel_scale(const std::vector<SummaryRow>& panel_rows,
                       double theta_star, double y_top, double y_bottom);

// One panel per example; per n a white MLE box (left) and a grey moment
// box (right); dashed horizontal line at theta*. Self-contained SVG.
std::string emit_boxplot_svg(const std::vector<SummaryRow>& rows,
                             const std::map<std::string, double>& theta_star);

struct DiagnosticsReport {
  long long n_used = 0;
  long long count = 0;        // non-censored records at n_used
  double ks_stat = 0;
  double ks_pvalue = 1;
  long long with_ci = 0;
  long long covered = 0;
  double coverage = 0;
  bool has_sigma_trend = false;
  std::vector<std::pair<long long, double>> median_sigma;  // (n, median)
  bool sigma_increasing = false;
  std::string to_text() const;
};

// Normality of the standardized estimates at the largest n, empirical CI
// coverage there, and (Temkin only) the median information trend across n.
DiagnosticsReport diagnostics(const std::vector<ReplicateRecord>& records,
                              const ExperimentSpec& spec);

// Hook: fill the KS fields directly from presumed-standardized values.
DiagnosticsReport diagnostics_from_standardized(std::vector<double> z);

}  // namespace rwre
