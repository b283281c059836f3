#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "apollo/classify.hpp"
#include "apollo/enricher.hpp"
#include "apollo/metrics.hpp"
#include "apollo/stats.hpp"

namespace apollo {

struct RunOptions {
    std::vector<std::string> conditions;
    int repetitions = 1;
    int fan_out = 1; // parallel pipeline executions per (condition, repetition)
    double eps = 1e-15;
    bool yates = true;
    ChainOptions chain;
};

// A row the backend or parser rejected; excluded from metrics, counted
// separately.
struct FailureRecord {
    long email_id = 0;
    std::string condition;
    int repetition = 0;
    std::string error;
};

struct ConditionMetrics {
    std::string condition;
    int repetition = 0;
    MetricsReport metrics;
    long n_failed = 0;
};

struct PairChiSquare {
    std::string a;
    std::string b;
    double statistic = 0.0;
    double p_raw = 1.0;
    double p_corrected = 1.0;
    bool degenerate = false;
};

struct PairTukey {
    std::string a;
    std::string b;
    double q = 0.0;
    double p = 1.0;
};

struct StatsReport {
    // "condition" when comparing conditions, "repetition" for the
    // single-condition stability protocol, "none" when neither applies.
    std::string grouping = "none";
    std::vector<std::string> groups;
    std::optional<ChiSquareResult> omnibus_chi_square;
    std::vector<PairChiSquare> chi_square_pairwise; // Bonferroni over all pairs
    std::optional<AnovaResult> anova;               // over predicted probabilities
    std::vector<PairTukey> tukey_pairwise;
};

struct RunResult {
    std::vector<PredictionRecord> records; // ordered by (condition, repetition, email_id)
    std::vector<FailureRecord> failures;
    std::vector<ConditionMetrics> metrics; // one per (condition, repetition)
    StatsReport stats;
};

// Runs the classification pipeline (simulated enrichment per condition,
// classification-only chain) over the dataset for every condition and
// repetition. Per-email failures are recorded, never fatal. Aggregation
// order is (condition, repetition, email_id) regardless of fan-out.
RunResult run_evaluation(const std::vector<DatasetEmail>& dataset, Enricher& enricher,
                         LlmBackend& backend, const RunOptions& options);

// Deterministic renderings of the three report files.
std::string render_predicted_labels_csv(const std::vector<PredictionRecord>& records);
std::string render_metrics_json(const std::vector<ConditionMetrics>& metrics);
std::string render_stats_json(const StatsReport& stats);

// Writes predicted_labels.csv, metrics_report.json, stats_report.json into
// out_dir (created if needed); byte-deterministic given identical inputs.
void write_reports(const RunResult& result, const std::filesystem::path& out_dir);

} // namespace apollo
