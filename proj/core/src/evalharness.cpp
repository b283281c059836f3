#include "apollo/evalharness.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <fstream>
#include <map>
#include <thread>

#include <nlohmann/json.hpp>

#include "apollo/errors.hpp"

namespace apollo {

namespace {

std::string format_double(double value) {
    char buffer[64];
    const auto [ptr, ec] = std::to_chars(buffer, buffer + sizeof buffer, value);
    return std::string(buffer, ptr);
}

struct EmailOutcome {
    std::optional<PredictionRecord> record;
    std::optional<std::string> error;
};

} // namespace

RunResult run_evaluation(const std::vector<DatasetEmail>& dataset, Enricher& enricher,
                         LlmBackend& backend, const RunOptions& options) {
    if (options.repetitions < 1) throw Error("repetitions must be >= 1");
    for (const std::string& name : options.conditions)
        if (!ConditionTable::is_condition_name(name)) throw Error("unknown condition: " + name);

    const int fan_out = backend.concurrent_ok() ? std::max(1, options.fan_out) : 1;

    RunResult result;
    for (const std::string& condition : options.conditions) {
        for (int rep = 0; rep < options.repetitions; ++rep) {
            std::vector<EmailOutcome> outcomes(dataset.size());
            std::atomic<std::size_t> next{0};
            const auto worker = [&]() {
                for (;;) {
                    const std::size_t index = next.fetch_add(1);
                    if (index >= dataset.size()) return;
                    const DatasetEmail& email = dataset[index];
                    EmailOutcome& slot = outcomes[index];
                    try {
                        const auto enrichment =
                            enricher.enrich(email, EnrichMode::simulated(condition, email.label));
                        const ClassificationOutcome outcome =
                            classify_only(email, enrichment, backend, options.chain);
                        PredictionRecord record;
                        record.email_id = email.id;
                        record.condition = condition;
                        record.repetition = rep;
                        record.truth = email.label;
                        record.predicted = outcome.label;
                        record.probability = outcome.phishing_probability;
                        record.correct = record.truth == record.predicted;
                        slot.record = record;
                    } catch (const std::exception& e) {
                        slot.error = e.what();
                    }
                }
            };
            if (fan_out <= 1) {
                worker();
            } else {
                std::vector<std::thread> pool;
                for (int t = 0; t < fan_out; ++t) pool.emplace_back(worker);
                for (std::thread& t : pool) t.join();
            }

            // Ordered aggregation regardless of execution interleaving.
            std::vector<std::size_t> order(dataset.size());
            for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
            std::stable_sort(order.begin(), order.end(),
                             [&](std::size_t a, std::size_t b) { return dataset[a].id < dataset[b].id; });

            std::vector<PredictionRecord> block;
            long n_failed = 0;
            for (const std::size_t index : order) {
                const EmailOutcome& outcome = outcomes[index];
                if (outcome.record) {
                    block.push_back(*outcome.record);
                } else {
                    ++n_failed;
                    result.failures.push_back(FailureRecord{dataset[index].id, condition, rep,
                                                            outcome.error.value_or("unknown error")});
                }
            }

            ConditionMetrics metrics;
            metrics.condition = condition;
            metrics.repetition = rep;
            metrics.n_failed = n_failed;
            try {
                metrics.metrics = compute_metrics(block, options.eps);
            } catch (const SingleClass&) {
                metrics.metrics = compute_metrics_without_auc(block, options.eps);
            }
            result.metrics.push_back(std::move(metrics));
            result.records.insert(result.records.end(), block.begin(), block.end());
        }
    }

    // Inferential statistics: across conditions when several were run,
    // across repetitions for the single-condition stability protocol.
    std::vector<std::string> group_keys;
    std::string grouping = "none";
    if (options.conditions.size() > 1) {
        grouping = "condition";
        group_keys = options.conditions;
    } else if (options.repetitions > 1 && options.conditions.size() == 1) {
        grouping = "repetition";
        for (int rep = 0; rep < options.repetitions; ++rep)
            group_keys.push_back("rep" + std::to_string(rep));
    }
    result.stats.grouping = grouping;
    result.stats.groups = group_keys;

    if (!group_keys.empty()) {
        const auto key_of = [&](const PredictionRecord& r) {
            return grouping == "condition" ? r.condition : "rep" + std::to_string(r.repetition);
        };
        std::map<std::string, std::pair<long, long>> correct_wrong;
        std::map<std::string, std::vector<double>> probabilities;
        for (const PredictionRecord& r : result.records) {
            auto& cw = correct_wrong[key_of(r)];
            (r.correct ? cw.first : cw.second)++;
            probabilities[key_of(r)].push_back(r.probability);
        }

        std::vector<std::pair<long, long>> tallies;
        std::vector<std::vector<double>> samples;
        for (const std::string& key : group_keys) {
            tallies.push_back(correct_wrong[key]);
            samples.push_back(probabilities[key]);
        }

        result.stats.omnibus_chi_square = chi_square_omnibus(tallies);

        std::vector<PairChiSquare> pairs;
        std::vector<double> raw_ps;
        for (std::size_t i = 0; i < group_keys.size(); ++i) {
            for (std::size_t j = i + 1; j < group_keys.size(); ++j) {
                const ChiSquareResult chi = chi_square_2x2(tallies[i], tallies[j], options.yates);
                PairChiSquare pair;
                pair.a = group_keys[i];
                pair.b = group_keys[j];
                pair.statistic = chi.statistic;
                pair.p_raw = chi.p;
                pair.degenerate = chi.degenerate;
                pairs.push_back(pair);
                raw_ps.push_back(chi.p);
            }
        }
        const std::vector<double> corrected = bonferroni(raw_ps);
        for (std::size_t i = 0; i < pairs.size(); ++i) pairs[i].p_corrected = corrected[i];
        result.stats.chi_square_pairwise = std::move(pairs);

        const bool anova_ok =
            samples.size() >= 2 &&
            std::all_of(samples.begin(), samples.end(), [](const auto& g) { return g.size() >= 2; });
        if (anova_ok) {
            result.stats.anova = anova_oneway(samples);
            const TukeyResult tukey = tukey_hsd(samples);
            for (std::size_t i = 0; i < group_keys.size(); ++i)
                for (std::size_t j = i + 1; j < group_keys.size(); ++j)
                    result.stats.tukey_pairwise.push_back(
                        PairTukey{group_keys[i], group_keys[j], tukey.q[i][j], tukey.p[i][j]});
        }
    }
    return result;
}

std::string render_predicted_labels_csv(const std::vector<PredictionRecord>& records) {
    std::string out = "email_id,condition,repetition,truth,predicted,probability,correct\n";
    for (const PredictionRecord& r : records) {
        out += std::to_string(r.email_id);
        out += ',';
        out += r.condition;
        out += ',';
        out += std::to_string(r.repetition);
        out += ',';
        out += to_string(r.truth);
        out += ',';
        out += to_string(r.predicted);
        out += ',';
        out += format_double(r.probability);
        out += ',';
        out += r.correct ? "true" : "false";
        out += '\n';
    }
    return out;
}

std::string render_metrics_json(const std::vector<ConditionMetrics>& metrics) {
    nlohmann::json doc;
    doc["results"] = nlohmann::json::array();
    for (const ConditionMetrics& m : metrics) {
        nlohmann::json entry;
        entry["condition"] = m.condition;
        entry["repetition"] = m.repetition;
        entry["n_correct"] = m.metrics.n_correct;
        entry["n_wrong"] = m.metrics.n_wrong;
        entry["n_failed"] = m.n_failed;
        entry["precision"] = m.metrics.precision;
        entry["recall"] = m.metrics.recall;
        entry["accuracy"] = m.metrics.accuracy;
        entry["f1"] = m.metrics.f1;
        entry["log_loss"] = m.metrics.log_loss;
        entry["roc_auc"] = m.metrics.roc_auc; // NaN serializes as null
        if (!m.metrics.flags.empty()) entry["flags"] = m.metrics.flags;
        doc["results"].push_back(std::move(entry));
    }
    return doc.dump(2) + "\n";
}

std::string render_stats_json(const StatsReport& stats) {
    nlohmann::json doc;
    doc["grouping"] = stats.grouping;
    doc["groups"] = stats.groups;
    if (stats.omnibus_chi_square) {
        doc["omnibus_chi_square"] = {{"statistic", stats.omnibus_chi_square->statistic},
                                     {"df", stats.omnibus_chi_square->df},
                                     {"p", stats.omnibus_chi_square->p},
                                     {"degenerate", stats.omnibus_chi_square->degenerate}};
    } else {
        doc["omnibus_chi_square"] = nullptr;
    }
    doc["chi_square_pairwise"] = nlohmann::json::array();
    for (const PairChiSquare& pair : stats.chi_square_pairwise) {
        doc["chi_square_pairwise"].push_back({{"a", pair.a},
                                              {"b", pair.b},
                                              {"statistic", pair.statistic},
                                              {"p_raw", pair.p_raw},
                                              {"p_bonferroni", pair.p_corrected},
                                              {"degenerate", pair.degenerate}});
    }
    if (stats.anova) {
        doc["anova"] = {{"F", stats.anova->f},
                        {"df1", stats.anova->df1},
                        {"df2", stats.anova->df2},
                        {"p", stats.anova->p}};
    } else {
        doc["anova"] = nullptr;
    }
    doc["tukey_pairwise"] = nlohmann::json::array();
    for (const PairTukey& pair : stats.tukey_pairwise)
        doc["tukey_pairwise"].push_back({{"a", pair.a}, {"b", pair.b}, {"q", pair.q}, {"p", pair.p}});
    return doc.dump(2) + "\n";
}

void write_reports(const RunResult& result, const std::filesystem::path& out_dir) {
    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (ec) throw IoError("cannot create output directory: " + out_dir.string());

    const auto write = [&](const char* name, const std::string& content) {
        const std::filesystem::path path = out_dir / name;
        std::ofstream out(path, std::ios::binary);
        if (!out) throw IoError("cannot write " + path.string());
        out << content;
        if (!out.flush()) throw IoError("failed writing " + path.string());
    };
    write("predicted_labels.csv", render_predicted_labels_csv(result.records));
    write("metrics_report.json", render_metrics_json(result.metrics));
    write("stats_report.json", render_stats_json(result.stats));
}

} // namespace apollo
