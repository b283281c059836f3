#include "apollo/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "apollo/errors.hpp"

namespace apollo {

ConfusionMatrix confusion(const std::vector<PredictionRecord>& records) {
    ConfusionMatrix m;
    for (const PredictionRecord& r : records) {
        if (r.truth == Label::phishing)
            (r.predicted == Label::phishing ? m.tp : m.fn)++;
        else
            (r.predicted == Label::phishing ? m.fp : m.tn)++;
    }
    return m;
}

double roc_auc(const std::vector<PredictionRecord>& records) {
    std::size_t n_pos = 0, n_neg = 0;
    for (const PredictionRecord& r : records)
        (r.truth == Label::phishing ? n_pos : n_neg)++;
    if (n_pos == 0 || n_neg == 0) throw SingleClass("ROC AUC needs both truth classes");

    // Rank statistic with midranks for ties.
    std::vector<std::size_t> order(records.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return records[a].probability < records[b].probability;
    });

    double positive_rank_sum = 0.0;
    std::size_t i = 0;
    while (i < order.size()) {
        std::size_t j = i;
        while (j + 1 < order.size() &&
               records[order[j + 1]].probability == records[order[i]].probability)
            ++j;
        const double midrank = 0.5 * double(i + 1 + j + 1); // ranks are 1-based
        for (std::size_t k = i; k <= j; ++k)
            if (records[order[k]].truth == Label::phishing) positive_rank_sum += midrank;
        i = j + 1;
    }
    return (positive_rank_sum - double(n_pos) * double(n_pos + 1) / 2.0) /
           (double(n_pos) * double(n_neg));
}

MetricsReport compute_metrics_from_confusion(const ConfusionMatrix& m) {
    MetricsReport report;
    report.n_correct = m.tp + m.tn;
    report.n_wrong = m.fp + m.fn;

    if (m.tp + m.fp > 0)
        report.precision = double(m.tp) / double(m.tp + m.fp);
    else
        report.flags.push_back("precision_zero_division");
    if (m.tp + m.fn > 0)
        report.recall = double(m.tp) / double(m.tp + m.fn);
    else
        report.flags.push_back("recall_zero_division");
    if (m.total() > 0)
        report.accuracy = double(m.tp + m.tn) / double(m.total());
    else
        report.flags.push_back("accuracy_zero_division");
    if (report.precision + report.recall > 0)
        report.f1 = 2.0 * report.precision * report.recall / (report.precision + report.recall);
    else
        report.flags.push_back("f1_zero_division");
    return report;
}

namespace {

MetricsReport metrics_common(const std::vector<PredictionRecord>& records, double eps) {
    MetricsReport report = compute_metrics_from_confusion(confusion(records));
    if (records.empty()) {
        report.flags.push_back("log_loss_zero_division");
        return report;
    }
    const double lo = eps;
    const double hi = 1.0 - eps;
    double sum = 0.0;
    for (const PredictionRecord& r : records) {
        const double q = std::clamp(r.probability, lo, hi);
        sum += r.truth == Label::phishing ? -std::log(q) : -std::log(1.0 - q);
    }
    report.log_loss = sum / double(records.size());
    return report;
}

} // namespace

MetricsReport compute_metrics(const std::vector<PredictionRecord>& records, double eps) {
    MetricsReport report = metrics_common(records, eps);
    report.roc_auc = roc_auc(records); // throws SingleClass when undefined
    return report;
}

MetricsReport compute_metrics_without_auc(const std::vector<PredictionRecord>& records, double eps) {
    MetricsReport report = metrics_common(records, eps);
    report.roc_auc = std::numeric_limits<double>::quiet_NaN();
    report.flags.push_back("roc_auc_single_class");
    return report;
}

} // namespace apollo
