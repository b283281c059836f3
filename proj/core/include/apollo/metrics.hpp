#pragma once

#include <string>
#include <vector>

#include "apollo/email.hpp"

namespace apollo {

// One classified email in an evaluation run.
struct PredictionRecord {
    long email_id = 0;
    std::string condition;
    int repetition = 0;
    Label truth = Label::legit;
    Label predicted = Label::legit;
    double probability = 0.0; // predicted phishing probability in [0,1]
    bool correct = false;     // truth == predicted

    bool operator==(const PredictionRecord&) const = default;
};

// Phishing is the positive class throughout.
struct ConfusionMatrix {
    long tp = 0;
    long fp = 0;
    long tn = 0;
    long fn = 0;

    long total() const noexcept { return tp + fp + tn + fn; }
    bool operator==(const ConfusionMatrix&) const = default;
};

ConfusionMatrix confusion(const std::vector<PredictionRecord>& records);

struct MetricsReport {
    double precision = 0.0;
    double recall = 0.0;
    double accuracy = 0.0;
    double f1 = 0.0;
    double log_loss = 0.0;
    double roc_auc = 0.0;
    long n_correct = 0;
    long n_wrong = 0;
    // Degenerate-division markers, e.g. "precision_zero_division".
    std::vector<std::string> flags;
};

// Probability that a random positive outranks a random negative, ties
// counted 1/2 (equivalent to trapezoidal integration of the ROC curve).
// Throws SingleClass when only one truth class is present.
double roc_auc(const std::vector<PredictionRecord>& records);

// Classification and probability metrics over the records. Division by
// zero yields 0 with a flag; log-loss clips probabilities to
// [eps, 1-eps]. Propagates SingleClass from roc_auc.
MetricsReport compute_metrics(const std::vector<PredictionRecord>& records, double eps = 1e-15);

// Same but roc_auc is NaN (serialized as null) with a flag, for runs where
// one class is absent.
MetricsReport compute_metrics_without_auc(const std::vector<PredictionRecord>& records,
                                          double eps = 1e-15);

MetricsReport compute_metrics_from_confusion(const ConfusionMatrix& matrix);

} // namespace apollo
