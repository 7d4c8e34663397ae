#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace crl {

// Standard orientation: rows = actual (no-risk, risk), columns = predicted.
struct ConfusionMatrix {
    std::uint64_t tn = 0;
    std::uint64_t fp = 0;
    std::uint64_t fn = 0;
    std::uint64_t tp = 0;

    std::uint64_t total() const { return tn + fp + fn + tp; }
    std::uint64_t actual_negatives() const { return tn + fp; }
    std::uint64_t actual_positives() const { return fn + tp; }
};

struct ClassMetrics {
    double precision = 0.0;
    double recall = 0.0;
    double specificity = 0.0;
    double f1 = 0.0;
    std::uint64_t support = 0;
    bool undefined = false; // some 0/0 ratio was reported as 0
};

struct MetricSet {
    double accuracy = 0.0;
    ClassMetrics no_risk; // class 0 treated as positive
    ClassMetrics risk;    // class 1 treated as positive
    double weighted_precision = 0.0;
    double weighted_recall = 0.0; // equals accuracy by construction
    double weighted_specificity = 0.0;
    double weighted_f1 = 0.0;
    bool any_undefined = false;
};

struct RocCurve {
    std::vector<double> fpr;
    std::vector<double> tpr;
    double auc = 0.0;
};

ConfusionMatrix confusion_matrix(std::span<const std::uint8_t> y_true,
                                 std::span<const std::uint8_t> y_pred);

MetricSet classification_metrics(const ConfusionMatrix& cm);

// Threshold sweep over distinct scores, descending; tied scores collapse to
// one step; trapezoidal AUC. Throws OneClassOnly.
RocCurve roc_curve(std::span<const std::uint8_t> y_true, std::span<const double> scores);

// (TPR + TNR) / 2 — the trapezoidal AUC when hard labels are the scores.
double hard_label_auc(const ConfusionMatrix& cm);

double r2_score(std::span<const std::uint8_t> y_true, std::span<const std::uint8_t> y_pred);

} // namespace crl
