#include "crl/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "crl/error.hpp"

namespace crl {

namespace {

// 0/0 -> 0, with a flag so callers can surface it.
double ratio(std::uint64_t num, std::uint64_t den, bool& undefined) {
    if (den == 0) {
        undefined = true;
        return 0.0;
    }
    return static_cast<double>(num) / static_cast<double>(den);
}

ClassMetrics one_class(std::uint64_t tp, std::uint64_t fp, std::uint64_t fn, std::uint64_t tn) {
    ClassMetrics m;
    m.support = tp + fn;
    bool undefined = false;
    m.precision = ratio(tp, tp + fp, undefined);
    m.recall = ratio(tp, tp + fn, undefined);
    m.specificity = ratio(tn, tn + fp, undefined);
    const double pr = m.precision + m.recall;
    if (pr > 0.0) {
        m.f1 = 2.0 * m.precision * m.recall / pr;
    } else {
        m.f1 = 0.0;
        undefined = true;
    }
    m.undefined = undefined;
    return m;
}

} // namespace

ConfusionMatrix confusion_matrix(std::span<const std::uint8_t> y_true,
                                 std::span<const std::uint8_t> y_pred) {
    if (y_true.size() != y_pred.size()) {
        throw Error(ErrorCode::LengthMismatch, "label vectors differ in length");
    }
    if (y_true.empty()) {
        throw Error(ErrorCode::EmptyMatrix, "no samples to score");
    }
    ConfusionMatrix cm;
    for (std::size_t i = 0; i < y_true.size(); ++i) {
        if (y_true[i] > 1 || y_pred[i] > 1) {
            throw Error(ErrorCode::NonBinaryLabels, "labels must be 0 or 1");
        }
        if (y_true[i] == 0) {
            (y_pred[i] == 0 ? cm.tn : cm.fp) += 1;
        } else {
            (y_pred[i] == 1 ? cm.tp : cm.fn) += 1;
        }
    }
    return cm;
}

MetricSet classification_metrics(const ConfusionMatrix& cm) {
    if (cm.total() == 0) {
        throw Error(ErrorCode::EmptyMatrix, "confusion matrix is empty");
    }
    MetricSet set;
    set.accuracy = static_cast<double>(cm.tn + cm.tp) / static_cast<double>(cm.total());

    // class 0 as positive: its "true positives" are the tn cell
    set.no_risk = one_class(cm.tn, cm.fn, cm.fp, cm.tp);
    // class 1 as positive: the standard orientation
    set.risk = one_class(cm.tp, cm.fp, cm.fn, cm.tn);

    const double w0 = static_cast<double>(set.no_risk.support);
    const double w1 = static_cast<double>(set.risk.support);
    const double total = w0 + w1;
    auto weighted = [&](double a, double b) { return (w0 * a + w1 * b) / total; };
    set.weighted_precision = weighted(set.no_risk.precision, set.risk.precision);
    set.weighted_recall = weighted(set.no_risk.recall, set.risk.recall);
    set.weighted_specificity = weighted(set.no_risk.specificity, set.risk.specificity);
    set.weighted_f1 = weighted(set.no_risk.f1, set.risk.f1);
    set.any_undefined = set.no_risk.undefined || set.risk.undefined;
    return set;
}

RocCurve roc_curve(std::span<const std::uint8_t> y_true, std::span<const double> scores) {
    if (y_true.size() != scores.size()) {
        throw Error(ErrorCode::LengthMismatch, "labels and scores differ in length");
    }
    std::uint64_t positives = 0, negatives = 0;
    for (const auto label : y_true) {
        if (label > 1) throw Error(ErrorCode::NonBinaryLabels, "labels must be 0 or 1");
        (label == 1 ? positives : negatives) += 1;
    }
    if (positives == 0 || negatives == 0) {
        throw Error(ErrorCode::OneClassOnly, "ROC needs both classes present");
    }

    std::vector<std::size_t> order(y_true.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&scores](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });

    RocCurve curve;
    curve.fpr.push_back(0.0);
    curve.tpr.push_back(0.0);
    std::uint64_t tp = 0, fp = 0;
    std::size_t i = 0;
    while (i < order.size()) {
        const double score = scores[order[i]];
        // consume the whole tie group before emitting a point
        while (i < order.size() && scores[order[i]] == score) {
            (y_true[order[i]] == 1 ? tp : fp) += 1;
            ++i;
        }
        curve.fpr.push_back(static_cast<double>(fp) / static_cast<double>(negatives));
        curve.tpr.push_back(static_cast<double>(tp) / static_cast<double>(positives));
    }

    double auc = 0.0;
    for (std::size_t k = 1; k < curve.fpr.size(); ++k) {
        auc += (curve.fpr[k] - curve.fpr[k - 1]) * (curve.tpr[k] + curve.tpr[k - 1]) * 0.5;
    }
    curve.auc = auc;
    return curve;
}

double hard_label_auc(const ConfusionMatrix& cm) {
    if (cm.actual_positives() == 0 || cm.actual_negatives() == 0) {
        throw Error(ErrorCode::OneClassOnly, "hard-label AUC needs both classes present");
    }
    const double tpr =
        static_cast<double>(cm.tp) / static_cast<double>(cm.actual_positives());
    const double tnr =
        static_cast<double>(cm.tn) / static_cast<double>(cm.actual_negatives());
    return 0.5 * (tpr + tnr);
}

double r2_score(std::span<const std::uint8_t> y_true, std::span<const std::uint8_t> y_pred) {
    if (y_true.size() != y_pred.size()) {
        throw Error(ErrorCode::LengthMismatch, "label vectors differ in length");
    }
    if (y_true.empty()) {
        throw Error(ErrorCode::EmptyMatrix, "no samples to score");
    }
    double mean = 0.0;
    for (const auto y : y_true) mean += y;
    mean /= static_cast<double>(y_true.size());
    double ss_res = 0.0, ss_tot = 0.0;
    for (std::size_t i = 0; i < y_true.size(); ++i) {
        const double r = static_cast<double>(y_true[i]) - static_cast<double>(y_pred[i]);
        const double d = static_cast<double>(y_true[i]) - mean;
        ss_res += r * r;
        ss_tot += d * d;
    }
    if (ss_tot == 0.0) {
        throw Error(ErrorCode::ZeroVariance, "R^2 undefined when all labels match");
    }
    return 1.0 - ss_res / ss_tot;
}

} // namespace crl
