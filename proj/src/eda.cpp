#include "crl/eda.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "crl/error.hpp"

namespace crl {

namespace {

// Observed (non-NaN) values, sorted ascending.
std::vector<double> observed_sorted(std::span<const double> values) {
    std::vector<double> out;
    out.reserve(values.size());
    for (const double v : values) {
        if (!std::isnan(v)) out.push_back(v);
    }
    std::sort(out.begin(), out.end());
    return out;
}

double quantile_sorted(const std::vector<double>& sorted, double p) {
    const double h = (static_cast<double>(sorted.size()) - 1.0) * p;
    const auto lo = static_cast<std::size_t>(std::floor(h));
    const auto hi = static_cast<std::size_t>(std::ceil(h));
    if (lo == hi) return sorted[lo];
    const double frac = h - static_cast<double>(lo);
    return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

double population_variance(std::span<const double> values, std::size_t* observed_out = nullptr) {
    double sum = 0.0;
    std::size_t n = 0;
    for (const double v : values) {
        if (std::isnan(v)) continue;
        sum += v;
        ++n;
    }
    if (observed_out) *observed_out = n;
    if (n == 0) return 0.0;
    const double mean = sum / static_cast<double>(n);
    double ss = 0.0;
    for (const double v : values) {
        if (std::isnan(v)) continue;
        const double d = v - mean;
        ss += d * d;
    }
    return ss / static_cast<double>(n);
}

ClassStats class_stats(std::span<const double> column, std::span<const std::uint8_t> labels,
                       std::uint8_t which) {
    std::vector<double> values;
    for (std::size_t i = 0; i < column.size(); ++i) {
        if (labels[i] != which || std::isnan(column[i])) continue;
        values.push_back(column[i]);
    }
    ClassStats stats;
    stats.count = values.size();
    if (values.empty()) return stats;

    double sum = 0.0;
    for (const double v : values) sum += v;
    stats.mean = sum / static_cast<double>(values.size());

    std::sort(values.begin(), values.end());
    const double q1 = quantile_sorted(values, 0.25);
    const double q3 = quantile_sorted(values, 0.75);
    stats.spread = q3 - q1;

    // histogram density estimate, 50 fixed bins across the normalized range
    const double width = 1.0 / kDensityBins;
    std::vector<std::size_t> counts(kDensityBins, 0);
    for (const double v : values) {
        auto bin = static_cast<long>(v / width);
        if (bin < 0) bin = 0;
        if (bin >= kDensityBins) bin = kDensityBins - 1;
        ++counts[static_cast<std::size_t>(bin)];
    }
    std::size_t best = 0;
    for (std::size_t b = 1; b < counts.size(); ++b) {
        if (counts[b] > counts[best]) best = b;
    }
    stats.peak.height =
        static_cast<double>(counts[best]) / (static_cast<double>(values.size()) * width);
    stats.peak.location = (static_cast<double>(best) + 0.5) * width;
    return stats;
}

} // namespace

std::optional<double> pearson_correlation(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) {
        throw Error(ErrorCode::LengthMismatch, "correlation inputs differ in length");
    }
    double sx = 0.0, sy = 0.0;
    std::size_t n = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (std::isnan(x[i]) || std::isnan(y[i])) continue;
        sx += x[i];
        sy += y[i];
        ++n;
    }
    if (n < 2) return std::nullopt;
    const double mx = sx / static_cast<double>(n);
    const double my = sy / static_cast<double>(n);
    double sxx = 0.0, syy = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (std::isnan(x[i]) || std::isnan(y[i])) continue;
        const double dx = x[i] - mx;
        const double dy = y[i] - my;
        sxx += dx * dx;
        syy += dy * dy;
        sxy += dx * dy;
    }
    if (sxx == 0.0 || syy == 0.0) return std::nullopt;
    double r = sxy / std::sqrt(sxx * syy);
    return std::clamp(r, -1.0, 1.0);
}

std::vector<std::optional<double>> correlation_with_target(const NumericTable& table) {
    std::vector<double> target(table.labels.begin(), table.labels.end());
    std::vector<std::optional<double>> out(table.cols);
    for (std::size_t c = 0; c < table.cols; ++c) {
        out[c] = pearson_correlation(table.column(c), target);
    }
    return out;
}

std::vector<std::vector<double>> correlation_matrix(const NumericTable& table) {
    const std::size_t k = table.cols + 1;
    std::vector<std::vector<double>> columns;
    columns.reserve(k);
    for (std::size_t c = 0; c < table.cols; ++c) columns.push_back(table.column(c));
    columns.emplace_back(table.labels.begin(), table.labels.end());

    std::vector<std::vector<double>> matrix(k, std::vector<double>(k, 0.0));
    for (std::size_t i = 0; i < k; ++i) {
        matrix[i][i] = 1.0;
        for (std::size_t j = i + 1; j < k; ++j) {
            const auto r = pearson_correlation(columns[i], columns[j]);
            const double v = r ? *r : std::numeric_limits<double>::quiet_NaN();
            matrix[i][j] = v;
            matrix[j][i] = v;
        }
    }
    return matrix;
}

double skewness(std::span<const double> values) {
    double sum = 0.0;
    std::size_t n = 0;
    for (const double v : values) {
        if (std::isnan(v)) continue;
        sum += v;
        ++n;
    }
    if (n < 3) {
        throw Error(ErrorCode::DegenerateDistribution, "skewness needs at least 3 observed values");
    }
    const double mean = sum / static_cast<double>(n);
    double m2 = 0.0, m3 = 0.0;
    for (const double v : values) {
        if (std::isnan(v)) continue;
        const double d = v - mean;
        m2 += d * d;
        m3 += d * d * d;
    }
    m2 /= static_cast<double>(n);
    m3 /= static_cast<double>(n);
    if (m2 == 0.0) {
        throw Error(ErrorCode::DegenerateDistribution, "skewness undefined for constant values");
    }
    return m3 / std::pow(m2, 1.5);
}

Quartiles quartiles(std::span<const double> values) {
    const auto sorted = observed_sorted(values);
    if (sorted.empty()) {
        throw Error(ErrorCode::DegenerateDistribution, "quartiles of an empty sample");
    }
    Quartiles q;
    q.q1 = quantile_sorted(sorted, 0.25);
    q.median = quantile_sorted(sorted, 0.50);
    q.q3 = quantile_sorted(sorted, 0.75);
    return q;
}

FeatureProfile profile_feature(const std::string& name, std::span<const double> column,
                               std::span<const std::uint8_t> labels) {
    if (column.size() != labels.size()) {
        throw Error(ErrorCode::LengthMismatch, "column and labels differ in length");
    }
    bool has0 = false, has1 = false;
    for (const auto y : labels) (y == 0 ? has0 : has1) = true;
    if (!has0 || !has1) {
        throw Error(ErrorCode::EmptyClass, "profiling needs both target classes present");
    }

    FeatureProfile profile;
    profile.name = name;

    std::vector<double> target(labels.begin(), labels.end());
    profile.correlation_with_target = pearson_correlation(column, target);

    std::size_t observed = 0;
    profile.variance = population_variance(column, &observed);
    profile.observed = observed;

    if (observed >= 3 && profile.variance > 0.0) {
        profile.skewness = skewness(column);
    }
    if (observed > 0) {
        profile.quartiles = quartiles(column);
        const double lo = profile.quartiles.q1 - 1.5 * profile.quartiles.iqr();
        const double hi = profile.quartiles.q3 + 1.5 * profile.quartiles.iqr();
        for (const double v : column) {
            if (!std::isnan(v) && (v < lo || v > hi)) ++profile.outlier_count;
        }
    }

    profile.no_risk = class_stats(column, labels, 0);
    profile.risk = class_stats(column, labels, 1);
    const double a = std::abs(profile.no_risk.mean);
    const double b = std::abs(profile.risk.mean);
    const double big = std::max(a, b);
    profile.balanced = big > 0.0 && (std::min(a, b) / big) > 0.6;
    return profile;
}

SelectionReport select_features(const std::vector<FeatureProfile>& profiles, double threshold,
                                const std::vector<std::string>& manual_drops) {
    SelectionReport report;
    report.threshold = threshold;
    auto manually_dropped = [&manual_drops](const std::string& name) {
        return std::find(manual_drops.begin(), manual_drops.end(), name) != manual_drops.end();
    };
    for (const auto& profile : profiles) {
        SelectionReport::Entry entry{profile.name, profile.correlation_with_target};
        const bool keep =
            profile.correlation_with_target && std::abs(*profile.correlation_with_target) >= threshold;
        if (!profile.correlation_with_target) report.degenerate_flagged.push_back(profile.name);
        if (keep) {
            report.stage1_included.push_back(entry);
        } else {
            report.stage1_dropped.push_back(entry);
            continue;
        }
        if (manually_dropped(profile.name)) {
            report.stage2_dropped.push_back(profile.name);
        } else {
            report.final_features.push_back(profile.name);
        }
    }
    return report;
}

} // namespace crl
