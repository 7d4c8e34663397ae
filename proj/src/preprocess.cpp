#include "crl/preprocess.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "crl/error.hpp"
#include "crl/rng.hpp"

namespace crl {

namespace {
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
}

std::int32_t EncodingMap::code_of(const std::string& column, const std::string& label) const {
    const auto it = column_labels.find(column);
    if (it == column_labels.end()) {
        throw Error(ErrorCode::UnknownCategory, "no encoding for column '" + column + "'");
    }
    const auto& labels = it->second;
    const auto pos = std::lower_bound(labels.begin(), labels.end(), label);
    if (pos == labels.end() || *pos != label) {
        throw Error(ErrorCode::UnknownCategory,
                    "label '" + label + "' not seen when fitting column '" + column + "'");
    }
    return static_cast<std::int32_t>(pos - labels.begin());
}

EncodingMap fit_encoding(const RawTable& table) {
    if (table.row_count() == 0) {
        throw Error(ErrorCode::InvalidArgument, "cannot fit an encoding on an empty table");
    }
    EncodingMap map;
    const auto& schema = table.schema();
    for (std::size_t c = 0; c < schema.size(); ++c) {
        if (schema.columns[c].kind != ColumnKind::Categorical) continue;
        auto labels = table.categorical_column(c).labels;
        std::sort(labels.begin(), labels.end());
        map.column_labels.emplace(schema.columns[c].name, std::move(labels));
    }
    return map;
}

NumericTable apply_encoding(const RawTable& table, const EncodingMap& map) {
    const auto& schema = table.schema();
    const int target = schema.target_index();

    NumericTable out;
    out.rows = table.row_count();
    for (std::size_t c = 0; c < schema.size(); ++c) {
        if (static_cast<int>(c) != target) out.column_names.push_back(schema.columns[c].name);
    }
    out.cols = out.column_names.size();
    out.values.assign(out.rows * out.cols, kNaN);
    out.labels = table.target();

    std::size_t feature = 0;
    for (std::size_t c = 0; c < schema.size(); ++c) {
        if (static_cast<int>(c) == target) continue;
        if (schema.columns[c].kind == ColumnKind::Numeric) {
            const auto& column = table.numeric_column(c).values;
            for (std::size_t r = 0; r < out.rows; ++r) out.at(r, feature) = column[r];
        } else {
            const auto& column = table.categorical_column(c);
            // per-label code lookup, resolved once
            std::vector<std::int32_t> recode(column.labels.size());
            for (std::size_t l = 0; l < column.labels.size(); ++l) {
                recode[l] = map.code_of(schema.columns[c].name, column.labels[l]);
            }
            for (std::size_t r = 0; r < out.rows; ++r) {
                const auto code = column.codes[r];
                if (code >= 0) out.at(r, feature) = recode[code];
            }
        }
        ++feature;
    }
    return out;
}

std::vector<double> NumericTable::column(std::size_t c) const {
    std::vector<double> out(rows);
    for (std::size_t r = 0; r < rows; ++r) out[r] = at(r, c);
    return out;
}

int NumericTable::column_index(const std::string& name) const {
    for (std::size_t c = 0; c < cols; ++c) {
        if (column_names[c] == name) return static_cast<int>(c);
    }
    return -1;
}

NumericTable NumericTable::select(const std::vector<std::string>& names) const {
    NumericTable out;
    out.rows = rows;
    out.cols = names.size();
    out.column_names = names;
    out.labels = labels;
    out.values.resize(out.rows * out.cols);
    std::vector<std::size_t> src(names.size());
    for (std::size_t i = 0; i < names.size(); ++i) {
        const int idx = column_index(names[i]);
        if (idx < 0) {
            throw Error(ErrorCode::MissingColumn, "no column named '" + names[i] + "'");
        }
        src[i] = static_cast<std::size_t>(idx);
    }
    for (std::size_t r = 0; r < rows; ++r) {
        for (std::size_t i = 0; i < src.size(); ++i) out.at(r, i) = at(r, src[i]);
    }
    return out;
}

double lower_median(std::vector<double> values) {
    if (values.empty()) {
        throw Error(ErrorCode::AllMissingColumn, "median of an empty sample");
    }
    const std::size_t k = (values.size() - 1) / 2;
    std::nth_element(values.begin(), values.begin() + k, values.end());
    return values[k];
}

ImputationPolicy fit_impute(const NumericTable& table, std::span<const std::size_t> rows) {
    ImputationPolicy policy;
    std::vector<double> observed;
    for (std::size_t c = 0; c < table.cols; ++c) {
        observed.clear();
        for (const std::size_t r : rows) {
            const double v = table.at(r, c);
            if (!std::isnan(v)) observed.push_back(v);
        }
        if (observed.empty()) {
            throw Error(ErrorCode::AllMissingColumn,
                        "column '" + table.column_names[c] + "' has no observed training value");
        }
        policy.fill.emplace(table.column_names[c], lower_median(std::move(observed)));
        observed = {};
    }
    return policy;
}

void apply_impute(NumericTable& table, const ImputationPolicy& policy) {
    for (std::size_t c = 0; c < table.cols; ++c) {
        const auto it = policy.fill.find(table.column_names[c]);
        if (it == policy.fill.end()) {
            throw Error(ErrorCode::MissingColumn,
                        "imputation policy lacks column '" + table.column_names[c] + "'");
        }
        const double fill = it->second;
        for (std::size_t r = 0; r < table.rows; ++r) {
            double& v = table.at(r, c);
            if (std::isnan(v)) v = fill;
        }
    }
}

NormalizationParams fit_normalizer(const NumericTable& table, std::span<const std::size_t> rows) {
    NormalizationParams params;
    for (std::size_t c = 0; c < table.cols; ++c) {
        double lo = std::numeric_limits<double>::infinity();
        double hi = -std::numeric_limits<double>::infinity();
        for (const std::size_t r : rows) {
            const double v = table.at(r, c);
            if (std::isnan(v)) continue;
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
        if (!(lo <= hi)) {
            throw Error(ErrorCode::AllMissingColumn,
                        "column '" + table.column_names[c] + "' has no observed training value");
        }
        params.ranges.emplace(table.column_names[c], NormalizationParams::Range{lo, hi});
    }
    return params;
}

void apply_normalizer(NumericTable& table, const NormalizationParams& params) {
    for (std::size_t c = 0; c < table.cols; ++c) {
        const auto it = params.ranges.find(table.column_names[c]);
        if (it == params.ranges.end()) {
            throw Error(ErrorCode::MissingColumn,
                        "normalization params lack column '" + table.column_names[c] + "'");
        }
        const double lo = it->second.min;
        const double span = it->second.max - it->second.min;
        for (std::size_t r = 0; r < table.rows; ++r) {
            double& v = table.at(r, c);
            if (std::isnan(v)) continue;
            v = span > 0.0 ? (v - lo) / span : 0.0;
            v = std::clamp(v, 0.0, 1.0);
        }
    }
}

SplitIndices split_indices(std::size_t n, const SplitConfig& config) {
    if (n < 2) {
        throw Error(ErrorCode::InvalidArgument, "need at least 2 rows to split");
    }
    if (!(config.train_fraction > 0.0 && config.train_fraction < 1.0)) {
        throw Error(ErrorCode::InvalidArgument, "train fraction must be in (0,1)");
    }
    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;
    Rng rng(config.seed);
    rng.shuffle(order);

    // floor of the real product; the epsilon absorbs representation error in
    // fractions like 0.7 so floor(0.7 * 10) is 7, not 6
    const auto train_size =
        static_cast<std::size_t>(std::floor(config.train_fraction * static_cast<double>(n) + 1e-9));

    SplitIndices split;
    split.train.assign(order.begin(), order.begin() + train_size);
    split.test.assign(order.begin() + train_size, order.end());
    return split;
}

DesignMatrix take_rows(const NumericTable& table, std::span<const std::size_t> rows,
                       FittedParams params) {
    DesignMatrix out;
    out.rows = rows.size();
    out.cols = table.cols;
    out.column_names = table.column_names;
    out.params = std::move(params);
    out.values.resize(out.rows * out.cols);
    out.labels.resize(out.rows);
    std::size_t dst = 0;
    for (const std::size_t r : rows) {
        const auto src = table.row(r);
        std::copy(src.begin(), src.end(), out.values.begin() + dst * out.cols);
        out.labels[dst] = table.labels[r];
        ++dst;
    }
    return out;
}

std::pair<DesignMatrix, DesignMatrix> train_test_split(const DesignMatrix& matrix,
                                                       const SplitConfig& config) {
    const auto split = split_indices(matrix.rows, config);
    auto gather = [&matrix](const std::vector<std::size_t>& rows) {
        DesignMatrix out;
        out.rows = rows.size();
        out.cols = matrix.cols;
        out.column_names = matrix.column_names;
        out.params = matrix.params;
        out.values.resize(out.rows * out.cols);
        out.labels.resize(out.rows);
        for (std::size_t i = 0; i < rows.size(); ++i) {
            const auto src = matrix.row(rows[i]);
            std::copy(src.begin(), src.end(), out.values.begin() + i * out.cols);
            out.labels[i] = matrix.labels[rows[i]];
        }
        return out;
    };
    return {gather(split.train), gather(split.test)};
}

} // namespace crl
