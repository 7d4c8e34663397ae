#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "crl/table.hpp"

namespace crl {

// Per categorical column: labels in byte order, code = position.
struct EncodingMap {
    std::map<std::string, std::vector<std::string>> column_labels;

    // Code for a label, or throws UnknownCategory.
    std::int32_t code_of(const std::string& column, const std::string& label) const;
};

// Per column: fill value for missing cells (training median).
struct ImputationPolicy {
    std::map<std::string, double> fill;
};

// Per column: observed training min/max.
struct NormalizationParams {
    struct Range {
        double min = 0.0;
        double max = 0.0;
    };
    std::map<std::string, Range> ranges;
};

// All-numeric feature block mid-pipeline. Cells may be NaN until imputation
// runs; the target is never missing.
struct NumericTable {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> values; // row-major
    std::vector<std::string> column_names;
    std::vector<std::uint8_t> labels;

    double& at(std::size_t r, std::size_t c) { return values[r * cols + c]; }
    double at(std::size_t r, std::size_t c) const { return values[r * cols + c]; }
    std::span<const double> row(std::size_t r) const {
        return {values.data() + r * cols, cols};
    }
    std::vector<double> column(std::size_t c) const;
    int column_index(const std::string& name) const;

    // Copy of the named feature columns, in the given order.
    NumericTable select(const std::vector<std::string>& names) const;
};

struct FittedParams {
    EncodingMap encoding;
    ImputationPolicy imputation;
    NormalizationParams normalization;
};

// Final model input: fully numeric, no NaN, training entries in [0,1].
struct DesignMatrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> values; // row-major
    std::vector<std::uint8_t> labels;
    std::vector<std::string> column_names;
    FittedParams params;

    std::span<const double> row(std::size_t r) const {
        return {values.data() + r * cols, cols};
    }
    double at(std::size_t r, std::size_t c) const { return values[r * cols + c]; }
};

struct SplitConfig {
    double train_fraction = 0.75;
    std::uint64_t seed = 0;
};

EncodingMap fit_encoding(const RawTable& table);

// Categorical cells replaced by their codes; numeric cells pass through.
// Missing cells stay NaN. Throws UnknownCategory on labels absent from the
// map (schema drift at prediction time).
NumericTable apply_encoding(const RawTable& table, const EncodingMap& map);

// Lower median of the observed values in each column, over `rows` only.
ImputationPolicy fit_impute(const NumericTable& table, std::span<const std::size_t> rows);
void apply_impute(NumericTable& table, const ImputationPolicy& policy);

NormalizationParams fit_normalizer(const NumericTable& table, std::span<const std::size_t> rows);
// x' = (x - min) / (max - min); degenerate range maps to 0; out-of-range
// values (test time) are clipped to [0,1].
void apply_normalizer(NumericTable& table, const NormalizationParams& params);

// Seeded Fisher-Yates permutation of 0..n-1; first floor(fraction*n) indices
// are the train set, the rest the test set.
struct SplitIndices {
    std::vector<std::size_t> train;
    std::vector<std::size_t> test;
};
SplitIndices split_indices(std::size_t n, const SplitConfig& config);

std::pair<DesignMatrix, DesignMatrix> train_test_split(const DesignMatrix& matrix,
                                                       const SplitConfig& config);

DesignMatrix take_rows(const NumericTable& table, std::span<const std::size_t> rows,
                       FittedParams params);

double lower_median(std::vector<double> values); // helper, values need not be sorted

} // namespace crl
