#pragma once

#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

#include "crl/schema.hpp"

namespace crl {

// Typed, immutable-after-parse table. Column storage mirrors the schema:
// numeric columns hold doubles (NaN = missing), categorical columns hold
// codes into a per-column verbatim label pool (-1 = missing), the target
// column holds 0/1.
class RawTable {
public:
    struct NumericColumn {
        std::vector<double> values; // NaN marks a missing cell
    };
    struct CategoricalColumn {
        std::vector<std::int32_t> codes; // -1 marks a missing cell
        std::vector<std::string> labels; // first-seen order, trimmed verbatim
        std::unordered_map<std::string, std::int32_t> label_index;

        std::int32_t intern(const std::string& label);
    };

    explicit RawTable(DatasetSchema schema);

    const DatasetSchema& schema() const { return schema_; }
    std::size_t row_count() const { return rows_; }

    bool is_missing(std::size_t row, std::size_t col) const;
    // Numeric cell; NaN when missing. Valid only for numeric columns.
    double numeric_at(std::size_t row, std::size_t col) const;
    // Label of a categorical cell; empty string when missing.
    const std::string& label_at(std::size_t row, std::size_t col) const;

    const NumericColumn& numeric_column(std::size_t col) const;
    const CategoricalColumn& categorical_column(std::size_t col) const;
    const std::vector<std::uint8_t>& target() const { return target_; }

    // Parser-facing mutation; one call per row, cells in schema order as
    // raw text (already split). Applies the schema-driven typing rules.
    void append_row(const std::vector<std::string>& cells);

private:
    DatasetSchema schema_;
    std::vector<NumericColumn> numeric_;
    std::vector<CategoricalColumn> categorical_;
    std::vector<int> storage_index_; // schema column -> index in its kind vector
    std::vector<std::uint8_t> target_;
    std::size_t rows_ = 0;
};

// Per-column count of MISSING cells, in schema order.
std::vector<std::size_t> missing_summary(const RawTable& table);

} // namespace crl
