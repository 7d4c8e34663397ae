#include "crl/table.hpp"

#include <charconv>
#include <cmath>
#include <limits>

#include "crl/csv.hpp"
#include "crl/error.hpp"

namespace crl {

namespace {
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

bool parse_double(const std::string& text, double& out) {
    const char* first = text.data();
    const char* last = first + text.size();
    auto [ptr, ec] = std::from_chars(first, last, out);
    return ec == std::errc{} && ptr == last && std::isfinite(out);
}
} // namespace

std::int32_t RawTable::CategoricalColumn::intern(const std::string& label) {
    auto it = label_index.find(label);
    if (it != label_index.end()) return it->second;
    const auto code = static_cast<std::int32_t>(labels.size());
    labels.push_back(label);
    label_index.emplace(label, code);
    return code;
}

RawTable::RawTable(DatasetSchema schema) : schema_(std::move(schema)) {
    if (schema_.target_index() < 0) {
        throw Error(ErrorCode::InvalidArgument, "schema has no binary-target column");
    }
    storage_index_.resize(schema_.size(), -1);
    for (std::size_t c = 0; c < schema_.size(); ++c) {
        switch (schema_.columns[c].kind) {
        case ColumnKind::Numeric:
            storage_index_[c] = static_cast<int>(numeric_.size());
            numeric_.emplace_back();
            break;
        case ColumnKind::Categorical:
            storage_index_[c] = static_cast<int>(categorical_.size());
            categorical_.emplace_back();
            break;
        case ColumnKind::BinaryTarget:
            break;
        }
    }
}

void RawTable::append_row(const std::vector<std::string>& cells) {
    if (cells.size() != schema_.size()) {
        throw Error(ErrorCode::LengthMismatch, "row cell count does not match schema");
    }
    for (std::size_t c = 0; c < schema_.size(); ++c) {
        const std::string cell = trim(cells[c]);
        switch (schema_.columns[c].kind) {
        case ColumnKind::Numeric: {
            double value = kNaN;
            if (!cell.empty() && !parse_double(cell, value)) value = kNaN;
            if (cell.empty()) value = kNaN;
            numeric_[storage_index_[c]].values.push_back(value);
            break;
        }
        case ColumnKind::Categorical: {
            auto& column = categorical_[storage_index_[c]];
            column.codes.push_back(cell.empty() ? -1 : column.intern(cell));
            break;
        }
        case ColumnKind::BinaryTarget: {
            double value = kNaN;
            if (cell.empty() || !parse_double(cell, value) || (value != 0.0 && value != 1.0)) {
                throw Error(ErrorCode::BadTarget,
                            "target cell '" + cell + "' is not 0 or 1 (row " +
                                std::to_string(rows_ + 1) + ")");
            }
            target_.push_back(static_cast<std::uint8_t>(value));
            break;
        }
        }
    }
    ++rows_;
}

bool RawTable::is_missing(std::size_t row, std::size_t col) const {
    switch (schema_.columns[col].kind) {
    case ColumnKind::Numeric:
        return std::isnan(numeric_[storage_index_[col]].values[row]);
    case ColumnKind::Categorical:
        return categorical_[storage_index_[col]].codes[row] < 0;
    case ColumnKind::BinaryTarget:
        return false;
    }
    return false;
}

double RawTable::numeric_at(std::size_t row, std::size_t col) const {
    if (schema_.columns[col].kind == ColumnKind::BinaryTarget) return target_[row];
    return numeric_[storage_index_[col]].values[row];
}

const std::string& RawTable::label_at(std::size_t row, std::size_t col) const {
    static const std::string empty;
    const auto& column = categorical_[storage_index_[col]];
    const auto code = column.codes[row];
    return code < 0 ? empty : column.labels[code];
}

const RawTable::NumericColumn& RawTable::numeric_column(std::size_t col) const {
    return numeric_[storage_index_[col]];
}

const RawTable::CategoricalColumn& RawTable::categorical_column(std::size_t col) const {
    return categorical_[storage_index_[col]];
}

std::vector<std::size_t> missing_summary(const RawTable& table) {
    std::vector<std::size_t> counts(table.schema().size(), 0);
    for (std::size_t c = 0; c < table.schema().size(); ++c) {
        for (std::size_t r = 0; r < table.row_count(); ++r) {
            if (table.is_missing(r, c)) ++counts[c];
        }
    }
    return counts;
}

} // namespace crl
