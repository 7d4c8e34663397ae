#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace crl {

enum class ColumnKind { Numeric, Categorical, BinaryTarget };

struct ColumnSpec {
    std::string name;
    ColumnKind kind = ColumnKind::Numeric;
};

// Fixed, ordered column list. Exactly one binary-target column.
struct DatasetSchema {
    std::vector<ColumnSpec> columns;

    int target_index() const;
    int index_of(const std::string& name) const; // -1 when absent
    std::size_t size() const { return columns.size(); }
};

// The 12-column credit-risk loan schema (11 features + loan_status target).
const DatasetSchema& credit_risk_schema();

// FNV-1a over "name:kind;..." — ties a model file to the schema it was
// trained against.
std::string schema_digest(const DatasetSchema& schema);

const char* column_kind_name(ColumnKind kind);

} // namespace crl
