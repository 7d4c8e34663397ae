#include "crl/schema.hpp"

#include <cstdio>

namespace crl {

int DatasetSchema::target_index() const {
    for (std::size_t i = 0; i < columns.size(); ++i) {
        if (columns[i].kind == ColumnKind::BinaryTarget) return static_cast<int>(i);
    }
    return -1;
}

int DatasetSchema::index_of(const std::string& name) const {
    for (std::size_t i = 0; i < columns.size(); ++i) {
        if (columns[i].name == name) return static_cast<int>(i);
    }
    return -1;
}

const DatasetSchema& credit_risk_schema() {
    static const DatasetSchema schema{{
        {"person_age", ColumnKind::Numeric},
        {"person_income", ColumnKind::Numeric},
        {"person_home_ownership", ColumnKind::Categorical},
        {"person_emp_length", ColumnKind::Numeric},
        {"loan_intent", ColumnKind::Categorical},
        {"loan_grade", ColumnKind::Categorical},
        {"loan_amnt", ColumnKind::Numeric},
        {"loan_int_rate", ColumnKind::Numeric},
        {"loan_status", ColumnKind::BinaryTarget},
        {"loan_percent_income", ColumnKind::Numeric},
        {"cb_person_default_on_file", ColumnKind::Categorical},
        {"cb_person_cred_hist_length", ColumnKind::Numeric},
    }};
    return schema;
}

const char* column_kind_name(ColumnKind kind) {
    switch (kind) {
    case ColumnKind::Numeric: return "numeric";
    case ColumnKind::Categorical: return "categorical";
    case ColumnKind::BinaryTarget: return "binary-target";
    }
    return "unknown";
}

std::string schema_digest(const DatasetSchema& schema) {
    std::uint64_t hash = 0xCBF29CE484222325ULL;
    auto feed = [&hash](const std::string& text) {
        for (unsigned char c : text) {
            hash ^= c;
            hash *= 0x100000001B3ULL;
        }
    };
    for (const auto& col : schema.columns) {
        feed(col.name);
        feed(":");
        feed(column_kind_name(col.kind));
        feed(";");
    }
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(hash));
    return buf;
}

} // namespace crl
