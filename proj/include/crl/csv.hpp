#pragma once

#include <string>
#include <vector>

#include "crl/table.hpp"

namespace crl {

// Read a headered CSV into a typed table. Header columns are matched to the
// schema by exact name after trimming, in any order; extra columns are
// ignored (reported through `warnings` when given). Throws Error with
// MissingColumn / BadTarget / IoError.
RawTable load_csv(const std::string& path, const DatasetSchema& schema,
                  std::vector<std::string>* warnings = nullptr);

// Serialize in schema column order. Numeric cells print shortest-round-trip,
// missing cells print empty, labels are quoted only when they need it.
void write_csv(const RawTable& table, const std::string& path);

// One line -> fields. Handles double quotes and CRLF; embedded newlines are
// not supported (the credit-risk file has none).
std::vector<std::string> split_csv_line(const std::string& line);

std::string trim(const std::string& text);

} // namespace crl
