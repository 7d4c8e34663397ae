#include "crl/csv.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>

#include "crl/error.hpp"

namespace crl {

std::string trim(const std::string& text) {
    std::size_t begin = 0;
    std::size_t end = text.size();
    while (begin < end && (std::isspace(static_cast<unsigned char>(text[begin])) != 0)) ++begin;
    while (end > begin && (std::isspace(static_cast<unsigned char>(text[end - 1])) != 0)) --end;
    return text.substr(begin, end - begin);
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string current;
    bool in_quotes = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (in_quotes) {
            if (c == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    current.push_back('"');
                    ++i;
                } else {
                    in_quotes = false;
                }
            } else {
                current.push_back(c);
            }
        } else if (c == '"') {
            in_quotes = true;
        } else if (c == ',') {
            fields.push_back(current);
            current.clear();
        } else {
            current.push_back(c);
        }
    }
    fields.push_back(current);
    return fields;
}

RawTable load_csv(const std::string& path, const DatasetSchema& schema,
                  std::vector<std::string>* warnings) {
    std::ifstream file(path, std::ios::binary);
    if (!file) {
        throw Error(ErrorCode::IoError, "cannot open '" + path + "'");
    }

    std::string line;
    if (!std::getline(file, line)) {
        throw Error(ErrorCode::IoError, "'" + path + "' is empty (no header)");
    }
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.size() >= 3 && static_cast<unsigned char>(line[0]) == 0xEF &&
        static_cast<unsigned char>(line[1]) == 0xBB &&
        static_cast<unsigned char>(line[2]) == 0xBF) {
        line.erase(0, 3); // UTF-8 BOM
    }

    const auto header = split_csv_line(line);
    // file column -> schema column (-1 = ignored extra)
    std::vector<int> mapping(header.size(), -1);
    std::vector<bool> seen(schema.size(), false);
    for (std::size_t i = 0; i < header.size(); ++i) {
        const std::string name = trim(header[i]);
        const int idx = schema.index_of(name);
        if (idx >= 0) {
            mapping[i] = idx;
            seen[idx] = true;
        } else if (warnings != nullptr && !name.empty()) {
            warnings->push_back("ignoring extra column '" + name + "'");
        }
    }
    for (std::size_t c = 0; c < schema.size(); ++c) {
        if (!seen[c]) {
            throw Error(ErrorCode::MissingColumn,
                        "header lacks column '" + schema.columns[c].name + "'");
        }
    }

    RawTable table(schema);
    std::vector<std::string> cells(schema.size());
    std::size_t line_no = 1;
    while (std::getline(file, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto fields = split_csv_line(line);
        if (fields.size() != header.size()) {
            throw Error(ErrorCode::IoError,
                        "line " + std::to_string(line_no) + " has " +
                            std::to_string(fields.size()) + " fields, header has " +
                            std::to_string(header.size()));
        }
        for (auto& cell : cells) cell.clear();
        for (std::size_t i = 0; i < fields.size(); ++i) {
            if (mapping[i] >= 0) cells[mapping[i]] = fields[i];
        }
        table.append_row(cells);
    }
    return table;
}

namespace {
std::string format_numeric(double value) {
    char buf[32];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
    (void)ec;
    return std::string(buf, ptr);
}

std::string quote_if_needed(const std::string& field) {
    if (field.find_first_of(",\"") == std::string::npos) return field;
    std::string quoted = "\"";
    for (char c : field) {
        if (c == '"') quoted += "\"\"";
        else quoted.push_back(c);
    }
    quoted.push_back('"');
    return quoted;
}
} // namespace

void write_csv(const RawTable& table, const std::string& path) {
    std::ofstream file(path, std::ios::binary);
    if (!file) {
        throw Error(ErrorCode::IoError, "cannot write '" + path + "'");
    }
    const auto& schema = table.schema();
    for (std::size_t c = 0; c < schema.size(); ++c) {
        if (c > 0) file << ',';
        file << schema.columns[c].name;
    }
    file << '\n';
    for (std::size_t r = 0; r < table.row_count(); ++r) {
        for (std::size_t c = 0; c < schema.size(); ++c) {
            if (c > 0) file << ',';
            if (table.is_missing(r, c)) continue;
            switch (schema.columns[c].kind) {
            case ColumnKind::Numeric:
                file << format_numeric(table.numeric_at(r, c));
                break;
            case ColumnKind::Categorical:
                file << quote_if_needed(table.label_at(r, c));
                break;
            case ColumnKind::BinaryTarget:
                file << static_cast<int>(table.target()[r]);
                break;
            }
        }
        file << '\n';
    }
    if (!file.good()) {
        throw Error(ErrorCode::IoError, "write to '" + path + "' failed");
    }
}

} // namespace crl
