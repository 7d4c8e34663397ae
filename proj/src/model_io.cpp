#include "crl/model_io.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>

#include "crl/error.hpp"
#include "crl/schema.hpp"

namespace crl {

namespace {

nlohmann::json params_to_json(const FittedParams& params) {
    nlohmann::json encoding = nlohmann::json::object();
    for (const auto& [column, labels] : params.encoding.column_labels) encoding[column] = labels;
    nlohmann::json imputation = nlohmann::json::object();
    for (const auto& [column, fill] : params.imputation.fill) imputation[column] = fill;
    nlohmann::json normalization = nlohmann::json::object();
    for (const auto& [column, range] : params.normalization.ranges) {
        normalization[column] = nlohmann::json{{"min", range.min}, {"max", range.max}};
    }
    return nlohmann::json{{"encoding", std::move(encoding)},
                          {"imputation", std::move(imputation)},
                          {"normalization", std::move(normalization)}};
}

FittedParams params_from_json(const nlohmann::json& j) {
    FittedParams params;
    for (const auto& [column, labels] : j.at("encoding").items()) {
        params.encoding.column_labels[column] = labels.get<std::vector<std::string>>();
    }
    for (const auto& [column, fill] : j.at("imputation").items()) {
        params.imputation.fill[column] = fill.get<double>();
    }
    for (const auto& [column, range] : j.at("normalization").items()) {
        params.normalization.ranges[column] = {range.at("min").get<double>(),
                                               range.at("max").get<double>()};
    }
    return params;
}

} // namespace

std::vector<double> ModelDocument::transform_row(const RawTable& table, std::size_t row) const {
    const auto& schema = table.schema();
    std::vector<double> out(features.size());
    for (std::size_t f = 0; f < features.size(); ++f) {
        const int column = schema.index_of(features[f]);
        if (column < 0) {
            throw Error(ErrorCode::MissingColumn, "schema lacks feature '" + features[f] + "'");
        }
        double value;
        if (schema.columns[column].kind == ColumnKind::Categorical) {
            const auto& cat = table.categorical_column(column);
            const auto code = cat.codes[row];
            value = code < 0 ? std::numeric_limits<double>::quiet_NaN()
                             : params.encoding.code_of(features[f], cat.labels[code]);
        } else {
            value = table.numeric_column(column).values[row];
        }
        if (std::isnan(value)) {
            const auto it = params.imputation.fill.find(features[f]);
            if (it == params.imputation.fill.end()) {
                throw Error(ErrorCode::MissingColumn,
                            "imputation policy lacks column '" + features[f] + "'");
            }
            value = it->second;
        }
        const auto range = params.normalization.ranges.find(features[f]);
        if (range == params.normalization.ranges.end()) {
            throw Error(ErrorCode::MissingColumn,
                        "normalization params lack column '" + features[f] + "'");
        }
        const double span = range->second.max - range->second.min;
        value = span > 0.0 ? (value - range->second.min) / span : 0.0;
        out[f] = std::clamp(value, 0.0, 1.0);
    }
    return out;
}

DesignMatrix ModelDocument::transform(const RawTable& table) const {
    DesignMatrix out;
    out.rows = table.row_count();
    out.cols = features.size();
    out.column_names = features;
    out.params = params;
    out.labels = table.target();
    out.values.resize(out.rows * out.cols);
    for (std::size_t r = 0; r < out.rows; ++r) {
        const auto row = transform_row(table, r);
        std::copy(row.begin(), row.end(), out.values.begin() + r * out.cols);
    }
    return out;
}

nlohmann::json ModelDocument::to_json() const {
    return nlohmann::json{{"format_version", format_version},
                          {"schema_digest", schema_digest},
                          {"preprocessing", params_to_json(params)},
                          {"features", features},
                          {"model_kind", model_kind_name(kind)},
                          {"model", model->params_json()},
                          {"metadata",
                           nlohmann::json{{"seed", metadata.seed},
                                          {"train_fraction", metadata.train_fraction},
                                          {"trained_rows", metadata.trained_rows},
                                          {"timestamp", metadata.timestamp},
                                          {"converged", metadata.converged}}}};
}

ModelDocument ModelDocument::from_json(const nlohmann::json& j) {
    ModelDocument doc;
    doc.format_version = j.at("format_version").get<int>();
    if (doc.format_version != kModelFormatVersion) {
        throw Error(ErrorCode::SchemaMismatch,
                    "unsupported model format version " + std::to_string(doc.format_version));
    }
    doc.schema_digest = j.at("schema_digest").get<std::string>();
    doc.params = params_from_json(j.at("preprocessing"));
    doc.features = j.at("features").get<std::vector<std::string>>();
    doc.kind = model_kind_from_name(j.at("model_kind").get<std::string>());
    doc.model = model_from_json(doc.kind, j.at("model"));
    const auto& meta = j.at("metadata");
    doc.metadata.seed = meta.at("seed").get<std::uint64_t>();
    doc.metadata.train_fraction = meta.at("train_fraction").get<double>();
    doc.metadata.trained_rows = meta.at("trained_rows").get<std::size_t>();
    doc.metadata.timestamp = meta.at("timestamp").get<std::string>();
    doc.metadata.converged = meta.at("converged").get<bool>();
    return doc;
}

void save_model(const ModelDocument& doc, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw Error(ErrorCode::IoError, "cannot open '" + path + "' for writing");
    }
    out << doc.to_json().dump(2) << '\n';
    if (!out) {
        throw Error(ErrorCode::IoError, "short write to '" + path + "'");
    }
}

ModelDocument load_model(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error(ErrorCode::IoError, "cannot open '" + path + "'");
    }
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::SchemaMismatch,
                    "'" + path + "' is not a valid model document: " + e.what());
    }
    try {
        return ModelDocument::from_json(j);
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::SchemaMismatch,
                    "'" + path + "' is not a valid model document: " + e.what());
    }
}

} // namespace crl
