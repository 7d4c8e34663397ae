#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "json.hpp"

#include "crl/model.hpp"

namespace crl {

inline constexpr int kModelFormatVersion = 1;
inline constexpr const char* kModelFileExtension = ".crl.json";

// Self-contained scoring document: fitted preprocessing parameters plus the
// trained model, so new raw rows can be scored with nothing else on hand.
struct ModelDocument {
    int format_version = kModelFormatVersion;
    std::string schema_digest;
    FittedParams params;
    std::vector<std::string> features; // selected, in matrix column order
    ModelKind kind = ModelKind::Forest;
    std::shared_ptr<const Model> model;

    struct Metadata {
        std::uint64_t seed = 0;
        double train_fraction = 0.75;
        std::size_t trained_rows = 0;   // rows in the training CSV
        std::string timestamp;          // the only field allowed to differ run to run
        bool converged = true;
    } metadata;

    // Raw row (schema order cells, as in a RawTable) -> model input vector:
    // encode, select, impute, normalize with the fitted parameters.
    std::vector<double> transform_row(const RawTable& table, std::size_t row) const;
    DesignMatrix transform(const RawTable& table) const;

    nlohmann::json to_json() const;
    static ModelDocument from_json(const nlohmann::json& j);
};

void save_model(const ModelDocument& doc, const std::string& path);
ModelDocument load_model(const std::string& path);

} // namespace crl
