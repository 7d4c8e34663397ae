#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "crl/eda.hpp"
#include "crl/metrics.hpp"
#include "crl/model_io.hpp"

namespace crl {

enum class RocMode { Scores, HardLabels };

// Everything a subcommand run needs. Defaults mirror the CLI defaults.
struct RunConfig {
    std::string input_path;
    std::string output_dir;
    std::uint64_t seed = 42;
    double train_fraction = 0.75;
    double selection_threshold = 0.1;
    std::vector<std::string> manual_drops = {"person_income"};
    RocMode roc_mode = RocMode::Scores;
    bool emit_svg = false;
    int threads = 1;
    std::vector<ModelKind> models = {ModelKind::Svm, ModelKind::Forest,
                                     ModelKind::Tree, ModelKind::Logistic};
    Hyperparams hyperparams;
    std::optional<std::string> timestamp_override; // tests pin this
};

struct EvalReport {
    ModelKind kind = ModelKind::Forest;
    ConfusionMatrix matrix;
    MetricSet metrics;
    RocCurve roc;            // per roc_mode
    double auc_scores = 0.0; // trapezoidal over model scores
    double auc_hard_labels = 0.0;
    double r2 = 0.0;
    bool converged = true;

    nlohmann::json to_json() const;
};

struct EdaResult {
    std::size_t rows = 0;
    std::vector<std::string> column_names; // features + target, matrix order
    std::vector<std::vector<double>> correlation; // pairwise, NaN when degenerate
    std::vector<FeatureProfile> profiles;
    SelectionReport selection;
    std::vector<std::size_t> missing_counts; // schema order
    std::vector<std::string> warnings;

    nlohmann::json profiles_json() const;
    nlohmann::json selection_json() const;
    std::string correlation_csv() const;
    std::string profiles_csv() const;
};

struct TrainResult {
    ModelDocument document;
    std::string model_path;
    std::size_t train_rows = 0;
    std::size_t test_rows = 0;
    std::vector<std::string> warnings;
};

struct EvaluateResult {
    EvalReport report;
    std::size_t evaluated_rows = 0;
    std::vector<std::string> warnings;

    nlohmann::json to_json() const;
    std::string roc_csv() const;
};

struct CompareResult {
    SelectionReport selection;
    std::size_t train_rows = 0;
    std::size_t test_rows = 0;
    std::uint64_t seed = 0;
    std::map<std::string, EvalReport> reports; // key: model kind name
    std::vector<std::string> failed;           // kinds whose training failed
    std::vector<std::string> warnings;
    std::string timestamp;

    nlohmann::json to_json() const;
    std::string table_text() const; // formatted comparison table
};

// Pipeline entry points. They do the work and write the artifact files the
// CLI documents; the CLI only parses flags and prints.
EdaResult run_eda(const RunConfig& config);
TrainResult run_train(const RunConfig& config, ModelKind kind);
EvaluateResult run_evaluate(const RunConfig& config, const std::string& model_path,
                            bool holdout_only = true);
CompareResult run_compare(const RunConfig& config);

// Shared split+fit plumbing, exposed for tests and the compare path.
struct PreparedData {
    EncodingMap encoding;
    SelectionReport selection;
    DesignMatrix train;
    DesignMatrix test;
    std::vector<std::string> warnings;
};
PreparedData prepare(const RawTable& table, const RunConfig& config);

EvalReport evaluate_model(const Model& model, const DesignMatrix& data, RocMode mode);

std::string current_timestamp_utc();

} // namespace crl
