#include "crl/pipeline.hpp"

#include <chrono>
#include <cmath>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>

#include "crl/csv.hpp"
#include "crl/error.hpp"
#include "crl/forest.hpp"
#include "crl/logistic.hpp"
#include "crl/schema.hpp"
#include "crl/svg.hpp"
#include "crl/svm.hpp"
#include "crl/tree.hpp"

namespace crl {

namespace {

namespace fs = std::filesystem;

void write_text_file(const fs::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw Error(ErrorCode::IoError, "cannot open '" + path.string() + "' for writing");
    }
    out << text;
    if (!out) {
        throw Error(ErrorCode::IoError, "short write to '" + path.string() + "'");
    }
}

fs::path ensure_output_dir(const RunConfig& config) {
    if (config.output_dir.empty()) {
        throw Error(ErrorCode::InvalidArgument, "output directory not set");
    }
    fs::path dir(config.output_dir);
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) {
        throw Error(ErrorCode::IoError,
                    "cannot create output directory '" + dir.string() + "': " + ec.message());
    }
    return dir;
}

std::string csv_number(double v) {
    if (std::isnan(v)) return "";
    std::ostringstream out;
    out << std::setprecision(17) << v;
    return out.str();
}

nlohmann::json optional_json(const std::optional<double>& v) {
    return v ? nlohmann::json(*v) : nlohmann::json(nullptr);
}

nlohmann::json class_metrics_json(const ClassMetrics& m) {
    return nlohmann::json{{"precision", m.precision}, {"recall", m.recall},
                          {"specificity", m.specificity}, {"f1", m.f1},
                          {"support", m.support},       {"undefined", m.undefined}};
}

nlohmann::json profile_json(const FeatureProfile& p, std::size_t rows) {
    return nlohmann::json{
        {"name", p.name},
        {"correlation_with_target", optional_json(p.correlation_with_target)},
        {"variance", p.variance},
        {"skewness", optional_json(p.skewness)},
        {"quartiles",
         nlohmann::json{{"q1", p.quartiles.q1},
                        {"median", p.quartiles.median},
                        {"q3", p.quartiles.q3},
                        {"iqr", p.quartiles.iqr()}}},
        {"outliers", p.outlier_count},
        {"observed", p.observed},
        {"missing", rows - p.observed},
        {"balanced", p.balanced},
        {"no_risk",
         nlohmann::json{{"count", p.no_risk.count},
                        {"mean", p.no_risk.mean},
                        {"iqr", p.no_risk.spread},
                        {"peak_height", p.no_risk.peak.height},
                        {"peak_location", p.no_risk.peak.location}}},
        {"risk",
         nlohmann::json{{"count", p.risk.count},
                        {"mean", p.risk.mean},
                        {"iqr", p.risk.spread},
                        {"peak_height", p.risk.peak.height},
                        {"peak_location", p.risk.peak.location}}}};
}

nlohmann::json selection_entries_json(const std::vector<SelectionReport::Entry>& entries) {
    nlohmann::json array = nlohmann::json::array();
    for (const auto& e : entries) {
        array.push_back(
            nlohmann::json{{"name", e.name}, {"correlation", optional_json(e.correlation)}});
    }
    return array;
}

std::vector<FeatureProfile> profile_all(const NumericTable& numeric) {
    std::vector<FeatureProfile> profiles;
    profiles.reserve(numeric.cols);
    for (std::size_t c = 0; c < numeric.cols; ++c) {
        profiles.push_back(
            profile_feature(numeric.column_names[c], numeric.column(c), numeric.labels));
    }
    return profiles;
}

DesignMatrix gather_rows(const DesignMatrix& matrix, std::span<const std::size_t> rows) {
    DesignMatrix out;
    out.rows = rows.size();
    out.cols = matrix.cols;
    out.column_names = matrix.column_names;
    out.params = matrix.params;
    out.values.resize(out.rows * out.cols);
    out.labels.resize(out.rows);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const auto src = matrix.row(rows[i]);
        std::copy(src.begin(), src.end(), out.values.begin() + i * out.cols);
        out.labels[i] = matrix.labels[rows[i]];
    }
    return out;
}

std::unique_ptr<Model> train_kind(ModelKind kind, const DesignMatrix& train,
                                  const RunConfig& config) {
    switch (kind) {
        case ModelKind::Logistic: return train_logistic(train, config.hyperparams.logistic);
        case ModelKind::Svm: return train_svm(train, config.hyperparams.svm);
        case ModelKind::Tree: return train_tree(train, config.hyperparams.tree);
        case ModelKind::Forest: {
            ForestParams params = config.hyperparams.forest;
            params.seed = config.seed;
            params.threads = config.threads;
            params.tree = config.hyperparams.tree;
            return train_forest(train, params);
        }
    }
    throw Error(ErrorCode::InvalidArgument, "unknown model kind");
}

std::string roc_csv_text(const RocCurve& roc) {
    std::ostringstream out;
    out << "fpr,tpr\n";
    for (std::size_t i = 0; i < roc.fpr.size(); ++i) {
        out << csv_number(roc.fpr[i]) << ',' << csv_number(roc.tpr[i]) << '\n';
    }
    return out.str();
}

} // namespace

std::string current_timestamp_utc() {
    const auto now = std::chrono::system_clock::now();
    const std::time_t seconds = std::chrono::system_clock::to_time_t(now);
    std::tm parts{};
    gmtime_r(&seconds, &parts);
    char buffer[32];
    std::strftime(buffer, sizeof(buffer), "%Y-%m-%dT%H:%M:%SZ", &parts);
    return buffer;
}

PreparedData prepare(const RawTable& table, const RunConfig& config) {
    PreparedData out;
    out.encoding = fit_encoding(table);
    const NumericTable numeric = apply_encoding(table, out.encoding);

    const auto profiles = profile_all(numeric);
    out.selection = select_features(profiles, config.selection_threshold, config.manual_drops);
    if (out.selection.final_features.empty()) {
        throw Error(ErrorCode::InvalidArgument,
                    "feature selection left nothing to train on; lower --threshold");
    }

    NumericTable subset = numeric.select(out.selection.final_features);
    const auto split = split_indices(subset.rows, {config.train_fraction, config.seed});

    FittedParams params;
    params.encoding = out.encoding;
    params.imputation = fit_impute(subset, split.train);
    apply_impute(subset, params.imputation);
    params.normalization = fit_normalizer(subset, split.train);
    apply_normalizer(subset, params.normalization);

    out.train = take_rows(subset, split.train, params);
    out.test = take_rows(subset, split.test, std::move(params));
    return out;
}

EvalReport evaluate_model(const Model& model, const DesignMatrix& data, RocMode mode) {
    EvalReport report;
    report.kind = model.kind();

    const auto predictions = model.predict_all(data);
    std::vector<std::uint8_t> y_pred(predictions.size());
    std::vector<double> scores(predictions.size());
    for (std::size_t i = 0; i < predictions.size(); ++i) {
        y_pred[i] = static_cast<std::uint8_t>(predictions[i].label);
        scores[i] = predictions[i].score;
    }

    report.matrix = confusion_matrix(data.labels, y_pred);
    report.metrics = classification_metrics(report.matrix);
    report.auc_hard_labels = hard_label_auc(report.matrix);
    report.auc_scores = roc_curve(data.labels, scores).auc;
    if (mode == RocMode::Scores) {
        report.roc = roc_curve(data.labels, scores);
    } else {
        std::vector<double> hard(y_pred.size());
        for (std::size_t i = 0; i < y_pred.size(); ++i) hard[i] = y_pred[i];
        report.roc = roc_curve(data.labels, hard);
    }
    report.r2 = r2_score(data.labels, y_pred);
    if (const auto* svm = dynamic_cast<const SvmModel*>(&model)) {
        report.converged = svm->converged();
    }
    return report;
}

nlohmann::json EvalReport::to_json() const {
    return nlohmann::json{
        {"model", model_kind_name(kind)},
        {"confusion_matrix",
         nlohmann::json{{"tn", matrix.tn},
                        {"fp", matrix.fp},
                        {"fn", matrix.fn},
                        {"tp", matrix.tp},
                        {"total", matrix.total()}}},
        {"metrics",
         nlohmann::json{{"accuracy", metrics.accuracy},
                        {"no_risk", class_metrics_json(metrics.no_risk)},
                        {"risk", class_metrics_json(metrics.risk)},
                        {"weighted",
                         nlohmann::json{{"precision", metrics.weighted_precision},
                                        {"recall", metrics.weighted_recall},
                                        {"specificity", metrics.weighted_specificity},
                                        {"f1", metrics.weighted_f1}}},
                        {"any_undefined", metrics.any_undefined}}},
        {"roc", nlohmann::json{{"fpr", roc.fpr}, {"tpr", roc.tpr}, {"auc", roc.auc}}},
        {"auc", nlohmann::json{{"scores", auc_scores}, {"hard_labels", auc_hard_labels}}},
        {"r2", r2},
        {"converged", converged}};
}

nlohmann::json EdaResult::profiles_json() const {
    nlohmann::json features = nlohmann::json::array();
    for (std::size_t i = 0; i < profiles.size(); ++i) {
        const std::size_t missing = i < missing_counts.size() ? missing_counts[i] : 0;
        features.push_back(profile_json(profiles[i], profiles[i].observed + missing));
    }
    return nlohmann::json{
        {"rows", rows}, {"features", std::move(features)}, {"warnings", warnings}};
}

nlohmann::json EdaResult::selection_json() const {
    return nlohmann::json{{"threshold", selection.threshold},
                          {"stage1_included", selection_entries_json(selection.stage1_included)},
                          {"stage1_dropped", selection_entries_json(selection.stage1_dropped)},
                          {"stage2_dropped", selection.stage2_dropped},
                          {"degenerate", selection.degenerate_flagged},
                          {"final_features", selection.final_features}};
}

std::string EdaResult::correlation_csv() const {
    std::ostringstream out;
    out << "column";
    for (const auto& name : column_names) out << ',' << name;
    out << '\n';
    for (std::size_t i = 0; i < column_names.size(); ++i) {
        out << column_names[i];
        for (std::size_t j = 0; j < column_names.size(); ++j) {
            out << ',' << csv_number(correlation[i][j]);
        }
        out << '\n';
    }
    return out.str();
}

std::string EdaResult::profiles_csv() const {
    std::ostringstream out;
    out << "name,correlation_with_target,variance,skewness,q1,median,q3,iqr,outliers,"
           "observed,missing,balanced,no_risk_count,no_risk_mean,risk_count,risk_mean\n";
    for (std::size_t i = 0; i < profiles.size(); ++i) {
        const auto& p = profiles[i];
        const std::size_t missing = i < missing_counts.size() ? missing_counts[i] : 0;
        out << p.name << ','
            << (p.correlation_with_target ? csv_number(*p.correlation_with_target) : "") << ','
            << csv_number(p.variance) << ',' << (p.skewness ? csv_number(*p.skewness) : "") << ','
            << csv_number(p.quartiles.q1) << ',' << csv_number(p.quartiles.median) << ','
            << csv_number(p.quartiles.q3) << ',' << csv_number(p.quartiles.iqr()) << ','
            << p.outlier_count << ',' << p.observed << ',' << missing << ','
            << (p.balanced ? "true" : "false") << ',' << p.no_risk.count << ','
            << csv_number(p.no_risk.mean) << ',' << p.risk.count << ','
            << csv_number(p.risk.mean) << '\n';
    }
    return out.str();
}

EdaResult run_eda(const RunConfig& config) {
    EdaResult result;
    const RawTable table = load_csv(config.input_path, credit_risk_schema(), &result.warnings);
    result.rows = table.row_count();
    const EncodingMap encoding = fit_encoding(table);
    NumericTable numeric = apply_encoding(table, encoding);
    // Profiles describe the [0,1] scale the models see; correlations are
    // unaffected (Pearson is affine-invariant). Unlike the training path,
    // an all-missing column is not fatal here, it just stays NaN.
    for (std::size_t c = 0; c < numeric.cols; ++c) {
        double lo = std::numeric_limits<double>::infinity();
        double hi = -lo;
        for (std::size_t r = 0; r < numeric.rows; ++r) {
            const double v = numeric.at(r, c);
            if (std::isnan(v)) continue;
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
        if (!(lo <= hi)) continue;
        const double span = hi - lo;
        for (std::size_t r = 0; r < numeric.rows; ++r) {
            double& v = numeric.at(r, c);
            if (std::isnan(v)) continue;
            v = span > 0.0 ? (v - lo) / span : 0.0;
        }
    }

    result.column_names = numeric.column_names;
    result.column_names.push_back(table.schema().columns[table.schema().target_index()].name);
    result.correlation = correlation_matrix(numeric);
    result.profiles = profile_all(numeric);
    result.selection =
        select_features(result.profiles, config.selection_threshold, config.manual_drops);

    // missing counts arrive in schema order; reorder to feature order
    const auto schema_missing = missing_summary(table);
    result.missing_counts.clear();
    for (const auto& name : numeric.column_names) {
        const int idx = table.schema().index_of(name);
        result.missing_counts.push_back(schema_missing[static_cast<std::size_t>(idx)]);
    }

    if (result.selection.final_features.empty()) {
        result.warnings.push_back("selection threshold " +
                                  std::to_string(config.selection_threshold) +
                                  " leaves no features");
    }

    const auto dir = ensure_output_dir(config);
    write_text_file(dir / "correlation.csv", result.correlation_csv());
    write_text_file(dir / "profiles.csv", result.profiles_csv());
    write_text_file(dir / "profiles.json", result.profiles_json().dump(2) + "\n");
    write_text_file(dir / "selection.json", result.selection_json().dump(2) + "\n");
    if (config.emit_svg) {
        write_text_file(dir / "correlation-heatmap.svg",
                        correlation_heatmap_svg(result.column_names, result.correlation));
    }
    return result;
}

TrainResult run_train(const RunConfig& config, ModelKind kind) {
    TrainResult result;
    const RawTable table = load_csv(config.input_path, credit_risk_schema(), &result.warnings);
    PreparedData data = prepare(table, config);
    result.train_rows = data.train.rows;
    result.test_rows = data.test.rows;

    std::unique_ptr<Model> model = train_kind(kind, data.train, config);

    ModelDocument doc;
    doc.schema_digest = schema_digest(credit_risk_schema());
    doc.params = data.train.params;
    doc.features = data.train.column_names;
    doc.kind = kind;
    doc.metadata.seed = config.seed;
    doc.metadata.train_fraction = config.train_fraction;
    doc.metadata.trained_rows = table.row_count();
    doc.metadata.timestamp =
        config.timestamp_override ? *config.timestamp_override : current_timestamp_utc();
    if (const auto* svm = dynamic_cast<const SvmModel*>(model.get())) {
        doc.metadata.converged = svm->converged();
        if (!svm->converged()) {
            result.warnings.push_back(
                "SMO stopped at its update cap before meeting the KKT tolerance");
        }
    }
    doc.model = std::shared_ptr<const Model>(std::move(model));

    const auto dir = ensure_output_dir(config);
    result.model_path =
        (dir / (std::string(model_kind_name(kind)) + kModelFileExtension)).string();
    save_model(doc, result.model_path);
    result.document = std::move(doc);
    return result;
}

nlohmann::json EvaluateResult::to_json() const {
    nlohmann::json j = report.to_json();
    j["evaluated_rows"] = evaluated_rows;
    j["warnings"] = warnings;
    return j;
}

std::string EvaluateResult::roc_csv() const { return roc_csv_text(report.roc); }

EvaluateResult run_evaluate(const RunConfig& config, const std::string& model_path,
                            bool holdout_only) {
    EvaluateResult result;
    const ModelDocument doc = load_model(model_path);
    if (doc.schema_digest != schema_digest(credit_risk_schema())) {
        throw Error(ErrorCode::SchemaMismatch,
                    "model was trained against a different dataset schema");
    }
    const RawTable table = load_csv(config.input_path, credit_risk_schema(), &result.warnings);
    const DesignMatrix all = doc.transform(table);

    DesignMatrix data;
    if (holdout_only && table.row_count() == doc.metadata.trained_rows) {
        const auto split = split_indices(
            table.row_count(), {doc.metadata.train_fraction, doc.metadata.seed});
        data = gather_rows(all, split.test);
    } else {
        if (holdout_only) {
            result.warnings.push_back(
                "row count differs from the training run; scoring every row");
        }
        data = all;
    }

    result.report = evaluate_model(*doc.model, data, config.roc_mode);
    result.evaluated_rows = data.rows;
    if (!result.report.converged) {
        result.warnings.push_back("model file records a non-converged training run");
    }

    const auto dir = ensure_output_dir(config);
    write_text_file(dir / "report.json", result.to_json().dump(2) + "\n");
    write_text_file(dir / "roc.csv", result.roc_csv());
    if (config.emit_svg) {
        RocSeries series{model_kind_name(result.report.kind), result.report.roc.fpr,
                         result.report.roc.tpr, result.report.roc.auc};
        write_text_file(dir / "roc.svg", roc_svg({series}));

        NumericTable scored;
        scored.rows = data.rows;
        scored.cols = data.cols;
        scored.values = data.values;
        scored.column_names = data.column_names;
        scored.labels = data.labels;
        std::vector<std::string> names = data.column_names;
        names.push_back("target");
        write_text_file(dir / "correlation-heatmap.svg",
                        correlation_heatmap_svg(names, correlation_matrix(scored)));
    }
    return result;
}

nlohmann::json CompareResult::to_json() const {
    nlohmann::json report_map = nlohmann::json::object();
    for (const auto& [name, report] : reports) report_map[name] = report.to_json();
    return nlohmann::json{{"seed", seed},
                          {"split",
                           nlohmann::json{{"train_rows", train_rows},
                                          {"test_rows", test_rows}}},
                          {"timestamp", timestamp},
                          {"selection",
                           nlohmann::json{{"threshold", selection.threshold},
                                          {"stage1_included",
                                           selection_entries_json(selection.stage1_included)},
                                          {"stage1_dropped",
                                           selection_entries_json(selection.stage1_dropped)},
                                          {"stage2_dropped", selection.stage2_dropped},
                                          {"degenerate", selection.degenerate_flagged},
                                          {"final_features", selection.final_features}}},
                          {"reports", std::move(report_map)},
                          {"failed", failed},
                          {"warnings", warnings}};
}

std::string CompareResult::table_text() const {
    std::ostringstream out;
    out << std::left << std::setw(6) << "model" << std::right << std::setw(10) << "accuracy"
        << std::setw(11) << "precision" << std::setw(9) << "recall" << std::setw(9) << "f1"
        << std::setw(12) << "auc(score)" << std::setw(11) << "auc(hard)" << '\n';
    out << std::string(68, '-') << '\n';
    out << std::setprecision(4) << std::fixed;
    for (const auto& [name, report] : reports) {
        out << std::left << std::setw(6) << name << std::right << std::setw(10)
            << report.metrics.accuracy << std::setw(11) << report.metrics.weighted_precision
            << std::setw(9) << report.metrics.weighted_recall << std::setw(9)
            << report.metrics.weighted_f1 << std::setw(12) << report.auc_scores << std::setw(11)
            << report.auc_hard_labels;
        if (!report.converged) out << "  (not converged)";
        out << '\n';
    }
    for (const auto& name : failed) {
        out << std::left << std::setw(6) << name << "  training failed\n";
    }
    return out.str();
}

CompareResult run_compare(const RunConfig& config) {
    CompareResult result;
    result.seed = config.seed;
    result.timestamp =
        config.timestamp_override ? *config.timestamp_override : current_timestamp_utc();

    const RawTable table = load_csv(config.input_path, credit_risk_schema(), &result.warnings);
    PreparedData data = prepare(table, config);
    result.selection = data.selection;
    result.train_rows = data.train.rows;
    result.test_rows = data.test.rows;

    for (const auto kind : config.models) {
        const std::string name = model_kind_name(kind);
        try {
            const auto model = train_kind(kind, data.train, config);
            EvalReport report = evaluate_model(*model, data.test, config.roc_mode);
            if (!report.converged) {
                result.warnings.push_back(name + ": stopped at the update cap; results kept");
            }
            result.reports.emplace(name, std::move(report));
        } catch (const Error& e) {
            result.failed.push_back(name);
            result.warnings.push_back(name + ": " + e.what());
        }
    }

    const auto dir = ensure_output_dir(config);
    write_text_file(dir / "report.json", result.to_json().dump(2) + "\n");
    write_text_file(dir / "comparison.txt", result.table_text());
    if (config.emit_svg) {
        std::vector<RocSeries> series;
        for (const auto& [name, report] : result.reports) {
            series.push_back({name, report.roc.fpr, report.roc.tpr, report.roc.auc});
        }
        write_text_file(dir / "roc.svg", roc_svg(series));
    }
    return result;
}

} // namespace crl
