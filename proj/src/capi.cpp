#include "crl.h"

#include <cstring>
#include <filesystem>
#include <new>
#include <string>

#include "json.hpp"

#include "crl/csv.hpp"
#include "crl/error.hpp"
#include "crl/model_io.hpp"
#include "crl/pipeline.hpp"
#include "crl/schema.hpp"
#include "crl/synth.hpp"
#include "crl/table.hpp"

namespace {

thread_local std::string g_last_error;

char* dup_string(const std::string& text) {
    char* out = new (std::nothrow) char[text.size() + 1];
    if (out == nullptr) return nullptr;
    std::memcpy(out, text.c_str(), text.size() + 1);
    return out;
}

crl_status status_for(const crl::Error& e) {
    switch (e.code()) {
        case crl::ErrorCode::IoError: return CRL_ERROR_IO;
        case crl::ErrorCode::InvalidArgument: return CRL_ERROR_ARGUMENT;
        default: return CRL_ERROR_SCHEMA;
    }
}

// Wraps a callable, translating exceptions into status codes + last-error.
template <typename Fn>
crl_status guarded(Fn&& fn) {
    try {
        g_last_error.clear();
        return fn();
    } catch (const crl::Error& e) {
        g_last_error = e.what();
        return status_for(e);
    } catch (const nlohmann::json::exception& e) {
        g_last_error = e.what();
        return CRL_ERROR_ARGUMENT;
    } catch (const std::exception& e) {
        g_last_error = e.what();
        return CRL_ERROR_INTERNAL;
    } catch (...) {
        g_last_error = "unknown failure";
        return CRL_ERROR_INTERNAL;
    }
}

crl_status set_output(char** out, const std::string& text) {
    *out = dup_string(text);
    if (*out == nullptr) {
        g_last_error = "out of memory";
        return CRL_ERROR_INTERNAL;
    }
    return CRL_OK;
}

std::vector<std::string> split_list(const std::string& text) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (start <= text.size()) {
        const auto comma = text.find(',', start);
        const auto stop = comma == std::string::npos ? text.size() : comma;
        const auto item = crl::trim(text.substr(start, stop - start));
        if (!item.empty()) out.push_back(item);
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    return out;
}

std::vector<std::string> string_list(const nlohmann::json& value) {
    if (value.is_string()) return split_list(value.get<std::string>());
    return value.get<std::vector<std::string>>();
}

struct ParsedConfig {
    crl::RunConfig run;
    std::string model = "rf";           // train kind
    std::vector<std::string> models;    // compare list; empty = default four
    std::string model_file;             // evaluate input
    bool holdout_only = true;
};

nlohmann::json artifact_paths(const std::string& dir,
                              std::initializer_list<const char*> names) {
    nlohmann::json out = nlohmann::json::object();
    for (const char* name : names) {
        out[name] = (std::filesystem::path(dir) / name).string();
    }
    return out;
}

ParsedConfig parse_config(const char* config_json) {
    ParsedConfig parsed;
    nlohmann::json j = nlohmann::json::object();
    if (config_json != nullptr && config_json[0] != '\0') {
        j = nlohmann::json::parse(config_json);
    }
    if (!j.is_object()) {
        throw crl::Error(crl::ErrorCode::InvalidArgument, "config must be a JSON object");
    }
    auto& run = parsed.run;
    for (const auto& [key, value] : j.items()) {
        if (key == "input") {
            run.input_path = value.get<std::string>();
        } else if (key == "out") {
            run.output_dir = value.get<std::string>();
        } else if (key == "seed") {
            run.seed = value.get<std::uint64_t>();
        } else if (key == "train-frac") {
            run.train_fraction = value.get<double>();
        } else if (key == "threshold") {
            run.selection_threshold = value.get<double>();
        } else if (key == "drop") {
            run.manual_drops = string_list(value);
        } else if (key == "roc") {
            const auto mode = value.get<std::string>();
            if (mode == "scores") {
                run.roc_mode = crl::RocMode::Scores;
            } else if (mode == "hard-labels") {
                run.roc_mode = crl::RocMode::HardLabels;
            } else {
                throw crl::Error(crl::ErrorCode::InvalidArgument,
                                 "roc must be 'scores' or 'hard-labels'");
            }
        } else if (key == "svg") {
            run.emit_svg = value.get<bool>();
        } else if (key == "threads") {
            run.threads = value.get<int>();
        } else if (key == "model") {
            parsed.model = value.get<std::string>();
        } else if (key == "models") {
            parsed.models = string_list(value);
        } else if (key == "model-file") {
            parsed.model_file = value.get<std::string>();
        } else if (key == "split") {
            const auto split = value.get<std::string>();
            if (split == "test") {
                parsed.holdout_only = true;
            } else if (split == "all") {
                parsed.holdout_only = false;
            } else {
                throw crl::Error(crl::ErrorCode::InvalidArgument, "split must be 'test' or 'all'");
            }
        } else if (key == "timestamp") {
            run.timestamp_override = value.get<std::string>();
        } else if (key == "lr") {
            run.hyperparams.logistic.learning_rate = value.get<double>();
        } else if (key == "epochs") {
            run.hyperparams.logistic.max_epochs = value.get<int>();
        } else if (key == "l2") {
            run.hyperparams.logistic.l2_lambda = value.get<double>();
        } else if (key == "svm-c") {
            run.hyperparams.svm.c = value.get<double>();
        } else if (key == "svm-kernel") {
            const auto kernel = value.get<std::string>();
            if (kernel == "rbf") {
                run.hyperparams.svm.kernel = crl::SvmKernel::Rbf;
            } else if (kernel == "linear") {
                run.hyperparams.svm.kernel = crl::SvmKernel::Linear;
            } else {
                throw crl::Error(crl::ErrorCode::InvalidArgument,
                                 "svm-kernel must be 'rbf' or 'linear'");
            }
        } else if (key == "svm-gamma") {
            run.hyperparams.svm.gamma = value.get<double>();
        } else if (key == "n-trees") {
            run.hyperparams.forest.n_trees = value.get<int>();
        } else if (key == "max-depth") {
            run.hyperparams.tree.max_depth = value.get<int>();
        } else if (key == "min-samples-split") {
            run.hyperparams.tree.min_samples_split = value.get<int>();
        } else if (key == "features-per-split") {
            run.hyperparams.forest.features_per_split = value.get<int>();
        } else if (key == "no-bootstrap") {
            run.hyperparams.forest.bootstrap = !value.get<bool>();
        } else {
            throw crl::Error(crl::ErrorCode::InvalidArgument,
                             "unrecognized config key '" + key + "'");
        }
    }
    if (run.input_path.empty() && parsed.model_file.empty()) {
        throw crl::Error(crl::ErrorCode::InvalidArgument, "config needs 'input'");
    }
    if (!(run.train_fraction > 0.0 && run.train_fraction < 1.0)) {
        throw crl::Error(crl::ErrorCode::InvalidArgument, "train-frac must be in (0,1)");
    }
    if (!(run.selection_threshold > 0.0)) {
        throw crl::Error(crl::ErrorCode::InvalidArgument, "threshold must be > 0");
    }
    return parsed;
}

} // namespace

struct crl_dataset {
    crl::RawTable table;
    std::vector<std::string> warnings;
};

struct crl_model {
    crl::ModelDocument document;
};

extern "C" {

const char* crl_version(void) { return "1.0.0"; }

const char* crl_last_error(void) { return g_last_error.c_str(); }

void crl_free(char* text) { delete[] text; }

crl_status crl_dataset_open(const char* csv_path, crl_dataset** out) {
    if (csv_path == nullptr || out == nullptr) {
        g_last_error = "null argument";
        return CRL_ERROR_ARGUMENT;
    }
    *out = nullptr;
    return guarded([&]() -> crl_status {
        std::vector<std::string> warnings;
        auto table = crl::load_csv(csv_path, crl::credit_risk_schema(), &warnings);
        *out = new crl_dataset{std::move(table), std::move(warnings)};
        return CRL_OK;
    });
}

void crl_dataset_close(crl_dataset* dataset) { delete dataset; }

int64_t crl_dataset_row_count(const crl_dataset* dataset) {
    if (dataset == nullptr) return -1;
    return static_cast<int64_t>(dataset->table.row_count());
}

crl_status crl_dataset_missing_summary(const crl_dataset* dataset, char** out_json) {
    if (dataset == nullptr || out_json == nullptr) {
        g_last_error = "null argument";
        return CRL_ERROR_ARGUMENT;
    }
    *out_json = nullptr;
    return guarded([&]() -> crl_status {
        const auto counts = crl::missing_summary(dataset->table);
        nlohmann::json summary = nlohmann::json::object();
        const auto& schema = dataset->table.schema();
        for (std::size_t c = 0; c < schema.size(); ++c) {
            summary[schema.columns[c].name] = counts[c];
        }
        return set_output(out_json, summary.dump());
    });
}

crl_status crl_write_synthetic_csv(const char* path, int64_t rows, uint64_t seed) {
    if (path == nullptr) {
        g_last_error = "null argument";
        return CRL_ERROR_ARGUMENT;
    }
    if (rows < 4) {
        g_last_error = "rows must be at least 4";
        return CRL_ERROR_ARGUMENT;
    }
    return guarded([&]() -> crl_status {
        crl::synth::write_synthetic_csv(path, static_cast<std::size_t>(rows), seed);
        return CRL_OK;
    });
}

crl_status crl_run_eda(const char* config_json, char** out_summary_json) {
    if (out_summary_json == nullptr) {
        g_last_error = "null argument";
        return CRL_ERROR_ARGUMENT;
    }
    *out_summary_json = nullptr;
    return guarded([&]() -> crl_status {
        const auto parsed = parse_config(config_json);
        const auto result = crl::run_eda(parsed.run);
        auto artifacts = artifact_paths(
            parsed.run.output_dir,
            {"correlation.csv", "profiles.csv", "profiles.json", "selection.json"});
        if (parsed.run.emit_svg) {
            artifacts.update(artifact_paths(parsed.run.output_dir, {"correlation-heatmap.svg"}));
        }
        nlohmann::json summary{{"rows", result.rows},
                               {"selection", result.selection_json()},
                               {"profiles", result.profiles_json()},
                               {"artifacts", std::move(artifacts)},
                               {"warnings", result.warnings}};
        return set_output(out_summary_json, summary.dump());
    });
}

crl_status crl_run_train(const char* config_json, char** out_summary_json) {
    if (out_summary_json == nullptr) {
        g_last_error = "null argument";
        return CRL_ERROR_ARGUMENT;
    }
    *out_summary_json = nullptr;
    return guarded([&]() -> crl_status {
        const auto parsed = parse_config(config_json);
        const auto kind = crl::model_kind_from_name(parsed.model);
        const auto result = crl::run_train(parsed.run, kind);
        nlohmann::json summary{{"model_path", result.model_path},
                               {"model", crl::model_kind_name(kind)},
                               {"train_rows", result.train_rows},
                               {"test_rows", result.test_rows},
                               {"features", result.document.features},
                               {"converged", result.document.metadata.converged},
                               {"warnings", result.warnings}};
        return set_output(out_summary_json, summary.dump());
    });
}

crl_status crl_run_evaluate(const char* config_json, char** out_summary_json) {
    if (out_summary_json == nullptr) {
        g_last_error = "null argument";
        return CRL_ERROR_ARGUMENT;
    }
    *out_summary_json = nullptr;
    return guarded([&]() -> crl_status {
        const auto parsed = parse_config(config_json);
        if (parsed.model_file.empty()) {
            throw crl::Error(crl::ErrorCode::InvalidArgument, "config needs 'model-file'");
        }
        const auto result =
            crl::run_evaluate(parsed.run, parsed.model_file, parsed.holdout_only);
        nlohmann::json summary = result.to_json();
        auto artifacts = artifact_paths(parsed.run.output_dir, {"report.json", "roc.csv"});
        if (parsed.run.emit_svg) {
            artifacts.update(
                artifact_paths(parsed.run.output_dir, {"roc.svg", "correlation-heatmap.svg"}));
        }
        summary["artifacts"] = std::move(artifacts);
        return set_output(out_summary_json, summary.dump());
    });
}

crl_status crl_run_compare(const char* config_json, char** out_summary_json) {
    if (out_summary_json == nullptr) {
        g_last_error = "null argument";
        return CRL_ERROR_ARGUMENT;
    }
    *out_summary_json = nullptr;
    return guarded([&]() -> crl_status {
        auto parsed = parse_config(config_json);
        if (!parsed.models.empty()) {
            parsed.run.models.clear();
            for (const auto& name : parsed.models) {
                parsed.run.models.push_back(crl::model_kind_from_name(name));
            }
        }
        const auto result = crl::run_compare(parsed.run);
        nlohmann::json summary = result.to_json();
        auto artifacts = artifact_paths(parsed.run.output_dir, {"report.json", "comparison.txt"});
        if (parsed.run.emit_svg) {
            artifacts.update(artifact_paths(parsed.run.output_dir, {"roc.svg"}));
        }
        summary["artifacts"] = std::move(artifacts);
        summary["table"] = result.table_text();
        return set_output(out_summary_json, summary.dump());
    });
}

crl_status crl_model_open(const char* path, crl_model** out) {
    if (path == nullptr || out == nullptr) {
        g_last_error = "null argument";
        return CRL_ERROR_ARGUMENT;
    }
    *out = nullptr;
    return guarded([&]() -> crl_status {
        auto document = crl::load_model(path);
        *out = new crl_model{std::move(document)};
        return CRL_OK;
    });
}

void crl_model_close(crl_model* model) { delete model; }

crl_status crl_model_summary(const crl_model* model, char** out_json) {
    if (model == nullptr || out_json == nullptr) {
        g_last_error = "null argument";
        return CRL_ERROR_ARGUMENT;
    }
    *out_json = nullptr;
    return guarded([&]() -> crl_status {
        const auto& doc = model->document;
        nlohmann::json summary{{"model", crl::model_kind_name(doc.kind)},
                               {"features", doc.features},
                               {"format_version", doc.format_version},
                               {"schema_digest", doc.schema_digest},
                               {"metadata",
                                nlohmann::json{{"seed", doc.metadata.seed},
                                               {"train_fraction", doc.metadata.train_fraction},
                                               {"trained_rows", doc.metadata.trained_rows},
                                               {"timestamp", doc.metadata.timestamp},
                                               {"converged", doc.metadata.converged}}}};
        return set_output(out_json, summary.dump());
    });
}

crl_status crl_model_predict(const crl_model* model, const crl_dataset* dataset,
                             char** out_json) {
    if (model == nullptr || dataset == nullptr || out_json == nullptr) {
        g_last_error = "null argument";
        return CRL_ERROR_ARGUMENT;
    }
    *out_json = nullptr;
    return guarded([&]() -> crl_status {
        const auto matrix = model->document.transform(dataset->table);
        const auto predictions = model->document.model->predict_all(matrix);
        nlohmann::json rows = nlohmann::json::array();
        for (const auto& p : predictions) {
            rows.push_back(nlohmann::json{{"label", p.label}, {"score", p.score}});
        }
        return set_output(out_json, rows.dump());
    });
}

} // extern "C"
