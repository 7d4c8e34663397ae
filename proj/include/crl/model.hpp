#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"

#include "crl/preprocess.hpp"

namespace crl {

enum class ModelKind { Logistic, Svm, Tree, Forest };

const char* model_kind_name(ModelKind kind); // "lr", "svm", "dt", "rf"
ModelKind model_kind_from_name(const std::string& name);

struct Prediction {
    int label = 0;
    double score = 0.0;
};

struct LogisticParams {
    double learning_rate = 0.1;
    double l2_lambda = 1e-4;
    int max_epochs = 500;
    double tolerance = 1e-6;
};

enum class SvmKernel { Linear, Rbf };

struct SvmParams {
    double c = 1.0;
    SvmKernel kernel = SvmKernel::Rbf;
    double gamma = 0.0; // <= 0: 1 / (d * mean feature variance)
    double tolerance = 1e-3;
    int max_passes = 5;          // consecutive update-free passes to converge
    std::int64_t max_updates = 200000; // safety cap; exceeding it flags NoConvergence
};

struct TreeParams {
    int max_depth = -1; // < 0 means unlimited
    int min_samples_split = 2;
    double min_gini_decrease = 0.0;
};

struct ForestParams {
    int n_trees = 100;
    int features_per_split = 0; // <= 0: floor(sqrt(d))
    bool bootstrap = true;
    std::uint64_t seed = 0;
    int threads = 1;
    TreeParams tree;
};

struct Hyperparams {
    LogisticParams logistic;
    SvmParams svm;
    TreeParams tree;
    ForestParams forest;
};

// Common trained-classifier contract: hard label + the model's natural
// real-valued score. Immutable and thread-safe once trained.
class Model {
public:
    virtual ~Model() = default;

    virtual ModelKind kind() const = 0;
    virtual Prediction predict(std::span<const double> x) const = 0;
    virtual nlohmann::json params_json() const = 0;

    std::vector<Prediction> predict_all(const DesignMatrix& matrix) const;
};

std::unique_ptr<Model> model_from_json(ModelKind kind, const nlohmann::json& params);

double sigmoid(double z);

} // namespace crl
