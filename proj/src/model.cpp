#include "crl/model.hpp"

#include <cmath>

#include "crl/error.hpp"
#include "crl/forest.hpp"
#include "crl/logistic.hpp"
#include "crl/svm.hpp"
#include "crl/tree.hpp"

namespace crl {

const char* model_kind_name(ModelKind kind) {
    switch (kind) {
        case ModelKind::Logistic: return "lr";
        case ModelKind::Svm: return "svm";
        case ModelKind::Tree: return "dt";
        case ModelKind::Forest: return "rf";
    }
    return "?";
}

ModelKind model_kind_from_name(const std::string& name) {
    if (name == "lr") return ModelKind::Logistic;
    if (name == "svm") return ModelKind::Svm;
    if (name == "dt") return ModelKind::Tree;
    if (name == "rf") return ModelKind::Forest;
    throw Error(ErrorCode::InvalidArgument, "unknown model kind '" + name + "'");
}

std::vector<Prediction> Model::predict_all(const DesignMatrix& matrix) const {
    std::vector<Prediction> out;
    out.reserve(matrix.rows);
    for (std::size_t r = 0; r < matrix.rows; ++r) out.push_back(predict(matrix.row(r)));
    return out;
}

std::unique_ptr<Model> model_from_json(ModelKind kind, const nlohmann::json& params) {
    switch (kind) {
        case ModelKind::Logistic: return LogisticModel::from_json(params);
        case ModelKind::Svm: return SvmModel::from_json(params);
        case ModelKind::Tree: return TreeModel::from_json(params);
        case ModelKind::Forest: return ForestModel::from_json(params);
    }
    throw Error(ErrorCode::InvalidArgument, "unknown model kind");
}

double sigmoid(double z) {
    // split on sign so exp never overflows
    if (z >= 0.0) {
        return 1.0 / (1.0 + std::exp(-z));
    }
    const double e = std::exp(z);
    return e / (1.0 + e);
}

} // namespace crl
