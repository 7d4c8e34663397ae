#include "crl/logistic.hpp"

#include <cmath>

#include "crl/error.hpp"

namespace crl {

namespace {

void check_labels(const DesignMatrix& data) {
    if (data.rows == 0) {
        throw Error(ErrorCode::InvalidArgument, "cannot train on an empty matrix");
    }
    for (const auto label : data.labels) {
        if (label > 1) throw Error(ErrorCode::NonBinaryLabels, "labels must be 0 or 1");
    }
}

double dot_row(std::span<const double> row, std::span<const double> weights) {
    double z = 0.0;
    for (std::size_t c = 0; c < row.size(); ++c) z += row[c] * weights[c];
    return z;
}

} // namespace

double logistic_loss(const DesignMatrix& data, std::span<const double> weights, double bias,
                     double l2_lambda) {
    check_labels(data);
    const auto n = static_cast<double>(data.rows);
    double loss = 0.0;
    for (std::size_t r = 0; r < data.rows; ++r) {
        const double z = dot_row(data.row(r), weights) + bias;
        const double y = data.labels[r];
        // log(1 + e^-|z|) form keeps both branches finite
        loss += std::log1p(std::exp(-std::abs(z))) + (z > 0.0 ? (1.0 - y) * z : -y * z);
    }
    loss /= n;
    double reg = 0.0;
    for (const double w : weights) reg += w * w;
    return loss + 0.5 * l2_lambda * reg;
}

std::vector<double> logistic_gradient(const DesignMatrix& data, std::span<const double> weights,
                                      double bias, double l2_lambda) {
    check_labels(data);
    const auto n = static_cast<double>(data.rows);
    std::vector<double> grad(data.cols + 1, 0.0);
    for (std::size_t r = 0; r < data.rows; ++r) {
        const auto row = data.row(r);
        const double err = sigmoid(dot_row(row, weights) + bias) - data.labels[r];
        for (std::size_t c = 0; c < data.cols; ++c) grad[c] += err * row[c];
        grad[data.cols] += err;
    }
    for (std::size_t c = 0; c < data.cols; ++c) {
        grad[c] = grad[c] / n + l2_lambda * weights[c];
    }
    grad[data.cols] /= n;
    return grad;
}

std::unique_ptr<LogisticModel> train_logistic(const DesignMatrix& train,
                                              const LogisticParams& params) {
    check_labels(train);
    std::vector<double> weights(train.cols, 0.0);
    double bias = 0.0;
    double previous_loss = logistic_loss(train, weights, bias, params.l2_lambda);

    for (int epoch = 0; epoch < params.max_epochs; ++epoch) {
        const auto grad = logistic_gradient(train, weights, bias, params.l2_lambda);
        double inf_norm = 0.0;
        for (const double g : grad) inf_norm = std::max(inf_norm, std::abs(g));
        if (inf_norm < params.tolerance) break;

        for (std::size_t c = 0; c < train.cols; ++c) {
            weights[c] -= params.learning_rate * grad[c];
        }
        bias -= params.learning_rate * grad[train.cols];

        const double loss = logistic_loss(train, weights, bias, params.l2_lambda);
        if (!std::isfinite(loss) || loss > previous_loss + 1e3) {
            throw Error(ErrorCode::DivergenceDetected,
                        "loss exploded; lower the learning rate");
        }
        previous_loss = loss;
    }
    return std::make_unique<LogisticModel>(std::move(weights), bias);
}

Prediction LogisticModel::predict(std::span<const double> x) const {
    if (x.size() != weights_.size()) {
        throw Error(ErrorCode::DimensionMismatch, "feature count differs from training");
    }
    const double p = sigmoid(dot_row(x, weights_) + bias_);
    return {p >= 0.5 ? 1 : 0, p};
}

nlohmann::json LogisticModel::params_json() const {
    return nlohmann::json{{"weights", weights_}, {"bias", bias_}};
}

std::unique_ptr<LogisticModel> LogisticModel::from_json(const nlohmann::json& j) {
    return std::make_unique<LogisticModel>(j.at("weights").get<std::vector<double>>(),
                                           j.at("bias").get<double>());
}

} // namespace crl
