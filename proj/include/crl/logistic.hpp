#pragma once

#include "crl/model.hpp"

namespace crl {

class LogisticModel : public Model {
public:
    LogisticModel(std::vector<double> weights, double bias)
        : weights_(std::move(weights)), bias_(bias) {}

    ModelKind kind() const override { return ModelKind::Logistic; }
    Prediction predict(std::span<const double> x) const override;
    nlohmann::json params_json() const override;

    const std::vector<double>& weights() const { return weights_; }
    double bias() const { return bias_; }

    static std::unique_ptr<LogisticModel> from_json(const nlohmann::json& j);

private:
    std::vector<double> weights_;
    double bias_;
};

// L2-regularized mean log-loss objective; the quantity the trainer descends
// and the finite-difference tests probe.
double logistic_loss(const DesignMatrix& data, std::span<const double> weights,
                     double bias, double l2_lambda);

// Gradient of logistic_loss; last entry of the returned vector is d/d bias.
std::vector<double> logistic_gradient(const DesignMatrix& data,
                                      std::span<const double> weights, double bias,
                                      double l2_lambda);

// Full-batch gradient descent from zero initialization. Stops at max_epochs
// or when the gradient infinity-norm falls under tolerance. Throws
// NonBinaryLabels / DivergenceDetected.
std::unique_ptr<LogisticModel> train_logistic(const DesignMatrix& train,
                                              const LogisticParams& params);

} // namespace crl
