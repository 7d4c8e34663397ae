#pragma once

#include "crl/model.hpp"

namespace crl {

class SvmModel : public Model {
public:
    struct SupportVector {
        std::vector<double> x;
        double coeff = 0.0; // alpha_i * y_i
    };

    SvmModel(SvmKernel kernel, double gamma, std::vector<SupportVector> support,
             double bias, bool converged);

    ModelKind kind() const override { return ModelKind::Svm; }
    Prediction predict(std::span<const double> x) const override;
    nlohmann::json params_json() const override;

    // Sum of coeff_i * k(sv_i, x) + b.
    double decision(std::span<const double> x) const;

    SvmKernel kernel() const { return kernel_; }
    double gamma() const { return gamma_; }
    double bias() const { return bias_; }
    bool converged() const { return converged_; }
    const std::vector<SupportVector>& support_vectors() const { return support_; }

    static std::unique_ptr<SvmModel> from_json(const nlohmann::json& j);

private:
    void cache_linear_weights();

    SvmKernel kernel_;
    double gamma_;
    std::vector<SupportVector> support_;
    double bias_;
    bool converged_;
    std::vector<double> linear_weights_; // linear kernel only
};

double kernel_value(SvmKernel kernel, double gamma, std::span<const double> a,
                    std::span<const double> b);

// Soft-margin dual via sequential minimal optimization (Platt-style pair
// selection with an error cache). Labels map internally to {-1,+1}.
// Converges after `max_passes` consecutive full passes with no alpha update
// triggered by a KKT violation beyond `tolerance`; hitting `max_updates`
// first returns the model flagged as not converged.
std::unique_ptr<SvmModel> train_svm(const DesignMatrix& train, const SvmParams& params);

} // namespace crl
