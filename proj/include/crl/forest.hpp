#pragma once

#include "crl/tree.hpp"

namespace crl {

class ForestModel : public Model {
public:
    ForestModel(std::vector<std::vector<TreeNode>> trees, int features_per_split,
                bool bootstrap, std::uint64_t seed);

    ModelKind kind() const override { return ModelKind::Forest; }
    // Score = fraction of trees voting 1; label = score >= 0.5.
    Prediction predict(std::span<const double> x) const override;
    nlohmann::json params_json() const override;

    std::size_t tree_count() const { return trees_.size(); }
    const TreeModel& tree(std::size_t i) const { return trees_[i]; }

    static std::unique_ptr<ForestModel> from_json(const nlohmann::json& j);

private:
    std::vector<TreeModel> trees_;
    int features_per_split_;
    bool bootstrap_;
    std::uint64_t seed_;
};

// Bagged CART ensemble. Tree t draws its bootstrap sample and per-split
// feature subsets from a stream derived from (seed, t), so the result is
// identical for any worker count.
std::unique_ptr<ForestModel> train_forest(const DesignMatrix& train,
                                          const ForestParams& params);

} // namespace crl
