#pragma once

#include <cstdint>
#include <optional>

#include "crl/model.hpp"
#include "crl/rng.hpp"

namespace crl {

// Flat node arena. feature < 0 marks a leaf; internal nodes route
// x[feature] < threshold to `left`, the rest to `right`.
struct TreeNode {
    int feature = -1;
    double threshold = 0.0;
    int left = -1;
    int right = -1;
    std::uint32_t count0 = 0;
    std::uint32_t count1 = 0;

    bool is_leaf() const { return feature < 0; }
};

class TreeModel : public Model {
public:
    explicit TreeModel(std::vector<TreeNode> nodes) : nodes_(std::move(nodes)) {}

    ModelKind kind() const override { return ModelKind::Tree; }
    Prediction predict(std::span<const double> x) const override;
    nlohmann::json params_json() const override;

    const std::vector<TreeNode>& nodes() const { return nodes_; }
    int depth() const;

    static std::unique_ptr<TreeModel> from_json(const nlohmann::json& j);

private:
    const TreeNode& leaf_for(std::span<const double> x) const;
    std::vector<TreeNode> nodes_;
};

// 1 - p0^2 - p1^2. Throws EmptyNode when both counts are zero.
double gini_impurity(std::uint64_t count0, std::uint64_t count1);

// CART with midpoint thresholds between consecutive distinct sorted values,
// maximizing weighted Gini decrease. Ties break to the lowest feature index,
// then the lowest threshold; leaf majority ties break toward label 0.
// `rows` selects the training rows (with repetition for bootstrap samples);
// `feature_rng`, when given, samples `features_per_split` candidate features
// at every node.
struct TreeTrainControl {
    std::span<const std::size_t> rows;        // empty: all rows
    int features_per_split = 0;               // <= 0: all features
    Rng* feature_rng = nullptr;
};

std::unique_ptr<TreeModel> train_tree(const DesignMatrix& train, const TreeParams& params,
                                      const TreeTrainControl& control = {});

} // namespace crl
