#include "crl/tree.hpp"

#include <algorithm>
#include <cmath>

#include "crl/error.hpp"

namespace crl {

namespace {

struct SplitChoice {
    int feature = -1;
    double threshold = 0.0;
    double decrease = -1.0;
};

struct ValueLabel {
    double value;
    std::uint8_t label;
};

// Weighted Gini decrease for the best midpoint threshold on one feature.
// `pairs` must arrive sorted by value. Returns nullopt when the feature is
// constant over the node.
std::optional<std::pair<double, double>> best_threshold(const std::vector<ValueLabel>& pairs,
                                                        double parent_impurity) {
    const std::size_t m = pairs.size();
    std::uint64_t total1 = 0;
    for (const auto& p : pairs) total1 += p.label;
    const std::uint64_t total0 = m - total1;

    double best_decrease = -1.0;
    double best_thr = 0.0;
    std::uint64_t left1 = 0;
    std::size_t left = 0;
    while (left < m) {
        // absorb the run of equal values
        const double value = pairs[left].value;
        while (left < m && pairs[left].value == value) {
            left1 += pairs[left].label;
            ++left;
        }
        if (left == m) break;

        double threshold = 0.5 * (value + pairs[left].value);
        // guard against the midpoint rounding down onto the lower value
        if (!(value < threshold)) threshold = pairs[left].value;

        const std::uint64_t left0 = left - left1;
        const std::uint64_t right0 = total0 - left0;
        const std::uint64_t right1 = total1 - left1;
        const double wl = static_cast<double>(left) / static_cast<double>(m);
        const double wr = 1.0 - wl;
        const double decrease = parent_impurity - wl * gini_impurity(left0, left1) -
                                wr * gini_impurity(right0, right1);
        if (decrease > best_decrease) {
            best_decrease = decrease;
            best_thr = threshold;
        }
    }
    if (best_decrease == -1.0) return std::nullopt; // constant feature, no boundary
    return std::make_pair(best_decrease, best_thr);
}

struct BuildItem {
    std::vector<std::size_t> rows;
    int node = 0;
    int depth = 0;
};

} // namespace

double gini_impurity(std::uint64_t count0, std::uint64_t count1) {
    const std::uint64_t total = count0 + count1;
    if (total == 0) {
        throw Error(ErrorCode::EmptyNode, "Gini impurity of an empty node");
    }
    const double p0 = static_cast<double>(count0) / static_cast<double>(total);
    const double p1 = static_cast<double>(count1) / static_cast<double>(total);
    return 1.0 - p0 * p0 - p1 * p1;
}

std::unique_ptr<TreeModel> train_tree(const DesignMatrix& train, const TreeParams& params,
                                      const TreeTrainControl& control) {
    if (train.rows == 0) {
        throw Error(ErrorCode::InvalidArgument, "cannot train on an empty matrix");
    }
    for (const auto label : train.labels) {
        if (label > 1) throw Error(ErrorCode::NonBinaryLabels, "labels must be 0 or 1");
    }

    std::vector<std::size_t> root_rows;
    if (control.rows.empty()) {
        root_rows.resize(train.rows);
        for (std::size_t i = 0; i < train.rows; ++i) root_rows[i] = i;
    } else {
        root_rows.assign(control.rows.begin(), control.rows.end());
    }

    const int total_features = static_cast<int>(train.cols);
    int per_split = control.features_per_split;
    if (per_split <= 0 || per_split > total_features) per_split = total_features;

    std::vector<TreeNode> nodes;
    nodes.emplace_back();
    std::vector<BuildItem> stack;
    stack.push_back({std::move(root_rows), 0, 0});

    std::vector<ValueLabel> pairs;
    std::vector<std::size_t> candidate_features;

    while (!stack.empty()) {
        BuildItem item = std::move(stack.back());
        stack.pop_back();

        std::uint64_t count1 = 0;
        for (const auto r : item.rows) count1 += train.labels[r];
        const std::uint64_t count0 = item.rows.size() - count1;
        nodes[item.node].count0 = static_cast<std::uint32_t>(count0);
        nodes[item.node].count1 = static_cast<std::uint32_t>(count1);

        const bool depth_capped = params.max_depth >= 0 && item.depth >= params.max_depth;
        if (depth_capped || count0 == 0 || count1 == 0 ||
            item.rows.size() < static_cast<std::size_t>(params.min_samples_split)) {
            continue; // leaf
        }

        if (control.feature_rng != nullptr && per_split < total_features) {
            candidate_features =
                control.feature_rng->sample_without_replacement(train.cols, per_split);
        } else {
            candidate_features.resize(train.cols);
            for (std::size_t c = 0; c < train.cols; ++c) candidate_features[c] = c;
        }

        const double parent_impurity = gini_impurity(count0, count1);
        SplitChoice best;
        for (const auto feature : candidate_features) {
            pairs.clear();
            pairs.reserve(item.rows.size());
            for (const auto r : item.rows) {
                pairs.push_back({train.at(r, feature), train.labels[r]});
            }
            std::sort(pairs.begin(), pairs.end(),
                      [](const ValueLabel& a, const ValueLabel& b) { return a.value < b.value; });
            const auto found = best_threshold(pairs, parent_impurity);
            if (!found) continue;
            // strict > keeps the lowest feature index on ties
            if (found->first > best.decrease) {
                best.decrease = found->first;
                best.threshold = found->second;
                best.feature = static_cast<int>(feature);
            }
        }

        // the 1e-12 slack lets genuinely zero-decrease splits through the
        // default threshold despite accumulated rounding
        if (best.feature < 0 || best.decrease < params.min_gini_decrease - 1e-12) {
            continue; // leaf
        }

        std::vector<std::size_t> left_rows, right_rows;
        for (const auto r : item.rows) {
            (train.at(r, best.feature) < best.threshold ? left_rows : right_rows).push_back(r);
        }
        if (left_rows.empty() || right_rows.empty()) continue; // unreachable by construction

        const int left_index = static_cast<int>(nodes.size());
        const int right_index = left_index + 1;
        nodes.emplace_back();
        nodes.emplace_back();
        nodes[item.node].feature = best.feature;
        nodes[item.node].threshold = best.threshold;
        nodes[item.node].left = left_index;
        nodes[item.node].right = right_index;

        stack.push_back({std::move(right_rows), right_index, item.depth + 1});
        stack.push_back({std::move(left_rows), left_index, item.depth + 1});
    }
    return std::make_unique<TreeModel>(std::move(nodes));
}

const TreeNode& TreeModel::leaf_for(std::span<const double> x) const {
    const TreeNode* node = &nodes_[0];
    while (!node->is_leaf()) {
        if (static_cast<std::size_t>(node->feature) >= x.size()) {
            throw Error(ErrorCode::DimensionMismatch, "feature count differs from training");
        }
        node = &nodes_[x[node->feature] < node->threshold ? node->left : node->right];
    }
    return *node;
}

Prediction TreeModel::predict(std::span<const double> x) const {
    const TreeNode& leaf = leaf_for(x);
    const auto total = static_cast<double>(leaf.count0) + static_cast<double>(leaf.count1);
    const double score = total > 0.0 ? static_cast<double>(leaf.count1) / total : 0.0;
    // majority label; exact tie goes to 0
    return {leaf.count1 > leaf.count0 ? 1 : 0, score};
}

int TreeModel::depth() const {
    // longest root-to-leaf edge count
    std::vector<std::pair<int, int>> stack{{0, 0}};
    int depth = 0;
    while (!stack.empty()) {
        const auto [index, d] = stack.back();
        stack.pop_back();
        const TreeNode& node = nodes_[index];
        if (node.is_leaf()) {
            depth = std::max(depth, d);
        } else {
            stack.push_back({node.left, d + 1});
            stack.push_back({node.right, d + 1});
        }
    }
    return depth;
}

nlohmann::json TreeModel::params_json() const {
    nlohmann::json array = nlohmann::json::array();
    for (const auto& node : nodes_) {
        array.push_back(nlohmann::json::array(
            {node.feature, node.threshold, node.left, node.right, node.count0, node.count1}));
    }
    return nlohmann::json{{"nodes", std::move(array)}};
}

std::unique_ptr<TreeModel> TreeModel::from_json(const nlohmann::json& j) {
    const auto& array = j.at("nodes");
    std::vector<TreeNode> nodes;
    nodes.reserve(array.size());
    const auto size = static_cast<int>(array.size());
    for (const auto& entry : array) {
        TreeNode node;
        node.feature = entry.at(0).get<int>();
        node.threshold = entry.at(1).get<double>();
        node.left = entry.at(2).get<int>();
        node.right = entry.at(3).get<int>();
        node.count0 = entry.at(4).get<std::uint32_t>();
        node.count1 = entry.at(5).get<std::uint32_t>();
        if (!node.is_leaf() &&
            (node.left <= 0 || node.left >= size || node.right <= 0 || node.right >= size)) {
            throw Error(ErrorCode::InvalidArgument, "tree child index out of range");
        }
        nodes.push_back(node);
    }
    if (nodes.empty()) {
        throw Error(ErrorCode::InvalidArgument, "tree document holds no nodes");
    }
    return std::make_unique<TreeModel>(std::move(nodes));
}

} // namespace crl
