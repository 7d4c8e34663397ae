#include "crl/forest.hpp"

#include <atomic>
#include <cmath>
#include <thread>

#include "crl/error.hpp"

namespace crl {

std::unique_ptr<ForestModel> train_forest(const DesignMatrix& train, const ForestParams& params) {
    if (train.rows == 0) {
        throw Error(ErrorCode::InvalidArgument, "cannot train on an empty matrix");
    }
    if (params.n_trees <= 0) {
        throw Error(ErrorCode::InvalidArgument, "forest needs at least one tree");
    }
    int per_split = params.features_per_split;
    if (per_split <= 0) {
        per_split = static_cast<int>(std::floor(std::sqrt(static_cast<double>(train.cols))));
        per_split = std::max(per_split, 1);
    }

    const auto n_trees = static_cast<std::size_t>(params.n_trees);
    std::vector<std::vector<TreeNode>> trees(n_trees);

    // Every tree draws from its own derived stream, so the ensemble is a
    // pure function of (seed, t) no matter how trees land on workers.
    auto build_one = [&](std::size_t t) {
        Rng rng(derive_seed(params.seed, t));
        std::vector<std::size_t> rows;
        if (params.bootstrap) {
            rows.resize(train.rows);
            for (auto& r : rows) r = rng.below(train.rows);
        }
        TreeTrainControl control;
        control.rows = rows;
        control.features_per_split = per_split;
        control.feature_rng = &rng;
        auto tree = train_tree(train, params.tree, control);
        trees[t] = tree->nodes();
    };

    int threads = params.threads;
    if (threads <= 0) threads = static_cast<int>(std::thread::hardware_concurrency());
    threads = std::max(1, std::min<int>(threads, static_cast<int>(n_trees)));

    if (threads == 1) {
        for (std::size_t t = 0; t < n_trees; ++t) build_one(t);
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> workers;
        workers.reserve(threads);
        for (int w = 0; w < threads; ++w) {
            workers.emplace_back([&] {
                for (std::size_t t = next.fetch_add(1); t < n_trees; t = next.fetch_add(1)) {
                    build_one(t);
                }
            });
        }
        for (auto& worker : workers) worker.join();
    }

    return std::make_unique<ForestModel>(std::move(trees), per_split, params.bootstrap,
                                         params.seed);
}

ForestModel::ForestModel(std::vector<std::vector<TreeNode>> trees, int features_per_split,
                         bool bootstrap, std::uint64_t seed)
    : features_per_split_(features_per_split), bootstrap_(bootstrap), seed_(seed) {
    trees_.reserve(trees.size());
    for (auto& nodes : trees) trees_.emplace_back(std::move(nodes));
}

Prediction ForestModel::predict(std::span<const double> x) const {
    std::size_t votes = 0;
    for (const auto& tree : trees_) votes += tree.predict(x).label;
    const double score = static_cast<double>(votes) / static_cast<double>(trees_.size());
    return {score >= 0.5 ? 1 : 0, score};
}

nlohmann::json ForestModel::params_json() const {
    nlohmann::json trees = nlohmann::json::array();
    for (const auto& tree : trees_) trees.push_back(tree.params_json().at("nodes"));
    return nlohmann::json{{"trees", std::move(trees)},
                          {"features_per_split", features_per_split_},
                          {"bootstrap", bootstrap_},
                          {"seed", seed_}};
}

std::unique_ptr<ForestModel> ForestModel::from_json(const nlohmann::json& j) {
    std::vector<std::vector<TreeNode>> trees;
    for (const auto& nodes : j.at("trees")) {
        auto tree = TreeModel::from_json(nlohmann::json{{"nodes", nodes}});
        trees.push_back(tree->nodes());
    }
    if (trees.empty()) {
        throw Error(ErrorCode::InvalidArgument, "forest document holds no trees");
    }
    return std::make_unique<ForestModel>(std::move(trees), j.at("features_per_split").get<int>(),
                                         j.at("bootstrap").get<bool>(),
                                         j.at("seed").get<std::uint64_t>());
}

} // namespace crl
