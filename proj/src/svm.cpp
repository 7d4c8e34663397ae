#include "crl/svm.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <unordered_map>

#include "crl/error.hpp"

namespace crl {

namespace {

double dot(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

double squared_distance(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        s += d * d;
    }
    return s;
}

// 1 / (d * mean per-column population variance), the usual scale heuristic.
double auto_gamma(const DesignMatrix& data) {
    double total_variance = 0.0;
    for (std::size_t c = 0; c < data.cols; ++c) {
        double sum = 0.0;
        for (std::size_t r = 0; r < data.rows; ++r) sum += data.at(r, c);
        const double mean = sum / static_cast<double>(data.rows);
        double ss = 0.0;
        for (std::size_t r = 0; r < data.rows; ++r) {
            const double d = data.at(r, c) - mean;
            ss += d * d;
        }
        total_variance += ss / static_cast<double>(data.rows);
    }
    const double mean_variance = total_variance / static_cast<double>(data.cols);
    if (mean_variance <= 0.0) return 1.0;
    return 1.0 / (static_cast<double>(data.cols) * mean_variance);
}

// Rows of the training kernel matrix, FIFO-evicted under a byte budget. SMO
// revisits the same margin candidates constantly, so hits dominate.
class KernelRowCache {
public:
    KernelRowCache(const DesignMatrix& data, SvmKernel kernel, double gamma,
                   std::size_t budget_bytes)
        : data_(data), kernel_(kernel), gamma_(gamma) {
        const std::size_t row_bytes = data.rows * sizeof(double);
        capacity_ = std::max<std::size_t>(4, budget_bytes / std::max<std::size_t>(1, row_bytes));
        if (kernel_ == SvmKernel::Rbf) {
            square_norms_.resize(data.rows);
            for (std::size_t r = 0; r < data.rows; ++r) {
                square_norms_[r] = dot(data.row(r), data.row(r));
            }
        }
    }

    // Single kernel entry in O(d), bit-identical to the row path. take_step
    // screens candidate pairs with this and fetches full rows only for the
    // error-cache update once a step is accepted.
    double scalar(std::size_t i, std::size_t j) const {
        if (kernel_ == SvmKernel::Rbf) {
            const double d2 =
                square_norms_[i] + square_norms_[j] - 2.0 * dot(data_.row(i), data_.row(j));
            return std::exp(-gamma_ * std::max(0.0, d2));
        }
        return dot(data_.row(i), data_.row(j));
    }

    // `pinned` names a row the caller still holds a reference to; eviction
    // skips it so that reference stays valid.
    const std::vector<double>& row(std::size_t i, std::size_t pinned = SIZE_MAX) {
        auto it = rows_.find(i);
        if (it != rows_.end()) return it->second;
        if (rows_.size() >= capacity_) {
            if (order_.front() == pinned) {
                order_.push_back(order_.front());
                order_.pop_front();
            }
            rows_.erase(order_.front());
            order_.pop_front();
        }
        std::vector<double> values(data_.rows);
        const auto xi = data_.row(i);
        if (kernel_ == SvmKernel::Rbf) {
            for (std::size_t k = 0; k < data_.rows; ++k) {
                const double d2 = square_norms_[i] + square_norms_[k] - 2.0 * dot(xi, data_.row(k));
                values[k] = std::exp(-gamma_ * std::max(0.0, d2));
            }
        } else {
            for (std::size_t k = 0; k < data_.rows; ++k) values[k] = dot(xi, data_.row(k));
        }
        order_.push_back(i);
        return rows_.emplace(i, std::move(values)).first->second;
    }

private:
    const DesignMatrix& data_;
    SvmKernel kernel_;
    double gamma_;
    std::size_t capacity_;
    std::vector<double> square_norms_; // rbf only
    std::unordered_map<std::size_t, std::vector<double>> rows_;
    std::deque<std::size_t> order_;
};

struct Smo {
    const DesignMatrix& data;
    const SvmParams& params;
    double gamma;
    std::vector<double> y;     // labels in {-1, +1}
    std::vector<double> alpha;
    std::vector<double> error; // f(x_k) - y_k, maintained incrementally
    double bias = 0.0;
    std::int64_t updates = 0;
    std::size_t fallback_cursor = 0;
    KernelRowCache cache;

    Smo(const DesignMatrix& train, const SvmParams& p, double g)
        : data(train),
          params(p),
          gamma(g),
          alpha(train.rows, 0.0),
          error(train.rows),
          cache(train, p.kernel, g, std::size_t{512} * 1024 * 1024) {
        y.resize(train.rows);
        for (std::size_t i = 0; i < train.rows; ++i) {
            y[i] = train.labels[i] == 1 ? 1.0 : -1.0;
            error[i] = -y[i]; // f starts at 0
        }
    }

    bool at_bound(std::size_t i) const {
        return alpha[i] <= 0.0 || alpha[i] >= params.c;
    }

    // One SMO update on the pair (i, j). Returns false when the pair makes
    // no usable progress.
    bool take_step(std::size_t i, std::size_t j) {
        if (i == j) return false;
        const double c = params.c;
        const double ai_old = alpha[i];
        const double aj_old = alpha[j];
        const double ei = error[i];
        const double ej = error[j];

        double low, high;
        if (y[i] != y[j]) {
            low = std::max(0.0, aj_old - ai_old);
            high = std::min(c, c + aj_old - ai_old);
        } else {
            low = std::max(0.0, ai_old + aj_old - c);
            high = std::min(c, ai_old + aj_old);
        }
        if (low >= high) return false;

        const double kii = cache.scalar(i, i);
        const double kjj = cache.scalar(j, j);
        const double kij = cache.scalar(i, j);
        const double eta = kii + kjj - 2.0 * kij;
        if (eta <= 0.0) return false; // duplicate points under RBF, or flat direction

        double aj = aj_old + y[j] * (ei - ej) / eta;
        aj = std::clamp(aj, low, high);
        if (std::abs(aj - aj_old) < 1e-7 * (aj + aj_old + 1e-7)) return false;

        const double ai = ai_old + y[i] * y[j] * (aj_old - aj);
        alpha[i] = ai;
        alpha[j] = aj;

        // step accepted: the O(n) error-cache refresh is the only part that
        // needs whole kernel rows
        const auto& row_i = cache.row(i);
        const auto& row_j = cache.row(j, i);

        const double di = y[i] * (ai - ai_old);
        const double dj = y[j] * (aj - aj_old);
        const double b1 = bias - ei - di * kii - dj * kij;
        const double b2 = bias - ej - di * kij - dj * kjj;
        double new_bias;
        if (ai > 0.0 && ai < c) {
            new_bias = b1;
        } else if (aj > 0.0 && aj < c) {
            new_bias = b2;
        } else {
            new_bias = 0.5 * (b1 + b2);
        }
        const double db = new_bias - bias;
        bias = new_bias;

        for (std::size_t k = 0; k < data.rows; ++k) {
            error[k] += di * row_i[k] + dj * row_j[k] + db;
        }
        ++updates;
        return true;
    }

    // KKT check on i; on violation, pick a partner and update.
    bool examine(std::size_t i) {
        const double r = error[i] * y[i];
        const bool violates = (r < -params.tolerance && alpha[i] < params.c) ||
                              (r > params.tolerance && alpha[i] > 0.0);
        if (!violates) return false;

        // best heuristic partner: the non-bound point with the largest
        // |error gap|, ties to the lowest index
        std::size_t best = i;
        double best_gap = -1.0;
        for (std::size_t j = 0; j < data.rows; ++j) {
            if (j == i || at_bound(j)) continue;
            const double gap = std::abs(error[i] - error[j]);
            if (gap > best_gap) {
                best_gap = gap;
                best = j;
            }
        }
        if (best != i && take_step(i, best)) return true;

        // fall back to a deterministic sweep over the non-bound set
        for (std::size_t j = 0; j < data.rows; ++j) {
            if (j == i || j == best || at_bound(j)) continue;
            if (take_step(i, j)) return true;
        }
        // bound tier: a rotating window instead of a full sweep, so a stuck
        // violator costs O(window) per pass while successive examines still
        // cover every row
        const std::size_t window = std::min<std::size_t>(data.rows, 512);
        const std::size_t start = fallback_cursor;
        fallback_cursor = (fallback_cursor + window) % data.rows;
        for (std::size_t t = 0; t < window; ++t) {
            const std::size_t j = (start + t) % data.rows;
            if (j == i || !at_bound(j)) continue;
            if (take_step(i, j)) return true;
        }
        return false;
    }
};

} // namespace

double kernel_value(SvmKernel kernel, double gamma, std::span<const double> a,
                    std::span<const double> b) {
    if (a.size() != b.size()) {
        throw Error(ErrorCode::DimensionMismatch, "kernel operands differ in length");
    }
    if (kernel == SvmKernel::Linear) return dot(a, b);
    return std::exp(-gamma * squared_distance(a, b));
}

std::unique_ptr<SvmModel> train_svm(const DesignMatrix& train, const SvmParams& params) {
    if (train.rows == 0) {
        throw Error(ErrorCode::InvalidArgument, "cannot train on an empty matrix");
    }
    bool saw[2] = {false, false};
    for (const auto label : train.labels) {
        if (label > 1) throw Error(ErrorCode::NonBinaryLabels, "labels must be 0 or 1");
        saw[label] = true;
    }
    if (!saw[0] || !saw[1]) {
        throw Error(ErrorCode::EmptyClass, "training data holds a single class");
    }

    const double gamma = params.gamma > 0.0 ? params.gamma : auto_gamma(train);
    Smo smo(train, params, gamma);

    bool converged = false;
    int clean_passes = 0;
    bool examine_all = true;
    while (smo.updates < params.max_updates) {
        std::int64_t changed = 0;
        for (std::size_t i = 0; i < train.rows; ++i) {
            if (!examine_all && smo.at_bound(i)) continue;
            if (smo.examine(i)) ++changed;
            if (smo.updates >= params.max_updates) break;
        }
        if (examine_all) {
            if (changed == 0) {
                if (++clean_passes >= params.max_passes) {
                    converged = true;
                    break;
                }
            } else {
                clean_passes = 0;
                examine_all = false; // grind the active set before rescanning
            }
        } else if (changed == 0) {
            examine_all = true;
        }
    }

    std::vector<SvmModel::SupportVector> support;
    for (std::size_t i = 0; i < train.rows; ++i) {
        if (smo.alpha[i] <= 0.0) continue;
        SvmModel::SupportVector sv;
        const auto row = train.row(i);
        sv.x.assign(row.begin(), row.end());
        sv.coeff = smo.alpha[i] * smo.y[i];
        support.push_back(std::move(sv));
    }
    return std::make_unique<SvmModel>(params.kernel, gamma, std::move(support), smo.bias,
                                      converged);
}

SvmModel::SvmModel(SvmKernel kernel, double gamma, std::vector<SupportVector> support,
                   double bias, bool converged)
    : kernel_(kernel), gamma_(gamma), support_(std::move(support)), bias_(bias),
      converged_(converged) {
    if (kernel_ == SvmKernel::Linear) cache_linear_weights();
}

void SvmModel::cache_linear_weights() {
    if (support_.empty()) return;
    linear_weights_.assign(support_.front().x.size(), 0.0);
    for (const auto& sv : support_) {
        for (std::size_t c = 0; c < sv.x.size(); ++c) linear_weights_[c] += sv.coeff * sv.x[c];
    }
}

double SvmModel::decision(std::span<const double> x) const {
    if (kernel_ == SvmKernel::Linear && !linear_weights_.empty()) {
        if (x.size() != linear_weights_.size()) {
            throw Error(ErrorCode::DimensionMismatch, "feature count differs from training");
        }
        return dot(x, linear_weights_) + bias_;
    }
    double sum = bias_;
    for (const auto& sv : support_) {
        sum += sv.coeff * kernel_value(kernel_, gamma_, sv.x, x);
    }
    return sum;
}

Prediction SvmModel::predict(std::span<const double> x) const {
    const double d = decision(x);
    return {d >= 0.0 ? 1 : 0, d};
}

nlohmann::json SvmModel::params_json() const {
    nlohmann::json vectors = nlohmann::json::array();
    for (const auto& sv : support_) {
        vectors.push_back(nlohmann::json{{"coeff", sv.coeff}, {"x", sv.x}});
    }
    return nlohmann::json{{"kernel", kernel_ == SvmKernel::Rbf ? "rbf" : "linear"},
                          {"gamma", gamma_},
                          {"bias", bias_},
                          {"converged", converged_},
                          {"support_vectors", std::move(vectors)}};
}

std::unique_ptr<SvmModel> SvmModel::from_json(const nlohmann::json& j) {
    const std::string kernel_name = j.at("kernel").get<std::string>();
    SvmKernel kernel;
    if (kernel_name == "rbf") {
        kernel = SvmKernel::Rbf;
    } else if (kernel_name == "linear") {
        kernel = SvmKernel::Linear;
    } else {
        throw Error(ErrorCode::InvalidArgument, "unknown kernel '" + kernel_name + "'");
    }
    std::vector<SupportVector> support;
    for (const auto& entry : j.at("support_vectors")) {
        SupportVector sv;
        sv.coeff = entry.at("coeff").get<double>();
        sv.x = entry.at("x").get<std::vector<double>>();
        support.push_back(std::move(sv));
    }
    return std::make_unique<SvmModel>(kernel, j.at("gamma").get<double>(), std::move(support),
                                      j.at("bias").get<double>(), j.at("converged").get<bool>());
}

} // namespace crl
