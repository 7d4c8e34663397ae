// Release gate. Every pinned benchmark reference the library is built to
// reproduce is checked here, one line per criterion, [PASS]/[FAIL] verdicts.
//
// The dataset defaults to the bundled synthetic stand-in (written next to
// the binary on first use). Point CRL_DATASET at the real benchmark CSV to
// run the same gate against it.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <limits>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "crl/eda.hpp"
#include "crl/forest.hpp"
#include "crl/logistic.hpp"
#include "crl/metrics.hpp"
#include "crl/pipeline.hpp"
#include "crl/preprocess.hpp"
#include "crl/rng.hpp"
#include "crl/synth.hpp"
#include "crl/tree.hpp"

#include "support/oracles.hpp"
#include "support/testutil.hpp"

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

struct Outcome {
    bool pass = false;
    std::string detail;
};

int g_failures = 0;

void report(const std::string& label, const Outcome& outcome) {
    std::printf("[%s] %s: %s\n", outcome.pass ? "PASS" : "FAIL", label.c_str(),
                outcome.detail.c_str());
    std::fflush(stdout);
    if (!outcome.pass) ++g_failures;
}

std::string fmt(double v) {
    char buffer[64];
    std::snprintf(buffer, sizeof(buffer), "%.6f", v);
    return buffer;
}

// ---------------------------------------------------------------------------
// pinned benchmark reference values

struct PinnedModel {
    const char* name;
    crl::ConfusionMatrix matrix; // {tn, fp, fn, tp}
    double accuracy;
    double weighted_precision;
    double weighted_recall;
    double weighted_f1;
};

constexpr double kMetricTol = 0.0005;

const PinnedModel kPinnedModels[] = {
    {"svm", {6252, 230, 704, 960}, 0.8853, 0.8799, 0.8853, 0.8778},
    {"rf", {6144, 338, 537, 1127}, 0.8925, 0.8889, 0.8925, 0.8899},
    {"dt", {6132, 237, 751, 1026}, 0.8787, 0.8737, 0.8787, 0.8708},
    {"lr", {6040, 329, 976, 801}, 0.8397, 0.8277, 0.8397, 0.8258},
};

constexpr double kPinnedSvmHardAuc = 0.7707;
constexpr double kHardAucTol = 0.0001;

struct PinnedCorrelation {
    const char* name;
    double r;
    bool kept; // |r| >= 0.1 side of the stage-1 partition
};

const PinnedCorrelation kPinnedCorrelations[] = {
    {"person_age", -0.021625, false},
    {"person_income", -0.144551, true},
    {"person_home_ownership", 0.211577, true},
    {"person_emp_length", -0.087049, false},
    {"loan_intent", -0.058935, false},
    {"loan_grade", 0.373145, true},
    {"loan_amnt", 0.105407, true},
    {"loan_int_rate", 0.226825, true},
    {"loan_percent_income", 0.379371, true},
    {"cb_person_default_on_file", 0.179141, true},
    {"cb_person_cred_hist_length", -0.015529, false},
};

const std::set<std::string> kFinalFeatures = {
    "person_home_ownership", "loan_grade",          "loan_amnt",
    "loan_int_rate",         "loan_percent_income", "cb_person_default_on_file",
};

// ---------------------------------------------------------------------------

std::string dataset_path() {
    if (const char* env = std::getenv("CRL_DATASET"); env != nullptr && env[0] != '\0') {
        return env;
    }
    const std::string path = "acceptance-data.csv";
    if (!std::filesystem::exists(path)) {
        std::printf("writing %s (%zu synthetic rows, seed %llu)\n", path.c_str(),
                    crl::synth::kReferenceRows,
                    static_cast<unsigned long long>(crl::synth::kReferenceSeed));
        std::fflush(stdout);
        crl::synth::write_synthetic_csv(path, crl::synth::kReferenceRows,
                                        crl::synth::kReferenceSeed);
    }
    return path;
}

// 1. the metrics engine turns each pinned confusion matrix into the pinned
//    metric row, 16 figures within +-0.0005
Outcome check_metric_table() {
    Outcome outcome;
    int ok = 0, total = 0;
    std::string worst;
    double worst_delta = 0.0;
    const auto probe = [&](const char* model, const char* metric, double got, double want) {
        ++total;
        const double delta = std::abs(got - want);
        if (delta <= kMetricTol) {
            ++ok;
        } else if (worst.empty() || delta > worst_delta) {
            worst = std::string(model) + " " + metric + " got " + fmt(got) + " want " + fmt(want);
            worst_delta = delta;
        }
    };
    for (const auto& pinned : kPinnedModels) {
        const auto metrics = crl::classification_metrics(pinned.matrix);
        probe(pinned.name, "accuracy", metrics.accuracy, pinned.accuracy);
        probe(pinned.name, "weighted precision", metrics.weighted_precision,
              pinned.weighted_precision);
        probe(pinned.name, "weighted recall", metrics.weighted_recall, pinned.weighted_recall);
        probe(pinned.name, "weighted f1", metrics.weighted_f1, pinned.weighted_f1);
    }
    outcome.pass = ok == total;
    outcome.detail = std::to_string(ok) + "/" + std::to_string(total) +
                     " pinned figures within 0.0005";
    if (!outcome.pass) outcome.detail += "; worst: " + worst;
    return outcome;
}

// 2. hard-label AUC of the pinned svm matrix
Outcome check_hard_label_auc() {
    Outcome outcome;
    const double got = crl::hard_label_auc(kPinnedModels[0].matrix);
    outcome.pass = std::abs(got - kPinnedSvmHardAuc) <= kHardAucTol;
    outcome.detail = "got " + fmt(got) + ", reference " + fmt(kPinnedSvmHardAuc) + " +-0.0001";
    return outcome;
}

// 3. feature selection on the full dataset: stage-1 partition, manual drop,
//    correlation signs and magnitudes, under 10 seconds
Outcome check_selection(const std::string& dataset, const testutil::TempDir& scratch) {
    Outcome outcome;
    crl::RunConfig config;
    config.input_path = dataset;
    config.output_dir = scratch.file("eda");

    const auto start = Clock::now();
    const auto result = crl::run_eda(config);
    const double elapsed = seconds_since(start);

    std::map<std::string, std::optional<double>> got_r;
    std::set<std::string> included;
    for (const auto& entry : result.selection.stage1_included) {
        included.insert(entry.name);
        got_r[entry.name] = entry.correlation;
    }
    for (const auto& entry : result.selection.stage1_dropped) {
        got_r[entry.name] = entry.correlation;
    }

    std::vector<std::string> problems;
    for (const auto& pinned : kPinnedCorrelations) {
        const auto it = got_r.find(pinned.name);
        if (it == got_r.end() || !it->second.has_value()) {
            problems.push_back(std::string(pinned.name) + " missing or degenerate");
            continue;
        }
        const double r = *it->second;
        if (included.count(pinned.name) != static_cast<std::size_t>(pinned.kept)) {
            problems.push_back(std::string(pinned.name) + " on the wrong side of 0.1 (r=" +
                               fmt(r) + ")");
        }
        if ((r > 0) != (pinned.r > 0)) {
            problems.push_back(std::string(pinned.name) + " sign flip: got " + fmt(r) +
                               " want " + fmt(pinned.r));
        } else if (std::abs(r - pinned.r) > 0.05) {
            problems.push_back(std::string(pinned.name) + " drifted: got " + fmt(r) + " want " +
                               fmt(pinned.r) + " +-0.05");
        }
    }

    const std::set<std::string> final_set(result.selection.final_features.begin(),
                                          result.selection.final_features.end());
    if (final_set != kFinalFeatures) {
        problems.push_back("final feature set has " +
                           std::to_string(result.selection.final_features.size()) +
                           " entries, want the pinned 6");
    }
    if (elapsed >= 10.0) {
        problems.push_back("took " + fmt(elapsed) + "s, budget 10s");
    }

    outcome.pass = problems.empty();
    if (outcome.pass) {
        outcome.detail = "partition 7/4 as pinned, manual drop leaves the pinned 6, all 11 "
                         "correlations in band, " +
                         fmt(elapsed) + "s";
    } else {
        outcome.detail = problems.front() +
                         (problems.size() > 1
                              ? " (+" + std::to_string(problems.size() - 1) + " more)"
                              : "");
    }
    return outcome;
}

// 4. end-to-end training across 5 seeds stays inside the pinned accuracy
//    bands, each full comparison run under 3 minutes
Outcome check_training_bands(const std::string& dataset, const testutil::TempDir& scratch) {
    Outcome outcome;
    std::vector<std::string> problems;
    double slowest = 0.0;
    double rf_acc_min = 1.0, rf_acc_max = 0.0;

    for (const std::uint64_t seed : {1ULL, 2ULL, 3ULL, 4ULL, 5ULL}) {
        crl::RunConfig config;
        config.input_path = dataset;
        config.output_dir = scratch.file("compare-" + std::to_string(seed));
        config.seed = seed;

        const auto start = Clock::now();
        crl::CompareResult result;
        try {
            result = crl::run_compare(config);
        } catch (const std::exception& e) {
            problems.push_back("seed " + std::to_string(seed) + " threw: " + e.what());
            continue;
        }
        const double elapsed = seconds_since(start);
        slowest = std::max(slowest, elapsed);
        if (elapsed >= 180.0) {
            problems.push_back("seed " + std::to_string(seed) + " took " + fmt(elapsed) +
                               "s, budget 180s");
        }
        if (!result.failed.empty()) {
            problems.push_back("seed " + std::to_string(seed) + ": " +
                               std::to_string(result.failed.size()) + " model(s) failed");
            continue;
        }

        const auto need = [&](const char* kind) -> const crl::EvalReport& {
            return result.reports.at(kind);
        };
        const double rf_acc = need("rf").metrics.accuracy;
        const double rf_f1 = need("rf").metrics.weighted_f1;
        rf_acc_min = std::min(rf_acc_min, rf_acc);
        rf_acc_max = std::max(rf_acc_max, rf_acc);
        if (rf_acc < 0.87 || rf_acc > 0.94) {
            problems.push_back("seed " + std::to_string(seed) + " rf accuracy " + fmt(rf_acc) +
                               " outside [0.87, 0.94]");
        }
        if (std::abs(rf_f1 - 0.8899) > 0.03) {
            problems.push_back("seed " + std::to_string(seed) + " rf weighted f1 " +
                               fmt(rf_f1) + " outside 0.8899 +-0.03");
        }
        for (const char* kind : {"dt", "svm"}) {
            const double acc = need(kind).metrics.accuracy;
            if (acc < 0.85) {
                problems.push_back("seed " + std::to_string(seed) + " " + kind + " accuracy " +
                                   fmt(acc) + " below 0.85");
            }
        }
        if (need("lr").metrics.accuracy < 0.80) {
            problems.push_back("seed " + std::to_string(seed) + " lr accuracy " +
                               fmt(need("lr").metrics.accuracy) + " below 0.80");
        }
    }

    outcome.pass = problems.empty();
    if (outcome.pass) {
        outcome.detail = "5 seeds in band; rf accuracy spans [" + fmt(rf_acc_min) + ", " +
                         fmt(rf_acc_max) + "], slowest run " + fmt(slowest) + "s";
    } else {
        outcome.detail = problems.front() +
                         (problems.size() > 1
                              ? " (+" + std::to_string(problems.size() - 1) + " more)"
                              : "");
    }
    return outcome;
}

// 5. the reference row count splits 75/25 into the pinned partition sizes
Outcome check_split_sizes() {
    Outcome outcome;
    const auto split = crl::split_indices(32581, {0.75, 42});
    outcome.pass = split.train.size() == 24435 && split.test.size() == 8146;
    outcome.detail = "32581 rows -> " + std::to_string(split.train.size()) + " train / " +
                     std::to_string(split.test.size()) + " test (want 24435/8146)";
    return outcome;
}

// ---------------------------------------------------------------------------
// 6. invariant sweeps

Outcome check_gradient_property() {
    Outcome outcome;
    crl::Rng rng(811);
    int failures = 0;
    double worst = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t rows = 5 + rng.below(36);
        const std::size_t cols = 1 + rng.below(6);
        const auto data = testutil::random_matrix(rng, rows, cols);
        std::vector<double> weights(cols);
        for (auto& w : weights) w = rng.uniform01() * 4.0 - 2.0;
        const double bias = rng.uniform01() * 4.0 - 2.0;
        const double l2 = (trial % 3 == 0) ? 0.0 : rng.uniform01() * 0.1;

        const auto analytic = crl::logistic_gradient(data, weights, bias, l2);
        const auto fd = oracles::fd_logistic_gradient(data, weights, bias, l2);
        for (std::size_t i = 0; i < analytic.size(); ++i) {
            const double scale = std::max({1.0, std::abs(analytic[i]), std::abs(fd[i])});
            const double err = std::abs(analytic[i] - fd[i]) / scale;
            worst = std::max(worst, err);
            if (err > 1e-4) ++failures;
        }
    }
    outcome.pass = failures == 0;
    outcome.detail = "100 problems, worst relative error " + fmt(worst) + " (limit 1e-4)";
    return outcome;
}

Outcome check_forest_degenerates_to_tree() {
    Outcome outcome;
    crl::Rng rng(1213);
    int mismatches = 0;
    for (int trial = 0; trial < 50; ++trial) {
        const std::size_t rows = 20 + rng.below(101);
        const std::size_t cols = 2 + rng.below(4);
        const auto data = testutil::random_matrix(rng, rows, cols);

        crl::ForestParams params;
        params.n_trees = 1;
        params.features_per_split = static_cast<int>(cols);
        params.bootstrap = false;
        params.seed = 7 + trial;
        const auto forest = crl::train_forest(data, params);
        const auto tree = crl::train_tree(data, params.tree, {});
        if (forest->tree(0).params_json() != tree->params_json()) ++mismatches;
    }
    outcome.pass = mismatches == 0;
    outcome.detail = "50 datasets, " + std::to_string(mismatches) +
                     " structural mismatches between 1-tree forest and plain tree";
    return outcome;
}

Outcome check_auc_oracle() {
    Outcome outcome;
    crl::Rng rng(509);
    int failures = 0;
    double worst = 0.0;
    for (int trial = 0; trial < 1000; ++trial) {
        const std::size_t n = 2 + rng.below(49);
        std::vector<std::uint8_t> labels(n);
        bool both = false;
        while (!both) {
            bool saw0 = false, saw1 = false;
            for (auto& y : labels) {
                y = rng.bernoulli(0.5) ? 1 : 0;
                (y == 0 ? saw0 : saw1) = true;
            }
            both = saw0 && saw1;
        }
        std::vector<double> scores(n);
        const bool tie_heavy = trial % 2 == 0;
        for (auto& s : scores) {
            s = tie_heavy ? static_cast<double>(rng.below(8)) / 7.0 : rng.uniform01();
        }
        const double trapezoid = crl::roc_curve(labels, scores).auc;
        const double oracle = oracles::pair_ordering_auc(labels, scores);
        const double err = std::abs(trapezoid - oracle);
        worst = std::max(worst, err);
        if (err > 1e-10) ++failures;
    }
    outcome.pass = failures == 0;
    outcome.detail = "1000 trials vs pair-ordering oracle, worst gap " + fmt(worst);
    return outcome;
}

Outcome check_weighted_recall_identity() {
    Outcome outcome;
    crl::Rng rng(6007);
    int failures = 0;
    for (int trial = 0; trial < 1000; ++trial) {
        crl::ConfusionMatrix cm;
        do {
            cm.tn = rng.below(1000);
            cm.fp = rng.below(1000);
            cm.fn = rng.below(1000);
            cm.tp = rng.below(1000);
        } while (cm.total() == 0);
        const auto metrics = crl::classification_metrics(cm);
        if (std::abs(metrics.weighted_recall - metrics.accuracy) > 1e-12) ++failures;
    }
    outcome.pass = failures == 0;
    outcome.detail = "1000 random matrices, weighted recall == accuracy to 1e-12, " +
                     std::to_string(failures) + " violations";
    return outcome;
}

Outcome check_tree_perfect_fit() {
    Outcome outcome;
    crl::Rng rng(92821);
    int failures = 0;
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t rows = 5 + rng.below(76);
        const std::size_t cols = 1 + rng.below(4);
        // continuous draws make every row distinct, so labels cannot conflict
        auto data = testutil::random_matrix(rng, rows, cols);
        const auto tree = crl::train_tree(data, {}, {});
        std::size_t correct = 0;
        for (std::size_t r = 0; r < data.rows; ++r) {
            std::vector<double> x(data.values.begin() + r * data.cols,
                                  data.values.begin() + (r + 1) * data.cols);
            if (tree->predict(x).label == data.labels[r]) ++correct;
        }
        if (correct != data.rows) ++failures;
    }
    outcome.pass = failures == 0;
    outcome.detail = "100 conflict-free datasets, " + std::to_string(failures) +
                     " fell short of training accuracy 1.0";
    return outcome;
}

Outcome check_range_invariants() {
    Outcome outcome;
    crl::Rng rng(35117);
    int failures = 0;
    for (int trial = 0; trial < 500; ++trial) {
        const std::size_t n = 2 + rng.below(199);
        const double scale = std::pow(10.0, rng.uniform01() * 12.0 - 6.0);
        const double shift = (rng.uniform01() - 0.5) * scale * 10.0;

        crl::NumericTable table;
        table.rows = n;
        table.cols = 1;
        table.column_names = {"x"};
        table.labels.assign(n, 0);
        table.values.resize(n);
        for (auto& v : table.values) v = rng.uniform01() * scale + shift;
        if (trial % 7 == 0) {
            std::fill(table.values.begin(), table.values.end(), shift); // constant column
        }

        // fit on a random subset, apply to everything: rows outside the
        // fitted range exercise the clipping path
        const std::size_t fit_count = 1 + rng.below(n);
        std::vector<std::size_t> fit_rows(table.rows);
        for (std::size_t i = 0; i < fit_rows.size(); ++i) fit_rows[i] = i;
        rng.shuffle(fit_rows);
        fit_rows.resize(fit_count);
        const auto params = crl::fit_normalizer(table, fit_rows);

        crl::NumericTable scaled = table;
        crl::apply_normalizer(scaled, params);
        for (const double v : scaled.values) {
            if (!(v >= 0.0 && v <= 1.0)) ++failures;
        }

        std::vector<double> other(n);
        for (auto& v : other) {
            v = rng.bernoulli(0.05) ? std::numeric_limits<double>::quiet_NaN()
                                    : rng.uniform01() * scale - shift;
        }
        const auto r = crl::pearson_correlation(table.values, other);
        if (r && !(*r >= -1.0 && *r <= 1.0)) ++failures;
    }
    outcome.pass = failures == 0;
    outcome.detail = "500 fuzz trials, " + std::to_string(failures) +
                     " range violations (normalized values and correlations)";
    return outcome;
}

Outcome check_thread_determinism(const testutil::TempDir& scratch) {
    Outcome outcome;
    const auto csv = scratch.file("determinism.csv");
    crl::synth::write_synthetic_csv(csv, 3000, 4242);

    std::vector<std::string> dumps;
    for (const int threads : {1, 2, 8}) {
        crl::RunConfig config;
        config.input_path = csv;
        config.output_dir = scratch.file("det-" + std::to_string(threads));
        config.threads = threads;
        config.timestamp_override = "2024-01-01T00:00:00Z";
        config.hyperparams.forest.n_trees = 24;
        config.hyperparams.logistic.max_epochs = 200;
        const auto result = crl::run_compare(config);
        dumps.push_back(result.to_json().dump(2));
    }
    outcome.pass = dumps[0] == dumps[1] && dumps[0] == dumps[2];
    outcome.detail = outcome.pass
                         ? "compare reports byte-identical across 1, 2, and 8 worker threads"
                         : "reports differ across worker thread counts";
    return outcome;
}

// 7. figures reported but not gated: per-model score AUCs, the r2 column,
//    and density peak values have no pinned references here; they are
//    emitted in the artifacts for inspection and documented in the README
Outcome note_ungated_outputs() {
    return {true, "score AUCs, r2, and density peaks are informational outputs, not gates"};
}

} // namespace

int main() {
    std::printf("acceptance gate: credit-risk pipeline vs pinned benchmark references\n");
    const std::string dataset = dataset_path();
    std::printf("dataset: %s\n\n", dataset.c_str());

    testutil::TempDir scratch("acceptance");

    report("1. metric table from pinned confusion matrices", check_metric_table());
    report("2. svm hard-label auc", check_hard_label_auc());
    report("3. feature selection on the full dataset", check_selection(dataset, scratch));
    report("4. training bands across 5 seeds", check_training_bands(dataset, scratch));
    report("5. 75/25 split of the reference row count", check_split_sizes());
    report("6.1 logistic gradient matches central differences", check_gradient_property());
    report("6.2 single-tree forest equals a plain tree", check_forest_degenerates_to_tree());
    report("6.3 trapezoid auc matches the pair-ordering oracle", check_auc_oracle());
    report("6.4 weighted recall is accuracy", check_weighted_recall_identity());
    report("6.5 unlimited trees memorize conflict-free data", check_tree_perfect_fit());
    report("6.6 normalization and correlation stay in range", check_range_invariants());
    report("6.7 thread count never changes the comparison report",
           check_thread_determinism(scratch));
    report("7. ungated informational outputs", note_ungated_outputs());

    std::printf("\n%d criteria failed\n", g_failures);
    return g_failures;
}
