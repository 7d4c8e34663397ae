// Thin front end over the shared library's C API: flags in, JSON out. All
// pipeline work happens behind crl.h.
#include <cstdint>
#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "crl.h"

namespace {

struct CliState {
    std::string input;
    std::string out;
    std::string config_file;
    std::uint64_t seed = 42;
    double train_frac = 0.75;
    double threshold = 0.1;
    std::string drop_list = "person_income";
    std::string roc = "scores";
    bool json = false;
    bool svg = false;
    int threads = 1;
    std::string timestamp; // hidden; pins report timestamps for golden tests

    std::string model = "rf";
    std::string models_list = "svm,rf,dt,lr";
    std::string model_file;
    std::string split = "test";

    double lr = 0.1;
    int epochs = 500;
    double l2 = 1e-4;
    double svm_c = 1.0;
    std::string svm_kernel = "rbf";
    double svm_gamma = 0.0;
    int n_trees = 100;
    int max_depth = -1;
    int min_samples_split = 2;
    int features_per_split = 0;
    bool no_bootstrap = false;
};

void add_common(CLI::App* sub, CliState& state) {
    sub->add_option("--input", state.input, "input CSV path")->required();
    sub->add_option("--out", state.out, "output directory for artifacts")->required();
    sub->add_option("--seed", state.seed, "RNG seed for the split and the forest")
        ->envname("CRL_SEED")
        ->capture_default_str();
    sub->add_option("--train-frac", state.train_frac, "training fraction in (0,1)")
        ->capture_default_str();
    sub->add_option("--threshold", state.threshold, "stage-1 |correlation| selection threshold")
        ->capture_default_str();
    sub->add_option("--drop", state.drop_list,
                    "comma list of features dropped after stage 1 (empty keeps all)")
        ->capture_default_str();
    sub->add_option("--roc", state.roc, "ROC input: model scores or hard labels")
        ->check(CLI::IsMember({"scores", "hard-labels"}))
        ->capture_default_str();
    sub->add_flag("--json", state.json, "print the machine-readable summary on stdout");
    sub->add_flag("--svg", state.svg, "also write SVG plots");
    sub->add_option("--threads", state.threads, "worker threads for forest training")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    sub->add_option("--timestamp", state.timestamp)->group(""); // hidden
    sub->add_option("--config", state.config_file, "flat key=value file mirroring these flags")
        ->check(CLI::ExistingFile);
}

// Applies `key=value` lines to options the command line left untouched, so
// explicit flags always win. Returns an error message, empty on success.
// (CLI11's own config hook never fires for options owned by a subcommand,
// hence the manual reader.)
std::string apply_config_file(CLI::App* sub, const std::string& path) {
    std::ifstream in(path);
    if (!in) return "cannot open config file '" + path + "'";

    const auto trim = [](const std::string& s) {
        const auto a = s.find_first_not_of(" \t\r");
        if (a == std::string::npos) return std::string();
        const auto b = s.find_last_not_of(" \t\r");
        return s.substr(a, b - a + 1);
    };

    std::string line;
    int line_number = 0;
    while (std::getline(in, line)) {
        ++line_number;
        const std::string text = trim(line);
        if (text.empty() || text[0] == '#' || text[0] == ';') continue;
        const auto eq = text.find('=');
        if (eq == std::string::npos) {
            return "config line " + std::to_string(line_number) + " is not key=value";
        }
        std::string key = trim(text.substr(0, eq));
        std::string value = trim(text.substr(eq + 1));
        if (value.size() >= 2 && value.front() == '"' && value.back() == '"') {
            value = value.substr(1, value.size() - 2);
        }
        while (!key.empty() && key.front() == '-') key.erase(key.begin());
        if (key == "config") {
            return "config line " + std::to_string(line_number) + ": files cannot nest";
        }
        CLI::Option* option = sub->get_option_no_throw("--" + key);
        if (option == nullptr) {
            return "config line " + std::to_string(line_number) + ": unknown key '" + key + "'";
        }
        if (option->count() > 0) continue;
        try {
            option->add_result(value);
            option->run_callback();
        } catch (const CLI::Error& e) {
            return "config line " + std::to_string(line_number) + ": " + e.what();
        }
    }
    return "";
}

void add_hyperparams(CLI::App* sub, CliState& state) {
    sub->add_option("--lr", state.lr, "logistic learning rate")->capture_default_str();
    sub->add_option("--epochs", state.epochs, "logistic max epochs")->capture_default_str();
    sub->add_option("--l2", state.l2, "logistic L2 strength")->capture_default_str();
    sub->add_option("--svm-c", state.svm_c, "SVM soft-margin C")->capture_default_str();
    sub->add_option("--svm-kernel", state.svm_kernel, "SVM kernel")
        ->check(CLI::IsMember({"rbf", "linear"}))
        ->capture_default_str();
    sub->add_option("--svm-gamma", state.svm_gamma, "RBF gamma (0 = 1/(d*var))")
        ->capture_default_str();
    sub->add_option("--n-trees", state.n_trees, "forest size")->capture_default_str();
    sub->add_option("--max-depth", state.max_depth, "tree depth cap (-1 = unlimited)")
        ->capture_default_str();
    sub->add_option("--min-samples-split", state.min_samples_split,
                    "smallest node a tree may split")
        ->capture_default_str();
    sub->add_option("--features-per-split", state.features_per_split,
                    "features drawn per forest split (0 = floor(sqrt(d)))")
        ->capture_default_str();
    sub->add_flag("--no-bootstrap", state.no_bootstrap, "train each tree on the full set");
}

nlohmann::json base_config(const CliState& state) {
    nlohmann::json config{{"input", state.input}, {"out", state.out},
                          {"seed", state.seed},   {"train-frac", state.train_frac},
                          {"threshold", state.threshold}, {"drop", state.drop_list},
                          {"roc", state.roc},     {"svg", state.svg},
                          {"threads", state.threads}};
    if (!state.timestamp.empty()) config["timestamp"] = state.timestamp;
    return config;
}

void add_hyperparam_config(nlohmann::json& config, const CliState& state) {
    config["lr"] = state.lr;
    config["epochs"] = state.epochs;
    config["l2"] = state.l2;
    config["svm-c"] = state.svm_c;
    config["svm-kernel"] = state.svm_kernel;
    config["svm-gamma"] = state.svm_gamma;
    config["n-trees"] = state.n_trees;
    config["max-depth"] = state.max_depth;
    config["min-samples-split"] = state.min_samples_split;
    config["features-per-split"] = state.features_per_split;
    config["no-bootstrap"] = state.no_bootstrap;
}

int exit_code_for(crl_status status) {
    switch (status) {
        case CRL_OK: return 0;
        case CRL_ERROR_IO: return 1;
        case CRL_ERROR_INTERNAL: return 1;
        default: return 2; // schema and argument problems
    }
}

// Runs one C-API entry point; parses its summary; prints warnings. Returns
// the exit code, with the parsed summary in `out`.
using RunFn = crl_status (*)(const char*, char**);

int invoke(RunFn fn, const nlohmann::json& config, nlohmann::json& out) {
    char* summary = nullptr;
    const crl_status status = fn(config.dump().c_str(), &summary);
    if (status != CRL_OK) {
        std::cerr << "error: " << crl_last_error() << '\n';
        crl_free(summary);
        return exit_code_for(status);
    }
    out = nlohmann::json::parse(summary);
    crl_free(summary);
    for (const auto& warning : out.value("warnings", nlohmann::json::array())) {
        std::cerr << "warning: " << warning.get<std::string>() << '\n';
    }
    return 0;
}

void print_artifacts(const nlohmann::json& summary) {
    if (!summary.contains("artifacts")) return;
    std::cout << "wrote";
    bool first = true;
    for (const auto& [name, path] : summary["artifacts"].items()) {
        std::cout << (first ? " " : ", ") << path.get<std::string>();
        first = false;
    }
    std::cout << '\n';
}

int do_eda(const CliState& state) {
    nlohmann::json summary;
    if (const int code = invoke(&crl_run_eda, base_config(state), summary); code != 0) {
        return code;
    }
    if (state.json) {
        std::cout << summary.dump(2) << '\n';
        return 0;
    }
    std::cout << "rows: " << summary["rows"].get<std::uint64_t>() << '\n';
    const auto& selection = summary["selection"];
    std::cout << "stage-1 kept " << selection["stage1_included"].size() << " of "
              << summary["profiles"]["features"].size() << " features (|r| >= "
              << selection["threshold"].get<double>() << ")\n";
    std::cout << "final features:";
    for (const auto& name : selection["final_features"]) {
        std::cout << ' ' << name.get<std::string>();
    }
    std::cout << '\n';
    print_artifacts(summary);
    return 0;
}

int do_train(const CliState& state) {
    nlohmann::json config = base_config(state);
    add_hyperparam_config(config, state);
    config["model"] = state.model;
    nlohmann::json summary;
    if (const int code = invoke(&crl_run_train, config, summary); code != 0) return code;
    if (state.json) {
        std::cout << summary.dump(2) << '\n';
        return 0;
    }
    std::cout << "trained " << state.model << " on "
              << summary["train_rows"].get<std::uint64_t>() << " rows ("
              << summary["features"].size() << " features, seed " << state.seed << ")\n";
    if (!summary["converged"].get<bool>()) std::cout << "note: stopped before convergence\n";
    std::cout << "wrote " << summary["model_path"].get<std::string>() << '\n';
    return 0;
}

int do_evaluate(const CliState& state) {
    nlohmann::json config = base_config(state);
    config["model-file"] = state.model_file;
    config["split"] = state.split;
    nlohmann::json summary;
    if (const int code = invoke(&crl_run_evaluate, config, summary); code != 0) return code;
    if (state.json) {
        std::cout << summary.dump(2) << '\n';
        return 0;
    }
    const auto& report = summary;
    const auto& matrix = report["confusion_matrix"];
    const auto& metrics = report["metrics"];
    std::cout << "evaluated " << summary["evaluated_rows"].get<std::uint64_t>() << " rows with "
              << report["model"].get<std::string>() << '\n';
    std::cout << "accuracy " << metrics["accuracy"].get<double>() << ", weighted f1 "
              << metrics["weighted"]["f1"].get<double>() << ", auc(" << state.roc << ") "
              << report["roc"]["auc"].get<double>() << ", r2 " << report["r2"].get<double>()
              << '\n';
    std::cout << "confusion [[" << matrix["tn"] << ',' << matrix["fp"] << "],[" << matrix["fn"]
              << ',' << matrix["tp"] << "]]\n";
    print_artifacts(summary);
    return 0;
}

int do_compare(const CliState& state) {
    nlohmann::json config = base_config(state);
    add_hyperparam_config(config, state);
    config["models"] = state.models_list;
    nlohmann::json summary;
    if (const int code = invoke(&crl_run_compare, config, summary); code != 0) return code;
    const bool all_failed = summary["reports"].empty();
    if (state.json) {
        std::cout << summary.dump(2) << '\n';
    } else {
        std::cout << summary["table"].get<std::string>();
        print_artifacts(summary);
    }
    return all_failed ? 1 : 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"credit-risk detection toolkit"};
    app.set_version_flag("--version", std::string("crl ") + crl_version());
    app.require_subcommand(1);

    CliState state;
    auto* eda = app.add_subcommand("eda", "profile features and run selection");
    add_common(eda, state);

    auto* train = app.add_subcommand("train", "fit one classifier and persist it");
    add_common(train, state);
    train->add_option("--model", state.model, "classifier kind")
        ->check(CLI::IsMember({"svm", "rf", "dt", "lr"}))
        ->capture_default_str();
    add_hyperparams(train, state);

    auto* evaluate = app.add_subcommand("evaluate", "score a saved model against a CSV");
    add_common(evaluate, state);
    evaluate->add_option("--model-file", state.model_file, "trained model document (.crl.json)")
        ->required();
    evaluate
        ->add_option("--split", state.split,
                     "score the held-out rows of the training split, or every row")
        ->check(CLI::IsMember({"test", "all"}))
        ->capture_default_str();

    auto* compare = app.add_subcommand("compare", "train and evaluate classifiers side by side");
    add_common(compare, state);
    compare->add_option("--models", state.models_list, "comma list of classifiers to run")
        ->capture_default_str();
    add_hyperparams(compare, state);

    auto* datagen =
        app.add_subcommand("datagen", "write a deterministic synthetic credit-risk CSV");
    std::string datagen_out;
    std::uint64_t datagen_rows = 32581;
    std::uint64_t datagen_seed = 20240614;
    datagen->add_option("--out", datagen_out, "output CSV path")->required();
    datagen->add_option("--rows", datagen_rows, "row count")->capture_default_str();
    datagen->add_option("--seed", datagen_seed, "generator seed")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    if (!state.config_file.empty()) {
        CLI::App* active = nullptr;
        for (auto* sub : {eda, train, evaluate, compare}) {
            if (app.got_subcommand(sub)) active = sub;
        }
        if (active != nullptr) {
            if (const auto problem = apply_config_file(active, state.config_file);
                !problem.empty()) {
                std::cerr << "error: " << problem << '\n';
                return 2;
            }
        }
    }

    if (app.got_subcommand(eda)) return do_eda(state);
    if (app.got_subcommand(train)) return do_train(state);
    if (app.got_subcommand(evaluate)) return do_evaluate(state);
    if (app.got_subcommand(compare)) return do_compare(state);
    if (app.got_subcommand(datagen)) {
        const crl_status status =
            crl_write_synthetic_csv(datagen_out.c_str(), static_cast<int64_t>(datagen_rows),
                                    datagen_seed);
        if (status != CRL_OK) {
            std::cerr << "error: " << crl_last_error() << '\n';
            return exit_code_for(status);
        }
        std::cout << "wrote " << datagen_out << " (" << datagen_rows << " rows)\n";
        return 0;
    }
    return 0;
}
