// shoot: command-line driver for the shooting regressor and its baselines.
//
//   shoot benchmark --data auto-mpg.data --trials 32 --out results/
//   shoot nu-curve  [--data FILE] --k 100 --out results/
//   shoot pca-diag  [--data FILE] [--oracle] --out results/
//   shoot fit       --model-type sr|rf|gbm --model model.json [--data FILE]
//   shoot predict   --model model.json --data FILE --out results/

#include <iostream>
#include <map>
#include <string>

#include <CLI11.hpp>

#include "shoot/cli.hpp"
#include "shoot/error.hpp"

namespace {

using shoot::cli::RunConfig;

const std::map<std::string, std::string> kHelp{
    {"data", "UCI auto-mpg.data file (default: synthetic data)"},
    {"trials", "number of train/validation splits"},
    {"seed", "master seed (64-bit)"},
    {"val-fraction", "validation fraction per split"},
    {"k", "shooting regressor ensemble size"},
    {"nu", "'auto' or a fixed scaling value"},
    {"out", "output directory"},
    {"threads", "worker threads (0 = all cores); results do not depend on it"},
    {"rf-trees", "random forest size"},
    {"gbm-stages", "boosting stages"},
    {"gbm-depth", "boosting tree depth"},
    {"gbm-learning-rate", "boosting learning rate"},
    {"nu-lo", "lower end of the nu search"},
    {"nu-hi", "upper end of the nu search"},
    {"nu-grid", "coarse grid points of the nu search"},
    {"nu-tol", "relative tolerance of the nu refinement"},
    {"magnitude-weight", "weight of the gradient magnitude term"},
    {"curve-points", "log-grid points for nu-curve"},
    {"samples", "synthetic rows"},
    {"features", "synthetic feature columns"},
    {"noise", "synthetic noise standard deviation"},
    {"hist-bins", "histogram bins"},
};

struct CommonFlags {
    std::string config_file;
    std::map<std::string, std::string> values;
    bool oracle = false;
    bool one_sided = false;
    CLI::Option* oracle_opt = nullptr;
    CLI::Option* one_sided_opt = nullptr;
};

void add_common(CLI::App* cmd, CommonFlags& flags) {
    cmd->add_option("--config", flags.config_file, "flat JSON config file; flags override its values");
    for (const auto& [key, help] : kHelp) cmd->add_option("--" + key, flags.values[key], help);
    flags.oracle_opt = cmd->add_flag("--oracle", flags.oracle, "use exact gradients instead of trees (pca-diag)");
    flags.one_sided_opt = cmd->add_flag("--one-sided", flags.one_sided, "one-sided t-tests (first model greater)");
}

RunConfig resolve(CLI::App* cmd, const CommonFlags& flags) {
    RunConfig config;
    if (!flags.config_file.empty()) shoot::cli::apply_config_file(config, flags.config_file);

    nlohmann::json overrides = nlohmann::json::object();
    for (const auto& [key, value] : flags.values) {
        if (cmd->get_option("--" + key)->count() == 0) continue;
        if (key == "data" || key == "out" || (key == "nu" && value == "auto")) {
            overrides[key] = value;
            continue;
        }
        try {
            overrides[key] = nlohmann::json::parse(value);
        } catch (const nlohmann::json::exception&) {
            throw shoot::ConfigError("--" + key + ": not a number: '" + value + "'");
        }
    }
    if (flags.oracle_opt->count() > 0) overrides["oracle"] = flags.oracle;
    if (flags.one_sided_opt->count() > 0) overrides["one-sided"] = flags.one_sided;
    shoot::cli::apply_config_json(config, overrides);
    config.validate();
    return config;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Shooting regressor: randomized gradient-based ensembles"};
    app.require_subcommand(1);

    CommonFlags bench_flags, curve_flags, pca_flags, fit_flags, predict_flags;
    auto* bench = app.add_subcommand("benchmark", "compare SR, GBM and RF over repeated holdout splits");
    add_common(bench, bench_flags);
    auto* curve = app.add_subcommand("nu-curve", "objective terms and validation MSE over a nu grid");
    add_common(curve, curve_flags);
    auto* pca = app.add_subcommand("pca-diag", "PCA projection of initial and terminal prediction vectors");
    add_common(pca, pca_flags);

    std::string model_type = "sr";
    std::string model_path;
    auto* fit = app.add_subcommand("fit", "fit one model and save it as JSON");
    add_common(fit, fit_flags);
    fit->add_option("--model-type", model_type, "sr, rf or gbm");
    fit->add_option("--model", model_path, "output model file")->required();
    auto* pred = app.add_subcommand("predict", "predict with a saved model");
    add_common(pred, predict_flags);
    pred->add_option("--model", model_path, "model file")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (*bench) {
            const auto result = shoot::cli::cmd_benchmark(resolve(bench, bench_flags));
            std::cout << shoot::summary_table(result.report);
            for (const auto& f : result.files) std::cout << "wrote " << f.string() << '\n';
        } else if (*curve) {
            const auto result = shoot::cli::cmd_nu_curve(resolve(curve, curve_flags));
            std::cout << "optimizer nu = " << result.optimizer_nu << "\nwrote " << result.file.string() << '\n';
        } else if (*pca) {
            const auto result = shoot::cli::cmd_pca_diag(resolve(pca, pca_flags));
            std::cout << "wrote " << result.file.string() << '\n';
        } else if (*fit) {
            shoot::cli::cmd_fit(resolve(fit, fit_flags), model_type, model_path);
            std::cout << "wrote " << model_path << '\n';
        } else if (*pred) {
            const auto path = shoot::cli::cmd_predict(resolve(pred, predict_flags), model_path);
            std::cout << "wrote " << path.string() << '\n';
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return shoot::cli::exit_code_for(e);
    }
    return 0;
}
