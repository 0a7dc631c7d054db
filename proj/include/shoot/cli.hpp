#ifndef SHOOT_CLI_HPP
#define SHOOT_CLI_HPP

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "shoot/data.hpp"
#include "shoot/report.hpp"

namespace shoot::cli {

/// Parameters shared by all subcommands. Sources, in increasing priority:
/// defaults, a flat JSON config file, command-line flags.
struct RunConfig {
    std::optional<std::filesystem::path> data;  // absent: synthetic data
    int trials = 32;
    std::uint64_t seed = 0;
    double val_fraction = 0.25;
    int k = 100;
    std::optional<double> nu;  // absent: automatic
    std::filesystem::path out = ".";
    bool oracle = false;
    unsigned threads = 0;

    // baselines
    int rf_trees = 100;
    int gbm_stages = 100;
    int gbm_depth = 3;
    double gbm_learning_rate = 0.1;

    // nu search / curve
    double nu_lo = 1e-6;
    double nu_hi = 1e3;
    int nu_grid = 64;
    double nu_tol = 1e-4;
    double magnitude_weight = 1.0;
    int curve_points = 40;

    // synthetic data
    int samples = 200;
    int features = 5;
    double noise = 1.0;

    bool one_sided = false;
    int hist_bins = 10;

    void validate() const;
};

/// Keys accepted in a config file (same spelling as the long flags).
const std::vector<std::string>& config_keys();

/// Applies a flat JSON object on top of `config`. Unknown keys and wrong types raise ConfigError.
void apply_config_json(RunConfig& config, const nlohmann::json& j);

void apply_config_file(RunConfig& config, const std::filesystem::path& path);

/// Loads --data if present, otherwise generates the synthetic set.
Dataset load_dataset(const RunConfig& config);

// ---------------------------------------------------------------------------

struct BenchmarkResult {
    std::vector<TrialReport> trials;
    ComparisonReport report;
    std::vector<std::filesystem::path> files;
};

/// 1..T trials of split / fit SR, GBM, RF / score R^2 on validation.
/// Writes trials.csv, summary.csv, nu_hist.csv, score_hist_sr_gbm.csv, score_hist_sr_rf.csv into config.out.
BenchmarkResult cmd_benchmark(const RunConfig& config);

struct NuCurveRow {
    double nu = 0.0;
    std::optional<double> corr;
    std::optional<double> grad_mag;
    std::optional<double> objective;
    std::optional<double> val_mse;
};

struct NuCurveResult {
    std::vector<NuCurveRow> rows;
    double optimizer_nu = 0.0;  // minimize_nu on the same cache (NaN when degenerate)
    std::string csv;
    std::filesystem::path file;
};

/// Objective decomposition and validation MSE over nu = 0 plus a log grid on [nu_lo, nu_hi].
/// Writes nu_curve.csv (nu,corr,grad_mag,objective,val_mse).
NuCurveResult cmd_nu_curve(const RunConfig& config);

struct PcaDiagResult {
    std::vector<double> initial_coord;
    std::vector<double> terminal_coord;
    double target_coord = 0.0;
    std::string csv;
    std::filesystem::path file;
};

/// Fits SR on the whole dataset and projects initial/terminal/target vectors on their first
/// principal component. With `oracle`, terminal vectors are the exact-gradient corrections.
/// Writes pca_diag.csv (estimator,initial_coord,terminal_coord; last row "target").
PcaDiagResult cmd_pca_diag(const RunConfig& config);

/// Fits one model ("sr", "rf" or "gbm") on the dataset and saves it as JSON.
void cmd_fit(const RunConfig& config, const std::string& model, const std::filesystem::path& model_path);

/// Predicts the dataset rows with a saved model; writes predictions.csv (row,prediction).
std::filesystem::path cmd_predict(const RunConfig& config, const std::filesystem::path& model_path);

/// Exit status for an in-flight exception: 2 config, 3 data, 4 numerical, 1 otherwise.
int exit_code_for(const std::exception& e) noexcept;

}  // namespace shoot::cli

#endif  // SHOOT_CLI_HPP
