#include <cmath>
#include <fstream>
#include <iostream>

#include "shoot/baselines.hpp"
#include "shoot/cli.hpp"
#include "shoot/ensemble.hpp"
#include "shoot/error.hpp"
#include "shoot/io.hpp"
#include "shoot/serialize.hpp"

namespace shoot::cli {

using nlohmann::json;

// ---------------------------------------------------------------------------
// Configuration
// ---------------------------------------------------------------------------

void RunConfig::validate() const {
    if (trials < 1) throw ConfigError("trials must be >= 1");
    if (!(val_fraction > 0.0 && val_fraction < 1.0)) throw ConfigError("val-fraction must lie in (0, 1)");
    if (k < 1) throw ConfigError("k must be >= 1");
    if (nu && !(*nu >= 0.0 && std::isfinite(*nu))) throw ConfigError("nu must be 'auto' or a finite value >= 0");
    if (rf_trees < 1 || gbm_stages < 1) throw ConfigError("rf-trees and gbm-stages must be >= 1");
    if (gbm_depth < 1) throw ConfigError("gbm-depth must be >= 1");
    if (!(gbm_learning_rate > 0.0 && gbm_learning_rate <= 1.0)) throw ConfigError("gbm-learning-rate must lie in (0, 1]");
    if (!(nu_lo >= 0.0 && nu_hi > nu_lo)) throw ConfigError("need 0 <= nu-lo < nu-hi");
    if (nu_grid < 2 || curve_points < 2) throw ConfigError("nu-grid and curve-points must be >= 2");
    if (!(nu_tol > 0.0)) throw ConfigError("nu-tol must be positive");
    if (!(magnitude_weight >= 0.0)) throw ConfigError("magnitude-weight must be >= 0");
    if (samples < 2 || features < 1) throw ConfigError("synthetic data needs samples >= 2 and features >= 1");
    if (!(noise >= 0.0)) throw ConfigError("noise must be >= 0");
    if (hist_bins < 1) throw ConfigError("hist-bins must be >= 1");
}

const std::vector<std::string>& config_keys() {
    static const std::vector<std::string> keys{
        "data",     "trials",    "seed",      "val-fraction", "k",          "nu",
        "out",      "oracle",    "threads",   "rf-trees",     "gbm-stages", "gbm-depth",
        "gbm-learning-rate",     "nu-lo",     "nu-hi",        "nu-grid",    "nu-tol",
        "magnitude-weight",      "curve-points",              "samples",    "features",
        "noise",    "one-sided", "hist-bins"};
    return keys;
}

namespace {

template <class T>
T get_as(const json& j, const std::string& key) {
    try {
        if constexpr (std::is_same_v<T, bool>) {
            if (!j.is_boolean()) throw ConfigError("");
        } else if constexpr (std::is_integral_v<T>) {
            if (!j.is_number_integer()) throw ConfigError("");
            if constexpr (std::is_unsigned_v<T>)
                if (j.is_number_integer() && !j.is_number_unsigned()) throw ConfigError("");
        } else if constexpr (std::is_floating_point_v<T>) {
            if (!j.is_number()) throw ConfigError("");
        } else {
            if (!j.is_string()) throw ConfigError("");
        }
        return j.get<T>();
    } catch (const std::exception&) {
        throw ConfigError("config key '" + key + "' has the wrong type");
    }
}

}  // namespace

void apply_config_json(RunConfig& c, const json& j) {
    if (!j.is_object()) throw ConfigError("config file must contain a flat JSON object");
    const auto& keys = config_keys();
    for (const auto& [key, value] : j.items()) {
        if (std::find(keys.begin(), keys.end(), key) == keys.end())
            throw ConfigError("unknown config key '" + key + "'");
        if (key == "data") c.data = get_as<std::string>(value, key);
        else if (key == "trials") c.trials = get_as<int>(value, key);
        else if (key == "seed") c.seed = get_as<std::uint64_t>(value, key);
        else if (key == "val-fraction") c.val_fraction = get_as<double>(value, key);
        else if (key == "k") c.k = get_as<int>(value, key);
        else if (key == "nu") {
            if (value.is_string()) {
                if (value.get<std::string>() != "auto") throw ConfigError("config key 'nu' must be \"auto\" or a number");
                c.nu.reset();
            } else {
                c.nu = get_as<double>(value, key);
            }
        }
        else if (key == "out") c.out = get_as<std::string>(value, key);
        else if (key == "oracle") c.oracle = get_as<bool>(value, key);
        else if (key == "threads") c.threads = get_as<unsigned>(value, key);
        else if (key == "rf-trees") c.rf_trees = get_as<int>(value, key);
        else if (key == "gbm-stages") c.gbm_stages = get_as<int>(value, key);
        else if (key == "gbm-depth") c.gbm_depth = get_as<int>(value, key);
        else if (key == "gbm-learning-rate") c.gbm_learning_rate = get_as<double>(value, key);
        else if (key == "nu-lo") c.nu_lo = get_as<double>(value, key);
        else if (key == "nu-hi") c.nu_hi = get_as<double>(value, key);
        else if (key == "nu-grid") c.nu_grid = get_as<int>(value, key);
        else if (key == "nu-tol") c.nu_tol = get_as<double>(value, key);
        else if (key == "magnitude-weight") c.magnitude_weight = get_as<double>(value, key);
        else if (key == "curve-points") c.curve_points = get_as<int>(value, key);
        else if (key == "samples") c.samples = get_as<int>(value, key);
        else if (key == "features") c.features = get_as<int>(value, key);
        else if (key == "noise") c.noise = get_as<double>(value, key);
        else if (key == "one-sided") c.one_sided = get_as<bool>(value, key);
        else if (key == "hist-bins") c.hist_bins = get_as<int>(value, key);
    }
}

void apply_config_file(RunConfig& config, const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path.string() + "'");
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw ConfigError("config file '" + path.string() + "' is not valid JSON: " + e.what());
    }
    apply_config_json(config, j);
}

Dataset load_dataset(const RunConfig& config) {
    if (config.data) return load_auto_mpg(*config.data);
    return make_synthetic(config.samples, config.features, config.noise, derive_seed(config.seed, 0xda7a));
}

int exit_code_for(const std::exception& e) noexcept {
    if (dynamic_cast<const ConfigError*>(&e)) return 2;
    if (dynamic_cast<const DataError*>(&e)) return 3;
    if (dynamic_cast<const NumericalError*>(&e)) return 4;
    return 1;
}

// ---------------------------------------------------------------------------
// Model configs from a RunConfig
// ---------------------------------------------------------------------------

namespace {

// per-trial stream identifiers under the master seed
enum Stream : std::uint64_t { kSplit = 0, kShooting = 1, kForest = 2, kBoosting = 3 };

SRConfig shooting_config(const RunConfig& c, std::uint64_t seed) {
    SRConfig s;
    s.k = c.k;
    s.fixed_nu = c.nu;
    s.seed = seed;
    s.threads = c.threads;
    s.nu_search = {c.nu_lo, c.nu_hi, c.nu_grid, c.nu_tol, c.magnitude_weight};
    return s;
}

RFConfig forest_config(const RunConfig& c, std::uint64_t seed) {
    RFConfig r;
    r.n_trees = c.rf_trees;
    r.seed = seed;
    r.threads = c.threads;
    return r;
}

GBMConfig boosting_config(const RunConfig& c, std::uint64_t seed) {
    GBMConfig g;
    g.n_stages = c.gbm_stages;
    g.learning_rate = c.gbm_learning_rate;
    g.tree_params.max_depth = c.gbm_depth;
    g.seed = seed;
    return g;
}

// Re-raises with a prefix while keeping the error family (and hence the exit code).
[[noreturn]] void rethrow_with_context(const std::string& prefix) {
    try {
        throw;
    } catch (const ConfigError& e) {
        throw ConfigError(prefix + e.what());
    } catch (const DataError& e) {
        throw DataError(prefix + e.what());
    } catch (const NumericalError& e) {
        throw NumericalError(prefix + e.what());
    } catch (const std::exception& e) {
        throw std::runtime_error(prefix + e.what());
    }
}

std::filesystem::path prepare_out(const RunConfig& config) {
    std::error_code ec;
    std::filesystem::create_directories(config.out, ec);
    if (ec) throw IoError("cannot create output directory '" + config.out.string() + "': " + ec.message());
    return config.out;
}

std::string cell(const std::optional<double>& v) { return v ? format_number(*v) : std::string{}; }

}  // namespace

// ---------------------------------------------------------------------------
// benchmark
// ---------------------------------------------------------------------------

BenchmarkResult cmd_benchmark(const RunConfig& config) {
    config.validate();
    const Dataset data = load_dataset(config);
    const auto out_dir = prepare_out(config);

    BenchmarkResult result;
    for (int t = 1; t <= config.trials; ++t) {
        const auto trial = static_cast<std::uint64_t>(t);
        try {
            const auto [train, val] = split(data, config.val_fraction, derive_seed(config.seed, trial, kSplit));

            const ShootingEnsemble sr = fit_shooting(train, shooting_config(config, derive_seed(config.seed, trial, kShooting)));
            const GradientBoosting gbm = fit_gbm(train, boosting_config(config, derive_seed(config.seed, trial, kBoosting)));
            const RandomForest rf = fit_rf(train, forest_config(config, derive_seed(config.seed, trial, kForest)));

            TrialReport rep;
            rep.trial_index = t;
            rep.nu_selected = sr.nu;
            rep.scores = {{"SR", r_squared(val.target(), predict(sr, val.features()))},
                          {"GBM", r_squared(val.target(), gbm.predict(val.features()))},
                          {"RF", r_squared(val.target(), rf.predict(val.features()))}};
            for (const auto& w : sr.warnings) std::cerr << "trial " << t << ": warning: " << w << '\n';
            result.trials.push_back(std::move(rep));
        } catch (...) {
            rethrow_with_context("trial " + std::to_string(t) + ": ");
        }
    }

    result.report =
        compare_trials(result.trials, config.one_sided ? Sidedness::OneSidedGreater : Sidedness::TwoSided);

    std::vector<double> nus, sr_scores, gbm_scores, rf_scores;
    for (const auto& tr : result.trials) {
        nus.push_back(tr.nu_selected);
        sr_scores.push_back(tr.score("SR"));
        gbm_scores.push_back(tr.score("GBM"));
        rf_scores.push_back(tr.score("RF"));
    }

    const std::vector<std::pair<std::string, std::string>> files{
        {"trials.csv", trials_csv(result.trials)},
        {"summary.csv", summary_csv(result.report)},
        {"nu_hist.csv", histogram_csv({{"nu", nus}}, config.hist_bins)},
        {"score_hist_sr_gbm.csv", histogram_csv({{"SR", sr_scores}, {"GBM", gbm_scores}}, config.hist_bins)},
        {"score_hist_sr_rf.csv", histogram_csv({{"SR", sr_scores}, {"RF", rf_scores}}, config.hist_bins)},
    };
    for (const auto& [name, contents] : files) {
        write_file_atomic(out_dir / name, contents);
        result.files.push_back(out_dir / name);
    }
    return result;
}

// ---------------------------------------------------------------------------
// nu-curve
// ---------------------------------------------------------------------------

NuCurveResult cmd_nu_curve(const RunConfig& config) {
    config.validate();
    const Dataset data = load_dataset(config);
    const auto out_dir = prepare_out(config);
    const auto [train, val] = split(data, config.val_fraction, derive_seed(config.seed, 0, kSplit));

    SRConfig sr = shooting_config(config, derive_seed(config.seed, 0, kShooting));
    const ShootingSetup setup = prepare_shooting(train, sr);

    std::optional<NuCache> cache;
    try {
        cache = shooting_nu_cache(setup);
    } catch (const DegenerateCorrelationError& e) {
        std::cerr << "warning: " << e.what() << "; objective columns left empty\n";
    }

    std::vector<double> grid{0.0};
    const double lo = std::max(config.nu_lo, 1e-6);
    for (int g = 0; g < config.curve_points; ++g) {
        const double t = static_cast<double>(g) / static_cast<double>(config.curve_points - 1);
        grid.push_back(std::exp(std::log(lo) + t * (std::log(config.nu_hi) - std::log(lo))));
    }

    NuCurveResult result;
    result.optimizer_nu = std::numeric_limits<double>::quiet_NaN();
    if (cache) {
        try {
            result.optimizer_nu = minimize_nu(*cache, sr.nu_search).nu;
        } catch (const DegenerateCorrelationError&) {
        }
    }

    CsvTable table({"nu", "corr", "grad_mag", "objective", "val_mse"});
    for (const double nu : grid) {
        NuCurveRow row;
        row.nu = nu;
        if (cache) {
            try {
                const NuObjective o = objective(*cache, nu, config.magnitude_weight);
                row.corr = o.corr_term;
                row.grad_mag = o.magnitude_term;
                row.objective = o.total;
            } catch (const DegenerateCorrelationError&) {
            }
        }
        sr.fixed_nu = nu;
        row.val_mse = mse(val.target(), predict(fit_shooting(train, sr), val.features()));
        table.add_row({format_number(nu), cell(row.corr), cell(row.grad_mag), cell(row.objective), cell(row.val_mse)});
        result.rows.push_back(row);
    }

    result.csv = table.str();
    result.file = out_dir / "nu_curve.csv";
    write_file_atomic(result.file, result.csv);
    return result;
}

// ---------------------------------------------------------------------------
// pca-diag
// ---------------------------------------------------------------------------

PcaDiagResult cmd_pca_diag(const RunConfig& config) {
    config.validate();
    const Dataset data = load_dataset(config);
    const auto out_dir = prepare_out(config);

    const SRConfig sr = shooting_config(config, derive_seed(config.seed, 0, kShooting));
    PcaProjection proj;
    if (config.oracle) {
        const ShootingSetup setup = prepare_shooting(data, sr);
        double nu = config.nu.value_or(1.0);
        if (!config.nu) {
            try {
                nu = minimize_nu(shooting_nu_cache(setup), sr.nu_search).nu;
            } catch (const DegenerateCorrelationError& e) {
                std::cerr << "warning: " << e.what() << "; using nu = 1\n";
            }
        }
        const Matrix initial = initial_predictions(setup.linear, setup.offsets.offsets, nu, data.features());
        const OracleOutput oracle = oracle_predict(setup.linear, setup.offsets, nu, data);
        proj = pca_project(initial, oracle.per_estimator, data.target());
    } else {
        const ShootingEnsemble ens = fit_shooting(data, sr);
        for (const auto& w : ens.warnings) std::cerr << "warning: " << w << '\n';
        proj = pca_project_diagnostics(ens, data);
    }

    CsvTable table({"estimator", "initial_coord", "terminal_coord"});
    for (std::size_t i = 0; i < proj.initial_coord.size(); ++i)
        table.add_row({std::to_string(i), format_number(proj.initial_coord[i]), format_number(proj.terminal_coord[i])});
    table.add_row({"target", format_number(proj.target_coord), format_number(proj.target_coord)});

    PcaDiagResult result;
    result.initial_coord = std::move(proj.initial_coord);
    result.terminal_coord = std::move(proj.terminal_coord);
    result.target_coord = proj.target_coord;
    result.csv = table.str();
    result.file = out_dir / "pca_diag.csv";
    write_file_atomic(result.file, result.csv);
    return result;
}

// ---------------------------------------------------------------------------
// fit / predict
// ---------------------------------------------------------------------------

void cmd_fit(const RunConfig& config, const std::string& model, const std::filesystem::path& model_path) {
    config.validate();
    const Dataset data = load_dataset(config);
    if (model == "sr") {
        save_model(model_path, fit_shooting(data, shooting_config(config, derive_seed(config.seed, 0, kShooting))));
    } else if (model == "rf") {
        save_model(model_path, fit_rf(data, forest_config(config, derive_seed(config.seed, 0, kForest))));
    } else if (model == "gbm") {
        save_model(model_path, fit_gbm(data, boosting_config(config, derive_seed(config.seed, 0, kBoosting))));
    } else {
        throw ConfigError("unknown model type '" + model + "' (expected sr, rf or gbm)");
    }
}

std::filesystem::path cmd_predict(const RunConfig& config, const std::filesystem::path& model_path) {
    config.validate();
    const Dataset data = load_dataset(config);
    const auto out_dir = prepare_out(config);
    const Vector pred = predict_any(load_model(model_path), data.features());

    CsvTable table({"row", "prediction", "target"});
    for (Eigen::Index r = 0; r < pred.size(); ++r)
        table.add_row({std::to_string(r), format_number(pred(r)), format_number(data.target()(r))});
    const auto path = out_dir / "predictions.csv";
    write_file_atomic(path, table.str());
    return path;
}

}  // namespace shoot::cli
