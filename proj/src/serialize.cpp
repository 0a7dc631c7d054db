#include "shoot/serialize.hpp"

#include <fstream>
#include <string>

#include "shoot/error.hpp"
#include "shoot/io.hpp"

namespace shoot {

using nlohmann::json;

namespace {

json vector_to_json(const Vector& v) { return json(std::vector<double>(v.data(), v.data() + v.size())); }

Vector vector_from_json(const json& j) {
    const auto values = j.get<std::vector<double>>();
    return Eigen::Map<const Vector>(values.data(), static_cast<Eigen::Index>(values.size()));
}

// column-major: one JSON array per column
json matrix_to_json(const Matrix& m) {
    json out = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) out.push_back(vector_to_json(m.col(c)));
    return out;
}

Matrix matrix_from_json(const json& j, Eigen::Index rows) {
    Matrix out(rows, static_cast<Eigen::Index>(j.size()));
    for (std::size_t c = 0; c < j.size(); ++c) {
        const Vector col = vector_from_json(j[c]);
        if (col.size() != rows) throw DataError("model document: matrix column has wrong length");
        out.col(static_cast<Eigen::Index>(c)) = col;
    }
    return out;
}

json header(const char* kind) {
    return json{{"format", "shoot-model"}, {"version", kModelFormatVersion}, {"kind", kind}};
}

json trees_to_json(const std::vector<RegressionTree>& trees) {
    json out = json::array();
    for (const auto& t : trees) out.push_back(tree_to_json(t));
    return out;
}

std::vector<RegressionTree> trees_from_json(const json& j) {
    std::vector<RegressionTree> out;
    out.reserve(j.size());
    for (const auto& t : j) out.push_back(tree_from_json(t));
    return out;
}

}  // namespace

json tree_to_json(const RegressionTree& tree) {
    std::vector<std::int32_t> feature, left, right;
    std::vector<double> threshold, value;
    std::vector<std::int64_t> n_samples;
    for (const auto& n : tree.nodes()) {
        feature.push_back(n.feature);
        threshold.push_back(n.threshold);
        left.push_back(n.left);
        right.push_back(n.right);
        value.push_back(n.value);
        n_samples.push_back(n.n_samples);
    }
    return json{{"n_features", tree.n_features()}, {"feature", feature}, {"threshold", threshold},
                {"left", left},   {"right", right},   {"value", value},  {"n_samples", n_samples}};
}

RegressionTree tree_from_json(const json& j) {
    const auto feature = j.at("feature").get<std::vector<std::int32_t>>();
    const auto threshold = j.at("threshold").get<std::vector<double>>();
    const auto left = j.at("left").get<std::vector<std::int32_t>>();
    const auto right = j.at("right").get<std::vector<std::int32_t>>();
    const auto value = j.at("value").get<std::vector<double>>();
    const auto n_samples = j.at("n_samples").get<std::vector<std::int64_t>>();
    const std::size_t count = feature.size();
    if (threshold.size() != count || left.size() != count || right.size() != count || value.size() != count ||
        n_samples.size() != count)
        throw DataError("model document: tree arrays differ in length");

    std::vector<RegressionTree::Node> nodes(count);
    for (std::size_t i = 0; i < count; ++i)
        nodes[i] = {feature[i], threshold[i], left[i], right[i], value[i], n_samples[i]};
    return RegressionTree(std::move(nodes), j.at("n_features").get<Eigen::Index>());
}

json model_to_json(const ShootingEnsemble& model) {
    json j = header("shooting");
    j["n_features"] = model.n_features();
    j["linear"] = {{"coefficients", vector_to_json(model.linear.coefficients)},
                   {"residual_variance", model.linear.residual_variance},
                   {"coefficient_covariance", matrix_to_json(model.linear.coefficient_covariance)},
                   {"covariance_factor", matrix_to_json(model.linear.covariance_factor)},
                   {"jitter", model.linear.jitter}};
    j["nu"] = model.nu;
    j["offsets"] = matrix_to_json(model.offsets);
    j["trees"] = trees_to_json(model.trees);
    if (model.nu_diagnostics) {
        const auto& d = *model.nu_diagnostics;
        j["nu_diagnostics"] = {{"nu", d.nu},
                               {"objective", d.objective_value},
                               {"corr_term", d.corr_term},
                               {"magnitude_term", d.magnitude_term},
                               {"evaluations", d.evaluations}};
    }
    j["warnings"] = model.warnings;
    return j;
}

json model_to_json(const RandomForest& model) {
    json j = header("random_forest");
    j["trees"] = trees_to_json(model.trees);
    return j;
}

json model_to_json(const GradientBoosting& model) {
    json j = header("gbm");
    j["initial"] = model.initial;
    j["learning_rate"] = model.learning_rate;
    j["stages"] = trees_to_json(model.stages);
    return j;
}

AnyModel model_from_json(const json& j) {
    try {
        if (j.value("format", std::string{}) != "shoot-model") throw DataError("not a shoot-model document");
        const int version = j.at("version").get<int>();
        if (version != kModelFormatVersion)
            throw DataError("unsupported model format version " + std::to_string(version));
        const auto kind = j.at("kind").get<std::string>();

        if (kind == "shooting") {
            ShootingEnsemble m;
            const auto p = j.at("n_features").get<Eigen::Index>() + 1;
            const json& lin = j.at("linear");
            m.linear.coefficients = vector_from_json(lin.at("coefficients"));
            if (m.linear.coefficients.size() != p) throw DataError("model document: coefficient count mismatch");
            m.linear.residual_variance = lin.at("residual_variance").get<double>();
            m.linear.coefficient_covariance = matrix_from_json(lin.at("coefficient_covariance"), p);
            m.linear.covariance_factor = matrix_from_json(lin.at("covariance_factor"), p);
            m.linear.jitter = lin.at("jitter").get<double>();
            m.nu = j.at("nu").get<double>();
            m.offsets = matrix_from_json(j.at("offsets"), p);
            m.trees = trees_from_json(j.at("trees"));
            if (static_cast<Eigen::Index>(m.trees.size()) != m.offsets.cols())
                throw DataError("model document: tree count does not match offset count");
            if (j.contains("nu_diagnostics")) {
                const json& d = j["nu_diagnostics"];
                m.nu_diagnostics = NuResult{d.at("nu").get<double>(), d.at("objective").get<double>(),
                                            d.at("corr_term").get<double>(), d.at("magnitude_term").get<double>(),
                                            d.at("evaluations").get<int>()};
            }
            m.warnings = j.value("warnings", std::vector<std::string>{});
            return m;
        }
        if (kind == "random_forest") return RandomForest{trees_from_json(j.at("trees"))};
        if (kind == "gbm") {
            GradientBoosting m;
            m.initial = j.at("initial").get<double>();
            m.learning_rate = j.at("learning_rate").get<double>();
            m.stages = trees_from_json(j.at("stages"));
            return m;
        }
        throw DataError("unknown model kind '" + kind + "'");
    } catch (const json::exception& e) {
        throw DataError(std::string("malformed model document: ") + e.what());
    }
}

void save_model(const std::filesystem::path& path, const AnyModel& model) {
    const json j = std::visit([](const auto& m) { return model_to_json(m); }, model);
    write_file_atomic(path, j.dump() + "\n");
}

AnyModel load_model(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open model file '" + path.string() + "'");
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw DataError("model file '" + path.string() + "' is not valid JSON: " + e.what());
    }
    return model_from_json(j);
}

Vector predict_any(const AnyModel& model, const Matrix& features) {
    struct Visitor {
        const Matrix& x;
        Vector operator()(const ShootingEnsemble& m) const { return predict(m, x); }
        Vector operator()(const RandomForest& m) const { return m.predict(x); }
        Vector operator()(const GradientBoosting& m) const { return m.predict(x); }
    };
    return std::visit(Visitor{features}, model);
}

}  // namespace shoot
