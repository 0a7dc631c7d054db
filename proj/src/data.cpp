#include "shoot/data.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

#include "shoot/error.hpp"

namespace shoot {

Dataset::Dataset(Matrix features, Vector target, std::vector<std::string> feature_names)
    : features_(std::move(features)), target_(std::move(target)), names_(std::move(feature_names)) {
    if (features_.rows() < 2) throw DataError("dataset needs at least 2 rows, got " + std::to_string(features_.rows()));
    if (features_.cols() < 1) throw DataError("dataset needs at least 1 feature column");
    if (target_.size() != features_.rows()) throw DataError("target length does not match feature rows");
    if (static_cast<Eigen::Index>(names_.size()) != features_.cols())
        throw DataError("feature_names has " + std::to_string(names_.size()) + " entries for " +
                        std::to_string(features_.cols()) + " columns");
    for (Eigen::Index r = 0; r < features_.rows(); ++r) {
        if (!features_.row(r).allFinite()) throw DataError("non-finite feature value in row " + std::to_string(r));
        if (!std::isfinite(target_(r))) throw DataError("non-finite target in row " + std::to_string(r));
    }
}

Dataset Dataset::subset(const std::vector<Eigen::Index>& rows) const {
    Matrix x(static_cast<Eigen::Index>(rows.size()), features_.cols());
    Vector y(static_cast<Eigen::Index>(rows.size()));
    for (std::size_t i = 0; i < rows.size(); ++i) {
        x.row(static_cast<Eigen::Index>(i)) = features_.row(rows[i]);
        y(static_cast<Eigen::Index>(i)) = target_(rows[i]);
    }
    return Dataset(std::move(x), std::move(y), names_);
}

// ---------------------------------------------------------------------------
// UCI auto-mpg
// ---------------------------------------------------------------------------

namespace {

constexpr std::size_t kMpgNumericFields = 8;
constexpr std::size_t kHorsepowerField = 3;

bool parse_double(std::string_view token, double& out) {
    const char* first = token.data();
    const char* last = token.data() + token.size();
    if (first != last && *first == '+') ++first;
    const auto [ptr, ec] = std::from_chars(first, last, out);
    return ec == std::errc() && ptr == last && std::isfinite(out);
}

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

}  // namespace

Dataset parse_auto_mpg(const std::string& text) {
    std::istringstream in(text);
    std::vector<std::array<double, kMpgNumericFields>> rows;
    std::string line;
    std::size_t line_no = 0;

    while (std::getline(in, line)) {
        ++line_no;
        const std::string content = trim(line);
        if (content.empty()) continue;

        const auto quote = content.find('"');
        if (quote == std::string::npos)
            throw ParseError("expected 9 fields ending in a quoted car name, found no quoted field", line_no);
        if (content.back() != '"' || content.find('"', quote + 1) != content.size() - 1)
            throw ParseError("car name field is not a single quoted string", line_no);

        std::istringstream fields(content.substr(0, quote));
        std::vector<std::string> tokens;
        for (std::string tok; fields >> tok;) tokens.push_back(tok);
        if (tokens.size() != kMpgNumericFields)
            throw ParseError("expected 9 fields, found " + std::to_string(tokens.size() + 1), line_no);

        std::array<double, kMpgNumericFields> values{};
        bool missing_hp = false;
        for (std::size_t f = 0; f < kMpgNumericFields; ++f) {
            if (f == kHorsepowerField && tokens[f] == "?") {
                missing_hp = true;
                continue;
            }
            if (!parse_double(tokens[f], values[f]))
                throw ParseError("unparsable numeric field " + std::to_string(f + 1) + " '" + tokens[f] + "'", line_no);
        }
        if (!missing_hp) rows.push_back(values);
    }

    const auto m = static_cast<Eigen::Index>(rows.size());
    if (m < 2) throw ParseError("auto-mpg data needs at least 2 complete rows, found " + std::to_string(m), line_no);

    Matrix x(m, kMpgNumericFields - 1);
    Vector y(m);
    for (Eigen::Index r = 0; r < m; ++r) {
        const auto& v = rows[static_cast<std::size_t>(r)];
        y(r) = v[0];
        for (std::size_t f = 1; f < kMpgNumericFields; ++f) x(r, static_cast<Eigen::Index>(f - 1)) = v[f];
    }
    return Dataset(std::move(x), std::move(y),
                   {"cylinders", "displacement", "horsepower", "weight", "acceleration", "model_year", "origin"});
}

Dataset load_auto_mpg(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open dataset file '" + path.string() + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    if (in.bad()) throw IoError("error reading '" + path.string() + "'");
    return parse_auto_mpg(buf.str());
}

// ---------------------------------------------------------------------------
// Synthetic data
// ---------------------------------------------------------------------------

Dataset make_synthetic(Eigen::Index m, Eigen::Index n, double noise_sd, std::uint64_t seed) {
    if (m < 2 || n < 1) throw DataError("make_synthetic requires m >= 2 and n >= 1");
    if (!(noise_sd >= 0.0) || !std::isfinite(noise_sd)) throw DataError("noise_sd must be finite and >= 0");

    Rng rng(derive_seed(seed, 0));
    std::normal_distribution<double> normal(0.0, 1.0);

    Vector w(n);
    for (Eigen::Index j = 0; j < n; ++j) w(j) = normal(rng);
    const double bias = normal(rng);

    Matrix x(m, n);
    for (Eigen::Index r = 0; r < m; ++r)
        for (Eigen::Index j = 0; j < n; ++j) x(r, j) = normal(rng);

    Vector y = x * w;
    y.array() += bias;
    if (noise_sd > 0.0)
        for (Eigen::Index r = 0; r < m; ++r) y(r) += noise_sd * normal(rng);

    std::vector<std::string> names;
    names.reserve(static_cast<std::size_t>(n));
    for (Eigen::Index j = 0; j < n; ++j) names.push_back("x" + std::to_string(j));
    return Dataset(std::move(x), std::move(y), std::move(names));
}

// ---------------------------------------------------------------------------
// Holdout split
// ---------------------------------------------------------------------------

std::pair<Dataset, Dataset> split(const Dataset& d, double val_fraction, std::uint64_t seed) {
    if (!(val_fraction > 0.0 && val_fraction < 1.0)) throw DataError("val_fraction must lie in (0, 1)");
    const Eigen::Index m = d.rows();
    const auto n_val = static_cast<Eigen::Index>(std::llround(static_cast<double>(m) * val_fraction));
    const Eigen::Index n_train = m - n_val;
    if (n_val < 2 || n_train < 2)
        throw DataError("split of " + std::to_string(m) + " rows at fraction " + std::to_string(val_fraction) +
                        " leaves a partition with fewer than 2 rows");

    std::vector<Eigen::Index> order(static_cast<std::size_t>(m));
    std::iota(order.begin(), order.end(), Eigen::Index{0});
    Rng rng(derive_seed(seed, 1));
    std::shuffle(order.begin(), order.end(), rng);

    std::vector<Eigen::Index> train(order.begin(), order.begin() + n_train);
    std::vector<Eigen::Index> val(order.begin() + n_train, order.end());
    return {d.subset(train), d.subset(val)};
}

}  // namespace shoot
