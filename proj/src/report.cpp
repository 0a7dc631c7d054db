#include "shoot/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "shoot/error.hpp"
#include "shoot/io.hpp"

namespace shoot {

double TrialReport::score(const std::string& model) const {
    for (const auto& [name, value] : scores)
        if (name == model) return value;
    throw DataError("trial " + std::to_string(trial_index) + " has no score for model '" + model + "'");
}

const PairwiseTest* ComparisonReport::find_pair(const std::string& a, const std::string& b) const {
    for (const auto& p : pairs)
        if (p.first == a && p.second == b) return &p;
    return nullptr;
}

ComparisonReport compare_trials(const std::vector<TrialReport>& trials, Sidedness sidedness) {
    if (trials.empty()) throw DataError("compare_trials: no trials");
    ComparisonReport out;
    for (const auto& [name, _] : trials.front().scores) out.models.push_back(name);
    out.trial_count = static_cast<int>(trials.size());

    const auto n_models = out.models.size();
    const auto n_trials = static_cast<Eigen::Index>(trials.size());
    std::vector<Vector> columns(n_models, Vector(n_trials));
    for (Eigen::Index t = 0; t < n_trials; ++t) {
        const auto& tr = trials[static_cast<std::size_t>(t)];
        if (tr.scores.size() != n_models) throw DataError("compare_trials: model sets differ between trials");
        for (std::size_t mi = 0; mi < n_models; ++mi) {
            if (tr.scores[mi].first != out.models[mi])
                throw DataError("compare_trials: model order differs in trial " + std::to_string(tr.trial_index));
            columns[mi](t) = tr.scores[mi].second;
        }
    }

    for (const auto& c : columns) {
        const double mean = c.mean();
        out.mean.push_back(mean);
        out.stddev.push_back(n_trials > 1
                                 ? std::sqrt((c.array() - mean).square().sum() / static_cast<double>(n_trials - 1))
                                 : 0.0);
    }

    for (std::size_t a = 0; a < n_models; ++a) {
        for (std::size_t b = a + 1; b < n_models; ++b) {
            PairwiseTest pair{out.models[a], out.models[b], std::nullopt};
            if (n_trials >= 2) {
                try {
                    pair.test = paired_t_test(columns[a], columns[b], sidedness);
                } catch (const DegenerateTestError&) {
                }
            }
            out.pairs.push_back(std::move(pair));
        }
    }
    return out;
}

std::string trials_csv(const std::vector<TrialReport>& trials) {
    CsvTable table({"trial", "model", "score", "nu"});
    for (const auto& tr : trials) {
        for (std::size_t i = 0; i < tr.scores.size(); ++i) {
            table.add_row({std::to_string(tr.trial_index), tr.scores[i].first, format_number(tr.scores[i].second),
                           i == 0 ? format_number(tr.nu_selected) : std::string{}});
        }
    }
    return table.str();
}

std::string summary_csv(const ComparisonReport& report) {
    CsvTable table({"model", "mean", "std", "vs", "t", "p_value"});
    for (std::size_t i = 0; i < report.models.size(); ++i) {
        std::string vs, t = "NA", p = "NA";
        if (i > 0) {
            vs = report.models.front();
            if (const auto* pair = report.find_pair(report.models.front(), report.models[i]); pair && pair->test) {
                t = format_number(pair->test->t);
                p = format_number(pair->test->p);
            }
        } else {
            t.clear();
            p.clear();
        }
        table.add_row({report.models[i], format_number(report.mean[i]), format_number(report.stddev[i]), vs, t, p});
    }
    return table.str();
}

std::string histogram_csv(const std::vector<std::pair<std::string, std::vector<double>>>& columns, int bins) {
    if (bins < 1) throw ConfigError("histogram needs at least one bin");
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (const auto& [_, values] : columns)
        for (const double v : values) {
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
    if (!std::isfinite(lo)) lo = hi = 0.0;
    if (hi == lo) {
        const double pad = lo == 0.0 ? 0.5 : std::abs(lo) * 0.05;
        lo -= pad;
        hi += pad;
    }
    const double width = (hi - lo) / bins;

    std::vector<std::string> header{"bin_lo", "bin_hi"};
    for (const auto& [name, _] : columns) header.push_back(name);
    CsvTable table(header);

    std::vector<std::vector<int>> counts(columns.size(), std::vector<int>(static_cast<std::size_t>(bins), 0));
    for (std::size_t c = 0; c < columns.size(); ++c)
        for (const double v : columns[c].second) {
            auto b = static_cast<int>((v - lo) / width);
            b = std::clamp(b, 0, bins - 1);
            ++counts[c][static_cast<std::size_t>(b)];
        }
    for (int b = 0; b < bins; ++b) {
        std::vector<std::string> row{format_number(lo + b * width), format_number(b + 1 == bins ? hi : lo + (b + 1) * width)};
        for (const auto& cc : counts) row.push_back(std::to_string(cc[static_cast<std::size_t>(b)]));
        table.add_row(std::move(row));
    }
    return table.str();
}

std::string summary_table(const ComparisonReport& report) {
    std::string out;
    char line[160];
    std::snprintf(line, sizeof line, "%-8s %10s %10s %10s\n", "Method", "Avg.", "Std.", "P-Value");
    out += line;
    for (std::size_t i = 0; i < report.models.size(); ++i) {
        std::string p = "N/A";
        if (i > 0)
            if (const auto* pair = report.find_pair(report.models.front(), report.models[i]); pair && pair->test) {
                char buf[32];
                std::snprintf(buf, sizeof buf, "%.4f", pair->test->p);
                p = buf;
            }
        std::snprintf(line, sizeof line, "%-8s %10.4f %10.4f %10s\n", report.models[i].c_str(), report.mean[i],
                      report.stddev[i], p.c_str());
        out += line;
    }
    std::snprintf(line, sizeof line, "(%d trials)\n", report.trial_count);
    out += line;
    return out;
}

}  // namespace shoot
