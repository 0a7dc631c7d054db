#ifndef SHOOT_REPORT_HPP
#define SHOOT_REPORT_HPP

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "shoot/metrics.hpp"

namespace shoot {

/// Validation scores (R^2) of every model in one train/validation trial.
struct TrialReport {
    int trial_index = 0;
    std::vector<std::pair<std::string, double>> scores;  // model order is preserved
    double nu_selected = 0.0;

    double score(const std::string& model) const;
};

struct PairwiseTest {
    std::string first;
    std::string second;
    std::optional<TTestResult> test;  // absent when fewer than 2 trials or zero-variance differences
};

struct ComparisonReport {
    std::vector<std::string> models;
    std::vector<double> mean;
    std::vector<double> stddev;  // sample standard deviation; 0 for a single trial
    std::vector<PairwiseTest> pairs;
    int trial_count = 0;

    const PairwiseTest* find_pair(const std::string& a, const std::string& b) const;
};

/// Aggregates trials; every model must appear in every trial in the same order.
ComparisonReport compare_trials(const std::vector<TrialReport>& trials, Sidedness sidedness = Sidedness::TwoSided);

/// trial,model,score,nu  (nu is filled on the first model's rows)
std::string trials_csv(const std::vector<TrialReport>& trials);

/// model,mean,std,vs,t,p_value with one row per model; p-values against the first model.
std::string summary_csv(const ComparisonReport& report);

/// bin_lo,bin_hi,<column...> with equal-width bins spanning all values of all columns.
std::string histogram_csv(const std::vector<std::pair<std::string, std::vector<double>>>& columns, int bins);

/// Fixed-width text rendering of the summary.
std::string summary_table(const ComparisonReport& report);

}  // namespace shoot

#endif  // SHOOT_REPORT_HPP
