#pragma once
// CSV / JSON output for experiment summaries and fit results.

#include <filesystem>
#include <ostream>
#include <string>
#include <vector>

#include "tscore/estimation.hpp"
#include "tscore/experiment.hpp"

namespace tscore {

inline constexpr const char* kSummaryCsvHeader =
    "family,true_lambda,estimator,mean_est,mean_sd,are,mc_se,replicates,failures";
inline constexpr const char* kCurveCsvHeader = "lambda,estimator,are";

/// Six significant digits, as "%.6g"; non-finite values print as "nan"/"inf".
std::string format_number(double v);

std::string summary_csv(const std::vector<ExperimentSummary>& rows);
/// Same content as summary_csv, numbers at full precision.
std::string summary_json(const std::vector<ExperimentSummary>& rows);
std::string curve_csv(const std::vector<ExperimentSummary>& rows);
std::string fit_json(const FitResult& fit, Family family);

/// Writes to a sibling temporary file and renames it over `path`.
void write_file_atomic(const std::filesystem::path& path, const std::string& content);

}  // namespace tscore
