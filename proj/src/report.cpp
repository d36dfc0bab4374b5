#include "tscore/report.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "tscore/error.hpp"

namespace tscore {

std::string format_number(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

std::string summary_csv(const std::vector<ExperimentSummary>& rows) {
  std::ostringstream out;
  out << kSummaryCsvHeader << '\n';
  for (const auto& row : rows) {
    for (const auto& e : row.estimators) {
      out << to_string(row.family) << ',' << format_number(row.true_lambda) << ',' << to_string(e.kind) << ','
          << format_number(e.mean_est) << ',' << format_number(e.mean_sd) << ',' << format_number(e.are) << ','
          << format_number(e.mc_se) << ',' << e.replicates << ',' << e.failures << '\n';
    }
  }
  return out.str();
}

namespace {

nlohmann::json number(double v) {
  if (!std::isfinite(v)) return nullptr;
  return v;
}

}  // namespace

std::string summary_json(const std::vector<ExperimentSummary>& rows) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& row : rows) {
    for (const auto& e : row.estimators) {
      arr.push_back({{"experiment", row.name},
                     {"family", std::string(to_string(row.family))},
                     {"true_lambda", row.true_lambda},
                     {"estimator", std::string(to_string(e.kind))},
                     {"mean_est", number(e.mean_est)},
                     {"mean_sd", number(e.mean_sd)},
                     {"are", number(e.are)},
                     {"mc_se", number(e.mc_se)},
                     {"replicates", e.replicates},
                     {"failures", e.failures},
                     {"grid_point_ok", row.ok}});
    }
  }
  return arr.dump(2) + "\n";
}

std::string curve_csv(const std::vector<ExperimentSummary>& rows) {
  std::ostringstream out;
  out << kCurveCsvHeader << '\n';
  for (const auto& row : rows)
    for (const auto& e : row.estimators)
      out << format_number(row.true_lambda) << ',' << to_string(e.kind) << ',' << format_number(e.are) << '\n';
  return out.str();
}

std::string fit_json(const FitResult& fit, Family family) {
  nlohmann::json j{{"model", std::string(to_string(family))},
                   {"estimator", std::string(to_string(fit.kind))},
                   {"lambda", fit.estimate.lambda},
                   {"sigma2", fit.estimate.sigma2},
                   {"mu", fit.estimate.mu},
                   {"sd", number(fit.sd)},
                   {"converged", fit.converged},
                   {"evaluations", fit.evaluations},
                   {"godambe", {{"J", number(fit.info.J)}, {"K", number(fit.info.K)}, {"G", number(fit.info.G)}}}};
  return j.dump(2) + "\n";
}

void write_file_atomic(const std::filesystem::path& path, const std::string& content) {
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::InputError, "cannot write " + tmp.string());
    out << content;
    if (!out.flush()) throw Error(ErrorCode::InputError, "failed writing " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

}  // namespace tscore
