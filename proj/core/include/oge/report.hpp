#pragma once

#include <string>
#include <vector>

#include "oge/evaluate.hpp"

namespace oge {

struct CurvePoint {
    std::int64_t step = 0;
    double mean_rate = 0.0;
    double std_rate = 0.0;
};

// step,mean_rate,std_rate
void write_curve_csv(const std::string& path, const std::vector<CurvePoint>& points);
std::vector<CurvePoint> read_curve_csv(const std::string& path);

struct ReportRow {
    std::string dataset;
    std::string policy;
    double mean = 0.0;
    double stddev = 0.0;
    int seeds = 1;
};

// dataset,policy,mean,std,seeds
void write_report_csv(const std::string& path, const std::vector<ReportRow>& rows);

// Per-run result persisted as JSON for later aggregation.
struct RunResult {
    std::string dataset;
    std::string policy;
    std::uint64_t seed = 0;
    double mean = 0.0;
    double stddev = 0.0;
};

void save_run_result(const std::string& path, const RunResult& r);
RunResult load_run_result(const std::string& path);

// Merge per-seed results: mean of means, std over seed means (0 for one seed).
std::vector<ReportRow> aggregate_runs(const std::vector<RunResult>& runs);

}  // namespace oge
