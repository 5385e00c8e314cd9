#include "oge/report.hpp"

#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include <json.hpp>

#include "oge/error.hpp"

namespace oge {

namespace {

// Shortest decimal form that round-trips doubles keeps CSVs byte-stable.
std::string fmt(double v) {
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

}  // namespace

void write_curve_csv(const std::string& path, const std::vector<CurvePoint>& points) {
    std::ofstream os(path);
    if (!os) throw DataError("cannot write: " + path);
    os << "step,mean_rate,std_rate\n";
    for (const auto& p : points)
        os << p.step << ',' << fmt(p.mean_rate) << ',' << fmt(p.std_rate) << '\n';
    if (!os) throw DataError("write failed: " + path);
}

std::vector<CurvePoint> read_curve_csv(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw DataError("cannot open: " + path);
    std::string line;
    if (!std::getline(is, line) || line != "step,mean_rate,std_rate")
        throw DataError("bad curve header: " + path);
    std::vector<CurvePoint> out;
    int lineno = 1;
    while (std::getline(is, line)) {
        ++lineno;
        if (line.empty()) continue;
        CurvePoint p;
        char c1, c2;
        std::istringstream ss(line);
        if (!(ss >> p.step >> c1 >> p.mean_rate >> c2 >> p.std_rate) || c1 != ',' || c2 != ',')
            throw DataError(path + ":" + std::to_string(lineno) + ": bad curve row");
        out.push_back(p);
    }
    return out;
}

void write_report_csv(const std::string& path, const std::vector<ReportRow>& rows) {
    std::ofstream os(path);
    if (!os) throw DataError("cannot write: " + path);
    os << "dataset,policy,mean,std,seeds\n";
    for (const auto& r : rows)
        os << r.dataset << ',' << r.policy << ',' << fmt(r.mean) << ',' << fmt(r.stddev) << ','
           << r.seeds << '\n';
    if (!os) throw DataError("write failed: " + path);
}

void save_run_result(const std::string& path, const RunResult& r) {
    nlohmann::json j{{"dataset", r.dataset},
                     {"policy", r.policy},
                     {"seed", r.seed},
                     {"mean", r.mean},
                     {"std", r.stddev}};
    std::ofstream os(path);
    if (!os) throw DataError("cannot write: " + path);
    os << j.dump(2) << '\n';
    if (!os) throw DataError("write failed: " + path);
}

RunResult load_run_result(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw DataError("cannot open: " + path);
    nlohmann::json j;
    try {
        is >> j;
        RunResult r;
        r.dataset = j.at("dataset").get<std::string>();
        r.policy = j.at("policy").get<std::string>();
        r.seed = j.at("seed").get<std::uint64_t>();
        r.mean = j.at("mean").get<double>();
        r.stddev = j.at("std").get<double>();
        return r;
    } catch (const nlohmann::json::exception& e) {
        throw DataError(path + ": " + e.what());
    }
}

std::vector<ReportRow> aggregate_runs(const std::vector<RunResult>& runs) {
    // Group by (dataset, policy); mean of per-seed means, sample std across them.
    std::map<std::pair<std::string, std::string>, std::vector<double>> groups;
    for (const auto& r : runs) groups[{r.dataset, r.policy}].push_back(r.mean);
    std::vector<ReportRow> rows;
    for (const auto& [key, means] : groups) {
        ReportRow row;
        row.dataset = key.first;
        row.policy = key.second;
        row.seeds = static_cast<int>(means.size());
        double sum = 0;
        for (double m : means) sum += m;
        row.mean = sum / static_cast<double>(means.size());
        double ss = 0;
        for (double m : means) ss += (m - row.mean) * (m - row.mean);
        row.stddev = means.size() > 1 ? std::sqrt(ss / static_cast<double>(means.size() - 1)) : 0.0;
        rows.push_back(std::move(row));
    }
    return rows;
}

}  // namespace oge
