// scenario.hpp — Scenario runner, sweeps, coefficient tables and their CSV/JSON outputs
//
// CSV files have `t` as the first column followed by `<dynamics>.<observable>`
// columns, one row per record time, values printed with 12 significant digits.
// Files are written to a temporary name and renamed into place.

#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "json.hpp"

#include "bosedeph/config.hpp"

namespace bosedeph {

struct TimeSeries {
    std::vector<double> times;
    std::vector<std::string> names;
    std::vector<std::vector<double>> columns;

    void add_column(std::string name, std::vector<double> values);
    const std::vector<double>& column(const std::string& name) const;
    bool has_column(const std::string& name) const;
    std::string to_csv() const;
};

struct ScenarioResult {
    ScenarioConfig config;
    std::map<Dynamics, Trajectory> trajectories;
    TimeSeries series;
    nlohmann::json summary;
};

/// Integrate every requested dynamics and evaluate the observables on the shared grid.
ScenarioResult run_scenario(const ScenarioConfig& cfg);

struct WrittenFiles {
    std::filesystem::path csv;
    std::filesystem::path json;
};

/// Writes <dir>/<name>.csv and <dir>/<name>.summary.json; the summary gains the
/// git blob hash of the CSV.
WrittenFiles write_outputs(ScenarioResult& result, const std::filesystem::path& dir);

/// Runs one scenario per value of `axis` on `workers` threads. Per-point outputs go
/// to <dir>/<name>_sweep_<axis>/, the aggregate CSV to <dir>/<name>_sweep_<axis>.csv.
/// The aggregate is independent of the worker count.
struct SweepResult {
    std::filesystem::path aggregate_csv;
    std::string aggregate;
    std::vector<WrittenFiles> points;
};
SweepResult run_sweep(const ScenarioConfig& base, const std::string& axis, const std::vector<double>& values,
                      unsigned workers, const std::filesystem::path& dir);

/// Columns t, alpha.re, alpha.im, beta.re, beta.im, kappa.re, kappa.im, D.eig1, D.eig2
/// on the record grid of the integrator configuration.
TimeSeries coeff_table(const ModelParams& p, const IntegratorConfig& grid, int n_baths = 2);

/// Hash git assigns to a blob with this content: SHA-1 of "blob <size>\0<content>".
std::string git_blob_sha1(const std::string& content);

/// Write-then-rename.
void write_file_atomic(const std::filesystem::path& path, const std::string& content);

std::string format_number(double x);

}  // namespace bosedeph
