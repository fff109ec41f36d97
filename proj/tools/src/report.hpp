#pragma once

#include <chrono>
#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "run_config.hpp"

namespace ionchain::cli {

/// Doubles are printed with 12 significant digits everywhere data files are
/// written; shortest-round-trip formatting would change bytes across
/// implementations.
std::string fmt12(double v);

/// One CSV field, quoted and escaped when needed.
std::string csv_field(const std::string& raw);

/// Write a CSV file with the exact header string and preformatted rows.
void write_csv(const std::filesystem::path& path, const std::string& header,
               const std::vector<std::vector<std::string>>& rows);

/// Write a JSON array of objects built from the same header/rows.
void write_json_table(const std::filesystem::path& path, const std::string& header,
                      const std::vector<std::vector<std::string>>& rows);

/** Collects per-stage status and writes the run manifest next to the data
    files. Re-running a subcommand from the manifest's embedded config
    reproduces every data file byte for byte; only the manifest's wall time
    differs.
*/
class RunReport {
public:
    RunReport(std::string subcommand, const RunConfig& config);

    /// Record a completed stage and the files it produced.
    void stage(const std::string& name, const std::vector<std::string>& outputs,
               const std::string& status = "ok");

    /// Emit a data table in the configured format (csv or json); returns the
    /// file name written.
    std::string table(const std::string& basename, const std::string& header,
                      const std::vector<std::vector<std::string>>& rows);

    const std::filesystem::path& out_dir() const { return out_dir_; }

    void write_manifest();

private:
    std::string subcommand_;
    RunConfig config_;
    std::filesystem::path out_dir_;
    nlohmann::json stages_ = nlohmann::json::array();
    std::chrono::steady_clock::time_point start_;
};

} // namespace ionchain::cli
