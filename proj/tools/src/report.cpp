#include "report.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace ionchain::cli {

using nlohmann::json;

std::string fmt12(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

std::string csv_field(const std::string& raw) {
    if (raw.find_first_of(",\"\n") == std::string::npos)
        return raw;
    std::string out = "\"";
    for (char c : raw) {
        if (c == '"')
            out += '"';
        out += c;
    }
    out += '"';
    return out;
}

void write_csv(const std::filesystem::path& path, const std::string& header,
               const std::vector<std::vector<std::string>>& rows) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw std::runtime_error("cannot open " + path.string());
    out << header << '\n';
    for (const auto& row : rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i)
                out << ',';
            out << csv_field(row[i]);
        }
        out << '\n';
    }
    if (!out)
        throw std::runtime_error("write failed for " + path.string());
}

void write_json_table(const std::filesystem::path& path, const std::string& header,
                      const std::vector<std::vector<std::string>>& rows) {
    std::vector<std::string> columns;
    {
        std::stringstream ss(header);
        std::string col;
        while (std::getline(ss, col, ','))
            columns.push_back(col);
    }
    json table = json::array();
    for (const auto& row : rows) {
        json obj;
        for (std::size_t i = 0; i < row.size() && i < columns.size(); ++i) {
            // numeric fields stay numeric in JSON
            try {
                std::size_t used = 0;
                const double v = std::stod(row[i], &used);
                if (used == row[i].size()) {
                    obj[columns[i]] = v;
                    continue;
                }
            } catch (...) {
            }
            obj[columns[i]] = row[i];
        }
        table.push_back(obj);
    }
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw std::runtime_error("cannot open " + path.string());
    out << table.dump(2) << '\n';
}

RunReport::RunReport(std::string subcommand, const RunConfig& config)
    : subcommand_(std::move(subcommand)), config_(config), out_dir_(config.out_dir),
      start_(std::chrono::steady_clock::now()) {
    std::filesystem::create_directories(out_dir_);
}

void RunReport::stage(const std::string& name, const std::vector<std::string>& outputs,
                      const std::string& status) {
    json s;
    s["name"] = name;
    s["status"] = status;
    s["outputs"] = outputs;
    stages_.push_back(s);
}

std::string RunReport::table(const std::string& basename, const std::string& header,
                             const std::vector<std::vector<std::string>>& rows) {
    const bool as_json = config_.format == "json";
    const std::string name = basename + (as_json ? ".json" : ".csv");
    if (as_json)
        write_json_table(out_dir_ / name, header, rows);
    else
        write_csv(out_dir_ / name, header, rows);
    return name;
}

void RunReport::write_manifest() {
    json m;
    m["tool_version"] = kToolVersion;
    m["subcommand"] = subcommand_;
    m["seed"] = config_.seed;
    m["config"] = config_.to_json();
    m["wall_time_s"] =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    m["stages"] = stages_;
    std::ofstream out(out_dir_ / "manifest.json", std::ios::binary);
    if (!out)
        throw std::runtime_error("cannot write manifest in " + out_dir_.string());
    out << m.dump(2) << '\n';
}

} // namespace ionchain::cli
