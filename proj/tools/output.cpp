#include "output.hpp"

#include <filesystem>
#include <fstream>

#include "cellflow/cellflow.h"

namespace cellflow_cli {

CsvTable::CsvTable(std::vector<std::string> columns) : n_columns_(columns.size()) {
    for (std::size_t i = 0; i < columns.size(); ++i) {
        if (i) text_ += ',';
        text_ += columns[i];
    }
    text_ += '\n';
}

void CsvTable::cell(const std::string& v) {
    if (in_row_ == n_columns_) throw std::logic_error("csv: too many cells in row");
    if (in_row_) text_ += ',';
    text_ += v;
    ++in_row_;
}

CsvTable& CsvTable::operator<<(double v) {
    cell(format_double(v));
    return *this;
}

CsvTable& CsvTable::operator<<(long long v) {
    cell(std::to_string(v));
    return *this;
}

CsvTable& CsvTable::operator<<(const std::string& v) {
    if (v.find_first_of(",\"\n") != std::string::npos) {
        std::string q = "\"";
        for (char c : v) q += c == '"' ? std::string("\"\"") : std::string(1, c);
        cell(q + "\"");
    } else {
        cell(v);
    }
    return *this;
}

void CsvTable::end_row() {
    if (in_row_ != n_columns_) throw std::logic_error("csv: row has the wrong number of cells");
    text_ += '\n';
    in_row_ = 0;
    ++rows_;
}

void write_outputs(const std::string& dir, const OutputSet& set) {
    namespace fs = std::filesystem;
    for (const auto& f : set.files) {
        const fs::path path = fs::path(dir) / f.name;
        std::ofstream out(path, std::ios::binary | std::ios::trunc);
        if (!out) throw CliError(kExitIo, "cannot open " + path.string() + " for writing");
        out << f.content;
        out.flush();
        if (!out) throw CliError(kExitIo, "failed writing " + path.string());
    }
}

json run_metadata(const RunConfig& config, double wall_seconds) {
    double rtol = 0.0, atol = 0.0;
    cf_integrator_tolerances(&rtol, &atol);
    json meta;
    meta["command"] = config.command;
    meta["config"] = json::parse(config.canonical_json());
    meta["library_version"] = cf_version();
    meta["wall_time_s"] = wall_seconds;
    meta["tolerances"] = {{"integrator_rtol", rtol}, {"integrator_atol", atol}};
    for (const char* k : {"q_max", "n_max", "spot_tol", "width"}) {
        if (config.has(k)) meta["tolerances"][k] = config.values[k];
    }
    return meta;
}

}  // namespace cellflow_cli
