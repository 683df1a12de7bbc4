#pragma once

#include <string>
#include <vector>

#include "config.hpp"

namespace cellflow_cli {

/// Builds one CSV table in memory. Doubles use 17 significant digits.
class CsvTable {
public:
    explicit CsvTable(std::vector<std::string> columns);

    CsvTable& operator<<(double v);
    CsvTable& operator<<(long long v);
    CsvTable& operator<<(int v) { return *this << static_cast<long long>(v); }
    CsvTable& operator<<(const std::string& v);
    CsvTable& operator<<(const char* v) { return *this << std::string(v); }
    /// Ends the current row; throws if the cell count is wrong.
    void end_row();

    std::string str() const { return text_; }
    std::size_t rows() const { return rows_; }

private:
    void cell(const std::string& v);

    std::size_t n_columns_;
    std::size_t in_row_ = 0;
    std::size_t rows_ = 0;
    std::string text_;
};

struct OutputFile {
    std::string name;
    std::string content;
};

/// Everything a command produces, written in one pass after the computation.
struct OutputSet {
    std::vector<OutputFile> files;
    void add(std::string name, std::string content) {
        files.push_back({std::move(name), std::move(content)});
    }
};

/// Writes every file under `dir`. Throws CliError with exit code 4 on failure.
void write_outputs(const std::string& dir, const OutputSet& set);

/// Metadata block shared by the JSON mirrors.
json run_metadata(const RunConfig& config, double wall_seconds);

}  // namespace cellflow_cli
