#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

namespace cellflow_cli {

using json = nlohmann::json;

enum ExitCode : int {
    kExitOk = 0,
    kExitUsage = 2,
    kExitValidation = 3,
    kExitIo = 4,
    kExitNumerical = 5,
};

class CliError : public std::runtime_error {
public:
    CliError(int exit_code, const std::string& msg) : std::runtime_error(msg), code_(exit_code) {}
    int exit_code() const { return code_; }

private:
    int code_;
};

/// lo:hi:count, both ends included.
struct Range {
    double lo = 0.0;
    double hi = 0.0;
    int count = 1;
    std::string str() const;
};

Range parse_range(const std::string& text);

/// Shortest round-trip text for a double (17 significant digits).
std::string format_double(double v);

struct Target {
    long long p = 0;
    long long q = 1;
};

Target parse_target(const std::string& text);

/// Fully resolved configuration of one run. `values` holds every key of the
/// command in canonical form; defaults are filled in.
struct RunConfig {
    std::string command;
    json values;

    double number(const std::string& key) const;
    long long integer(const std::string& key) const;
    bool flag(const std::string& key) const;
    std::string text(const std::string& key) const;
    Range range(const std::string& key) const;
    std::vector<double> numbers(const std::string& key) const;
    std::vector<long long> integers(const std::string& key) const;
    std::vector<Target> targets(const std::string& key) const;
    bool has(const std::string& key) const { return values.contains(key) && !values[key].is_null(); }

    /// Canonical JSON: sorted keys, command included.
    std::string canonical_json() const;
};

/// Parses argv (without the program name). Flags override values from the
/// optional --config file. Throws CliError with exit code 2 on usage errors
/// and 3 on validation errors. Returns false when help was requested; the
/// text is left in help_text.
bool parse_and_validate(const std::vector<std::string>& args, RunConfig& config,
                        std::string& help_text);

}  // namespace cellflow_cli
