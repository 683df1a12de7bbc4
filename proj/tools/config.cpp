#include "config.hpp"

#include <cerrno>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <numeric>
#include <sstream>

#include "CLI11.hpp"

namespace cellflow_cli {

namespace fs = std::filesystem;

// Shortest text that reads back to the same double.
std::string format_double(double v) {
    char buf[40];
    const auto r = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, r.ptr);
}

std::string Range::str() const {
    return format_double(lo) + ":" + format_double(hi) + ":" + std::to_string(count);
}

namespace {

[[noreturn]] void usage(const std::string& msg) { throw CliError(kExitUsage, msg); }
[[noreturn]] void invalid(const std::string& msg) { throw CliError(kExitValidation, msg); }

double parse_number(const std::string& text, const std::string& what) {
    const char* b = text.c_str();
    char* e = nullptr;
    errno = 0;
    const double v = std::strtod(b, &e);
    if (text.empty() || e != b + text.size() || errno == ERANGE) {
        usage("malformed number for " + what + ": '" + text + "'");
    }
    return v;
}

long long parse_integer(const std::string& text, const std::string& what) {
    const char* b = text.c_str();
    char* e = nullptr;
    errno = 0;
    const long long v = std::strtoll(b, &e, 10);
    if (text.empty() || e != b + text.size() || errno == ERANGE) {
        usage("malformed integer for " + what + ": '" + text + "'");
    }
    return v;
}

std::vector<std::string> split(const std::string& text, char sep) {
    std::vector<std::string> out;
    std::string cur;
    std::istringstream in(text);
    while (std::getline(in, cur, sep)) out.push_back(cur);
    if (!text.empty() && text.back() == sep) out.emplace_back();
    return out;
}

enum class Kind { Number, Integer, Bool, Text, RangeKind, NumberList, IntList, TargetList };

struct OptSpec {
    std::string key;
    Kind kind;
    bool required;
    json fallback;  // null: no default
    std::string help;
};

std::string flag_name(const std::string& key) {
    std::string f = key;
    for (char& c : f) {
        if (c == '_') c = '-';
    }
    return "--" + f;
}

std::vector<OptSpec> common_specs() {
    return {
        {"out", Kind::Text, false, "out", "output directory"},
        {"svg", Kind::Bool, false, true, "write SVG plots (true/false)"},
        {"threads", Kind::Integer, false, 0, "worker threads, 0 for CELLFLOW_THREADS or all cores"},
    };
}

std::vector<OptSpec> rotation_specs(long long n_max) {
    return {
        {"q_max", Kind::Integer, false, 200, "longest period tried by the certificate"},
        {"n_max", Kind::Integer, false, n_max, "iterations for the fallback estimate"},
        {"spot_tol", Kind::Number, false, 1e-12, "flat-spot shrink used by the certificate"},
    };
}

std::map<std::string, std::vector<OptSpec>> command_specs() {
    std::map<std::string, std::vector<OptSpec>> m;
    m["simulate"] = {
        {"a", Kind::Number, true, nullptr, "vertical forcing"},
        {"b", Kind::Number, true, nullptr, "horizontal forcing"},
        {"eps", Kind::Number, true, nullptr, "inertia (drag time)"},
        {"init", Kind::NumberList, false, json::array({0.3, 0.2, 0.0, 0.0}), "x,y,u,v at t = 0"},
        {"t_end", Kind::Number, false, 2000.0, "final time"},
        {"sample_dt", Kind::Number, false, 1.0, "sampling interval"},
        {"drift", Kind::Bool, false, true, "fit the drift slope of the run"},
    };
    m["staircase"] = {
        {"b", Kind::Number, true, nullptr, "horizontal forcing"},
        {"eps", Kind::Number, true, nullptr, "inertia (drag time)"},
        {"alpha", Kind::RangeKind, true, nullptr, "forcing slopes a/b as lo:hi:count"},
        {"q_cap", Kind::Integer, false, 12, "largest slope denominator refined"},
    };
    for (auto& s : rotation_specs(2000)) m["staircase"].push_back(s);
    m["tongues"] = {
        {"b", Kind::Number, true, nullptr, "horizontal forcing"},
        {"alpha", Kind::RangeKind, true, nullptr, "forcing slopes a/b as lo:hi:count"},
        {"eps", Kind::RangeKind, true, nullptr, "inertia values as lo:hi:count"},
        {"targets", Kind::TargetList, false, json::array({"1/1"}), "drift slopes p/q, comma separated"},
        {"width", Kind::Number, false, 1e-8, "boundary bisection width in s"},
    };
    for (auto& s : rotation_specs(2000)) m["tongues"].push_back(s);
    m["chess"] = {
        {"a", Kind::Number, true, nullptr, "vertical forcing"},
        {"b", Kind::Number, true, nullptr, "horizontal forcing"},
        {"h0", Kind::Number, true, nullptr, "Hamiltonian level of the path"},
        {"start", Kind::IntList, false, json::array({0, 0, 1, 0}), "k1,k2,dk1,dk2 of the first edge"},
        {"turns", Kind::Integer, false, 30, "number of turns"},
    };
    m["rotnum"] = {
        {"family", Kind::Text, false, "dynamics", "dynamics or boyd"},
        {"a", Kind::Number, false, nullptr, "vertical forcing (dynamics)"},
        {"b", Kind::Number, false, nullptr, "horizontal forcing (dynamics)"},
        {"eps", Kind::Number, false, nullptr, "inertia (dynamics)"},
        {"flat", Kind::Number, false, 0.25, "flat fraction (boyd)"},
        {"slope", Kind::Number, false, 4.0 / 3.0, "expanding slope (boyd)"},
        {"s", Kind::Number, false, nullptr, "family parameter (boyd)"},
    };
    for (auto& s : rotation_specs(100000)) m["rotnum"].push_back(s);
    m["hausdorff"] = {
        {"flat", Kind::Number, false, 2.0 / 3.0, "flat fraction"},
        {"slope", Kind::Number, false, 3.0, "expanding slope"},
        {"levels", Kind::Integer, false, 6, "largest cover level N"},
        {"d", Kind::NumberList, false, json::array({1.0, 0.5, 0.2, 0.1}), "exponents"},
        {"width", Kind::Number, false, 1e-12, "plateau bisection width"},
    };
    for (auto& [name, specs] : m) {
        for (auto& s : common_specs()) specs.push_back(s);
    }
    return m;
}

std::string canonical_target(long long p, long long q) {
    if (q <= 0) usage("target denominator must be positive");
    const long long g = std::gcd(p < 0 ? -p : p, q);
    return std::to_string(p / g) + "/" + std::to_string(q / g);
}

// Flag text -> canonical JSON value.
json value_from_flag(const OptSpec& spec, const std::string& text) {
    const std::string what = flag_name(spec.key);
    switch (spec.kind) {
        case Kind::Number: return parse_number(text, what);
        case Kind::Integer: return parse_integer(text, what);
        case Kind::Bool:
            if (text == "true" || text == "1" || text == "yes") return true;
            if (text == "false" || text == "0" || text == "no") return false;
            usage("malformed boolean for " + what + ": '" + text + "'");
        case Kind::Text: return text;
        case Kind::RangeKind: return parse_range(text).str();
        case Kind::NumberList: {
            json arr = json::array();
            for (const auto& part : split(text, ',')) arr.push_back(parse_number(part, what));
            return arr;
        }
        case Kind::IntList: {
            json arr = json::array();
            for (const auto& part : split(text, ',')) arr.push_back(parse_integer(part, what));
            return arr;
        }
        case Kind::TargetList: {
            json arr = json::array();
            for (const auto& part : split(text, ',')) {
                const Target t = parse_target(part);
                arr.push_back(canonical_target(t.p, t.q));
            }
            return arr;
        }
    }
    usage("unsupported option kind");
}

// Config-file value -> canonical JSON value.
json value_from_file(const OptSpec& spec, const json& v) {
    const std::string what = "config key '" + spec.key + "'";
    auto bad = [&]() -> json { usage("wrong type for " + what); };
    switch (spec.kind) {
        case Kind::Number:
            if (!v.is_number()) return bad();
            return v.get<double>();
        case Kind::Integer:
            if (!v.is_number_integer()) return bad();
            return v.get<long long>();
        case Kind::Bool:
            if (!v.is_boolean()) return bad();
            return v;
        case Kind::Text:
            if (!v.is_string()) return bad();
            return v;
        case Kind::RangeKind:
            if (!v.is_string()) return bad();
            return parse_range(v.get<std::string>()).str();
        case Kind::NumberList: {
            if (!v.is_array()) return bad();
            json arr = json::array();
            for (const auto& x : v) {
                if (!x.is_number()) return bad();
                arr.push_back(x.get<double>());
            }
            return arr;
        }
        case Kind::IntList: {
            if (!v.is_array()) return bad();
            json arr = json::array();
            for (const auto& x : v) {
                if (!x.is_number_integer()) return bad();
                arr.push_back(x.get<long long>());
            }
            return arr;
        }
        case Kind::TargetList: {
            if (v.is_string()) return value_from_flag(spec, v.get<std::string>());
            if (!v.is_array()) return bad();
            json arr = json::array();
            for (const auto& x : v) {
                if (!x.is_string()) return bad();
                const Target t = parse_target(x.get<std::string>());
                arr.push_back(canonical_target(t.p, t.q));
            }
            return arr;
        }
    }
    return bad();
}

void check_positive(const RunConfig& c, const std::string& key) {
    const double v = c.number(key);
    if (!(v > 0.0) || !std::isfinite(v)) invalid(flag_name(key) + " must be positive");
}

void check_nonnegative(const RunConfig& c, const std::string& key) {
    const double v = c.number(key);
    if (!(v >= 0.0) || !std::isfinite(v)) invalid(flag_name(key) + " must be non-negative");
}

void check_finite(const RunConfig& c, const std::string& key) {
    if (!std::isfinite(c.number(key))) invalid(flag_name(key) + " must be finite");
}

void check_min(const RunConfig& c, const std::string& key, long long lo) {
    if (c.integer(key) < lo) invalid(flag_name(key) + " must be at least " + std::to_string(lo));
}

void check_range(const RunConfig& c, const std::string& key, int min_count) {
    const Range r = c.range(key);
    if (!std::isfinite(r.lo) || !std::isfinite(r.hi)) invalid(flag_name(key) + " must be finite");
    if (r.count < min_count) {
        invalid(flag_name(key) + " needs at least " + std::to_string(min_count) + " points");
    }
    if (r.count > 1 ? !(r.hi > r.lo) : !(r.hi >= r.lo)) {
        invalid(flag_name(key) + " is empty (need lo < hi)");
    }
}

void check_rotation(const RunConfig& c) {
    check_min(c, "q_max", 1);
    check_min(c, "n_max", 1);
    check_positive(c, "spot_tol");
}

void check_output_dir(const RunConfig& c) {
    const fs::path dir = c.text("out");
    if (dir.empty()) invalid("--out must not be empty");
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec || !fs::is_directory(dir)) invalid("output directory " + dir.string() + " is not usable");
    const fs::path probe = dir / ".cellflow_write_probe";
    {
        std::ofstream f(probe);
        if (!f) invalid("output directory " + dir.string() + " is not writable");
    }
    fs::remove(probe, ec);
}

void validate(const RunConfig& c) {
    check_min(c, "threads", 0);
    const std::string& cmd = c.command;
    if (cmd == "simulate") {
        check_finite(c, "a");
        check_positive(c, "b");
        check_positive(c, "eps");
        if (c.numbers("init").size() != 4) invalid("--init needs four values x,y,u,v");
        for (double v : c.numbers("init")) {
            if (!std::isfinite(v)) invalid("--init must be finite");
        }
        check_positive(c, "t_end");
        check_nonnegative(c, "sample_dt");
    } else if (cmd == "staircase") {
        check_positive(c, "b");
        check_nonnegative(c, "eps");
        check_range(c, "alpha", 100);
        check_min(c, "q_cap", 1);
        check_rotation(c);
    } else if (cmd == "tongues") {
        check_positive(c, "b");
        check_range(c, "alpha", 32);
        check_range(c, "eps", 16);
        if (c.range("eps").lo < 0.0) invalid("--eps must be non-negative");
        if (c.targets("targets").empty()) invalid("--targets must not be empty");
        check_positive(c, "width");
        check_rotation(c);
    } else if (cmd == "chess") {
        check_finite(c, "a");
        check_positive(c, "b");
        check_finite(c, "h0");
        const auto st = c.integers("start");
        if (st.size() != 4) invalid("--start needs four integers k1,k2,dk1,dk2");
        if (std::llabs(st[2]) + std::llabs(st[3]) != 1) invalid("--start must be a unit lattice step");
        check_min(c, "turns", 0);
    } else if (cmd == "rotnum") {
        const std::string fam = c.text("family");
        if (fam == "dynamics") {
            for (const char* k : {"a", "b", "eps"}) {
                if (!c.has(k)) usage(std::string("missing required option --") + k);
            }
            check_finite(c, "a");
            check_positive(c, "b");
            check_nonnegative(c, "eps");
        } else if (fam == "boyd") {
            if (!c.has("s")) usage("missing required option --s");
            check_finite(c, "s");
            check_positive(c, "flat");
            check_positive(c, "slope");
        } else {
            invalid("--family must be dynamics or boyd");
        }
        check_rotation(c);
    } else if (cmd == "hausdorff") {
        check_positive(c, "flat");
        check_positive(c, "slope");
        check_min(c, "levels", 3);
        if (c.numbers("d").empty()) invalid("--d must not be empty");
        for (double d : c.numbers("d")) {
            if (!(d > 0.0 && d <= 1.0)) invalid("--d values must lie in (0, 1]");
        }
        check_positive(c, "width");
    }
    check_output_dir(c);
}

}  // namespace

Range parse_range(const std::string& text) {
    const auto parts = split(text, ':');
    if (parts.size() != 3) usage("range must be lo:hi:count, got '" + text + "'");
    Range r;
    r.lo = parse_number(parts[0], "range");
    r.hi = parse_number(parts[1], "range");
    const long long n = parse_integer(parts[2], "range count");
    if (n < 1 || n > 10000000) usage("range count out of bounds in '" + text + "'");
    r.count = static_cast<int>(n);
    return r;
}

Target parse_target(const std::string& text) {
    const auto slash = text.find('/');
    Target t;
    if (slash == std::string::npos) {
        t.p = parse_integer(text, "target");
        t.q = 1;
    } else {
        t.p = parse_integer(text.substr(0, slash), "target");
        t.q = parse_integer(text.substr(slash + 1), "target");
    }
    if (t.q <= 0) usage("target denominator must be positive in '" + text + "'");
    return t;
}

double RunConfig::number(const std::string& key) const { return values.at(key).get<double>(); }

long long RunConfig::integer(const std::string& key) const {
    return values.at(key).get<long long>();
}

bool RunConfig::flag(const std::string& key) const { return values.at(key).get<bool>(); }

std::string RunConfig::text(const std::string& key) const {
    return values.at(key).get<std::string>();
}

Range RunConfig::range(const std::string& key) const { return parse_range(text(key)); }

std::vector<double> RunConfig::numbers(const std::string& key) const {
    return values.at(key).get<std::vector<double>>();
}

std::vector<long long> RunConfig::integers(const std::string& key) const {
    return values.at(key).get<std::vector<long long>>();
}

std::vector<Target> RunConfig::targets(const std::string& key) const {
    std::vector<Target> out;
    for (const auto& s : values.at(key)) out.push_back(parse_target(s.get<std::string>()));
    return out;
}

std::string RunConfig::canonical_json() const {
    json j = values;
    j["command"] = command;
    return j.dump(2);
}

static std::string command_summary(const std::string& name) {
    static const std::map<std::string, std::string> text{
        {"simulate", "integrate the inertial particle and fit its drift slope"},
        {"staircase", "drift slope against the forcing slope a/b at fixed b and eps"},
        {"tongues", "regions of fixed drift slope in the (a/b, eps) plane"},
        {"chess", "turn sequence of a zero-inertia streamline from the chess rule"},
        {"rotnum", "rotation number of a flat-spot circle map"},
        {"hausdorff", "cover measures of the non-plateau parameter set"},
    };
    const auto it = text.find(name);
    return it == text.end() ? std::string() : it->second;
}

bool parse_and_validate(const std::vector<std::string>& args, RunConfig& config,
                        std::string& help_text) {
    const auto specs = command_specs();

    CLI::App app{"Inertial particles in a forced cellular flow"};
    app.require_subcommand(1);
    std::string config_path;
    std::map<std::string, std::map<std::string, std::string>> raw;
    std::map<std::string, CLI::App*> subs;
    for (const auto& [name, list] : specs) {
        CLI::App* sub = app.add_subcommand(name, command_summary(name));
        sub->add_option("--config", config_path, "JSON file with option values");
        for (const auto& spec : list) {
            sub->add_option(flag_name(spec.key), raw[name][spec.key], spec.help);
        }
        subs[name] = sub;
    }

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        help_text = app.help();
        for (const auto& [name, sub] : subs) {
            if (sub->parsed()) help_text = sub->help();
        }
        return false;
    } catch (const CLI::ParseError& e) {
        usage(e.what());
    }

    std::string command;
    for (const auto& [name, sub] : subs) {
        if (sub->parsed()) command = name;
    }
    if (command.empty()) usage("a command is required");
    const auto& list = specs.at(command);
    CLI::App* sub = subs.at(command);

    json file = json::object();
    if (!config_path.empty()) {
        std::ifstream in(config_path);
        if (!in) usage("cannot open config file " + config_path);
        try {
            file = json::parse(in);
        } catch (const json::parse_error& e) {
            usage("config file " + config_path + " is not valid JSON: " + e.what());
        }
        if (!file.is_object()) usage("config file must hold a JSON object");
    }

    RunConfig cfg;
    cfg.command = command;
    cfg.values = json::object();
    for (const auto& [key, value] : file.items()) {
        if (key == "command") {
            if (value != command) usage("config file is for command " + value.dump());
            continue;
        }
        bool known = false;
        for (const auto& spec : list) known = known || spec.key == key;
        if (!known) usage("unknown config key '" + key + "' for " + command);
    }
    for (const auto& spec : list) {
        json v = spec.fallback;
        if (file.contains(spec.key)) v = value_from_file(spec, file[spec.key]);
        if (sub->count(flag_name(spec.key)) > 0) v = value_from_flag(spec, raw[command][spec.key]);
        if (v.is_null() && spec.required) usage("missing required option " + flag_name(spec.key));
        cfg.values[spec.key] = v;
    }
    validate(cfg);
    config = std::move(cfg);
    return true;
}

}  // namespace cellflow_cli
