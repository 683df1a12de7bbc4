#include "commands.hpp"

#include <algorithm>
#include <array>
#include <numeric>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <memory>

#include "cellflow/cellflow.h"
#include "config.hpp"
#include "output.hpp"
#include "svg.hpp"

namespace cellflow_cli {

namespace {

constexpr double kPi = 3.14159265358979323846;

int exit_code_for(cf_status st) {
    switch (st) {
        case CF_DOMAIN_ERROR:
        case CF_INVALID_ARGUMENT:
        case CF_ON_LINE:
            return kExitValidation;
        case CF_IO_ERROR:
            return kExitIo;
        default:
            return kExitNumerical;
    }
}

void check(cf_status st, const std::string& what) {
    if (st == CF_OK) return;
    throw CliError(exit_code_for(st), what + " failed (" + cf_status_name(st) + "): " +
                                          cf_last_error());
}

template <class T, void (*Free)(T*)>
struct Deleter {
    void operator()(T* p) const { Free(p); }
};

template <class T, void (*Free)(T*)>
using Handle = std::unique_ptr<T, Deleter<T, Free>>;

cf_rotation_options rotation_options(const RunConfig& c) {
    cf_rotation_options o = cf_rotation_defaults();
    o.q_max = static_cast<int>(c.integer("q_max"));
    o.n_max = c.integer("n_max");
    o.spot_tol = c.number("spot_tol");
    return o;
}

std::string rho_kind(const cf_rotation& r) { return r.is_rational ? "rational" : "interval"; }

json rotation_json(const cf_rotation& r) {
    json j;
    j["kind"] = rho_kind(r);
    if (r.is_rational) {
        j["p"] = r.p;
        j["q"] = r.q;
    }
    j["lo"] = r.lo;
    j["hi"] = r.hi;
    j["iterations"] = r.iterations;
    return j;
}

std::string ratio_text(long long p, long long q) {
    return q == 1 ? std::to_string(p) : std::to_string(p) + "/" + std::to_string(q);
}

std::string json_text(const json& j) { return j.dump(2) + "\n"; }

// ---- simulate ----

void run_simulate(const RunConfig& c, OutputSet& outs, json& results) {
    const cf_params p{c.number("a"), c.number("b"), c.number("eps")};
    const std::vector<double> init = c.numbers("init");
    cf_trajectory* raw = nullptr;
    check(cf_simulate(p, init.data(), c.number("t_end"), c.number("sample_dt"), &raw), "simulate");
    Handle<cf_trajectory, cf_trajectory_free> traj(raw);

    CsvTable csv({"t", "x", "y", "u", "v"});
    std::vector<std::pair<double, double>> pts;
    double x_lo = init[0], x_hi = init[0], y_lo = init[1], y_hi = init[1];
    const std::size_t n = cf_trajectory_size(traj.get());
    for (std::size_t i = 0; i < n; ++i) {
        double t = 0.0, s[4];
        check(cf_trajectory_sample(traj.get(), i, &t, s), "trajectory sample");
        csv << t << s[0] << s[1] << s[2] << s[3];
        csv.end_row();
        pts.emplace_back(s[0], s[1]);
        x_lo = std::min(x_lo, s[0]);
        x_hi = std::max(x_hi, s[0]);
        y_lo = std::min(y_lo, s[1]);
        y_hi = std::max(y_hi, s[1]);
    }
    outs.add("trajectory.csv", csv.str());
    results["samples"] = n;

    if (c.flag("drift")) {
        double slope = 0.0, disp = 0.0;
        check(cf_drift_slope(p, init.data(), c.number("t_end"), &slope, &disp), "drift slope");
        results["drift_slope"] = slope;
        results["displacement"] = disp;
    }

    if (c.flag("svg")) {
        const double span = std::max({x_hi - x_lo, y_hi - y_lo, 1.0});
        const double cx = 0.5 * (x_lo + x_hi), cy = 0.5 * (y_lo + y_hi);
        SvgPlot plot(cx - 0.55 * span, cx + 0.55 * span, cy - 0.55 * span, cy + 0.55 * span,
                     "Particle trajectory", "x", "y", 640, 640);
        // Cell boundaries of the unforced flow.
        if (span < 40 * kPi) {
            const double lo = std::floor((cx - span) / kPi) * kPi + kPi / 2;
            for (double g = lo; g <= cx + span; g += kPi) {
                plot.segment(g, cy - span, g, cy + span, "#cccccc", 0.6);
            }
            const double lo_y = std::floor((cy - span) / kPi) * kPi + kPi / 2;
            for (double g = lo_y; g <= cy + span; g += kPi) {
                plot.segment(cx - span, g, cx + span, g, "#cccccc", 0.6);
            }
        }
        plot.polyline(pts, palette(0), 1.2);
        plot.circle(init[0], init[1], 3.5, palette(1));
        outs.add("trajectory.svg", plot.str());
    }
}

// ---- staircase ----

void run_staircase(const RunConfig& c, OutputSet& outs, json& results) {
    const Range alpha = c.range("alpha");
    const double b = c.number("b"), eps = c.number("eps");
    const cf_rotation_options ro = rotation_options(c);
    cf_staircase* raw = nullptr;
    check(cf_staircase_run(b, eps, alpha.lo, alpha.hi, alpha.count,
                           static_cast<int>(c.integer("q_cap")), &ro, &raw),
          "staircase");
    Handle<cf_staircase, cf_staircase_free> table(raw);

    CsvTable csv({"alpha", "s", "rho_kind", "p", "q", "rho_lo", "rho_hi", "m", "status"});
    std::vector<std::pair<double, double>> pts;
    std::size_t n_rational = 0, n_error = 0;
    double m_lo = alpha.lo, m_hi = alpha.hi;
    for (std::size_t i = 0; i < cf_staircase_row_count(table.get()); ++i) {
        cf_staircase_row row;
        check(cf_staircase_get_row(table.get(), i, &row), "staircase row");
        csv << row.alpha << row.s;
        if (!row.has_rotation) {
            ++n_error;
            csv << "error" << "" << "" << "" << "" << "" << row.status;
        } else {
            const cf_rotation& r = row.rotation;
            csv << rho_kind(r);
            if (r.is_rational) {
                ++n_rational;
                csv << static_cast<long long>(r.p) << static_cast<long long>(r.q);
            } else {
                csv << "" << "";
            }
            csv << r.lo << r.hi << row.m << row.status;
            pts.emplace_back(row.alpha, row.m);
            m_lo = std::min(m_lo, row.m);
            m_hi = std::max(m_hi, row.m);
        }
        csv.end_row();
    }
    outs.add("staircase.csv", csv.str());

    CsvTable pcsv({"m_p", "m_q", "alpha_lo", "alpha_hi", "length"});
    json plateaus = json::array();
    std::vector<std::array<double, 3>> segs;
    for (std::size_t i = 0; i < cf_staircase_plateau_count(table.get()); ++i) {
        int64_t mp = 0, mq = 1;
        double lo = 0.0, hi = 0.0;
        check(cf_staircase_plateau(table.get(), i, &mp, &mq, &lo, &hi), "staircase plateau");
        pcsv << static_cast<long long>(mp) << static_cast<long long>(mq) << lo << hi << hi - lo;
        pcsv.end_row();
        plateaus.push_back({{"m", ratio_text(mp, mq)}, {"alpha_lo", lo}, {"alpha_hi", hi}});
        segs.push_back({lo, hi, static_cast<double>(mp) / static_cast<double>(mq)});
    }
    outs.add("staircase_plateaus.csv", pcsv.str());

    json coverage = json::object();
    for (long long q = 1; q <= c.integer("q_cap"); ++q) {
        coverage[std::to_string(q)] = cf_staircase_coverage(table.get(), q);
    }
    results["rows"] = cf_staircase_row_count(table.get());
    results["rational_rows"] = n_rational;
    results["error_rows"] = n_error;
    results["max_decrease"] = cf_staircase_max_decrease(table.get());
    results["coverage_by_q"] = coverage;
    results["plateaus"] = plateaus;

    if (c.flag("svg")) {
        const double pad = 0.04 * (m_hi - m_lo + 1e-9);
        char title[160];
        std::snprintf(title, sizeof title, "Drift slope against forcing slope (b = %g, eps = %g)", b,
                      eps);
        SvgPlot plot(alpha.lo, alpha.hi, m_lo - pad, m_hi + pad, title, "alpha = a/b",
                     "drift slope m");
        plot.segment(alpha.lo, alpha.lo, alpha.hi, alpha.hi, "#999999", 1.0, true);
        plot.polyline(pts, palette(0), 1.2);
        for (const auto& s : segs) plot.segment(s[0], s[2], s[1], s[2], palette(1), 3.0);
        plot.legend("sampled m(alpha)", palette(0));
        plot.legend("refined plateaus", palette(1));
        plot.legend("rigid rotation m = alpha", "#999999");
        outs.add("staircase.svg", plot.str());
    }
}

// ---- tongues ----

void run_tongues(const RunConfig& c, OutputSet& outs, json& results) {
    const Range alpha = c.range("alpha"), eps = c.range("eps");
    const double b = c.number("b");
    const std::vector<Target> targets = c.targets("targets");
    std::vector<int64_t> flat;
    for (const auto& t : targets) {
        flat.push_back(t.p);
        flat.push_back(t.q);
    }
    const cf_rotation_options ro = rotation_options(c);
    cf_tongues* raw = nullptr;
    check(cf_tongues_run(b, alpha.lo, alpha.hi, eps.lo, eps.hi, flat.data(), targets.size(),
                         alpha.count, eps.count, &ro, &raw),
          "tongue scan");
    Handle<cf_tongues, cf_tongues_free> scan(raw);

    const double da = (alpha.hi - alpha.lo) / std::max(1, alpha.count - 1);
    const double de = (eps.hi - eps.lo) / std::max(1, eps.count - 1);
    SvgPlot plot(alpha.lo - 0.5 * da, alpha.hi + 0.5 * da, eps.lo - 0.5 * de, eps.hi + 0.5 * de,
                 "Drift-slope tongues (b = " + format_double(b) + ")", "alpha = a/b", "eps");

    CsvTable cells({"alpha", "epsilon", "rho_kind", "p", "q", "rho_lo", "rho_hi", "m_p", "m_q",
                    "status"});
    std::size_t n_error = 0, n_certified = 0;
    for (std::size_t i = 0; i < cf_tongues_cell_count(scan.get()); ++i) {
        cf_tongue_cell cell;
        check(cf_tongues_cell(scan.get(), i, &cell), "tongue cell");
        cells << cell.alpha << cell.epsilon;
        std::string fill = "#ffffff";
        if (!cell.has_rotation) {
            ++n_error;
            cells << "error" << "" << "" << "" << "" << "" << "" << cell.status;
            fill = "#000000";
        } else {
            const cf_rotation& r = cell.rotation;
            cells << rho_kind(r);
            if (r.is_rational) {
                cells << static_cast<long long>(r.p) << static_cast<long long>(r.q);
            } else {
                cells << "" << "";
            }
            cells << r.lo << r.hi;
            if (cell.has_slope) {
                ++n_certified;
                cells << static_cast<long long>(cell.m_p) << static_cast<long long>(cell.m_q);
                fill = "#e6e6e6";
                for (std::size_t k = 0; k < targets.size(); ++k) {
                    if (cell.m_p * targets[k].q == cell.m_q * targets[k].p) fill = palette(k);
                }
            } else {
                cells << "" << "";
            }
            cells << cell.status;
        }
        cells.end_row();
        plot.rect(cell.alpha - 0.5 * da, cell.epsilon - 0.5 * de, cell.alpha + 0.5 * da,
                  cell.epsilon + 0.5 * de, fill);
    }
    outs.add("tongues_cells.csv", cells.str());

    CsvTable regions({"m_p", "m_q", "epsilon", "found", "alpha_lo", "alpha_hi", "width"});
    json jregions = json::array();
    for (std::size_t k = 0; k < cf_tongues_region_count(scan.get()); ++k) {
        int64_t mp = 0, mq = 1;
        double area = 0.0;
        std::size_t n_slices = 0;
        check(cf_tongues_region(scan.get(), k, &mp, &mq, &area, &n_slices), "tongue region");
        json slices = json::array();
        std::vector<std::pair<double, double>> left, right;
        for (std::size_t j = 0; j < n_slices; ++j) {
            double e = 0.0, lo = 0.0, hi = 0.0;
            int found = 0;
            check(cf_tongues_slice(scan.get(), k, j, &e, &found, &lo, &hi), "tongue slice");
            regions << static_cast<long long>(mp) << static_cast<long long>(mq) << e
                    << static_cast<long long>(found);
            if (found) {
                regions << lo << hi << hi - lo;
                slices.push_back({{"epsilon", e}, {"alpha_lo", lo}, {"alpha_hi", hi}});
                left.emplace_back(lo, e);
                right.emplace_back(hi, e);
            } else {
                regions << "" << "" << "";
            }
            regions.end_row();
        }
        plot.polyline(left, "#000000", 1.0);
        plot.polyline(right, "#000000", 1.0);
        plot.legend("m = " + ratio_text(mp, mq), palette(k));
        jregions.push_back({{"m", ratio_text(mp, mq)}, {"area", area}, {"slices", slices}});
    }
    outs.add("tongues_regions.csv", regions.str());
    results["cells"] = cf_tongues_cell_count(scan.get());
    results["certified_cells"] = n_certified;
    results["error_cells"] = n_error;
    results["tongues"] = jregions;
    if (c.flag("svg")) {
        plot.legend("other certified slope", "#e6e6e6");
        outs.add("tongues.svg", plot.str());
    }
}

// ---- chess ----

void run_chess(const RunConfig& c, OutputSet& outs, json& results) {
    const cf_params p{c.number("a"), c.number("b"), 0.0};
    const double h0 = c.number("h0");
    const auto st = c.integers("start");
    cf_chess_path* raw = nullptr;
    check(cf_chess_path_create(p, static_cast<int>(st[0]), static_cast<int>(st[1]),
                               static_cast<int>(st[2]), static_cast<int>(st[3]), h0,
                               static_cast<int>(c.integer("turns")), &raw),
          "chess path");
    Handle<cf_chess_path, cf_chess_path_free> path(raw);
    const std::string turns = cf_chess_path_turns(path.get());
    double c_odd = 0.0, c_even = 0.0, K = 0.0;
    check(cf_chess_path_lines(path.get(), &c_odd, &c_even), "chess lines");
    check(cf_k_constant(p, &K), "K constant");

    CsvTable csv({"index", "k1", "k2", "x", "y", "turn"});
    std::vector<std::pair<double, double>> pts;
    const std::size_t n = cf_chess_path_vertex_count(path.get());
    for (std::size_t i = 0; i < n; ++i) {
        int k1 = 0, k2 = 0;
        check(cf_chess_path_vertex(path.get(), i, &k1, &k2), "chess vertex");
        const double x = kPi / 2 + kPi * k1, y = kPi / 2 + kPi * k2;
        const std::string turn = i >= 1 && i <= turns.size() ? turns.substr(i - 1, 1) : "";
        csv << static_cast<long long>(i) << k1 << k2 << x << y << turn;
        csv.end_row();
        pts.emplace_back(x, y);
    }
    outs.add("chess.csv", csv.str());
    results["turns"] = turns;
    results["c_odd"] = c_odd;
    results["c_even"] = c_even;
    results["K"] = K;
    results["vertices"] = n;

    if (c.flag("svg")) {
        double x_lo = pts[0].first, x_hi = x_lo, y_lo = pts[0].second, y_hi = y_lo;
        for (const auto& [x, y] : pts) {
            x_lo = std::min(x_lo, x);
            x_hi = std::max(x_hi, x);
            y_lo = std::min(y_lo, y);
            y_hi = std::max(y_hi, y);
        }
        const double span = std::max(x_hi - x_lo, y_hi - y_lo) + 2 * kPi;
        const double cx = 0.5 * (x_lo + x_hi), cy = 0.5 * (y_lo + y_hi);
        const double X0 = cx - span / 2, X1 = cx + span / 2, Y0 = cy - span / 2, Y1 = cy + span / 2;
        SvgPlot plot(X0, X1, Y0, Y1, "Chess-rule path on level h0 = " + format_double(h0), "x",
                     "y", 640, 640);
        for (double k = std::ceil((X0 - kPi / 2) / kPi); kPi / 2 + kPi * k <= X1; ++k) {
            for (double l = std::ceil((Y0 - kPi / 2) / kPi); kPi / 2 + kPi * l <= Y1; ++l) {
                const bool odd = static_cast<long long>(std::abs(k + l)) % 2 == 1;
                plot.circle(kPi / 2 + kPi * k, kPi / 2 + kPi * l, 2.5, odd ? "#555555" : "#bbbbbb");
            }
        }
        // Lines b y - a x = c, parameterised by x.
        const double a = p.a, bb = p.b;
        plot.segment(X0, (c_odd + a * X0) / bb, X1, (c_odd + a * X1) / bb, palette(3), 1.2, true);
        plot.segment(X0, (c_even + a * X0) / bb, X1, (c_even + a * X1) / bb, palette(4), 1.2, true);
        plot.polyline(pts, palette(0), 2.0);
        for (std::size_t i = 1; i + 1 < pts.size() && i <= turns.size(); ++i) {
            plot.circle(pts[i].first, pts[i].second, 4.0,
                        turns[i - 1] == 'L' ? palette(2) : palette(1));
        }
        plot.legend("path", palette(0));
        plot.legend("left turn", palette(2));
        plot.legend("right turn", palette(1));
        plot.legend("odd-node line", palette(3));
        plot.legend("even-node line", palette(4));
        outs.add("chess.svg", plot.str());
    }
}

// ---- rotnum ----

void run_rotnum(const RunConfig& c, OutputSet& outs, json& results) {
    const cf_rotation_options ro = rotation_options(c);
    const std::string family = c.text("family");
    cf_rotation r{};
    std::vector<std::pair<double, double>> graph;
    const int n_graph = 400;
    CsvTable csv({"family", "parameter", "rho_kind", "p", "q", "rho_lo", "rho_hi", "m",
                  "iterations"});
    double parameter = 0.0;
    if (family == "dynamics") {
        const cf_params p{c.number("a"), c.number("b"), c.number("eps")};
        parameter = p.a / p.b;
        cf_section* raw = nullptr;
        check(cf_section_create(p, &raw), "section setup");
        Handle<cf_section, cf_section_free> sec(raw);
        check(cf_section_rotation(sec.get(), &ro, &r), "rotation number");
        double lo[2], hi[2], h[2];
        check(cf_section_flat_spots(sec.get(), lo, hi, h), "flat spots");
        json spots = json::array();
        for (int j = 0; j < 2; ++j) {
            spots.push_back({{"lo", lo[j]}, {"hi", hi[j]}, {"height", h[j]}});
        }
        results["flat_spots"] = spots;
        if (c.flag("svg")) {
            for (int i = 0; i <= n_graph; ++i) {
                const double z = static_cast<double>(i) / n_graph;
                double v = 0.0;
                check(cf_section_inverse(sec.get(), z, &v, nullptr), "inverse map");
                graph.emplace_back(z, v);
            }
        }
    } else {
        cf_family* raw = nullptr;
        check(cf_family_boyd(c.number("flat"), c.number("slope"), &raw), "family setup");
        Handle<cf_family, cf_family_free> fam(raw);
        parameter = c.number("s");
        check(cf_family_rotation(fam.get(), parameter, &ro, &r), "rotation number");
        if (c.flag("svg")) {
            for (int i = 0; i <= n_graph; ++i) {
                const double x = static_cast<double>(i) / n_graph;
                double v = 0.0;
                check(cf_family_eval(fam.get(), parameter, x, &v), "family map");
                graph.emplace_back(x, v);
            }
        }
    }
    const double rho = r.is_rational ? static_cast<double>(r.p) / static_cast<double>(r.q)
                                     : 0.5 * (r.lo + r.hi);
    csv << family << parameter << rho_kind(r);
    if (r.is_rational) {
        csv << static_cast<long long>(r.p) << static_cast<long long>(r.q);
    } else {
        csv << "" << "";
    }
    csv << r.lo << r.hi;
    if (family == "dynamics") {
        csv << 1.0 - 2.0 * rho;
        results["drift_slope"] = 1.0 - 2.0 * rho;
        if (r.is_rational) {
            const long long mp = r.q - 2 * r.p, mq = r.q;
            const long long g = std::max(1LL, std::llabs(std::gcd(mp, mq)));
            results["drift_slope_rational"] = ratio_text(mp / g, mq / g);
        }
    } else {
        csv << "";
    }
    csv << static_cast<long long>(r.iterations);
    csv.end_row();
    outs.add("rotnum.csv", csv.str());
    results["rotation"] = rotation_json(r);

    if (c.flag("svg") && !graph.empty()) {
        double y_lo = graph.front().second, y_hi = y_lo;
        for (const auto& [x, y] : graph) {
            y_lo = std::min(y_lo, y);
            y_hi = std::max(y_hi, y);
        }
        SvgPlot plot(0.0, 1.0, std::floor(y_lo), std::ceil(y_hi) + (y_hi == std::ceil(y_hi)),
                     "Circle map lift (" + family + ")", "z", "f(z)", 600, 600);
        plot.polyline(graph, palette(0), 1.5);
        outs.add("rotnum.svg", plot.str());
    }
}

// ---- hausdorff ----

void run_hausdorff(const RunConfig& c, OutputSet& outs, json& results) {
    cf_family* raw = nullptr;
    check(cf_family_boyd(c.number("flat"), c.number("slope"), &raw), "family setup");
    Handle<cf_family, cf_family_free> fam(raw);
    const std::vector<double> ds = c.numbers("d");
    const int levels = static_cast<int>(c.integer("levels"));
    cf_hausdorff* hraw = nullptr;
    check(cf_hausdorff_create(fam.get(), levels, ds.data(), ds.size(), c.number("width"), &hraw),
          "cover estimate");
    Handle<cf_hausdorff, cf_hausdorff_free> h(hraw);

    CsvTable rows({"N", "d", "m_d"});
    std::vector<std::vector<std::pair<double, double>>> curves(ds.size());
    double y_lo = 0.0, y_hi = 0.0;
    bool first = true;
    for (std::size_t i = 0; i < cf_hausdorff_row_count(h.get()); ++i) {
        int n = 0;
        double d = 0.0, m = 0.0;
        check(cf_hausdorff_row(h.get(), i, &n, &d, &m), "cover row");
        rows << n << d << m;
        rows.end_row();
        for (std::size_t k = 0; k < ds.size(); ++k) {
            if (ds[k] == d && m > 0.0) {
                const double lm = std::log10(m);
                curves[k].emplace_back(n, lm);
                y_lo = first ? lm : std::min(y_lo, lm);
                y_hi = first ? lm : std::max(y_hi, lm);
                first = false;
            }
        }
    }
    outs.add("hausdorff.csv", rows.str());

    CsvTable covers({"N", "diam", "plateaus", "gaps"});
    json jcovers = json::array();
    for (int n = 1; n <= levels; ++n) {
        double diam = 0.0;
        std::size_t np = 0, ng = 0;
        check(cf_hausdorff_cover(h.get(), n, &diam, &np, &ng), "cover");
        covers << n << diam << static_cast<long long>(np) << static_cast<long long>(ng);
        covers.end_row();
        jcovers.push_back({{"N", n}, {"diam", diam}, {"plateaus", np}, {"gaps", ng}});
    }
    outs.add("hausdorff_covers.csv", covers.str());
    json slopes = json::object();
    for (double d : ds) {
        double s = 0.0;
        if (cf_hausdorff_slope(h.get(), d, &s) == CF_OK) slopes[format_double(d)] = s;
    }
    results["covers"] = jcovers;
    results["log_m_d_slope_per_level"] = slopes;

    if (c.flag("svg")) {
        SvgPlot plot(0.5, levels + 0.5, y_lo - 0.2, y_hi + 0.2, "Cover sums of the gap set",
                     "level N", "log10 m_d");
        for (std::size_t k = 0; k < ds.size(); ++k) {
            plot.polyline(curves[k], palette(k), 1.5);
            for (const auto& [x, y] : curves[k]) plot.circle(x, y, 2.5, palette(k));
            plot.legend("d = " + format_double(ds[k]), palette(k));
        }
        outs.add("hausdorff.svg", plot.str());
    }
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    RunConfig config;
    try {
        std::string help;
        if (!parse_and_validate(args, config, help)) {
            out << help;
            return kExitOk;
        }
        out << config.canonical_json() << "\n";
        if (config.integer("threads") > 0) {
            setenv("CELLFLOW_THREADS", std::to_string(config.integer("threads")).c_str(), 1);
        }

        const auto t0 = std::chrono::steady_clock::now();
        OutputSet outs;
        json results = json::object();
        const std::string& cmd = config.command;
        if (cmd == "simulate") {
            run_simulate(config, outs, results);
        } else if (cmd == "staircase") {
            run_staircase(config, outs, results);
        } else if (cmd == "tongues") {
            run_tongues(config, outs, results);
        } else if (cmd == "chess") {
            run_chess(config, outs, results);
        } else if (cmd == "rotnum") {
            run_rotnum(config, outs, results);
        } else if (cmd == "hausdorff") {
            run_hausdorff(config, outs, results);
        }
        const double wall =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        json mirror = run_metadata(config, wall);
        mirror["results"] = results;
        outs.add(cmd + ".json", json_text(mirror));
        write_outputs(config.text("out"), outs);
        return kExitOk;
    } catch (const CliError& e) {
        err << "error: " << e.what() << "\n";
        return e.exit_code();
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitNumerical;
    }
}

}  // namespace cellflow_cli
