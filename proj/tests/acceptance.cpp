// Acceptance report: one PASS/FAIL line per criterion, with its runtime.
//
// Usage: acceptance [--out DIR] [--only N[,N...]] [--expect-red N[,N...]]
//
// The exit status is 0 when the set of failing criteria equals the
// --expect-red set (empty by default). A criterion listed there that turns
// green also makes the run fail, so the list cannot go stale silently.

// support.hpp pulls in doctest; no test cases are registered here.
#define DOCTEST_CONFIG_DISABLE

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "circlemap.hpp"
#include "commands.hpp"
#include "errors.hpp"
#include "hamflow.hpp"
#include "inertial.hpp"
#include "json.hpp"
#include "poincare.hpp"
#include "support.hpp"
#include "sweep.hpp"

using namespace cellflow;
using testsupport::Gen;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    bool pass = true;
    std::string detail;
};

// Collects sub-checks of one criterion; the first failure is kept in the detail.
struct Report {
    Outcome out;
    std::ostringstream note;
    void check(bool ok, const std::string& what) {
        if (!ok && out.pass) {
            out.pass = false;
            note << "failed: " << what << "; ";
        }
    }
    Outcome done() {
        out.detail = note.str();
        return out;
    }
};

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4g", v);
    return buf;
}

double frac(double z) { return z - std::floor(z); }

double circ_dist(double u, double v) {
    const double d = frac(u - v);
    return std::min(d, 1.0 - d);
}

std::string out_dir = "acceptance_out";

// 1. Zero inertia: the return map is the rigid rotation.
Outcome rigid_rotation() {
    Report r;
    Gen g(1001);
    double worst = 0.0;
    int pairs = 0;
    for (int i = 0; i < 5; ++i) {
        for (int j = 0; j < 5; ++j) {
            const double a = 0.01 + 0.09 * i / 4.0;
            const double b = 0.01 + 0.09 * j / 4.0;
            if (a > 1.5 * b) continue;
            ++pairs;
            const poincare::Transversal tr({a, b, 0.0});
            for (int k = 0; k < 20; ++k) {
                const double z = g.uniform(0.0, 1.0);
                const double out = poincare::return_map_P(z, tr).z_out;
                worst = std::max(worst, std::abs(out - z - (a - b) / (2 * b)));
            }
        }
    }
    r.check(worst < 1e-6, "max error " + fmt(worst));
    r.note << pairs << " (a,b) pairs, max |P(z) - z - (a-b)/2b| = " << fmt(worst) << "; ";
    return r.done();
}

// Max distance from the rigid rotation over a z grid, skipping starts that
// land on a stable separatrix.
double max_rotation_error(const ForcingParams& p, int samples, int* skipped) {
    const poincare::Transversal tr(p);
    double worst = 0.0;
    for (int i = 0; i < samples; ++i) {
        const double z = (i + 0.37) / samples;
        try {
            const double out = poincare::return_map_P(z, tr).z_out;
            worst = std::max(worst, std::abs(out - hamflow::rigid_rotation_p0(z, p)));
        } catch (const Error& e) {
            if (e.code() != ErrorCode::SeparatrixHit) throw;
            ++*skipped;
        }
    }
    return worst;
}

// 2. Closeness to the rigid rotation is O(eps).
Outcome eps_closeness() {
    Report r;
    const double b = 0.05 / std::sqrt(2.0);
    int skipped = 0;
    const double e25 = max_rotation_error({b, b, 1.0 / 25}, 200, &skipped);
    const double e50 = max_rotation_error({b, b, 1.0 / 50}, 200, &skipped);
    r.check(e25 <= 10.0 / 25, "eps=1/25 error " + fmt(e25));
    r.check(e50 <= 10.0 / 50, "eps=1/50 error " + fmt(e50));
    const double ratio = e50 / e25;
    r.check(ratio >= 0.35 && ratio <= 0.65, "halving ratio " + fmt(ratio));
    r.note << "max error " << fmt(e25) << " (1/25), " << fmt(e50) << " (1/50), ratio " << fmt(ratio)
           << ", separatrix starts skipped " << skipped << "; ";
    return r.done();
}

// 3. Contraction, monotonicity in a, and the slopes of the jump heights.
Outcome contraction() {
    Report r;
    const ForcingParams p{0.05, 0.05, 1.0 / 25};
    const poincare::Transversal tr(p);
    const poincare::FlatSpotData fs = poincare::locate_flat_spots(tr);
    Gen g(1003);
    int n = 0;
    double max_d = 0.0;
    while (n < 200) {
        const double z = g.uniform(0.0, 1.0);
        if (circ_dist(z, fs.heights[0]) < 1e-6 || circ_dist(z, fs.heights[1]) < 1e-6) continue;
        max_d = std::max(max_d, poincare::return_map_P(z, tr).derivative);
        ++n;
    }
    r.check(max_d <= 1.0 - p.epsilon, "max dP/dz " + fmt(max_d));

    const double h = 1e-6;
    const poincare::Transversal up({p.a + h, p.b, p.epsilon}), down({p.a - h, p.b, p.epsilon});
    double min_da = 1e9;
    n = 0;
    while (n < 50) {
        const double z = g.uniform(0.0, 1.0);
        if (circ_dist(z, fs.heights[0]) < 1e-3 || circ_dist(z, fs.heights[1]) < 1e-3) continue;
        const double d = (poincare::return_map_P(z, up).z_out - poincare::return_map_P(z, down).z_out) / (2 * h);
        min_da = std::min(min_da, d);
        ++n;
    }
    r.check(min_da > 0.0, "min dP/da " + fmt(min_da));

    const double ha = 1e-4;
    const auto hu = poincare::locate_flat_spots(ForcingParams{p.a + ha, p.b, p.epsilon});
    const auto hd = poincare::locate_flat_spots(ForcingParams{p.a - ha, p.b, p.epsilon});
    double max_height_slope = -1e9;
    for (int j = 0; j < 2; ++j) {
        max_height_slope = std::max(max_height_slope, (hu.heights[j] - hd.heights[j]) / (2 * ha));
    }
    r.check(max_height_slope < -0.15, "height slope " + fmt(max_height_slope));

    // Zero inertia: y on x = -pi/2 is 2 pi z - pi/2.
    double max_y_slope = -1e9;
    for (const ForcingParams& q : {ForcingParams{0.05, 0.04, 0.0}, ForcingParams{0.03, 0.05, 0.0},
                                   ForcingParams{0.08, 0.07, 0.0}}) {
        const auto yu = poincare::locate_flat_spots(ForcingParams{q.a + ha, q.b, 0.0});
        const auto yd = poincare::locate_flat_spots(ForcingParams{q.a - ha, q.b, 0.0});
        for (int j = 0; j < 2; ++j) {
            max_y_slope = std::max(max_y_slope, kTwoPi * (yu.heights[j] - yd.heights[j]) / (2 * ha));
        }
    }
    r.check(max_y_slope < -1.0, "eps=0 crossing slope " + fmt(max_y_slope));
    r.note << "max dP/dz " << fmt(max_d) << ", min dP/da " << fmt(min_da) << ", max height slope "
           << fmt(max_height_slope) << ", max eps=0 dy/da " << fmt(max_y_slope) << "; ";
    return r.done();
}

// 4. Liouville derivative against finite differences.
Outcome liouville() {
    Report r;
    const poincare::Transversal tr({0.05, 0.05, 1.0 / 25});
    const poincare::FlatSpotData fs = poincare::locate_flat_spots(tr);
    Gen g(1004);
    double worst = 0.0;
    int n = 0;
    while (n < 50) {
        const double z = g.uniform(0.0, 1.0);
        if (circ_dist(z, fs.heights[0]) < 1e-3 || circ_dist(z, fs.heights[1]) < 1e-3) continue;
        const double h = 1e-6;
        const double fd =
            (poincare::return_map_P(z + h, tr).z_out - poincare::return_map_P(z - h, tr).z_out) / (2 * h);
        worst = std::max(worst, std::abs(poincare::return_map_P(z, tr).derivative - fd));
        ++n;
    }
    r.check(worst < 1e-4, "max deviation " + fmt(worst));
    r.note << "max |Liouville - FD| = " << fmt(worst) << " over 50 samples; ";
    return r.done();
}

// 5. 4D drift slope against the circle-map slope at |(b,a)| = 0.02 scale.
Outcome drift_consistency() {
    Report r;
    const double b = 0.02 / std::sqrt(2.0), eps = 1.0 / 25;
    int certified = 0;
    double worst = 0.0;
    for (double alpha : {0.6, 0.8, 1.0, 1.2, 1.4}) {
        const ForcingParams p{alpha * b, b, eps};
        const auto rot = circlemap::rotation_number(*sweep::dynamics_map(p), {200, 2000, 1e-12, true});
        const double m = 1 - 2 * rot.value();
        const auto d = poincare::empirical_drift_slope({0.3, 0.2, 0.0, 0.0}, p, 4000.0);
        worst = std::max(worst, std::abs(d.slope - m));
        std::string slope_text = "interval";
        if (rot.is_rational()) {
            const sweep::Rational ms = sweep::drift_slope_of(rot.rho);
            slope_text = std::to_string(ms.p) + "/" + std::to_string(ms.q);
            if (ms.q <= 12) ++certified;
        }
        r.note << "alpha " << alpha << ": m " << slope_text << ", 4D " << fmt(d.slope) << "; ";
    }
    r.check(worst < 0.02, "max slope gap " + fmt(worst));
    r.check(certified >= 4, std::to_string(certified) + " of 5 certified with q <= 12");
    r.note << "max gap " << fmt(worst) << ", certified " << certified << "/5; ";
    return r.done();
}

// 6. Ground truth on the piecewise-linear family.
Outcome boyd_ground_truth() {
    Report r;
    const auto fam = circlemap::make_boyd_family(0.25, 4.0 / 3.0);
    const auto p0 = circlemap::plateau_bounds(fam, 0, 1, {0.0, 0.5});
    const auto p12 = circlemap::plateau_bounds(fam, 1, 2, {0.3, 0.9});
    const double e0 = std::max(std::abs(p0.lo), std::abs(p0.hi - 0.25));
    const double e12 = std::max(std::abs(p12.lo - 4.0 / 7.0), std::abs(p12.hi - 19.0 / 28.0));
    r.check(e0 < 1e-10, "rho=0 plateau error " + fmt(e0));
    r.check(e12 < 1e-10, "rho=1/2 plateau error " + fmt(e12));
    Gen g(1006);
    double worst = 0.0;
    for (int i = 0; i < 100; ++i) {
        const double s = g.uniform(0.0, 1.0);
        const auto res = circlemap::rotation_at(fam, s);
        const double brute = circlemap::rotation_brute_force(*fam.at(s), 0.1, 1000);
        worst = std::max(worst, std::abs(res.value() - brute));
    }
    r.check(worst < 2e-3, "certificate vs brute force " + fmt(worst));
    r.note << "plateau errors " << fmt(e0) << ", " << fmt(e12) << "; max |certified - brute| " << fmt(worst) << "; ";
    return r.done();
}

// 7. Cover diameter and measure scaling for the slope-3 family.
Outcome cover_scaling() {
    Report r;
    const auto fam = circlemap::make_boyd_family(2.0 / 3.0, 3.0);
    const auto h = circlemap::hausdorff_estimate(fam, 8, {}, {1.0, 0.1});
    std::map<int, double> diam;
    for (const auto& c : h.covers) diam[c.N] = c.diam;
    // K fitted on N = 2..5 must bound N = 6..8 as well.
    double K = 0.0;
    for (int N = 2; N <= 5; ++N) K = std::max(K, diam.at(N) / (N * std::pow(fam.lambda, -N)));
    for (int N = 6; N <= 8; ++N) {
        r.check(diam.at(N) <= K * N * std::pow(fam.lambda, -N), "diam bound at N=" + std::to_string(N));
    }
    std::ostringstream column;
    double prev = 1e300;
    double last = 0.0;
    for (const auto& row : h.rows) {
        if (row.d != 0.1 || row.N < 2) continue;
        column << " " << fmt(row.m_d);
        r.check(row.m_d < prev, "m_0.1 not decreasing at N=" + std::to_string(row.N));
        prev = row.m_d;
        last = row.m_d;
    }
    r.check(last < 1e-2, "m_0.1 at N=8 is " + fmt(last));
    r.note << "K " << fmt(K) << " bounds diam for N=2..8; m_0.1 for N=2..8:" << column.str() << "; ";
    return r.done();
}

// 8. Steepness at the right end of the rho = 0 plateau.
Outcome steepness() {
    Report r;
    const auto fam = circlemap::make_boyd_family(0.25, 4.0 / 3.0);
    const auto p0 = circlemap::plateau_bounds(fam, 0, 1, fam.s_range);
    const auto scan = circlemap::steepness_scan(fam, p0, circlemap::Side::Right, {1e-2, 1e-3, 1e-4, 1e-5, 1e-6});
    const double bound = std::log(fam.lambda) / 4;
    double min_c = 1e9;
    for (const auto& pt : scan.points) min_c = std::min(min_c, pt.delta_rho * std::abs(std::log(pt.delta_s)));
    r.check(scan.points.size() == 5, "missing steepness points");
    r.check(min_c >= bound, "min c " + fmt(min_c) + " below " + fmt(bound));
    r.note << "min delta_rho |ln delta_s| " << fmt(min_c) << " against ln(lambda)/4 = " << fmt(bound) << "; ";
    return r.done();
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> cells;
    std::string cur;
    std::istringstream in(line);
    while (std::getline(in, cur, ',')) cells.push_back(cur);
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    return cells;
}

// 9. Desk-scale staircase through the command line front end.
Outcome staircase() {
    Report r;
    const fs::path dir = fs::path(out_dir) / "staircase";
    std::ostringstream so, se;
    const int code = cellflow_cli::run_cli(
        {"staircase", "--b", "0.05", "--eps", "0.04", "--alpha", "0.5:1.5:400", "--q-cap", "12", "--out",
         dir.string()},
        so, se);
    r.check(code == 0, "cli exit " + std::to_string(code) + " " + se.str());
    if (code != 0) return r.done();

    std::ifstream jin(dir / "staircase.json");
    const auto doc = nlohmann::json::parse(jin);
    const auto& res = doc.at("results");
    const double max_dec = res.at("max_decrease").get<double>();
    const double cov8 = res.at("coverage_by_q").at("8").get<double>();
    const double cov12 = res.at("coverage_by_q").at("12").get<double>();
    r.check(res.at("rows").get<int>() == 400, "row count");
    r.check(max_dec <= 1e-9, "max decrease " + fmt(max_dec));
    r.check(cov8 >= 0.9, "q <= 8 coverage " + fmt(cov8));

    // Shape of the curve: the rows climb from below 1 to above 1 and the
    // m = 1 plateau around alpha = 1 is the widest step.
    std::ifstream cin(dir / "staircase.csv");
    std::string line;
    std::getline(cin, line);
    std::vector<std::pair<double, double>> rows;
    while (std::getline(cin, line)) {
        const auto c = split_csv_line(line);
        if (c.size() != 9 || c[2] == "error") continue;
        rows.emplace_back(std::stod(c[0]), std::stod(c[7]));
    }
    r.check(rows.size() >= 390, "rows with a rotation number " + std::to_string(rows.size()));
    if (!rows.empty()) {
        r.check(rows.front().second < 1.0 && rows.back().second > 1.0, "m does not cross 1");
    }
    double widest = 0.0, widest_m = 0.0, one_lo = 2.0, one_hi = 0.0;
    for (const auto& p : res.at("plateaus")) {
        const double len = p.at("alpha_hi").get<double>() - p.at("alpha_lo").get<double>();
        const std::string m = p.at("m").get<std::string>();
        if (len > widest) {
            widest = len;
            widest_m = m == "1" || m == "1/1" ? 1.0 : 0.0;
        }
        if (m == "1" || m == "1/1") {
            one_lo = p.at("alpha_lo").get<double>();
            one_hi = p.at("alpha_hi").get<double>();
        }
    }
    r.check(widest_m == 1.0, "widest plateau is not m = 1");
    r.check(one_lo < 1.0 && one_hi > 1.0, "m = 1 plateau misses alpha = 1");

    std::ifstream sin(dir / "staircase.svg");
    std::stringstream svg;
    svg << sin.rdbuf();
    const std::string text = svg.str();
    r.check(text.find("<svg") != std::string::npos && text.find("<polyline") != std::string::npos,
            "svg lacks the sampled curve");
    r.note << "max decrease " << fmt(max_dec) << ", coverage q<=8 " << fmt(cov8) << ", q<=12 " << fmt(cov12)
           << ", m=1 plateau [" << fmt(one_lo) << ", " << fmt(one_hi) << "], output " << dir.string() << "; ";
    return r.done();
}

// Turn sequence of the streamline through p0 from the nearest lattice nodes
// visited by a fixed-step RK4 solution.
std::string ode_turns(double a, double b, Vec2 p0, std::size_t max_nodes, std::vector<hamflow::LatticeNode>& seq) {
    testsupport::CellFlow flow{a, b};
    testsupport::Vec<2> y{p0.x, p0.y};
    seq = {hamflow::nearest_node(p0)};
    auto f = [&](const testsupport::Vec<2>& s) { return flow.v(s); };
    for (int step = 0; step < 400000 && seq.size() < max_nodes; ++step) {
        y = testsupport::rk4_step<2>(f, y, 0.02);
        const auto n = hamflow::nearest_node({y[0], y[1]});
        if (!(n == seq.back())) seq.push_back(n);
    }
    std::string turns;
    for (std::size_t i = 1; i + 1 < seq.size(); ++i) {
        const int d1 = seq[i].k1 - seq[i - 1].k1, d2 = seq[i].k2 - seq[i - 1].k2;
        const int e1 = seq[i + 1].k1 - seq[i].k1, e2 = seq[i + 1].k2 - seq[i].k2;
        const int c = d1 * e2 - d2 * e1;
        turns += c > 0 ? 'L' : c < 0 ? 'R' : 'S';
    }
    return turns;
}

// 10. Chess rule against integrated streamlines.
Outcome chess_oracle() {
    Report r;
    struct Config {
        double a, b;
        Vec2 start;
    };
    for (const Config& c : {Config{0.05, 0.05, {kPi, kHalfPi + 0.03}}, Config{0.03, 0.08, {kPi, kHalfPi + 0.02}},
                            Config{0.08, 0.05, {kPi, kHalfPi - 0.04}}}) {
        const ForcingParams p{c.a, c.b, 0.0};
        std::vector<hamflow::LatticeNode> nodes;
        const std::string ode = ode_turns(c.a, c.b, c.start, 40, nodes);
        const double h0 = hamflow::hamiltonian(c.start, p);
        const hamflow::DirectedEdge e{nodes[0], nodes[1].k1 - nodes[0].k1, nodes[1].k2 - nodes[0].k2};
        const auto path = hamflow::chess_path(e, p, h0, static_cast<int>(ode.size()));
        std::string labels;
        for (auto t : path.turns) labels += hamflow::turn_char(t);
        r.check(ode.size() >= 30, "fewer than 30 turns");
        r.check(labels == ode, "sequence mismatch at a=" + fmt(c.a) + " b=" + fmt(c.b));
        r.note << "(" << c.a << "," << c.b << ") " << ode.size() << " turns " << ode.substr(0, 12) << "...; ";
    }
    return r.done();
}

// 11. Divergence of the correction over nested closed orbits.
Outcome repulsion() {
    Report r;
    const ForcingParams p{0.05, 0.05, 0.0};
    const auto cell = inertial::cell_info(p);
    std::vector<inertial::AreaCheck> orbits;
    for (int k = 1; k <= 10; ++k) {
        const double level = cell.h_saddle + (cell.h_center - cell.h_saddle) * (k - 0.5) / 10.5;
        orbits.push_back(inertial::divergence_area_check(level, p));
    }
    double delta = 1e300;
    for (const auto& o : orbits) {
        r.check(o.integral > 0.0, "non-positive integral");
        delta = std::min(delta, o.integral / o.area);
    }
    r.check(delta > 0.0, "fitted delta " + fmt(delta));
    for (const auto& o : orbits) r.check(o.integral >= delta * o.area, "integral below delta * area");
    r.note << "delta " << fmt(delta) << ", areas " << fmt(orbits.back().area) << ".." << fmt(orbits.front().area)
           << "; ";
    return r.done();
}

struct Criterion {
    int id;
    const char* name;
    double budget_s;
    std::function<Outcome()> run;
};

std::set<int> parse_ids(const std::string& text) {
    std::set<int> ids;
    std::istringstream in(text);
    std::string tok;
    while (std::getline(in, tok, ',')) {
        if (!tok.empty()) ids.insert(std::stoi(tok));
    }
    return ids;
}

}  // namespace

int main(int argc, char** argv) {
    std::set<int> only, expect_red;
    for (int i = 1; i < argc; ++i) {
        const std::string arg = argv[i];
        if (arg == "--out" && i + 1 < argc) {
            out_dir = argv[++i];
        } else if (arg == "--only" && i + 1 < argc) {
            only = parse_ids(argv[++i]);
        } else if (arg == "--expect-red" && i + 1 < argc) {
            expect_red = parse_ids(argv[++i]);
        } else {
            std::fprintf(stderr, "usage: acceptance [--out DIR] [--only N,..] [--expect-red N,..]\n");
            return 2;
        }
    }

    const std::vector<Criterion> criteria{
        {1, "rigid rotation at zero inertia", 60, rigid_rotation},
        {2, "O(eps) closeness to the rigid rotation", 120, eps_closeness},
        {3, "contraction and monotonicity", 300, contraction},
        {4, "Liouville derivative", 60, liouville},
        {5, "drift slope consistency", 900, drift_consistency},
        {6, "piecewise-linear ground truth", 60, boyd_ground_truth},
        {7, "cover scaling", 300, cover_scaling},
        {8, "steepness", 60, steepness},
        {9, "desk-scale staircase", 3600, staircase},
        {10, "chess rule against streamlines", 300, chess_oracle},
        {11, "divergence over nested orbits", 120, repulsion},
    };

    std::set<int> failed;
    for (const Criterion& c : criteria) {
        if (!only.empty() && !only.count(c.id)) continue;
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (secs > c.budget_s) {
            o.pass = false;
            o.detail += "over the " + fmt(c.budget_s) + " s budget; ";
        }
        if (!o.pass) failed.insert(c.id);
        std::printf("%s %2d %-40s %7.1f s  %s\n", o.pass ? "PASS" : "FAIL", c.id, c.name, secs, o.detail.c_str());
        std::fflush(stdout);
    }

    std::set<int> expected;
    for (int id : expect_red) {
        if (only.empty() || only.count(id)) expected.insert(id);
    }
    std::printf("%zu failing, %zu expected red\n", failed.size(), expected.size());
    if (failed != expected) {
        for (int id : failed) {
            if (!expected.count(id)) std::printf("unexpected failure: %d\n", id);
        }
        for (int id : expected) {
            if (!failed.count(id)) std::printf("expected red but passed: %d\n", id);
        }
        return 1;
    }
    return 0;
}
