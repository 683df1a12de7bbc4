#include "sweep.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "errors.hpp"
#include "parallel.hpp"

namespace cellflow::sweep {

using circlemap::FlatSpotCircleMap;
using circlemap::MapPtr;
using circlemap::MonotoneFamily;

MapPtr dynamics_map(const ForcingParams& params, const FamilyOptions& opts) {
    poincare::Transversal tr(params, opts.poincare);
    poincare::FlatSpotData fs = poincare::locate_flat_spots(tr);
    auto Q = std::make_shared<const poincare::InverseMap>(tr, fs);
    std::vector<Interval> spots{{fs.spots[0].lo, fs.spots[0].hi}, {fs.spots[1].lo, fs.spots[1].hi}};
    std::vector<double> heights{fs.heights[0], fs.heights[1]};
    return std::make_shared<const FlatSpotCircleMap>(
        std::move(spots), std::move(heights), [Q](double z) { return Q->eval(z); },
        [Q](double z) { return Q->derivative(z); });
}

MonotoneFamily make_dynamics_family(double b, double epsilon, Interval s_range,
                                    const FamilyOptions& opts) {
    if (!(s_range.hi >= s_range.lo)) fail(ErrorCode::InvalidArgument, "empty s range");
    ForcingParams{-s_range.lo, b, epsilon}.validate();
    MonotoneFamily fam;
    fam.generator = [b, epsilon, opts](double s) {
        return dynamics_map(ForcingParams{-s, b, epsilon}, opts);
    };
    fam.s_range = s_range;
    fam.m = 2;
    fam.cache = std::make_shared<circlemap::OrbitCache>();
    return fam;
}

FamilyConstants estimate_family_constants(double b, double epsilon,
                                          const std::vector<double>& s_values, int z_samples,
                                          const FamilyOptions& opts) {
    FamilyConstants out;
    out.lambda = std::numeric_limits<double>::infinity();
    out.nu = std::numeric_limits<double>::infinity();
    const double ds = 1e-6;
    for (double s : s_values) {
        MapPtr f = dynamics_map(ForcingParams{-s, b, epsilon}, opts);
        for (int i = 0; i < z_samples; ++i) {
            const double z = (i + 0.5) / z_samples;
            if (f->spot_index(z) >= 0) continue;
            out.lambda = std::min(out.lambda, f->derivative(z));
        }
        MapPtr fp = dynamics_map(ForcingParams{-(s + ds), b, epsilon}, opts);
        MapPtr fm = dynamics_map(ForcingParams{-(s - ds), b, epsilon}, opts);
        for (std::size_t j = 0; j < f->m(); ++j) {
            const double slope = (fp->heights()[j] - fm->heights()[j]) / (2.0 * ds);
            out.nu = std::min(out.nu, slope);
        }
    }
    return out;
}

Rational drift_slope_of(const Rational& rho) { return Rational::reduced(rho.q - 2 * rho.p, rho.q); }

Rational rotation_of_slope(const Rational& m) { return Rational::reduced(m.q - m.p, 2 * m.q); }

std::vector<double> linspace(double lo, double hi, int count) {
    if (count < 1) fail(ErrorCode::InvalidArgument, "linspace: count must be positive");
    std::vector<double> out(static_cast<std::size_t>(count));
    if (count == 1) {
        out[0] = lo;
        return out;
    }
    for (int i = 0; i < count; ++i) {
        out[static_cast<std::size_t>(i)] = i == count - 1 ? hi : lo + (hi - lo) * i / (count - 1);
    }
    return out;
}

namespace {

// Failures of the map construction that mark a parameter point rather than
// abort the sweep.
bool is_cell_error(ErrorCode c) {
    switch (c) {
        case ErrorCode::TopologyError:
        case ErrorCode::SeparatrixHit:
        case ErrorCode::NoEvent:
        case ErrorCode::StepFailure:
        case ErrorCode::NonConvergence:
        case ErrorCode::NotFound:
            return true;
        default:
            return false;
    }
}

// -1 below, +1 above, 0 certified equal or undecided.
int side_of(const RotationResult& r, const Rational& target) {
    const double t = target.value();
    if (r.is_rational()) {
        if (r.rho == target) return 0;
        return r.rho < target ? -1 : 1;
    }
    if (r.hi < t) return -1;
    if (r.lo > t) return 1;
    return 0;
}

struct SamplePoint {
    double s;
    const std::optional<RotationResult>* rotation;
};

// Bracket in s (ascending) around the plateau of `target` from sampled points,
// clipped to `range`. Empty optional when the samples exclude the target.
std::optional<Interval> bracket_target(const std::vector<SamplePoint>& pts, const Rational& target,
                                       Interval range) {
    double lo = range.lo, hi = range.hi;
    for (const auto& pt : pts) {
        if (!pt.rotation->has_value()) continue;
        const int side = side_of(**pt.rotation, target);
        if (side < 0) {
            lo = std::max(lo, pt.s);
        }
    }
    for (const auto& pt : pts) {
        if (!pt.rotation->has_value()) continue;
        const int side = side_of(**pt.rotation, target);
        if (side > 0 && pt.s > lo) {
            hi = std::min(hi, pt.s);
        }
    }
    if (!(hi > lo)) return std::nullopt;
    return Interval{lo, hi};
}

Interval alpha_of(Interval s, double b) { return {-s.hi / b, -s.lo / b}; }

Interval s_of(Interval alpha, double b) { return {-alpha.hi * b, -alpha.lo * b}; }

}  // namespace

double StaircaseTable::coverage(std::int64_t q_max) const {
    const double len = alpha_range.length();
    if (!(len > 0.0)) return 0.0;
    double covered = 0.0;
    for (const auto& pl : plateaus) {
        if (pl.m.q > q_max) continue;
        const double lo = std::max(pl.alpha.lo, alpha_range.lo);
        const double hi = std::min(pl.alpha.hi, alpha_range.hi);
        if (hi > lo) covered += hi - lo;
    }
    return covered / len;
}

double StaircaseTable::max_decrease() const {
    double worst = 0.0;
    const StaircaseRow* prev = nullptr;
    for (const auto& row : rows) {
        if (!row.rotation) continue;
        if (prev) worst = std::max(worst, prev->m_lo - row.m_hi);
        prev = &row;
    }
    return worst;
}

StaircaseTable staircase_sweep(double b, double epsilon, Interval alpha_range, int resolution,
                               const StaircaseOptions& opts) {
    if (resolution < 100) fail(ErrorCode::InvalidArgument, "staircase_sweep: resolution must be >= 100");
    if (!(alpha_range.hi > alpha_range.lo)) {
        fail(ErrorCode::InvalidArgument, "staircase_sweep: empty alpha range");
    }
    if (opts.q_cap < 1) fail(ErrorCode::InvalidArgument, "staircase_sweep: q_cap must be >= 1");
    ForcingParams{alpha_range.hi * b, b, epsilon}.validate();

    StaircaseTable table;
    table.b = b;
    table.epsilon = epsilon;
    table.alpha_range = alpha_range;
    table.resolution = resolution;
    table.q_cap = opts.q_cap;

    const Interval s_range = s_of(alpha_range, b);
    const MonotoneFamily fam = make_dynamics_family(b, epsilon, s_range, opts.family);

    const std::vector<double> alphas = linspace(alpha_range.lo, alpha_range.hi, resolution);
    table.rows.resize(alphas.size());
    parallel_for(
        alphas.size(),
        [&](std::size_t i) {
            StaircaseRow& row = table.rows[i];
            row.alpha = alphas[i];
            row.s = -alphas[i] * b;
            try {
                const RotationResult r = circlemap::rotation_at(fam, row.s, opts.rotation);
                row.rotation = r;
                if (r.is_rational()) {
                    row.m = row.m_lo = row.m_hi = drift_slope_of(r.rho).value();
                } else {
                    row.m_lo = 1.0 - 2.0 * r.hi;
                    row.m_hi = 1.0 - 2.0 * r.lo;
                    row.m = 0.5 * (row.m_lo + row.m_hi);
                }
            } catch (const Error& e) {
                if (!is_cell_error(e.code())) throw;
                row.status = error_code_name(e.code());
            }
        },
        opts.threads);

    if (!opts.refine_plateaus) return table;

    double m_min = std::numeric_limits<double>::infinity();
    double m_max = -m_min;
    std::vector<SamplePoint> pts;
    for (const auto& row : table.rows) {
        pts.push_back({row.s, &row.rotation});
        if (!row.rotation) continue;
        m_min = std::min(m_min, row.m_lo);
        m_max = std::max(m_max, row.m_hi);
    }
    if (!(m_max >= m_min)) return table;

    const std::vector<Rational> targets = circlemap::farey_between(m_min, m_max, opts.q_cap);
    std::vector<std::optional<Interval>> found(targets.size());
    circlemap::PlateauOptions popts;
    popts.rotation = opts.rotation;
    popts.width = opts.plateau_width;
    parallel_for(
        targets.size(),
        [&](std::size_t k) {
            const Rational rho = rotation_of_slope(targets[k]);
            const auto bracket = bracket_target(pts, rho, s_range);
            if (!bracket) return;
            try {
                found[k] = circlemap::plateau_bounds(fam, rho.p, rho.q, *bracket, popts);
            } catch (const Error& e) {
                if (!is_cell_error(e.code())) throw;
            }
        },
        opts.threads);

    for (std::size_t k = 0; k < targets.size(); ++k) {
        if (!found[k]) continue;
        Interval a = alpha_of(*found[k], b);
        a.lo = std::max(a.lo, alpha_range.lo);
        a.hi = std::min(a.hi, alpha_range.hi);
        if (a.hi >= a.lo) table.plateaus.push_back({targets[k], a});
    }
    std::sort(table.plateaus.begin(), table.plateaus.end(),
              [](const SlopePlateau& l, const SlopePlateau& r) { return l.alpha.lo < r.alpha.lo; });
    return table;
}

TongueScan tongue_scan(double b, Interval alpha_range, Interval epsilon_range,
                       const std::vector<Rational>& targets, int n_alpha, int n_epsilon,
                       const TongueOptions& opts) {
    if (n_alpha < 32 || n_epsilon < 16) {
        fail(ErrorCode::InvalidArgument, "tongue_scan: grid must be at least 32 x 16");
    }
    if (!(alpha_range.hi > alpha_range.lo) || !(epsilon_range.hi > epsilon_range.lo)) {
        fail(ErrorCode::InvalidArgument, "tongue_scan: empty range");
    }
    ForcingParams{alpha_range.hi * b, b, epsilon_range.lo}.validate();

    TongueScan scan;
    scan.b = b;
    scan.alpha_range = alpha_range;
    scan.epsilon_range = epsilon_range;
    scan.n_alpha = n_alpha;
    scan.n_epsilon = n_epsilon;

    const Interval s_range = s_of(alpha_range, b);
    const std::vector<double> alphas = linspace(alpha_range.lo, alpha_range.hi, n_alpha);
    const std::vector<double> epsilons = linspace(epsilon_range.lo, epsilon_range.hi, n_epsilon);
    std::vector<MonotoneFamily> families;
    families.reserve(epsilons.size());
    for (double eps : epsilons) families.push_back(make_dynamics_family(b, eps, s_range, opts.family));

    const std::size_t na = alphas.size();
    scan.cells.resize(na * epsilons.size());
    parallel_for(
        scan.cells.size(),
        [&](std::size_t idx) {
            const std::size_t ie = idx / na, ia = idx % na;
            TongueCell& cell = scan.cells[idx];
            cell.alpha = alphas[ia];
            cell.epsilon = epsilons[ie];
            try {
                const RotationResult r =
                    circlemap::rotation_at(families[ie], -cell.alpha * b, opts.rotation);
                cell.rotation = r;
                if (r.is_rational()) cell.m = drift_slope_of(r.rho);
            } catch (const Error& e) {
                if (!is_cell_error(e.code())) throw;
                cell.status = error_code_name(e.code());
            }
        },
        opts.threads);

    const std::size_t ne = epsilons.size();
    std::vector<std::optional<Interval>> slices(targets.size() * ne);
    circlemap::PlateauOptions popts;
    popts.rotation = opts.rotation;
    popts.width = opts.boundary_width;
    parallel_for(
        slices.size(),
        [&](std::size_t idx) {
            const std::size_t k = idx / ne, ie = idx % ne;
            const Rational rho = rotation_of_slope(targets[k]);
            std::vector<SamplePoint> pts;
            pts.reserve(na);
            for (std::size_t ia = 0; ia < na; ++ia) {
                const TongueCell& cell = scan.cells[ie * na + ia];
                pts.push_back({-cell.alpha * b, &cell.rotation});
            }
            const auto bracket = bracket_target(pts, rho, s_range);
            if (!bracket) return;
            try {
                slices[idx] = circlemap::plateau_bounds(families[ie], rho.p, rho.q, *bracket, popts);
            } catch (const Error& e) {
                if (!is_cell_error(e.code())) throw;
            }
        },
        opts.threads);

    for (std::size_t k = 0; k < targets.size(); ++k) {
        TongueRegion region;
        region.target = Rational::reduced(targets[k].p, targets[k].q);
        std::vector<double> widths;
        for (std::size_t ie = 0; ie < ne; ++ie) {
            TongueSlice slice;
            slice.epsilon = epsilons[ie];
            if (const auto& s = slices[k * ne + ie]) slice.alpha = alpha_of(*s, b);
            widths.push_back(slice.alpha ? slice.alpha->length() : 0.0);
            region.slices.push_back(slice);
        }
        for (std::size_t ie = 1; ie < ne; ++ie) {
            region.area += 0.5 * (widths[ie] + widths[ie - 1]) * (epsilons[ie] - epsilons[ie - 1]);
        }
        scan.tongues.push_back(std::move(region));
    }
    return scan;
}

}  // namespace cellflow::sweep
