#include "circlemap.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "errors.hpp"

namespace cellflow::circlemap {

Rational Rational::reduced(std::int64_t p, std::int64_t q) {
    if (q == 0) fail(ErrorCode::InvalidArgument, "Rational: zero denominator");
    if (q < 0) {
        p = -p;
        q = -q;
    }
    const std::int64_t g = std::gcd(p < 0 ? -p : p, q);
    return {p / g, q / g};
}

bool operator<(const Rational& l, const Rational& r) {
    // Denominators are positive and small; products stay well inside int64.
    return l.p * r.q < r.p * l.q;
}

FlatSpotCircleMap::FlatSpotCircleMap(std::vector<Interval> spots, std::vector<double> heights,
                                     Branch branch, Branch derivative, std::int64_t lift_offset)
    : spots_(std::move(spots)),
      heights_(std::move(heights)),
      branch_(std::move(branch)),
      derivative_(std::move(derivative)),
      lift_offset_(lift_offset) {
    if (spots_.empty() || spots_.size() != heights_.size()) {
        fail(ErrorCode::InvalidArgument, "FlatSpotCircleMap: need one height per spot");
    }
    for (const Interval& I : spots_) {
        if (!(I.hi >= I.lo) || !(I.hi - I.lo < 1.0)) {
            fail(ErrorCode::InvalidArgument, "FlatSpotCircleMap: spots must be arcs shorter than 1");
        }
    }
    if (!branch_) fail(ErrorCode::InvalidArgument, "FlatSpotCircleMap: missing branch");
}

std::optional<std::int64_t> FlatSpotCircleMap::spot_shift(double x, std::size_t j,
                                                          double shrink) const {
    const Interval& I = spots_[j];
    const double lo = I.lo + shrink;
    const double hi = I.hi - shrink;
    if (hi < lo) return std::nullopt;
    const double k = std::floor(x - lo);
    if (x - k <= hi) return static_cast<std::int64_t>(k);
    return std::nullopt;
}

int FlatSpotCircleMap::spot_index(double x, double shrink) const {
    for (std::size_t j = 0; j < spots_.size(); ++j) {
        if (spot_shift(x, j, shrink)) return static_cast<int>(j);
    }
    return -1;
}

double FlatSpotCircleMap::eval(double x) const {
    for (std::size_t j = 0; j < spots_.size(); ++j) {
        if (auto k = spot_shift(x, j, 0.0)) {
            return heights_[j] + static_cast<double>(*k + lift_offset_);
        }
    }
    return branch_(x) + static_cast<double>(lift_offset_);
}

double FlatSpotCircleMap::derivative(double x) const {
    if (!derivative_) fail(ErrorCode::InvalidArgument, "FlatSpotCircleMap: no derivative");
    if (spot_index(x) >= 0) return 0.0;
    return derivative_(x);
}

std::vector<double> OrbitCache::get(double s, std::size_t j) const {
    std::lock_guard<std::mutex> lock(mu_);
    auto it = orbits_.find({s, j});
    return it == orbits_.end() ? std::vector<double>{} : it->second;
}

void OrbitCache::put(double s, std::size_t j, std::vector<double> orbit) {
    std::lock_guard<std::mutex> lock(mu_);
    auto& slot = orbits_[{s, j}];
    if (orbit.size() > slot.size()) slot = std::move(orbit);
}

std::size_t OrbitCache::size() const {
    std::lock_guard<std::mutex> lock(mu_);
    return orbits_.size();
}

MonotoneFamily make_boyd_family(double flat_fraction, double slope) {
    if (!(slope > 1.0) || !(flat_fraction > 0.0 && flat_fraction < 1.0)) {
        fail(ErrorCode::DomainError, "make_boyd_family: need slope > 1 and 0 < flat_fraction < 1");
    }
    if (std::abs(slope * (1.0 - flat_fraction) - 1.0) > 1e-12) {
        fail(ErrorCode::DomainError, "make_boyd_family: slope * (1 - flat_fraction) must equal 1");
    }
    const double phi = flat_fraction;
    const double lam = slope;
    MonotoneFamily fam;
    fam.s_range = {0.0, 1.0};
    fam.nu = 1.0;
    fam.lambda = lam;
    fam.m = 1;
    fam.generator = [phi, lam](double s) -> MapPtr {
        auto g = [phi, lam, s](double x) {
            const double n = std::floor(x);
            const double r = x - n;
            return n + (r <= phi ? 0.0 : lam * (r - phi)) + s;
        };
        auto dg = [phi, lam](double x) { return x - std::floor(x) <= phi ? 0.0 : lam; };
        return std::make_shared<const FlatSpotCircleMap>(std::vector<Interval>{{0.0, phi}},
                                                         std::vector<double>{s}, g, dg);
    };
    return fam;
}

namespace {

RotationResult rotation_impl(const FlatSpotCircleMap& f, const RotationOptions& opts,
                             OrbitCache* cache, double s) {
    const std::size_t m = f.m();
    std::vector<std::vector<double>> orbits(m);
    for (std::size_t j = 0; j < m; ++j) {
        if (cache != nullptr) orbits[j] = cache->get(s, j);
        if (orbits[j].empty()) orbits[j].push_back(f.heights()[j]);
    }
    std::vector<std::size_t> initial(m);
    for (std::size_t j = 0; j < m; ++j) initial[j] = orbits[j].size();
    auto ensure = [&](std::size_t j, std::size_t k) {
        auto& o = orbits[j];
        while (o.size() <= k) o.push_back(f.eval(o.back()));
    };
    auto store = [&] {
        if (cache == nullptr) return;
        for (std::size_t j = 0; j < m; ++j) {
            if (orbits[j].size() > initial[j]) cache->put(s, j, orbits[j]);
        }
    };

    RotationResult r;
    if (opts.use_certificate) {
        // orbits[j][q-1] = f^q(spot j); it must fall strictly inside spot j + p.
        for (int q = 1; q <= opts.q_max; ++q) {
            for (std::size_t j = 0; j < m; ++j) {
                ensure(j, static_cast<std::size_t>(q - 1));
                const double y = orbits[j][static_cast<std::size_t>(q - 1)];
                if (auto p = f.spot_shift(y, j, opts.spot_tol)) {
                    r.kind = RotationResult::Kind::Rational;
                    r.rho = Rational::reduced(*p, q);
                    r.certificate_spot = static_cast<int>(j);
                    r.lo = r.hi = r.rho.value();
                    r.iterations = q;
                    store();
                    return r;
                }
            }
        }
    }
    const auto n = static_cast<std::size_t>(std::max<std::int64_t>(1, opts.n_max));
    ensure(0, n);
    const double d = orbits[0][n] - orbits[0][0];
    r.kind = RotationResult::Kind::Interval;
    r.lo = std::floor(d) / static_cast<double>(n);
    r.hi = std::ceil(d) / static_cast<double>(n);
    r.iterations = static_cast<std::int64_t>(n);
    store();
    return r;
}

}  // namespace

RotationResult rotation_number(const FlatSpotCircleMap& map, const RotationOptions& opts) {
    return rotation_impl(map, opts, nullptr, 0.0);
}

RotationResult rotation_at(const MonotoneFamily& family, double s, const RotationOptions& opts) {
    MapPtr f = family.at(s);
    return rotation_impl(*f, opts, family.cache.get(), s);
}

double rotation_brute_force(const FlatSpotCircleMap& map, double x0, std::int64_t n) {
    double x = x0;
    for (std::int64_t i = 0; i < n; ++i) x = map.eval(x);
    return (x - x0) / static_cast<double>(n);
}

namespace {

// -1 / 0 / +1 for rho(s) below, equal to (certified) or above the target;
// 2 when an uncertified interval contains the target.
int compare_to(const MonotoneFamily& family, double s, const Rational& target,
               const RotationOptions& opts) {
    const RotationResult r = rotation_at(family, s, opts);
    const double t = target.value();
    if (r.is_rational()) {
        if (r.rho == target) return 0;
        return r.rho < target ? -1 : 1;
    }
    if (r.hi < t) return -1;
    if (r.lo > t) return 1;
    // Uncertified and within 1/n of the target: no reliable side.
    return 2;
}



}  // namespace

Interval plateau_bounds(const MonotoneFamily& family, std::int64_t p, std::int64_t q,
                        Interval bracket, const PlateauOptions& opts) {
    const Rational target = Rational::reduced(p, q);
    auto cmp = [&](double s) { return compare_to(family, s, target, opts.rotation); };

    double lo = bracket.lo, hi = bracket.hi;
    double s0 = 0.0;
    bool found = false;
    const int c_lo = cmp(lo);
    if (c_lo == 0) {
        s0 = lo;
        found = true;
    } else if (c_lo == 1) {
        fail(ErrorCode::NotFound, "plateau_bounds: rotation number above target on the bracket");
    }
    if (!found) {
        const int c_hi = cmp(hi);
        if (c_hi == 0) {
            s0 = hi;
            found = true;
        } else if (c_hi == -1) {
            fail(ErrorCode::NotFound, "plateau_bounds: rotation number below target on the bracket");
        }
    }
    while (!found && hi - lo > opts.search_res) {
        const double mid = 0.5 * (lo + hi);
        int c = cmp(mid);
        if (c == 2) {
            // Ambiguous points sit next to the plateau; lean by the estimate.
            c = rotation_at(family, mid, opts.rotation).value() < target.value() ? -1 : 1;
        }
        if (c == 0) {
            s0 = mid;
            found = true;
        } else if (c < 0) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    if (!found) {
        fail(ErrorCode::NotFound, "plateau_bounds: no certified s for " + std::to_string(target.p) +
                                      "/" + std::to_string(target.q));
    }

    Interval out;
    if (s0 == bracket.lo || cmp(bracket.lo) == 0) {
        out.lo = bracket.lo;
    } else {
        double l = std::max(bracket.lo, lo), r = s0;
        if (cmp(l) == 0) l = bracket.lo;
        while (r - l > opts.width) {
            const double mid = 0.5 * (l + r);
            (cmp(mid) == 0 ? r : l) = mid;
        }
        out.lo = 0.5 * (l + r);
    }
    if (s0 == bracket.hi || cmp(bracket.hi) == 0) {
        out.hi = bracket.hi;
    } else {
        double l = s0, r = std::min(bracket.hi, hi);
        if (cmp(r) == 0) r = bracket.hi;
        while (r - l > opts.width) {
            const double mid = 0.5 * (l + r);
            (cmp(mid) == 0 ? l : r) = mid;
        }
        out.hi = 0.5 * (l + r);
    }
    return out;
}

double psi_N(const MonotoneFamily& family, double s, int N) {
    if (N < 1) fail(ErrorCode::InvalidArgument, "psi_N: N must be >= 1");
    MapPtr f = family.at(s);
    double sum = 0.0;
    for (double x : f->heights()) {
        for (int i = 1; i < N; ++i) x = f->eval(x);
        sum += x;
    }
    return sum;
}

std::vector<Rational> farey_between(double lo, double hi, std::int64_t q_max) {
    std::vector<Rational> out;
    for (std::int64_t q = 1; q <= q_max; ++q) {
        const auto p_lo = static_cast<std::int64_t>(std::ceil(lo * static_cast<double>(q) - 1e-12));
        const auto p_hi = static_cast<std::int64_t>(std::floor(hi * static_cast<double>(q) + 1e-12));
        for (std::int64_t p = p_lo; p <= p_hi; ++p) {
            if (std::gcd(p < 0 ? -p : p, q) == 1) out.push_back({p, q});
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

CoverResult cover_CN(const MonotoneFamily& family, int N, const PlateauOptions& opts,
                     const std::vector<double>& ds) {
    if (N < 1) fail(ErrorCode::InvalidArgument, "cover_CN: N must be >= 1");
    CoverResult out;
    out.N = N;
    const Interval range = family.s_range;
    const RotationResult r_lo = rotation_at(family, range.lo, opts.rotation);
    const RotationResult r_hi = rotation_at(family, range.hi, opts.rotation);
    const auto q_max = static_cast<std::int64_t>(family.m) * N;
    double cursor = range.lo;
    for (const Rational& t : farey_between(r_lo.lo, r_hi.hi, q_max)) {
        try {
            Interval pl = plateau_bounds(family, t.p, t.q, {cursor, range.hi}, opts);
            out.plateaus.push_back({t, pl});
            cursor = pl.hi;
        } catch (const Error& e) {
            if (e.code() != ErrorCode::NotFound) throw;
            out.empty.push_back(t);
        }
    }
    // Gaps narrower than the bisection width are not resolved and are dropped.
    const double min_gap = 2.0 * opts.width;
    double start = range.lo;
    for (const Plateau& pl : out.plateaus) {
        if (pl.s.lo - start > min_gap) out.c_n_intervals.push_back({start, pl.s.lo});
        start = std::max(start, pl.s.hi);
    }
    if (range.hi - start > min_gap) out.c_n_intervals.push_back({start, range.hi});
    for (double d : ds) {
        double sum = 0.0;
        for (const Interval& I : out.c_n_intervals) sum += std::pow(I.length(), d);
        out.m_d[d] = sum;
    }
    for (const Interval& I : out.c_n_intervals) out.diam = std::max(out.diam, I.length());
    return out;
}

SteepnessResult steepness_scan(const MonotoneFamily& family, Interval plateau, Side side,
                               const std::vector<double>& deltas, const RotationOptions& opts) {
    SteepnessResult out;
    const RotationResult mid = rotation_at(family, 0.5 * (plateau.lo + plateau.hi), opts);
    if (!mid.is_rational()) {
        fail(ErrorCode::NotFound, "steepness_scan: plateau midpoint has no certificate");
    }
    out.rho = mid.rho;
    out.endpoint = side == Side::Right ? plateau.hi : plateau.lo;
    out.D = std::log(family.lambda) / (4.0 * static_cast<double>(family.m));
    double num = 0.0, den = 0.0;
    double prev = 0.0;
    for (double ds : deltas) {
        if (!(ds > 0.0)) fail(ErrorCode::InvalidArgument, "steepness_scan: deltas must be positive");
        if (prev > 0.0 && !(ds < prev)) {
            fail(ErrorCode::InvalidArgument, "steepness_scan: deltas must be decreasing");
        }
        prev = ds;
        const double s = side == Side::Right ? out.endpoint + ds : out.endpoint - ds;
        const RotationResult r = rotation_at(family, s, opts);
        SteepnessPoint pt;
        pt.delta_s = ds;
        pt.delta_rho = std::abs(r.value() - out.rho.value());
        const double L = std::abs(std::log(ds));
        pt.c = pt.delta_rho * L;
        pt.bound = out.D / (static_cast<double>(out.rho.q) * L);
        pt.bound_ok = pt.delta_rho > pt.bound;
        out.points.push_back(pt);
        num += pt.delta_rho / L;
        den += 1.0 / (L * L);
    }
    out.fitted_c = den > 0.0 ? num / den : 0.0;
    return out;
}

HausdorffResult hausdorff_estimate(const MonotoneFamily& family, int N_max,
                                   const PlateauOptions& opts, const std::vector<double>& ds) {
    if (N_max < 3) fail(ErrorCode::InvalidArgument, "hausdorff_estimate: N_max must be >= 3");
    HausdorffResult out;
    for (int N = 1; N <= N_max; ++N) out.covers.push_back(cover_CN(family, N, opts, ds));
    for (double d : ds) {
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        int n = 0;
        for (const CoverResult& c : out.covers) {
            const double v = c.m_d.at(d);
            out.rows.push_back({d, c.N, v});
            if (v > 0.0) {
                const double x = c.N, y = std::log(v);
                sx += x;
                sy += y;
                sxx += x * x;
                sxy += x * y;
                ++n;
            }
        }
        out.slope[d] = n >= 2 ? (n * sxy - sx * sy) / (n * sxx - sx * sx) : 0.0;
    }
    return out;
}

}  // namespace cellflow::circlemap
