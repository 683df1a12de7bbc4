#include "cellflow/cellflow.h"

#include <cmath>
#include <memory>
#include <string>

#include "circlemap.hpp"
#include "errors.hpp"
#include "hamflow.hpp"
#include "inertial.hpp"
#include "poincare.hpp"
#include "sweep.hpp"

using namespace cellflow;

struct cf_chess_path {
    hamflow::ChessPath path;
    std::string turns;
};

struct cf_trajectory {
    std::vector<inertial::TimedState4> samples;
};

struct cf_section {
    std::unique_ptr<poincare::InverseMap> inverse;
};

struct cf_family {
    circlemap::MonotoneFamily family;
};

struct cf_hausdorff {
    circlemap::HausdorffResult result;
};

struct cf_staircase {
    sweep::StaircaseTable table;
};

struct cf_tongues {
    sweep::TongueScan scan;
};

namespace {

thread_local std::string g_last_error;

template <class F>
cf_status guarded(F&& f) {
    try {
        f();
        g_last_error.clear();
        return CF_OK;
    } catch (const Error& e) {
        g_last_error = e.what();
        return static_cast<cf_status>(e.code());
    } catch (const std::exception& e) {
        g_last_error = e.what();
        return CF_INTERNAL;
    } catch (...) {
        g_last_error = "unknown exception";
        return CF_INTERNAL;
    }
}

void require(bool ok, const char* what) {
    if (!ok) fail(ErrorCode::InvalidArgument, std::string("null or invalid argument: ") + what);
}

ForcingParams to_params(cf_params p) { return {p.a, p.b, p.epsilon}; }

circlemap::RotationOptions to_rotation(const cf_rotation_options* o,
                                       circlemap::RotationOptions base = {}) {
    if (!o) return base;
    require(o->q_max > 0 && o->n_max > 0 && o->spot_tol >= 0.0, "rotation options");
    base.q_max = o->q_max;
    base.n_max = o->n_max;
    base.spot_tol = o->spot_tol;
    return base;
}

cf_rotation from_rotation(const circlemap::RotationResult& r) {
    cf_rotation out{};
    out.is_rational = r.is_rational() ? 1 : 0;
    out.p = r.rho.p;
    out.q = r.rho.q;
    out.lo = r.lo;
    out.hi = r.hi;
    out.iterations = r.iterations;
    return out;
}

}  // namespace

extern "C" {

const char* cf_version(void) { return "1.0.0"; }

const char* cf_status_name(cf_status status) {
    return error_code_name(static_cast<ErrorCode>(status));
}

const char* cf_last_error(void) { return g_last_error.c_str(); }

void cf_integrator_tolerances(double* rtol, double* atol) {
    const poincare::PoincareOptions d;
    if (rtol) *rtol = d.rtol;
    if (atol) *atol = d.atol;
}

cf_status cf_hamiltonian(cf_params p, double x, double y, double* h) {
    return guarded([&] {
        require(h, "h");
        *h = hamflow::hamiltonian({x, y}, to_params(p));
    });
}

cf_status cf_velocity(cf_params p, double x, double y, double out[2]) {
    return guarded([&] {
        require(out, "out");
        const Vec2 v = hamflow::velocity({x, y}, to_params(p));
        out[0] = v.x;
        out[1] = v.y;
    });
}

cf_status cf_k_constant(cf_params p, double* k) {
    return guarded([&] {
        require(k, "k");
        *k = hamflow::k_constant(to_params(p));
    });
}

cf_status cf_saddle_at(cf_params p, int k1, int k2, double pos[2], double* h, int* parity) {
    return guarded([&] {
        require(pos && h && parity, "outputs");
        const hamflow::SaddlePoint s = hamflow::saddle_at({k1, k2}, to_params(p));
        pos[0] = s.position.x;
        pos[1] = s.position.y;
        *h = s.h_value;
        *parity = s.parity == hamflow::Parity::Odd ? 1 : 0;
    });
}

cf_status cf_chess_path_create(cf_params p, int k1, int k2, int dk1, int dk2, double h0,
                               int n_turns, cf_chess_path** out) {
    return guarded([&] {
        require(out, "out");
        require(n_turns >= 0, "n_turns");
        auto path = std::make_unique<cf_chess_path>();
        path->path = hamflow::chess_path({{k1, k2}, dk1, dk2}, to_params(p), h0, n_turns);
        for (auto t : path->path.turns) path->turns.push_back(hamflow::turn_char(t));
        *out = path.release();
    });
}

void cf_chess_path_free(cf_chess_path* path) { delete path; }

size_t cf_chess_path_vertex_count(const cf_chess_path* path) {
    return path ? path->path.vertices.size() : 0;
}

cf_status cf_chess_path_vertex(const cf_chess_path* path, size_t i, int* k1, int* k2) {
    return guarded([&] {
        require(path && k1 && k2, "arguments");
        require(i < path->path.vertices.size(), "vertex index");
        *k1 = path->path.vertices[i].k1;
        *k2 = path->path.vertices[i].k2;
    });
}

const char* cf_chess_path_turns(const cf_chess_path* path) {
    return path ? path->turns.c_str() : "";
}

cf_status cf_chess_path_lines(const cf_chess_path* path, double* c_odd, double* c_even) {
    return guarded([&] {
        require(path && c_odd && c_even, "arguments");
        *c_odd = path->path.lines.c_odd;
        *c_even = path->path.lines.c_even;
    });
}

cf_status cf_simulate(cf_params p, const double initial[4], double t_end, double sample_dt,
                      cf_trajectory** out) {
    return guarded([&] {
        require(initial && out, "arguments");
        require(sample_dt >= 0.0, "sample_dt");
        inertial::Mr4dOptions opts;
        opts.sample_dt = sample_dt;
        auto traj = std::make_unique<cf_trajectory>();
        traj->samples = inertial::integrate_mr4d({initial[0], initial[1], initial[2], initial[3]},
                                                 to_params(p), t_end, opts);
        *out = traj.release();
    });
}

void cf_trajectory_free(cf_trajectory* traj) { delete traj; }

size_t cf_trajectory_size(const cf_trajectory* traj) { return traj ? traj->samples.size() : 0; }

cf_status cf_trajectory_sample(const cf_trajectory* traj, size_t i, double* t, double state[4]) {
    return guarded([&] {
        require(traj && t && state, "arguments");
        require(i < traj->samples.size(), "sample index");
        const auto& s = traj->samples[i];
        *t = s.t;
        state[0] = s.s.x;
        state[1] = s.s.y;
        state[2] = s.s.vx;
        state[3] = s.s.vy;
    });
}

cf_status cf_drift_slope(cf_params p, const double initial[4], double t_end, double* slope,
                         double* displacement) {
    return guarded([&] {
        require(initial && slope, "arguments");
        const poincare::DriftResult r = poincare::empirical_drift_slope(
            {initial[0], initial[1], initial[2], initial[3]}, to_params(p), t_end);
        *slope = r.slope;
        if (displacement) *displacement = r.displacement;
    });
}

cf_status cf_area_check(cf_params p, double level, double* integral, double* area) {
    return guarded([&] {
        require(integral && area, "arguments");
        const inertial::AreaCheck r = inertial::divergence_area_check(level, to_params(p));
        *integral = r.integral;
        *area = r.area;
    });
}

cf_status cf_section_create(cf_params p, cf_section** out) {
    return guarded([&] {
        require(out, "out");
        poincare::Transversal tr(to_params(p));
        poincare::FlatSpotData fs = poincare::locate_flat_spots(tr);
        auto sec = std::make_unique<cf_section>();
        sec->inverse = std::make_unique<poincare::InverseMap>(tr, fs);
        *out = sec.release();
    });
}

void cf_section_free(cf_section* sec) { delete sec; }

cf_status cf_section_forward(const cf_section* sec, double z, double* value, double* derivative) {
    return guarded([&] {
        require(sec && value, "arguments");
        const poincare::ReturnMapSample r = poincare::return_map_P(z, sec->inverse->transversal());
        *value = r.z_out;
        if (derivative) *derivative = r.derivative;
    });
}

cf_status cf_section_inverse(const cf_section* sec, double z, double* value, double* derivative) {
    return guarded([&] {
        require(sec && value, "arguments");
        *value = sec->inverse->eval(z);
        if (derivative) *derivative = sec->inverse->derivative(z);
    });
}

cf_status cf_section_flat_spots(const cf_section* sec, double lo[2], double hi[2],
                                double heights[2]) {
    return guarded([&] {
        require(sec && lo && hi && heights, "arguments");
        const poincare::FlatSpotData& fs = sec->inverse->spots();
        for (int j = 0; j < 2; ++j) {
            lo[j] = fs.spots[j].lo;
            hi[j] = fs.spots[j].hi;
            heights[j] = fs.heights[j];
        }
    });
}

cf_rotation_options cf_rotation_defaults(void) {
    const circlemap::RotationOptions d;
    return {d.q_max, d.n_max, d.spot_tol};
}

cf_status cf_section_rotation(const cf_section* sec, const cf_rotation_options* opts,
                              cf_rotation* out) {
    return guarded([&] {
        require(sec && out, "arguments");
        const poincare::FlatSpotData& fs = sec->inverse->spots();
        const poincare::InverseMap* q = sec->inverse.get();
        circlemap::FlatSpotCircleMap map(
            {{fs.spots[0].lo, fs.spots[0].hi}, {fs.spots[1].lo, fs.spots[1].hi}},
            {fs.heights[0], fs.heights[1]}, [q](double z) { return q->eval(z); });
        *out = from_rotation(circlemap::rotation_number(map, to_rotation(opts)));
    });
}

cf_status cf_family_boyd(double flat_fraction, double slope, cf_family** out) {
    return guarded([&] {
        require(out, "out");
        auto fam = std::make_unique<cf_family>();
        fam->family = circlemap::make_boyd_family(flat_fraction, slope);
        fam->family.cache = std::make_shared<circlemap::OrbitCache>();
        *out = fam.release();
    });
}

cf_status cf_family_dynamics(double b, double epsilon, double s_lo, double s_hi,
                             cf_family** out) {
    return guarded([&] {
        require(out, "out");
        auto fam = std::make_unique<cf_family>();
        fam->family = sweep::make_dynamics_family(b, epsilon, {s_lo, s_hi});
        *out = fam.release();
    });
}

void cf_family_free(cf_family* fam) { delete fam; }

cf_status cf_family_range(const cf_family* fam, double* s_lo, double* s_hi) {
    return guarded([&] {
        require(fam && s_lo && s_hi, "arguments");
        *s_lo = fam->family.s_range.lo;
        *s_hi = fam->family.s_range.hi;
    });
}

cf_status cf_family_eval(const cf_family* fam, double s, double x, double* out) {
    return guarded([&] {
        require(fam && out, "arguments");
        *out = fam->family.at(s)->eval(x);
    });
}

cf_status cf_family_rotation(const cf_family* fam, double s, const cf_rotation_options* opts,
                             cf_rotation* out) {
    return guarded([&] {
        require(fam && out, "arguments");
        *out = from_rotation(circlemap::rotation_at(fam->family, s, to_rotation(opts)));
    });
}

cf_status cf_family_rotation_brute_force(const cf_family* fam, double s, double x0, int64_t n,
                                         double* out) {
    return guarded([&] {
        require(fam && out && n > 0, "arguments");
        *out = circlemap::rotation_brute_force(*fam->family.at(s), x0, n);
    });
}

cf_status cf_family_plateau(const cf_family* fam, int64_t p, int64_t q, double lo, double hi,
                            double width, double out[2]) {
    return guarded([&] {
        require(fam && out && q > 0 && width > 0.0 && hi >= lo, "arguments");
        circlemap::PlateauOptions opts;
        opts.width = width;
        const circlemap::Interval r = circlemap::plateau_bounds(fam->family, p, q, {lo, hi}, opts);
        out[0] = r.lo;
        out[1] = r.hi;
    });
}

cf_status cf_hausdorff_create(const cf_family* fam, int n_max, const double* d, size_t n_d,
                              double width, cf_hausdorff** out) {
    return guarded([&] {
        require(fam && out && width > 0.0, "arguments");
        require(n_d == 0 || d, "d");
        std::vector<double> ds(d, d + n_d);
        if (ds.empty()) ds = {1.0, 0.5, 0.2, 0.1};
        circlemap::PlateauOptions opts;
        opts.width = width;
        auto h = std::make_unique<cf_hausdorff>();
        h->result = circlemap::hausdorff_estimate(fam->family, n_max, opts, ds);
        *out = h.release();
    });
}

void cf_hausdorff_free(cf_hausdorff* h) { delete h; }

size_t cf_hausdorff_row_count(const cf_hausdorff* h) { return h ? h->result.rows.size() : 0; }

cf_status cf_hausdorff_row(const cf_hausdorff* h, size_t i, int* n, double* d, double* m_d) {
    return guarded([&] {
        require(h && n && d && m_d, "arguments");
        require(i < h->result.rows.size(), "row index");
        const auto& r = h->result.rows[i];
        *n = r.N;
        *d = r.d;
        *m_d = r.m_d;
    });
}

cf_status cf_hausdorff_cover(const cf_hausdorff* h, int n, double* diam, size_t* n_plateaus,
                             size_t* n_gaps) {
    return guarded([&] {
        require(h && diam && n_plateaus && n_gaps, "arguments");
        for (const auto& c : h->result.covers) {
            if (c.N != n) continue;
            *diam = c.diam;
            *n_plateaus = c.plateaus.size();
            *n_gaps = c.c_n_intervals.size();
            return;
        }
        fail(ErrorCode::NotFound, "no cover for N = " + std::to_string(n));
    });
}

cf_status cf_hausdorff_slope(const cf_hausdorff* h, double d, double* slope) {
    return guarded([&] {
        require(h && slope, "arguments");
        const auto it = h->result.slope.find(d);
        if (it == h->result.slope.end()) fail(ErrorCode::NotFound, "no slope for this exponent");
        *slope = it->second;
    });
}

cf_status cf_staircase_run(double b, double epsilon, double alpha_lo, double alpha_hi,
                           int resolution, int q_cap, const cf_rotation_options* opts,
                           cf_staircase** out) {
    return guarded([&] {
        require(out, "out");
        sweep::StaircaseOptions so;
        so.q_cap = q_cap;
        so.rotation = to_rotation(opts, so.rotation);
        auto t = std::make_unique<cf_staircase>();
        t->table = sweep::staircase_sweep(b, epsilon, {alpha_lo, alpha_hi}, resolution, so);
        *out = t.release();
    });
}

void cf_staircase_free(cf_staircase* t) { delete t; }

size_t cf_staircase_row_count(const cf_staircase* t) { return t ? t->table.rows.size() : 0; }

cf_status cf_staircase_get_row(const cf_staircase* t, size_t i, cf_staircase_row* out) {
    return guarded([&] {
        require(t && out, "arguments");
        require(i < t->table.rows.size(), "row index");
        const sweep::StaircaseRow& r = t->table.rows[i];
        *out = cf_staircase_row{};
        out->alpha = r.alpha;
        out->s = r.s;
        out->has_rotation = r.rotation ? 1 : 0;
        if (r.rotation) out->rotation = from_rotation(*r.rotation);
        out->m = r.m;
        out->m_lo = r.m_lo;
        out->m_hi = r.m_hi;
        out->status = r.status.c_str();
    });
}

size_t cf_staircase_plateau_count(const cf_staircase* t) {
    return t ? t->table.plateaus.size() : 0;
}

cf_status cf_staircase_plateau(const cf_staircase* t, size_t i, int64_t* m_p, int64_t* m_q,
                               double* alpha_lo, double* alpha_hi) {
    return guarded([&] {
        require(t && m_p && m_q && alpha_lo && alpha_hi, "arguments");
        require(i < t->table.plateaus.size(), "plateau index");
        const auto& pl = t->table.plateaus[i];
        *m_p = pl.m.p;
        *m_q = pl.m.q;
        *alpha_lo = pl.alpha.lo;
        *alpha_hi = pl.alpha.hi;
    });
}

double cf_staircase_coverage(const cf_staircase* t, int64_t q_max) {
    return t ? t->table.coverage(q_max) : NAN;
}

double cf_staircase_max_decrease(const cf_staircase* t) {
    return t ? t->table.max_decrease() : NAN;
}

cf_status cf_tongues_run(double b, double alpha_lo, double alpha_hi, double eps_lo, double eps_hi,
                         const int64_t* targets, size_t n_targets, int n_alpha, int n_epsilon,
                         const cf_rotation_options* opts, cf_tongues** out) {
    return guarded([&] {
        require(out, "out");
        require(n_targets == 0 || targets, "targets");
        std::vector<circlemap::Rational> ts;
        for (size_t k = 0; k < n_targets; ++k) {
            require(targets[2 * k + 1] > 0, "target denominator");
            ts.push_back(circlemap::Rational::reduced(targets[2 * k], targets[2 * k + 1]));
        }
        sweep::TongueOptions to;
        to.rotation = to_rotation(opts, to.rotation);
        auto t = std::make_unique<cf_tongues>();
        t->scan = sweep::tongue_scan(b, {alpha_lo, alpha_hi}, {eps_lo, eps_hi}, ts, n_alpha,
                                     n_epsilon, to);
        *out = t.release();
    });
}

void cf_tongues_free(cf_tongues* t) { delete t; }

size_t cf_tongues_cell_count(const cf_tongues* t) { return t ? t->scan.cells.size() : 0; }

cf_status cf_tongues_cell(const cf_tongues* t, size_t i, cf_tongue_cell* out) {
    return guarded([&] {
        require(t && out, "arguments");
        require(i < t->scan.cells.size(), "cell index");
        const sweep::TongueCell& c = t->scan.cells[i];
        *out = cf_tongue_cell{};
        out->alpha = c.alpha;
        out->epsilon = c.epsilon;
        out->has_rotation = c.rotation ? 1 : 0;
        if (c.rotation) out->rotation = from_rotation(*c.rotation);
        out->has_slope = c.m ? 1 : 0;
        if (c.m) {
            out->m_p = c.m->p;
            out->m_q = c.m->q;
        }
        out->status = c.status.c_str();
    });
}

size_t cf_tongues_region_count(const cf_tongues* t) { return t ? t->scan.tongues.size() : 0; }

cf_status cf_tongues_region(const cf_tongues* t, size_t k, int64_t* m_p, int64_t* m_q,
                            double* area, size_t* n_slices) {
    return guarded([&] {
        require(t && m_p && m_q && area && n_slices, "arguments");
        require(k < t->scan.tongues.size(), "region index");
        const auto& r = t->scan.tongues[k];
        *m_p = r.target.p;
        *m_q = r.target.q;
        *area = r.area;
        *n_slices = r.slices.size();
    });
}

cf_status cf_tongues_slice(const cf_tongues* t, size_t k, size_t j, double* epsilon, int* found,
                           double* alpha_lo, double* alpha_hi) {
    return guarded([&] {
        require(t && epsilon && found && alpha_lo && alpha_hi, "arguments");
        require(k < t->scan.tongues.size(), "region index");
        const auto& r = t->scan.tongues[k];
        require(j < r.slices.size(), "slice index");
        const auto& s = r.slices[j];
        *epsilon = s.epsilon;
        *found = s.alpha ? 1 : 0;
        *alpha_lo = s.alpha ? s.alpha->lo : NAN;
        *alpha_hi = s.alpha ? s.alpha->hi : NAN;
    });
}

}  // extern "C"
