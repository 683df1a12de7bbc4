#ifndef CELLFLOW_CELLFLOW_H
#define CELLFLOW_CELLFLOW_H

/* C interface to the cellflow library: inertial particles in a forced
 * cellular flow, their return maps on the vertical sections, and rotation
 * numbers of the resulting circle maps with flat spots.
 *
 * Every call returns a cf_status. On failure the message of the most recent
 * error on the calling thread is available from cf_last_error(). Handles are
 * opaque, owned by the caller and released with the matching *_free call;
 * freeing NULL is a no-op. */

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define CF_API __declspec(dllexport)
#elif defined(__GNUC__)
#define CF_API __attribute__((visibility("default")))
#else
#define CF_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum cf_status {
    CF_OK = 0,
    CF_DOMAIN_ERROR = 1,
    CF_NON_CONVERGENCE = 2,
    CF_ON_LINE = 3,
    CF_STEP_FAILURE = 4,
    CF_NO_EVENT = 5,
    CF_NOT_CLOSED = 6,
    CF_SEPARATRIX_HIT = 7,
    CF_TOPOLOGY_ERROR = 8,
    CF_NOT_FOUND = 9,
    CF_UNBOUNDED_DETECTION_FAILURE = 10,
    CF_INVALID_ARGUMENT = 11,
    CF_IO_ERROR = 12,
    CF_INTERNAL = 99
} cf_status;

/* Forcing (a, b) and inertia epsilon. */
typedef struct cf_params {
    double a;
    double b;
    double epsilon;
} cf_params;

CF_API const char* cf_version(void);
CF_API const char* cf_status_name(cf_status status);
/* Message of the last failed call on this thread, "" if none. */
CF_API const char* cf_last_error(void);
/* Relative and absolute tolerances of the trajectory integrations. */
CF_API void cf_integrator_tolerances(double* rtol, double* atol);

/* ---- unperturbed Hamiltonian flow ---- */

CF_API cf_status cf_hamiltonian(cf_params p, double x, double y, double* h);
CF_API cf_status cf_velocity(cf_params p, double x, double y, double out[2]);
CF_API cf_status cf_k_constant(cf_params p, double* k);

/* Saddle near lattice node (pi/2 + pi k1, pi/2 + pi k2). parity: 1 odd, 0 even. */
CF_API cf_status cf_saddle_at(cf_params p, int k1, int k2, double pos[2], double* h,
                              int* parity);

typedef struct cf_chess_path cf_chess_path;

/* Path of n_turns turns starting along the edge from node (k1, k2) in
 * direction (dk1, dk2) on the level h0. */
CF_API cf_status cf_chess_path_create(cf_params p, int k1, int k2, int dk1, int dk2, double h0,
                                      int n_turns, cf_chess_path** out);
CF_API void cf_chess_path_free(cf_chess_path* path);
/* n_turns + 2 vertices. */
CF_API size_t cf_chess_path_vertex_count(const cf_chess_path* path);
CF_API cf_status cf_chess_path_vertex(const cf_chess_path* path, size_t i, int* k1, int* k2);
/* NUL-terminated string of 'L' / 'R', one per turn. */
CF_API const char* cf_chess_path_turns(const cf_chess_path* path);
CF_API cf_status cf_chess_path_lines(const cf_chess_path* path, double* c_odd, double* c_even);

/* ---- inertial particle ---- */

typedef struct cf_trajectory cf_trajectory;

/* 4D run from state (x, y, u, v); samples every sample_dt (0: every step). */
CF_API cf_status cf_simulate(cf_params p, const double initial[4], double t_end, double sample_dt,
                             cf_trajectory** out);
CF_API void cf_trajectory_free(cf_trajectory* traj);
CF_API size_t cf_trajectory_size(const cf_trajectory* traj);
CF_API cf_status cf_trajectory_sample(const cf_trajectory* traj, size_t i, double* t,
                                      double state[4]);

/* Least-squares drift slope of y against x over the second half of the run. */
CF_API cf_status cf_drift_slope(cf_params p, const double initial[4], double t_end,
                                double* slope, double* displacement);

/* Integral of div f and the area inside the closed epsilon = 0 orbit of the
 * central cell on Hamiltonian level `level`. */
CF_API cf_status cf_area_check(cf_params p, double level, double* integral, double* area);

/* ---- return maps on the sections ---- */

typedef struct cf_section cf_section;

/* Builds the saddles, flat spots and inverse map for one parameter point. */
CF_API cf_status cf_section_create(cf_params p, cf_section** out);
CF_API void cf_section_free(cf_section* sec);
/* Forward map from x = -pi/2 to x = pi/2; derivative may be NULL. */
CF_API cf_status cf_section_forward(const cf_section* sec, double z, double* value,
                                    double* derivative);
/* Inverse map extended by the flat spots; derivative may be NULL. */
CF_API cf_status cf_section_inverse(const cf_section* sec, double z, double* value,
                                    double* derivative);
CF_API cf_status cf_section_flat_spots(const cf_section* sec, double lo[2], double hi[2],
                                       double heights[2]);

/* ---- rotation numbers ---- */

typedef struct cf_rotation_options {
    int q_max;
    int64_t n_max;
    double spot_tol;
} cf_rotation_options;

typedef struct cf_rotation {
    int is_rational;
    int64_t p; /* valid when is_rational */
    int64_t q;
    double lo; /* enclosure, equal to p/q when rational */
    double hi;
    int64_t iterations;
} cf_rotation;

CF_API cf_rotation_options cf_rotation_defaults(void);

/* Rotation number of the inverse map of a section. opts may be NULL. */
CF_API cf_status cf_section_rotation(const cf_section* sec, const cf_rotation_options* opts,
                                     cf_rotation* out);

typedef struct cf_family cf_family;

/* Piecewise-linear family: flat on [0, flat_fraction], given slope after, shifted by s. */
CF_API cf_status cf_family_boyd(double flat_fraction, double slope, cf_family** out);
/* Inverse maps at a = -s for fixed b and epsilon, s in [s_lo, s_hi]. */
CF_API cf_status cf_family_dynamics(double b, double epsilon, double s_lo, double s_hi,
                                    cf_family** out);
CF_API void cf_family_free(cf_family* fam);
CF_API cf_status cf_family_range(const cf_family* fam, double* s_lo, double* s_hi);
CF_API cf_status cf_family_eval(const cf_family* fam, double s, double x, double* out);
CF_API cf_status cf_family_rotation(const cf_family* fam, double s,
                                    const cf_rotation_options* opts, cf_rotation* out);
CF_API cf_status cf_family_rotation_brute_force(const cf_family* fam, double s, double x0,
                                                int64_t n, double* out);
/* Interval of s where the rotation number is p/q, searched inside [lo, hi]. */
CF_API cf_status cf_family_plateau(const cf_family* fam, int64_t p, int64_t q, double lo,
                                   double hi, double width, double out[2]);

typedef struct cf_hausdorff cf_hausdorff;

/* Covers for N = 1..n_max with the exponents d[0..n_d). */
CF_API cf_status cf_hausdorff_create(const cf_family* fam, int n_max, const double* d,
                                     size_t n_d, double width, cf_hausdorff** out);
CF_API void cf_hausdorff_free(cf_hausdorff* h);
CF_API size_t cf_hausdorff_row_count(const cf_hausdorff* h);
CF_API cf_status cf_hausdorff_row(const cf_hausdorff* h, size_t i, int* n, double* d,
                                  double* m_d);
/* diam and plateau count of the cover for N. */
CF_API cf_status cf_hausdorff_cover(const cf_hausdorff* h, int n, double* diam,
                                    size_t* n_plateaus, size_t* n_gaps);
CF_API cf_status cf_hausdorff_slope(const cf_hausdorff* h, double d, double* slope);

/* ---- sweeps ---- */

typedef struct cf_staircase cf_staircase;

typedef struct cf_staircase_row {
    double alpha;
    double s;
    int has_rotation;
    cf_rotation rotation;
    double m;
    double m_lo;
    double m_hi;
    const char* status; /* "ok" or an error name; owned by the table */
} cf_staircase_row;

CF_API cf_status cf_staircase_run(double b, double epsilon, double alpha_lo, double alpha_hi,
                                  int resolution, int q_cap, const cf_rotation_options* opts,
                                  cf_staircase** out);
CF_API void cf_staircase_free(cf_staircase* t);
CF_API size_t cf_staircase_row_count(const cf_staircase* t);
CF_API cf_status cf_staircase_get_row(const cf_staircase* t, size_t i, cf_staircase_row* out);
CF_API size_t cf_staircase_plateau_count(const cf_staircase* t);
/* Plateau i: drift slope m_p/m_q on [alpha_lo, alpha_hi]. */
CF_API cf_status cf_staircase_plateau(const cf_staircase* t, size_t i, int64_t* m_p, int64_t* m_q,
                                      double* alpha_lo, double* alpha_hi);
CF_API double cf_staircase_coverage(const cf_staircase* t, int64_t q_max);
CF_API double cf_staircase_max_decrease(const cf_staircase* t);

typedef struct cf_tongues cf_tongues;

typedef struct cf_tongue_cell {
    double alpha;
    double epsilon;
    int has_rotation;
    cf_rotation rotation;
    int has_slope; /* certified drift slope m_p / m_q */
    int64_t m_p;
    int64_t m_q;
    const char* status;
} cf_tongue_cell;

/* targets holds n_targets pairs (m_p, m_q). */
CF_API cf_status cf_tongues_run(double b, double alpha_lo, double alpha_hi, double eps_lo,
                                double eps_hi, const int64_t* targets, size_t n_targets,
                                int n_alpha, int n_epsilon, const cf_rotation_options* opts,
                                cf_tongues** out);
CF_API void cf_tongues_free(cf_tongues* t);
CF_API size_t cf_tongues_cell_count(const cf_tongues* t);
CF_API cf_status cf_tongues_cell(const cf_tongues* t, size_t i, cf_tongue_cell* out);
CF_API size_t cf_tongues_region_count(const cf_tongues* t);
CF_API cf_status cf_tongues_region(const cf_tongues* t, size_t k, int64_t* m_p, int64_t* m_q,
                                   double* area, size_t* n_slices);
/* Slice j of region k: found = 0 when the tongue misses this epsilon. */
CF_API cf_status cf_tongues_slice(const cf_tongues* t, size_t k, size_t j, double* epsilon,
                                  int* found, double* alpha_lo, double* alpha_hi);

#ifdef __cplusplus
}
#endif

#endif
