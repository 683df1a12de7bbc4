#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <cstring>
#include <string>
#include <thread>

#include "cellflow/cellflow.h"

namespace {
const double kPi = 3.14159265358979323846;
}

TEST_CASE("version and status names") {
    CHECK(std::string(cf_version()) == "1.0.0");
    CHECK(std::string(cf_status_name(CF_OK)) == "Ok");
    CHECK(std::string(cf_status_name(CF_DOMAIN_ERROR)) == "DomainError");
    CHECK(std::string(cf_status_name(CF_SEPARATRIX_HIT)) == "SeparatrixHit");
    double rtol = 0, atol = 0;
    cf_integrator_tolerances(&rtol, &atol);
    CHECK(rtol == 1e-10);
    CHECK(atol == 1e-12);
}

TEST_CASE("field evaluation") {
    const cf_params p{0.05, 0.05, 0.0};
    double h = 0;
    REQUIRE(cf_hamiltonian(p, 0.0, 0.0, &h) == CF_OK);
    CHECK(h == doctest::Approx(1.0));
    double v[2];
    REQUIRE(cf_velocity(p, kPi / 2, 0.0, v) == CF_OK);
    CHECK(v[0] == doctest::Approx(0.05));
    CHECK(v[1] == doctest::Approx(1.05));
    double k = 0;
    REQUIRE(cf_k_constant(p, &k) == CF_OK);
    CHECK(k == doctest::Approx(-0.00250209).epsilon(1e-6));
    double pos[2];
    int parity = -1;
    REQUIRE(cf_saddle_at(p, 0, -1, pos, &h, &parity) == CF_OK);
    CHECK(pos[0] == doctest::Approx(1.62087).epsilon(1e-5));
    CHECK(parity == 1);
}

TEST_CASE("errors set the status and the last-error text") {
    double k = 0;
    CHECK(cf_k_constant(cf_params{0.6, 0.6, 0.0}, &k) == CF_DOMAIN_ERROR);
    CHECK(std::strlen(cf_last_error()) > 0);
    CHECK(cf_k_constant(cf_params{0.0, 0.1, 0.0}, nullptr) == CF_INVALID_ARGUMENT);
    CHECK(cf_k_constant(cf_params{0.0, 0.1, 0.0}, &k) == CF_OK);
    CHECK(std::string(cf_last_error()).empty());

    // The last error is per thread.
    std::string other;
    std::thread t([&] {
        double kk;
        cf_k_constant(cf_params{0.6, 0.6, 0.0}, &kk);
        other = cf_last_error();
    });
    t.join();
    CHECK_FALSE(other.empty());
    CHECK(std::string(cf_last_error()).empty());
}

TEST_CASE("chess path handle") {
    const cf_params p{0.05, 0.05, 0.0};
    cf_chess_path* path = nullptr;
    REQUIRE(cf_chess_path_create(p, 0, 0, 1, 0, -100.0, 4, &path) == CF_OK);
    CHECK(cf_chess_path_vertex_count(path) == 6);
    CHECK(std::string(cf_chess_path_turns(path)) == "RRRR");
    int k1, k2;
    REQUIRE(cf_chess_path_vertex(path, 4, &k1, &k2) == CF_OK);
    CHECK(k1 == 0);
    CHECK(k2 == 0);
    CHECK(cf_chess_path_vertex(path, 6, &k1, &k2) == CF_INVALID_ARGUMENT);
    double co, ce;
    REQUIRE(cf_chess_path_lines(path, &co, &ce) == CF_OK);
    CHECK(ce - co == doctest::Approx(2 * -0.00250209).epsilon(1e-5));
    cf_chess_path_free(path);
    cf_chess_path_free(nullptr);

    CHECK(cf_chess_path_create(p, 0, 0, 1, 1, 0.0, 4, &path) == CF_INVALID_ARGUMENT);
}

TEST_CASE("trajectory handle") {
    const cf_params p{0.05, 0.05, 1.0 / 25};
    const double init[4] = {0.3, 0.2, 0.0, 0.0};
    cf_trajectory* tr = nullptr;
    REQUIRE(cf_simulate(p, init, 10.0, 1.0, &tr) == CF_OK);
    REQUIRE(cf_trajectory_size(tr) == 11);
    double t, s[4];
    REQUIRE(cf_trajectory_sample(tr, 10, &t, s) == CF_OK);
    CHECK(t == doctest::Approx(10.0));
    CHECK(cf_trajectory_sample(tr, 11, &t, s) == CF_INVALID_ARGUMENT);
    cf_trajectory_free(tr);

    CHECK(cf_simulate(cf_params{0.05, 0.05, 1e-6}, init, 10.0, 1.0, &tr) == CF_DOMAIN_ERROR);
    double slope, disp;
    CHECK(cf_drift_slope(cf_params{0.001, 0.001, 0.04}, init, 200.0, &slope, &disp) == CF_UNBOUNDED_DETECTION_FAILURE);
}

TEST_CASE("section handle") {
    const cf_params p{0.05, 0.05, 1.0 / 25};
    cf_section* sec = nullptr;
    REQUIRE(cf_section_create(p, &sec) == CF_OK);
    double lo[2], hi[2], heights[2];
    REQUIRE(cf_section_flat_spots(sec, lo, hi, heights) == CF_OK);
    double v, d;
    REQUIRE(cf_section_inverse(sec, 0.5 * (lo[0] + hi[0]), &v, &d) == CF_OK);
    CHECK(v == heights[0]);
    CHECK(d == 0.0);
    REQUIRE(cf_section_inverse(sec, 0.5 * (hi[0] + lo[1]), &v, nullptr) == CF_OK);
    double back;
    REQUIRE(cf_section_forward(sec, v, &back, &d) == CF_OK);
    CHECK(back == doctest::Approx(0.5 * (hi[0] + lo[1])).epsilon(1e-8));
    CHECK(d > 0.0);
    CHECK(cf_section_forward(sec, heights[0], &back, &d) == CF_SEPARATRIX_HIT);
    cf_rotation r;
    REQUIRE(cf_section_rotation(sec, nullptr, &r) == CF_OK);
    CHECK(r.is_rational == 1);
    CHECK(r.p == 0);
    CHECK(r.q == 1);
    cf_section_free(sec);

    CHECK(cf_section_create(cf_params{0.05, -0.05, 0.04}, &sec) == CF_DOMAIN_ERROR);
}

TEST_CASE("boyd family through the C interface") {
    cf_family* fam = nullptr;
    REQUIRE(cf_family_boyd(0.25, 4.0 / 3.0, &fam) == CF_OK);
    double lo, hi;
    REQUIRE(cf_family_range(fam, &lo, &hi) == CF_OK);
    CHECK(lo == 0.0);
    CHECK(hi == 1.0);
    double plateau[2];
    REQUIRE(cf_family_plateau(fam, 1, 2, 0.0, 1.0, 1e-12, plateau) == CF_OK);
    CHECK(std::abs(plateau[0] - 4.0 / 7.0) < 1e-10);
    CHECK(std::abs(plateau[1] - 19.0 / 28.0) < 1e-10);
    CHECK(cf_family_plateau(fam, 1, 2, 0.0, 0.2, 1e-12, plateau) == CF_NOT_FOUND);

    cf_rotation_options o = cf_rotation_defaults();
    CHECK(o.q_max == 200);
    cf_rotation r;
    REQUIRE(cf_family_rotation(fam, 0.625, &o, &r) == CF_OK);
    CHECK(r.is_rational == 1);
    CHECK(r.p == 1);
    CHECK(r.q == 2);
    double brute;
    REQUIRE(cf_family_rotation_brute_force(fam, 0.625, 0.1, 1000, &brute) == CF_OK);
    CHECK(std::abs(brute - 0.5) < 2e-3);
    double y;
    REQUIRE(cf_family_eval(fam, 0.3, 0.1, &y) == CF_OK);
    CHECK(y == doctest::Approx(0.3));

    const double d[] = {1.0, 0.5};
    cf_hausdorff* h = nullptr;
    REQUIRE(cf_hausdorff_create(fam, 4, d, 2, 1e-12, &h) == CF_OK);
    CHECK(cf_hausdorff_row_count(h) == 8);
    double diam;
    std::size_t np, ng;
    REQUIRE(cf_hausdorff_cover(h, 1, &diam, &np, &ng) == CF_OK);
    CHECK(np == 1);
    CHECK(ng == 1);
    CHECK(diam == doctest::Approx(0.75));
    double slope;
    REQUIRE(cf_hausdorff_slope(h, 1.0, &slope) == CF_OK);
    CHECK(slope < 0.0);
    CHECK(cf_hausdorff_slope(h, 0.3, &slope) == CF_NOT_FOUND);
    cf_hausdorff_free(h);
    cf_family_free(fam);

    CHECK(cf_family_boyd(0.25, 2.0, &fam) == CF_DOMAIN_ERROR);
}

TEST_CASE("staircase table through the C interface") {
    cf_staircase* t = nullptr;
    REQUIRE(cf_staircase_run(0.05, 1.0 / 25, 0.95, 1.05, 100, 4, nullptr, &t) == CF_OK);
    REQUIRE(cf_staircase_row_count(t) == 100);
    cf_staircase_row row;
    REQUIRE(cf_staircase_get_row(t, 0, &row) == CF_OK);
    CHECK(row.alpha == doctest::Approx(0.95));
    CHECK(std::string(row.status) == "ok");
    CHECK(row.has_rotation == 1);
    CHECK(row.m == 1.0);
    CHECK(cf_staircase_plateau_count(t) == 1);
    CHECK(cf_staircase_coverage(t, 1) == doctest::Approx(1.0));
    CHECK(cf_staircase_max_decrease(t) == 0.0);
    cf_staircase_free(t);

    CHECK(cf_staircase_run(0.05, 1.0 / 25, 0.95, 1.05, 50, 4, nullptr, &t) == CF_INVALID_ARGUMENT);
    CHECK(cf_staircase_run(0.05, 1.0 / 25, 0.95, 1.05, 100, 4, nullptr, nullptr) == CF_INVALID_ARGUMENT);
}

TEST_CASE("area check") {
    double integral, area;
    REQUIRE(cf_area_check(cf_params{0.05, 0.05, 0.0}, 0.5, &integral, &area) == CF_OK);
    CHECK(integral > 0.0);
    CHECK(area > 0.0);
    CHECK(cf_area_check(cf_params{0.05, 0.05, 0.0}, 5.0, &integral, &area) == CF_NOT_CLOSED);
}
