#include "doctest.h"

#include <cmath>
#include <cstring>
#include <filesystem>
#include <string>

#include "balayage.h"

TEST_CASE("measures through the C interface") {
    const double coords[] = {0.0, 0.0, 1.0, 0.0};
    const double weights[] = {1.0, -0.5};
    bl_measure* m = nullptr;
    REQUIRE(bl_measure_create(2, 2, coords, weights, &m) == BL_OK);
    CHECK(bl_measure_dim(m) == 2);
    CHECK(bl_measure_size(m) == 2);
    double total = 0, pos = 0, neg = 0;
    CHECK(bl_measure_mass(m, &total, &pos, &neg) == BL_OK);
    CHECK(total == 0.5);
    CHECK(neg == 0.5);

    const double y[] = {0.0, 2.0};
    double v = 0;
    int ok = 0;
    CHECK(bl_potential(m, y, &v, &ok) == BL_OK);
    CHECK(ok == 1);
    CHECK(v == doctest::Approx(std::log(2.0) - 0.5 * std::log(std::sqrt(5.0))));
    CHECK(bl_potential(m, coords, &v, &ok) == BL_OK);
    CHECK(std::isinf(v));

    char* text = nullptr;
    REQUIRE(bl_measure_to_json(m, &text) == BL_OK);
    bl_measure* back = nullptr;
    CHECK(bl_measure_from_json(text, &back) == BL_OK);
    CHECK(bl_measure_size(back) == 2);
    bl_string_free(text);
    bl_measure_destroy(back);
    bl_measure_destroy(m);
}

TEST_CASE("errors carry a status and a message") {
    bl_measure* m = nullptr;
    CHECK(bl_measure_from_json("{\"d\": 2", &m) == BL_ERR_CONFIG);
    CHECK(std::strlen(bl_last_error()) > 0);
    CHECK(m == nullptr);
    CHECK(bl_measure_create(0, 0, nullptr, nullptr, &m) == BL_ERR_DIMENSION);
    CHECK(bl_measure_create(2, 0, nullptr, nullptr, nullptr) == BL_ERR_INVALID_ARGUMENT);
    double v = 0;
    const double c[] = {0.0, 0.0};
    const double far[] = {3.0, 0.0};
    CHECK(bl_green_ball(2, c, 1.0, far, c, &v) == BL_ERR_DOMAIN);
    CHECK(bl_riesz_constant(2, &v) == BL_OK);
    CHECK(v == doctest::Approx(1.0 / (2.0 * M_PI)));
    CHECK(bl_spatial_kernel(2, c, c, &v) == BL_OK);
    CHECK(v == -INFINITY);
}

TEST_CASE("grids, fill and balayage check") {
    const char* mask = "{\"origin\": [0.0, 0.0], \"spacing\": 1.0}\n"
                       "#####\n#####\n#####\n#####\n#####\n";
    const char* ring = "{\"origin\": [0.0, 0.0], \"spacing\": 1.0}\n"
                       ".....\n.###.\n.#.#.\n.###.\n.....\n";
    bl_grid* g = nullptr;
    REQUIRE(bl_grid_from_mask(mask, &g) == BL_OK);
    bl_cells* s = nullptr;
    REQUIRE(bl_cells_from_mask(g, ring, &s) == BL_OK);
    CHECK(bl_cells_count(s) == 8);
    bl_cells* filled = nullptr;
    REQUIRE(bl_inward_fill(g, s, &filled) == BL_OK);
    CHECK(bl_cells_count(filled) == 9);
    char* out = nullptr;
    CHECK(bl_cells_to_mask(g, filled, &out) == BL_OK);
    CHECK(std::string(out).find(".###.\n.###.\n.###.") != std::string::npos);
    bl_string_free(out);

    const double x[] = {2.5, 2.5};
    bl_measure* delta = nullptr;
    bl_measure* omega = nullptr;
    const double one = 1.0;
    REQUIRE(bl_measure_create(2, 1, x, &one, &delta) == BL_OK);
    const double center[] = {2.5, 2.5};
    REQUIRE(bl_harmonic_measure(2, center, 1.0, x, 256, &omega) == BL_OK);
    int verdict = 0;
    char* rep = nullptr;
    CHECK(bl_check_har_balayage(delta, omega, g, 1e-3, &verdict, &rep) == BL_OK);
    CHECK(verdict == 1);
    bl_string_free(rep);

    bl_measure_destroy(delta);
    bl_measure_destroy(omega);
    bl_cells_destroy(filled);
    bl_cells_destroy(s);
    bl_grid_destroy(g);
}

TEST_CASE("scenarios and fixtures") {
    const auto dir = std::filesystem::temp_directory_path() / "balayage_capi_test";
    std::filesystem::create_directories(dir);
    CHECK(bl_fixture_make("scenario-configs", 5, dir.string().c_str()) == BL_OK);
    CHECK(std::filesystem::exists(dir / "mfs-fit.json"));
    CHECK(bl_fixture_make("bogus", 5, dir.string().c_str()) == BL_ERR_CONFIG);

    int code = -1;
    char* report = nullptr;
    char* csv = nullptr;
    CHECK(bl_scenario_run("{\"kind\": \"x\"}", nullptr, 0, 0, 0, &code, &report, &csv) == BL_OK);
    CHECK(code == 2);
    CHECK(std::string(report).find("\"verdict\": \"error\"") != std::string::npos);
    bl_string_free(report);
    bl_string_free(csv);
    std::filesystem::remove_all(dir);
    CHECK(std::string(bl_version()).size() > 0);
}
