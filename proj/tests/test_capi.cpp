// Exercises the shared-library surface end to end, including error paths.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <string>
#include <vector>

#include "pzbeam/pzbeam.h"

namespace {

std::string table1_path() {
    const char* env = std::getenv("PZBEAM_DATA_DIR");
    return std::string(env ? env : "data") + "/table1.json";
}

struct DbFixture {
    pzb_material_db* db = nullptr;
    DbFixture() { REQUIRE(pzb_material_db_load(table1_path().c_str(), &db) == PZB_OK); }
    ~DbFixture() { pzb_material_db_free(db); }
};

struct ModelFixture : DbFixture {
    pzb_model* model = nullptr;
    ModelFixture() {
        REQUIRE(pzb_model_create(db, "PZT-5A", "glass", 200e-6, 500e-6, 6e-3, &model) ==
                PZB_OK);
    }
    ~ModelFixture() { pzb_model_free(model); }
};

} // namespace

TEST_CASE("status names and last error") {
    CHECK(std::string(pzb_status_name(PZB_OK)) == "ok");
    CHECK(std::string(pzb_status_name(PZB_ERR_NOT_FOUND)) == "not found");
    CHECK(pzb_last_error() != nullptr);
}

TEST_CASE("database loading and enumeration") {
    DbFixture f;
    CHECK(pzb_material_db_count(f.db) == 2);
    std::vector<std::string> names;
    for (int i = 0; i < pzb_material_db_count(f.db); ++i)
        names.push_back(pzb_material_db_name(f.db, i));
    CHECK(names == std::vector<std::string>{"PZT-5A", "glass"});
    CHECK(pzb_material_db_name(f.db, 99) == nullptr);

    pzb_material_db* bad = nullptr;
    CHECK(pzb_material_db_load("/no/such/file.json", &bad) == PZB_ERR_IO);
    CHECK(pzb_material_db_parse("not json", &bad) == PZB_ERR_PARSE);
    CHECK(pzb_material_db_parse(R"([{"name":"x","kind":"elastic","c11":1e10,
        "c13":1e9,"rho":1000,"bogus":1}])", &bad) == PZB_ERR_INVALID);
    CHECK(std::string(pzb_last_error()).size() > 0);
    CHECK(pzb_material_db_load(nullptr, &bad) == PZB_ERR_INVALID);
}

TEST_CASE("model creation and section values") {
    ModelFixture f;
    CHECK(pzb_model_length(f.model) == doctest::Approx(6e-3));

    pzb_section s{};
    REQUIRE(pzb_model_section(f.model, &s) == PZB_OK);
    CHECK(s.z0 == doctest::Approx(-1.9195599695e-4).epsilon(1e-9));
    CHECK(s.D11 == doctest::Approx(2.9465659994).epsilon(1e-9));
    CHECK(s.Dbar == doctest::Approx(2.9645800356).epsilon(1e-9));
    CHECK(s.rho0 == doctest::Approx(2.715).epsilon(1e-12));

    pzb_model* bad = nullptr;
    CHECK(pzb_model_create(f.db, "unobtainium", "glass", 1e-4, 1e-4, 1e-3, &bad) ==
          PZB_ERR_NOT_FOUND);
    CHECK(pzb_model_create(f.db, "PZT-5A", "glass", -1e-4, 1e-4, 1e-3, &bad) ==
          PZB_ERR_INVALID);
    CHECK(pzb_model_set_length(f.model, -1.0) == PZB_ERR_INVALID);
}

TEST_CASE("analytic modes through the C surface") {
    ModelFixture f;
    pzb_mode mode{};
    REQUIRE(pzb_mode_closed_form(f.model, 1, &mode) == PZB_OK);
    CHECK(mode.freq_hz == doctest::Approx(45197.83851477).epsilon(1e-9));
    CHECK(mode.symmetric == 1);
    CHECK(mode.omega == doctest::Approx(mode.freq_hz * 2.0 * M_PI));

    pzb_mode m2{};
    REQUIRE(pzb_mode_closed_form(f.model, 2, &m2) == PZB_OK);
    CHECK(m2.symmetric == 0);

    pzb_mode sixth{};
    REQUIRE(pzb_mode_sixth_order(f.model, 1, &sixth) == PZB_OK);
    CHECK(sixth.freq_hz == doctest::Approx(45218.30390945).epsilon(1e-9));

    CHECK(pzb_mode_closed_form(f.model, 0, &mode) == PZB_ERR_INVALID);

    double w = -1.0;
    REQUIRE(pzb_mode_shape(&mode, 0.0, &w) == PZB_OK);
    CHECK(w == doctest::Approx(1.0).epsilon(1e-9)); // midspan peak of mode 1
    REQUIRE(pzb_mode_shape(&mode, 3e-3, &w) == PZB_OK);
    CHECK(w == doctest::Approx(0.0).scale(1.0));
    CHECK(pzb_mode_shape(&mode, 1.0, &w) == PZB_ERR_INVALID); // outside span
}

TEST_CASE("electric profile and calibration through the C surface") {
    ModelFixture f;
    pzb_mode mode{};
    REQUIRE(pzb_mode_sixth_order(f.model, 1, &mode) == PZB_OK);

    std::vector<double> phi(257);
    REQUIRE(pzb_electric_profile(f.model, &mode, 257, phi.data()) == PZB_OK);
    double peak = 0.0;
    for (double v : phi) peak = std::max(peak, std::abs(v));
    CHECK(peak > 0.0);
    // Symmetric mode: phi symmetric about midspan.
    CHECK(phi[64] == doctest::Approx(phi[192]).epsilon(1e-9));
    CHECK(pzb_electric_profile(f.model, &mode, 4, phi.data()) != PZB_OK);

    double L = 0.0;
    REQUIRE(pzb_calibrate_length(f.model, 4.52e4, 1, &L) == PZB_OK);
    CHECK(L == doctest::Approx(6e-3).epsilon(5e-3));
    pzb_model* tuned = nullptr;
    REQUIRE(pzb_model_create(f.db, "PZT-5A", "glass", 200e-6, 500e-6, L, &tuned) ==
            PZB_OK);
    pzb_mode check{};
    REQUIRE(pzb_mode_closed_form(tuned, 1, &check) == PZB_OK);
    CHECK(check.freq_hz == doctest::Approx(4.52e4).epsilon(1e-10));
    pzb_model_free(tuned);
}

TEST_CASE("FEM entry points through the C surface") {
    ModelFixture f;
    std::vector<pzb_fem_mode> modes(8);
    REQUIRE(pzb_fem_solve(f.model, 64, 0, 8, modes.data()) == PZB_OK);
    for (int i = 1; i < 8; ++i) CHECK(modes[i].freq_hz >= modes[i - 1].freq_hz);
    CHECK(modes[0].mode_class == PZB_MODE_FLEX_SYMMETRIC);
    CHECK(modes[1].mode_class == PZB_MODE_FLEX_ANTISYMMETRIC);

    std::vector<double> flex(3);
    REQUIRE(pzb_fem_flexural(f.model, 64, 0, 3, flex.data()) == PZB_OK);
    CHECK(flex[0] == doctest::Approx(45218.3).epsilon(1e-5));
    CHECK(flex[1] == doctest::Approx(176571.1).epsilon(1e-5));

    const int meshes[2] = {16, 32};
    std::vector<double> conv(4);
    REQUIRE(pzb_fem_convergence(f.model, meshes, 2, 2, conv.data()) == PZB_OK);
    CHECK(conv[2] <= conv[0]); // refinement lowers mode 1
    CHECK(conv[3] <= conv[1]);

    CHECK(pzb_fem_solve(f.model, 1, 0, 1, modes.data()) == PZB_ERR_INVALID);
    CHECK(pzb_fem_dump_matrices(f.model, 4, "/nonexistent/dir/prefix_") == PZB_ERR_IO);
}
