#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include "qcnhc/io.hpp"

using namespace qcnhc;

TEST_CASE("config parsing") {
    SUBCASE("key = value with comments") {
        const EnsembleConfig c = parse_config(
            "# a comment\n"
            "scheme = nve\n"
            "beta = 0.5   # trailing comment\n"
            "n_bath = 7\n"
            "n_traj = 123\n");
        CHECK(c.integ.scheme == Scheme::nve);
        CHECK(c.params.beta == 0.5);
        CHECK(c.params.n_bath == 7);
        CHECK(c.n_traj == 123);
    }
    SUBCASE("unknown keys are rejected with the line number") {
        try {
            parse_config("beta = 0.5\nbogus_key = 1\n");
            FAIL("expected an exception");
        } catch (const std::invalid_argument& e) {
            const std::string msg = e.what();
            CHECK(msg.find("line 2") != std::string::npos);
            CHECK(msg.find("bogus_key") != std::string::npos);
        }
    }
    SUBCASE("range violations name the invariant") {
        CHECK_THROWS_WITH_AS(parse_config("beta = -1\n"),
                             doctest::Contains("beta"), std::invalid_argument);
    }
    SUBCASE("malformed numbers carry the key") {
        CHECK_THROWS_WITH_AS(parse_config("beta = abc\n"),
                             doctest::Contains("beta"), std::invalid_argument);
    }
}

TEST_CASE("presets expand to the figure parameter sets") {
    SUBCASE("fig1") {
        const EnsembleConfig c = parse_config("preset = fig1\n");
        CHECK(c.params.beta == 0.3);
        CHECK(c.params.kondo == 0.007);
        CHECK(c.params.omega == doctest::Approx(1.0 / 3.0));
        CHECK(c.params.omega_max == 3.0);
        CHECK(c.mode == Mode::adiabatic);
        const auto variants = preset_variants("fig1");
        REQUIRE(variants.size() == 3);
        CHECK(variants[0].second.integ.scheme == Scheme::nve);
        CHECK(variants[0].second.params.n_bath == 200);
        CHECK(variants[1].second.integ.scheme == Scheme::nhc);
        CHECK(variants[1].second.params.n_bath == 1);
        CHECK(variants[2].second.integ.scheme == Scheme::bd);
        CHECK(variants[2].second.integ.zeta == 1.0);
    }
    SUBCASE("fig4") {
        const EnsembleConfig c = parse_config("preset = fig4\n");
        CHECK(c.params.beta == 3.0);
        CHECK(c.params.kondo == 0.1);
        CHECK(c.mode == Mode::nonadiabatic);
        CHECK(c.max_hops == 6);
        CHECK(c.n_traj == 100000);
    }
    SUBCASE("fig5") {
        const EnsembleConfig c = parse_config("preset = fig5\n");
        CHECK(c.params.gamma_s == doctest::Approx(1.0 / 9.0));
        CHECK(c.mode == Mode::adiabatic);
        CHECK(c.t_max == 40.0);
        CHECK(preset_variants("fig5").size() == 2);
    }
    SUBCASE("later lines override the preset") {
        const EnsembleConfig c = parse_config("preset = fig1\nn_traj = 42\n");
        CHECK(c.n_traj == 42);
    }
    SUBCASE("unknown preset") {
        CHECK_THROWS_AS(parse_config("preset = fig9\n"), std::invalid_argument);
    }
}

TEST_CASE("config round trip") {
    EnsembleConfig c = parse_config("preset = fig3\n");
    c.master_seed = 77;
    c.integ.zeta = 0.25;
    c.populations_only = true;
    const EnsembleConfig back = parse_config(serialize_config(c));
    CHECK(back == c);
}

TEST_CASE("manifest is itself a parseable config") {
    EnsembleConfig c = parse_config("preset = fig2\nn_traj = 10\nn_output = 10\n");
    c.n_workers = 1;
    const ObservableSeries s = run_ensemble(c);
    const std::string manifest = make_manifest(c, s, 1.5);
    const EnsembleConfig back = parse_config(manifest);
    CHECK(back == c);
}

TEST_CASE("csv round trip is lossless") {
    namespace fs = std::filesystem;
    const fs::path dir = fs::temp_directory_path() / "qcnhc_io_test";
    fs::create_directories(dir);
    const std::string path = (dir / "series.csv").string();

    ObservableSeries s;
    s.times = {0.0, 1.0 / 3.0, 2.0 / 3.0};
    s.mean = {1.0, -0.12345678901234567, 3.3e-15};
    s.stderror = {0.0, 0.01, 0.02};
    s.imag_mean = {0, 0, 0};
    s.imag_stderror = {0, 0, 0};
    s.n_effective = {10, 10, 9};
    write_series(s, "# manifest\nn_traj = 10\n", path);

    const ObservableSeries r = read_series(path);
    REQUIRE(r.size() == 3);
    for (std::size_t k = 0; k < 3; ++k) {
        CHECK(r.times[k] == s.times[k]);
        CHECK(r.mean[k] == s.mean[k]);
        CHECK(r.stderror[k] == s.stderror[k]);
        CHECK(r.n_effective[k] == s.n_effective[k]);
    }
    CHECK(fs::exists(manifest_path_for(path)));

    SUBCASE("empty series writes a header-only file") {
        const std::string empty_path = (dir / "empty.csv").string();
        write_series(ObservableSeries{}, "", empty_path);
        std::ifstream in(empty_path);
        std::string line;
        REQUIRE(std::getline(in, line));
        CHECK(line == "t,mean,stderr,n_effective");
        CHECK_FALSE(std::getline(in, line));
    }
    SUBCASE("unwritable path is surfaced with context") {
        CHECK_THROWS_WITH_AS(write_series(s, "", "/nonexistent-dir/x.csv"),
                             doctest::Contains("/nonexistent-dir/x.csv"),
                             std::runtime_error);
    }
    fs::remove_all(dir);
}

TEST_CASE("bath_kt key: pinned value, match keyword, preset defaults") {
    SUBCASE("defaults to 0 (quantum bath widths)") {
        CHECK(parse_config("").params.bath_kt == 0.0);
    }
    SUBCASE("numeric value is taken verbatim") {
        CHECK(parse_config("bath_kt = 0.7\n").params.bath_kt == 0.7);
    }
    SUBCASE("match resolves against beta and omega_max") {
        const EnsembleConfig c =
            parse_config("beta = 3\nomega_max = 3\nbath_kt = match\n");
        CHECK(c.params.bath_kt ==
              doctest::Approx(0.5495125011514305).epsilon(1e-12));
    }
    SUBCASE("match respects beta set after it") {
        const EnsembleConfig c =
            parse_config("bath_kt = match\nbeta = 0.3\n");
        CHECK(c.params.bath_kt ==
              doctest::Approx(3.3635119841622285).epsilon(1e-12));
    }
    SUBCASE("presets pin the width-matched temperature and tau = 0.1") {
        const EnsembleConfig c = parse_config("preset = fig2\n");
        CHECK(c.params.bath_kt ==
              doctest::Approx(width_matched_bath_kt(3.0, 3.0)).epsilon(1e-15));
        CHECK(c.tau == doctest::Approx(0.1));
    }
    SUBCASE("the many-oscillator reference variant keeps quantum widths") {
        const auto variants = preset_variants("fig1");
        CHECK(variants[0].second.params.bath_kt == 0.0);        // nve
        CHECK(variants[1].second.params.bath_kt > 0.0);         // nhc
        CHECK(variants[2].second.params.bath_kt ==
              variants[1].second.params.bath_kt);               // bd
    }
    SUBCASE("serialize/parse roundtrip preserves the resolved value") {
        EnsembleConfig c = parse_config("preset = fig4\n");
        const EnsembleConfig back = parse_config(serialize_config(c));
        CHECK(back.params.bath_kt == c.params.bath_kt);
    }
}
