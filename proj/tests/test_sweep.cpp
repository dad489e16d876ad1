#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "modeinv/cavity.hpp"
#include "modeinv/errors.hpp"
#include "modeinv/sweep.hpp"
#include "modeinv/table.hpp"

using namespace modeinv;
using namespace modeinv::sweep;

namespace {

SweepSpec small_phase_spec()
{
    SweepSpec s;
    s.observable = "phase";
    s.param = "alpha_abs";
    s.min = 0.0;
    s.max = 2.0;
    s.points = 9;
    s.target.kind = "coherent";
    s.v_si = 1000.0;
    return s;
}

} // namespace

TEST_CASE("unit conversion: m/s to natural units")
{
    CHECK(convert_speed(1000.0) == doctest::Approx(3.3356e-6).epsilon(1e-4));
    CHECK(convert_speed(1.0) == doctest::Approx(3.3356e-9).epsilon(1e-4));
    CHECK_THROWS_AS(convert_speed(2.99792458e8), RangeError);
    CHECK_THROWS_AS(convert_speed(0.0), RangeError);
    CHECK_THROWS_AS(convert_speed(-5.0), RangeError);
    CHECK(convert_rate(1e-3) == doctest::Approx(1e-3 / 2.99792458e8));
}

TEST_CASE("spec validation errors")
{
    SweepSpec s = small_phase_spec();
    s.points = 1;
    CHECK_THROWS_AS(run_sweep(s), ConfigError);

    s = small_phase_spec();
    s.scale = "log"; // min = 0
    CHECK_THROWS_AS(run_sweep(s), ConfigError);

    s = small_phase_spec();
    s.observable = "nonsense";
    CHECK_THROWS_AS(run_sweep(s), ConfigError);

    s = small_phase_spec();
    s.param = "nonsense";
    CHECK_THROWS_AS(run_sweep(s), ConfigError);

    std::map<std::string, std::string> kv{{"observaple", "phase"}};
    CHECK_THROWS_AS(parse_spec(kv), ConfigError);
}

TEST_CASE("sweep output is deterministic")
{
    const SweepSpec s = small_phase_spec();
    const SweepTable a = run_sweep(s);
    const SweepTable b = run_sweep(s);
    CHECK(csv_body(a) == csv_body(b));
    CHECK(a.rows.size() == 9);
}

TEST_CASE("metadata echo round-trips to the same rows")
{
    const SweepSpec s = small_phase_spec();
    const SweepTable t = run_sweep(s);

    std::map<std::string, std::string> kv;
    for (const auto& [k, v] : t.metadata)
        kv[k] = v;
    const SweepSpec reparsed = parse_spec(kv);
    const SweepTable again = run_sweep(reparsed);
    CHECK(csv_body(t) == csv_body(again));
}

TEST_CASE("spec file parsing: comments, whitespace, unknown keys")
{
    const std::string path = "/tmp/modeinv_test_spec.cfg";
    {
        std::ofstream out(path);
        out << "# a comment line\n"
               "observable = phase\n"
               "param = alpha_abs   # trailing comment\n"
               "min = 0\n"
               "max = 2\n"
               "points = 5\n"
               "target.kind = coherent\n";
    }
    const SweepSpec s = parse_spec_file(path);
    CHECK(s.observable == "phase");
    CHECK(s.points == 5);
    CHECK(run_sweep(s).rows.size() == 5);

    {
        std::ofstream out(path);
        out << "not_a_key = 1\n";
    }
    CHECK_THROWS_AS(parse_spec_file(path), ConfigError);
}

TEST_CASE("csv writer format")
{
    SweepTable t;
    t.metadata = {{"alpha", "1"}, {"note", "x"}};
    t.columns = {"a", "b"};
    t.rows = {{1.0, 0.1}, {2.0, 0.25}};
    std::ostringstream os;
    write_csv(t, os);
    CHECK(os.str() == "# alpha = 1\n# note = x\na,b\n1,0.10000000000000001\n2,0.25\n");
}

TEST_CASE("svg writer emits polylines")
{
    SweepTable t;
    t.columns = {"x", "y"};
    for (int i = 0; i <= 10; ++i)
        t.rows.push_back({0.1 * i, std::sin(0.1 * i)});
    std::ostringstream os;
    write_svg(t, os);
    const std::string svg = os.str();
    CHECK(svg.find("<svg") != std::string::npos);
    CHECK(svg.find("<polyline") != std::string::npos);
    CHECK(svg.find("</svg>") != std::string::npos);
}

TEST_CASE("fig3 recipe: monotone phase with non-increasing increments at large alpha")
{
    const SweepTable t = run_recipe("fig3");
    REQUIRE(t.rows.size() >= 100);

    std::vector<double> gamma;
    for (const auto& row : t.rows)
        gamma.push_back(row[1]);

    std::size_t knee = 1;
    for (std::size_t i = 1; i + 1 < gamma.size(); ++i)
        if (gamma[i + 1] - gamma[i] > gamma[knee] - gamma[knee - 1])
            knee = i + 1;
    for (std::size_t i = knee; i + 1 < gamma.size(); ++i) {
        CHECK(gamma[i + 1] >= gamma[i]);
        CHECK(gamma[i + 1] - gamma[i] <= gamma[i] - gamma[i - 1] + 1e-15);
    }

    // weak-adiabatic flags all true at these couplings
    for (const auto& row : t.rows)
        CHECK(row[5] == 1.0);
}

TEST_CASE("fig2-mid recipe: squeeze sensitivity dies away beyond r = 5")
{
    const SweepTable t = run_recipe("fig2-mid");
    std::vector<double> r, gamma;
    for (const auto& row : t.rows) {
        r.push_back(row[0]);
        gamma.push_back(row[1]);
    }
    double max_inc = 0.0;
    for (std::size_t i = 1; i < gamma.size(); ++i)
        max_inc = std::max(max_inc, std::abs(gamma[i] - gamma[i - 1]));
    for (std::size_t i = 1; i < gamma.size(); ++i)
        if (r[i] > 5.0)
            CHECK(std::abs(gamma[i] - gamma[i - 1]) < 0.02 * max_inc);
}

TEST_CASE("fig2-left recipe: phase is periodic in Psi")
{
    const SweepTable t = run_recipe("fig2-left");
    const double first = t.rows.front()[1];
    const double last = t.rows.back()[1]; // Psi = 2 pi
    CHECK(first == doctest::Approx(last).epsilon(1e-9));
}

TEST_CASE("fig9 recipe: quadratic stability with the expected magnitude")
{
    const SweepTable t = run_recipe("fig9");
    double slope = 0.0;
    bool found = false;
    for (const auto& [k, v] : t.metadata)
        if (k == "fit_slope") {
            slope = std::stod(v);
            found = true;
        }
    REQUIRE(found);
    CHECK(slope == doctest::Approx(2.0).epsilon(0.05));

    // the epsilon = 1e-3 1/s row sits in the reported decade
    for (const auto& row : t.rows) {
        if (std::abs(row[0] - 1e-3) < 1e-9) {
            CHECK(row[1] > 1e-15);
            CHECK(row[1] < 1e-13);
        }
    }
}

TEST_CASE("family recipes produce one column per member")
{
    const SweepTable t = run_recipe("fig8");
    CHECK(t.columns.size() == 6); // n + five m values
    CHECK(t.rows.size() == 31);
    // resolution grows with m at fixed n
    const auto& row = t.rows[4];
    for (std::size_t c = 2; c < row.size(); ++c)
        CHECK(std::abs(row[c]) > std::abs(row[c - 1]));
}

TEST_CASE("fig5 recipe: delta-Psi-separated family of periodic resolution curves")
{
    const SweepTable t = run_recipe("fig5");
    REQUIRE(t.columns.size() == 6);
    for (std::size_t c = 1; c < t.columns.size(); ++c) {
        // 2 pi periodic along the sweep
        CHECK(t.rows.front()[c] == doctest::Approx(t.rows.back()[c]).epsilon(1e-6));
        // members separate: compare peak-to-peak spans
        double lo = 1e300, hi = -1e300;
        for (const auto& row : t.rows) {
            lo = std::min(lo, row[c]);
            hi = std::max(hi, row[c]);
        }
        CHECK(hi - lo > 0.0);
        if (c > 1) {
            double lo_prev = 1e300, hi_prev = -1e300;
            for (const auto& row : t.rows) {
                lo_prev = std::min(lo_prev, row[c - 1]);
                hi_prev = std::max(hi_prev, row[c - 1]);
            }
            CHECK(hi - lo > hi_prev - lo_prev); // larger delta-Psi, larger excursion
        }
    }
}

TEST_CASE("recipe list is stable and family detection works")
{
    const auto names = recipe_names();
    CHECK(names.size() == 12);
    CHECK(is_family_recipe("fig5"));
    CHECK(!is_family_recipe("fig3"));
    CHECK_THROWS_AS(run_recipe("fig99"), ConfigError);
}

TEST_CASE("state construction validates kinds")
{
    StateSpec st;
    st.kind = "squeezed_coherent";
    st.r = 0.5;
    st.alpha_abs = 1.0;
    CHECK_NOTHROW(make_state(st));
    st.kind = "wigner";
    CHECK_THROWS_AS(make_state(st), ConfigError);
}
