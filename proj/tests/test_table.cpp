#include <doctest.h>

#include "fdrlab/errors.hpp"
#include "fdrlab/table.hpp"
#include "fdrlab/theory.hpp"

#include <set>

using namespace fdrlab;

namespace {

TableSpec small_spec() {
    TableSpec s = table2_spec();
    s.windows = {10, 100};
    s.n_stats = 20000;
    s.skip = 1000;
    return s;
}

} // namespace

TEST_CASE("preset grids") {
    const auto t1 = table1_spec();
    CHECK(t1.cell_count() == 12);
    CHECK(t1.windows == std::vector<std::size_t>{10, 100, 1000, 10000});
    CHECK(t1.profiles[2].eps0 == 0.4);
    CHECK(t1.alpha_for(3) == doctest::Approx(0.0002));
    CHECK(t1.n_stats == 10'000'000);
    CHECK(t1.skip == 100'000);

    const auto t2 = table2_spec();
    CHECK(t2.cell_count() == 16);
    CHECK(t2.profiles[0].freq_hz == 0.0001);
    CHECK(t2.profiles[0].delta_eps == 0.005);
    CHECK(t2.profiles[3].freq_hz == 0.001);
    CHECK(t2.profiles[3].delta_eps == 0.05);
}

TEST_CASE("cell seeds are distinct") {
    std::set<std::uint64_t> seen;
    for (std::uint64_t k = 0; k < 100000; ++k) {
        seen.insert(cell_seed(42, k));
    }
    CHECK(seen.size() == 100000);
    CHECK(cell_seed(42, 0) != cell_seed(43, 0));
}

TEST_CASE("spec validation") {
    auto s = small_spec();
    CHECK_NOTHROW(s.validate());
    s.n_stats = 0;
    CHECK_THROWS_AS(s.validate(), validation_error);
    CHECK_THROWS_AS((void)run_table(s, 1), validation_error);

    s = small_spec();
    s.windows.clear();
    CHECK_THROWS_AS(s.validate(), validation_error);

    s = small_spec();
    s.alpha_policy = AlphaPolicy::explicit_list;
    s.alphas = {0.1};
    CHECK_THROWS_AS(s.validate(), validation_error);
    s.alphas = {0.1, 0.01};
    CHECK_NOTHROW(s.validate());
    CHECK(s.alpha_for(1) == 0.01);
}

TEST_CASE("JSON spec round trip") {
    auto s = small_spec();
    s.alpha_policy = AlphaPolicy::explicit_list;
    s.alphas = {0.3, 0.03};
    s.base_seed = 7;
    s.y0 = 0.5;
    const auto back = table_spec_from_json(table_spec_to_json(s));
    CHECK(back.windows == s.windows);
    CHECK(back.alphas == s.alphas);
    CHECK(back.alpha_policy == s.alpha_policy);
    CHECK(back.n_stats == s.n_stats);
    CHECK(back.skip == s.skip);
    CHECK(back.base_seed == 7);
    CHECK(back.y0 == 0.5);
    REQUIRE(back.profiles.size() == s.profiles.size());
    for (std::size_t k = 0; k < s.profiles.size(); ++k) {
        CHECK(back.profiles[k].kind == s.profiles[k].kind);
        CHECK(back.profiles[k].eps0 == s.profiles[k].eps0);
        CHECK(back.profiles[k].delta_eps == s.profiles[k].delta_eps);
        CHECK(back.profiles[k].freq_hz == s.profiles[k].freq_hz);
        CHECK(back.profiles[k].ts_seconds == s.profiles[k].ts_seconds);
    }
    CHECK(table_spec_to_json(back) == table_spec_to_json(s));
}

TEST_CASE("JSON spec errors") {
    CHECK_THROWS_AS((void)table_spec_from_json("{"), parse_error);
    CHECK_THROWS_AS((void)table_spec_from_json("[]"), validation_error);
    CHECK_THROWS_AS((void)table_spec_from_json(R"({"profiles":[{"eps":0.1}],"windows":[10],"bogus":1})"),
                    validation_error);
    CHECK_THROWS_AS((void)table_spec_from_json(R"({"profiles":[{"kind":"square","eps0":0.1}],"windows":[10]})"),
                    validation_error);
    CHECK_THROWS_AS((void)table_spec_from_json(R"({"profiles":[{"eps":0.1}],"windows":[10],"n_stats":0})"),
                    validation_error);
    const auto ok = table_spec_from_json(R"({"profiles":[{"eps":0.25}],"windows":[10]})");
    CHECK(ok.profiles[0].eps0 == 0.25);
    CHECK(ok.base_seed == 42);
}

TEST_CASE("run_cell is deterministic and fills the row") {
    const auto s = small_spec();
    const auto a = run_cell(s, 3);
    const auto b = run_cell(s, 3);
    CHECK(a == b);
    CHECK(a.profile == "sinusoidal");
    CHECK(a.eps0 == 0.1);
    CHECK(a.delta_eps == 0.05);
    CHECK(a.freq_hz == 0.0001);
    CHECK(a.m == 100);
    CHECK(a.alpha == doctest::Approx(0.02));
    CHECK(a.n_stats == 20000);
    CHECK(a.e.count == 20000);
    CHECK(a.theory_var_d == doctest::Approx(stationary_sma_error_variance(a.eps_empirical, 100)));
    CHECK(a.nominal_theory_var_d.has_value());
    CHECK(run_cell(s, 2) != a);
}

TEST_CASE("parallel table equals sequential table") {
    const auto s = small_spec();
    const auto seq = run_table(s, 1);
    const auto par = run_table(s, 4);
    REQUIRE(seq.size() == s.cell_count());
    CHECK(seq == par);
    for (std::size_t k = 0; k < seq.size(); ++k) {
        CHECK(seq[k] == run_cell(s, k));
    }
}

TEST_CASE("a failing cell reports its ordinal") {
    TableSpec s;
    s.profiles = {ProfileParams{ProfileKind::stationary, 0.1, 0, 0, 0.5}};
    s.windows = {10, 5000};
    s.n_stats = 100;
    s.skip = 10;
    try {
        (void)run_table(s, 2);
        FAIL("expected cell_error");
    } catch (const cell_error& e) {
        CHECK(e.ordinal() == 1);
        CHECK(std::string(e.what()).find("m=5000") != std::string::npos);
        CHECK_THROWS_AS(std::rethrow_exception(e.cause()), insufficient_data_error);
    }
}

TEST_CASE("thread count resolution") {
    CHECK(resolve_threads(3) >= 1);
    CHECK(resolve_threads(0) >= 1);
}
