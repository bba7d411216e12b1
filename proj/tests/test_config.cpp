#include <catch2/catch_amalgamated.hpp>

#include "wgqed/config.hpp"
#include "wgqed/presets.hpp"

using namespace wgqed;
using Catch::Approx;

TEST_CASE("preset documents") {
    const auto cfg = parse_config(R"({"preset": "fig2b", "output": "out.csv"})");
    REQUIRE(cfg.preset);
    CHECK(*cfg.preset == "fig2b");
    CHECK(cfg.format == OutputFormat::csv);
    CHECK(cfg.stride == 1);
    const auto spec = resolve(cfg.inputs);
    CHECK(spec.modes.size() == 1);
    CHECK(spec.modes[0].gamma * spec.modes[0].tau == Approx(1.2).epsilon(1e-12));
    CHECK(spec.delta == 0.0);
    CHECK(spec.initial.kind == InitialState::Kind::antisym);
}

TEST_CASE("overrides on top of a preset") {
    const auto cfg = parse_config(R"({
        "preset": "fig2b",
        "delta": "2g1",
        "t_max": "3tau1",
        "dt": "tau1/500",
        "initial": "s",
        "samples": 100,
        "stride": 4,
        "format": "json",
        "output": "x.json"
    })");
    const auto base = preset("fig2b");
    const auto spec = resolve(cfg.inputs);
    CHECK(spec.delta == Approx(2.0 * base.modes[0].gamma));
    CHECK(spec.modes[0].tau == base.modes[0].tau);
    CHECK(spec.t_max == Approx(3.0 * base.modes[0].tau));
    REQUIRE(spec.dt);
    CHECK(*spec.dt == Approx(base.modes[0].tau / 500.0));
    CHECK(spec.initial.kind == InitialState::Kind::sym);
    CHECK(spec.samples == 100);
    CHECK(cfg.stride == 4);
    CHECK(cfg.format == OutputFormat::json);

    const auto numeric = parse_config(R"({"preset": "fig4c", "delta": 1e-12, "n": 1e9})");
    CHECK(resolve(numeric.inputs).delta == 1e-12);
    CHECK(resolve(numeric.inputs).modes[0].phase_turns == 1e9);
}

TEST_CASE("explicit scenario documents") {
    const auto cfg = parse_config(R"j({
        "a": 2, "b": 1,
        "omega_A_between": [[3, 1], [5, 1]],
        "modes": [[1, 1], [3, 1]],
        "gamma1_lambda1_over_v1": 1.1e-11,
        "n": 2.3e10,
        "delta": "5(g1+g2)",
        "initial": "custom", "B1": [0.6, 0], "B2": [0, 0.8],
        "basis": "bare",
        "output": "o.csv"
    })j");
    CHECK_FALSE(cfg.preset);
    const auto spec = resolve(cfg.inputs);
    const auto ref = preset("fig4c");
    REQUIRE(spec.modes.size() == 2);
    CHECK(spec.modes[1].gamma == Approx(ref.modes[1].gamma).epsilon(1e-14));
    CHECK(spec.modes[0].tau == Approx(ref.modes[0].tau).epsilon(1e-14));
    CHECK(spec.delta == Approx(5.0 * (ref.modes[0].gamma + ref.modes[1].gamma)));
    CHECK(spec.initial.bare()[1] == cplx(0.0, 0.8));

    const auto dipoles = parse_config(R"({"omega_A": 4.5, "mu1": 1.0, "mu2": 0.5, "d": 10})");
    const auto ds = resolve(dipoles.inputs);
    CHECK(ds.modes.size() == 1);
    CHECK(ds.Gamma2 == Approx(0.25 * ds.Gamma1));
    CHECK(ds.modes[0].tau == Approx(10.0 / ds.modes[0].v));
}

TEST_CASE("mutual exclusion") {
    CHECK_THROWS_AS(parse_config(R"({"preset": "fig2a", "modes": [[1, 1]]})"), MutualExclusionError);
    CHECK_THROWS_AS(parse_config(R"({"preset": "fig2a", "omega_A": 4.0})"), MutualExclusionError);
    CHECK_THROWS_AS(parse_config(R"({"preset": "fig2a", "d": 4.0})"), MutualExclusionError);
    CHECK_THROWS_AS(parse_config(R"({"omega_A": 4.5, "gamma1": 0.1, "d": 1, "n": 3})"), MutualExclusionError);
}

TEST_CASE("validation errors name the field") {
    const auto field_of = [](const char* doc) {
        try {
            parse_config(doc);
        } catch (const ValidationError& e) {
            return e.field();
        }
        return std::string("<none>");
    };
    CHECK(field_of(R"({"preset": "fig2a", "colour": 1})") == "colour");
    CHECK(field_of(R"({"preset": "fig2a", "stride": 0})") == "stride");
    CHECK(field_of(R"({"preset": "fig2a", "samples": 1})") == "samples");
    CHECK(field_of(R"({"preset": "fig2a", "format": "xml"})") == "format");
    CHECK(field_of(R"({"preset": "fig2a", "basis": "x"})") == "basis");
    CHECK(field_of(R"({"preset": "fig2a", "n": -1})") == "n");
    CHECK(field_of(R"({"preset": "fig2a", "tol": 0})") == "tol");
    CHECK(field_of(R"({"preset": "fig2a", "initial": "q"})") == "initial");
    CHECK(field_of(R"({"preset": "fig2a", "initial": "custom", "B1": 1, "B2": 1})") == "B1");
    CHECK(field_of(R"({"preset": "fig2a", "sweep": {"parameter": "mu", "values": []}})") == "sweep.parameter");
    CHECK(field_of(R"({"preset": "fig2a", "sweep": {"parameter": "n", "values": [true]}})") == "sweep.values");
    CHECK(field_of(R"({"preset": "fig2a", "sweep": {"parameter": "n", "values": [], "x": 1}})") == "sweep.x");
    CHECK(field_of(R"({"omega_A": 4.5})") == "gamma1_lambda1_over_v1");
    CHECK(field_of(R"({"gamma1": 0.1})") == "omega_A");
    CHECK(field_of(R"({"omega_A": 4.5, "gamma1": 0.1, "modes": [[1, 0]]})") == "modes");
    CHECK(field_of(R"({"omega_A": "4.5", "gamma1": 0.1})") == "omega_A");
    CHECK(field_of(R"({"a": -2, "omega_A": 4.5, "gamma1": 0.1})") == "a");
}

TEST_CASE("parse errors carry the line") {
    try {
        parse_config("{\n  \"preset\": \"fig2a\",\n  \"delta\": ,\n}");
        FAIL("no parse error");
    } catch (const ParseError& e) {
        CHECK(e.line() == 3);
    }
    CHECK_THROWS_AS(parse_config("[1, 2]"), ParseError);
    CHECK_THROWS_AS(parse_config(""), ParseError);
}

TEST_CASE("unknown presets list the valid names") {
    try {
        parse_config(R"({"preset": "fig9"})");
        FAIL("no error");
    } catch (const UnknownPresetError& e) {
        const std::string what = e.what();
        for (const auto& name : preset_names()) CHECK(what.find(name) != std::string::npos);
    }
}

TEST_CASE("sweep blocks") {
    const auto cfg = parse_config(R"({"preset": "fig2b", "output": "o.csv",
        "sweep": {"parameter": "delta", "values": ["0", "g1", 2.5e-12]}})");
    REQUIRE(cfg.sweep);
    CHECK(cfg.sweep->parameter == "delta");
    REQUIRE(cfg.sweep->values.size() == 3);
    CHECK(cfg.sweep->values[1] == "g1");
    CHECK(evaluate_expression(cfg.sweep->values[2]) == 2.5e-12);

    auto in = cfg.inputs;
    apply_parameter(in, "n", "1e9");
    CHECK(*in.n == 1e9);
    apply_parameter(in, "t_max", "2tau1");
    CHECK(*in.t_max_expr == "2tau1");
    CHECK_THROWS_AS(apply_parameter(in, "mu", "1"), ValidationError);
}
