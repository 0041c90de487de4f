#include "doctest.h"

#include <cmath>
#include <sstream>

#include "vdyn/config.hpp"
#include "vdyn/errors.hpp"

using namespace vdyn;

namespace {

const char* const kFull = R"(# full configuration without a preset
Lambda = 1e7
d_S = 0.1
d_I = 0.04
d_V = 2
gamma = 0.01
alpha = 40
D1 = 1
D2 = 1
D3 = 1
beta1 = 3e-10
beta2 = 3e-10
a = 0
b = 10
M = 20
dt = 0.5
horizon = 100
initial = constant
initial_S = 1e6
initial_I = 10
initial_V = 100
)";

std::string without_comments(const std::string& text) {
    std::istringstream in(text);
    std::string line, out;
    while (std::getline(in, line)) {
        if (!line.empty() && line[0] != '#') out += line + '\n';
    }
    return out;
}

}  // namespace

TEST_CASE("presets") {
    const RunConfig a = preset_config("scenario-a");
    CHECK(a.params.Lambda == 1e7);
    CHECK(a.params.d_S == 0.1);
    CHECK(a.params.D1 == 1.0);
    CHECK(a.beta1 == 5e-12);
    CHECK(a.beta2 == 5e-12);
    CHECK(a.grid().dx == 0.5);
    CHECK(a.dt == 1.0);
    CHECK(a.initial.kind == InitialKind::Paper);
    CHECK(preset_config("scenario-b").beta1 == 3e-10);
    CHECK_THROWS_AS(preset_config("scenario-z"), ValidationError);

    const FieldState init = a.initial.sample(a.grid());
    CHECK(init.S.front() == 1e7);
    CHECK(init.I.front() == 100.0);
    CHECK(init.V.back() == doctest::Approx(100.0 * std::exp(50.0)));
}

TEST_CASE("parsing a full configuration") {
    const RunConfig c = parse_config(kFull);
    CHECK(c.preset.empty());
    CHECK(c.params.alpha == 40.0);
    CHECK(c.M == 20);
    CHECK(c.grid().dx == 0.5);
    CHECK(c.initial.kind == InitialKind::Constant);
    CHECK(c.initial.V == 100.0);
    CHECK(c.seed == 42);

    const RunConfig via_dx = parse_config(std::string(kFull).replace(std::string(kFull).find("M = 20"), 6, "dx = 0.5"));
    CHECK(via_dx.M == 20);
}

TEST_CASE("preset with overrides") {
    const RunConfig c = parse_config("preset = scenario-b\nD1 = 100 # faster\nhorizon = 50\nsensitivity.sd.beta2 = 1e-11\n");
    CHECK(c.preset == "scenario-b");
    CHECK(c.params.D1 == 100.0);
    CHECK(c.params.D2 == 1.0);
    CHECK(c.horizon == 50.0);
    CHECK(c.sensitivity.sd_overrides.at("beta2") == 1e-11);
    const SensitivitySpec spec = c.sensitivity_spec();
    CHECK(spec.distributions[1].sd == 1e-11);
    CHECK(spec.distributions[0].sd == doctest::Approx(3e-11));
}

TEST_CASE("configuration errors") {
    CHECK_THROWS_AS(parse_config(""), ValidationError);
    try {
        parse_config("# only a comment\n\n");
        FAIL("expected ValidationError");
    } catch (const ValidationError& e) {
        CHECK(e.key() == "Lambda");
    }
    try {
        parse_config("preset = scenario-a\ndt = -1\n");
        FAIL("expected ValidationError");
    } catch (const ValidationError& e) {
        CHECK(e.key() == "dt");
    }
    try {
        parse_config("preset = scenario-a\n\nbogus = 3\n");
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.line() == 3);
    }
    CHECK_THROWS_AS(parse_config("preset = scenario-a\ndt = 1\ndt = 2\n"), ParseError);
    CHECK_THROWS_AS(parse_config("preset = scenario-a\ndt = fast\n"), ParseError);
    CHECK_THROWS_AS(parse_config("preset = scenario-a\ndt\n"), ParseError);
    CHECK_THROWS_AS(parse_config("preset = scenario-a\nM = 20\ndx = 0.5\n"), ValidationError);
    CHECK_THROWS_AS(parse_config("preset = scenario-a\ndx = 0.3\n"), ValidationError);
    CHECK_THROWS_AS(parse_config("preset = scenario-a\nd_V = 0\n"), ValidationError);
    CHECK_THROWS_AS(parse_config("preset = scenario-a\nsensitivity.samples = 5\n"), ValidationError);
    CHECK_THROWS_AS(parse_config("preset = scenario-a\ninitial = constant\ninitial_S = 1\n"), ValidationError);
    CHECK_THROWS_AS(parse_config("preset = scenario-a\nscheme = rk4\n"), ValidationError);
}

TEST_CASE("format and parse round trip") {
    for (const RunConfig& original : {preset_config("scenario-a"), parse_config(kFull)}) {
        const RunConfig again = parse_config(format_config(original));
        CHECK(again.params.Lambda == original.params.Lambda);
        CHECK(again.params.gamma == original.params.gamma);
        CHECK(again.params.D3 == original.params.D3);
        CHECK(again.beta1 == original.beta1);
        CHECK(again.beta2 == original.beta2);
        CHECK(again.M == original.M);
        CHECK(again.dt == original.dt);
        CHECK(again.horizon == original.horizon);
        CHECK(again.initial.kind == original.initial.kind);
        CHECK(again.initial.S == original.initial.S);
        CHECK(without_comments(format_config(again)) == without_comments(format_config(original)));
    }
}
