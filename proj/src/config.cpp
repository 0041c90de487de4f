#include "vdyn/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>
#include <utility>
#include <vector>

#include "vdyn/csv.hpp"
#include "vdyn/errors.hpp"

namespace vdyn {

namespace {

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

double parse_real(std::string_view text, std::size_t line) {
    double value = 0.0;
    const char* end = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(text.data(), end, value);
    if (ec != std::errc() || ptr != end) {
        throw ParseError(line, "expected a number, got '" + std::string(text) + "'");
    }
    return value;
}

std::uint64_t parse_unsigned(std::string_view text, std::size_t line) {
    std::uint64_t value = 0;
    const char* end = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(text.data(), end, value);
    if (ec != std::errc() || ptr != end) {
        throw ParseError(line, "expected a nonnegative integer, got '" + std::string(text) + "'");
    }
    return value;
}

InitialKind initial_kind_from_string(std::string_view name) {
    if (name == "paper") return InitialKind::Paper;
    if (name == "paper-bounded") return InitialKind::PaperBounded;
    if (name == "constant") return InitialKind::Constant;
    throw ValidationError("initial", "expected paper, paper-bounded or constant, got '" +
                                         std::string(name) + "'");
}

struct Entry {
    std::string value;
    std::size_t line;
};

const std::set<std::string>& known_keys() {
    static const std::set<std::string> keys = {
        "preset",      "Lambda",      "d_S",          "d_I",        "d_V",
        "gamma",       "alpha",       "D1",           "D2",         "D3",
        "incidence_f", "incidence_g", "beta1",        "beta2",      "a",
        "b",           "M",           "dx",           "dt",         "horizon",
        "snapshot_every", "steady_tol", "scheme",     "initial",    "initial_S",
        "initial_I",   "initial_V",   "seed",         "output_dir", "sensitivity.samples",
        "sensitivity.sd_fraction"};
    return keys;
}

bool is_known_key(const std::string& key) {
    if (known_keys().count(key)) return true;
    constexpr std::string_view sd_prefix = "sensitivity.sd.";
    if (key.rfind(sd_prefix, 0) == 0) {
        const std::string name = key.substr(sd_prefix.size());
        for (const auto& n : r0_parameter_names()) {
            if (n == name) return true;
        }
    }
    return false;
}

void require(bool ok, const char* key, const char* what) {
    if (!ok) throw ValidationError(key, what);
}

}  // namespace

std::string_view to_string(InitialKind kind) {
    switch (kind) {
        case InitialKind::Paper: return "paper";
        case InitialKind::PaperBounded: return "paper-bounded";
        case InitialKind::Constant: return "constant";
    }
    return "paper";
}

FieldState InitialCondition::sample(const Grid1D& grid) const {
    FieldState s;
    const std::size_t nodes = grid.nodes();
    s.S.resize(nodes);
    s.I.resize(nodes);
    s.V.resize(nodes);
    for (std::size_t n = 0; n < nodes; ++n) {
        const double x = grid.x(n);
        switch (kind) {
            case InitialKind::Paper:
                s.S[n] = 1e7;
                s.I[n] = s.V[n] = 100.0 * std::exp(x);
                break;
            case InitialKind::PaperBounded:
                s.S[n] = 1e7;
                s.I[n] = s.V[n] = 100.0 * std::exp(x / 10.0);
                break;
            case InitialKind::Constant:
                s.S[n] = S;
                s.I[n] = I;
                s.V[n] = V;
                break;
        }
    }
    return s;
}

IncidenceFunctions RunConfig::incidence() const {
    return {Incidence::of_kind(f_kind, beta1), Incidence::of_kind(g_kind, beta2)};
}

Grid1D RunConfig::grid() const { return Grid1D(a, b, M); }

StepParams RunConfig::step() const { return {dt, scheme}; }

SensitivitySpec RunConfig::sensitivity_spec() const {
    SensitivitySpec spec = default_r0_spec(params, incidence(), sensitivity.sd_fraction,
                                           sensitivity.n_samples, seed);
    for (auto& d : spec.distributions) {
        if (auto it = sensitivity.sd_overrides.find(d.name); it != sensitivity.sd_overrides.end()) {
            d.sd = it->second;
        }
    }
    return spec;
}

void RunConfig::validate() const {
    params.validate();
    require(std::isfinite(beta1) && beta1 >= 0.0, "beta1", "must be finite and >= 0");
    require(std::isfinite(beta2) && beta2 >= 0.0, "beta2", "must be finite and >= 0");
    (void)grid();
    require(std::isfinite(dt) && dt > 0.0, "dt", "must be finite and > 0");
    require(std::isfinite(horizon) && horizon >= dt, "horizon", "must be finite and >= dt");
    require(std::isfinite(snapshot_every) && snapshot_every > 0.0, "snapshot_every",
            "must be finite and > 0");
    require(std::isfinite(steady_tol) && steady_tol > 0.0, "steady_tol", "must be finite and > 0");
    if (initial.kind == InitialKind::Constant) {
        require(std::isfinite(initial.S) && initial.S >= 0.0, "initial_S", "must be >= 0");
        require(std::isfinite(initial.I) && initial.I >= 0.0, "initial_I", "must be >= 0");
        require(std::isfinite(initial.V) && initial.V >= 0.0, "initial_V", "must be >= 0");
    }
    require(!output_dir.empty(), "output_dir", "must not be empty");
    require(sensitivity.n_samples >= 10, "sensitivity.samples", "must be >= 10");
    require(std::isfinite(sensitivity.sd_fraction) && sensitivity.sd_fraction >= 0.0,
            "sensitivity.sd_fraction", "must be >= 0");
    for (const auto& [name, sd] : sensitivity.sd_overrides) {
        if (!std::isfinite(sd) || sd < 0.0) {
            throw ValidationError("sensitivity.sd." + name, "must be >= 0");
        }
    }
}

RunConfig preset_config(std::string_view name) {
    Scenario scenario;
    if (name == "scenario-a") {
        scenario = scenario_a();
    } else if (name == "scenario-b") {
        scenario = scenario_b();
    } else {
        throw ValidationError("preset", "unknown preset '" + std::string(name) + "'");
    }
    RunConfig c;
    c.preset = scenario.name;
    c.params = scenario.params;
    c.beta1 = scenario.beta1;
    c.beta2 = scenario.beta2;
    c.a = 0.0;
    c.b = 50.0;
    c.M = 100;  // dx = 0.5
    c.dt = 1.0;
    c.horizon = 20000.0;
    c.snapshot_every = 10.0;
    c.initial.kind = InitialKind::Paper;
    return c;
}

RunConfig parse_config(std::string_view text) {
    std::map<std::string, Entry> entries;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const auto eol = text.find('\n', pos);
        std::string_view raw = text.substr(pos, eol == std::string_view::npos ? text.size() - pos
                                                                            : eol - pos);
        pos = eol == std::string_view::npos ? text.size() + 1 : eol + 1;
        ++line_no;
        if (const auto hash = raw.find('#'); hash != std::string_view::npos) raw = raw.substr(0, hash);
        const std::string_view line = trim(raw);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) throw ParseError(line_no, "expected 'key = value'");
        const std::string key(trim(line.substr(0, eq)));
        const std::string value(trim(line.substr(eq + 1)));
        if (key.empty()) throw ParseError(line_no, "missing key");
        if (value.empty()) throw ParseError(line_no, "missing value for '" + key + "'");
        if (!is_known_key(key)) throw ParseError(line_no, "unknown key '" + key + "'");
        if (!entries.emplace(key, Entry{value, line_no}).second) {
            throw ParseError(line_no, "duplicate key '" + key + "'");
        }
    }

    RunConfig c;
    const bool has_preset = entries.count("preset") > 0;
    if (has_preset) c = preset_config(entries.at("preset").value);

    std::set<std::string> seen;
    auto real = [&](const char* key, double& target) {
        if (auto it = entries.find(key); it != entries.end()) {
            target = parse_real(it->second.value, it->second.line);
            seen.insert(key);
        }
    };
    auto text_value = [&](const char* key) -> const Entry* {
        auto it = entries.find(key);
        return it == entries.end() ? nullptr : &it->second;
    };

    real("Lambda", c.params.Lambda);
    real("d_S", c.params.d_S);
    real("d_I", c.params.d_I);
    real("d_V", c.params.d_V);
    real("gamma", c.params.gamma);
    real("alpha", c.params.alpha);
    real("D1", c.params.D1);
    real("D2", c.params.D2);
    real("D3", c.params.D3);
    real("beta1", c.beta1);
    real("beta2", c.beta2);
    real("a", c.a);
    real("b", c.b);
    real("dt", c.dt);
    real("horizon", c.horizon);
    real("snapshot_every", c.snapshot_every);
    real("steady_tol", c.steady_tol);
    real("initial_S", c.initial.S);
    real("initial_I", c.initial.I);
    real("initial_V", c.initial.V);
    real("sensitivity.sd_fraction", c.sensitivity.sd_fraction);

    if (const Entry* e = text_value("incidence_f")) c.f_kind = incidence_kind_from_string(e->value);
    if (const Entry* e = text_value("incidence_g")) c.g_kind = incidence_kind_from_string(e->value);
    if (const Entry* e = text_value("scheme")) c.scheme = scheme_from_string(e->value);
    if (const Entry* e = text_value("initial")) c.initial.kind = initial_kind_from_string(e->value);
    if (const Entry* e = text_value("output_dir")) c.output_dir = e->value;
    if (const Entry* e = text_value("seed")) c.seed = parse_unsigned(e->value, e->line);
    if (const Entry* e = text_value("sensitivity.samples")) {
        c.sensitivity.n_samples = parse_unsigned(e->value, e->line);
    }
    for (const auto& [key, entry] : entries) {
        constexpr std::string_view sd_prefix = "sensitivity.sd.";
        if (key.rfind(sd_prefix, 0) == 0) {
            c.sensitivity.sd_overrides[key.substr(sd_prefix.size())] =
                parse_real(entry.value, entry.line);
        }
    }

    const Entry* m_entry = text_value("M");
    const Entry* dx_entry = text_value("dx");
    if (m_entry && dx_entry) throw ValidationError("dx", "give either M or dx, not both");
    if (m_entry) {
        c.M = static_cast<std::size_t>(parse_unsigned(m_entry->value, m_entry->line));
        seen.insert("M");
    } else if (dx_entry) {
        const double dx = parse_real(dx_entry->value, dx_entry->line);
        require(std::isfinite(dx) && dx > 0.0, "dx", "must be finite and > 0");
        const double cells = (c.b - c.a) / dx;
        const double rounded = std::round(cells);
        require(rounded >= 1.0 && std::abs(cells - rounded) <= 1e-9 * rounded, "dx",
                "must divide b - a into a whole number of cells");
        c.M = static_cast<std::size_t>(rounded);
        seen.insert("M");
    }

    if (!has_preset) {
        static const std::vector<std::string> required = {
            "Lambda", "d_S", "d_I", "d_V", "gamma", "alpha", "D1", "D2", "D3",
            "beta1",  "beta2", "a", "b", "M",   "dt",    "horizon"};
        for (const auto& key : required) {
            if (!seen.count(key)) throw ValidationError(key, "required key is missing");
        }
    }
    if (c.initial.kind == InitialKind::Constant) {
        for (const char* key : {"initial_S", "initial_I", "initial_V"}) {
            if (!seen.count(key)) throw ValidationError(key, "required for constant initial data");
        }
    }
    c.validate();
    return c;
}

RunConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("config", "cannot open " + path.string());
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_config(buffer.str());
}

std::string format_config(const RunConfig& c) {
    std::ostringstream out;
    auto kv = [&](const std::string& key, const std::string& value) {
        out << key << " = " << value << '\n';
    };
    auto real = [&](const std::string& key, double v) { kv(key, format_real(v)); };
    if (!c.preset.empty()) out << "# preset: " << c.preset << '\n';
    real("Lambda", c.params.Lambda);
    real("d_S", c.params.d_S);
    real("d_I", c.params.d_I);
    real("d_V", c.params.d_V);
    real("gamma", c.params.gamma);
    real("alpha", c.params.alpha);
    real("D1", c.params.D1);
    real("D2", c.params.D2);
    real("D3", c.params.D3);
    kv("incidence_f", std::string(to_string(c.f_kind)));
    kv("incidence_g", std::string(to_string(c.g_kind)));
    real("beta1", c.beta1);
    real("beta2", c.beta2);
    real("a", c.a);
    real("b", c.b);
    kv("M", std::to_string(c.M));
    real("dt", c.dt);
    real("horizon", c.horizon);
    real("snapshot_every", c.snapshot_every);
    real("steady_tol", c.steady_tol);
    kv("scheme", std::string(to_string(c.scheme)));
    kv("initial", std::string(to_string(c.initial.kind)));
    if (c.initial.kind == InitialKind::Constant) {
        real("initial_S", c.initial.S);
        real("initial_I", c.initial.I);
        real("initial_V", c.initial.V);
    }
    kv("seed", std::to_string(c.seed));
    kv("output_dir", c.output_dir);
    kv("sensitivity.samples", std::to_string(c.sensitivity.n_samples));
    real("sensitivity.sd_fraction", c.sensitivity.sd_fraction);
    for (const auto& [name, sd] : c.sensitivity.sd_overrides) real("sensitivity.sd." + name, sd);
    return out.str();
}

}  // namespace vdyn
