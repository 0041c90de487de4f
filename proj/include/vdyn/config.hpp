// Run configuration: flat `key = value` text with `#` comments.
//
// Recognised keys
//   preset                      scenario-a | scenario-b (applied before other keys)
//   Lambda d_S d_I d_V gamma alpha D1 D2 D3
//   incidence_f incidence_g     linear | saturating (default linear)
//   beta1 beta2
//   a b M  (or dx instead of M)
//   dt horizon snapshot_every steady_tol
//   scheme                      nsfd | sfd
//   initial                     paper | paper-bounded | constant
//   initial_S initial_I initial_V   (constant initial data)
//   seed output_dir
//   sensitivity.samples sensitivity.sd_fraction sensitivity.sd.<parameter>
#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>

#include "vdyn/model.hpp"
#include "vdyn/sensitivity.hpp"
#include "vdyn/solver.hpp"

namespace vdyn {

enum class InitialKind { Paper, PaperBounded, Constant };

std::string_view to_string(InitialKind kind);

/// Initial data sampled pointwise at the grid nodes.
///   paper:         S = 1e7, I = V = 100 e^x
///   paper-bounded: S = 1e7, I = V = 100 e^(x/10)
///   constant:      S, I, V as given
struct InitialCondition {
    InitialKind kind = InitialKind::Paper;
    double S = 0.0;
    double I = 0.0;
    double V = 0.0;

    FieldState sample(const Grid1D& grid) const;
};

struct SensitivityConfig {
    std::size_t n_samples = 1000;
    double sd_fraction = 0.1;
    /// Absolute standard deviations replacing sd_fraction * nominal.
    std::map<std::string, double> sd_overrides;
};

struct RunConfig {
    std::string preset;
    ModelParams params;
    IncidenceKind f_kind = IncidenceKind::Linear;
    IncidenceKind g_kind = IncidenceKind::Linear;
    double beta1 = 0.0;
    double beta2 = 0.0;
    double a = 0.0;
    double b = 0.0;
    std::size_t M = 0;
    double dt = 0.0;
    double horizon = 0.0;
    double snapshot_every = 10.0;
    double steady_tol = 1e-10;
    Scheme scheme = Scheme::NSFD;
    InitialCondition initial;
    std::uint64_t seed = 42;
    std::string output_dir = "out";
    SensitivityConfig sensitivity;

    IncidenceFunctions incidence() const;
    Grid1D grid() const;
    StepParams step() const;
    SensitivitySpec sensitivity_spec() const;

    /// Throws ValidationError naming the first offending key.
    void validate() const;
};

/// Full configuration for a named preset ("scenario-a", "scenario-b").
RunConfig preset_config(std::string_view name);

/// Throws ParseError (with line number) on malformed lines, unknown or
/// duplicate keys and unreadable numbers; ValidationError on missing keys or
/// invalid values.
RunConfig parse_config(std::string_view text);

RunConfig load_config(const std::filesystem::path& path);

/// Canonical text form; parse_config(format_config(c)) reproduces c.
std::string format_config(const RunConfig& config);

}  // namespace vdyn
