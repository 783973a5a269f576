#pragma once

// Experiment configuration and the `abtrace` command-line driver.

#include "abtrace/linalg.hpp"

#include <json.hpp>

#include <array>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace abtrace::cli {

inline constexpr const char* kVersion = "0.1.0";

enum ExitCode { ok = 0, config_error = 2, numerical_failure = 3, acceptance_failure = 4 };

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct ExperimentConfig {
    std::string problem = "disk"; ///< disk | annulus | torus
    double radius = 1.0;
    double inner_radius = 0.5; ///< annulus only
    std::vector<double> alpha{0.0};
    Vec2 e1{1.0, 0.0};
    Vec2 e2{0.31, 1.07};
    double cutoff = 80.0;
    int ngon = 3;
    double offset = 0.0; ///< beamcheck: start offset v along the first side
    std::optional<double> fit_half_width;
    int background_degree = 1;
    std::optional<double> t_min;
    std::optional<double> t_max;
    std::optional<double> t_step;
    std::vector<std::array<long, 2>> torus_vectors{{1, 0}};
    std::optional<double> length_max;
    int max_sides = 40;
    double isolation_half_width = 0.3;
    std::string out = "out";
    int threads = 1;

    /// Throws ConfigError on any violated precondition.
    void validate() const;
    /// Experiment parameters only; `out` and `threads` are excluded so that
    /// reports do not depend on where or how they were produced.
    nlohmann::json experiment_json() const;
    nlohmann::json full_json() const;
    /// Unknown keys and ill-typed values raise ConfigError.
    static ExperimentConfig from_json(const nlohmann::json& j);
};

/// Angles like "0.7", "pi", "-pi/4", "2pi/3", "0.5pi".
double parse_angle(const std::string& text);
/// Comma-separated angles, or "sweep" for {0, pi/4, pi/3, pi/2, 2pi/3, pi}.
std::vector<double> parse_alpha_list(const std::string& text);

/// 64-bit FNV-1a of the compact experiment JSON, as 16 hex digits.
std::string config_hash(const ExperimentConfig& config);

/// Full CLI entry point; returns the process exit code.
int run(int argc, const char* const* argv);

} // namespace abtrace::cli
