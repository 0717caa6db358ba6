#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "error.hpp"
#include "potentials.hpp"

namespace fpuwave {

/// Raised for malformed or out-of-range run configuration.
class ConfigError : public Error {
public:
    using Error::Error;
};

struct ModelSpec {
    std::string name;          ///< "power" or "toda"
    int m = 2;
    std::vector<double> c;     ///< c[j-1] is the coefficient of r^j

    ForceModel build() const;
    /// "toda" or "power:<m>[:c1,c2,...]"
    static ModelSpec parse(const std::string& text);
};

struct EmitFlags {
    bool profiles = true;
    bool scaled = false;
    bool sweep = true;
    bool figures_data = false;
};

inline constexpr const char* kOutputDirEnv = "FPUWAVE_OUTPUT_DIR";

std::vector<double> default_sweep_deltas();

struct RunConfig {
    std::optional<ModelSpec> model;
    int L = 3;
    int k = 512;
    std::vector<double> deltas;
    double tol = 1e-12;
    long max_iter = 200000;
    std::string output_dir;
    EmitFlags emit;
    /// verify: run only the criteria that involve the Toda chain or no model at all.
    bool toda_only = false;
    /// Non-fatal notes collected during normalisation (e.g. duplicate deltas).
    std::vector<std::string> warnings;

    /// Parses a JSON document; unknown keys raise ConfigError.
    static RunConfig from_json(const nlohmann::json& j);
    static RunConfig from_text(const std::string& text);
    nlohmann::json to_json() const;

    /// Sorts deltas descending, drops duplicates (with a warning), fills the
    /// output directory from the environment, and checks ranges.
    void normalise();
    /// Requires a model and at least one delta.
    void require_model() const;
};

} // namespace fpuwave
