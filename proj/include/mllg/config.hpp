#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

namespace mllg {

enum class GMode { constant, analytic };

// Scheme and model parameters; defaults reproduce the reference experiment.
struct SimConfig {
    double T = 1.0;
    int J = 20;
    int n = 7;
    double theta = 0.7;
    double lambda1 = 1.0;
    double lambda2 = 1.0;
    double mu0 = 1.0;
    double sigma = 1.0;    // conductivity-inverse outside D
    double sigma_d = 1.0;  // conductivity-inverse on D
    double H_s = 30.0;     // initial-field strength (0, 0, H_s)
    int L = 400;
    std::uint64_t base_seed = 940721;
    GMode g_mode = GMode::constant;
    std::string out_dir = "out";

    double k() const { return T / J; }
    double h() const { return 1.0 / n; }
    double mu() const { return lambda1 * lambda1 + lambda2 * lambda2; }

    void validate() const;  // throws ConfigError naming the offending key

    std::vector<std::pair<std::string, std::string>> as_key_values() const;
};

// Plain-text key=value config, one pair per line, '#' comments. Unknown keys
// are rejected; missing keys keep the defaults above. `overrides` are applied
// after the file (CLI --set KEY=VALUE).
SimConfig parse_config(std::istream& in,
                       const std::vector<std::pair<std::string, std::string>>& overrides = {});
SimConfig parse_config_file(const std::string& path,
                            const std::vector<std::pair<std::string, std::string>>& overrides = {});

// Stability gate: theta < 1/2 needs k = o(h^2); refuse k >= h^2/2 unless
// explicitly overridden.
void check_theta_stability(const SimConfig& cfg, bool allow_unstable);

}  // namespace mllg
