#include "mllg/config.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "mllg/errors.hpp"

namespace mllg {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

double parse_real(const std::string& key, const std::string& value) {
    try {
        std::size_t pos = 0;
        double v = std::stod(value, &pos);
        if (pos != value.size()) throw std::invalid_argument(value);
        return v;
    } catch (const std::exception&) {
        throw ConfigError("config: key '" + key + "' has unparsable value '" + value + "'");
    }
}

long long parse_int(const std::string& key, const std::string& value) {
    try {
        std::size_t pos = 0;
        long long v = std::stoll(value, &pos);
        if (pos != value.size()) throw std::invalid_argument(value);
        return v;
    } catch (const std::exception&) {
        throw ConfigError("config: key '" + key + "' has unparsable value '" + value + "'");
    }
}

void apply(SimConfig& cfg, const std::string& key, const std::string& value) {
    if (key == "T")
        cfg.T = parse_real(key, value);
    else if (key == "J")
        cfg.J = static_cast<int>(parse_int(key, value));
    else if (key == "n")
        cfg.n = static_cast<int>(parse_int(key, value));
    else if (key == "theta")
        cfg.theta = parse_real(key, value);
    else if (key == "lambda1")
        cfg.lambda1 = parse_real(key, value);
    else if (key == "lambda2")
        cfg.lambda2 = parse_real(key, value);
    else if (key == "mu0")
        cfg.mu0 = parse_real(key, value);
    else if (key == "sigma")
        cfg.sigma = parse_real(key, value);
    else if (key == "sigma_D")
        cfg.sigma_d = parse_real(key, value);
    else if (key == "H_s")
        cfg.H_s = parse_real(key, value);
    else if (key == "L")
        cfg.L = static_cast<int>(parse_int(key, value));
    else if (key == "base_seed")
        cfg.base_seed = static_cast<std::uint64_t>(parse_int(key, value));
    else if (key == "g_mode") {
        if (value == "constant")
            cfg.g_mode = GMode::constant;
        else if (value == "analytic")
            cfg.g_mode = GMode::analytic;
        else
            throw ConfigError("config: g_mode must be 'constant' or 'analytic', got '" + value +
                              "'");
    } else if (key == "out_dir")
        cfg.out_dir = value;
    else
        throw ConfigError("config: unknown key '" + key + "'");
}

}  // namespace

void SimConfig::validate() const {
    if (!(T > 0.0)) throw ConfigError("config: T must be > 0");
    if (J < 1) throw ConfigError("config: J must be >= 1");
    if (n < 1) throw ConfigError("config: n must be >= 1");
    if (!(theta >= 0.0 && theta <= 1.0))
        throw ConfigError("config: theta must lie in [0, 1], got " + std::to_string(theta));
    if (lambda1 == 0.0) throw ConfigError("config: lambda1 must be nonzero (lambda1 != 0)");
    if (!(lambda2 > 0.0)) throw ConfigError("config: lambda2 must be > 0");
    if (!(mu0 > 0.0)) throw ConfigError("config: mu0 must be > 0");
    if (!(sigma > 0.0)) throw ConfigError("config: sigma must be > 0");
    if (!(sigma_d > 0.0)) throw ConfigError("config: sigma_D must be > 0");
    if (L < 1) throw ConfigError("config: L must be >= 1");
}

std::vector<std::pair<std::string, std::string>> SimConfig::as_key_values() const {
    auto real = [](double v) {
        std::ostringstream os;
        os.precision(17);
        os << v;
        return os.str();
    };
    return {
        {"T", real(T)},
        {"J", std::to_string(J)},
        {"n", std::to_string(n)},
        {"theta", real(theta)},
        {"lambda1", real(lambda1)},
        {"lambda2", real(lambda2)},
        {"mu0", real(mu0)},
        {"sigma", real(sigma)},
        {"sigma_D", real(sigma_d)},
        {"H_s", real(H_s)},
        {"L", std::to_string(L)},
        {"base_seed", std::to_string(base_seed)},
        {"g_mode", g_mode == GMode::constant ? "constant" : "analytic"},
        {"out_dir", out_dir},
    };
}

SimConfig parse_config(std::istream& in,
                       const std::vector<std::pair<std::string, std::string>>& overrides) {
    SimConfig cfg;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config: line " + std::to_string(lineno) +
                              " is not of the form key=value: '" + line + "'");
        apply(cfg, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    }
    for (const auto& [key, value] : overrides) apply(cfg, key, value);
    cfg.validate();
    return cfg;
}

SimConfig parse_config_file(const std::string& path,
                            const std::vector<std::pair<std::string, std::string>>& overrides) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config: cannot read file '" + path + "'");
    return parse_config(in, overrides);
}

void check_theta_stability(const SimConfig& cfg, bool allow_unstable) {
    if (cfg.theta >= 0.5) return;
    const double h = cfg.h();
    if (cfg.k() >= 0.5 * h * h && !allow_unstable)
        throw ConfigError(
            "config: theta < 1/2 requires k = o(h^2); got theta = " + std::to_string(cfg.theta) +
            ", k = " + std::to_string(cfg.k()) + " >= h^2/2 = " + std::to_string(0.5 * h * h) +
            " (pass --allow-unstable-theta to run anyway)");
}

}  // namespace mllg
