#include "qinsch/config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "qinsch/errors.hpp"

namespace qinsch {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

[[noreturn]] void fail(int line, const std::string& text, const std::string& why) {
    throw ConfigError("config line " + std::to_string(line) + ": " + why + " ('" + text + "')");
}

double parse_double(int line, const std::string& text, const std::string& value) {
    std::size_t used = 0;
    double x = 0.0;
    try {
        x = std::stod(value, &used);
    } catch (const std::exception&) {
        fail(line, text, "expected a number, got '" + value + "'");
    }
    if (used != value.size()) fail(line, text, "trailing characters after number '" + value + "'");
    return x;
}

long long parse_int(int line, const std::string& text, const std::string& value) {
    std::size_t used = 0;
    long long x = 0;
    try {
        x = std::stoll(value, &used);
    } catch (const std::exception&) {
        fail(line, text, "expected an integer, got '" + value + "'");
    }
    if (used != value.size()) fail(line, text, "trailing characters after integer '" + value + "'");
    return x;
}

} // namespace

PhysParams Config::phys() const {
    if (params.epsilon && params.alpha) {
        throw ConfigError("config: params.epsilon and params.alpha are mutually exclusive");
    }
    if (params.alpha) {
        return PhysParams::from_alpha(*params.alpha, params.nu, params.kappa, params.s,
                                      params.delta);
    }
    const double eps = params.epsilon ? *params.epsilon : -0.5;
    return PhysParams::from_epsilon(eps, params.nu, params.kappa, params.s, params.delta);
}

TorusGrid Config::make_grid() const { return TorusGrid::square(grid.dim, grid.n, grid.length); }

PicardSettings Config::picard_settings() const {
    PicardSettings s;
    s.tol = picard.tol;
    s.max_iter = picard.max_iter;
    s.dt_backoff = picard.dt_backoff;
    s.max_backoffs = picard.max_backoffs;
    return s;
}

Schedule Config::schedule() const { return Schedule{time.dt, time.t_end}; }

Config parse_config(const std::string& text) {
    Config cfg;
    int eps_line = -1, alpha_line = -1;
    bool noise_given = false, seed_given = false;
    int noise_line = -1;

    std::istringstream in(text);
    std::string raw;
    int lineno = 0;
    while (std::getline(in, raw)) {
        ++lineno;
        std::string line = raw;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;

        const auto eq = line.find('=');
        if (eq == std::string::npos) fail(lineno, raw, "expected 'section.key = value'");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty() || value.empty()) fail(lineno, raw, "empty key or value");

        if (key == "grid.dim") {
            const long long d = parse_int(lineno, raw, value);
            if (d != 2 && d != 3) fail(lineno, raw, "grid.dim must be 2 or 3");
            cfg.grid.dim = static_cast<int>(d);
        } else if (key == "grid.n") {
            const long long n = parse_int(lineno, raw, value);
            if (n < 8 || n % 2 != 0) fail(lineno, raw, "grid.n must be even and >= 8");
            cfg.grid.n = static_cast<int>(n);
        } else if (key == "grid.length") {
            const double L = parse_double(lineno, raw, value);
            if (!(L > 0.0)) fail(lineno, raw, "grid.length must be positive");
            cfg.grid.length = L;
        } else if (key == "params.epsilon") {
            const double e = parse_double(lineno, raw, value);
            if (!(e > -1.0 && e <= 0.0)) fail(lineno, raw, "params.epsilon must lie in (-1, 0]");
            cfg.params.epsilon = e;
            eps_line = lineno;
        } else if (key == "params.alpha") {
            const double a = parse_double(lineno, raw, value);
            if (!(a >= 0.0 && a < 1.0)) fail(lineno, raw, "params.alpha must lie in [0, 1)");
            cfg.params.alpha = a;
            alpha_line = lineno;
        } else if (key == "params.nu") {
            const double v = parse_double(lineno, raw, value);
            if (!(v > 0.0)) fail(lineno, raw, "params.nu must be positive");
            cfg.params.nu = v;
        } else if (key == "params.kappa") {
            const double v = parse_double(lineno, raw, value);
            if (!(v > 0.0)) fail(lineno, raw, "params.kappa must be positive");
            cfg.params.kappa = v;
        } else if (key == "params.s") {
            const double v = parse_double(lineno, raw, value);
            if (!(v >= 1.0)) fail(lineno, raw, "params.s must be >= 1");
            cfg.params.s = v;
        } else if (key == "params.delta") {
            const double v = parse_double(lineno, raw, value);
            if (!(v >= 0.0)) fail(lineno, raw, "params.delta must be >= 0");
            cfg.params.delta = v;
        } else if (key == "time.dt") {
            const double v = parse_double(lineno, raw, value);
            if (!(v > 0.0)) fail(lineno, raw, "time.dt must be positive");
            cfg.time.dt = v;
        } else if (key == "time.t_end") {
            const double v = parse_double(lineno, raw, value);
            if (!(v >= 0.0)) fail(lineno, raw, "time.t_end must be >= 0");
            cfg.time.t_end = v;
        } else if (key == "picard.tol") {
            const double v = parse_double(lineno, raw, value);
            if (!(v > 0.0)) fail(lineno, raw, "picard.tol must be positive");
            cfg.picard.tol = v;
        } else if (key == "picard.max_iter") {
            const long long v = parse_int(lineno, raw, value);
            if (v < 1) fail(lineno, raw, "picard.max_iter must be >= 1");
            cfg.picard.max_iter = static_cast<int>(v);
        } else if (key == "picard.dt_backoff") {
            const double v = parse_double(lineno, raw, value);
            if (!(v > 0.0 && v < 1.0)) fail(lineno, raw, "picard.dt_backoff must lie in (0, 1)");
            cfg.picard.dt_backoff = v;
        } else if (key == "picard.max_backoffs") {
            const long long v = parse_int(lineno, raw, value);
            if (v < 0) fail(lineno, raw, "picard.max_backoffs must be >= 0");
            cfg.picard.max_backoffs = static_cast<int>(v);
        } else if (key == "init.phi_preset") {
            cfg.init.phi_preset = value;
        } else if (key == "init.u_preset") {
            cfg.init.u_preset = value;
        } else if (key == "init.noise_amp") {
            const double v = parse_double(lineno, raw, value);
            if (!(v >= 0.0)) fail(lineno, raw, "init.noise_amp must be >= 0");
            cfg.init.noise_amp = v;
            noise_given = true;
            noise_line = lineno;
        } else if (key == "init.seed") {
            const long long v = parse_int(lineno, raw, value);
            if (v < 0) fail(lineno, raw, "init.seed must be >= 0");
            cfg.init.seed = static_cast<unsigned long long>(v);
            seed_given = true;
        } else if (key == "output.dir") {
            cfg.output.dir = value;
        } else if (key == "output.every") {
            const long long v = parse_int(lineno, raw, value);
            if (v < 1) fail(lineno, raw, "output.every must be >= 1");
            cfg.output.every = static_cast<int>(v);
        } else if (key == "output.checkpoint_every") {
            const long long v = parse_int(lineno, raw, value);
            if (v < 0) fail(lineno, raw, "output.checkpoint_every must be >= 0");
            cfg.output.checkpoint_every = static_cast<int>(v);
        } else {
            fail(lineno, raw, "unknown key '" + key + "'");
        }
    }

    if (cfg.params.epsilon && cfg.params.alpha) {
        throw ConfigError("config: params.epsilon (line " + std::to_string(eps_line) +
                          ") conflicts with params.alpha (line " + std::to_string(alpha_line) +
                          "): give exactly one");
    }
    if (noise_given && cfg.init.noise_amp > 0.0 && !seed_given) {
        throw ConfigError("config line " + std::to_string(noise_line) +
                          ": init.seed is mandatory when init.noise_amp > 0");
    }
    return cfg;
}

Config load_config_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("config: cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

} // namespace qinsch
