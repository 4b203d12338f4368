#include "qinsch/init.hpp"

#include <cmath>
#include <string>
#include <vector>

#include "qinsch/errors.hpp"
#include "qinsch/operators.hpp"

namespace qinsch {

namespace {

std::uint64_t splitmix64(std::uint64_t& x) {
    x += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = x;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

struct PresetSpec {
    std::string name;
    std::vector<double> args;
};

PresetSpec parse_preset(const std::string& spec) {
    PresetSpec out;
    const auto open = spec.find('(');
    if (open == std::string::npos) {
        out.name = spec;
        return out;
    }
    if (spec.back() != ')') {
        throw ConfigError("preset '" + spec + "': expected closing ')'");
    }
    out.name = spec.substr(0, open);
    std::string args = spec.substr(open + 1, spec.size() - open - 2);
    std::size_t pos = 0;
    while (pos <= args.size() && !args.empty()) {
        const auto comma = args.find(',', pos);
        const std::string tok = args.substr(pos, comma == std::string::npos ? std::string::npos
                                                                            : comma - pos);
        try {
            std::size_t used = 0;
            out.args.push_back(std::stod(tok, &used));
            if (used != tok.size()) throw std::invalid_argument(tok);
        } catch (const std::exception&) {
            throw ConfigError("preset '" + spec + "': bad numeric argument '" + tok + "'");
        }
        if (comma == std::string::npos) break;
        pos = comma + 1;
    }
    return out;
}

double arg_or(const PresetSpec& s, std::size_t i, double fallback) {
    return i < s.args.size() ? s.args[i] : fallback;
}

} // namespace

DeterministicRng::DeterministicRng(std::uint64_t seed) {
    std::uint64_t sm = seed;
    for (auto& s : state_) s = splitmix64(sm);
}

std::uint64_t DeterministicRng::next_bits() {
    const std::uint64_t result = rotl(state_[1] * 5, 7) * 9;
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
}

double DeterministicRng::uniform() {
    return static_cast<double>(next_bits() >> 11) * 0x1.0p-53;
}

double DeterministicRng::symmetric() { return 2.0 * uniform() - 1.0; }

ScalarField make_phi_preset(const std::string& spec, const TorusGrid& g, double noise_amp,
                            std::uint64_t seed) {
    const PresetSpec ps = parse_preset(spec);
    ScalarField phi(g);
    const int d = g.dim();

    if (ps.name == "constant") {
        const double c = arg_or(ps, 0, 0.0);
        for (double& x : phi.v) x = c;
        return phi;
    }

    if (ps.name == "spinodal") {
        const double mean_val = arg_or(ps, 0, 0.0);
        // Seeded cosine superposition over canonical modes with |k| <= n/8,
        // real and Hermitian by construction, then scaled to max|.| = amp.
        DeterministicRng rng(seed);
        const int band = std::max(1, g.n(0) / 8);
        struct Mode {
            std::array<int, 3> k;
            double amp, phase;
        };
        std::vector<Mode> modes;
        const int b2 = band * band;
        for (int k0 = -band; k0 <= band; ++k0) {
            for (int k1 = -band; k1 <= band; ++k1) {
                const int k2max = (d == 3) ? band : 0;
                for (int k2 = (d == 3) ? -band : 0; k2 <= k2max; ++k2) {
                    const int m2 = k0 * k0 + k1 * k1 + k2 * k2;
                    if (m2 == 0 || m2 > b2) continue;
                    // one representative per +-k pair
                    if (k0 < 0) continue;
                    if (k0 == 0 && k1 < 0) continue;
                    if (k0 == 0 && k1 == 0 && k2 < 0) continue;
                    Mode m;
                    m.k = {k0, k1, k2};
                    m.amp = rng.symmetric();
                    m.phase = 2.0 * std::numbers::pi * rng.uniform();
                    modes.push_back(m);
                }
            }
        }
        for (std::size_t i = 0; i < g.point_count(); ++i) {
            const auto idx = g.point_index(i);
            double acc = 0.0;
            for (const Mode& m : modes) {
                double arg = m.phase;
                for (int a = 0; a < d; ++a) arg += m.k[a] * g.freq_scale(a) * g.coord(a, idx[a]);
                acc += m.amp * std::cos(arg);
            }
            phi.v[i] = acc;
        }
        const double peak = std::max(std::abs(field_min(phi)), std::abs(field_max(phi)));
        const double scale = peak > 0.0 ? noise_amp / peak : 0.0;
        for (double& x : phi.v) x = mean_val + scale * x;
        return phi;
    }

    if (ps.name == "single-mode") {
        if (ps.args.size() < 2) {
            throw ConfigError("preset 'single-mode' needs (k, amplitude)");
        }
        const double k = ps.args[0];
        const double amp = ps.args[1];
        for (std::size_t i = 0; i < g.point_count(); ++i) {
            const auto idx = g.point_index(i);
            phi.v[i] = amp * std::cos(k * g.freq_scale(0) * g.coord(0, idx[0]));
        }
        return phi;
    }

    if (ps.name == "cos-mix") {
        if (ps.args.empty()) throw ConfigError("preset 'cos-mix' needs at least one amplitude");
        for (std::size_t i = 0; i < g.point_count(); ++i) {
            const auto idx = g.point_index(i);
            double acc = 0.0;
            for (int a = 0; a < d && a < static_cast<int>(ps.args.size()); ++a) {
                acc += ps.args[a] * std::cos(g.freq_scale(a) * g.coord(a, idx[a]));
            }
            phi.v[i] = acc;
        }
        return phi;
    }

    if (ps.name == "tanh-stripe") {
        const double L = g.length(0);
        const double w = arg_or(ps, 0, L / 16.0);
        for (std::size_t i = 0; i < g.point_count(); ++i) {
            const auto idx = g.point_index(i);
            const double x = g.coord(0, idx[0]);
            phi.v[i] = std::tanh((x - 0.25 * L) / w) - std::tanh((x - 0.75 * L) / w) - 1.0;
        }
        return dealias(phi);
    }

    throw ConfigError("unknown phi preset '" + ps.name + "'");
}

VectorField make_u_preset(const std::string& spec, const TorusGrid& g) {
    const PresetSpec ps = parse_preset(spec);
    VectorField u(g);

    if (ps.name == "zero") return u;

    if (ps.name == "taylor-green") {
        const double amp = arg_or(ps, 0, 1.0);
        const double kx = g.freq_scale(0);
        const double ky = g.freq_scale(1);
        const double kz = g.dim() == 3 ? g.freq_scale(2) : 0.0;
        for (std::size_t i = 0; i < g.point_count(); ++i) {
            const auto idx = g.point_index(i);
            const double x = kx * g.coord(0, idx[0]);
            const double y = ky * g.coord(1, idx[1]);
            const double cz = g.dim() == 3 ? std::cos(kz * g.coord(2, idx[2])) : 1.0;
            u[0].v[i] = amp * std::sin(x) * std::cos(y) * cz;
            u[1].v[i] = -amp * std::cos(x) * std::sin(y) * cz;
        }
        return u;
    }

    throw ConfigError("unknown u preset '" + ps.name + "'");
}

MixtureState make_initial_state(const Config& cfg, const PhysParams& p) {
    const TorusGrid g = cfg.make_grid();
    MixtureState s(g);
    s.t = 0.0;
    s.phi = make_phi_preset(cfg.init.phi_preset, g, cfg.init.noise_amp, cfg.init.seed);
    s.u = make_u_preset(cfg.init.u_preset, g);
    return sanitize_state(s, p);
}

} // namespace qinsch
