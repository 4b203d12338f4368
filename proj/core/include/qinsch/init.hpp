#pragma once

#include <cstdint>
#include <string>

#include "qinsch/config.hpp"

namespace qinsch {

/// phi presets, parsed from "name" or "name(arg1[,arg2,...])":
///   constant[(c)]            uniform value (default 0)
///   spinodal[(mean)]         mean + seeded noise band-limited to |k| <= n/8,
///                            scaled so max|noise| = noise_amp
///   single-mode(k,amp)       amp * cos(k * 2*pi*x0/L)
///   cos-mix(a0,a1[,a2])      sum_i a_i cos(2*pi*x_i/L_i)
///   tanh-stripe[(width)]     periodic tanh stripe across axis 0, dealiased
ScalarField make_phi_preset(const std::string& spec, const TorusGrid& g, double noise_amp,
                            std::uint64_t seed);

/// u presets: zero, taylor-green[(amp)] (divergence-free by construction).
VectorField make_u_preset(const std::string& spec, const TorusGrid& g);

/// Initial state from a config: presets applied, fields dealiased, p0 and
/// mu_p0 zero, mu_bar consistent with phi.
MixtureState make_initial_state(const Config& cfg, const PhysParams& p);

/// xoshiro256** seeded via splitmix64; identical streams across platforms
/// for a given seed (std:: distributions are implementation-defined).
class DeterministicRng {
public:
    explicit DeterministicRng(std::uint64_t seed);
    double uniform();               ///< [0, 1)
    double symmetric();             ///< [-1, 1)
private:
    std::uint64_t next_bits();
    std::uint64_t state_[4];
};

} // namespace qinsch
