#pragma once

#include <optional>
#include <string>

#include "qinsch/stepper.hpp"

namespace qinsch {

/// Run configuration, parsed from line-oriented "section.key = value" text
/// with '#' comments. Exactly one of params.epsilon / params.alpha may be
/// given; the other is derived.
struct Config {
    struct Grid {
        int dim = 2;
        int n = 64;
        double length = 2.0 * std::numbers::pi;
    } grid;

    struct Params {
        std::optional<double> epsilon;  ///< as given in the file
        std::optional<double> alpha;    ///< as given in the file
        double nu = 1.0;
        double kappa = 1.0;
        double s = 1.6;
        double delta = 1e-6;
    } params;

    struct Time {
        double dt = 1e-3;
        double t_end = 0.2;
    } time;

    struct Picard {
        double tol = 1e-10;
        int max_iter = 200;
        double dt_backoff = 0.5;
        int max_backoffs = 10;
    } picard;

    struct Init {
        std::string phi_preset = "spinodal";
        std::string u_preset = "zero";
        double noise_amp = 0.01;
        unsigned long long seed = 1;
    } init;

    struct Output {
        std::string dir = "out";
        int every = 1;             ///< CSV row every N accepted steps
        int checkpoint_every = 0;  ///< 0 disables checkpoints
    } output;

    /// Resolved physical parameters (default epsilon = -0.5 when neither
    /// epsilon nor alpha is given).
    PhysParams phys() const;
    TorusGrid make_grid() const;
    PicardSettings picard_settings() const;
    Schedule schedule() const;
};

Config parse_config(const std::string& text);
Config load_config_file(const std::string& path);

} // namespace qinsch
