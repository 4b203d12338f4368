// qinsch: driver for the quasi-incompressible NS/Cahn-Hilliard solver.
//
// Commands:
//   run           [config] [--output DIR]     time march + diagnostics CSV
//   sweep-alpha   [config] --alphas a1,a2,..  incompressible-limit rate experiment
//   verify        [--full]                    invariant suites, exit 3 on failure
//   manufactured  [config] --dts d1,d2,d3     temporal order study
//
// Exit codes: 0 success, 1 usage/config error, 2 solver failure,
// 3 verification failure. QINSCH_OUTPUT_DIR overrides output.dir.

#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "qinsch/checkpoint.hpp"
#include "qinsch/csv.hpp"
#include "qinsch/errors.hpp"
#include "qinsch/init.hpp"
#include "qinsch/operators.hpp"
#include "qinsch/verify.hpp"

namespace {

using namespace qinsch;

void usage(std::ostream& out) {
    out << "usage: qinsch <command> [config-file] [options]\n"
           "  run          [config] [--output DIR] [--resume CHECKPOINT]\n"
           "  sweep-alpha  [config] --alphas a1,a2,...\n"
           "  verify       [--full]\n"
           "  manufactured [config] --dts d1,d2,d3\n";
}

std::vector<double> parse_list(const std::string& arg, const char* what) {
    std::vector<double> out;
    std::istringstream ss(arg);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        try {
            std::size_t used = 0;
            out.push_back(std::stod(tok, &used));
            if (used != tok.size()) throw std::invalid_argument(tok);
        } catch (const std::exception&) {
            throw ConfigError(std::string(what) + ": bad number '" + tok + "'");
        }
    }
    if (out.empty()) throw ConfigError(std::string(what) + ": empty list");
    return out;
}

struct Args {
    std::string config_path;
    std::string output_override;
    std::string resume_path;
    std::string alphas;
    std::string dts;
    bool full = false;
};

Args parse_args(int argc, char** argv, int first) {
    Args a;
    for (int i = first; i < argc; ++i) {
        const std::string arg = argv[i];
        if (arg == "--full") {
            a.full = true;
        } else if (arg == "--output") {
            if (++i >= argc) throw ConfigError("--output needs a directory");
            a.output_override = argv[i];
        } else if (arg == "--resume") {
            if (++i >= argc) throw ConfigError("--resume needs a checkpoint path");
            a.resume_path = argv[i];
        } else if (arg == "--alphas") {
            if (++i >= argc) throw ConfigError("--alphas needs a list");
            a.alphas = argv[i];
        } else if (arg == "--dts") {
            if (++i >= argc) throw ConfigError("--dts needs a list");
            a.dts = argv[i];
        } else if (!arg.empty() && arg[0] == '-') {
            throw ConfigError("unknown option '" + arg + "'");
        } else if (a.config_path.empty()) {
            a.config_path = arg;
        } else {
            throw ConfigError("unexpected argument '" + arg + "'");
        }
    }
    return a;
}

Config load_or_default(const Args& a) {
    Config cfg = a.config_path.empty() ? Config{} : load_config_file(a.config_path);
    if (const char* env = std::getenv("QINSCH_OUTPUT_DIR")) {
        if (*env) cfg.output.dir = env;
    }
    if (!a.output_override.empty()) cfg.output.dir = a.output_override;
    return cfg;
}

int cmd_run(const Args& args) {
    const Config cfg = load_or_default(args);
    const PhysParams p = cfg.phys();
    MixtureState state;
    if (args.resume_path.empty()) {
        state = make_initial_state(cfg, p);
    } else {
        const Checkpoint cp = load_checkpoint(args.resume_path);
        if (cp.state.phi.grid != cfg.make_grid()) {
            throw CheckpointError("checkpoint grid does not match the configured grid (" +
                                  args.resume_path + ")");
        }
        if (std::abs(cp.alpha - p.alpha) > 1e-12) {
            throw CheckpointError("checkpoint alpha " + std::to_string(cp.alpha) +
                                  " does not match the configured alpha " +
                                  std::to_string(p.alpha));
        }
        state = cp.state;
    }

    std::filesystem::create_directories(cfg.output.dir);
    DiagnosticsCsv csv(cfg.output.dir + "/diagnostics.csv", p, cfg.output.every);

    long steps = 0;
    MixtureState last = state;
    auto cb = [&](const MixtureState& s, const StepDiagnostics& d) {
        csv.on_step(s, d);
        ++steps;
        last = s;
        if (cfg.output.checkpoint_every > 0 && steps % cfg.output.checkpoint_every == 0) {
            char name[64];
            std::snprintf(name, sizeof(name), "/checkpoint_%06ld.bin", steps);
            save_checkpoint(cfg.output.dir + name, s, p.alpha);
        }
    };
    run(state, p, cfg.schedule(), cfg.picard_settings(), {}, cb, /*keep_trajectory=*/false);
    save_checkpoint(cfg.output.dir + "/final.bin", last, p.alpha);

    const EnergyReport e = total_energy(last.u, last.phi, p);
    std::cout << "run finished: t=" << last.t << " steps=" << steps << " E=" << e.total
              << " phi in [" << field_min(last.phi) << ", " << field_max(last.phi) << "]\n"
              << "diagnostics: " << csv.path() << "\n";
    return 0;
}

int cmd_sweep(const Args& args) {
    const Config cfg = load_or_default(args);
    if (args.alphas.empty()) throw ConfigError("sweep-alpha requires --alphas a1,a2,...");

    SweepSetup setup;
    const TorusGrid g = cfg.make_grid();
    const PhysParams base = cfg.phys();
    setup.u0 = make_u_preset(cfg.init.u_preset, g);
    setup.phi0 = make_phi_preset(cfg.init.phi_preset, g, cfg.init.noise_amp, cfg.init.seed);
    setup.base = base;
    setup.alphas = parse_list(args.alphas, "--alphas");
    setup.schedule = cfg.schedule();
    setup.picard = cfg.picard_settings();

    const RateReport report = alpha_sweep(setup);

    std::filesystem::create_directories(cfg.output.dir);
    const std::string path = cfg.output.dir + "/rate_report.csv";
    FILE* f = std::fopen(path.c_str(), "wb");
    if (!f) throw Error("cannot open '" + path + "'");
    std::fputs("alpha,sup_rel_energy,mu_gap,u_gap_h1,hs_diag,phi_min,phi_max\n", f);
    for (std::size_t i = 0; i < report.alphas.size(); ++i) {
        std::fprintf(f, "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n", report.alphas[i],
                     report.sup_rel_energy[i], report.mu_gap[i], report.u_gap_h1[i],
                     report.hs_diag[i], report.phi_min[i], report.phi_max[i]);
    }
    std::fclose(f);

    std::cout << "alpha-sweep summary\n  alphas:";
    for (double a : report.alphas) std::cout << " " << a;
    std::cout << "\n  sup relative energy:";
    for (double e : report.sup_rel_energy) std::cout << " " << e;
    std::cout << "\n  fitted slope: " << report.fitted_slope << "  (R^2 " << report.r_squared
              << (report.poor_fit ? ", poor fit" : "") << ")\n  halving ratios:";
    for (double r : report.halving_ratios) std::cout << " " << r;
    std::cout << "\n  report: " << path << "\n";
    if (report.aborted) {
        std::cout << "  PARTIAL: " << report.abort_reason << "\n";
        return 2;
    }
    return 0;
}

int cmd_verify(const Args& args) {
    const VerifySummary summary = run_verification(args.full);
    print_verification(summary, std::cout);
    return summary.all_pass() ? 0 : 3;
}

int cmd_manufactured(const Args& args) {
    std::vector<double> dts = {0.025, 0.0125, 0.00625};
    if (!args.dts.empty()) dts = parse_list(args.dts, "--dts");
    const ManufacturedResult m = manufactured_order_study(dts);
    std::cout << "manufactured-solution study (phi* = exp(-t) cos(x1), backward Euler)\n";
    for (std::size_t i = 0; i < m.dts.size(); ++i) {
        std::cout << "  dt=" << m.dts[i] << "  L2 error=" << m.errors[i] << "\n";
    }
    std::cout << "observed temporal order: " << m.order << "\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    if (argc < 2) {
        usage(std::cerr);
        return 1;
    }
    const std::string cmd = argv[1];
    try {
        const Args args = parse_args(argc, argv, 2);
        if (cmd == "run") return cmd_run(args);
        if (cmd == "sweep-alpha") return cmd_sweep(args);
        if (cmd == "verify") return cmd_verify(args);
        if (cmd == "manufactured") return cmd_manufactured(args);
        std::cerr << "unknown command '" << cmd << "'\n";
        usage(std::cerr);
        return 1;
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const CheckpointError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const SolverError& e) {
        std::cerr << "solver error: " << e.what() << "\n";
        return 2;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
