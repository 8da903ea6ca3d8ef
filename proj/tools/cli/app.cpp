#include "app.hpp"

#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "commands.hpp"
#include "config.hpp"
#include "ptscatter/errors.hpp"
#include "selftest.hpp"

namespace ptscatter::cli {

namespace {

// Raw flag values of one subcommand; only flags actually given are applied.
struct Flags {
    std::vector<std::string> xi;
    std::string xi_range, ka_range, mode, out, config;
    std::vector<std::string> formats, quantities;
    double tol = 0.0;
    double photon_energy = 0.0, plasma_energy = 0.0, damping_energy = 0.0, half_length = 0.0, half_height = 0.0;
    bool solve_b = false;
    std::vector<std::pair<CLI::Option*, std::function<void(nlohmann::json&)>>> bindings;
};

template <class T>
void add_bound(CLI::App* cmd, Flags& f, const std::string& name, T& target, const std::string& key,
          const std::string& help) {
    CLI::Option* opt = cmd->add_option(name, target, help);
    if constexpr (std::is_same_v<T, std::vector<std::string>>) {
        opt->delimiter(',');
    }
    f.bindings.emplace_back(opt, [&target, key](nlohmann::json& j) { j[key] = target; });
}

void add_sweep_flags(CLI::App* cmd, Flags& f) {
    add_bound(cmd, f, "--xi", f.xi, "xi", "xi value(s); repeat or comma-separate");
    add_bound(cmd, f, "--xi-range", f.xi_range, "xi_range", "xi grid A:B:N");
    add_bound(cmd, f, "--ka-range", f.ka_range, "ka_range", "ka grid A:B:N");
    add_bound(cmd, f, "--mode", f.mode, "mode", "derivative mode: fixed-xi | fixed-v");
    add_bound(cmd, f, "--tol", f.tol, "tol", "root tolerance");
}

void add_output_flags(CLI::App* cmd, Flags& f) {
    add_bound(cmd, f, "--out", f.out, "out", "output directory");
    add_bound(cmd, f, "--format", f.formats, "format", "csv | json | svg; repeatable");
    cmd->add_option("--config", f.config, "JSON config file; flags override it");
}

SweepConfig build_config(const Flags& f) {
    SweepConfig cfg;
    if (!f.config.empty()) {
        apply_json(cfg, read_config_file(f.config));
    }
    nlohmann::json overrides = nlohmann::json::object();
    for (const auto& [opt, apply] : f.bindings) {
        if (opt->count() > 0) {
            apply(overrides);
        }
    }
    if (f.solve_b) {
        overrides["solve_b"] = true;
    }
    apply_json(cfg, overrides);
    return cfg;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Scattering, delay times and spectral singularities of a balanced gain/loss barrier", "ptscatter"};
    app.set_version_flag("--version", kToolVersion);
    app.require_subcommand(1);

    Flags scan, peaks, sing, timing, phys;
    auto* c_scan = app.add_subcommand("scan", "sweep |T|^2, phase and delay over a (xi, ka) grid");
    add_sweep_flags(c_scan, scan);
    add_output_flags(c_scan, scan);
    add_bound(c_scan, scan, "--quantities", scan.quantities, "quantities", "probability,phase,delay,residuals");

    auto* c_peaks = app.add_subcommand("peaks", "transmission maxima along ka");
    add_sweep_flags(c_peaks, peaks);
    add_output_flags(c_peaks, peaks);

    auto* c_sing = app.add_subcommand("singularities", "spectral singularities in a (xi, ka) box");
    add_sweep_flags(c_sing, sing);
    add_output_flags(c_sing, sing);

    auto* c_timing = app.add_subcommand("timing", "delay and phase times with probability overlays");
    add_sweep_flags(c_timing, timing);
    add_output_flags(c_timing, timing);

    auto* c_phys = app.add_subcommand("physical", "waveguide units: v, xi, ka, tau0 and the singular geometry");
    add_output_flags(c_phys, phys);
    add_bound(c_phys, phys, "--photon-energy", phys.photon_energy, "photon_energy", "hbar omega, eV");
    add_bound(c_phys, phys, "--plasma-energy", phys.plasma_energy, "plasma_energy", "hbar omega_p, eV");
    add_bound(c_phys, phys, "--damping-energy", phys.damping_energy, "damping_energy", "hbar times damping rate, eV");
    add_bound(c_phys, phys, "--half-length", phys.half_length, "half_length", "a, nm");
    add_bound(c_phys, phys, "--half-height", phys.half_height, "half_height", "b, nm (default: unconfined)");
    c_phys->add_flag("--solve-b", phys.solve_b, "find the b that lands on the first singularity");

    auto* c_self = app.add_subcommand("selftest", "run the built-in invariant suites");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (c_self->parsed()) return run_selftest(out);
        if (c_scan->parsed()) return cmd_scan(build_config(scan), out);
        if (c_peaks->parsed()) return cmd_peaks(build_config(peaks), out);
        if (c_sing->parsed()) return cmd_singularities(build_config(sing), out);
        if (c_timing->parsed()) return cmd_timing(build_config(timing), out);
        if (c_phys->parsed()) return cmd_physical(build_config(phys), out);
    } catch (const UsageError& e) {
        err << "usage error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const IoError& e) {
        err << "I/O error: " << e.what() << "\n";
        return kExitIo;
    } catch (const DomainError& e) {
        err << "domain error: " << e.what() << "\n";
        return kExitDomain;
    } catch (const SingularPointError& e) {
        err << "domain error: " << e.what() << "\n";
        return kExitDomain;
    } catch (const UnrepresentableError& e) {
        err << "domain error: " << e.what() << "\n";
        return kExitDomain;
    } catch (const NotFoundError& e) {
        err << "domain error: " << e.what() << "\n";
        return kExitDomain;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitFailure;
    }
    return kExitUsage;
}

}  // namespace ptscatter::cli
