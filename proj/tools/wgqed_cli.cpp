#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "wgqed/wgqed.hpp"

namespace {

enum Exit { kOk = 0, kUsage = 1, kNumerical = 2, kIo = 3 };

std::string read_text(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw wgqed::IoError("cannot open for reading", path);
    std::ostringstream ss;
    ss << f.rdbuf();
    if (f.bad()) throw wgqed::IoError("read failed", path);
    return ss.str();
}

struct RunOptions {
    std::string config;
    std::string preset;
    std::optional<std::string> delta, t_max, dt, format, output;
    std::optional<double> n;
};

wgqed::RunConfig load(const RunOptions& o) {
    wgqed::RunConfig cfg;
    if (!o.config.empty()) {
        cfg = wgqed::parse_config(read_text(o.config));
    } else {
        cfg.preset = o.preset;
        cfg.inputs = wgqed::preset_inputs(o.preset);
    }
    if (o.delta) cfg.inputs.delta_expr = *o.delta;
    if (o.n) {
        if (*o.n < 0.0) throw wgqed::ValidationError("n", "must be nonnegative");
        cfg.inputs.n = *o.n;
        cfg.inputs.d.reset();
    }
    if (o.t_max) cfg.inputs.t_max_expr = *o.t_max;
    if (o.dt) cfg.inputs.dt_expr = *o.dt;
    if (o.format) cfg.format = wgqed::parse_format(*o.format);
    if (o.output) cfg.output = *o.output;
    return cfg;
}

int report(const char* kind, const std::exception& e, int code) {
    std::fprintf(stderr, "wgqed: %s: %s\n", kind, e.what());
    return code;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Two emitters in a rectangular waveguide: delayed collective decay and entanglement"};
    app.require_subcommand(1);

    RunOptions opts;
    auto* run = app.add_subcommand("run", "Run one scenario and write CSV or JSON");
    auto* config_opt = run->add_option("--config", opts.config, "Configuration file (JSON)");
    auto* preset_opt = run->add_option("--preset", opts.preset, "Preset name, see list-presets");
    config_opt->excludes(preset_opt);
    run->add_option("--delta", opts.delta, "Detuning expression, e.g. 2g1 or 5(g1+g2)");
    run->add_option("--n", opts.n, "Separation as phi_1 = 2 n pi");
    run->add_option("--t-max", opts.t_max, "End time (expression)");
    run->add_option("--dt", opts.dt, "Integrator step (expression)");
    run->add_option("--format", opts.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    run->add_option("--output", opts.output, "Output path");

    std::string sweep_config;
    auto* sweep = app.add_subcommand("sweep", "Run every value of a configured sweep");
    sweep->add_option("--config", sweep_config, "Configuration file with a sweep block")->required();

    auto* validate = app.add_subcommand("validate", "Cross-check the integrator against closed forms");
    auto* list = app.add_subcommand("list-presets", "List figure presets");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kUsage;
    }

    try {
        if (*run) {
            if (opts.config.empty() && opts.preset.empty()) {
                std::fprintf(stderr, "wgqed: run needs --config or --preset\n");
                return kUsage;
            }
            const auto cfg = load(opts);
            if (cfg.sweep) throw wgqed::ConfigError("configuration has a sweep block; use the sweep command");
            const auto a = wgqed::run(cfg);
            std::printf("wrote %s (%zu samples, dt = %.6g, %s)\n", cfg.output.c_str(), a.result.times.size(),
                        a.result.meta.dt, a.spec.label.empty() ? "custom" : a.spec.label.c_str());
        } else if (*sweep) {
            const auto cfg = wgqed::parse_config(read_text(sweep_config));
            const auto rep = wgqed::sweep(cfg);
            for (const auto& item : rep.items) std::printf("wrote %s\n", item.path.string().c_str());
            std::printf("wrote %s\n", rep.manifest.string().c_str());
        } else if (*validate) {
            const auto results = wgqed::run_validation();
            bool ok = true;
            for (const auto& r : results) {
                ok = ok && r.pass;
                if (r.error.empty()) {
                    std::printf("%-4s  %-62s  %.3e  (tol %.0e)\n", r.pass ? "PASS" : "FAIL", r.name.c_str(),
                                r.measured, r.tolerance);
                } else {
                    std::printf("FAIL  %-62s  error: %s\n", r.name.c_str(), r.error.c_str());
                }
            }
            return ok ? kOk : kNumerical;
        } else if (*list) {
            for (const auto& name : wgqed::preset_names()) {
                std::printf("%-7s %s\n", name.c_str(), wgqed::preset_summary(name).c_str());
            }
        }
    } catch (const wgqed::IoError& e) {
        return report("I/O error", e, kIo);
    } catch (const wgqed::NumericalError& e) {
        return report("numerical failure", e, kNumerical);
    } catch (const wgqed::ConfigError& e) {
        return report("configuration error", e, kUsage);
    } catch (const wgqed::DomainError& e) {
        return report("invalid scenario", e, kUsage);
    } catch (const std::exception& e) {
        return report("error", e, kNumerical);
    }
    return kOk;
}
