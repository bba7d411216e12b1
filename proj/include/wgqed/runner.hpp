#pragma once

// Execution of run configurations and CSV / JSON emission.

#include <algorithm>
#include <atomic>
#include <cctype>
#include <charconv>
#include <cstddef>
#include <exception>
#include <filesystem>
#include <fstream>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include <json.hpp>

#include "wgqed/config.hpp"
#include "wgqed/errors.hpp"
#include "wgqed/presets.hpp"
#include "wgqed/scenarios.hpp"

namespace wgqed {

inline constexpr std::string_view kCsvHeader = "t,t_over_tau1,re_B1,im_B1,re_B2,im_B2,P1,P2,C,P_s,P_a,norm";

/// Decimal with 17 significant digits, as printf("%.17g").
inline void append_real(std::string& out, double x) {
    char buf[40];
    const auto res = std::to_chars(buf, buf + sizeof buf, x, std::chars_format::general, 17);
    out.append(buf, res.ptr);
}

struct RunArtifacts {
    std::optional<std::string> preset;
    ScenarioInputs inputs;
    ScenarioSpec spec;
    ScenarioResult result;
    double omega_A = 0.0;
};

inline RunArtifacts execute(const RunConfig& cfg) {
    RunArtifacts out;
    out.preset = cfg.preset;
    out.inputs = cfg.inputs;
    out.omega_A = resolve_omega_A(cfg.inputs);
    out.spec = resolve(cfg.inputs);
    out.result = run_scenario(out.spec);
    return out;
}

inline std::string format_csv(const ScenarioResult& r, std::size_t stride = 1) {
    if (stride < 1) throw ValidationError("stride", "must be at least 1");
    const auto& obs = r.observables;
    std::string out(kCsvHeader);
    out += '\n';
    out.reserve(obs.size() / stride * 256 + 128);
    for (std::size_t i = 0; i < obs.size(); i += stride) {
        const double t = r.times[i];
        const double fields[] = {t,
                                 t / r.meta.time_unit,
                                 r.bare[i][0].real(),
                                 r.bare[i][0].imag(),
                                 r.bare[i][1].real(),
                                 r.bare[i][1].imag(),
                                 obs.p1[i],
                                 obs.p2[i],
                                 obs.concurrence[i],
                                 obs.ps[i],
                                 obs.pa[i],
                                 obs.norm[i]};
        bool first = true;
        for (double f : fields) {
            if (!first) out += ',';
            first = false;
            append_real(out, f);
        }
        out += '\n';
    }
    return out;
}

inline nlohmann::json mode_json(const ModeParams& m) {
    return {{"mode", m.index.name()},
            {"m", m.index.m},
            {"n", m.index.n},
            {"Omega", m.Omega},
            {"v", m.v},
            {"k0", m.k0},
            {"lambda", m.lambda},
            {"gamma", m.gamma},
            {"gamma_l1", m.gamma_l1},
            {"gamma_l2", m.gamma_l2},
            {"phase_turns", m.phase_turns},
            {"phi", m.phi},
            {"tau", m.tau},
            {"alpha_re", m.alpha.real()},
            {"alpha_im", m.alpha.imag()},
            {"gamma_tau", m.gamma * m.tau}};
}

inline nlohmann::json metadata_json(const RunArtifacts& a, std::size_t stride) {
    const auto& spec = a.spec;
    const auto& meta = a.result.meta;
    nlohmann::json modes = nlohmann::json::array();
    for (const auto& m : spec.modes) modes.push_back(mode_json(m));

    nlohmann::json md = {
        {"preset", a.preset ? nlohmann::json(*a.preset) : nlohmann::json(nullptr)},
        {"label", spec.label},
        {"omega_A", a.omega_A},
        {"guide", {{"a", a.inputs.guide.a}, {"b", a.inputs.guide.b}, {"c", a.inputs.guide.c}}},
        {"modes", modes},
        {"gamma_tau", meta.gamma_tau},
        {"phi_mod_2pi", meta.phi_mod},
        {"Gamma1", spec.Gamma1},
        {"Gamma2", spec.Gamma2},
        {"delta", spec.delta},
        {"delta_expr", a.inputs.delta_expr},
        {"delta_over_gamma1", spec.delta / spec.modes.front().gamma},
        {"delta_legend", a.inputs.delta_sweep},
        {"omega_osc", meta.omega_osc},
        {"initial", spec.initial.name()},
        {"basis", to_string(spec.basis)},
        {"t_max", spec.t_max},
        {"samples", spec.samples},
        {"stride", stride},
        {"dt", meta.dt},
        {"refinements", meta.refinements},
        {"refine_estimate", meta.refine_estimate},
        {"time_axis", meta.time_unit_is_tau1 ? "t/tau1" : "t*Gamma"},
        {"time_axis_substituted", !meta.time_unit_is_tau1},
        {"time_unit", meta.time_unit},
        {"notes", a.inputs.notes},
    };
    if (spec.modes.size() > 1) {
        md["gamma2_over_gamma1"] = spec.modes[1].gamma / spec.modes[0].gamma;
        md["tau2_over_tau1"] = spec.modes[0].tau > 0.0 ? nlohmann::json(spec.modes[1].tau / spec.modes[0].tau)
                                                       : nlohmann::json(nullptr);
    }
    return md;
}

inline std::string format_json(const RunArtifacts& a, std::size_t stride = 1) {
    if (stride < 1) throw ValidationError("stride", "must be at least 1");
    const auto& r = a.result;
    const auto& obs = r.observables;
    std::vector<std::vector<double>> cols(12);
    for (std::size_t i = 0; i < obs.size(); i += stride) {
        cols[0].push_back(r.times[i]);
        cols[1].push_back(r.times[i] / r.meta.time_unit);
        cols[2].push_back(r.bare[i][0].real());
        cols[3].push_back(r.bare[i][0].imag());
        cols[4].push_back(r.bare[i][1].real());
        cols[5].push_back(r.bare[i][1].imag());
        cols[6].push_back(obs.p1[i]);
        cols[7].push_back(obs.p2[i]);
        cols[8].push_back(obs.concurrence[i]);
        cols[9].push_back(obs.ps[i]);
        cols[10].push_back(obs.pa[i]);
        cols[11].push_back(obs.norm[i]);
    }
    nlohmann::ordered_json columns;
    std::size_t k = 0;
    std::string_view header = kCsvHeader;
    while (!header.empty()) {
        const auto comma = header.find(',');
        columns[std::string(header.substr(0, comma))] = cols[k++];
        header = comma == std::string_view::npos ? std::string_view{} : header.substr(comma + 1);
    }
    nlohmann::ordered_json doc;
    doc["columns"] = columns;
    doc["metadata"] = nlohmann::ordered_json::parse(metadata_json(a, stride).dump());
    return doc.dump(1) + "\n";
}

inline void write_file(const std::filesystem::path& path, std::string_view content) {
    std::error_code ec;
    if (path.has_parent_path()) {
        std::filesystem::create_directories(path.parent_path(), ec);
        if (ec) throw IoError("cannot create directory: " + ec.message(), path.parent_path().string());
    }
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw IoError("cannot open for writing", path.string());
    f.write(content.data(), static_cast<std::streamsize>(content.size()));
    f.close();
    if (!f) throw IoError("write failed", path.string());
}

inline void emit(const RunArtifacts& a, OutputFormat format, const std::filesystem::path& path,
                 std::size_t stride = 1) {
    write_file(path, format == OutputFormat::csv ? format_csv(a.result, stride) : format_json(a, stride));
}

/// Runs a configuration without a sweep and writes its output file.
inline RunArtifacts run(const RunConfig& cfg) {
    if (cfg.output.empty()) throw ValidationError("output", "an output path is required");
    auto a = execute(cfg);
    emit(a, cfg.format, cfg.output, cfg.stride);
    return a;
}

/// File-name fragment for a sweep value: "1.5g1+2g2" -> "1.5g1p2g2".
inline std::string sanitize_value(std::string_view value) {
    std::string out;
    for (char c : value) {
        const auto u = static_cast<unsigned char>(c);
        if (std::isalnum(u) || c == '.' || c == '-') {
            out += c;
        } else if (c == '+') {
            out += 'p';
        } else if (c == '/') {
            out += "over";
        } else if (c == '*' || c == ' ' || c == '(' || c == ')') {
            continue;
        } else {
            out += '_';
        }
    }
    return out.empty() ? "value" : out;
}

struct SweepItem {
    std::string value;
    std::filesystem::path path;
};

struct SweepReport {
    std::vector<SweepItem> items;
    std::filesystem::path manifest;
};

inline std::vector<SweepItem> sweep_outputs(const RunConfig& cfg) {
    if (!cfg.sweep) throw ValidationError("sweep", "configuration has no sweep block");
    if (cfg.output.empty()) throw ValidationError("output", "an output path is required");
    const std::filesystem::path base(cfg.output);
    const std::string ext = cfg.format == OutputFormat::csv ? ".csv" : ".json";
    const std::string stem = base.stem().string();
    std::vector<SweepItem> items;
    std::set<std::string> used;
    for (const auto& value : cfg.sweep->values) {
        std::string name = stem + "_" + cfg.sweep->parameter + "_" + sanitize_value(value);
        std::string unique = name;
        for (int k = 2; used.count(unique); ++k) unique = name + "_" + std::to_string(k);
        used.insert(unique);
        items.push_back({value, base.parent_path() / (unique + ext)});
    }
    return items;
}

/// Runs every sweep value in parallel, then writes the manifest.
inline SweepReport sweep(const RunConfig& cfg, unsigned max_threads = 0) {
    SweepReport report;
    report.items = sweep_outputs(cfg);
    const std::size_t n = report.items.size();

    std::vector<std::exception_ptr> errors(n);
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < n; i = next++) {
            try {
                RunConfig item = cfg;
                item.sweep.reset();
                apply_parameter(item.inputs, cfg.sweep->parameter, report.items[i].value);
                item.output = report.items[i].path.string();
                run(item);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    unsigned threads = max_threads ? max_threads : std::max(1u, std::thread::hardware_concurrency());
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, n));
    std::vector<std::thread> pool;
    for (unsigned k = 0; k < threads; ++k) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
    for (const auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }

    const std::filesystem::path base(cfg.output);
    report.manifest = base.parent_path() / (base.stem().string() + "_manifest.json");
    nlohmann::ordered_json manifest;
    manifest["preset"] = cfg.preset ? nlohmann::ordered_json(*cfg.preset) : nlohmann::ordered_json(nullptr);
    manifest["parameter"] = cfg.sweep->parameter;
    manifest["format"] = to_string(cfg.format);
    manifest["outputs"] = nlohmann::ordered_json::array();
    for (const auto& item : report.items) {
        manifest["outputs"].push_back({{"value", item.value}, {"file", item.path.filename().string()}});
    }
    write_file(report.manifest, manifest.dump(1) + "\n");
    return report;
}

}  // namespace wgqed
