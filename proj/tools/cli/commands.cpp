#include "commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <limits>

#include "format.hpp"
#include "ptscatter/core.hpp"
#include "ptscatter/errors.hpp"
#include "ptscatter/parallel.hpp"
#include "ptscatter/physical.hpp"
#include "ptscatter/singularity.hpp"
#include "ptscatter/timing.hpp"
#include "svg.hpp"

namespace ptscatter::cli {

namespace {

using ojson = nlohmann::ordered_json;
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::vector<double> require_xi(const SweepConfig& cfg, const char* cmd) {
    auto xi = cfg.xi_grid();
    if (xi.empty()) {
        throw UsageError(std::string(cmd) + ": give --xi and/or --xi-range");
    }
    return xi;
}

const GridAxis& require_ka(const SweepConfig& cfg, const char* cmd) {
    if (!cfg.ka_range) {
        throw UsageError(std::string(cmd) + ": --ka-range A:B:N is required");
    }
    return *cfg.ka_range;
}

double probability_or_inf(const BarrierPoint& p) {
    try {
        return transmission_probability(p);
    } catch (const SingularPointError&) {
        return std::numeric_limits<double>::infinity();
    }
}

// Roots inside the sweep box (padded by the exclusion radius) so that delay
// derivatives are not taken across them.
std::vector<BarrierPoint> singular_points_for(std::span<const double> xi, const GridAxis& ka, double pad) {
    const double xi_hi = xi.back() + pad;
    if (xi.back() <= 0.0) {
        return {};
    }
    const Range xr{std::max(1e-6, xi.front() - pad), xi_hi};
    const Range kr{std::max(1e-6, ka.lo - pad), ka.hi + pad};
    const GridDensity grid{std::max(64, static_cast<int>(32 * xr.width())),
                           std::max(64, static_cast<int>(16 * kr.width()))};
    std::vector<BarrierPoint> out;
    for (const auto& s : find_singularities(xr, kr, grid)) {
        out.push_back({s.xi, s.ka});
    }
    return out;
}

std::string csv_line(std::span<const double> fields) {
    std::string line;
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i) line += ',';
        line += format_double(fields[i]);
    }
    line += '\n';
    return line;
}

std::string join(const std::vector<std::string>& v, char sep) {
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) out += sep;
        out += v[i];
    }
    return out;
}

std::vector<OutputFormat> formats_or(const SweepConfig& cfg, OutputFormat fallback) {
    return cfg.formats.empty() ? std::vector<OutputFormat>{fallback} : cfg.formats;
}

bool has(const std::vector<OutputFormat>& f, OutputFormat x) { return std::find(f.begin(), f.end(), x) != f.end(); }

void finish(OutputSet& out, const RunManifest& manifest, const std::string& stem, std::ostream& log) {
    out.write(stem + ".manifest.json", manifest.to_json().dump(2) + "\n");
    for (const auto& p : out.written()) {
        log << "wrote " << p.generic_string() << "\n";
    }
}

// Table of doubles with named columns, shared by CSV and JSON writers.
struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;

    [[nodiscard]] std::string csv() const {
        std::string s = join(columns, ',') + "\n";
        for (const auto& r : rows) s += csv_line(r);
        return s;
    }
    [[nodiscard]] ojson json() const {
        ojson j;
        j["columns"] = columns;
        auto& rs = j["rows"] = ojson::array();
        for (const auto& r : rows) {
            auto row = ojson::array();
            for (const double v : r) {
                row.push_back(std::isfinite(v) ? ojson(v) : ojson(nullptr));
            }
            rs.push_back(std::move(row));
        }
        return j;
    }
};

std::string document(const RunManifest& m, ojson data) {
    ojson j;
    j["manifest"] = m.to_json();
    j["data"] = std::move(data);
    return j.dump(2) + "\n";
}

}  // namespace

ojson RunManifest::to_json() const {
    ojson j;
    j["tool"] = "ptscatter";
    j["version"] = tool_version;
    j["command"] = command;
    j["config"] = config;
    j["timestamp"] = timestamp;
    auto& h = j["grid_hashes"] = ojson::object();
    for (const auto& [k, v] : grid_hashes) h[k] = v;
    return j;
}

std::string utc_timestamp() {
    std::time_t t = std::time(nullptr);
    if (const char* env = std::getenv("SOURCE_DATE_EPOCH")) {
        char* end = nullptr;
        const long long v = std::strtoll(env, &end, 10);
        if (end != env && *end == '\0') {
            t = static_cast<std::time_t>(v);
        }
    }
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

OutputSet::OutputSet(std::filesystem::path dir) : dir_(std::move(dir)) {
    std::error_code ec;
    std::filesystem::create_directories(dir_, ec);
    if (ec || !std::filesystem::is_directory(dir_)) {
        throw IoError("cannot create output directory '" + dir_.string() + "'");
    }
}

void OutputSet::write(const std::string& name, const std::string& content) {
    const auto path = dir_ / name;
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    f << content;
    f.close();
    if (!f) {
        throw IoError("cannot write '" + path.string() + "'");
    }
    written_.push_back(path);
}

int cmd_scan(const SweepConfig& cfg, std::ostream& log) {
    const auto xi = require_xi(cfg, "scan");
    const auto& axis = require_ka(cfg, "scan");
    const auto ka = axis.values();
    const auto formats = formats_or(cfg, OutputFormat::Csv);
    if (cfg.quantities.empty()) {
        throw UsageError("scan: at least one quantity is required");
    }
    const bool want_t2 = cfg.wants(Quantity::Probability);
    const bool want_phase = cfg.wants(Quantity::Phase);
    const bool want_delay = cfg.wants(Quantity::Delay);
    const bool want_res = cfg.wants(Quantity::Residuals);

    TimingOptions topt;
    topt.mode = cfg.mode;
    if (want_delay) {
        topt.singular_points = singular_points_for(xi, axis, topt.exclusion_radius);
    }

    Table table;
    table.columns = {"xi", "ka"};
    if (want_t2) table.columns.push_back("T2");
    if (want_phase) table.columns.push_back("phase");
    if (want_delay) table.columns.push_back("delay_ratio");
    if (want_res) {
        table.columns.push_back("r1_scaled");
        table.columns.push_back("r2_scaled");
    }

    std::vector<std::vector<std::vector<double>>> blocks(xi.size());
    std::vector<double> t2_grid(xi.size() * ka.size());
    parallel_for(xi.size(), [&](std::size_t i) {
        std::vector<TimingSample> prof;
        if (want_phase || want_delay) {
            prof = timing_profile(xi[i], ka, topt);
        }
        auto& rows = blocks[i];
        rows.reserve(ka.size());
        for (std::size_t j = 0; j < ka.size(); ++j) {
            const BarrierPoint p{xi[i], ka[j]};
            const double t2 = probability_or_inf(p);
            t2_grid[i * ka.size() + j] = t2;
            std::vector<double> r{xi[i], ka[j]};
            if (want_t2) r.push_back(t2);
            if (want_phase) r.push_back(prof[j].phase);
            if (want_delay) r.push_back(prof[j].delay_ratio);
            if (want_res) {
                const auto res = resonance_residual(p);
                r.push_back(res.r1.mantissa / res.cosh_mantissa);
                r.push_back(res.r2.mantissa / res.cosh_mantissa);
            }
            rows.push_back(std::move(r));
        }
    });
    for (auto& b : blocks) {
        for (auto& r : b) table.rows.push_back(std::move(r));
    }

    RunManifest m{.command = "scan", .config = cfg.to_json(), .timestamp = utc_timestamp(),
                  .grid_hashes = {{"xi", grid_hash(xi)}, {"ka", grid_hash(ka)}}};
    OutputSet out(cfg.out_dir);
    if (has(formats, OutputFormat::Csv)) out.write("scan.csv", table.csv());
    if (has(formats, OutputFormat::Json)) out.write("scan.json", document(m, table.json()));
    if (has(formats, OutputFormat::Svg)) {
        if (xi.size() >= 2) {
            out.write("scan_heatmap.svg", heatmap_svg("Transmission probability |T|^2", ka, xi, t2_grid, "ka", "xi",
                                                      "|T|^2"));
        }
        std::vector<LineSeries> t2_series, delay_series;
        const std::size_t delay_col = table.columns.size() - (want_res ? 3 : 1);
        for (std::size_t i = 0; i < xi.size(); ++i) {
            LineSeries s{"xi = " + format_short(xi[i]), ka, {}};
            s.y.assign(t2_grid.begin() + i * ka.size(), t2_grid.begin() + (i + 1) * ka.size());
            t2_series.push_back(std::move(s));
            if (want_delay) {
                LineSeries d{"xi = " + format_short(xi[i]), ka, {}};
                for (std::size_t j = 0; j < ka.size(); ++j) d.y.push_back(table.rows[i * ka.size() + j][delay_col]);
                delay_series.push_back(std::move(d));
            }
        }
        out.write("scan_lines.svg", line_plot_svg("Transmission probability", t2_series, "ka", "|T|^2"));
        if (want_delay) {
            out.write("scan_delay.svg", line_plot_svg("Delay time", delay_series, "ka", "delay ratio"));
        }
    }
    finish(out, m, "scan", log);
    return 0;
}

int cmd_peaks(const SweepConfig& cfg, std::ostream& log) {
    const auto xi = require_xi(cfg, "peaks");
    const auto& axis = require_ka(cfg, "peaks");
    const auto formats = formats_or(cfg, OutputFormat::Csv);
    const double density = (axis.steps - 1) / (axis.hi - axis.lo);

    std::vector<std::vector<Peak>> peaks(xi.size());
    parallel_for(xi.size(), [&](std::size_t i) { peaks[i] = peak_scan(xi[i], {axis.lo, axis.hi}, density); });

    Table table;
    table.columns = {"xi", "ka", "T2", "half_width"};
    ojson series = ojson::array();
    std::vector<double> markers;
    for (std::size_t i = 0; i < xi.size(); ++i) {
        ojson s;
        s["xi"] = xi[i];
        auto& list = s["peaks"] = ojson::array();
        for (const auto& p : peaks[i]) {
            table.rows.push_back({p.xi, p.ka_position, p.height, p.half_width});
            list.push_back({{"ka", p.ka_position}, {"T2", p.height}, {"half_width", p.half_width}});
            markers.push_back(p.ka_position);
        }
        if (peaks[i].size() >= 3) {
            const auto st = peak_spacing_stats(peaks[i]);
            s["mean_spacing"] = st.mean_spacing;
            s["relative_std"] = st.relative_std;
        } else {
            s["mean_spacing"] = nullptr;
            s["relative_std"] = nullptr;
        }
        series.push_back(std::move(s));
    }

    const auto ka = axis.values();
    RunManifest m{.command = "peaks", .config = cfg.to_json(), .timestamp = utc_timestamp(),
                  .grid_hashes = {{"xi", grid_hash(xi)}, {"ka", grid_hash(ka)}}};
    OutputSet out(cfg.out_dir);
    if (has(formats, OutputFormat::Csv)) out.write("peaks.csv", table.csv());
    if (has(formats, OutputFormat::Json)) out.write("peaks.json", document(m, {{"series", series}}));
    if (has(formats, OutputFormat::Svg)) {
        std::vector<LineSeries> curves;
        for (const double x : xi) {
            LineSeries s{"xi = " + format_short(x), ka, {}};
            for (const double k : ka) s.y.push_back(probability_or_inf({x, k}));
            curves.push_back(std::move(s));
        }
        std::sort(markers.begin(), markers.end());
        out.write("peaks.svg", line_plot_svg("Transmission maxima", curves, "ka", "|T|^2", markers));
    }
    finish(out, m, "peaks", log);
    return 0;
}

int cmd_singularities(const SweepConfig& cfg, std::ostream& log) {
    if (!cfg.xi_range || !cfg.ka_range) {
        throw UsageError("singularities: --xi-range and --ka-range (A:B:N, N = grid samples) are required");
    }
    const auto& xa = *cfg.xi_range;
    const auto& ka = *cfg.ka_range;
    const auto formats = formats_or(cfg, OutputFormat::Json);
    const auto roots = find_singularities({xa.lo, xa.hi}, {ka.lo, ka.hi}, {xa.steps, ka.steps}, cfg.tol);

    Table table;
    table.columns = {"xi", "ka", "residual_norm", "newton_iterations"};
    ojson points = ojson::array();
    for (const auto& r : roots) {
        table.rows.push_back({r.xi, r.ka, r.residual_norm, static_cast<double>(r.newton_iterations)});
        const double t2 = probability_or_inf({r.xi, r.ka});
        points.push_back({{"xi", r.xi},
                          {"ka", r.ka},
                          {"residual_norm", r.residual_norm},
                          {"newton_iterations", r.newton_iterations},
                          {"T2", std::isfinite(t2) ? ojson(t2) : ojson(nullptr)},
                          {"provenance", "grid seed, damped Newton"}});
    }
    const ojson data{{"box", {{"xi", {xa.lo, xa.hi}}, {"ka", {ka.lo, ka.hi}}}},
                     {"grid", {{"xi_samples", xa.steps}, {"ka_samples", ka.steps}}},
                     {"tol", cfg.tol},
                     {"points", points}};

    RunManifest m{.command = "singularities", .config = cfg.to_json(), .timestamp = utc_timestamp(),
                  .grid_hashes = {{"xi", grid_hash(xa.values())}, {"ka", grid_hash(ka.values())}}};
    OutputSet out(cfg.out_dir);
    if (has(formats, OutputFormat::Json)) out.write("singularities.json", document(m, data));
    if (has(formats, OutputFormat::Csv)) out.write("singularities.csv", table.csv());
    if (has(formats, OutputFormat::Svg)) {
        std::vector<double> grid(xa.values().size() * ka.values().size());
        const auto xs = xa.values();
        const auto ks = ka.values();
        for (std::size_t i = 0; i < xs.size(); ++i) {
            for (std::size_t j = 0; j < ks.size(); ++j) grid[i * ks.size() + j] = probability_or_inf({xs[i], ks[j]});
        }
        out.write("singularities.svg", heatmap_svg("Transmission probability", ks, xs, grid, "ka", "xi", "|T|^2"));
    }
    log << roots.size() << " singular point(s)\n";
    finish(out, m, "singularities", log);
    return 0;
}

int cmd_timing(const SweepConfig& cfg, std::ostream& log) {
    const auto xi = require_xi(cfg, "timing");
    const auto& axis = require_ka(cfg, "timing");
    const auto ka = axis.values();
    const auto formats = formats_or(cfg, OutputFormat::Csv);

    TimingOptions topt;
    topt.mode = cfg.mode;
    topt.singular_points = singular_points_for(xi, axis, topt.exclusion_radius);

    std::vector<std::vector<TimingSample>> profiles(xi.size());
    std::vector<std::vector<double>> t2(xi.size());
    std::vector<std::vector<Peak>> peaks(xi.size());
    parallel_for(xi.size(), [&](std::size_t i) {
        profiles[i] = timing_profile(xi[i], ka, topt);
        for (const double k : ka) t2[i].push_back(probability_or_inf({xi[i], k}));
        peaks[i] = peak_scan(xi[i], {axis.lo, axis.hi}, std::max(200.0, (axis.steps - 1) / (axis.hi - axis.lo)));
    });

    Table table;
    table.columns = {"xi", "ka", "delay_ratio", "time_ratio", "T2"};
    for (std::size_t i = 0; i < xi.size(); ++i) {
        for (std::size_t j = 0; j < ka.size(); ++j) {
            const auto& s = profiles[i][j];
            table.rows.push_back({xi[i], s.ka, s.delay_ratio, s.time_ratio, t2[i][j]});
        }
    }

    RunManifest m{.command = "timing", .config = cfg.to_json(), .timestamp = utc_timestamp(),
                  .grid_hashes = {{"xi", grid_hash(xi)}, {"ka", grid_hash(ka)}}};
    OutputSet out(cfg.out_dir);
    if (has(formats, OutputFormat::Csv)) out.write("timing.csv", table.csv());
    if (has(formats, OutputFormat::Json)) out.write("timing.json", document(m, table.json()));
    if (has(formats, OutputFormat::Svg)) {
        for (std::size_t i = 0; i < xi.size(); ++i) {
            std::vector<double> delay, pos;
            for (const auto& s : profiles[i]) delay.push_back(s.delay_ratio);
            for (const auto& p : peaks[i]) pos.push_back(p.ka_position);
            out.write("timing_xi_" + format_double(xi[i]) + ".svg",
                      timing_overlay_svg("Delay time and transmission, xi = " + format_short(xi[i]), ka, delay, t2[i],
                                         pos));
        }
    }
    finish(out, m, "timing", log);
    return 0;
}

int cmd_physical(const SweepConfig& cfg, std::ostream& log) {
    const auto& in = cfg.physical;
    const PhysicalWaveguide w{in.photon_energy, in.plasma_energy, in.damping_energy, in.half_length, in.half_height};
    ojson data;
    data["v"] = potential_strength(w);
    log << "v            = " << format_double(potential_strength(w)) << "\n";

    auto describe = [&](const PhysicalWaveguide& g, const char* key) {
        const auto p = to_dimensionless(g);
        const double tau0_fs = tau0_physical(g) * 1e15;
        const double res = resonance_residual(p).residual_norm();
        const double t2 = probability_or_inf(p);
        log << "[" << key << "] b = " << (std::isfinite(g.half_height_b) ? format_double(g.half_height_b) : "inf")
            << " nm\n"
            << "  xi           = " << format_double(p.xi) << "\n"
            << "  ka           = " << format_double(p.ka) << "\n"
            << "  tau0         = " << format_double(tau0_fs) << " fs\n"
            << "  residual     = " << format_double(res) << "\n"
            << "  T2           = " << format_double(t2) << "\n";
        data[key] = {{"half_height_b", std::isfinite(g.half_height_b) ? ojson(g.half_height_b) : ojson(nullptr)},
                     {"xi", p.xi},
                     {"ka", p.ka},
                     {"tau0_fs", tau0_fs},
                     {"residual_norm", res},
                     {"T2", std::isfinite(t2) ? ojson(t2) : ojson(nullptr)}};
    };
    describe(w, "configuration");

    if (in.solve_b) {
        const auto s = solve_geometry_for_singularity(in.photon_energy, in.plasma_energy, in.damping_energy,
                                                      in.half_length);
        PhysicalWaveguide solved = w;
        solved.half_height_b = s.half_height_b;
        describe(solved, "solved");
        log << "  nearest root = (" << format_double(s.nearest.xi) << ", " << format_double(s.nearest.ka) << ")\n"
            << "  distance     = " << format_double(s.relative_distance) << " (relative)\n";
        data["solved"]["nearest_root"] = {{"xi", s.nearest.xi}, {"ka", s.nearest.ka}};
        data["solved"]["relative_distance"] = s.relative_distance;
    }

    if (has(cfg.formats, OutputFormat::Json)) {
        RunManifest m{.command = "physical", .config = cfg.to_json(), .timestamp = utc_timestamp(), .grid_hashes = {}};
        OutputSet out(cfg.out_dir);
        out.write("physical.json", document(m, data));
        finish(out, m, "physical", log);
    }
    return 0;
}

}  // namespace ptscatter::cli
