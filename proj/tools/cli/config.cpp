#include "config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "format.hpp"

namespace ptscatter::cli {

namespace {

double parse_number(std::string_view s, std::string_view what) {
    double v = 0.0;
    const auto* end = s.data() + s.size();
    const auto res = std::from_chars(s.data(), end, v);
    if (res.ec != std::errc{} || res.ptr != end) {
        throw UsageError(std::string(what) + ": '" + std::string(s) + "' is not a number");
    }
    return v;
}

double number_of(const nlohmann::json& j, const char* key) {
    if (!j.is_number()) {
        throw UsageError(std::string("config key '") + key + "' must be a number");
    }
    return j.get<double>();
}

std::string string_of(const nlohmann::json& j, const char* key) {
    if (!j.is_string()) {
        throw UsageError(std::string("config key '") + key + "' must be a string");
    }
    return j.get<std::string>();
}

// A single value or a list, each element either a number or a string.
template <class T, class Parse>
std::vector<T> list_of(const nlohmann::json& j, const char* key, Parse parse) {
    std::vector<T> out;
    auto one = [&](const nlohmann::json& e) { out.push_back(parse(e)); };
    if (j.is_array()) {
        for (const auto& e : j) one(e);
    } else {
        one(j);
    }
    if (out.empty()) {
        throw UsageError(std::string("config key '") + key + "' must not be empty");
    }
    return out;
}

GridAxis axis_of(const nlohmann::json& j, const char* key) {
    if (j.is_string()) {
        return parse_axis(j.get<std::string>(), key);
    }
    if (j.is_object() && j.contains("lo") && j.contains("hi") && j.contains("steps")) {
        const double lo = number_of(j.at("lo"), key);
        const double hi = number_of(j.at("hi"), key);
        const double steps = number_of(j.at("steps"), key);
        return parse_axis(format_double(lo) + ":" + format_double(hi) + ":" + format_double(steps), key);
    }
    throw UsageError(std::string("config key '") + key + "' must be \"A:B:N\" or {lo, hi, steps}");
}

double positive(double v, const char* key) {
    if (!std::isfinite(v) || v <= 0.0) {
        throw UsageError(std::string(key) + " must be positive and finite");
    }
    return v;
}

}  // namespace

std::vector<double> GridAxis::values() const {
    std::vector<double> v(static_cast<std::size_t>(steps));
    for (int i = 0; i < steps; ++i) {
        v[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(steps - 1);
    }
    v.back() = hi;
    return v;
}

std::string GridAxis::str() const {
    return format_double(lo) + ":" + format_double(hi) + ":" + std::to_string(steps);
}

GridAxis parse_axis(std::string_view text, std::string_view name) {
    const auto c1 = text.find(':');
    const auto c2 = c1 == std::string_view::npos ? c1 : text.find(':', c1 + 1);
    if (c2 == std::string_view::npos || text.find(':', c2 + 1) != std::string_view::npos) {
        throw UsageError(std::string(name) + ": expected A:B:N, got '" + std::string(text) + "'");
    }
    GridAxis a;
    a.lo = parse_number(text.substr(0, c1), name);
    a.hi = parse_number(text.substr(c1 + 1, c2 - c1 - 1), name);
    const double n = parse_number(text.substr(c2 + 1), name);
    if (!std::isfinite(a.lo) || !std::isfinite(a.hi) || a.lo < 0.0 || !(a.hi > a.lo)) {
        throw UsageError(std::string(name) + ": need finite 0 <= A < B");
    }
    if (n != std::floor(n) || n < 2 || n > 1e7) {
        throw UsageError(std::string(name) + ": N must be an integer >= 2");
    }
    a.steps = static_cast<int>(n);
    return a;
}

OutputFormat parse_format(std::string_view s) {
    if (s == "csv") return OutputFormat::Csv;
    if (s == "json") return OutputFormat::Json;
    if (s == "svg") return OutputFormat::Svg;
    throw UsageError("unknown format '" + std::string(s) + "' (csv, json, svg)");
}

Quantity parse_quantity(std::string_view s) {
    if (s == "probability") return Quantity::Probability;
    if (s == "phase") return Quantity::Phase;
    if (s == "delay") return Quantity::Delay;
    if (s == "residuals") return Quantity::Residuals;
    throw UsageError("unknown quantity '" + std::string(s) + "' (probability, phase, delay, residuals)");
}

DerivativeMode parse_mode(std::string_view s) {
    if (s == "fixed-xi") return DerivativeMode::FixedXi;
    if (s == "fixed-v") return DerivativeMode::FixedV;
    throw UsageError("unknown mode '" + std::string(s) + "' (fixed-xi, fixed-v)");
}

std::string to_string(OutputFormat f) {
    switch (f) {
        case OutputFormat::Csv: return "csv";
        case OutputFormat::Json: return "json";
        case OutputFormat::Svg: return "svg";
    }
    return "?";
}

std::string to_string(Quantity q) {
    switch (q) {
        case Quantity::Probability: return "probability";
        case Quantity::Phase: return "phase";
        case Quantity::Delay: return "delay";
        case Quantity::Residuals: return "residuals";
    }
    return "?";
}

std::string to_string(DerivativeMode m) { return m == DerivativeMode::FixedXi ? "fixed-xi" : "fixed-v"; }

std::vector<double> SweepConfig::xi_grid() const {
    std::vector<double> xi = xi_values;
    if (xi_range) {
        const auto r = xi_range->values();
        xi.insert(xi.end(), r.begin(), r.end());
    }
    std::sort(xi.begin(), xi.end());
    xi.erase(std::unique(xi.begin(), xi.end()), xi.end());
    return xi;
}

bool SweepConfig::wants(Quantity q) const { return std::find(quantities.begin(), quantities.end(), q) != quantities.end(); }

bool SweepConfig::wants(OutputFormat f) const { return std::find(formats.begin(), formats.end(), f) != formats.end(); }

nlohmann::ordered_json SweepConfig::to_json() const {
    nlohmann::ordered_json j;
    j["xi"] = xi_values;
    j["xi_range"] = xi_range ? nlohmann::ordered_json(xi_range->str()) : nlohmann::ordered_json(nullptr);
    j["ka_range"] = ka_range ? nlohmann::ordered_json(ka_range->str()) : nlohmann::ordered_json(nullptr);
    auto& q = j["quantities"] = nlohmann::ordered_json::array();
    for (const auto v : quantities) q.push_back(to_string(v));
    j["mode"] = to_string(mode);
    j["tol"] = tol;
    j["out"] = out_dir;
    auto& f = j["format"] = nlohmann::ordered_json::array();
    for (const auto v : formats) f.push_back(to_string(v));
    j["photon_energy"] = physical.photon_energy;
    j["plasma_energy"] = physical.plasma_energy;
    j["damping_energy"] = physical.damping_energy;
    j["half_length"] = physical.half_length;
    j["half_height"] = std::isfinite(physical.half_height) ? nlohmann::ordered_json(physical.half_height)
                                                            : nlohmann::ordered_json(nullptr);
    j["solve_b"] = physical.solve_b;
    return j;
}

void apply_json(SweepConfig& cfg, const nlohmann::json& j) {
    if (!j.is_object()) {
        throw UsageError("config must be a JSON object");
    }
    for (const auto& [key, value] : j.items()) {
        const char* k = key.c_str();
        if (key == "xi") {
            cfg.xi_values = list_of<double>(value, k, [&](const nlohmann::json& e) {
                const double v = e.is_string() ? parse_number(e.get<std::string>(), "xi") : number_of(e, k);
                if (!std::isfinite(v) || v < 0.0) throw UsageError("xi must be finite and non-negative");
                return v;
            });
        } else if (key == "xi_range") {
            cfg.xi_range = axis_of(value, k);
        } else if (key == "ka_range") {
            cfg.ka_range = axis_of(value, k);
        } else if (key == "quantities") {
            cfg.quantities = list_of<Quantity>(value, k, [&](const nlohmann::json& e) {
                return parse_quantity(string_of(e, k));
            });
        } else if (key == "mode") {
            cfg.mode = parse_mode(string_of(value, k));
        } else if (key == "tol") {
            cfg.tol = positive(number_of(value, k), "tol");
        } else if (key == "out") {
            cfg.out_dir = string_of(value, k);
        } else if (key == "format") {
            cfg.formats = list_of<OutputFormat>(value, k, [&](const nlohmann::json& e) {
                return parse_format(string_of(e, k));
            });
        } else if (key == "photon_energy") {
            cfg.physical.photon_energy = number_of(value, k);
        } else if (key == "plasma_energy") {
            cfg.physical.plasma_energy = number_of(value, k);
        } else if (key == "damping_energy") {
            cfg.physical.damping_energy = number_of(value, k);
        } else if (key == "half_length") {
            cfg.physical.half_length = positive(number_of(value, k), "half_length");
        } else if (key == "half_height") {
            cfg.physical.half_height = value.is_null() ? std::numeric_limits<double>::infinity()
                                                       : positive(number_of(value, k), "half_height");
        } else if (key == "solve_b") {
            if (!value.is_boolean()) throw UsageError("config key 'solve_b' must be true or false");
            cfg.physical.solve_b = value.get<bool>();
        } else {
            throw UsageError("unknown config key '" + key + "'");
        }
    }
    // De-duplicate while keeping the first occurrence order.
    auto dedupe = [](auto& v) {
        auto out = v;
        out.clear();
        for (const auto& e : v) {
            if (std::find(out.begin(), out.end(), e) == out.end()) out.push_back(e);
        }
        v = out;
    };
    dedupe(cfg.quantities);
    dedupe(cfg.formats);
}

nlohmann::json read_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot read config file '" + path + "'");
    }
    std::stringstream ss;
    ss << in.rdbuf();
    nlohmann::json j = nlohmann::json::parse(ss.str(), nullptr, false);
    if (j.is_discarded() || !j.is_object()) {
        throw UsageError("config file '" + path + "' is not a JSON object");
    }
    return j;
}

}  // namespace ptscatter::cli
