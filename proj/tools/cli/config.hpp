#pragma once

#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "ptscatter/timing.hpp"

namespace ptscatter::cli {

// Bad flags, bad config values, malformed boxes. Exit code 2.
class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Unreadable config, unwritable output. Exit code 4.
class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Inclusive uniform grid lo, ..., hi with `steps` samples.
struct GridAxis {
    double lo = 0.0;
    double hi = 1.0;
    int steps = 2;

    [[nodiscard]] std::vector<double> values() const;
    [[nodiscard]] std::string str() const;
};

// "A:B:N" -> GridAxis; requires finite 0 <= A < B and N >= 2.
[[nodiscard]] GridAxis parse_axis(std::string_view text, std::string_view name);

enum class OutputFormat { Csv, Json, Svg };
enum class Quantity { Probability, Phase, Delay, Residuals };

[[nodiscard]] OutputFormat parse_format(std::string_view s);
[[nodiscard]] Quantity parse_quantity(std::string_view s);
[[nodiscard]] DerivativeMode parse_mode(std::string_view s);
[[nodiscard]] std::string to_string(OutputFormat f);
[[nodiscard]] std::string to_string(Quantity q);
[[nodiscard]] std::string to_string(DerivativeMode m);

struct PhysicalInputs {
    double photon_energy = 5.0;   // eV
    double plasma_energy = 0.2;   // eV
    double damping_energy = 1.25; // eV
    double half_length = 1004.0;  // nm
    double half_height = std::numeric_limits<double>::infinity();  // nm
    bool solve_b = false;
};

struct SweepConfig {
    std::vector<double> xi_values;
    std::optional<GridAxis> xi_range;
    std::optional<GridAxis> ka_range;
    std::vector<Quantity> quantities{Quantity::Probability, Quantity::Phase, Quantity::Delay};
    DerivativeMode mode = DerivativeMode::FixedXi;
    double tol = 1e-10;
    std::string out_dir = ".";
    std::vector<OutputFormat> formats;
    PhysicalInputs physical;

    // Sorted, de-duplicated union of xi_values and the xi_range samples.
    [[nodiscard]] std::vector<double> xi_grid() const;
    [[nodiscard]] bool wants(Quantity q) const;
    [[nodiscard]] bool wants(OutputFormat f) const;
    [[nodiscard]] nlohmann::ordered_json to_json() const;
};

// Overlays the keys present in `j` onto `cfg`. Unknown keys and ill-typed
// values are usage errors. Accepted keys: xi, xi_range, ka_range, quantities,
// mode, tol, out, format, photon_energy, plasma_energy, damping_energy,
// half_length, half_height, solve_b.
void apply_json(SweepConfig& cfg, const nlohmann::json& j);

// Reads and parses a JSON config file: IoError if it cannot be read,
// UsageError if it is not a JSON object.
[[nodiscard]] nlohmann::json read_config_file(const std::string& path);

}  // namespace ptscatter::cli
