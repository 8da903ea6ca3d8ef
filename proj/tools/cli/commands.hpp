#pragma once

#include <filesystem>
#include <map>
#include <ostream>
#include <string>
#include <vector>

#include "config.hpp"
#include "json.hpp"

namespace ptscatter::cli {

inline constexpr const char* kToolVersion = PTSCATTER_VERSION;

// Echo of everything needed to reproduce an output set.
struct RunManifest {
    std::string tool_version = kToolVersion;
    std::string command;
    nlohmann::ordered_json config;
    std::string timestamp;  // UTC, ISO 8601; SOURCE_DATE_EPOCH when set
    std::map<std::string, std::string> grid_hashes;

    [[nodiscard]] nlohmann::ordered_json to_json() const;
};

[[nodiscard]] std::string utc_timestamp();

// Creates the output directory on demand and writes files byte-exact (LF
// endings). Every failure is an IoError.
class OutputSet {
public:
    explicit OutputSet(std::filesystem::path dir);
    void write(const std::string& name, const std::string& content);
    [[nodiscard]] const std::vector<std::filesystem::path>& written() const { return written_; }

private:
    std::filesystem::path dir_;
    std::vector<std::filesystem::path> written_;
};

// Each command writes its files into cfg.out_dir, lists them on `log` and
// returns the process exit code. Errors are thrown (see app.hpp for codes).
int cmd_scan(const SweepConfig& cfg, std::ostream& log);
int cmd_peaks(const SweepConfig& cfg, std::ostream& log);
int cmd_singularities(const SweepConfig& cfg, std::ostream& log);
int cmd_timing(const SweepConfig& cfg, std::ostream& log);
int cmd_physical(const SweepConfig& cfg, std::ostream& log);

}  // namespace ptscatter::cli
