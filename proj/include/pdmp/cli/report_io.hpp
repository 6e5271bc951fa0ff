#pragma once

#include <istream>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "pdmp/cli/config.hpp"
#include "pdmp/mc/reports.hpp"

namespace pdmp::cli {

inline constexpr const char* kArtifactName = "pdmp-thin";
inline constexpr const char* kArtifactVersion = "0.1.0";

/// Ordered key/value metadata echoed into every output file: artifact
/// version, command, and the full effective configuration.
using Metadata = std::vector<std::pair<std::string, std::string>>;

Metadata config_metadata(const RunConfig& cfg);

/// 17 significant digits: parses back to the identical double.
std::string format_double(double x);

void write_acceptance(std::ostream& os, OutputFormat format, const Metadata& meta,
                      const std::vector<mc::AcceptanceReport>& reports);
void write_spiking(std::ostream& os, OutputFormat format, const Metadata& meta,
                   const std::vector<mc::SpikingReport>& reports);

/// Generic numeric table (trajectory dumps).
struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
};

void write_table(std::ostream& os, OutputFormat format, const Metadata& meta, const Table& table);

/// One statistical check of the oracle suite.
struct ValidationRow {
    std::string name;
    double observed = 0.0;
    double reference = 0.0;
    double p_value = 0.0; // NaN when the check is a plain comparison
    bool pass = false;
};

void write_validation(std::ostream& os, OutputFormat format, const Metadata& meta,
                      const std::vector<ValidationRow>& rows);

std::vector<mc::AcceptanceReport> parse_acceptance_json(std::istream& is);
std::vector<mc::SpikingReport> parse_spiking_json(std::istream& is);

} // namespace pdmp::cli
