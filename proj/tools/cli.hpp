#pragma once

#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "twoproj/core.hpp"

namespace twoproj::cli {

inline constexpr const char* tool_name = "twoproj";
inline constexpr const char* tool_version = "0.1.0";

enum class Format { json, csv };

/// Everything a run depends on. Defaults here are the documented defaults;
/// the whole record (after defaults) is echoed into every report header.
struct RunConfig {
    std::string subcommand;
    Format format = Format::json;
    bool format_given = false;
    std::string out;  ///< empty: stdout
    std::uint64_t seed = 0;
    bool strict = false;
    double tol = 1e-9;          ///< projection validation
    double tol_cluster = 1e-8;  ///< Halmos clustering

    // analyze / lattice / dixmier
    std::string pair;  ///< directory with P.json and Q.json, or a file {"P": ..., "Q": ...}
    std::string p_file, q_file;
    bool emit_matrices = false;

    // dixmier
    std::string word;
    int random_words = 0;
    int max_degree = 8;

    // family
    std::string family = "paper-l2";
    std::vector<Index> dims;
    double epsilon = 0.5;
    std::vector<double> p_list{1.0, 2.0};

    // ideal
    std::string poly_p, poly_q, poly_r;
    Index dmin = 10;
    Index dmax = 160;

    // support
    std::string model = "bergman";
    std::string proj;
    std::string proj2;
    double support_tol = 1e-3;
    Index grid = 64;

    // winding
    std::string phi;
    Index winding_grid = 1024;

    nlohmann::json effective() const;
};

struct Report {
    nlohmann::json header;
    nlohmann::json payload;
    /// CSV body (header row + rows) for table-shaped reports; empty otherwise.
    std::string csv;
};

Report run_analyze(const RunConfig& cfg);
Report run_lattice(const RunConfig& cfg);
Report run_dixmier(const RunConfig& cfg);
Report run_family(const RunConfig& cfg);
Report run_ideal(const RunConfig& cfg);
Report run_support(const RunConfig& cfg);
Report run_winding(const RunConfig& cfg);

/// Dispatch on cfg.subcommand.
Report run(const RunConfig& cfg);

/// Serialized report. JSON: {"header": ..., "payload": ...}. CSV: '#' comment
/// lines carrying the header, then the table.
std::string render(const Report& report, Format format);

/// Exit codes: 2 file not found, 3 parse error, 4 validation failure,
/// 5 numerical failure, 1 anything else.
int exit_code_for(const std::exception& e);
nlohmann::json error_object(const std::exception& e);

/// Header timestamp: SOURCE_DATE_EPOCH when set, else the wall clock (UTC, ISO 8601).
std::string timestamp();

}  // namespace twoproj::cli
