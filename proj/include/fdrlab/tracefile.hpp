#pragma once

// Line-oriented text trace format:
//
//   #fdrtrace v1
//   #ts=0.5
//   #count=3
//   #source=synthetic seed=42 profile=stationary eps0=0.1
//   1
//   0
//   1
//
// The header block is the run of `#key=value` lines after the magic line.
// After it, blank lines and lines starting with '#' are ignored; every other
// line is a single outcome character.

#include "fdrlab/channel.hpp"
#include "fdrlab/format.hpp"
#include "fdrlab/stats.hpp"

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace fdrlab {

inline constexpr const char* trace_magic = "#fdrtrace v1";

struct TraceHeader {
    int version = 1;
    double ts_seconds = default_ts_seconds;
    std::string source;
    std::uint64_t count = 0;
};

/// Parses a trace; the returned series has no profile ("external").
OutcomeSeries read_trace(std::istream& in);
void write_trace(const OutcomeSeries& series, std::ostream& out);

OutcomeSeries read_trace_file(const std::filesystem::path& path);
void write_trace_file(const OutcomeSeries& series, const std::filesystem::path& path);

/// Recovers the generating profile from a source string written by
/// describe_source(); nullopt for anything else.
std::optional<FailureProfile> profile_from_source(const std::string& source, double ts_seconds);

/// One (profile, m, alpha) cell of a result table.
struct ResultRow {
    std::string profile;
    double eps0 = 0.0;
    double delta_eps = 0.0;
    double freq_hz = 0.0;
    double ts = default_ts_seconds;
    std::uint64_t m = 0;
    double alpha = 0.0;
    std::uint64_t n_stats = 0;

    ErrorSummary e;
    double theory_var_e = 0.0;
    Grade grade_e = Grade::green;

    ErrorSummary d;
    double theory_var_d = 0.0;
    Grade grade_d = Grade::green;

    // JSON-lines only.
    double eps_empirical = 0.0;
    std::optional<double> nominal_theory_var_e;
    std::optional<double> nominal_theory_var_d;

    bool operator==(const ResultRow&) const = default;
};

enum class ReportFormat { csv, jsonl };

inline constexpr const char* csv_columns =
    "profile,eps0,delta_eps,freq_hz,ts,m,alpha,n_stats,mu_e,var_e,mse_e,theory_var_e,mae_e,grade_e,"
    "mu_d,var_d,mse_d,theory_var_d,mae_d,grade_d";

void write_report(const std::vector<ResultRow>& rows, ReportFormat format, std::ostream& out);

/// Parses JSON-lines produced by write_report.
std::vector<ResultRow> read_report_jsonl(std::istream& in);

} // namespace fdrlab
