#pragma once

#include "fdrlab/channel.hpp"
#include "fdrlab/pipeline.hpp"
#include "fdrlab/tracefile.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace fdrlab {

/// Parameters of one disturbance profile in a table grid.
struct ProfileParams {
    ProfileKind kind = ProfileKind::stationary;
    double eps0 = 0.1;
    double delta_eps = 0.0;
    double freq_hz = 0.0;
    double ts_seconds = default_ts_seconds;

    FailureProfile build() const;
};

enum class AlphaPolicy { matched, explicit_list };

/// Experiment grid: every profile crossed with every window.
struct TableSpec {
    std::vector<ProfileParams> profiles;
    std::vector<std::size_t> windows;
    AlphaPolicy alpha_policy = AlphaPolicy::matched;
    std::vector<double> alphas; // parallel to windows when explicit
    std::size_t n_stats = 10'000'000;
    std::size_t skip = 100'000;
    std::uint64_t base_seed = 42;
    double y0 = 1.0;

    std::size_t cell_count() const noexcept { return profiles.size() * windows.size(); }
    double alpha_for(std::size_t window_index) const;
    void validate() const;
};

/// Stationary eps in {0.1, 0.2, 0.4}, m in {10, 100, 1000, 10000}.
TableSpec table1_spec();
/// eps0 = 0.1, f in {0.0001, 0.001} Hz, delta in {0.005, 0.05}, same windows.
TableSpec table2_spec();

TableSpec table_spec_from_json(const std::string& text);
std::string table_spec_to_json(const TableSpec& spec);

/// Seed of cell `ordinal`: base_seed XOR splitmix64(ordinal).
std::uint64_t cell_seed(std::uint64_t base_seed, std::uint64_t ordinal);

/// Generates, estimates and grades one cell.
ResultRow run_cell(const TableSpec& spec, std::size_t ordinal);

/// Worker count: `requested` if nonzero, else hardware concurrency, capped by
/// the FDRLAB_THREADS environment variable when set.
std::size_t resolve_threads(std::size_t requested);

/// All cells in ordinal order, profile-major. Output does not depend on the
/// thread count.
std::vector<ResultRow> run_table(const TableSpec& spec, std::size_t threads = 0);

/// Runs the estimators over `outcomes` and assembles a report row. Theory
/// columns use the series' empirical failure rate; when `nominal` is given its
/// parameters fill the profile columns and the nominal theory fields.
ResultRow estimate_row(const OutcomeSeries& outcomes, const EstimatorConfig& config,
                       const std::optional<FailureProfile>& nominal);

} // namespace fdrlab
