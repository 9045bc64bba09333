#pragma once

#include "fdrlab/filters.hpp"
#include "fdrlab/kernels.hpp"

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

namespace fdrlab {

enum class ErrorKind { D, E };

/// d = z - u (SMA) or e = z - y (EMA) on the overlap of the two validity ranges.
struct ErrorSeries {
    ErrorKind kind = ErrorKind::D;
    std::size_t first_valid = 1;
    std::size_t last_valid = 0;
    std::size_t source_length = 0;
    std::vector<double> values;

    std::size_t size() const noexcept { return values.size(); }
};

struct ErrorSummary {
    double mean = 0.0;
    double var = 0.0; // uncorrected
    double mse = 0.0;
    double mae = 0.0;
    std::uint64_t count = 0;

    bool operator==(const ErrorSummary&) const = default;
};

/// Single-pass, mergeable accumulator of mean / mean-square / mean-absolute.
///
/// Values are spread over kernels::lanes compensated accumulators by their
/// position in the overall stream, so the result does not depend on how the
/// stream is split across add() calls.
class MomentAccumulator {
public:
    void add(std::span<const double> values);
    void add(double value) { add(std::span<const double>(&value, 1)); }

    /// Folds in a disjoint window accumulated separately.
    void merge(const MomentAccumulator& other);

    std::uint64_t count() const noexcept { return count_; }
    ErrorSummary summary() const;

private:
    kernels::MomentLanes lanes_{};
    std::array<double, kernels::lanes> pending_{};
    std::size_t pending_count_ = 0;
    std::uint64_t count_ = 0;
};

ErrorSeries error_series(const EstimateSeries& target, const EstimateSeries& estimate);

inline constexpr std::size_t default_skip = 100000;

/// Statistics over outcome indices [skip_prefix + 1, n - skip_postfix]
/// intersected with the series' validity range.
ErrorSummary summarize(const ErrorSeries& series, std::size_t skip_prefix = default_skip,
                       std::size_t skip_postfix = default_skip);

enum class Grade { green, yellow, red };

struct ApproximationGrade {
    Grade grade = Grade::green;
    double ratio = 0.0;
};

inline constexpr double green_max_ratio = 1.4;
inline constexpr double yellow_max_ratio = 5.0;

/// Grades mse against the closed-form variance; theory_var must be positive.
ApproximationGrade classify(double mse, double theory_var);

/// classify() extended to theory_var == 0: green when mse is also 0, red otherwise.
ApproximationGrade grade_cell(double mse, double theory_var);

std::string_view grade_name(Grade grade);
Grade parse_grade(std::string_view name);

} // namespace fdrlab
