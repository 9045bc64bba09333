#pragma once

#include "fdrlab/channel.hpp"

#include <cstddef>
#include <cstdint>
#include <vector>

namespace fdrlab {

enum class EstimateKind { U, V, Z, Y };

/// Estimator values over the 1-based index range [first_valid, last_valid].
/// Indices outside the range are undefined and not stored.
struct EstimateSeries {
    EstimateKind kind = EstimateKind::U;
    std::size_t first_valid = 1;
    std::size_t last_valid = 0;
    std::size_t source_length = 0; // n of the outcome series it was computed from
    std::vector<double> values;    // values[k] is the estimate at first_valid + k

    bool empty() const noexcept { return values.empty(); }
    std::size_t size() const noexcept { return values.size(); }
    /// 1-based access; throws bounds_error outside the validity range.
    double at(std::size_t i) const;
};

/// Causal SMA u_i over x_{i-m+1..i}, valid for i in [m, n].
EstimateSeries sma_past(const OutcomeSeries& outcomes, std::size_t m);

/// Anti-causal SMA v_i over x_{i+1..i+m}, valid for i in [1, n-m].
EstimateSeries sma_future(const OutcomeSeries& outcomes, std::size_t m);

/// Centered target z_i = (u_i + v_i) / 2 over x_{i-m+1..i+m}, valid for i in [m, n-m].
EstimateSeries target_centered(const OutcomeSeries& outcomes, std::size_t m);

inline constexpr double default_y0 = 1.0;

/// EMA y_i = alpha*x_i + (1-alpha)*y_{i-1}, valid for i in [1, n].
EstimateSeries ema(const OutcomeSeries& outcomes, double alpha, double y0 = default_y0);

/// One EMA update. The same expression is used by every EMA path.
inline double ema_step(double y_prev, std::uint8_t x, double alpha) noexcept {
    return alpha * static_cast<double>(x) + (1.0 - alpha) * y_prev;
}

void validate_window(std::size_t m);
void validate_alpha(double alpha);

} // namespace fdrlab
