#include "fdrlab/filters.hpp"

#include "fdrlab/errors.hpp"

#include <cmath>
#include <string>

namespace fdrlab {

double EstimateSeries::at(std::size_t i) const {
    if (values.empty() || i < first_valid || i > last_valid) {
        throw bounds_error("estimate index " + std::to_string(i) + " outside validity range [" +
                           std::to_string(first_valid) + ", " + std::to_string(last_valid) + "]");
    }
    return values[i - first_valid];
}

void validate_window(std::size_t m) {
    if (m < 1) {
        throw validation_error("m", "window must be at least 1");
    }
}

void validate_alpha(double alpha) {
    if (!(alpha > 0.0 && alpha <= 1.0)) {
        throw validation_error("alpha", "smoothing factor must lie in (0, 1], got " + std::to_string(alpha));
    }
}

namespace {

// counts[k] = number of successes in x_{k+1..k+m}, for k in [0, n-m].
std::vector<std::int32_t> window_counts(const std::vector<std::uint8_t>& x, std::size_t m) {
    const std::size_t n = x.size();
    std::vector<std::int32_t> counts(n - m + 1);
    std::int32_t sum = 0;
    for (std::size_t j = 0; j < m; ++j) {
        sum += x[j];
    }
    counts[0] = sum;
    for (std::size_t k = 1; k + m <= n; ++k) {
        sum += x[k + m - 1];
        sum -= x[k - 1];
        counts[k] = sum;
    }
    return counts;
}

} // namespace

EstimateSeries sma_past(const OutcomeSeries& outcomes, std::size_t m) {
    validate_window(m);
    const std::size_t n = outcomes.size();
    if (n < m) {
        throw insufficient_data_error(m, n, "sma_past");
    }
    const auto counts = window_counts(outcomes.outcomes, m);
    EstimateSeries s;
    s.kind = EstimateKind::U;
    s.first_valid = m;
    s.last_valid = n;
    s.source_length = n;
    s.values.resize(counts.size());
    const double md = static_cast<double>(m);
    // u_i covers x_{i-m+1..i}, i.e. counts[i - m].
    for (std::size_t k = 0; k < counts.size(); ++k) {
        s.values[k] = static_cast<double>(counts[k]) / md;
    }
    return s;
}

EstimateSeries sma_future(const OutcomeSeries& outcomes, std::size_t m) {
    validate_window(m);
    const std::size_t n = outcomes.size();
    if (n <= m) {
        throw insufficient_data_error(m + 1, n, "sma_future");
    }
    const auto counts = window_counts(outcomes.outcomes, m);
    EstimateSeries s;
    s.kind = EstimateKind::V;
    s.first_valid = 1;
    s.last_valid = n - m;
    s.source_length = n;
    s.values.resize(n - m);
    const double md = static_cast<double>(m);
    // v_i covers x_{i+1..i+m}, i.e. counts[i].
    for (std::size_t i = 1; i <= n - m; ++i) {
        s.values[i - 1] = static_cast<double>(counts[i]) / md;
    }
    return s;
}

EstimateSeries target_centered(const OutcomeSeries& outcomes, std::size_t m) {
    validate_window(m);
    const std::size_t n = outcomes.size();
    if (n < 2 * m) {
        throw insufficient_data_error(2 * m, n, "target_centered");
    }
    const auto counts = window_counts(outcomes.outcomes, m);
    EstimateSeries s;
    s.kind = EstimateKind::Z;
    s.first_valid = m;
    s.last_valid = n - m;
    s.source_length = n;
    s.values.resize(n - 2 * m + 1);
    const double md = static_cast<double>(m);
    for (std::size_t i = m; i <= n - m; ++i) {
        const double u = static_cast<double>(counts[i - m]) / md;
        const double v = static_cast<double>(counts[i]) / md;
        s.values[i - m] = (u + v) * 0.5;
    }
    return s;
}

EstimateSeries ema(const OutcomeSeries& outcomes, double alpha, double y0) {
    validate_alpha(alpha);
    if (!(y0 >= 0.0 && y0 <= 1.0)) {
        throw validation_error("y0", "initial value must lie in [0, 1]");
    }
    const std::size_t n = outcomes.size();
    EstimateSeries s;
    s.kind = EstimateKind::Y;
    s.first_valid = 1;
    s.last_valid = n;
    s.source_length = n;
    s.values.resize(n);
    double y = y0;
    for (std::size_t k = 0; k < n; ++k) {
        y = ema_step(y, outcomes.outcomes[k], alpha);
        s.values[k] = y;
    }
    return s;
}

} // namespace fdrlab
