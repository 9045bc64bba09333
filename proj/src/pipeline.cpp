#include "fdrlab/pipeline.hpp"

#include "fdrlab/errors.hpp"
#include "fdrlab/kernels.hpp"

#include <algorithm>
#include <array>

namespace fdrlab {

std::pair<std::size_t, std::size_t> statistics_window(std::size_t n, const EstimatorConfig& config) {
    const std::size_t m = config.m;
    const std::size_t lo = std::max(m, config.skip_prefix + 1);
    const std::size_t tail = std::max(m, config.skip_postfix);
    if (n < lo + tail) {
        throw insufficient_data_error(lo + tail, n, "estimator statistics window");
    }
    return {lo, n - tail};
}

ErrorStatistics evaluate_estimators(const OutcomeSeries& outcomes, const EstimatorConfig& config) {
    validate_window(config.m);
    validate_alpha(config.alpha);
    if (!(config.y0 >= 0.0 && config.y0 <= 1.0)) {
        throw validation_error("y0", "initial value must lie in [0, 1]");
    }
    const std::size_t n = outcomes.size();
    const auto [lo, hi] = statistics_window(n, config);
    const std::size_t m = config.m;
    const std::uint8_t* x = outcomes.outcomes.data() - 1; // x[i] is x_i

    double y = config.y0;
    for (std::size_t i = 1; i < lo; ++i) {
        y = ema_step(y, x[i], config.alpha);
    }
    std::int32_t past = 0;
    std::int32_t future = 0;
    for (std::size_t j = lo - m + 1; j <= lo; ++j) {
        past += x[j];
    }
    for (std::size_t j = lo + 1; j <= lo + m; ++j) {
        future += x[j];
    }

    constexpr std::size_t chunk = 4096;
    std::array<std::int32_t, chunk> past_buf{};
    std::array<std::int32_t, chunk> future_buf{};
    std::array<double, chunk> y_buf{};
    std::array<double, chunk> u_buf{};
    std::array<double, chunk> z_buf{};
    std::array<double, chunk> d_buf{};
    std::array<double, chunk> e_buf{};

    const auto& k = kernels::active();
    const double md = static_cast<double>(m);
    MomentAccumulator acc_d;
    MomentAccumulator acc_e;

    for (std::size_t begin = lo; begin <= hi; begin += chunk) {
        const std::size_t len = std::min(chunk, hi - begin + 1);
        for (std::size_t j = 0; j < len; ++j) {
            const std::size_t i = begin + j;
            if (i > lo) {
                past += x[i] - x[i - m];
                future += x[i + m] - x[i];
            }
            past_buf[j] = past;
            future_buf[j] = future;
            y = ema_step(y, x[i], config.alpha);
            y_buf[j] = y;
        }
        const std::span<double> u(u_buf.data(), len);
        const std::span<double> z(z_buf.data(), len);
        const std::span<double> d(d_buf.data(), len);
        const std::span<double> e(e_buf.data(), len);
        k.counts_to_means(std::span<const std::int32_t>(past_buf.data(), len),
                          std::span<const std::int32_t>(future_buf.data(), len), md, u, z);
        k.subtract(z, u, d);
        k.subtract(z, std::span<const double>(y_buf.data(), len), e);
        acc_d.add(d);
        acc_e.add(e);
    }

    ErrorStatistics out;
    out.d = acc_d.summary();
    out.e = acc_e.summary();
    out.first = lo;
    out.last = hi;
    return out;
}

} // namespace fdrlab
