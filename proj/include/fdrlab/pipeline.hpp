#pragma once

#include "fdrlab/channel.hpp"
#include "fdrlab/stats.hpp"

#include <cstddef>
#include <utility>

namespace fdrlab {

struct EstimatorConfig {
    std::size_t m = 10;
    double alpha = 0.2;
    double y0 = default_y0;
    std::size_t skip_prefix = default_skip;
    std::size_t skip_postfix = default_skip;
};

struct ErrorStatistics {
    ErrorSummary d;
    ErrorSummary e;
    std::size_t first = 0; // outcome index range actually summarized
    std::size_t last = 0;
};

/// Outcome index range the statistics cover: skips first, then the range
/// where both d and e are defined ([m, n-m]). Throws insufficient_data_error
/// when it is empty.
std::pair<std::size_t, std::size_t> statistics_window(std::size_t n, const EstimatorConfig& config);

/// Runs u, z and y over the series and summarizes d and e in one streaming
/// pass. Produces the same bits as sma_past/target_centered/ema followed by
/// error_series and summarize, without materializing the full series.
ErrorStatistics evaluate_estimators(const OutcomeSeries& outcomes, const EstimatorConfig& config);

} // namespace fdrlab
