#include "fdrlab/stats.hpp"

#include "fdrlab/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace fdrlab {
namespace {

inline void neumaier(double& s, double& c, double x) {
    const double t = s + x;
    if (std::fabs(s) >= std::fabs(x)) {
        c += (s - t) + x;
    } else {
        c += (x - t) + s;
    }
    s = t;
}

double lane_total(const std::array<double, kernels::lanes>& sums,
                  const std::array<double, kernels::lanes>& comps) {
    double s = 0.0;
    double c = 0.0;
    for (std::size_t l = 0; l < kernels::lanes; ++l) {
        neumaier(s, c, sums[l]);
    }
    for (std::size_t l = 0; l < kernels::lanes; ++l) {
        c += comps[l];
    }
    return s + c;
}

kernels::MomentLanes with_pending(kernels::MomentLanes st, const std::array<double, kernels::lanes>& pending,
                                  std::size_t pending_count) {
    for (std::size_t l = 0; l < pending_count; ++l) {
        const double x = pending[l];
        neumaier(st.sum[l], st.sum_c[l], x);
        neumaier(st.sq[l], st.sq_c[l], x * x);
        neumaier(st.abs[l], st.abs_c[l], std::fabs(x));
    }
    return st;
}

} // namespace

void MomentAccumulator::add(std::span<const double> values) {
    const auto& k = kernels::active();
    std::size_t pos = 0;
    const std::size_t n = values.size();
    if (pending_count_ > 0) {
        while (pending_count_ < kernels::lanes && pos < n) {
            pending_[pending_count_++] = values[pos++];
        }
        if (pending_count_ == kernels::lanes) {
            k.accumulate(lanes_, pending_);
            pending_count_ = 0;
        }
    }
    const std::size_t full = (n - pos) / kernels::lanes * kernels::lanes;
    if (full > 0) {
        k.accumulate(lanes_, values.subspan(pos, full));
        pos += full;
    }
    while (pos < n) {
        pending_[pending_count_++] = values[pos++];
    }
    count_ += n;
}

void MomentAccumulator::merge(const MomentAccumulator& other) {
    const auto o = with_pending(other.lanes_, other.pending_, other.pending_count_);
    for (std::size_t l = 0; l < kernels::lanes; ++l) {
        neumaier(lanes_.sum[l], lanes_.sum_c[l], o.sum[l]);
        lanes_.sum_c[l] += o.sum_c[l];
        neumaier(lanes_.sq[l], lanes_.sq_c[l], o.sq[l]);
        lanes_.sq_c[l] += o.sq_c[l];
        neumaier(lanes_.abs[l], lanes_.abs_c[l], o.abs[l]);
        lanes_.abs_c[l] += o.abs_c[l];
    }
    count_ += other.count_;
}

ErrorSummary MomentAccumulator::summary() const {
    ErrorSummary s;
    s.count = count_;
    if (count_ == 0) {
        return s;
    }
    const auto st = with_pending(lanes_, pending_, pending_count_);
    const double n = static_cast<double>(count_);
    s.mean = lane_total(st.sum, st.sum_c) / n;
    s.mse = lane_total(st.sq, st.sq_c) / n;
    s.mae = lane_total(st.abs, st.abs_c) / n;
    s.var = std::max(0.0, s.mse - s.mean * s.mean);
    return s;
}

ErrorSeries error_series(const EstimateSeries& target, const EstimateSeries& estimate) {
    if (target.kind != EstimateKind::Z) {
        throw validation_error("target", "error series needs the centered target z");
    }
    ErrorKind kind;
    if (estimate.kind == EstimateKind::U) {
        kind = ErrorKind::D;
    } else if (estimate.kind == EstimateKind::Y) {
        kind = ErrorKind::E;
    } else {
        throw validation_error("estimate", "error series needs an SMA (u) or EMA (y) estimate");
    }
    if (target.source_length != estimate.source_length) {
        throw validation_error("estimate", "target and estimate come from series of different length");
    }
    ErrorSeries out;
    out.kind = kind;
    out.source_length = target.source_length;
    const std::size_t lo = std::max(target.first_valid, estimate.first_valid);
    const std::size_t hi = std::min(target.last_valid, estimate.last_valid);
    if (target.empty() || estimate.empty() || lo > hi) {
        throw insufficient_data_error(1, 0, "error_series overlap");
    }
    out.first_valid = lo;
    out.last_valid = hi;
    const std::size_t len = hi - lo + 1;
    out.values.resize(len);
    kernels::active().subtract(std::span<const double>(target.values.data() + (lo - target.first_valid), len),
                               std::span<const double>(estimate.values.data() + (lo - estimate.first_valid), len),
                               out.values);
    return out;
}

ErrorSummary summarize(const ErrorSeries& series, std::size_t skip_prefix, std::size_t skip_postfix) {
    const std::size_t n = series.source_length;
    if (series.values.empty() || skip_prefix >= n || skip_postfix >= n - skip_prefix) {
        throw validation_error("window", "no samples left after skipping prefix and postfix");
    }
    const std::size_t lo = std::max(series.first_valid, skip_prefix + 1);
    const std::size_t hi = std::min(series.last_valid, n - skip_postfix);
    if (lo > hi) {
        throw validation_error("window", "statistics window does not overlap the valid range");
    }
    MomentAccumulator acc;
    acc.add(std::span<const double>(series.values.data() + (lo - series.first_valid), hi - lo + 1));
    return acc.summary();
}

ApproximationGrade classify(double mse, double theory_var) {
    if (!(theory_var > 0.0)) {
        throw validation_error("theory_var", "must be positive");
    }
    if (!(mse >= 0.0)) {
        throw validation_error("mse", "must be non-negative");
    }
    ApproximationGrade g;
    g.ratio = mse / theory_var;
    if (g.ratio <= green_max_ratio) {
        g.grade = Grade::green;
    } else if (g.ratio <= yellow_max_ratio) {
        g.grade = Grade::yellow;
    } else {
        g.grade = Grade::red;
    }
    return g;
}

ApproximationGrade grade_cell(double mse, double theory_var) {
    if (theory_var > 0.0) {
        return classify(mse, theory_var);
    }
    if (mse == 0.0) {
        return {Grade::green, 1.0};
    }
    return {Grade::red, std::numeric_limits<double>::infinity()};
}

std::string_view grade_name(Grade grade) {
    switch (grade) {
    case Grade::green:
        return "green";
    case Grade::yellow:
        return "yellow";
    case Grade::red:
        return "red";
    }
    return "green";
}

Grade parse_grade(std::string_view name) {
    if (name == "green") {
        return Grade::green;
    }
    if (name == "yellow") {
        return Grade::yellow;
    }
    if (name == "red") {
        return Grade::red;
    }
    throw validation_error("grade", "unknown grade '" + std::string(name) + "'");
}

} // namespace fdrlab
