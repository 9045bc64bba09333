#include "fdrlab/channel.hpp"

#include "fdrlab/errors.hpp"
#include "fdrlab/format.hpp"
#include "fdrlab/kernels.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <span>
#include <sstream>

namespace fdrlab {
namespace {

void check_probability(double value, const char* field) {
    if (!(value >= 0.0 && value <= 1.0)) {
        std::ostringstream os;
        os << "probability must lie in [0, 1], got " << value;
        throw validation_error(field, os.str());
    }
}

void check_positive(double value, const char* field) {
    if (!(value > 0.0) || !std::isfinite(value)) {
        std::ostringstream os;
        os << "must be positive and finite, got " << value;
        throw validation_error(field, os.str());
    }
}

const std::vector<double>& empty_table() {
    static const std::vector<double> t;
    return t;
}

} // namespace

FailureProfile FailureProfile::stationary(double eps, double ts_seconds) {
    check_probability(eps, "eps");
    check_positive(ts_seconds, "ts_seconds");
    FailureProfile p;
    p.kind_ = ProfileKind::stationary;
    p.eps0_ = eps;
    p.ts_seconds_ = ts_seconds;
    return p;
}

FailureProfile FailureProfile::sinusoidal(double eps0, double delta_eps, double freq_hz, double ts_seconds) {
    check_probability(eps0, "eps0");
    if (!(delta_eps >= 0.0)) {
        throw validation_error("delta_eps", "amplitude must be non-negative");
    }
    if (eps0 - delta_eps < 0.0 || eps0 + delta_eps > 1.0) {
        throw validation_error("delta_eps", "eps0 +/- delta_eps must stay within [0, 1]");
    }
    check_positive(freq_hz, "freq_hz");
    check_positive(ts_seconds, "ts_seconds");
    FailureProfile p;
    p.kind_ = ProfileKind::sinusoidal;
    p.eps0_ = eps0;
    p.delta_eps_ = delta_eps;
    p.freq_hz_ = freq_hz;
    p.ts_seconds_ = ts_seconds;
    p.phase_step_ = 2.0 * std::numbers::pi * freq_hz * ts_seconds;
    return p;
}

FailureProfile FailureProfile::empirical(std::vector<double> table, double ts_seconds) {
    for (double v : table) {
        check_probability(v, "eps_table");
    }
    check_positive(ts_seconds, "ts_seconds");
    FailureProfile p;
    p.kind_ = ProfileKind::empirical;
    p.ts_seconds_ = ts_seconds;
    p.table_ = std::make_shared<const std::vector<double>>(std::move(table));
    return p;
}

const std::vector<double>& FailureProfile::table() const noexcept {
    return table_ ? *table_ : empty_table();
}

double FailureProfile::eval(std::uint64_t step) const {
    switch (kind_) {
    case ProfileKind::stationary:
        return eps0_;
    case ProfileKind::sinusoidal: {
        const double eps = eps0_ + delta_eps_ * std::cos(phase_step_ * static_cast<double>(step));
        return std::clamp(eps, 0.0, 1.0);
    }
    case ProfileKind::empirical:
        if (step >= table().size()) {
            throw bounds_error("empirical profile has " + std::to_string(table().size()) +
                               " entries, step " + std::to_string(step) + " requested");
        }
        return (*table_)[step];
    }
    return eps0_;
}

double FailureProfile::outcome_probability(std::uint64_t index) const {
    if (kind_ == ProfileKind::empirical) {
        if (index == 0 || index > table().size()) {
            throw bounds_error("outcome index " + std::to_string(index) + " outside empirical table of " +
                               std::to_string(table().size()) + " entries");
        }
        return (*table_)[index - 1];
    }
    return eval(index);
}

std::optional<std::uint64_t> FailureProfile::outcome_capacity() const noexcept {
    if (kind_ == ProfileKind::empirical) {
        return table().size();
    }
    return std::nullopt;
}

std::string FailureProfile::name() const {
    switch (kind_) {
    case ProfileKind::stationary:
        return "stationary";
    case ProfileKind::sinusoidal:
        return "sinusoidal";
    case ProfileKind::empirical:
        return "empirical";
    }
    return "stationary";
}

FailureProfile profile_stationary(double eps) {
    return FailureProfile::stationary(eps);
}

FailureProfile profile_sinusoidal(double eps0, double delta_eps, double freq_hz, double ts_seconds) {
    return FailureProfile::sinusoidal(eps0, delta_eps, freq_hz, ts_seconds);
}

double profile_eval(const FailureProfile& profile, std::uint64_t step) {
    return profile.eval(step);
}

std::uint8_t OutcomeSeries::at(std::size_t i) const {
    if (i == 0 || i > outcomes.size()) {
        throw bounds_error("outcome index " + std::to_string(i) + " outside [1, " +
                           std::to_string(outcomes.size()) + "]");
    }
    return outcomes[i - 1];
}

std::size_t OutcomeSeries::failures() const noexcept {
    return static_cast<std::size_t>(std::count(outcomes.begin(), outcomes.end(), std::uint8_t{0}));
}

double OutcomeSeries::failure_rate() const noexcept {
    if (outcomes.empty()) {
        return 0.0;
    }
    return static_cast<double>(failures()) / static_cast<double>(outcomes.size());
}

OutcomeSeries generate(const FailureProfile& profile, std::size_t n, std::uint64_t seed) {
    if (auto cap = profile.outcome_capacity(); cap && n > *cap) {
        throw bounds_error("empirical profile drives " + std::to_string(*cap) + " outcomes, " +
                           std::to_string(n) + " requested");
    }

    OutcomeSeries series;
    series.outcomes.resize(n);
    series.seed = seed;
    series.profile = profile;
    series.ts_seconds = profile.ts_seconds();
    series.source = describe_source(profile, seed);

    const auto& k = kernels::active();
    constexpr std::size_t chunk = 4096;
    std::array<double, chunk> draws{};
    std::array<double, chunk> eps{};
    UniformSource uniform(seed);

    for (std::size_t begin = 0; begin < n; begin += chunk) {
        const std::size_t len = std::min(chunk, n - begin);
        for (std::size_t j = 0; j < len; ++j) {
            draws[j] = uniform.next();
        }
        std::span<std::uint8_t> out(series.outcomes.data() + begin, len);
        if (profile.kind() == ProfileKind::stationary) {
            k.threshold_const(std::span<const double>(draws.data(), len), profile.eps0(), out);
        } else {
            for (std::size_t j = 0; j < len; ++j) {
                eps[j] = profile.outcome_probability(begin + j + 1);
            }
            k.threshold(std::span<const double>(draws.data(), len), std::span<const double>(eps.data(), len),
                        out);
        }
    }
    return series;
}

std::string describe_source(const FailureProfile& profile, std::uint64_t seed) {
    std::ostringstream os;
    os << "synthetic seed=" << seed << " profile=" << profile.name();
    switch (profile.kind()) {
    case ProfileKind::stationary:
        os << " eps0=" << format_number(profile.eps0());
        break;
    case ProfileKind::sinusoidal:
        os << " eps0=" << format_number(profile.eps0()) << " delta_eps=" << format_number(profile.delta_eps())
           << " freq_hz=" << format_number(profile.freq_hz());
        break;
    case ProfileKind::empirical:
        os << " entries=" << profile.table().size();
        break;
    }
    return os.str();
}

} // namespace fdrlab
