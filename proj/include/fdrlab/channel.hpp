#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <random>
#include <string>
#include <vector>

namespace fdrlab {

/// Probing period used when none is given: one probe every 0.5 s.
inline constexpr double default_ts_seconds = 0.5;

enum class ProfileKind { stationary, sinusoidal, empirical };

/// Failure probability as a function of the sampling step.
///
/// Steps are the 0-based sampling instants t = i * Ts. Outcome x_i (1-based)
/// is drawn with probability outcome_probability(i): for analytic profiles
/// that is eval(i), for empirical tables it is table[i - 1].
class FailureProfile {
public:
    static FailureProfile stationary(double eps, double ts_seconds = default_ts_seconds);
    static FailureProfile sinusoidal(double eps0, double delta_eps, double freq_hz,
                                     double ts_seconds = default_ts_seconds);
    static FailureProfile empirical(std::vector<double> table, double ts_seconds = default_ts_seconds);

    ProfileKind kind() const noexcept { return kind_; }
    double eps0() const noexcept { return eps0_; }
    double delta_eps() const noexcept { return delta_eps_; }
    double freq_hz() const noexcept { return freq_hz_; }
    double ts_seconds() const noexcept { return ts_seconds_; }
    /// Empty unless kind() == empirical.
    const std::vector<double>& table() const noexcept;

    /// eps at sampling step i; throws bounds_error past the end of an empirical table.
    double eval(std::uint64_t step) const;
    /// Failure probability of 1-based outcome index i.
    double outcome_probability(std::uint64_t index) const;
    /// Number of outcomes the profile can drive, or nullopt when unbounded.
    std::optional<std::uint64_t> outcome_capacity() const noexcept;

    /// "stationary", "sinusoidal" or "empirical".
    std::string name() const;

private:
    FailureProfile() = default;

    ProfileKind kind_ = ProfileKind::stationary;
    double eps0_ = 0.0;
    double delta_eps_ = 0.0;
    double freq_hz_ = 0.0;
    double ts_seconds_ = default_ts_seconds;
    double phase_step_ = 0.0; // 2*pi*f*Ts
    std::shared_ptr<const std::vector<double>> table_;
};

FailureProfile profile_stationary(double eps);
FailureProfile profile_sinusoidal(double eps0, double delta_eps, double freq_hz,
                                  double ts_seconds = default_ts_seconds);
double profile_eval(const FailureProfile& profile, std::uint64_t step);

/// Binary outcomes x_1..x_n (1 = delivered, 0 = failed).
struct OutcomeSeries {
    std::vector<std::uint8_t> outcomes; // outcomes[i - 1] holds x_i
    std::optional<std::uint64_t> seed;
    std::optional<FailureProfile> profile; // nullopt for external traces
    double ts_seconds = default_ts_seconds;
    std::string source;

    std::size_t size() const noexcept { return outcomes.size(); }
    /// 1-based access.
    std::uint8_t at(std::size_t i) const;
    std::size_t failures() const noexcept;
    /// Fraction of failed attempts; 0 for an empty series.
    double failure_rate() const noexcept;
};

/// Uniform draw in [0, 1) from the pinned generator: mt19937_64, top 53 bits.
class UniformSource {
public:
    explicit UniformSource(std::uint64_t seed) : engine_(seed) {}

    double next() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

private:
    std::mt19937_64 engine_;
};

/// x_i = 1 iff r_i >= eps_i, r_i the i-th draw of UniformSource(seed).
OutcomeSeries generate(const FailureProfile& profile, std::size_t n, std::uint64_t seed);

/// Provenance string written into trace headers for generated series.
std::string describe_source(const FailureProfile& profile, std::uint64_t seed);

} // namespace fdrlab
