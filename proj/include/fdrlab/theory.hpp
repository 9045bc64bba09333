#pragma once

#include "fdrlab/channel.hpp"

#include <cstddef>
#include <cstdint>
#include <vector>

namespace fdrlab {

/// Closed-form moments of the estimators and their errors for a stationary
/// channel with failure probability eps.
struct TheoryReport {
    double eps = 0.0;
    std::size_t m = 0;
    double alpha = 0.0;
    double y0 = 1.0;

    double var_x = 0.0;
    double e_z = 0.0;
    double var_z = 0.0;
    double var_u = 0.0;
    double var_y_steady = 0.0;
    double var_d = 0.0;
    double var_e = 0.0;
};

double var_x(double eps);
double stationary_sma_error_variance(double eps, std::size_t m);
double stationary_ema_error_variance(double eps, std::size_t m, double alpha);
double stationary_ema_steady_variance(double eps, double alpha);

struct Moment {
    double mean = 0.0;
    double variance = 0.0;
};

/// Mean and variance of y_i, i steps after starting from the fixed value y0.
Moment ema_transient(std::uint64_t i, double y0, double eps, double alpha);

/// alpha = 2/m, which equalises the steady-state variances of u and y for alpha << 1.
double matched_alpha(std::size_t m);

TheoryReport stationary_report(double eps, std::size_t m, double alpha, double y0 = 1.0);

struct TargetDecomposition {
    double var_z = 0.0;
    double mean_eps = 0.0;
    double s2_eps = 0.0; // uncorrected variance of the window's eps values
};

/// Variance of z over a reference window of 2m failure probabilities.
TargetDecomposition target_variance_decomposition(const std::vector<double>& eps_window);

/// Per-step (mean, variance) of u, z and y for outcome indices [first, last].
struct MomentSeries {
    std::size_t first = 0;
    std::size_t last = 0;
    std::vector<Moment> u;
    std::vector<Moment> z;
    std::vector<Moment> y;
};

MomentSeries profile_moments(const FailureProfile& profile, std::size_t first, std::size_t last,
                             std::size_t m, double alpha, double y0 = 1.0);

} // namespace fdrlab
