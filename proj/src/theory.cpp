#include "fdrlab/theory.hpp"

#include "fdrlab/errors.hpp"
#include "fdrlab/filters.hpp"

#include <cmath>
#include <string>

namespace fdrlab {
namespace {

void check_eps(double eps) {
    if (!(eps >= 0.0 && eps <= 1.0)) {
        throw validation_error("eps", "probability must lie in [0, 1], got " + std::to_string(eps));
    }
}

// (1 - alpha)^k without pow() underflow surprises for large k.
double beta_pow(double alpha, double k) {
    if (k == 0.0) {
        return 1.0;
    }
    return std::exp(k * std::log1p(-alpha));
}

// 1 - (1 - alpha)^k, accurate when the power is close to 1.
double one_minus_beta_pow(double alpha, double k) {
    if (k == 0.0) {
        return 0.0;
    }
    return -std::expm1(k * std::log1p(-alpha));
}

} // namespace

double var_x(double eps) {
    check_eps(eps);
    return eps * (1.0 - eps);
}

double stationary_sma_error_variance(double eps, std::size_t m) {
    validate_window(m);
    return var_x(eps) / (2.0 * static_cast<double>(m));
}

double stationary_ema_error_variance(double eps, std::size_t m, double alpha) {
    validate_window(m);
    validate_alpha(alpha);
    const double md = static_cast<double>(m);
    const double bracket = alpha / (2.0 - alpha) + beta_pow(alpha, md) / md - 1.0 / (2.0 * md);
    return var_x(eps) * bracket;
}

double stationary_ema_steady_variance(double eps, double alpha) {
    validate_alpha(alpha);
    return var_x(eps) * alpha / (2.0 - alpha);
}

Moment ema_transient(std::uint64_t i, double y0, double eps, double alpha) {
    validate_alpha(alpha);
    const double ex = 1.0 - eps;
    const double k = static_cast<double>(i);
    Moment out;
    out.mean = beta_pow(alpha, k) * y0 + one_minus_beta_pow(alpha, k) * ex;
    out.variance = var_x(eps) * one_minus_beta_pow(alpha, 2.0 * k) * alpha / (2.0 - alpha);
    return out;
}

double matched_alpha(std::size_t m) {
    if (m < 2) {
        throw validation_error("m", "matched alpha = 2/m needs m >= 2");
    }
    return 2.0 / static_cast<double>(m);
}

TheoryReport stationary_report(double eps, std::size_t m, double alpha, double y0) {
    TheoryReport r;
    r.eps = eps;
    r.m = m;
    r.alpha = alpha;
    r.y0 = y0;
    r.var_x = var_x(eps);
    r.e_z = 1.0 - eps;
    r.var_z = stationary_sma_error_variance(eps, m); // Var(z) = Var(x)/2m = Var(d)
    r.var_u = r.var_x / static_cast<double>(m);
    r.var_y_steady = stationary_ema_steady_variance(eps, alpha);
    r.var_d = r.var_z;
    r.var_e = stationary_ema_error_variance(eps, m, alpha);
    return r;
}

TargetDecomposition target_variance_decomposition(const std::vector<double>& eps_window) {
    const std::size_t len = eps_window.size();
    if (len < 2 || len % 2 != 0) {
        throw validation_error("eps_window", "reference window must hold an even number (>= 2) of values");
    }
    for (double e : eps_window) {
        check_eps(e);
    }
    const double n = static_cast<double>(len);
    double sum_var = 0.0;
    double sum = 0.0;
    for (double e : eps_window) {
        sum_var += e * (1.0 - e);
        sum += e;
    }
    const double mean = sum / n;
    double s2 = 0.0;
    for (double e : eps_window) {
        s2 += (e - mean) * (e - mean);
    }
    TargetDecomposition out;
    out.var_z = sum_var / (n * n); // 1/(4m^2) with 2m = n
    out.mean_eps = mean;
    out.s2_eps = s2 / n;
    return out;
}

MomentSeries profile_moments(const FailureProfile& profile, std::size_t first, std::size_t last,
                             std::size_t m, double alpha, double y0) {
    validate_window(m);
    validate_alpha(alpha);
    if (first < m || first > last) {
        throw bounds_error("moment range [" + std::to_string(first) + ", " + std::to_string(last) +
                           "] must satisfy m <= first <= last");
    }
    if (auto cap = profile.outcome_capacity(); cap && last + m > *cap) {
        throw bounds_error("moment range needs outcome " + std::to_string(last + m) + " but profile has " +
                           std::to_string(*cap));
    }

    // Prefix sums over outcome indices [lo, hi] of E[x] and Var(x).
    const std::size_t lo = first - m + 1;
    const std::size_t hi = last + m;
    std::vector<long double> pmean(hi - lo + 2, 0.0L);
    std::vector<long double> pvar(hi - lo + 2, 0.0L);
    for (std::size_t j = lo; j <= hi; ++j) {
        const double eps = profile.outcome_probability(j);
        pmean[j - lo + 1] = pmean[j - lo] + static_cast<long double>(1.0 - eps);
        pvar[j - lo + 1] = pvar[j - lo] + static_cast<long double>(eps * (1.0 - eps));
    }
    // Sum over outcome indices [a, b].
    auto range_sum = [&](const std::vector<long double>& p, std::size_t a, std::size_t b) {
        return static_cast<double>(p[b - lo + 1] - p[a - lo]);
    };

    MomentSeries out;
    out.first = first;
    out.last = last;
    const std::size_t count = last - first + 1;
    out.u.resize(count);
    out.z.resize(count);
    out.y.resize(count);
    const double md = static_cast<double>(m);
    for (std::size_t i = first; i <= last; ++i) {
        Moment& u = out.u[i - first];
        u.mean = range_sum(pmean, i - m + 1, i) / md;
        u.variance = range_sum(pvar, i - m + 1, i) / (md * md);
        Moment& z = out.z[i - first];
        z.mean = range_sum(pmean, i - m + 1, i + m) / (2.0 * md);
        z.variance = range_sum(pvar, i - m + 1, i + m) / (4.0 * md * md);
    }

    // y needs the whole history from step 1.
    const double beta = 1.0 - alpha;
    double mean = y0;
    double var = 0.0;
    for (std::size_t i = 1; i <= last; ++i) {
        const double eps = profile.outcome_probability(i);
        mean = beta * mean + alpha * (1.0 - eps);
        var = beta * beta * var + alpha * alpha * eps * (1.0 - eps);
        if (i >= first) {
            out.y[i - first] = Moment{mean, var};
        }
    }
    return out;
}

} // namespace fdrlab
