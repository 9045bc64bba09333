#include "fdrlab/kernels.hpp"

#include <cmath>

namespace fdrlab::kernels::scalar {
namespace {

void threshold(std::span<const double> draws, std::span<const double> eps, std::span<std::uint8_t> out) {
    for (std::size_t k = 0; k < draws.size(); ++k) {
        out[k] = draws[k] >= eps[k] ? 1 : 0;
    }
}

void threshold_const(std::span<const double> draws, double eps, std::span<std::uint8_t> out) {
    for (std::size_t k = 0; k < draws.size(); ++k) {
        out[k] = draws[k] >= eps ? 1 : 0;
    }
}

void counts_to_means(std::span<const std::int32_t> past, std::span<const std::int32_t> future, double m,
                     std::span<double> u, std::span<double> z) {
    for (std::size_t k = 0; k < past.size(); ++k) {
        const double uk = static_cast<double>(past[k]) / m;
        const double vk = static_cast<double>(future[k]) / m;
        u[k] = uk;
        z[k] = (uk + vk) * 0.5;
    }
}

void subtract(std::span<const double> a, std::span<const double> b, std::span<double> out) {
    for (std::size_t k = 0; k < a.size(); ++k) {
        out[k] = a[k] - b[k];
    }
}

// Neumaier step, written exactly as the vector variant evaluates it.
inline void neumaier(double& s, double& c, double x) {
    const double t = s + x;
    if (std::fabs(s) >= std::fabs(x)) {
        c += (s - t) + x;
    } else {
        c += (x - t) + s;
    }
    s = t;
}

void accumulate(MomentLanes& st, std::span<const double> values) {
    for (std::size_t base = 0; base + lanes <= values.size(); base += lanes) {
        for (std::size_t l = 0; l < lanes; ++l) {
            const double x = values[base + l];
            neumaier(st.sum[l], st.sum_c[l], x);
            neumaier(st.sq[l], st.sq_c[l], x * x);
            neumaier(st.abs[l], st.abs_c[l], std::fabs(x));
        }
    }
}

} // namespace

const KernelTable& table() {
    static const KernelTable t{Isa::scalar, threshold, threshold_const, counts_to_means, subtract, accumulate};
    return t;
}

} // namespace fdrlab::kernels::scalar
