#pragma once

// Data-parallel inner loops. Every kernel has a scalar reference and, on
// x86-64, an AVX2 variant selected once at runtime. Variants are required to
// produce bit-identical results; the scalar moment kernel therefore mirrors
// the four-lane layout of the vector one.

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>

namespace fdrlab::kernels {

inline constexpr std::size_t lanes = 4;

/// Neumaier-compensated running sums of x, x^2 and |x|, one set per lane.
struct MomentLanes {
    std::array<double, lanes> sum{};
    std::array<double, lanes> sum_c{};
    std::array<double, lanes> sq{};
    std::array<double, lanes> sq_c{};
    std::array<double, lanes> abs{};
    std::array<double, lanes> abs_c{};
};

enum class Isa { scalar, avx2 };

struct KernelTable {
    Isa isa;
    /// out[k] = draws[k] >= eps[k]
    void (*threshold)(std::span<const double> draws, std::span<const double> eps,
                      std::span<std::uint8_t> out);
    void (*threshold_const)(std::span<const double> draws, double eps, std::span<std::uint8_t> out);
    /// u = past/m, z = (past/m + future/m) * 0.5
    void (*counts_to_means)(std::span<const std::int32_t> past, std::span<const std::int32_t> future,
                            double m, std::span<double> u, std::span<double> z);
    void (*subtract)(std::span<const double> a, std::span<const double> b, std::span<double> out);
    /// Element k of `values` feeds lane k % lanes; size must be a multiple of lanes.
    void (*accumulate)(MomentLanes& state, std::span<const double> values);
};

namespace scalar {
const KernelTable& table();
}

#ifdef FDRLAB_HAVE_AVX2
namespace avx2 {
const KernelTable& table();
}
#endif

bool avx2_supported();

/// Kernel set in use. Chosen on first call: AVX2 when the CPU has it, unless
/// the environment variable FDRLAB_SIMD is set to "scalar".
const KernelTable& active();

std::string_view isa_name(Isa isa);

} // namespace fdrlab::kernels
