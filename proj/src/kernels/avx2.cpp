#include "fdrlab/kernels.hpp"

#include <immintrin.h>

namespace fdrlab::kernels::avx2 {
namespace {

// Packs the 0/1 lane masks of a 4-wide compare into four bytes.
inline void store_mask_bytes(__m256d mask, std::uint8_t* out) {
    const int bits = _mm256_movemask_pd(mask);
    out[0] = static_cast<std::uint8_t>(bits & 1);
    out[1] = static_cast<std::uint8_t>((bits >> 1) & 1);
    out[2] = static_cast<std::uint8_t>((bits >> 2) & 1);
    out[3] = static_cast<std::uint8_t>((bits >> 3) & 1);
}

void threshold(std::span<const double> draws, std::span<const double> eps, std::span<std::uint8_t> out) {
    const std::size_t n = draws.size();
    std::size_t k = 0;
    for (; k + 4 <= n; k += 4) {
        const __m256d r = _mm256_loadu_pd(draws.data() + k);
        const __m256d e = _mm256_loadu_pd(eps.data() + k);
        store_mask_bytes(_mm256_cmp_pd(r, e, _CMP_GE_OQ), out.data() + k);
    }
    for (; k < n; ++k) {
        out[k] = draws[k] >= eps[k] ? 1 : 0;
    }
}

void threshold_const(std::span<const double> draws, double eps, std::span<std::uint8_t> out) {
    const std::size_t n = draws.size();
    const __m256d e = _mm256_set1_pd(eps);
    std::size_t k = 0;
    for (; k + 4 <= n; k += 4) {
        const __m256d r = _mm256_loadu_pd(draws.data() + k);
        store_mask_bytes(_mm256_cmp_pd(r, e, _CMP_GE_OQ), out.data() + k);
    }
    for (; k < n; ++k) {
        out[k] = draws[k] >= eps ? 1 : 0;
    }
}

void counts_to_means(std::span<const std::int32_t> past, std::span<const std::int32_t> future, double m,
                     std::span<double> u, std::span<double> z) {
    const std::size_t n = past.size();
    const __m256d vm = _mm256_set1_pd(m);
    const __m256d half = _mm256_set1_pd(0.5);
    std::size_t k = 0;
    for (; k + 4 <= n; k += 4) {
        const __m128i p = _mm_loadu_si128(reinterpret_cast<const __m128i*>(past.data() + k));
        const __m128i f = _mm_loadu_si128(reinterpret_cast<const __m128i*>(future.data() + k));
        const __m256d uk = _mm256_div_pd(_mm256_cvtepi32_pd(p), vm);
        const __m256d vk = _mm256_div_pd(_mm256_cvtepi32_pd(f), vm);
        _mm256_storeu_pd(u.data() + k, uk);
        _mm256_storeu_pd(z.data() + k, _mm256_mul_pd(_mm256_add_pd(uk, vk), half));
    }
    for (; k < n; ++k) {
        const double uk = static_cast<double>(past[k]) / m;
        const double vk = static_cast<double>(future[k]) / m;
        u[k] = uk;
        z[k] = (uk + vk) * 0.5;
    }
}

void subtract(std::span<const double> a, std::span<const double> b, std::span<double> out) {
    const std::size_t n = a.size();
    std::size_t k = 0;
    for (; k + 4 <= n; k += 4) {
        _mm256_storeu_pd(out.data() + k,
                         _mm256_sub_pd(_mm256_loadu_pd(a.data() + k), _mm256_loadu_pd(b.data() + k)));
    }
    for (; k < n; ++k) {
        out[k] = a[k] - b[k];
    }
}

inline __m256d vabs(__m256d x) {
    return _mm256_andnot_pd(_mm256_set1_pd(-0.0), x);
}

inline void neumaier(__m256d& s, __m256d& c, __m256d x) {
    const __m256d t = _mm256_add_pd(s, x);
    const __m256d big_s = _mm256_cmp_pd(vabs(s), vabs(x), _CMP_GE_OQ);
    const __m256d when_s = _mm256_add_pd(_mm256_sub_pd(s, t), x);
    const __m256d when_x = _mm256_add_pd(_mm256_sub_pd(x, t), s);
    c = _mm256_add_pd(c, _mm256_blendv_pd(when_x, when_s, big_s));
    s = t;
}

void accumulate(MomentLanes& st, std::span<const double> values) {
    __m256d sum = _mm256_loadu_pd(st.sum.data());
    __m256d sum_c = _mm256_loadu_pd(st.sum_c.data());
    __m256d sq = _mm256_loadu_pd(st.sq.data());
    __m256d sq_c = _mm256_loadu_pd(st.sq_c.data());
    __m256d ab = _mm256_loadu_pd(st.abs.data());
    __m256d ab_c = _mm256_loadu_pd(st.abs_c.data());
    for (std::size_t base = 0; base + lanes <= values.size(); base += lanes) {
        const __m256d x = _mm256_loadu_pd(values.data() + base);
        neumaier(sum, sum_c, x);
        neumaier(sq, sq_c, _mm256_mul_pd(x, x));
        neumaier(ab, ab_c, vabs(x));
    }
    _mm256_storeu_pd(st.sum.data(), sum);
    _mm256_storeu_pd(st.sum_c.data(), sum_c);
    _mm256_storeu_pd(st.sq.data(), sq);
    _mm256_storeu_pd(st.sq_c.data(), sq_c);
    _mm256_storeu_pd(st.abs.data(), ab);
    _mm256_storeu_pd(st.abs_c.data(), ab_c);
}

} // namespace

const KernelTable& table() {
    static const KernelTable t{Isa::avx2, threshold, threshold_const, counts_to_means, subtract, accumulate};
    return t;
}

} // namespace fdrlab::kernels::avx2
