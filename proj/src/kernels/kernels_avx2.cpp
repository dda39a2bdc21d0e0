// AVX2 + FMA variants. Functions carry a target attribute instead of the whole
// translation unit being built with -mavx2, so no inline function from a
// shared header can be emitted with AVX2 encodings and leak into scalar paths.

#include "dicke/kernels.hpp"

#if defined(__x86_64__) && (defined(__GNUC__) || defined(__clang__))
#define DICKE_HAVE_AVX2_TU 1
#include <immintrin.h>
#endif

namespace dicke::kernels {

#if DICKE_HAVE_AVX2_TU
namespace {

#define DICKE_AVX2 __attribute__((target("avx2,fma")))

// [w0, w1] -> [w0, w0, w1, w1], one weight per interleaved complex.
DICKE_AVX2 inline __m256d widen_pair(const double* w) noexcept {
    return _mm256_permute4x64_pd(_mm256_castpd128_pd256(_mm_loadu_pd(w)), 0x50);
}

// alpha * x for two interleaved complex values.
DICKE_AVX2 inline __m256d cmul(__m256d ar, __m256d ai, __m256d x) noexcept {
    const __m256d swapped = _mm256_permute_pd(x, 0b0101);
    return _mm256_fmaddsub_pd(ar, x, _mm256_mul_pd(ai, swapped));
}

DICKE_AVX2 void diag_mul_avx2(cplx* y, const double* d, double shift, const cplx* x,
                              std::size_t n) noexcept {
    auto* yd = reinterpret_cast<double*>(y);
    const auto* xd = reinterpret_cast<const double*>(x);
    const __m256d s = _mm256_set1_pd(shift);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        const __m256d dv = _mm256_sub_pd(widen_pair(d + i), s);
        _mm256_storeu_pd(yd + 2 * i, _mm256_mul_pd(dv, _mm256_loadu_pd(xd + 2 * i)));
    }
    for (; i < n; ++i) {
        const double f = d[i] - shift;
        yd[2 * i] = f * xd[2 * i];
        yd[2 * i + 1] = f * xd[2 * i + 1];
    }
}

DICKE_AVX2 void weighted_axpy_avx2(cplx* y, const double* w, double a, const cplx* x,
                                   std::size_t n) noexcept {
    auto* yd = reinterpret_cast<double*>(y);
    const auto* xd = reinterpret_cast<const double*>(x);
    const __m256d av = _mm256_set1_pd(a);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d w0 = _mm256_mul_pd(av, widen_pair(w + i));
        const __m256d w1 = _mm256_mul_pd(av, widen_pair(w + i + 2));
        const __m256d y0 = _mm256_fmadd_pd(w0, _mm256_loadu_pd(xd + 2 * i), _mm256_loadu_pd(yd + 2 * i));
        const __m256d y1 =
            _mm256_fmadd_pd(w1, _mm256_loadu_pd(xd + 2 * i + 4), _mm256_loadu_pd(yd + 2 * i + 4));
        _mm256_storeu_pd(yd + 2 * i, y0);
        _mm256_storeu_pd(yd + 2 * i + 4, y1);
    }
    for (; i + 2 <= n; i += 2) {
        const __m256d wv = _mm256_mul_pd(av, widen_pair(w + i));
        _mm256_storeu_pd(yd + 2 * i,
                         _mm256_fmadd_pd(wv, _mm256_loadu_pd(xd + 2 * i), _mm256_loadu_pd(yd + 2 * i)));
    }
    for (; i < n; ++i) {
        const double f = a * w[i];
        yd[2 * i] += f * xd[2 * i];
        yd[2 * i + 1] += f * xd[2 * i + 1];
    }
}

DICKE_AVX2 void caxpy_into_avx2(cplx* y, const cplx* z, cplx alpha, const cplx* x,
                                std::size_t n) noexcept {
    auto* yd = reinterpret_cast<double*>(y);
    const auto* zd = reinterpret_cast<const double*>(z);
    const auto* xd = reinterpret_cast<const double*>(x);
    const double ar = reinterpret_cast<const double*>(&alpha)[0];
    const double ai = reinterpret_cast<const double*>(&alpha)[1];
    const __m256d arv = _mm256_set1_pd(ar);
    const __m256d aiv = _mm256_set1_pd(ai);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        const __m256d prod = cmul(arv, aiv, _mm256_loadu_pd(xd + 2 * i));
        _mm256_storeu_pd(yd + 2 * i, _mm256_add_pd(_mm256_loadu_pd(zd + 2 * i), prod));
    }
    for (; i < n; ++i) {
        const double xr = xd[2 * i];
        const double xi = xd[2 * i + 1];
        yd[2 * i] = zd[2 * i] + (ar * xr - ai * xi);
        yd[2 * i + 1] = zd[2 * i + 1] + (ar * xi + ai * xr);
    }
}

DICKE_AVX2 void caxpy_avx2(cplx* y, cplx alpha, const cplx* x, std::size_t n) noexcept {
    caxpy_into_avx2(y, y, alpha, x, n);
}

DICKE_AVX2 void cscale_avx2(cplx* y, cplx alpha, std::size_t n) noexcept {
    auto* yd = reinterpret_cast<double*>(y);
    const double ar = reinterpret_cast<const double*>(&alpha)[0];
    const double ai = reinterpret_cast<const double*>(&alpha)[1];
    const __m256d arv = _mm256_set1_pd(ar);
    const __m256d aiv = _mm256_set1_pd(ai);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        _mm256_storeu_pd(yd + 2 * i, cmul(arv, aiv, _mm256_loadu_pd(yd + 2 * i)));
    }
    for (; i < n; ++i) {
        const double yr = yd[2 * i];
        const double yi = yd[2 * i + 1];
        yd[2 * i] = ar * yr - ai * yi;
        yd[2 * i + 1] = ar * yi + ai * yr;
    }
}

DICKE_AVX2 double real_dot_avx2(const cplx* a, const cplx* b, std::size_t n) noexcept {
    const auto* ad = reinterpret_cast<const double*>(a);
    const auto* bd = reinterpret_cast<const double*>(b);
    const std::size_t m = 2 * n;
    __m256d acc0 = _mm256_setzero_pd();
    __m256d acc1 = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 8 <= m; i += 8) {
        acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(ad + i), _mm256_loadu_pd(bd + i), acc0);
        acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(ad + i + 4), _mm256_loadu_pd(bd + i + 4), acc1);
    }
    for (; i + 4 <= m; i += 4) {
        acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(ad + i), _mm256_loadu_pd(bd + i), acc0);
    }
    const __m256d acc = _mm256_add_pd(acc0, acc1);
    const __m128d half = _mm_add_pd(_mm256_castpd256_pd128(acc), _mm256_extractf128_pd(acc, 1));
    double sum = _mm_cvtsd_f64(_mm_add_sd(half, _mm_unpackhi_pd(half, half)));
    for (; i < m; ++i) {
        sum += ad[i] * bd[i];
    }
    return sum;
}

#undef DICKE_AVX2

constexpr KernelTable kAvx2{
    Isa::avx2,  diag_mul_avx2, weighted_axpy_avx2, caxpy_into_avx2,
    caxpy_avx2, cscale_avx2,   real_dot_avx2,
};

}  // namespace

namespace detail {
const KernelTable* avx2_table() noexcept {
    __builtin_cpu_init();
    if (__builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma")) {
        return &kAvx2;
    }
    return nullptr;
}
}  // namespace detail

#else

namespace detail {
const KernelTable* avx2_table() noexcept { return nullptr; }
}  // namespace detail

#endif

}  // namespace dicke::kernels
