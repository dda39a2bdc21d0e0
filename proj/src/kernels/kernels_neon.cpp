// NEON variants. AdvSIMD is mandatory on AArch64, so availability is a
// compile-time property; a float64x2_t holds exactly one complex value.

#include "dicke/kernels.hpp"

#if defined(__aarch64__) || defined(_M_ARM64)
#define DICKE_HAVE_NEON_TU 1
#include <arm_neon.h>
#endif

namespace dicke::kernels {

#if DICKE_HAVE_NEON_TU
namespace {

inline float64x2_t cmul(float64x2_t ar, float64x2_t ai_signed, float64x2_t x) noexcept {
    return vfmaq_f64(vmulq_f64(ar, x), ai_signed, vextq_f64(x, x, 1));
}

void diag_mul_neon(cplx* y, const double* d, double shift, const cplx* x, std::size_t n) noexcept {
    auto* yd = reinterpret_cast<double*>(y);
    const auto* xd = reinterpret_cast<const double*>(x);
    for (std::size_t i = 0; i < n; ++i) {
        const float64x2_t f = vdupq_n_f64(d[i] - shift);
        vst1q_f64(yd + 2 * i, vmulq_f64(f, vld1q_f64(xd + 2 * i)));
    }
}

void weighted_axpy_neon(cplx* y, const double* w, double a, const cplx* x, std::size_t n) noexcept {
    auto* yd = reinterpret_cast<double*>(y);
    const auto* xd = reinterpret_cast<const double*>(x);
    for (std::size_t i = 0; i < n; ++i) {
        const float64x2_t f = vdupq_n_f64(a * w[i]);
        vst1q_f64(yd + 2 * i, vfmaq_f64(vld1q_f64(yd + 2 * i), f, vld1q_f64(xd + 2 * i)));
    }
}

void caxpy_into_neon(cplx* y, const cplx* z, cplx alpha, const cplx* x, std::size_t n) noexcept {
    auto* yd = reinterpret_cast<double*>(y);
    const auto* zd = reinterpret_cast<const double*>(z);
    const auto* xd = reinterpret_cast<const double*>(x);
    const float64x2_t ar = vdupq_n_f64(alpha.real());
    const double ai_lanes[2] = {-alpha.imag(), alpha.imag()};
    const float64x2_t ai = vld1q_f64(ai_lanes);
    for (std::size_t i = 0; i < n; ++i) {
        vst1q_f64(yd + 2 * i, vaddq_f64(vld1q_f64(zd + 2 * i), cmul(ar, ai, vld1q_f64(xd + 2 * i))));
    }
}

void caxpy_neon(cplx* y, cplx alpha, const cplx* x, std::size_t n) noexcept {
    caxpy_into_neon(y, y, alpha, x, n);
}

void cscale_neon(cplx* y, cplx alpha, std::size_t n) noexcept {
    auto* yd = reinterpret_cast<double*>(y);
    const float64x2_t ar = vdupq_n_f64(alpha.real());
    const double ai_lanes[2] = {-alpha.imag(), alpha.imag()};
    const float64x2_t ai = vld1q_f64(ai_lanes);
    for (std::size_t i = 0; i < n; ++i) {
        vst1q_f64(yd + 2 * i, cmul(ar, ai, vld1q_f64(yd + 2 * i)));
    }
}

double real_dot_neon(const cplx* a, const cplx* b, std::size_t n) noexcept {
    const auto* ad = reinterpret_cast<const double*>(a);
    const auto* bd = reinterpret_cast<const double*>(b);
    float64x2_t acc0 = vdupq_n_f64(0.0);
    float64x2_t acc1 = vdupq_n_f64(0.0);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        acc0 = vfmaq_f64(acc0, vld1q_f64(ad + 2 * i), vld1q_f64(bd + 2 * i));
        acc1 = vfmaq_f64(acc1, vld1q_f64(ad + 2 * i + 2), vld1q_f64(bd + 2 * i + 2));
    }
    for (; i < n; ++i) {
        acc0 = vfmaq_f64(acc0, vld1q_f64(ad + 2 * i), vld1q_f64(bd + 2 * i));
    }
    return vaddvq_f64(vaddq_f64(acc0, acc1));
}

constexpr KernelTable kNeon{
    Isa::neon,  diag_mul_neon, weighted_axpy_neon, caxpy_into_neon,
    caxpy_neon, cscale_neon,   real_dot_neon,
};

}  // namespace

namespace detail {
const KernelTable* neon_table() noexcept { return &kNeon; }
}  // namespace detail

#else

namespace detail {
const KernelTable* neon_table() noexcept { return nullptr; }
}  // namespace detail

#endif

}  // namespace dicke::kernels
