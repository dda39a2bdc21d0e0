#pragma once
// Vector kernels used by the propagation inner loops.
//
// Every kernel has a scalar reference implementation. SIMD variants (AVX2+FMA
// on x86-64, NEON on AArch64) are compiled into separate translation units and
// selected once at runtime. Complex vectors are interleaved (re, im) doubles,
// the layout of std::complex<double>.

#include <complex>
#include <cstddef>
#include <string_view>

namespace dicke::kernels {

using cplx = std::complex<double>;

enum class Isa { scalar, avx2, neon };

std::string_view isa_name(Isa isa) noexcept;

struct KernelTable {
    Isa isa;
    // y[i] = (d[i] - shift) * x[i]
    void (*diag_mul)(cplx* y, const double* d, double shift, const cplx* x, std::size_t n) noexcept;
    // y[i] += a * w[i] * x[i]
    void (*weighted_axpy)(cplx* y, const double* w, double a, const cplx* x, std::size_t n) noexcept;
    // y[i] = z[i] + alpha * x[i]
    void (*caxpy_into)(cplx* y, const cplx* z, cplx alpha, const cplx* x, std::size_t n) noexcept;
    // y[i] += alpha * x[i]
    void (*caxpy)(cplx* y, cplx alpha, const cplx* x, std::size_t n) noexcept;
    // y[i] *= alpha
    void (*cscale)(cplx* y, cplx alpha, std::size_t n) noexcept;
    // sum_i Re(conj(a[i]) * b[i])
    double (*real_dot)(const cplx* a, const cplx* b, std::size_t n) noexcept;
};

const KernelTable& scalar_table() noexcept;

// True when the variant was compiled in and the running CPU supports it.
bool isa_available(Isa isa) noexcept;

// Throws std::invalid_argument if the variant is unavailable.
const KernelTable& table_for(Isa isa);

// Best available table. The DICKE_ISA environment variable ("scalar", "avx2",
// "neon") overrides the choice; an unavailable request falls back to scalar.
const KernelTable& active() noexcept;

namespace detail {
const KernelTable* avx2_table() noexcept;
const KernelTable* neon_table() noexcept;
}  // namespace detail

}  // namespace dicke::kernels
