#include "dicke/kernels.hpp"

namespace dicke::kernels {
namespace {

void diag_mul_scalar(cplx* y, const double* d, double shift, const cplx* x, std::size_t n) noexcept {
    for (std::size_t i = 0; i < n; ++i) {
        y[i] = (d[i] - shift) * x[i];
    }
}

void weighted_axpy_scalar(cplx* y, const double* w, double a, const cplx* x, std::size_t n) noexcept {
    for (std::size_t i = 0; i < n; ++i) {
        y[i] += (a * w[i]) * x[i];
    }
}

void caxpy_into_scalar(cplx* y, const cplx* z, cplx alpha, const cplx* x, std::size_t n) noexcept {
    const double ar = alpha.real();
    const double ai = alpha.imag();
    for (std::size_t i = 0; i < n; ++i) {
        const double xr = x[i].real();
        const double xi = x[i].imag();
        y[i] = cplx(z[i].real() + (ar * xr - ai * xi), z[i].imag() + (ar * xi + ai * xr));
    }
}

void caxpy_scalar(cplx* y, cplx alpha, const cplx* x, std::size_t n) noexcept {
    caxpy_into_scalar(y, y, alpha, x, n);
}

void cscale_scalar(cplx* y, cplx alpha, std::size_t n) noexcept {
    const double ar = alpha.real();
    const double ai = alpha.imag();
    for (std::size_t i = 0; i < n; ++i) {
        const double yr = y[i].real();
        const double yi = y[i].imag();
        y[i] = cplx(ar * yr - ai * yi, ar * yi + ai * yr);
    }
}

double real_dot_scalar(const cplx* a, const cplx* b, std::size_t n) noexcept {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        acc += a[i].real() * b[i].real() + a[i].imag() * b[i].imag();
    }
    return acc;
}

constexpr KernelTable kScalar{
    Isa::scalar,     diag_mul_scalar, weighted_axpy_scalar, caxpy_into_scalar,
    caxpy_scalar,    cscale_scalar,   real_dot_scalar,
};

}  // namespace

const KernelTable& scalar_table() noexcept { return kScalar; }

}  // namespace dicke::kernels
