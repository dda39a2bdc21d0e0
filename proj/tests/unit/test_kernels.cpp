#include <doctest.h>

#include <random>
#include <stdexcept>

#include "dicke/kernels.hpp"
#include "support.hpp"

using namespace dicke;
using kernels::Isa;

namespace {

std::vector<double> random_reals(std::size_t n, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    std::vector<double> v(n);
    for (auto& x : v) x = u(rng);
    return v;
}

void check_close(const std::vector<cplx>& a, const std::vector<cplx>& b) {
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(std::abs(a[i] - b[i]) <= 1e-14 * (1.0 + std::abs(a[i])));
    }
}

// Odd sizes exercise the scalar tails of the vector loops.
constexpr std::size_t kSizes[] = {0, 1, 2, 3, 4, 5, 7, 8, 17, 64, 1001};

}  // namespace

TEST_CASE("scalar table is always available") {
    CHECK(kernels::isa_available(Isa::scalar));
    CHECK(kernels::table_for(Isa::scalar).isa == Isa::scalar);
    CHECK(kernels::isa_name(Isa::avx2) == "avx2");
}

TEST_CASE("unavailable variants are rejected") {
    for (Isa isa : {Isa::avx2, Isa::neon}) {
        if (!kernels::isa_available(isa)) CHECK_THROWS_AS(kernels::table_for(isa), std::invalid_argument);
    }
}

TEST_CASE("vector kernels match the scalar reference") {
    const auto& ref = kernels::scalar_table();
    for (Isa isa : {Isa::avx2, Isa::neon}) {
        if (!kernels::isa_available(isa)) continue;
        const auto& k = kernels::table_for(isa);
        CAPTURE(kernels::isa_name(isa));
        std::mt19937_64 rng(7);
        for (std::size_t n : kSizes) {
            CAPTURE(n);
            const auto x = testing::random_amplitudes(n, rng, false);
            const auto z = testing::random_amplitudes(n, rng, false);
            const auto d = random_reals(n, rng);
            const auto w = random_reals(n, rng);
            const cplx alpha(0.3, -1.7);

            std::vector<cplx> a(n), b(n);
            ref.diag_mul(a.data(), d.data(), 0.25, x.data(), n);
            k.diag_mul(b.data(), d.data(), 0.25, x.data(), n);
            check_close(a, b);

            a = z;
            b = z;
            ref.weighted_axpy(a.data(), w.data(), -0.6, x.data(), n);
            k.weighted_axpy(b.data(), w.data(), -0.6, x.data(), n);
            check_close(a, b);

            ref.caxpy_into(a.data(), z.data(), alpha, x.data(), n);
            k.caxpy_into(b.data(), z.data(), alpha, x.data(), n);
            check_close(a, b);

            a = z;
            b = z;
            ref.caxpy(a.data(), alpha, x.data(), n);
            k.caxpy(b.data(), alpha, x.data(), n);
            check_close(a, b);

            ref.cscale(a.data(), alpha, n);
            k.cscale(b.data(), alpha, n);
            check_close(a, b);

            const double r0 = ref.real_dot(x.data(), z.data(), n);
            const double r1 = k.real_dot(x.data(), z.data(), n);
            CHECK(std::abs(r0 - r1) <= 1e-12 * (1.0 + static_cast<double>(n)));
        }
    }
}

TEST_CASE("scalar kernels compute the documented formulas") {
    const auto& k = kernels::scalar_table();
    const std::vector<cplx> x{{1, 2}, {-3, 0.5}};
    const std::vector<double> d{2.0, -1.0};
    std::vector<cplx> y(2);
    k.diag_mul(y.data(), d.data(), 0.5, x.data(), 2);
    CHECK(y[0] == cplx(1.5, 3.0));
    CHECK(y[1] == cplx(4.5, -0.75));
    CHECK(k.real_dot(x.data(), x.data(), 2) == doctest::Approx(1 + 4 + 9 + 0.25));
    k.cscale(y.data(), cplx(0, 1), 2);
    CHECK(y[0] == cplx(-3.0, 1.5));
}
