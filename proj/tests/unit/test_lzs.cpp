#include <doctest.h>

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "dicke/lzs.hpp"

using namespace dicke::lzs;

TEST_CASE("single passage probability") {
    CHECK(p_lz(0.0, 0.3) == 1.0);
    CHECK(p_lz(0.5, 1e-6) < 1e-100);
    CHECK(p_lz(0.5, 1e9) == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(std::abs(p_lz(0.5, std::numbers::pi / (8.0 * std::numbers::ln2)) - 0.5) < 1e-14);
    CHECK(std::abs(p_lz(1.0, 2.0) - std::exp(-std::numbers::pi / 4.0)) < 1e-15);
    CHECK_THROWS_AS(p_lz(0.5, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(p_lz(-0.1, 1.0), std::invalid_argument);
}

TEST_CASE("double passage with Stuckelberg phase") {
    CHECK(p_plus_double(0.5, 0.7, 0.0) == 0.0);
    const double v_half = peak_velocity(0.5);
    CHECK(std::abs(p_plus_double(0.5, v_half, std::numbers::pi / 2) - 1.0) < 1e-12);
    CHECK(p_plus_double(0.0, 0.7, 1.0) == 0.0);
}

TEST_CASE("phase average of the double passage equals the averaged formula") {
    for (double v : {0.05, 0.3, 0.5664, 2.0, 10.0}) {
        const int n = 4096;
        double sum = 0.0;
        for (int k = 0; k < n; ++k) sum += p_plus_double(0.5, v, 2.0 * std::numbers::pi * k / n);
        CHECK(std::abs(sum / n - p_plus_averaged(0.5, v)) < 1e-12);
    }
}

TEST_CASE("averaged transfer peaks at one half where P_LZ is one half") {
    const double v = peak_velocity(0.5);
    CHECK(std::abs(v - std::numbers::pi / (8.0 * std::numbers::ln2)) < 1e-15);
    CHECK(std::abs(v - 0.56655) < 1e-4);
    CHECK(std::abs(p_plus_averaged(0.5, v) - 0.5) < 1e-12);
    CHECK(std::abs(peak_velocity(1.0) - 2.2662) < 1e-4);
    CHECK(std::abs(peak_velocity(1.0) / v - 4.0) < 1e-12);
    CHECK_THROWS_AS(peak_velocity(0.0), std::invalid_argument);
}

TEST_CASE("averaged transfer is unimodal in velocity") {
    const double v_peak = peak_velocity(0.5);
    double v_prev = 1e-3;
    double prev = p_plus_averaged(0.5, v_prev);
    for (int k = 1; k <= 600; ++k) {
        const double v = 1e-3 * std::pow(10.0, k / 100.0);
        const double cur = p_plus_averaged(0.5, v);
        CHECK(cur <= 0.5 + 1e-15);
        if (v <= v_peak) CHECK(cur >= prev);
        if (v_prev >= v_peak) CHECK(cur <= prev);
        v_prev = v;
        prev = cur;
    }
}
