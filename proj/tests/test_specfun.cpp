#include <doctest.h>

#include <cmath>
#include <random>

#include "twcr/errors.hpp"
#include "twcr/oracle.hpp"
#include "twcr/specfun.hpp"

using namespace twcr;
using specfun::bessel_j;
using specfun::wigner_d1;

TEST_CASE("bessel_j at the origin") {
    CHECK(bessel_j(0, 0.0) == 1.0);
    for (int n = 1; n <= 10; ++n) CHECK(bessel_j(n, 0.0) == 0.0);
    for (int n = 1; n <= 10; ++n) CHECK(bessel_j(-n, 0.0) == 0.0);
}

TEST_CASE("bessel_j negative order is the reflection") {
    CHECK(bessel_j(-3, 2.5) == -bessel_j(3, 2.5));
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> ux(0.0, 100.0);
    for (int k = 0; k < 200; ++k) {
        const int n = static_cast<int>(rng() % 20);
        const double x = ux(rng);
        CHECK(bessel_j(-n, x) == (n % 2 ? -bessel_j(n, x) : bessel_j(n, x)));
    }
}

TEST_CASE("bessel_j(1, 1) against the ascending series") {
    // sum_k (-1)^k (1/2)^{1+2k} / (k! (k+1)!) evaluated in long double
    const double series = static_cast<double>(oracle::bessel_series(1, 1.0L));
    CHECK(series == doctest::Approx(0.44005058574493355).epsilon(1e-16));
    CHECK(std::abs(bessel_j(1, 1.0) - series) <= 1e-15 * series);
}

TEST_CASE("bessel_j is accurate across the series/recurrence switch") {
    for (double x : {11.0, 11.9, 11.999, 12.0, 12.001, 12.5}) {
        for (int n = 0; n <= 15; ++n) {
            const double ref = oracle::bessel_reference(n, x);
            if (std::abs(ref) < 1e-4) continue;
            CHECK(std::abs(bessel_j(n, x) - ref) <= 1e-12 * std::abs(ref));
        }
    }
}

TEST_CASE("bessel_j relative accuracy up to |x| = 100") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> ux(0.0, 100.0);
    double worst = 0.0;
    for (int k = 0; k < 400; ++k) {
        const int n = static_cast<int>(rng() % 13);
        const double x = ux(rng);
        const double ref = oracle::bessel_reference(n, x);
        if (std::abs(ref) < 1e-3 * std::sqrt(2.0 / (3.14159 * std::max(x, 1.0)))) continue;
        worst = std::max(worst, std::abs(bessel_j(n, x) - ref) / std::abs(ref));
    }
    CHECK(worst < 1e-12);
}

TEST_CASE("bessel_j three-term recurrence") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> ux(0.1, 50.0);
    for (int k = 0; k < 500; ++k) {
        const int n = 1 + static_cast<int>(rng() % 10);
        const double x = ux(rng);
        const double lhs = bessel_j(n - 1, x) + bessel_j(n + 1, x);
        const double rhs = 2.0 * n / x * bessel_j(n, x);
        const double scale = std::abs(bessel_j(n - 1, x)) + std::abs(bessel_j(n + 1, x));
        CHECK(std::abs(lhs - rhs) <= 1e-10 * scale);
    }
}

TEST_CASE("bessel_j rejects orders beyond the cap and non-finite arguments") {
    CHECK_NOTHROW(bessel_j(specfun::kBesselOrderCap, 3.0));
    CHECK_THROWS_AS(bessel_j(specfun::kBesselOrderCap + 1, 3.0), DomainError);
    CHECK_THROWS_AS(bessel_j(-specfun::kBesselOrderCap - 1, 3.0), DomainError);
    CHECK_THROWS_AS(bessel_j(0, std::nan("")), DomainError);
    CHECK_THROWS_AS(bessel_j(0, INFINITY), DomainError);
}

TEST_CASE("bessel_j at negative argument") {
    for (int n = 0; n < 6; ++n) CHECK(bessel_j(n, -7.3) == doctest::Approx((n % 2 ? -1 : 1) * bessel_j(n, 7.3)));
}

TEST_CASE("wigner d1 examples") {
    CHECK(wigner_d1(1, 1, 0.0) == 1.0);
    CHECK(wigner_d1(0, 1, 0.0) == 0.0);
    CHECK(wigner_d1(-1, 1, 0.0) == 0.0);
    CHECK(wigner_d1(0, 1, M_PI / 2) == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-15));
    CHECK_THROWS_AS(wigner_d1(2, 1, 0.3), DomainError);
    CHECK_THROWS_AS(wigner_d1(0, 0, 0.3), DomainError);
}

TEST_CASE("wigner d1 matrix at 0.7 is orthogonal") {
    const auto d = specfun::wigner_d1_matrix(0.7);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            double s = 0.0;
            for (int k = 0; k < 3; ++k) s += d[k][i] * d[k][j];
            CHECK(std::abs(s - (i == j ? 1.0 : 0.0)) < 1e-14);
        }
}

TEST_CASE("wigner d1 properties at random angles") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> ut(-M_PI, M_PI);
    for (int k = 0; k < 100; ++k) {
        const double t = ut(rng);
        const auto d = specfun::wigner_d1_matrix(t);
        for (int i = 0; i < 3; ++i) {
            double row = 0.0;
            for (int j = 0; j < 3; ++j) row += d[i][j] * d[i][j];
            CHECK(std::abs(row - 1.0) < 1e-14);
        }
        for (int a = -1; a <= 1; ++a)
            for (int b = -1; b <= 1; ++b)
                CHECK(std::abs(specfun::wigner_d1_any(a, b, -t) - specfun::wigner_d1_any(b, a, t)) < 1e-15);
        // the restricted lookup agrees with the full table
        for (int a = -1; a <= 1; ++a)
            for (int lam : {-1, 1}) CHECK(wigner_d1(a, lam, t) == d[a + 1][lam + 1]);
    }
    const auto id = specfun::wigner_d1_matrix(0.0);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) CHECK(id[i][j] == (i == j ? 1.0 : 0.0));
}

TEST_CASE("heaviside boundary convention") {
    CHECK(specfun::heaviside(1e-9) == 1.0);
    CHECK(specfun::heaviside(-1e-9) == 0.0);
    CHECK(specfun::heaviside(0.0) == 0.0);
    CHECK(specfun::heaviside(-0.0) == 0.0);
}
