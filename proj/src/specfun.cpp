#include "twcr/specfun.hpp"

#include <cmath>
#include <string>

#include "twcr/errors.hpp"

namespace twcr::specfun {
namespace {

constexpr double kSeriesLimit = 12.0;

// Ascending series for J_n(x), n >= 0, x >= 0. Terms reach ~e^x / sqrt(x)
// before cancelling, so the sum is carried in extended precision.
double bessel_series(int n, double x) {
    using ld = long double;
    const ld h = 0.5L * x;
    ld term = 1.0L;
    for (int k = 1; k <= n; ++k) term *= h / k;  // (x/2)^n / n!
    if (term == 0.0L) return 0.0;
    const ld h2 = h * h;
    ld sum = term;
    for (int k = 1; k < 500; ++k) {
        term *= -h2 / (static_cast<ld>(k) * (n + k));
        sum += term;
        if (std::fabs(term) < 1e-20L * std::fabs(sum) && k > h) break;
    }
    return static_cast<double>(sum);
}

// Miller backward recurrence normalised with J_0 + 2 sum_k J_{2k} = 1.
double bessel_miller(int n, double x) {
    const double top = std::max<double>(n, x);
    int start = static_cast<int>(top + 30.0 + std::sqrt(60.0 * top));
    start += start % 2;  // even start keeps the normalisation sum aligned
    using ld = long double;
    const ld two_over_x = 2.0L / x;
    ld jp1 = 0.0L, j = 1e-300L, result = 0.0L, norm = 0.0L;
    for (int k = start; k > 0; --k) {
        const double jm1 = k * two_over_x * j - jp1;
        jp1 = j;
        j = jm1;
        if (std::fabs(j) > 1e250L) {
            j *= 1e-250L;
            jp1 *= 1e-250L;
            result *= 1e-250L;
            norm *= 1e-250L;
        }
        // j now holds the unnormalised J_{k-1}
        if (k - 1 == n) result = j;
        if ((k - 1) % 2 == 0 && k - 1 > 0) norm += 2.0L * j;
    }
    norm += j;
    return static_cast<double>(result / norm);
}

}  // namespace

double bessel_j(int n, double x) {
    if (std::abs(n) > kBesselOrderCap)
        throw DomainError("bessel_j: |order| " + std::to_string(n) + " exceeds cap " + std::to_string(kBesselOrderCap));
    if (!std::isfinite(x)) throw DomainError("bessel_j: non-finite argument");
    double sign = 1.0;
    if (n < 0) {
        n = -n;
        if (n % 2) sign = -sign;
    }
    if (x < 0.0) {
        x = -x;
        if (n % 2) sign = -sign;
    }
    if (x == 0.0) return n == 0 ? sign : 0.0;
    const double v = x < kSeriesLimit ? bessel_series(n, x) : bessel_miller(n, x);
    return sign * v;
}

std::array<std::array<double, 3>, 3> wigner_d1_matrix(double theta) {
    const double c = std::cos(theta), s = std::sin(theta);
    const double r = s / std::sqrt(2.0);
    const double p = 0.5 * (1.0 + c), q = 0.5 * (1.0 - c);
    // rows: m1 = -1, 0, 1; columns: m2 = -1, 0, 1
    return {{{p, r, q}, {-r, c, r}, {q, -r, p}}};
}

double wigner_d1_any(int m1, int m2, double theta) {
    if (m1 < -1 || m1 > 1 || m2 < -1 || m2 > 1) throw DomainError("wigner_d1: indices must lie in {-1,0,1}");
    return wigner_d1_matrix(theta)[m1 + 1][m2 + 1];
}

double wigner_d1(int m_s, int lambda, double theta) {
    if (lambda != 1 && lambda != -1) throw DomainError("wigner_d1: helicity must be +1 or -1");
    return wigner_d1_any(m_s, lambda, theta);
}

}  // namespace twcr::specfun
