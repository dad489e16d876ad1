#ifndef MODEINV_NUMERIC_HPP
#define MODEINV_NUMERIC_HPP

#include <cmath>
#include <complex>

namespace modeinv {

using cd = std::complex<double>;

inline constexpr double pi = 3.141592653589793238462643383279502884;

/// exp(z) - 1 without cancellation for small |z|.
/// Real part uses expm1(x)*cos(y) - 2*sin^2(y/2); both pieces are stable.
inline cd expm1c(cd z)
{
    const double x = z.real();
    const double y = z.imag();
    const double ex = std::expm1(x);
    const double s = std::sin(0.5 * y);
    return {ex * std::cos(y) - 2.0 * s * s, (ex + 1.0) * std::sin(y)};
}

/// phase_ratio(z) = (e^z - 1)/z with the removable singularity at z = 0 filled in.
inline cd phase_ratio(cd z)
{
    if (std::abs(z) < 1e-8)
        return 1.0 + z * (0.5 + z * (1.0 / 6.0 + z / 24.0));
    return expm1c(z) / z;
}

/// osc_integral(mu, T) = \int_0^T e^{i mu t} dt.  Exact for all mu including 0.
inline cd osc_integral(double mu, double T)
{
    return T * phase_ratio(cd(0.0, mu * T));
}

/// osc_integral_t(mu, T) = \int_0^T t e^{i mu t} dt.
/// Series branch keeps full precision through the mu -> 0 cancellation.
inline cd osc_integral_t(double mu, double T)
{
    const cd z(0.0, mu * T);
    if (std::abs(z) < 1e-3) {
        // T^2 * sum z^k / (k! (k+2)),   |trunc| < |z|^5/840
        return T * T
             * (0.5 + z * (1.0 / 3.0 + z * (0.125 + z * (1.0 / 30.0 + z / 144.0))));
    }
    const cd eizT = expm1c(z) + 1.0;
    return (T * eizT - osc_integral(mu, T)) / cd(0.0, mu);
}

/// Digamma via upward recurrence into the asymptotic regime.
inline double digamma(double x)
{
    double acc = 0.0;
    while (x < 8.0) {
        acc -= 1.0 / x;
        x += 1.0;
    }
    const double inv = 1.0 / x, inv2 = inv * inv;
    return acc + std::log(x) - 0.5 * inv
         - inv2 * (1.0 / 12.0 - inv2 * (1.0 / 120.0 - inv2 / 252.0));
}

/// Trigamma, same scheme.
inline double trigamma(double x)
{
    double acc = 0.0;
    while (x < 8.0) {
        acc += 1.0 / (x * x);
        x += 1.0;
    }
    const double inv = 1.0 / x, inv2 = inv * inv;
    return acc + inv * (1.0 + 0.5 * inv + inv2 * (1.0 / 6.0 - inv2 * (1.0 / 30.0 - inv2 / 42.0)));
}

/// Least-squares slope of y against x.
inline double fit_slope(const double* x, const double* y, int n)
{
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (int i = 0; i < n; ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

} // namespace modeinv

#endif
