#pragma once

#include <cmath>

#include "smi/core/error.hpp"
#include "smi/core/normal.hpp"

namespace smi {

// Digamma by recurrence into the asymptotic region.
inline double digamma(double x) {
    double result = 0.0;
    while (x < 8.0) {
        result -= 1.0 / x;
        x += 1.0;
    }
    const double inv = 1.0 / x;
    const double inv2 = inv * inv;
    return result + std::log(x) - 0.5 * inv -
           inv2 * (1.0 / 12.0 - inv2 * (1.0 / 120.0 - inv2 * (1.0 / 252.0 - inv2 / 240.0)));
}

namespace detail {

// Regularized lower incomplete gamma P(a,x) by series (x < a+1).
inline double gamma_p_series(double a, double x) {
    double term = 1.0 / a;
    double sum = term;
    for (int n = 1; n < 500; ++n) {
        term *= x / (a + n);
        sum += term;
        if (std::fabs(term) < std::fabs(sum) * 1e-16) break;
    }
    return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

// Regularized upper incomplete gamma Q(a,x) by Lentz continued fraction
// (x >= a+1).
inline double gamma_q_cf(double a, double x) {
    const double tiny = 1e-300;
    double b = x + 1.0 - a;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i < 500; ++i) {
        const double an = -i * (i - a);
        b += 2.0;
        d = an * d + b;
        if (std::fabs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::fabs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double delta = d * c;
        h *= delta;
        if (std::fabs(delta - 1.0) < 1e-16) break;
    }
    return h * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

}  // namespace detail

// Regularized lower incomplete gamma P(a,x) = gamma(a,x)/Gamma(a).
inline double gamma_p(double a, double x) {
    if (x < 0.0 || a <= 0.0) throw DomainError("gamma_p: requires x >= 0, a > 0");
    if (x == 0.0) return 0.0;
    if (x < a + 1.0) return detail::gamma_p_series(a, x);
    return 1.0 - detail::gamma_q_cf(a, x);
}

// Inverse of P(a, .) in x: Wilson-Hilferty start, then safeguarded Newton.
inline double gamma_p_inv(double a, double p) {
    if (!(p > 0.0 && p < 1.0)) throw DomainError("gamma_p_inv: p must lie in (0,1)");
    const double g = std::lgamma(a);
    double x;
    {
        const double z = std_normal_quantile(p);
        const double t = 1.0 - 1.0 / (9.0 * a) + z / (3.0 * std::sqrt(a));
        x = a * t * t * t;
        if (!(x > 0.0)) x = std::exp((std::log(p) + g + std::log(a)) / a);
    }
    double lo = 0.0, hi = HUGE_VAL;
    for (int it = 0; it < 100; ++it) {
        const double f = gamma_p(a, x) - p;
        if (f > 0.0) {
            hi = x;
        } else {
            lo = x;
        }
        const double logpdf = -x + (a - 1.0) * std::log(x) - g;
        const double step = f * std::exp(-logpdf);
        double next = x - step;
        if (!(next > lo) || !(next < hi) || !std::isfinite(next)) {
            next = std::isfinite(hi) ? 0.5 * (lo + hi) : 2.0 * x;
        }
        if (std::fabs(next - x) <= 1e-14 * (std::fabs(x) + 1e-300)) {
            x = next;
            break;
        }
        x = next;
    }
    return x;
}

}  // namespace smi
