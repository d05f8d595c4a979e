#pragma once

#include <cmath>
#include <vector>

#include "smi/autodiff/tape.hpp"
#include "smi/core/error.hpp"
#include "smi/core/rng.hpp"

namespace smi {

// Bivariate Gumbel copula, parameterized either by theta >= 1 or Kendall's
// tau = 1 - 1/theta; the unconstrained coordinate is psi = logit(tau).

inline double gumbel_theta_from_tau(double tau) {
    if (!(tau >= 0.0 && tau < 1.0)) throw DomainError("gumbel: tau must lie in [0,1)");
    return 1.0 / (1.0 - tau);
}

inline double gumbel_tau_from_theta(double theta) { return 1.0 - 1.0 / theta; }

template <class T>
T gumbel_tau_from_psi(const T& psi) {
    // logistic, kept in (0,1)
    return 1.0 / (1.0 + exp(-psi));
}

template <class T>
T gumbel_theta_from_psi(const T& psi) {
    // theta = 1/(1-tau) = 1 + e^psi
    return 1.0 + exp(psi);
}

inline double gumbel_psi_from_tau(double tau) {
    if (!(tau > 0.0 && tau < 1.0)) throw DomainError("gumbel: logit(tau) needs tau in (0,1)");
    return std::log(tau / (1.0 - tau));
}

// C(u,v; theta) = exp(-((-ln u)^theta + (-ln v)^theta)^(1/theta)).
template <class T>
T gumbel_cdf(double u, double v, const T& theta) {
    if (u <= 0.0 || v <= 0.0) return T(0.0);
    if (u >= 1.0 && v >= 1.0) return T(1.0);
    if (u >= 1.0) return T(v);
    if (v >= 1.0) return T(u);
    const T x = T(-std::log(u));
    const T y = T(-std::log(v));
    const T w = pow(pow(x, theta) + pow(y, theta), 1.0 / theta);
    return exp(-w);
}

// log c(u,v; theta) = -w + (theta-1)(ln x + ln y) + (x + y)
//                     + (1-2 theta) ln w + ln(w + theta - 1),
// with x = -ln u, y = -ln v, w = (x^theta + y^theta)^(1/theta).
template <class T>
T gumbel_logdensity(const T& u, const T& v, const T& theta) {
    if (!(value_of(u) > 0.0 && value_of(u) < 1.0 && value_of(v) > 0.0 && value_of(v) < 1.0)) {
        throw OutOfSupport("gumbel_logdensity: u must lie strictly inside (0,1)^2");
    }
    const T x = -log(u);
    const T y = -log(v);
    const T lx = log(x);
    const T ly = log(y);
    const T inv_theta = 1.0 / theta;
    const T logs = log(exp(theta * lx) + exp(theta * ly));
    const T logw = inv_theta * logs;
    const T w = exp(logw);
    return -w + (theta - 1.0) * (lx + ly) + (x + y) + (1.0 - 2.0 * theta) * logw +
           log(w + theta - 1.0);
}

// Conditional distribution function ("h-function") C_{1|2}(u | v):
// dC/dv = C(u,v) w^(1-theta) y^(theta-1) / v.
template <class T>
T gumbel_hfunc(double u, double v, const T& theta) {
    if (!(u > 0.0 && u < 1.0)) {
        if (u <= 0.0) return T(0.0);
        return T(1.0);
    }
    const T x = T(-std::log(u));
    const T y = T(-std::log(v));
    const T logw = (1.0 / theta) * log(pow(x, theta) + pow(y, theta));
    const T w = exp(logw);
    return exp(-w + (1.0 - theta) * logw + (theta - 1.0) * log(y) - std::log(v));
}

// Archimedean generator psi_g(t) = exp(-t^(1/theta)) and derivatives; the
// mixed pseudo likelihood oracle needs them up to second order.
inline double gumbel_generator(double t, double theta) {
    return std::exp(-std::pow(t, 1.0 / theta));
}
inline double gumbel_generator_d1(double t, double theta) {
    const double a = 1.0 / theta;
    return -a * std::pow(t, a - 1.0) * std::exp(-std::pow(t, a));
}
inline double gumbel_generator_d2(double t, double theta) {
    const double a = 1.0 / theta;
    const double s = std::pow(t, a);
    return std::exp(-s) * (a * a * std::pow(t, 2.0 * a - 2.0) +
                           a * (1.0 - a) * std::pow(t, a - 2.0));
}
inline double gumbel_generator_inv(double u, double theta) {
    return std::pow(-std::log(u), theta);
}
// d/du psi_g^{-1}(u) = -theta (-ln u)^(theta-1) / u.
inline double gumbel_generator_inv_d1(double u, double theta) {
    return -theta * std::pow(-std::log(u), theta - 1.0) / u;
}

// Positive stable S with Laplace transform exp(-t^(1/theta)) via the
// Chambers-Mallows-Stuck construction.
inline double positive_stable_sample(double alpha, Rng& rng) {
    const double v = rng.uniform() * M_PI;
    const double w = rng.exponential();
    const double s1 = std::sin(alpha * v) / std::pow(std::sin(v), 1.0 / alpha);
    const double s2 = std::pow(std::sin((1.0 - alpha) * v) / w, (1.0 - alpha) / alpha);
    return s1 * s2;
}

// Frailty sampler: u_j = psi_g(E_j / S) with E_j ~ Exp(1).
inline void gumbel_sample_pair(double theta, Rng& rng, double& u, double& v) {
    if (theta <= 1.0 + 1e-12) {
        u = rng.uniform();
        v = rng.uniform();
        return;
    }
    const double s = positive_stable_sample(1.0 / theta, rng);
    u = gumbel_generator(rng.exponential() / s, theta);
    v = gumbel_generator(rng.exponential() / s, theta);
}

inline std::vector<std::pair<double, double>> gumbel_sample(double theta, Rng& rng,
                                                            std::size_t n) {
    if (theta < 1.0) throw DomainError("gumbel_sample: theta must be >= 1");
    std::vector<std::pair<double, double>> out(n);
    for (auto& p : out) gumbel_sample_pair(theta, rng, p.first, p.second);
    return out;
}

}  // namespace smi
