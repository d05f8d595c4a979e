#pragma once

#include <cmath>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "smi/autodiff/tape.hpp"
#include "smi/core/error.hpp"
#include "smi/core/gamma.hpp"
#include "smi/core/normal.hpp"
#include "smi/core/rng.hpp"

namespace smi {

// Parametric univariate marginal families. Log-density, CDF and the
// unconstrained reparameterization are templated on the scalar so they can
// run on the autodiff tape; quantiles and sampling are plain-double.
enum class MarginalFamily { LogNormal, Gamma, SinhArcsinh, SkewNormalUnit };

inline int marginal_param_count(MarginalFamily f) {
    switch (f) {
        case MarginalFamily::LogNormal: return 2;   // mu, sigma
        case MarginalFamily::Gamma: return 2;       // shape, rate
        case MarginalFamily::SinhArcsinh: return 4; // mu, sigma, skew, tailweight
        case MarginalFamily::SkewNormalUnit: return 1;  // slant
    }
    return 0;
}

inline std::string marginal_family_name(MarginalFamily f) {
    switch (f) {
        case MarginalFamily::LogNormal: return "lognormal";
        case MarginalFamily::Gamma: return "gamma";
        case MarginalFamily::SinhArcsinh: return "sinh_arcsinh";
        case MarginalFamily::SkewNormalUnit: return "skew_normal_unit";
    }
    return "?";
}

inline MarginalFamily parse_marginal_family(const std::string& name) {
    if (name == "lognormal") return MarginalFamily::LogNormal;
    if (name == "gamma") return MarginalFamily::Gamma;
    if (name == "sinh_arcsinh") return MarginalFamily::SinhArcsinh;
    if (name == "skew_normal_unit") return MarginalFamily::SkewNormalUnit;
    throw ConfigError("unknown marginal family: " + name);
}

// Var overload of lgamma; shape parameters reach the tape through here.
inline Var lgamma(const Var& x) {
    return detail::unary(x, std::lgamma(x.v), digamma(x.v));
}
inline double lgamma(double x) { return std::lgamma(x); }

// Regularized lower incomplete gamma as a primitive: analytic in x,
// central-difference in the shape (no closed form exists).
inline Var gamma_p(const Var& a, const Var& x) {
    const double val = gamma_p(a.v, x.v);
    const double dx = std::exp(-x.v + (a.v - 1.0) * std::log(x.v) - std::lgamma(a.v));
    const double h = 1e-6 * std::max(1.0, std::fabs(a.v));
    const double da = (gamma_p(a.v + h, x.v) - gamma_p(a.v - h, x.v)) / (2.0 * h);
    return detail::binary(a, x, val, da, dx);
}

namespace detail_marginal {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

template <class T>
T lognormal_logpdf(const T& mu, const T& sigma, double y) {
    if (y < 0.0) throw OutOfSupport("lognormal logpdf: y < 0");
    if (y == 0.0) return T(kNegInf);
    const double ly = std::log(y);
    const T z = (T(ly) - mu) / sigma;
    return norm_logpdf(z) - log(sigma) - T(ly);
}

template <class T>
T gamma_logpdf(const T& shape, const T& rate, double y) {
    if (y < 0.0) throw OutOfSupport("gamma logpdf: y < 0");
    if (y == 0.0) return T(kNegInf);
    return shape * log(rate) - lgamma(shape) + (shape - 1.0) * std::log(y) - rate * y;
}

template <class T>
T sas_logpdf(const T& mu, const T& sigma, const T& skew, const T& tail, double y) {
    const T s = (T(y) - mu) / sigma;
    const T arg = tail * asinh(s) - skew;
    const T z = sinh(arg);
    return norm_logpdf(z) + log(tail) + log(cosh(arg)) - 0.5 * log1p(s * s) - log(sigma);
}

template <class T>
T snu_logpdf(const T& slant, double y) {
    constexpr double log2 = 0.69314718055994530942;
    return T(log2 + std_normal_logpdf(y)) + norm_logcdf(slant * y);
}

}  // namespace detail_marginal

template <class T>
T marginal_logpdf(MarginalFamily f, const std::vector<T>& eta, double y) {
    using namespace detail_marginal;
    switch (f) {
        case MarginalFamily::LogNormal: return lognormal_logpdf(eta[0], eta[1], y);
        case MarginalFamily::Gamma: return gamma_logpdf(eta[0], eta[1], y);
        case MarginalFamily::SinhArcsinh:
            return sas_logpdf(eta[0], eta[1], eta[2], eta[3], y);
        case MarginalFamily::SkewNormalUnit: return snu_logpdf(eta[0], y);
    }
    throw ConfigError("marginal_logpdf: bad family");
}

template <class T>
T marginal_cdf(MarginalFamily f, const std::vector<T>& eta, double y) {
    switch (f) {
        case MarginalFamily::LogNormal: {
            if (y <= 0.0) return T(0.0);
            return norm_cdf((T(std::log(y)) - eta[0]) / eta[1]);
        }
        case MarginalFamily::Gamma: {
            if (y <= 0.0) return T(0.0);
            return gamma_p(eta[0], eta[1] * y);
        }
        case MarginalFamily::SinhArcsinh: {
            const T s = (T(y) - eta[0]) / eta[1];
            return norm_cdf(sinh(eta[3] * asinh(s) - eta[2]));
        }
        case MarginalFamily::SkewNormalUnit:
            return norm_cdf(T(y)) - 2.0 * owen_t(T(y), eta[0]);
    }
    throw ConfigError("marginal_cdf: bad family");
}

inline double marginal_quantile(MarginalFamily f, const std::vector<double>& eta, double p) {
    if (!(p > 0.0 && p < 1.0)) throw DomainError("marginal_quantile: p must lie in (0,1)");
    switch (f) {
        case MarginalFamily::LogNormal:
            return std::exp(eta[0] + eta[1] * std_normal_quantile(p));
        case MarginalFamily::Gamma: return gamma_p_inv(eta[0], p) / eta[1];
        case MarginalFamily::SinhArcsinh:
            return eta[0] +
                   eta[1] * std::sinh((std::asinh(std_normal_quantile(p)) + eta[2]) / eta[3]);
        case MarginalFamily::SkewNormalUnit: {
            // Safeguarded Newton on F(x) = Phi(x) - 2T(x, slant).
            const double slant = eta[0];
            double lo = -40.0, hi = 40.0;
            double x = std_normal_quantile(p);
            for (int it = 0; it < 200; ++it) {
                const double fx = std_normal_cdf(x) - 2.0 * owen_t(x, slant) - p;
                if (fx > 0.0) {
                    hi = x;
                } else {
                    lo = x;
                }
                const double pdf = 2.0 * std_normal_pdf(x) * std_normal_cdf(slant * x);
                double next = (pdf > 1e-300) ? x - fx / pdf : 0.5 * (lo + hi);
                if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
                if (std::fabs(next - x) < 1e-13 * (1.0 + std::fabs(x))) return next;
                x = next;
            }
            return x;
        }
    }
    throw ConfigError("marginal_quantile: bad family");
}

// Unconstrained bijection: log-scale for positive parameters, identity
// elsewhere. Layouts: LogNormal (mu, log sigma); Gamma (log shape, log rate);
// SinhArcsinh (mu, log sigma, skew, log tailweight); SkewNormalUnit (slant).
template <class T>
std::vector<T> marginal_to_unconstrained(MarginalFamily f, const std::vector<T>& eta) {
    switch (f) {
        case MarginalFamily::LogNormal: return {eta[0], log(eta[1])};
        case MarginalFamily::Gamma: return {log(eta[0]), log(eta[1])};
        case MarginalFamily::SinhArcsinh: return {eta[0], log(eta[1]), eta[2], log(eta[3])};
        case MarginalFamily::SkewNormalUnit: return {eta[0]};
    }
    throw ConfigError("marginal_to_unconstrained: bad family");
}

template <class T>
std::vector<T> marginal_from_unconstrained(MarginalFamily f, const std::vector<T>& u) {
    switch (f) {
        case MarginalFamily::LogNormal: return {u[0], exp(u[1])};
        case MarginalFamily::Gamma: return {exp(u[0]), exp(u[1])};
        case MarginalFamily::SinhArcsinh: return {u[0], exp(u[1]), u[2], exp(u[3])};
        case MarginalFamily::SkewNormalUnit: return {u[0]};
    }
    throw ConfigError("marginal_from_unconstrained: bad family");
}

// Precomputed column statistics; lets the Gaussian-kernel families evaluate
// a whole column's log-likelihood in O(1) tape nodes.
struct ColumnStats {
    int n = 0;
    double sum_log = 0.0;
    double sum_log_sq = 0.0;
    double sum = 0.0;
    bool all_positive = true;

    static ColumnStats from(std::span<const double> y) {
        ColumnStats s;
        s.n = static_cast<int>(y.size());
        for (double v : y) {
            s.sum += v;
            if (v > 0.0) {
                const double lv = std::log(v);
                s.sum_log += lv;
                s.sum_log_sq += lv * lv;
            } else {
                s.all_positive = false;
            }
        }
        return s;
    }
};

// sum_i log f(y_i; eta). Uses sufficient statistics where the family allows.
template <class T>
T marginal_column_loglik(MarginalFamily f, const std::vector<T>& eta,
                         std::span<const double> y, const ColumnStats& st) {
    using detail_marginal::kNegInf;
    switch (f) {
        case MarginalFamily::LogNormal: {
            if (!st.all_positive) return T(kNegInf);
            const T& mu = eta[0];
            const T& sigma = eta[1];
            const double n = st.n;
            const T quad = T(st.sum_log_sq) - 2.0 * mu * st.sum_log + n * mu * mu;
            return -T(st.sum_log) - n * log(sigma) - 0.5 * n * kLog2Pi -
                   quad / (2.0 * sigma * sigma);
        }
        case MarginalFamily::Gamma: {
            if (!st.all_positive) return T(kNegInf);
            const T& shape = eta[0];
            const T& rate = eta[1];
            const double n = st.n;
            return (shape - 1.0) * st.sum_log - rate * st.sum +
                   n * (shape * log(rate) - lgamma(shape));
        }
        default: {
            T acc(0.0);
            for (double v : y) acc += marginal_logpdf(f, eta, v);
            return acc;
        }
    }
}

// Value-typed marginal spec for non-tape call sites (oracles, CLI, DGPs).
struct Marginal {
    MarginalFamily family;
    std::vector<double> params;

    double logpdf(double y) const { return marginal_logpdf(family, params, y); }
    double cdf(double y) const { return marginal_cdf(family, params, y); }
    double quantile(double p) const { return marginal_quantile(family, params, p); }
    double sample(Rng& rng) const { return quantile(rng.uniform()); }
    std::vector<double> to_unconstrained() const {
        return marginal_to_unconstrained(family, params);
    }
    static Marginal from_unconstrained(MarginalFamily f, const std::vector<double>& u) {
        return Marginal{f, marginal_from_unconstrained(f, u)};
    }
};

}  // namespace smi
