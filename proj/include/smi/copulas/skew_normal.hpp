#pragma once

#include <cmath>
#include <vector>

#include "smi/autodiff/tape.hpp"
#include "smi/core/error.hpp"
#include "smi/core/interpolate.hpp"
#include "smi/core/linalg.hpp"
#include "smi/core/normal.hpp"
#include "smi/core/rng.hpp"

namespace smi {

// --- Univariate unit skew-normal pieces (location 0, scale 1, slant abar) ---

inline double snu_cdf(double x, double abar) {
    return std_normal_cdf(x) - 2.0 * owen_t(x, abar);
}

inline double snu_pdf(double x, double abar) {
    return 2.0 * std_normal_pdf(x) * std_normal_cdf(abar * x);
}

// Quantile via safeguarded Newton from a warm start.
inline double snu_quantile_polish(double u, double abar, double x0) {
    double lo = -42.0, hi = 42.0;
    double x = x0;
    if (!(x > lo && x < hi)) x = 0.0;
    for (int it = 0; it < 80; ++it) {
        const double fx = snu_cdf(x, abar) - u;
        if (fx > 0.0) {
            hi = x;
        } else {
            lo = x;
        }
        const double pdf = snu_pdf(x, abar);
        double next = (pdf > 1e-300) ? x - fx / pdf : 0.5 * (lo + hi);
        if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
        if (std::fabs(next - x) < 1e-13 * (1.0 + std::fabs(x))) return next;
        x = next;
    }
    return x;
}

// Quantile-function interpolant on the fixed construction grid: 401
// cosine-clustered abscissae on [-(6+|abar|), 6+|abar|] mapped through the
// cdf. Tail knots that saturate in floating point are dropped; the Newton
// polish recovers full accuracy from the interpolated start.
inline MonotoneCubic snu_quantile_interpolant(double abar) {
    const double halfwidth = 6.0 + std::fabs(abar);
    std::vector<double> us, xs;
    us.reserve(401);
    xs.reserve(401);
    for (int k = 0; k <= 400; ++k) {
        const double x = -halfwidth * std::cos(M_PI * k / 400.0);
        const double u = snu_cdf(x, abar);
        if (!us.empty() && !(u > us.back())) continue;
        us.push_back(u);
        xs.push_back(x);
    }
    return MonotoneCubic(std::move(us), std::move(xs));
}

inline double snu_quantile(double u, double abar, const MonotoneCubic& guess) {
    return snu_quantile_polish(u, abar, guess(u));
}

// Differentiable quantile: the forward value comes from the polished solve;
// the partials follow from the implicit function theorem,
//   dx/du = 1/f(x), dx/dabar = 2 dT/da(x, abar) / f(x).
inline Var snu_quantile(const Var& u, const Var& abar, const MonotoneCubic& guess) {
    const double x = snu_quantile_polish(u.v, abar.v, guess(u.v));
    const double pdf = snu_pdf(x, abar.v);
    const double du = 1.0 / pdf;
    const double da = 2.0 * owen_t_da(x, abar.v) / pdf;
    return detail::binary(u, abar, x, du, da);
}

// Per-column interpolant cache. The guess only needs to land in the Newton
// basin, so it is rebuilt lazily when the slant has drifted.
class SnQuantileCache {
  public:
    explicit SnQuantileCache(int dim) : entries_(static_cast<std::size_t>(dim)) {}

    const MonotoneCubic& get(int j, double abar) {
        Entry& e = entries_[static_cast<std::size_t>(j)];
        if (!e.valid || std::fabs(e.abar - abar) > 0.05) {
            e.interp = snu_quantile_interpolant(abar);
            e.abar = abar;
            e.valid = true;
        }
        return e.interp;
    }

  private:
    struct Entry {
        bool valid = false;
        double abar = 0.0;
        MonotoneCubic interp;
    };
    std::vector<Entry> entries_;
};

// --- Multivariate skew-normal law and its implicit copula ---

// delta = Omega alpha / sqrt(1 + alpha' Omega alpha).
template <class T>
VecT<T> sn_delta(const MatT<T>& omega, const VecT<T>& alpha) {
    VecT<T> oa = linalg::matvec(omega, alpha);
    T denom = sqrt(1.0 + linalg::dot(alpha, oa));
    for (auto& v : oa) v = v / denom;
    return oa;
}

template <class T>
VecT<T> sn_alpha_bar(const VecT<T>& delta) {
    VecT<T> ab(delta.size());
    for (std::size_t j = 0; j < delta.size(); ++j) {
        ab[j] = delta[j] / sqrt(1.0 - delta[j] * delta[j]);
    }
    return ab;
}

// Evaluation context for the copula density; the Cholesky factor and the
// derived slants are shared across observations. Templated so the same code
// runs on plain values and on the tape.
template <class T>
struct SnCopulaEval {
    int dim = 0;
    LowerTriangularT<T> chol_omega;
    VecT<T> alpha;
    VecT<T> alpha_bar;
    T half_logdet{0.0};
    std::vector<const MonotoneCubic*> guess;  // per column quantile starts

    // log c(u | Omega, alpha) = log f_X(x) - sum_j log f_{X_j}(x_j; abar_j)
    // with x_j = F_{X_j}^{-1}(u_j). The 2 pi and Gaussian kernel factors
    // cancel between numerator and marginals, leaving
    //   (1-d) log 2 - half_logdet - (|L^{-1}x|^2 - |x|^2)/2
    //   + log Phi(alpha'x) - sum_j log Phi(abar_j x_j).
    T logdensity(const VecT<T>& u) const {
        VecT<T> x(u.size());
        T sum_x2(0.0);
        for (int j = 0; j < dim; ++j) {
            if (!(value_of(u[j]) > 0.0 && value_of(u[j]) < 1.0)) {
                throw OutOfSupport("sn copula: u outside (0,1)");
            }
            x[j] = snu_quantile(u[j], alpha_bar[j], *guess[j]);
            sum_x2 += x[j] * x[j];
        }
        VecT<T> z = linalg::solve_lower(chol_omega, x);
        T quad(0.0);
        for (const T& zi : z) quad += zi * zi;
        T out = -half_logdet - 0.5 * (quad - sum_x2) + norm_logcdf(linalg::dot(alpha, x));
        for (int j = 0; j < dim; ++j) out -= norm_logcdf(alpha_bar[j] * x[j]);
        constexpr double log2 = 0.69314718055994530942;
        return out + (1.0 - dim) * log2;
    }
};

template <class T>
SnCopulaEval<T> make_sn_eval(const MatT<T>& omega, const VecT<T>& alpha, SnQuantileCache& cache) {
    SnCopulaEval<T> ev;
    ev.dim = omega.rows;
    ev.chol_omega = linalg::cholesky(omega);
    ev.alpha = alpha;
    ev.alpha_bar = sn_alpha_bar(sn_delta(omega, alpha));
    T ld(0.0);
    for (int j = 0; j < ev.dim; ++j) ld += log(ev.chol_omega(j, j));
    ev.half_logdet = ld;
    ev.guess.resize(static_cast<std::size_t>(ev.dim));
    for (int j = 0; j < ev.dim; ++j) {
        ev.guess[static_cast<std::size_t>(j)] = &cache.get(j, value_of(ev.alpha_bar[j]));
    }
    return ev;
}

// Value-level skew-normal copula with eager caches: evaluation, exact
// sampling through the selection representation, and pairwise extraction.
class SnCopula {
  public:
    SnCopula(Mat omega, Vec alpha)
        : dim_(omega.rows),
          omega_(std::move(omega)),
          alpha_(std::move(alpha)),
          cache_(dim_) {
        delta_ = sn_delta(omega_, alpha_);
        alpha_bar_ = sn_alpha_bar(delta_);
        chol_omega_ = linalg::cholesky(omega_);
        // Augmented covariance [[1, delta'], [delta, Omega]] drives sampling.
        Mat aug(dim_ + 1, dim_ + 1);
        aug(0, 0) = 1.0;
        for (int i = 0; i < dim_; ++i) {
            aug(0, i + 1) = delta_[i];
            aug(i + 1, 0) = delta_[i];
            for (int j = 0; j < dim_; ++j) aug(i + 1, j + 1) = omega_(i, j);
        }
        chol_aug_ = linalg::cholesky(aug);
        for (int j = 0; j < dim_; ++j) (void)cache_.get(j, alpha_bar_[j]);
    }

    int dim() const { return dim_; }
    const Mat& omega() const { return omega_; }
    const Vec& alpha() const { return alpha_; }
    const Vec& delta() const { return delta_; }
    const Vec& alpha_bar() const { return alpha_bar_; }

    double unit_quantile(int j, double u) {
        return snu_quantile(u, alpha_bar_[j], cache_.get(j, alpha_bar_[j]));
    }

    double logdensity(const Vec& u) {
        SnCopulaEval<double> ev;
        ev.dim = dim_;
        ev.chol_omega = chol_omega_;
        ev.alpha = alpha_;
        ev.alpha_bar = alpha_bar_;
        double ld = 0.0;
        for (int j = 0; j < dim_; ++j) ld += std::log(chol_omega_(j, j));
        ev.half_logdet = ld;
        ev.guess.resize(static_cast<std::size_t>(dim_));
        for (int j = 0; j < dim_; ++j) ev.guess[static_cast<std::size_t>(j)] = &cache_.get(j, alpha_bar_[j]);
        return ev.logdensity(u);
    }

    // X = Z conditioned on Z0 > 0 (sign-flipped otherwise); u_j = F_j(x_j).
    Vec sample(Rng& rng) {
        std::vector<double> eps(static_cast<std::size_t>(dim_ + 1));
        for (auto& v : eps) v = rng.normal();
        double z0 = chol_aug_(0, 0) * eps[0];
        Vec u(static_cast<std::size_t>(dim_));
        const double flip = (z0 > 0.0) ? 1.0 : -1.0;
        for (int i = 0; i < dim_; ++i) {
            double s = 0.0;
            for (int k = 0; k <= i + 1; ++k) s += chol_aug_(i + 1, k) * eps[static_cast<std::size_t>(k)];
            u[static_cast<std::size_t>(i)] = snu_cdf(flip * s, alpha_bar_[static_cast<std::size_t>(i)]);
        }
        return u;
    }

    // Bivariate marginal sampler. Internally canonicalized to the sorted
    // index pair so (j,l) and (l,j) consume the stream identically and
    // return component-swapped copies of the same draws.
    std::pair<double, double> sample_pair(int j, int l, Rng& rng) {
        const int a = std::min(j, l), b = std::max(j, l);
        Mat aug(3, 3);
        aug(0, 0) = 1.0;
        aug(0, 1) = aug(1, 0) = delta_[static_cast<std::size_t>(a)];
        aug(0, 2) = aug(2, 0) = delta_[static_cast<std::size_t>(b)];
        aug(1, 1) = aug(2, 2) = 1.0;
        aug(1, 2) = aug(2, 1) = omega_(a, b);
        auto L = linalg::cholesky(aug);
        const double e0 = rng.normal(), e1 = rng.normal(), e2 = rng.normal();
        const double z0 = L(0, 0) * e0;
        const double za = L(1, 0) * e0 + L(1, 1) * e1;
        const double zb = L(2, 0) * e0 + L(2, 1) * e1 + L(2, 2) * e2;
        const double flip = (z0 > 0.0) ? 1.0 : -1.0;
        const double ua = snu_cdf(flip * za, alpha_bar_[static_cast<std::size_t>(a)]);
        const double ub = snu_cdf(flip * zb, alpha_bar_[static_cast<std::size_t>(b)]);
        return (j == a) ? std::make_pair(ua, ub) : std::make_pair(ub, ua);
    }

  private:
    int dim_;
    Mat omega_;
    Vec alpha_;
    Vec delta_;
    Vec alpha_bar_;
    LowerTriangular chol_omega_;
    LowerTriangular chol_aug_;
    SnQuantileCache cache_;
};

}  // namespace smi
