#pragma once

#include <cmath>
#include <vector>

#include "smi/autodiff/tape.hpp"
#include "smi/core/linalg.hpp"
#include "smi/core/normal.hpp"
#include "smi/core/rng.hpp"

namespace smi {

// Gaussian copula with correlation matrix R:
// log c(u; R) = -sum log L_kk - (|z|^2 - |x|^2)/2,  x_j = Phi^{-1}(u_j),
// where L = chol(R) and z = L^{-1} x.
template <class T>
T gaussian_copula_logdensity(const std::vector<T>& u, const LowerTriangularT<T>& chol_R) {
    const int d = chol_R.dim;
    VecT<T> x(static_cast<std::size_t>(d));
    T sum_x2(0.0);
    for (int j = 0; j < d; ++j) {
        if (!(value_of(u[j]) > 0.0 && value_of(u[j]) < 1.0)) {
            throw OutOfSupport("gaussian copula: u outside (0,1)");
        }
        x[j] = norm_quantile(u[j]);
        sum_x2 += x[j] * x[j];
    }
    VecT<T> z = linalg::solve_lower(chol_R, x);
    T sum_z2(0.0);
    for (int j = 0; j < d; ++j) sum_z2 += z[j] * z[j];
    T logdiag(0.0);
    for (int j = 0; j < d; ++j) logdiag += log(chol_R(j, j));
    return -logdiag - 0.5 * (sum_z2 - sum_x2);
}

inline double gaussian_copula_logdensity(const std::vector<double>& u, const Mat& R) {
    return gaussian_copula_logdensity(u, linalg::cholesky(R));
}

// Bivariate convenience.
inline double gaussian_copula_logdensity2(double u, double v, double rho) {
    Mat R(2, 2, {1.0, rho, rho, 1.0});
    return gaussian_copula_logdensity({u, v}, R);
}

inline std::vector<double> gaussian_copula_sample(const LowerTriangular& chol_R, Rng& rng) {
    const int d = chol_R.dim;
    std::vector<double> z(static_cast<std::size_t>(d));
    for (auto& v : z) v = rng.normal();
    std::vector<double> u(static_cast<std::size_t>(d));
    for (int i = 0; i < d; ++i) {
        double s = 0.0;
        for (int k = 0; k <= i; ++k) s += chol_R(i, k) * z[k];
        u[i] = std_normal_cdf(s);
    }
    return u;
}

// Kendall's tau of the Gaussian copula: tau = (2/pi) asin(rho).
inline double gaussian_tau_from_rho(double rho) { return 2.0 / M_PI * std::asin(rho); }

}  // namespace smi
