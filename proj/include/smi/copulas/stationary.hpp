#pragma once

#include <cmath>
#include <vector>

#include "smi/autodiff/tape.hpp"
#include "smi/copulas/partial_correlation.hpp"
#include "smi/copulas/skew_normal.hpp"
#include "smi/core/error.hpp"
#include "smi/core/linalg.hpp"

namespace smi {

// Stationary parameterization of the d = 2b skew-normal copula for a panel
// of b series stacked with their one-step lags. The scale matrix is block
// Toeplitz, [[Omega0, Omega1], [Omega1', Omega0]], imposed through equality
// of partial correlations across the two blocks, and the slant satisfies
// delta_2 = delta_1, equivalently
//   alpha_1 = (Omega0 - Omega1)^{-1} (Omega0 - Omega1') alpha_2.
//
// Unconstrained layout for b = 3 (psi has dimension 15):
//   psi[0..2]   transformed partials of Omega0: pairs (0,1), (0,2), (1,2)
//   psi[3..11]  transformed partials of Omega1: (i, b+j) row-major
//   psi[12..14] alpha_2
// Each transformed partial maps back through rho = 2 Phi(rho_tilde) - 1.

inline constexpr int kStationaryBlock = 3;
inline constexpr int kStationaryDim = 2 * kStationaryBlock;
inline constexpr int kStationaryPsiDim = 15;

template <class T>
struct StationarySn {
    MatT<T> omega;
    VecT<T> alpha;
};

template <class T>
StationarySn<T> assemble_stationary(const VecT<T>& psi) {
    if (static_cast<int>(psi.size()) != kStationaryPsiDim) {
        throw LengthMismatch("assemble_stationary: psi must have dimension 15");
    }
    const int b = kStationaryBlock;
    const int d = kStationaryDim;

    MatT<T> partials = MatT<T>::identity(d);
    auto set_pair = [&](int i, int j, const T& rho) {
        partials(i, j) = rho;
        partials(j, i) = rho;
    };
    int k = 0;
    // Within-block partials, reused verbatim for the lagged block so the
    // recursion produces bit-identical diagonal blocks.
    for (int i = 0; i < b; ++i) {
        for (int j = i + 1; j < b; ++j) {
            const T rho = 2.0 * norm_cdf(psi[k++]) - 1.0;
            set_pair(i, j, rho);
            set_pair(b + i, b + j, rho);
        }
    }
    // Cross-block partials, a free 3x3 block.
    for (int i = 0; i < b; ++i) {
        for (int j = 0; j < b; ++j) {
            set_pair(i, b + j, 2.0 * norm_cdf(psi[k++]) - 1.0);
        }
    }

    StationarySn<T> out;
    out.omega = partials_to_correlation(partials);

    // alpha = (alpha_2, alpha_1) with the stationarity constraint.
    MatT<T> m(b, b), rhs_mat(b, b);
    for (int i = 0; i < b; ++i)
        for (int j = 0; j < b; ++j) {
            m(i, j) = out.omega(i, j) - out.omega(i, b + j);          // Omega0 - Omega1
            rhs_mat(i, j) = out.omega(i, j) - out.omega(b + i, j);    // Omega0 - Omega1'
        }
    VecT<T> alpha2(static_cast<std::size_t>(b));
    for (int i = 0; i < b; ++i) alpha2[static_cast<std::size_t>(i)] = psi[12 + i];
    VecT<T> rhs = linalg::matvec(rhs_mat, alpha2);
    VecT<T> alpha1;
    try {
        alpha1 = linalg::solve(m, rhs);
    } catch (const SingularBlock&) {
        throw SingularBlock("assemble_stationary: Omega0 - Omega1 is numerically singular");
    }
    out.alpha.resize(static_cast<std::size_t>(d));
    for (int i = 0; i < b; ++i) {
        out.alpha[static_cast<std::size_t>(i)] = alpha2[static_cast<std::size_t>(i)];
        out.alpha[static_cast<std::size_t>(b + i)] = alpha1[static_cast<std::size_t>(i)];
    }
    return out;
}

inline SnCopula stationary_sn_copula(const Vec& psi) {
    auto parts = assemble_stationary(psi);
    return SnCopula(std::move(parts.omega), std::move(parts.alpha));
}

// Inverse of the partial transform, handy for building psi from targets.
inline double stationary_rho_tilde(double rho) { return std_normal_quantile((rho + 1.0) / 2.0); }

}  // namespace smi
