#pragma once

#include <cmath>
#include <span>
#include <vector>

#include "smi/copulas/gumbel.hpp"
#include "smi/core/error.hpp"
#include "smi/pseudolik/bounds.hpp"
#include "smi/pseudolik/ranks.hpp"

namespace smi {

// SMI extended log likelihood: sum_i log c(u_i; psi) subject to the box
// indicators a_ij <= u_ij <= b_ij. Indicators are preconditions here; the
// variational sampler produces u inside the boxes by construction, so a
// violation is a caller bug, not a zero-likelihood event.
template <class RowLogDensity>
double smi_extended_loglik(const std::vector<double>& u, const BoundsTable& bounds,
                           RowLogDensity&& row_logdensity) {
    const int n = bounds.n, d = bounds.d;
    if (u.size() != static_cast<std::size_t>(n) * static_cast<std::size_t>(d)) {
        throw LengthMismatch("smi_extended_loglik: u size mismatch");
    }
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < d; ++j) {
            const double v = u[static_cast<std::size_t>(i) * d + j];
            if (!(v >= bounds.lower(i, j) && v <= bounds.upper(i, j))) {
                throw IndicatorViolated("smi_extended_loglik: u outside its box at (" +
                                        std::to_string(i) + "," + std::to_string(j) + ")");
            }
        }
    }
    double total = 0.0;
    for (int i = 0; i < n; ++i) {
        total += row_logdensity(
            std::span<const double>(u.data() + static_cast<std::size_t>(i) * d,
                                    static_cast<std::size_t>(d)));
    }
    return total;
}

// Copula interface for the small-d oracles: CDF, mixed partial derivatives
// with respect to an index subset, and marginal copula densities of a
// subset. Only what the d <= 3 brute-force evaluations need.
struct IndependenceOps {
    double cdf(std::span<const double> u) const {
        double p = 1.0;
        for (double v : u) p *= v;
        return p;
    }
    // d^{|dc|} C / du_dc = prod_{j not in dc} u_j.
    double mixed_partial(std::span<const double> u, const std::vector<int>& dc) const {
        double p = 1.0;
        for (int j = 0; j < static_cast<int>(u.size()); ++j) {
            bool in_dc = false;
            for (int k : dc) in_dc = in_dc || (k == j);
            if (!in_dc) p *= u[static_cast<std::size_t>(j)];
        }
        return p;
    }
    double marginal_logdensity(std::span<const double>, const std::vector<int>&) const {
        return 0.0;
    }
};

// Archimedean evaluations through the generator: with T = sum psi^{-1}(u_j),
//   C(u) = psi(T),
//   dC/du_k = psi'(T) (psi^{-1})'(u_k),
//   d2C/du_k du_l = psi''(T) (psi^{-1})'(u_k) (psi^{-1})'(u_l).
struct GumbelOps {
    double theta;

    double cdf(std::span<const double> u) const {
        double t = 0.0;
        for (double v : u) {
            if (v <= 0.0) return 0.0;
            t += gumbel_generator_inv(std::min(v, 1.0), theta);
        }
        return gumbel_generator(t, theta);
    }

    double mixed_partial(std::span<const double> u, const std::vector<int>& dc) const {
        if (dc.size() > 2) {
            throw DomainError("GumbelOps: mixed partials supported up to order 2");
        }
        double t = 0.0;
        for (double v : u) t += gumbel_generator_inv(v, theta);
        double out;
        if (dc.empty()) {
            out = gumbel_generator(t, theta);
        } else if (dc.size() == 1) {
            out = gumbel_generator_d1(t, theta);
        } else {
            out = gumbel_generator_d2(t, theta);
        }
        for (int k : dc) {
            out *= gumbel_generator_inv_d1(u[static_cast<std::size_t>(k)], theta);
        }
        return out;
    }

    double marginal_logdensity(std::span<const double> u, const std::vector<int>& dc) const {
        if (dc.size() <= 1) return 0.0;  // uniform margins
        if (dc.size() == 2) {
            return gumbel_logdensity(u[static_cast<std::size_t>(dc[0])],
                                     u[static_cast<std::size_t>(dc[1])], theta);
        }
        throw DomainError("GumbelOps: marginal density supported up to dimension 2");
    }
};

namespace detail_pl {

// Difference of f over the box {a_j, b_j}_{j in coords} applied to base:
// sum over corners with sign (-1)^{#lower corners}.
template <class F>
double box_difference(const std::vector<double>& base, const std::vector<int>& coords,
                      const BoundsTable& bounds, int row, F&& f) {
    const std::size_t m = coords.size();
    std::vector<double> corner(base);
    double total = 0.0;
    for (std::size_t mask = 0; mask < (std::size_t{1} << m); ++mask) {
        int lowers = 0;
        for (std::size_t k = 0; k < m; ++k) {
            const int j = coords[k];
            if (mask & (std::size_t{1} << k)) {
                corner[static_cast<std::size_t>(j)] = bounds.lower(row, j);
                ++lowers;
            } else {
                corner[static_cast<std::size_t>(j)] = bounds.upper(row, j);
            }
        }
        total += ((lowers % 2 == 0) ? 1.0 : -1.0) * f(corner);
    }
    return total;
}

}  // namespace detail_pl

// Brute-force pseudo rank log likelihood: the d-fold difference of the
// copula CDF over each observation's rank box, by inclusion-exclusion over
// the 2^d corners. Exponential in d, hence the d <= 3 cap; this is the
// oracle the tractable machinery is checked against.
template <class Ops>
double pseudo_rank_loglik_bruteforce(const Ops& ops, const BoundsTable& bounds) {
    const int d = bounds.d;
    if (d > 3) throw DomainError("pseudo_rank_loglik_bruteforce: d must be <= 3");
    if (bounds.n > 50) throw DomainError("pseudo_rank_loglik_bruteforce: n must be <= 50");
    std::vector<int> coords(static_cast<std::size_t>(d));
    for (int j = 0; j < d; ++j) coords[static_cast<std::size_t>(j)] = j;
    double total = 0.0;
    std::vector<double> base(static_cast<std::size_t>(d), 0.0);
    for (int i = 0; i < bounds.n; ++i) {
        const double mass = detail_pl::box_difference(
            base, coords, bounds, i, [&](const std::vector<double>& corner) {
                return ops.cdf(std::span<const double>(corner.data(), corner.size()));
            });
        total += std::log(mass);
    }
    return total;
}

// Mixed pseudo log likelihood (marginalized form): with the cut set
// D = {j : delta_j = 0} and its complement Dc,
//   sum_i [ log c_{Dc}(u_{i,Dc}) + log Delta_D C_{D|Dc}(. | u_{i,Dc}) ],
// where u_ij = F_j(y_ij; eta_j) on Dc and the Delta runs over the rank
// boxes of the cut coordinates. The conditional distribution function is
// evaluated through the mixed partial of C over Dc, normalized by the
// marginal copula density of Dc.
template <class Ops>
double mixed_pseudo_loglik(const Ops& ops, const std::vector<int>& delta,
                           const std::vector<Marginal>& marginals, const Dataset& data,
                           const BoundsTable& rank_bounds) {
    const int d = data.d;
    if (d > 3) throw DomainError("mixed_pseudo_loglik: d must be <= 3");
    if (static_cast<int>(delta.size()) != d) {
        throw LengthMismatch("mixed_pseudo_loglik: delta size mismatch");
    }
    std::vector<int> cut, uncut;
    for (int j = 0; j < d; ++j) {
        if (delta[static_cast<std::size_t>(j)] == 0) {
            cut.push_back(j);
        } else {
            uncut.push_back(j);
        }
    }
    double total = 0.0;
    std::vector<double> base(static_cast<std::size_t>(d), 0.0);
    for (int i = 0; i < data.n; ++i) {
        for (int j : uncut) {
            base[static_cast<std::size_t>(j)] =
                marginals[static_cast<std::size_t>(j)].cdf(data.value(i, j));
        }
        const double marg_term = ops.marginal_logdensity(
            std::span<const double>(base.data(), base.size()), uncut);
        if (cut.empty()) {
            // All marginals uncut: the term is the full copula log density
            // at the parametric PITs.
            total += marg_term;
            continue;
        }
        const double numer = detail_pl::box_difference(
            base, cut, rank_bounds, i, [&](const std::vector<double>& corner) {
                return ops.mixed_partial(std::span<const double>(corner.data(), corner.size()),
                                         uncut);
            });
        const double denom = std::exp(marg_term);
        total += marg_term + std::log(numer / denom);
    }
    return total;
}

}  // namespace smi
