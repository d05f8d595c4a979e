#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <numeric>
#include <vector>

#include "smi/core/error.hpp"
#include "smi/core/rng.hpp"

namespace smi {

// A pair sampler draws one (u_j, u_l) from the bivariate marginal copula of
// an ordered pair. All dependence diagnostics below are Monte Carlo
// estimates over such draws, seeded and bit-reproducible.
using PairSampler = std::function<std::pair<double, double>(Rng&)>;

namespace detail_dep {

// Knight's O(n log n) concordance count: merge sort counting inversions of
// the second coordinate after sorting by the first.
inline std::uint64_t count_inversions(std::vector<double>& v, std::vector<double>& buf,
                                      std::size_t lo, std::size_t hi) {
    if (hi - lo < 2) return 0;
    const std::size_t mid = lo + (hi - lo) / 2;
    std::uint64_t inv = count_inversions(v, buf, lo, mid) + count_inversions(v, buf, mid, hi);
    std::size_t i = lo, j = mid, k = lo;
    while (i < mid && j < hi) {
        if (v[j] < v[i]) {
            inv += mid - i;
            buf[k++] = v[j++];
        } else {
            buf[k++] = v[i++];
        }
    }
    while (i < mid) buf[k++] = v[i++];
    while (j < hi) buf[k++] = v[j++];
    std::copy(buf.begin() + static_cast<std::ptrdiff_t>(lo),
              buf.begin() + static_cast<std::ptrdiff_t>(hi),
              v.begin() + static_cast<std::ptrdiff_t>(lo));
    return inv;
}

}  // namespace detail_dep

// Sample Kendall's tau of paired observations (continuous data; ties get no
// special treatment beyond the sort order).
inline double kendall_tau_sample(const std::vector<double>& xs, const std::vector<double>& ys) {
    const std::size_t n = xs.size();
    if (ys.size() != n || n < 2) throw LengthMismatch("kendall_tau_sample: need paired data");
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return xs[a] < xs[b]; });
    std::vector<double> y_sorted(n);
    for (std::size_t i = 0; i < n; ++i) y_sorted[i] = ys[order[i]];
    std::vector<double> buf(n);
    const std::uint64_t inv = detail_dep::count_inversions(y_sorted, buf, 0, n);
    const double pairs = 0.5 * static_cast<double>(n) * static_cast<double>(n - 1);
    return 1.0 - 2.0 * static_cast<double>(inv) / pairs;
}

struct McEstimate {
    double value = 0.0;
    double se = 0.0;
};

// Monte Carlo Kendall's tau of a copula pair, batched for an honest
// standard error.
inline McEstimate kendall_tau_mc(const PairSampler& sampler, Rng& rng, std::size_t n_mc,
                                 int batches = 10) {
    if (n_mc < 10000) throw DomainError("kendall_tau_mc: n_mc must be at least 10^4");
    const std::size_t per = n_mc / static_cast<std::size_t>(batches);
    std::vector<double> taus;
    taus.reserve(static_cast<std::size_t>(batches));
    std::vector<double> xs(per), ys(per);
    for (int b = 0; b < batches; ++b) {
        for (std::size_t i = 0; i < per; ++i) {
            auto [u, v] = sampler(rng);
            xs[i] = u;
            ys[i] = v;
        }
        taus.push_back(kendall_tau_sample(xs, ys));
    }
    McEstimate est;
    for (double t : taus) est.value += t;
    est.value /= batches;
    double ss = 0.0;
    for (double t : taus) ss += (t - est.value) * (t - est.value);
    est.se = std::sqrt(ss / (batches - 1.0) / batches);
    return est;
}

enum class Quadrant { LL, UR, LR, UL };

// Quantile dependence at level zeta: conditional tail co-occurrence
// probabilities estimated from copula draws. The conditioning margins of a
// copula are exactly uniform, so the estimator divides joint counts by
// zeta * n rather than the empirical conditioning count; with that choice
// the order-swap identities
//   rho_LL(j,l) = rho_LL(l,j), rho_UR(j,l) = rho_UR(l,j),
//   rho_LR(j,l) = rho_UL(l,j)
// hold exactly on a common sample. The empirical conditioning count still
// gates reliability.
inline McEstimate quantile_dependence(const PairSampler& sampler, Rng& rng, double zeta,
                                      Quadrant quadrant, std::size_t n_mc, int batches = 10) {
    if (!(zeta > 0.0 && zeta < 0.5)) {
        throw DomainError("quantile_dependence: zeta must lie in (0, 0.5)");
    }
    const std::size_t per = n_mc / static_cast<std::size_t>(batches);
    std::vector<double> vals;
    vals.reserve(static_cast<std::size_t>(batches));
    std::uint64_t conditioning_events = 0;
    for (int b = 0; b < batches; ++b) {
        std::uint64_t joint = 0, cond = 0;
        for (std::size_t i = 0; i < per; ++i) {
            auto [uj, ul] = sampler(rng);
            bool cond_event = false, target_event = false;
            switch (quadrant) {
                case Quadrant::LL:
                    cond_event = uj <= zeta;
                    target_event = ul <= zeta;
                    break;
                case Quadrant::UR:
                    cond_event = uj > 1.0 - zeta;
                    target_event = ul > 1.0 - zeta;
                    break;
                case Quadrant::LR:
                    cond_event = uj > 1.0 - zeta;
                    target_event = ul <= zeta;
                    break;
                case Quadrant::UL:
                    cond_event = uj <= zeta;
                    target_event = ul > 1.0 - zeta;
                    break;
            }
            joint += (cond_event && target_event) ? 1 : 0;
            cond += cond_event ? 1 : 0;
        }
        conditioning_events += cond;
        vals.push_back(static_cast<double>(joint) / (zeta * static_cast<double>(per)));
    }
    if (conditioning_events < 100) {
        throw InsufficientTailSamples(
            "quantile_dependence: fewer than 100 conditioning events; raise n_mc");
    }
    McEstimate est;
    for (double v : vals) est.value += v;
    est.value /= batches;
    double ss = 0.0;
    for (double v : vals) ss += (v - est.value) * (v - est.value);
    est.se = std::sqrt(ss / (batches - 1.0) / batches);
    return est;
}

struct Asymmetry {
    double major = 0.0;  // rho_UR(zeta) - rho_LL(zeta)
    double minor = 0.0;  // rho_UL(zeta) - rho_LR(zeta)
    double major_se = 0.0;
    double minor_se = 0.0;
};

// Major- and minor-diagonal asymmetry from one common sample, so that the
// swap behavior is exact: minor(j,l) = -minor(l,j) because the UL and LR
// counts trade places, and major is symmetric in the pair order.
inline Asymmetry asymmetry(const PairSampler& sampler, Rng& rng, double zeta, std::size_t n_mc,
                           int batches = 10) {
    if (!(zeta > 0.0 && zeta < 0.5)) {
        throw DomainError("asymmetry: zeta must lie in (0, 0.5)");
    }
    const std::size_t per = n_mc / static_cast<std::size_t>(batches);
    std::vector<double> majors, minors;
    std::uint64_t ll_events = 0, ur_events = 0;
    for (int b = 0; b < batches; ++b) {
        std::uint64_t ll = 0, ur = 0, lr = 0, ul = 0;
        for (std::size_t i = 0; i < per; ++i) {
            auto [uj, ul_] = sampler(rng);
            const bool j_lo = uj <= zeta, j_hi = uj > 1.0 - zeta;
            const bool l_lo = ul_ <= zeta, l_hi = ul_ > 1.0 - zeta;
            ll += (j_lo && l_lo) ? 1 : 0;
            ur += (j_hi && l_hi) ? 1 : 0;
            lr += (j_hi && l_lo) ? 1 : 0;
            ul += (j_lo && l_hi) ? 1 : 0;
        }
        ll_events += ll;
        ur_events += ur;
        const double denom = zeta * static_cast<double>(per);
        majors.push_back((static_cast<double>(ur) - static_cast<double>(ll)) / denom);
        minors.push_back((static_cast<double>(ul) - static_cast<double>(lr)) / denom);
    }
    (void)ll_events;
    (void)ur_events;
    Asymmetry a;
    for (int b = 0; b < batches; ++b) {
        a.major += majors[static_cast<std::size_t>(b)];
        a.minor += minors[static_cast<std::size_t>(b)];
    }
    a.major /= batches;
    a.minor /= batches;
    double ssM = 0.0, ssm = 0.0;
    for (int b = 0; b < batches; ++b) {
        ssM += (majors[static_cast<std::size_t>(b)] - a.major) * (majors[static_cast<std::size_t>(b)] - a.major);
        ssm += (minors[static_cast<std::size_t>(b)] - a.minor) * (minors[static_cast<std::size_t>(b)] - a.minor);
    }
    a.major_se = std::sqrt(ssM / (batches - 1.0) / batches);
    a.minor_se = std::sqrt(ssm / (batches - 1.0) / batches);
    return a;
}

}  // namespace smi
