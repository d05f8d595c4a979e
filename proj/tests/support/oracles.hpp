#pragma once

// Independent numerical oracles for the test suites: adaptive quadrature,
// Kolmogorov-Smirnov uniformity checks, and small statistics helpers. These
// deliberately avoid the library's own evaluation paths wherever they are
// used to validate one.

#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

namespace oracles {

// Adaptive Simpson quadrature.
inline double simpson_rec(const std::function<double(double)>& f, double a, double b, double fa,
                          double fm, double fb, double whole, double tol, int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = f(lm), frm = f(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    if (depth <= 0 || std::fabs(left + right - whole) < 15.0 * tol) {
        return left + right + (left + right - whole) / 15.0;
    }
    return simpson_rec(f, a, m, fa, flm, fm, left, tol / 2.0, depth - 1) +
           simpson_rec(f, m, b, fm, frm, fb, right, tol / 2.0, depth - 1);
}

inline double integrate(const std::function<double(double)>& f, double a, double b,
                        double tol = 1e-10) {
    const double m = 0.5 * (a + b);
    const double fa = f(a), fm = f(m), fb = f(b);
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return simpson_rec(f, a, b, fa, fm, fb, whole, tol, 48);
}

// Asymptotic Kolmogorov distribution tail: P(D_n > d).
inline double ks_pvalue(double d, std::size_t n) {
    const double lambda = (std::sqrt(static_cast<double>(n)) + 0.12 + 0.11 / std::sqrt(static_cast<double>(n))) * d;
    double sum = 0.0;
    for (int k = 1; k <= 100; ++k) {
        const double term = 2.0 * std::pow(-1.0, k - 1) * std::exp(-2.0 * k * k * lambda * lambda);
        sum += term;
        if (std::fabs(term) < 1e-12) break;
    }
    return std::min(1.0, std::max(0.0, sum));
}

// One-sample KS statistic of data against the uniform(0,1) distribution.
inline double ks_statistic_uniform(std::vector<double> u) {
    std::sort(u.begin(), u.end());
    const std::size_t n = u.size();
    double d = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double lo = static_cast<double>(i) / n;
        const double hi = static_cast<double>(i + 1) / n;
        d = std::max({d, std::fabs(u[i] - lo), std::fabs(u[i] - hi)});
    }
    return d;
}

inline double ks_uniform_pvalue(const std::vector<double>& u) {
    return ks_pvalue(ks_statistic_uniform(u), u.size());
}

struct MeanSe {
    double mean = 0.0;
    double se = 0.0;
};

// Monte Carlo integral of a density over an axis-aligned box: uniform draws
// in the box, batched for a standard error.
template <class Density, class RngT>
MeanSe mc_box_integral(Density&& f, const std::vector<std::pair<double, double>>& box, RngT& rng,
                       int draws, int batches = 10) {
    double vol = 1.0;
    for (const auto& [lo, hi] : box) vol *= (hi - lo);
    const int per = draws / batches;
    std::vector<double> means;
    std::vector<double> u(box.size());
    for (int b = 0; b < batches; ++b) {
        double sum = 0.0;
        for (int i = 0; i < per; ++i) {
            for (std::size_t j = 0; j < box.size(); ++j) {
                u[j] = box[j].first + (box[j].second - box[j].first) * rng.uniform();
            }
            sum += f(u);
        }
        means.push_back(vol * sum / per);
    }
    MeanSe out;
    for (double m : means) out.mean += m;
    out.mean /= batches;
    double ss = 0.0;
    for (double m : means) ss += (m - out.mean) * (m - out.mean);
    out.se = std::sqrt(ss / (batches - 1.0) / batches);
    return out;
}

inline MeanSe mean_se(const std::vector<double>& xs) {
    MeanSe r;
    const double n = static_cast<double>(xs.size());
    for (double x : xs) r.mean += x;
    r.mean /= n;
    double ss = 0.0;
    for (double x : xs) ss += (x - r.mean) * (x - r.mean);
    r.se = std::sqrt(ss / (n - 1.0) / n);
    return r;
}

}  // namespace oracles
