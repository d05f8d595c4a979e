#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

namespace smi {

// Central finite differences. This is the permanent gradient oracle used by
// the test suites to cross-check every reverse-mode gradient in the library.
template <class F>
std::vector<double> finite_diff_gradient(F&& f, std::vector<double> x, double step = 1e-5) {
    std::vector<double> g(x.size(), 0.0);
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double xi = x[i];
        x[i] = xi + step;
        const double up = f(x);
        x[i] = xi - step;
        const double down = f(x);
        x[i] = xi;
        g[i] = (up - down) / (2.0 * step);
    }
    return g;
}

// Worst-case relative disagreement between two gradients, with an absolute
// floor so near-zero components do not blow the ratio up.
inline double max_relative_gap(const std::vector<double>& a, const std::vector<double>& b,
                               double floor = 1e-8) {
    double worst = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double scale = std::max({std::fabs(a[i]), std::fabs(b[i]), floor});
        worst = std::max(worst, std::fabs(a[i] - b[i]) / scale);
    }
    return worst;
}

}  // namespace smi
