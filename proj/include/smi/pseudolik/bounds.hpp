#pragma once

#include <vector>

#include "smi/core/error.hpp"
#include "smi/marginals/marginals.hpp"
#include "smi/pseudolik/ranks.hpp"

namespace smi {

// Per-marginal influence weights, one entry per unique marginal.
struct InfluenceVector {
    std::vector<double> gamma;

    InfluenceVector() = default;
    explicit InfluenceVector(std::vector<double> g) : gamma(std::move(g)) {
        for (double v : gamma) {
            if (!(v >= 0.0 && v <= 1.0)) {
                throw DomainError("InfluenceVector: components must lie in [0,1]");
            }
        }
    }

    double operator[](std::size_t j) const { return gamma[j]; }
    std::size_t size() const { return gamma.size(); }
};

// One interpolated box endpoint pair. Computed so the box width is exactly
// (1 - gamma)/(n+1) in floating point, and so the gamma = 1 endpoint
// collapses to a = b = F bit-exactly.
template <class T>
struct BoundPair {
    T a;
    T b;
};

template <class T>
BoundPair<T> smi_bound_pair(double gamma, const T& cdf_value, int rank, int n) {
    const double lo = (rank - 1) / (n + 1.0);
    const double width = (1.0 - gamma) / (n + 1.0);
    BoundPair<T> out;
    out.a = gamma * cdf_value + (1.0 - gamma) * lo;
    out.b = out.a + width;
    return out;
}

// Interpolated bounds for every observation cell.
struct BoundsTable {
    int n = 0;
    int d = 0;
    std::vector<double> a;
    std::vector<double> b;

    double lower(int i, int j) const { return a[static_cast<std::size_t>(i) * d + j]; }
    double upper(int i, int j) const { return b[static_cast<std::size_t>(i) * d + j]; }
};

// gamma is indexed per unique marginal; column_map sends a data column to
// its marginal (identity when every column has its own marginal).
inline BoundsTable smi_bounds(const InfluenceVector& gamma,
                              const std::vector<Marginal>& marginals, const Dataset& data,
                              const std::vector<int>& column_map = {}) {
    BoundsTable t;
    t.n = data.n;
    t.d = data.d;
    t.a.resize(static_cast<std::size_t>(data.n) * data.d);
    t.b.resize(t.a.size());
    for (int j = 0; j < data.d; ++j) {
        const int m = column_map.empty() ? j : column_map[static_cast<std::size_t>(j)];
        const Marginal& marg = marginals[static_cast<std::size_t>(m)];
        const double g = gamma[static_cast<std::size_t>(m)];
        for (int i = 0; i < data.n; ++i) {
            const double f = marg.cdf(data.value(i, j));
            auto [a, b] = smi_bound_pair(g, f, data.rank(i, j), data.n);
            t.a[static_cast<std::size_t>(i) * data.d + j] = a;
            t.b[static_cast<std::size_t>(i) * data.d + j] = b;
        }
    }
    return t;
}

}  // namespace smi
