#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "smi/core/error.hpp"

namespace smi {

// Observation matrix with per-column ranks r(y_ij) = #'{k : y_kj <= y_ij}.
// Ties therefore share the maximal rank of their group; exact ties are
// measure-zero under the continuous models here and real data can be
// de-tied with jitter_ties before ranking.
struct Dataset {
    int n = 0;
    int d = 0;
    std::vector<double> values;  // row-major n x d
    std::vector<int> ranks;      // same layout
    std::vector<std::string> names;

    double value(int i, int j) const { return values[static_cast<std::size_t>(i) * d + j]; }
    int rank(int i, int j) const { return ranks[static_cast<std::size_t>(i) * d + j]; }

    std::vector<double> column(int j) const {
        std::vector<double> col(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i) col[static_cast<std::size_t>(i)] = value(i, j);
        return col;
    }
};

inline Dataset compute_ranks(int n, int d, std::vector<double> values,
                             std::vector<std::string> names = {}) {
    if (n < 2) throw DomainError("compute_ranks: need at least two rows");
    if (static_cast<std::size_t>(n) * static_cast<std::size_t>(d) != values.size()) {
        throw LengthMismatch("compute_ranks: values size does not match n x d");
    }
    Dataset ds;
    ds.n = n;
    ds.d = d;
    ds.values = std::move(values);
    ds.ranks.assign(ds.values.size(), 0);
    if (names.empty()) {
        for (int j = 0; j < d; ++j) names.push_back("y" + std::to_string(j + 1));
    }
    ds.names = std::move(names);
    std::vector<double> sorted(static_cast<std::size_t>(n));
    for (int j = 0; j < d; ++j) {
        for (int i = 0; i < n; ++i) sorted[static_cast<std::size_t>(i)] = ds.value(i, j);
        std::sort(sorted.begin(), sorted.end());
        for (int i = 0; i < n; ++i) {
            const double y = ds.value(i, j);
            const auto it = std::upper_bound(sorted.begin(), sorted.end(), y);
            ds.ranks[static_cast<std::size_t>(i) * d + j] =
                static_cast<int>(it - sorted.begin());
        }
    }
    return ds;
}

// Break exact ties by a deterministic per-duplicate offset of
// 1e-10 * column scale. Returns the number of perturbed cells so callers
// can log a warning.
inline int jitter_ties(int n, int d, std::vector<double>& values) {
    int changed = 0;
    std::vector<std::pair<double, int>> col(static_cast<std::size_t>(n));
    for (int j = 0; j < d; ++j) {
        double scale = 0.0;
        for (int i = 0; i < n; ++i) {
            col[static_cast<std::size_t>(i)] = {values[static_cast<std::size_t>(i) * d + j], i};
            scale = std::max(scale, std::fabs(col[static_cast<std::size_t>(i)].first));
        }
        if (scale == 0.0) scale = 1.0;
        std::sort(col.begin(), col.end());
        const double eps = 1e-10 * scale;
        for (int i = 1; i < n; ++i) {
            auto& cur = col[static_cast<std::size_t>(i)];
            const auto& prev = col[static_cast<std::size_t>(i - 1)];
            if (cur.first <= prev.first) {
                cur.first = prev.first + eps;
                values[static_cast<std::size_t>(cur.second) * d + j] = cur.first;
                ++changed;
            }
        }
    }
    return changed;
}

}  // namespace smi
