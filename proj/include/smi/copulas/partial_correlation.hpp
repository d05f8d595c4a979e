#pragma once

#include <cmath>
#include <vector>

#include "smi/autodiff/tape.hpp"
#include "smi/core/error.hpp"
#include "smi/core/linalg.hpp"

namespace smi {

// One-to-one map between a correlation matrix and the (semi) partial
// correlations in the natural variable order 1..d: entry (i,j) with j > i+1
// is the correlation of variables i and j partialling out i+1..j-1
// (Yule's recursion in the Joe / Daniels-Pourahmadi form). Any values in
// (-1,1) produce a valid positive definite unit-diagonal matrix.
//
// Partials are supplied as a dense symmetric matrix with unit diagonal; only
// the upper triangle is read.

template <class T>
MatT<T> partials_to_correlation(const MatT<T>& partials) {
    const int d = partials.rows;
    if (partials.cols != d) throw LengthMismatch("partials_to_correlation: not square");
    for (int i = 0; i < d; ++i)
        for (int j = i + 1; j < d; ++j) {
            if (!(std::fabs(value_of(partials(i, j))) < 1.0 - 1e-12)) {
                throw NotPositiveDefinite("partials_to_correlation: |partial| too close to 1");
            }
        }

    MatT<T> r = MatT<T>::identity(d);
    // Adjacent pairs: the partial is the correlation itself.
    for (int i = 0; i + 1 < d; ++i) {
        r(i, i + 1) = partials(i, i + 1);
        r(i + 1, i) = r(i, i + 1);
    }
    // Longer lags condition on the variables strictly between i and j.
    for (int lag = 2; lag < d; ++lag) {
        for (int i = 0; i + lag < d; ++i) {
            const int j = i + lag;
            const int m = lag - 1;  // size of the conditioning block
            MatT<T> r1(m, m);
            VecT<T> ri(static_cast<std::size_t>(m)), rj(static_cast<std::size_t>(m));
            for (int a = 0; a < m; ++a) {
                ri[a] = r(i, i + 1 + a);
                rj[a] = r(j, i + 1 + a);
                for (int b = 0; b < m; ++b) r1(a, b) = r(i + 1 + a, i + 1 + b);
            }
            VecT<T> si = linalg::solve(r1, ri);
            VecT<T> sj = linalg::solve(r1, rj);
            T qi(0.0), qj(0.0), cross(0.0);
            for (int a = 0; a < m; ++a) {
                qi += ri[a] * si[a];
                qj += rj[a] * sj[a];
                cross += ri[a] * sj[a];
            }
            r(i, j) = partials(i, j) * sqrt((1.0 - qi) * (1.0 - qj)) + cross;
            r(j, i) = r(i, j);
        }
    }
    return r;
}

// Inverse recursion: recover the partials from a correlation matrix.
inline Mat correlation_to_partials(const Mat& r) {
    const int d = r.rows;
    Mat p = Mat::identity(d);
    for (int i = 0; i + 1 < d; ++i) {
        p(i, i + 1) = r(i, i + 1);
        p(i + 1, i) = p(i, i + 1);
    }
    for (int lag = 2; lag < d; ++lag) {
        for (int i = 0; i + lag < d; ++i) {
            const int j = i + lag;
            const int m = lag - 1;
            Mat r1(m, m);
            Vec ri(static_cast<std::size_t>(m)), rj(static_cast<std::size_t>(m));
            for (int a = 0; a < m; ++a) {
                ri[a] = r(i, i + 1 + a);
                rj[a] = r(j, i + 1 + a);
                for (int b = 0; b < m; ++b) r1(a, b) = r(i + 1 + a, i + 1 + b);
            }
            Vec si = linalg::solve(r1, ri);
            Vec sj = linalg::solve(r1, rj);
            double qi = 0.0, qj = 0.0, cross = 0.0;
            for (int a = 0; a < m; ++a) {
                qi += ri[a] * si[a];
                qj += rj[a] * sj[a];
                cross += ri[a] * sj[a];
            }
            p(i, j) = (r(i, j) - cross) / std::sqrt((1.0 - qi) * (1.0 - qj));
            p(j, i) = p(i, j);
        }
    }
    return p;
}

}  // namespace smi
