#pragma once

#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <string>
#include <utility>
#include <vector>

#include "smi/core/error.hpp"

namespace smi {

// Dense column-agnostic (row-major) matrix over an arbitrary scalar. The
// scalar is double in plain numeric code and an autodiff variable inside the
// ELBO graph, so everything here is templated and allocation-light. Sizes in
// this library are tiny (d <= 6 copula blocks, GP kernels up to ~10^2).
template <class T>
struct MatT {
    int rows = 0;
    int cols = 0;
    std::vector<T> a;

    MatT() = default;
    MatT(int r, int c) : rows(r), cols(c), a(static_cast<std::size_t>(r) * c, T(0.0)) {}
    MatT(int r, int c, std::initializer_list<double> vals) : MatT(r, c) {
        int i = 0;
        for (double v : vals) a[i++] = T(v);
    }

    T& operator()(int i, int j) { return a[static_cast<std::size_t>(i) * cols + j]; }
    const T& operator()(int i, int j) const { return a[static_cast<std::size_t>(i) * cols + j]; }

    static MatT identity(int n) {
        MatT m(n, n);
        for (int i = 0; i < n; ++i) m(i, i) = T(1.0);
        return m;
    }
};

using Mat = MatT<double>;

template <class T>
using VecT = std::vector<T>;
using Vec = std::vector<double>;

// Lower-triangular factor with strictly positive diagonal, packed row-major:
// row i contributes i+1 entries.
template <class T>
struct LowerTriangularT {
    int dim = 0;
    std::vector<T> entries;

    LowerTriangularT() = default;
    explicit LowerTriangularT(int n)
        : dim(n), entries(static_cast<std::size_t>(n) * (n + 1) / 2, T(0.0)) {}

    T& operator()(int i, int j) { return entries[static_cast<std::size_t>(i) * (i + 1) / 2 + j]; }
    const T& operator()(int i, int j) const {
        return entries[static_cast<std::size_t>(i) * (i + 1) / 2 + j];
    }

    MatT<T> dense() const {
        MatT<T> m(dim, dim);
        for (int i = 0; i < dim; ++i)
            for (int j = 0; j <= i; ++j) m(i, j) = (*this)(i, j);
        return m;
    }

    static LowerTriangularT scaled_identity(int n, double s) {
        LowerTriangularT l(n);
        for (int i = 0; i < n; ++i) l(i, i) = T(s);
        return l;
    }
};

using LowerTriangular = LowerTriangularT<double>;

// value_of lets generic code test pivots/conditions on plain numbers; the
// autodiff header provides the overload for its variable type.
inline double value_of(double x) { return x; }

namespace linalg {

using smi::value_of;

// Cholesky A = L L^T. Throws NotPositiveDefinite when a pivot falls at or
// below the jitter floor (1e-12); near-singular correlation matrices built
// from partial correlations are the expected offender.
template <class T>
LowerTriangularT<T> cholesky(const MatT<T>& A, double pivot_floor = 1e-12) {
    using std::sqrt;
    if (A.rows != A.cols) throw LengthMismatch("cholesky: matrix not square");
    const int n = A.rows;
    LowerTriangularT<T> L(n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j <= i; ++j) {
            T s = A(i, j);
            for (int k = 0; k < j; ++k) s = s - L(i, k) * L(j, k);
            if (i == j) {
                if (!(value_of(s) > pivot_floor)) {
                    throw NotPositiveDefinite("cholesky: pivot below floor at index " +
                                              std::to_string(i));
                }
                L(i, j) = sqrt(s);
            } else {
                L(i, j) = s / L(j, j);
            }
        }
    }
    return L;
}

// Solve L x = b (forward substitution).
template <class T>
VecT<T> solve_lower(const LowerTriangularT<T>& L, const VecT<T>& b) {
    const int n = L.dim;
    VecT<T> x(b);
    for (int i = 0; i < n; ++i) {
        T s = b[i];
        for (int k = 0; k < i; ++k) s = s - L(i, k) * x[k];
        x[i] = s / L(i, i);
    }
    return x;
}

// Solve L^T x = b (back substitution).
template <class T>
VecT<T> solve_upper_from_lower(const LowerTriangularT<T>& L, const VecT<T>& b) {
    const int n = L.dim;
    VecT<T> x(b);
    for (int i = n - 1; i >= 0; --i) {
        T s = b[i];
        for (int k = i + 1; k < n; ++k) s = s - L(k, i) * x[k];
        x[i] = s / L(i, i);
    }
    return x;
}

// (L L^T)^{-1} b via the two triangular solves.
template <class T>
VecT<T> cholesky_solve(const LowerTriangularT<T>& L, const VecT<T>& b) {
    return solve_upper_from_lower(L, solve_lower(L, b));
}

template <class T>
VecT<T> matvec(const MatT<T>& A, const VecT<T>& x) {
    VecT<T> y(static_cast<std::size_t>(A.rows), T(0.0));
    for (int i = 0; i < A.rows; ++i) {
        T s(0.0);
        for (int j = 0; j < A.cols; ++j) s = s + A(i, j) * x[j];
        y[i] = s;
    }
    return y;
}

template <class T>
T dot(const VecT<T>& x, const VecT<T>& y) {
    T s(0.0);
    for (std::size_t i = 0; i < x.size(); ++i) s = s + x[i] * y[i];
    return s;
}

template <class T>
MatT<T> matmul(const MatT<T>& A, const MatT<T>& B) {
    MatT<T> C(A.rows, B.cols);
    for (int i = 0; i < A.rows; ++i)
        for (int k = 0; k < A.cols; ++k) {
            const T aik = A(i, k);
            for (int j = 0; j < B.cols; ++j) C(i, j) = C(i, j) + aik * B(k, j);
        }
    return C;
}

template <class T>
MatT<T> transpose(const MatT<T>& A) {
    MatT<T> B(A.cols, A.rows);
    for (int i = 0; i < A.rows; ++i)
        for (int j = 0; j < A.cols; ++j) B(j, i) = A(i, j);
    return B;
}

// General square solve by Gaussian elimination with partial pivoting.
// Used for the small (<= 4x4) subproblems in the partial-correlation
// recursion and the 3x3 stationarity constraint.
template <class T>
VecT<T> solve(MatT<T> A, VecT<T> b) {
    if (A.rows != A.cols) throw LengthMismatch("solve: matrix not square");
    const int n = A.rows;
    std::vector<int> perm(n);
    for (int i = 0; i < n; ++i) perm[i] = i;
    for (int col = 0; col < n; ++col) {
        int piv = col;
        double best = std::fabs(value_of(A(col, col)));
        for (int r = col + 1; r < n; ++r) {
            const double v = std::fabs(value_of(A(r, col)));
            if (v > best) {
                best = v;
                piv = r;
            }
        }
        if (best < 1e-300) throw SingularBlock("solve: singular matrix");
        if (piv != col) {
            for (int j = 0; j < n; ++j) std::swap(A(col, j), A(piv, j));
            std::swap(b[col], b[piv]);
        }
        for (int r = col + 1; r < n; ++r) {
            const T f = A(r, col) / A(col, col);
            for (int j = col; j < n; ++j) A(r, j) = A(r, j) - f * A(col, j);
            b[r] = b[r] - f * b[col];
        }
    }
    VecT<T> x(static_cast<std::size_t>(n), T(0.0));
    for (int i = n - 1; i >= 0; --i) {
        T s = b[i];
        for (int j = i + 1; j < n; ++j) s = s - A(i, j) * x[j];
        x[i] = s / A(i, i);
    }
    return x;
}

template <class T>
MatT<T> solve_multi(const MatT<T>& A, const MatT<T>& B) {
    MatT<T> X(B.rows, B.cols);
    for (int j = 0; j < B.cols; ++j) {
        VecT<T> col(static_cast<std::size_t>(B.rows));
        for (int i = 0; i < B.rows; ++i) col[i] = B(i, j);
        VecT<T> x = solve(A, col);
        for (int i = 0; i < B.rows; ++i) X(i, j) = x[i];
    }
    return X;
}

}  // namespace linalg
}  // namespace smi
