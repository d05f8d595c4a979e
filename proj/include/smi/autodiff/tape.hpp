#pragma once

#include <cmath>
#include <cstdint>
#include <utility>
#include <vector>

#include "smi/core/error.hpp"
#include "smi/core/normal.hpp"

namespace smi {

// Reverse-mode differentiation on a scalar Wengert list. Each node records
// its value and up to two parents with local partials; a backward sweep in
// reverse index order accumulates adjoints (parents always precede children,
// so no explicit topological sort is needed).
//
// One tape per thread; tapes are never shared. Constants never allocate
// nodes: a Var without a tape behaves as a plain number, which keeps generic
// numeric code cheap when mixed with literals.
class Tape {
  public:
    struct Node {
        double val;
        double adj;
        double d1;
        double d2;
        std::int32_t p1;
        std::int32_t p2;
    };

    std::int32_t push(double val, std::int32_t p1, double d1, std::int32_t p2, double d2) {
        nodes_.push_back(Node{val, 0.0, d1, d2, p1, p2});
        return static_cast<std::int32_t>(nodes_.size()) - 1;
    }

    std::int32_t leaf(double val) { return push(val, -1, 0.0, -1, 0.0); }

    void clear() { nodes_.clear(); }
    void reserve(std::size_t n) { nodes_.reserve(n); }
    std::size_t size() const { return nodes_.size(); }

    double value(std::int32_t i) const { return nodes_[static_cast<std::size_t>(i)].val; }
    double adjoint(std::int32_t i) const { return nodes_[static_cast<std::size_t>(i)].adj; }

    // Seed d(root)/d(root) = 1 and sweep adjoints back to the leaves.
    void backward(std::int32_t root) {
        for (auto& n : nodes_) n.adj = 0.0;
        nodes_[static_cast<std::size_t>(root)].adj = 1.0;
        for (std::int32_t i = root; i >= 0; --i) {
            const Node& n = nodes_[static_cast<std::size_t>(i)];
            const double a = n.adj;
            if (a == 0.0) continue;
            if (n.p1 >= 0) nodes_[static_cast<std::size_t>(n.p1)].adj += a * n.d1;
            if (n.p2 >= 0) nodes_[static_cast<std::size_t>(n.p2)].adj += a * n.d2;
        }
    }

  private:
    std::vector<Node> nodes_;
};

// Differentiable scalar: value plus (optionally) a node on a tape.
struct Var {
    Tape* tape = nullptr;
    std::int32_t idx = -1;
    double v = 0.0;

    Var() = default;
    Var(double c) : v(c) {}  // NOLINT: implicit constant lift is the point
    Var(Tape* t, std::int32_t i, double value) : tape(t), idx(i), v(value) {}

    bool tracked() const { return tape != nullptr; }
};

inline Var make_var(Tape& tape, double value) { return Var(&tape, tape.leaf(value), value); }

inline double value_of(const Var& x) { return x.v; }

// Identity in value, zero in derivative. The result sits on the tape as a
// parentless node, so the backward pass stops there by construction.
inline Var stop_gradient(const Var& x) {
    if (!x.tape) return Var(x.v);
    return Var(x.tape, x.tape->leaf(x.v), x.v);
}

namespace detail {

inline Var unary(const Var& x, double val, double dx) {
    if (!x.tape) return Var(val);
    return Var(x.tape, x.tape->push(val, x.idx, dx, -1, 0.0), val);
}

inline Var binary(const Var& a, const Var& b, double val, double da, double db) {
    Tape* t = a.tape ? a.tape : b.tape;
    if (!t) return Var(val);
    if (a.tape && b.tape) return Var(t, t->push(val, a.idx, da, b.idx, db), val);
    if (a.tape) return Var(t, t->push(val, a.idx, da, -1, 0.0), val);
    return Var(t, t->push(val, b.idx, db, -1, 0.0), val);
}

}  // namespace detail

inline Var operator+(const Var& a, const Var& b) {
    return detail::binary(a, b, a.v + b.v, 1.0, 1.0);
}
inline Var operator-(const Var& a, const Var& b) {
    return detail::binary(a, b, a.v - b.v, 1.0, -1.0);
}
inline Var operator*(const Var& a, const Var& b) {
    return detail::binary(a, b, a.v * b.v, b.v, a.v);
}
inline Var operator/(const Var& a, const Var& b) {
    const double inv = 1.0 / b.v;
    return detail::binary(a, b, a.v * inv, inv, -a.v * inv * inv);
}
inline Var operator-(const Var& a) { return detail::unary(a, -a.v, -1.0); }
inline Var operator+(const Var& a) { return a; }

inline Var& operator+=(Var& a, const Var& b) { return a = a + b; }
inline Var& operator-=(Var& a, const Var& b) { return a = a - b; }
inline Var& operator*=(Var& a, const Var& b) { return a = a * b; }
inline Var& operator/=(Var& a, const Var& b) { return a = a / b; }

inline Var exp(const Var& x) {
    const double e = std::exp(x.v);
    return detail::unary(x, e, e);
}
inline Var log(const Var& x) { return detail::unary(x, std::log(x.v), 1.0 / x.v); }
inline Var log1p(const Var& x) { return detail::unary(x, std::log1p(x.v), 1.0 / (1.0 + x.v)); }
inline Var sqrt(const Var& x) {
    const double s = std::sqrt(x.v);
    return detail::unary(x, s, 0.5 / s);
}
inline Var sinh(const Var& x) { return detail::unary(x, std::sinh(x.v), std::cosh(x.v)); }
inline Var cosh(const Var& x) { return detail::unary(x, std::cosh(x.v), std::sinh(x.v)); }
inline Var asinh(const Var& x) {
    return detail::unary(x, std::asinh(x.v), 1.0 / std::sqrt(1.0 + x.v * x.v));
}
inline Var tanh(const Var& x) {
    const double t = std::tanh(x.v);
    return detail::unary(x, t, 1.0 - t * t);
}

// pow for positive base; a single node with both partials beats the
// exp(b log a) chain inside the copula densities.
inline Var pow(const Var& a, const Var& b) {
    const double val = std::pow(a.v, b.v);
    return detail::binary(a, b, val, b.v * std::pow(a.v, b.v - 1.0), val * std::log(a.v));
}

// Phi and Phi^{-1} as primitives with analytic partials; they dominate the
// ELBO graph so one node each matters.
inline Var norm_cdf(const Var& x) {
    return detail::unary(x, std_normal_cdf(x.v), std_normal_pdf(x.v));
}
inline Var norm_logcdf(const Var& x) {
    return detail::unary(x, std_normal_logcdf(x.v), std_normal_cdf_ratio(x.v));
}
inline Var norm_quantile(const Var& p) {
    const double x = std_normal_quantile(p.v);
    return detail::unary(p, x, 1.0 / std_normal_pdf(x));
}
inline Var norm_logpdf(const Var& x) {
    return detail::unary(x, std_normal_logpdf(x.v), -x.v);
}

inline Var owen_t(const Var& h, const Var& a) {
    return detail::binary(h, a, owen_t(h.v, a.v), owen_t_dh(h.v, a.v), owen_t_da(h.v, a.v));
}

// Double overloads so templated code works unchanged on plain numbers.
inline double norm_cdf(double x) { return std_normal_cdf(x); }
inline double norm_logcdf(double x) { return std_normal_logcdf(x); }
inline double norm_quantile(double p) { return std_normal_quantile(p); }
inline double norm_logpdf(double x) { return std_normal_logpdf(x); }
inline double exp(double x) { return std::exp(x); }
inline double log(double x) { return std::log(x); }
inline double log1p(double x) { return std::log1p(x); }
inline double sqrt(double x) { return std::sqrt(x); }
inline double sinh(double x) { return std::sinh(x); }
inline double cosh(double x) { return std::cosh(x); }
inline double asinh(double x) { return std::asinh(x); }
inline double tanh(double x) { return std::tanh(x); }
inline double pow(double a, double b) { return std::pow(a, b); }
inline double stop_gradient(double x) { return x; }

// Gradient of a scalar function of a parameter vector. The callable receives
// the leaf Vars; throws NonFiniteValue when the forward value or any
// requested derivative is NaN/Inf.
template <class F>
std::pair<double, std::vector<double>> gradient(F&& f, const std::vector<double>& x) {
    Tape tape;
    std::vector<Var> leaves;
    leaves.reserve(x.size());
    for (double xi : x) leaves.push_back(make_var(tape, xi));
    Var out = f(leaves);
    if (!std::isfinite(out.v)) {
        throw NonFiniteValue("gradient: forward pass produced a non-finite value");
    }
    std::vector<double> g(x.size(), 0.0);
    if (out.tracked()) {
        tape.backward(out.idx);
        for (std::size_t i = 0; i < leaves.size(); ++i) g[i] = tape.adjoint(leaves[i].idx);
    }
    for (double gi : g) {
        if (!std::isfinite(gi)) {
            throw NonFiniteValue("gradient: non-finite derivative component");
        }
    }
    return {out.v, std::move(g)};
}

}  // namespace smi
