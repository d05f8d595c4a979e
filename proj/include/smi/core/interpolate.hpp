#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "smi/core/error.hpp"

namespace smi {

// Monotone cubic Hermite interpolant (Fritsch-Carlson slope limiting).
// Used for quantile functions, so monotonicity is a hard requirement:
// evaluation never overshoots [min(ys), max(ys)] inside the knot range.
class MonotoneCubic {
  public:
    MonotoneCubic() = default;

    MonotoneCubic(std::vector<double> xs, std::vector<double> ys)
        : x_(std::move(xs)), y_(std::move(ys)) {
        if (x_.size() != y_.size()) {
            throw LengthMismatch("MonotoneCubic: xs and ys differ in length");
        }
        if (x_.size() < 4) {
            throw LengthMismatch("MonotoneCubic: need at least 4 knots");
        }
        const std::size_t n = x_.size();
        for (std::size_t i = 1; i < n; ++i) {
            if (!(x_[i] > x_[i - 1])) {
                throw UnsortedKnots("MonotoneCubic: xs must be strictly increasing");
            }
            if (y_[i] < y_[i - 1]) {
                throw UnsortedKnots("MonotoneCubic: ys must be nondecreasing");
            }
        }
        build_slopes();
    }

    double min_x() const { return x_.front(); }
    double max_x() const { return x_.back(); }
    double min_y() const { return y_.front(); }
    double max_y() const { return y_.back(); }

    // Evaluate at t; clamps to the end values outside the knot range.
    double operator()(double t) const {
        if (t <= x_.front()) return y_.front();
        if (t >= x_.back()) return y_.back();
        const std::size_t i = interval(t);
        const double h = x_[i + 1] - x_[i];
        const double s = (t - x_[i]) / h;
        const double s2 = s * s;
        const double s3 = s2 * s;
        const double h00 = 2 * s3 - 3 * s2 + 1;
        const double h10 = s3 - 2 * s2 + s;
        const double h01 = -2 * s3 + 3 * s2;
        const double h11 = s3 - s2;
        return h00 * y_[i] + h10 * h * m_[i] + h01 * y_[i + 1] + h11 * h * m_[i + 1];
    }

    // Derivative of the interpolant (nonnegative by construction).
    double derivative(double t) const {
        if (t <= x_.front() || t >= x_.back()) return 0.0;
        const std::size_t i = interval(t);
        const double h = x_[i + 1] - x_[i];
        const double s = (t - x_[i]) / h;
        const double s2 = s * s;
        const double dh00 = (6 * s2 - 6 * s) / h;
        const double dh10 = 3 * s2 - 4 * s + 1;
        const double dh01 = (-6 * s2 + 6 * s) / h;
        const double dh11 = 3 * s2 - 2 * s;
        return dh00 * y_[i] + dh10 * m_[i] + dh01 * y_[i + 1] + dh11 * m_[i + 1];
    }

  private:
    std::size_t interval(double t) const {
        const auto it = std::upper_bound(x_.begin(), x_.end(), t);
        return static_cast<std::size_t>(it - x_.begin()) - 1;
    }

    void build_slopes() {
        const std::size_t n = x_.size();
        std::vector<double> delta(n - 1);
        for (std::size_t i = 0; i + 1 < n; ++i) {
            delta[i] = (y_[i + 1] - y_[i]) / (x_[i + 1] - x_[i]);
        }
        m_.assign(n, 0.0);
        m_[0] = delta[0];
        m_[n - 1] = delta[n - 2];
        for (std::size_t i = 1; i + 1 < n; ++i) {
            m_[i] = (delta[i - 1] + delta[i]) / 2.0;
        }
        // Fritsch-Carlson limiting keeps each cubic piece monotone.
        for (std::size_t i = 0; i + 1 < n; ++i) {
            if (delta[i] == 0.0) {
                m_[i] = 0.0;
                m_[i + 1] = 0.0;
                continue;
            }
            const double alpha = m_[i] / delta[i];
            const double beta = m_[i + 1] / delta[i];
            const double r = alpha * alpha + beta * beta;
            if (r > 9.0) {
                const double tau = 3.0 / std::sqrt(r);
                m_[i] = tau * alpha * delta[i];
                m_[i + 1] = tau * beta * delta[i];
            }
        }
    }

    std::vector<double> x_;
    std::vector<double> y_;
    std::vector<double> m_;
};

}  // namespace smi
