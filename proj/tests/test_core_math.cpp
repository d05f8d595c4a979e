#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <set>

#include "oracles.hpp"
#include "smi/core/interpolate.hpp"
#include "smi/core/linalg.hpp"
#include "smi/core/normal.hpp"
#include "smi/core/rng.hpp"

using namespace smi;

namespace {

// High-precision Phi reference through erfc in long double plus a tail
// correction; treated as the oracle for the cdf tests.
long double phi_reference(long double x) { return 0.5L * erfcl(-x / sqrtl(2.0L)); }

}  // namespace

TEST_CASE("standard normal cdf") {
    CHECK(std_normal_cdf(0.0) == 0.5);

    // Symmetry Phi(-x) = 1 - Phi(x).
    for (double x : {0.1, 0.7, 1.3, 2.9, 4.4}) {
        CHECK(std_normal_cdf(-x) == Catch::Approx(1.0 - std_normal_cdf(x)).margin(1e-15));
    }

    // Quantile round trip at the 97.5% point.
    CHECK(std_normal_cdf(1.959963985) == Catch::Approx(0.975).margin(1e-9));

    // Absolute error against the long-double reference on a wide grid.
    for (double x = -8.0; x <= 8.0; x += 0.125) {
        const double ref = static_cast<double>(phi_reference(x));
        CHECK(std_normal_cdf(x) == Catch::Approx(ref).margin(1e-12));
    }

    // Deep tail, relative on the log scale.
    const double tail = std_normal_cdf(-8.0);
    const double ref = static_cast<double>(phi_reference(-8.0L));
    CHECK(std::log(tail) == Catch::Approx(std::log(ref)).epsilon(1e-12));

    // Monotone and saturating.
    CHECK(std_normal_cdf(-40.0) == 0.0);
    CHECK(std_normal_cdf(40.0) == 1.0);
}

TEST_CASE("standard normal log-cdf matches cdf and stays finite in the tail") {
    for (double x = -9.9; x < 8.0; x += 0.37) {
        CHECK(std_normal_logcdf(x) == Catch::Approx(std::log(std_normal_cdf(x))).epsilon(1e-10));
    }
    CHECK(std::isfinite(std_normal_logcdf(-90.0)));
    // Compare the asymptotic branch against long-double erfc at moderate depth.
    const double lref = static_cast<double>(logl(phi_reference(-14.0L)));
    CHECK(std_normal_logcdf(-14.0) == Catch::Approx(lref).epsilon(1e-10));
}

TEST_CASE("standard normal quantile") {
    CHECK(std_normal_quantile(0.5) == 0.0);
    CHECK(std_normal_quantile(0.975) == Catch::Approx(1.959963985).margin(1e-8));
    CHECK_THROWS_AS(std_normal_quantile(1.0), DomainError);
    CHECK_THROWS_AS(std_normal_quantile(0.0), DomainError);
    CHECK_THROWS_AS(std_normal_quantile(-0.2), DomainError);

    // Round trip Phi(Phi^{-1}(p)) = p to 1e-10.
    for (double p = 1e-8; p < 1.0; p += 0.0097) {
        CHECK(std_normal_cdf(std_normal_quantile(p)) == Catch::Approx(p).margin(1e-10));
    }
}

TEST_CASE("owen t function") {
    // T(h, 1) = Phi(h)(1 - Phi(h))/2, a classical identity.
    for (double h : {-2.0, -0.3, 0.0, 0.8, 2.5}) {
        const double phi_h = std_normal_cdf(h);
        CHECK(owen_t(h, 1.0) == Catch::Approx(0.5 * phi_h * (1.0 - phi_h)).margin(1e-13));
    }
    // T(0, a) = atan(a) / (2 pi).
    for (double a : {0.2, 1.0, 3.7, 25.0}) {
        CHECK(owen_t(0.0, a) == Catch::Approx(std::atan(a) / (2.0 * M_PI)).margin(1e-13));
    }
    // Odd in a, even in h.
    CHECK(owen_t(1.1, -0.6) == Catch::Approx(-owen_t(1.1, 0.6)).margin(1e-15));
    CHECK(owen_t(-1.1, 0.6) == Catch::Approx(owen_t(1.1, 0.6)).margin(1e-15));
    // Against direct quadrature of the defining integral.
    for (double h : {0.4, 1.7}) {
        for (double a : {0.35, 0.9, 4.2}) {
            const double ref = oracles::integrate(
                                   [h](double t) {
                                       return std::exp(-0.5 * h * h * (1.0 + t * t)) / (1.0 + t * t);
                                   },
                                   0.0, a, 1e-13) /
                               (2.0 * M_PI);
            CHECK(owen_t(h, a) == Catch::Approx(ref).margin(1e-12));
        }
    }
}

TEST_CASE("cholesky examples") {
    CHECK_THROWS_AS(linalg::cholesky(Mat(2, 3)), LengthMismatch);

    const Mat eye = Mat::identity(3);
    auto L = linalg::cholesky(eye);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j <= i; ++j) CHECK(L(i, j) == (i == j ? 1.0 : 0.0));

    Mat a(2, 2, {4.0, 2.0, 2.0, 3.0});
    auto La = linalg::cholesky(a);
    CHECK(La(0, 0) == Catch::Approx(2.0));
    CHECK(La(1, 0) == Catch::Approx(1.0));
    CHECK(La(1, 1) == Catch::Approx(std::sqrt(2.0)));

    Mat bad(2, 2, {1.0, 2.0, 2.0, 1.0});
    CHECK_THROWS_AS(linalg::cholesky(bad), NotPositiveDefinite);
}

TEST_CASE("cholesky round trip on random spd matrices") {
    Rng rng(20240811);
    for (int dim : {2, 5, 17, 50}) {
        // A = B B^T + dim * I is comfortably positive definite.
        Mat b(dim, dim);
        for (auto& v : b.a) v = rng.normal();
        Mat a(dim, dim);
        for (int i = 0; i < dim; ++i)
            for (int j = 0; j < dim; ++j) {
                double s = 0.0;
                for (int k = 0; k < dim; ++k) s += b(i, k) * b(j, k);
                a(i, j) = s + (i == j ? dim : 0.0);
            }
        auto L = linalg::cholesky(a);
        double num = 0.0, den = 0.0;
        for (int i = 0; i < dim; ++i)
            for (int j = 0; j < dim; ++j) {
                double s = 0.0;
                for (int k = 0; k <= std::min(i, j); ++k) s += L(i, k) * L(j, k);
                num += (s - a(i, j)) * (s - a(i, j));
                den += a(i, j) * a(i, j);
            }
        CHECK(std::sqrt(num / den) <= 1e-10);

        // Triangular solves reproduce (L L^T)^{-1} b.
        Vec rhs(dim);
        for (auto& v : rhs) v = rng.normal();
        Vec x = linalg::cholesky_solve(L, rhs);
        Vec back = linalg::matvec(a, x);
        for (int i = 0; i < dim; ++i) CHECK(back[i] == Catch::Approx(rhs[i]).margin(1e-8));
    }
}

TEST_CASE("monotone interpolant examples") {
    SECTION("linear data is reproduced exactly") {
        MonotoneCubic f({0, 1, 2, 3}, {0, 1, 2, 3});
        for (double t = 0.0; t <= 3.0; t += 0.1) CHECK(f(t) == Catch::Approx(t).margin(1e-14));
    }
    SECTION("normal cdf knots") {
        std::vector<double> xs, ys;
        for (int k = 0; k <= 200; ++k) {
            const double x = -5.0 + 10.0 * k / 200.0;
            xs.push_back(x);
            ys.push_back(std_normal_cdf(x));
        }
        MonotoneCubic f(std::move(xs), std::move(ys));
        CHECK(f(0.3) == Catch::Approx(std_normal_cdf(0.3)).margin(1e-6));
    }
    SECTION("errors") {
        CHECK_THROWS_AS(MonotoneCubic({0, 1, 2, 3}, {0, 1, 0.5, 2}), UnsortedKnots);
        CHECK_THROWS_AS(MonotoneCubic({0, 1, 1, 3}, {0, 1, 2, 3}), UnsortedKnots);
        CHECK_THROWS_AS(MonotoneCubic({0, 1, 2}, {0, 1, 2}), LengthMismatch);
        CHECK_THROWS_AS(MonotoneCubic({0, 1, 2, 3}, {0, 1, 2}), LengthMismatch);
    }
}

TEST_CASE("monotone interpolant never decreases and never overshoots") {
    Rng rng(7);
    for (int rep = 0; rep < 50; ++rep) {
        const int n = 4 + static_cast<int>(rng.below(20));
        std::vector<double> xs(n), ys(n);
        double x = rng.normal(), y = rng.normal();
        for (int i = 0; i < n; ++i) {
            x += rng.uniform() + 1e-3;
            y += rng.uniform();  // strictly increasing data
            xs[i] = x;
            ys[i] = y;
        }
        MonotoneCubic f(xs, ys);
        double prev = -HUGE_VAL;
        for (int k = 0; k <= 500; ++k) {
            const double t = xs.front() + (xs.back() - xs.front()) * k / 500.0;
            const double v = f(t);
            CHECK(v >= prev - 1e-12);
            CHECK(v >= ys.front() - 1e-12);
            CHECK(v <= ys.back() + 1e-12);
            prev = v;
        }
        // Exact at the knots.
        for (int i = 0; i < n; ++i) CHECK(f(xs[i]) == Catch::Approx(ys[i]).margin(1e-12));
    }
}

TEST_CASE("rng determinism and substreams") {
    Rng a(42), b(42);
    for (int i = 0; i < 1000; ++i) REQUIRE(a.next_u64() == b.next_u64());

    // Same label, same stream; different labels, different streams.
    Rng s1 = Rng(42).substream("fits");
    Rng s2 = Rng(42).substream("fits");
    Rng s3 = Rng(42).substream("metrics");
    bool all_equal = true, any_equal = false;
    for (int i = 0; i < 100; ++i) {
        const auto x = s1.next_u64();
        all_equal = all_equal && (x == s2.next_u64());
        any_equal = any_equal || (x == s3.next_u64());
    }
    CHECK(all_equal);
    CHECK_FALSE(any_equal);

    // Substream derivation ignores parent state: drawing first changes nothing.
    Rng parent(99);
    Rng before = parent.substream("x", 3);
    parent.next_u64();
    Rng after = parent.substream("x", 3);
    for (int i = 0; i < 10; ++i) REQUIRE(before.next_u64() == after.next_u64());

    // Indexed substreams are distinct.
    std::set<std::uint64_t> firsts;
    for (std::uint64_t k = 0; k < 64; ++k) firsts.insert(Rng(1).substream("rep", k).next_u64());
    CHECK(firsts.size() == 64);
}

TEST_CASE("rng uniform and normal ranges") {
    Rng rng(5);
    double mn = 1.0, mx = 0.0, sum = 0.0;
    for (int i = 0; i < 20000; ++i) {
        const double u = rng.uniform();
        REQUIRE(u > 0.0);
        REQUIRE(u < 1.0);
        mn = std::min(mn, u);
        mx = std::max(mx, u);
        sum += u;
    }
    CHECK(sum / 20000.0 == Catch::Approx(0.5).margin(0.01));
    CHECK(mn < 0.01);
    CHECK(mx > 0.99);

    std::vector<double> pit;
    for (int i = 0; i < 10000; ++i) pit.push_back(std_normal_cdf(rng.normal()));
    CHECK(oracles::ks_uniform_pvalue(pit) > 0.01);
}
