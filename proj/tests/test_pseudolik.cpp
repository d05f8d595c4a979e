#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "oracles.hpp"
#include "smi/copulas/gumbel.hpp"
#include "smi/core/rng.hpp"
#include "smi/marginals/marginals.hpp"
#include "smi/pseudolik/bounds.hpp"
#include "smi/pseudolik/likelihood.hpp"
#include "smi/pseudolik/ranks.hpp"

using namespace smi;

namespace {

// Bivariate dataset from a Gumbel copula with the section-5 style marginals.
Dataset simulate_bivariate(double tau, int n, std::uint64_t seed) {
    const double theta = gumbel_theta_from_tau(tau);
    Rng rng(seed);
    Marginal m1{MarginalFamily::LogNormal, {-1.0, 1.0}};
    Marginal m2{MarginalFamily::Gamma, {2.0, 1.0}};
    std::vector<double> values(static_cast<std::size_t>(n) * 2);
    for (int i = 0; i < n; ++i) {
        double u, v;
        gumbel_sample_pair(theta, rng, u, v);
        values[static_cast<std::size_t>(i) * 2] = m1.quantile(u);
        values[static_cast<std::size_t>(i) * 2 + 1] = m2.quantile(v);
    }
    return compute_ranks(n, 2, std::move(values));
}

}  // namespace

TEST_CASE("compute ranks") {
    Dataset a = compute_ranks(3, 1, {3.0, 1.0, 2.0});
    CHECK(a.rank(0, 0) == 3);
    CHECK(a.rank(1, 0) == 1);
    CHECK(a.rank(2, 0) == 2);

    Dataset b = compute_ranks(5, 1, {10.0, 20.0, 30.0, 40.0, 50.0});
    for (int i = 0; i < 5; ++i) CHECK(b.rank(i, 0) == i + 1);

    // Ties share the maximal rank of their group under the counting rule.
    Dataset c = compute_ranks(3, 1, {1.0, 1.0, 2.0});
    CHECK(c.rank(0, 0) == 2);
    CHECK(c.rank(1, 0) == 2);
    CHECK(c.rank(2, 0) == 3);

    CHECK_THROWS_AS(compute_ranks(1, 1, {1.0}), DomainError);
    CHECK_THROWS_AS(compute_ranks(3, 2, {1.0, 2.0, 3.0}), LengthMismatch);
}

TEST_CASE("jitter breaks exact ties") {
    std::vector<double> values{1.0, 1.0, 2.0, 2.0, 2.0, 3.0};
    const int changed = jitter_ties(6, 1, values);
    CHECK(changed == 3);
    Dataset ds = compute_ranks(6, 1, std::move(values));
    std::vector<int> seen;
    for (int i = 0; i < 6; ++i) seen.push_back(ds.rank(i, 0));
    std::sort(seen.begin(), seen.end());
    for (int i = 0; i < 6; ++i) CHECK(seen[static_cast<std::size_t>(i)] == i + 1);
}

TEST_CASE("influence vector validates bounds") {
    CHECK_NOTHROW(InfluenceVector({0.0, 0.5, 1.0}));
    CHECK_THROWS_AS(InfluenceVector({-0.1}), DomainError);
    CHECK_THROWS_AS(InfluenceVector({1.2}), DomainError);
}

TEST_CASE("smi bounds") {
    Dataset ds = simulate_bivariate(0.7, 12, 3);
    std::vector<Marginal> margs{{MarginalFamily::LogNormal, {-1.0, 1.0}},
                                {MarginalFamily::Gamma, {2.0, 1.0}}};

    SECTION("gamma = 0 reduces to the rank box, independent of eta") {
        auto t = smi_bounds(InfluenceVector({0.0, 0.0}), margs, ds);
        std::vector<Marginal> other{{MarginalFamily::LogNormal, {4.0, 0.3}},
                                    {MarginalFamily::Gamma, {1.0, 9.0}}};
        auto t2 = smi_bounds(InfluenceVector({0.0, 0.0}), other, ds);
        for (int i = 0; i < ds.n; ++i)
            for (int j = 0; j < ds.d; ++j) {
                const double r = ds.rank(i, j);
                CHECK(t.lower(i, j) == (r - 1) / (ds.n + 1.0));
                CHECK(t.upper(i, j) == Catch::Approx(r / (ds.n + 1.0)).margin(1e-15));
                REQUIRE(t2.lower(i, j) == t.lower(i, j));
                REQUIRE(t2.upper(i, j) == t.upper(i, j));
            }
    }

    SECTION("gamma = 1 collapses to the parametric pit") {
        auto t = smi_bounds(InfluenceVector({1.0, 1.0}), margs, ds);
        for (int i = 0; i < ds.n; ++i)
            for (int j = 0; j < ds.d; ++j) {
                const double f = margs[static_cast<std::size_t>(j)].cdf(ds.value(i, j));
                REQUIRE(t.lower(i, j) == f);
                REQUIRE(t.upper(i, j) == f);
            }
    }

    SECTION("hand-computed interpolation") {
        // gamma = 0.5, n = 4, r = 2, F = 0.30 -> a = 0.25, b = 0.35.
        auto [a, b] = smi_bound_pair(0.5, 0.30, 2, 4);
        CHECK(a == Catch::Approx(0.25).margin(1e-15));
        CHECK(b == Catch::Approx(0.35).margin(1e-15));
    }

    SECTION("width law is exact for every gamma") {
        for (double g : {0.0, 0.13, 0.5, 0.77, 1.0}) {
            auto t = smi_bounds(InfluenceVector({g, g}), margs, ds);
            const double width = (1.0 - g) / (ds.n + 1.0);
            for (int i = 0; i < ds.n; ++i)
                for (int j = 0; j < ds.d; ++j) {
                    REQUIRE(t.upper(i, j) - t.lower(i, j) == width);
                }
        }
    }
}

TEST_CASE("smi extended loglik") {
    Dataset ds = simulate_bivariate(0.7, 8, 11);
    std::vector<Marginal> margs{{MarginalFamily::LogNormal, {-1.0, 1.0}},
                                {MarginalFamily::Gamma, {2.0, 1.0}}};
    const double theta = 2.0;
    auto logc = [theta](std::span<const double> u) {
        return gumbel_logdensity(u[0], u[1], theta);
    };

    SECTION("independence copula gives zero for any u in bounds") {
        auto t = smi_bounds(InfluenceVector({0.3, 0.8}), margs, ds);
        std::vector<double> u(t.a.size());
        Rng rng(5);
        for (std::size_t k = 0; k < u.size(); ++k) {
            u[k] = t.a[k] + (t.b[k] - t.a[k]) * rng.uniform();
        }
        auto zero = [](std::span<const double>) { return 0.0; };
        CHECK(smi_extended_loglik(u, t, zero) == 0.0);
    }

    SECTION("indicator violations are rejected") {
        auto t = smi_bounds(InfluenceVector({0.5, 0.5}), margs, ds);
        std::vector<double> u(t.a);
        u[3] = t.b[3] + 1e-6;
        CHECK_THROWS_AS(smi_extended_loglik(u, t, logc), IndicatorViolated);
    }

    SECTION("gamma = 1 evaluates the parametric copula likelihood") {
        auto t = smi_bounds(InfluenceVector({1.0, 1.0}), margs, ds);
        std::vector<double> u(t.a);  // the boxes are degenerate at F
        double direct = 0.0;
        for (int i = 0; i < ds.n; ++i) {
            direct += gumbel_logdensity(margs[0].cdf(ds.value(i, 0)),
                                        margs[1].cdf(ds.value(i, 1)), theta);
        }
        CHECK(smi_extended_loglik(u, t, logc) == direct);
    }

    SECTION("gamma = 0 follows the same floating-point path as the rank-only bounds") {
        auto t_smi = smi_bounds(InfluenceVector({0.0, 0.0}), margs, ds);
        // Eq. 8 machinery: rank boxes with no marginal input at all.
        BoundsTable t_rank;
        t_rank.n = ds.n;
        t_rank.d = ds.d;
        t_rank.a.resize(t_smi.a.size());
        t_rank.b.resize(t_smi.b.size());
        for (int i = 0; i < ds.n; ++i)
            for (int j = 0; j < ds.d; ++j) {
                auto [a, b] = smi_bound_pair(0.0, 0.0, ds.rank(i, j), ds.n);
                t_rank.a[static_cast<std::size_t>(i) * ds.d + j] = a;
                t_rank.b[static_cast<std::size_t>(i) * ds.d + j] = b;
            }
        for (std::size_t k = 0; k < t_smi.a.size(); ++k) {
            REQUIRE(t_smi.a[k] == t_rank.a[k]);
            REQUIRE(t_smi.b[k] == t_rank.b[k]);
        }
        std::vector<double> u(t_smi.a.size());
        Rng rng(6);
        for (std::size_t k = 0; k < u.size(); ++k) {
            u[k] = t_smi.a[k] + (t_smi.b[k] - t_smi.a[k]) * rng.uniform();
        }
        REQUIRE(smi_extended_loglik(u, t_smi, logc) == smi_extended_loglik(u, t_rank, logc));
    }
}

TEST_CASE("brute force pseudo rank loglik") {
    SECTION("independence copula gives the product of box widths") {
        Dataset ds = simulate_bivariate(0.3, 7, 21);
        std::vector<Marginal> margs{{MarginalFamily::LogNormal, {-1.0, 1.0}},
                                    {MarginalFamily::Gamma, {2.0, 1.0}}};
        auto bounds = smi_bounds(InfluenceVector({0.0, 0.0}), margs, ds);
        const double ll = pseudo_rank_loglik_bruteforce(IndependenceOps{}, bounds);
        CHECK(ll == Catch::Approx(ds.n * std::log(1.0 / ((ds.n + 1.0) * (ds.n + 1.0))))
                        .epsilon(1e-12));
    }

    SECTION("matches monte carlo integration of the extended likelihood") {
        Dataset ds = simulate_bivariate(0.5, 5, 77);
        std::vector<Marginal> margs{{MarginalFamily::LogNormal, {-1.0, 1.0}},
                                    {MarginalFamily::Gamma, {2.0, 1.0}}};
        auto bounds = smi_bounds(InfluenceVector({0.0, 0.0}), margs, ds);
        const double theta = 2.0;
        const double brute = pseudo_rank_loglik_bruteforce(GumbelOps{theta}, bounds);
        double mc_total = 0.0, mc_var = 0.0;
        Rng rng(123);
        for (int i = 0; i < ds.n; ++i) {
            std::vector<std::pair<double, double>> box{
                {bounds.lower(i, 0), bounds.upper(i, 0)},
                {bounds.lower(i, 1), bounds.upper(i, 1)}};
            auto est = oracles::mc_box_integral(
                [&](const std::vector<double>& u) {
                    return std::exp(gumbel_logdensity(u[0], u[1], theta));
                },
                box, rng, 100000);
            mc_total += std::log(est.mean);
            mc_var += (est.se / est.mean) * (est.se / est.mean);
        }
        CHECK(std::fabs(brute - mc_total) <= 3.0 * std::sqrt(mc_var));
    }

    SECTION("comonotone data at large theta concentrates on the diagonal boxes") {
        // Equal ranks across both columns.
        const int n = 5;
        std::vector<double> values;
        for (int i = 0; i < n; ++i) {
            values.push_back(i + 1.0);
            values.push_back(10.0 * (i + 1.0));
        }
        Dataset ds = compute_ranks(n, 2, std::move(values));
        BoundsTable bounds;
        bounds.n = n;
        bounds.d = 2;
        bounds.a.resize(static_cast<std::size_t>(n) * 2);
        bounds.b.resize(bounds.a.size());
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < 2; ++j) {
                auto [a, b] = smi_bound_pair(0.0, 0.0, ds.rank(i, j), n);
                bounds.a[static_cast<std::size_t>(i) * 2 + j] = a;
                bounds.b[static_cast<std::size_t>(i) * 2 + j] = b;
            }
        const double ll = pseudo_rank_loglik_bruteforce(GumbelOps{60.0}, bounds);
        CHECK(ll == Catch::Approx(n * std::log(1.0 / (n + 1.0))).margin(1e-3));
    }

    SECTION("dimension and size caps") {
        BoundsTable big;
        big.n = 2;
        big.d = 4;
        CHECK_THROWS_AS(pseudo_rank_loglik_bruteforce(IndependenceOps{}, big), DomainError);
    }
}

TEST_CASE("mixed pseudo loglik") {
    Dataset ds = simulate_bivariate(0.5, 5, 99);
    std::vector<Marginal> margs{{MarginalFamily::LogNormal, {-0.8, 1.1}},
                                {MarginalFamily::Gamma, {1.7, 0.9}}};
    const double theta = 2.0;
    GumbelOps ops{theta};
    auto rank_bounds = smi_bounds(InfluenceVector({0.0, 0.0}), margs, ds);

    SECTION("all cut equals the brute force") {
        const double mixed = mixed_pseudo_loglik(ops, {0, 0}, margs, ds, rank_bounds);
        const double brute = pseudo_rank_loglik_bruteforce(ops, rank_bounds);
        CHECK(mixed == brute);
    }

    SECTION("all uncut equals the parametric copula likelihood") {
        const double mixed = mixed_pseudo_loglik(ops, {1, 1}, margs, ds, rank_bounds);
        double direct = 0.0;
        for (int i = 0; i < ds.n; ++i) {
            direct += gumbel_logdensity(margs[0].cdf(ds.value(i, 0)),
                                        margs[1].cdf(ds.value(i, 1)), theta);
        }
        CHECK(mixed == Catch::Approx(direct).margin(1e-12));
    }

    SECTION("partial cuts match monte carlo integration of the mixed likelihood") {
        for (auto delta : std::vector<std::vector<int>>{{0, 1}, {1, 0}}) {
            const double mixed = mixed_pseudo_loglik(ops, delta, margs, ds, rank_bounds);
            const int cut_j = (delta[0] == 0) ? 0 : 1;
            const int uncut_j = 1 - cut_j;
            double mc_total = 0.0, mc_var = 0.0;
            Rng rng(2024);
            for (int i = 0; i < ds.n; ++i) {
                const double pit =
                    margs[static_cast<std::size_t>(uncut_j)].cdf(ds.value(i, uncut_j));
                std::vector<std::pair<double, double>> box{
                    {rank_bounds.lower(i, cut_j), rank_bounds.upper(i, cut_j)}};
                auto est = oracles::mc_box_integral(
                    [&](const std::vector<double>& w) {
                        const double u = (cut_j == 0) ? w[0] : pit;
                        const double v = (cut_j == 0) ? pit : w[0];
                        return std::exp(gumbel_logdensity(u, v, theta));
                    },
                    box, rng, 200000);
                mc_total += std::log(est.mean);
                mc_var += (est.se / est.mean) * (est.se / est.mean);
            }
            CHECK(std::fabs(mixed - mc_total) <= 3.0 * std::sqrt(mc_var));
        }
    }
}

TEST_CASE("well specified marginals make the bounds insensitive to gamma") {
    // Data truly from the marginal: the gap between bounds at different
    // gammas shrinks as n grows (the F and rank-based anchors converge).
    Marginal m{MarginalFamily::LogNormal, {-1.0, 1.0}};
    double prev_gap = HUGE_VAL;
    for (int n : {100, 1000, 10000}) {
        Rng rng(314);
        std::vector<double> values(static_cast<std::size_t>(n));
        for (auto& v : values) v = m.sample(rng);
        Dataset ds = compute_ranks(n, 1, std::move(values));
        auto lo = smi_bounds(InfluenceVector({0.2}), {m}, ds);
        auto hi = smi_bounds(InfluenceVector({0.9}), {m}, ds);
        double gap = 0.0;
        for (int i = 0; i < n; ++i) gap = std::max(gap, std::fabs(lo.lower(i, 0) - hi.lower(i, 0)));
        CHECK(gap < prev_gap);
        prev_gap = gap;
    }
    CHECK(prev_gap < 0.02);
}
