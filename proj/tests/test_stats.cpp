#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "silicon/stats.hpp"

using namespace silicon::stats;

TEST_CASE("pearson perfect linear relationships") {
    std::vector<double> x = {1, 2, 3, 4, 5, 7, 11};
    std::vector<double> y, neg;
    for (double v : x) {
        y.push_back(2 * v + 1);
        neg.push_back(-v);
    }
    CHECK(pearson(x, y).r == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(pearson(x, neg).r == doctest::Approx(-1.0).epsilon(1e-12));
}

TEST_CASE("pearson on identical vectors is exactly 1") {
    std::vector<double> x = {6, 21, 13, 30, 8, 17, 25};
    CHECK(pearson(x, x).r == 1.0);
}

TEST_CASE("fisher z interval reproduces the r=0.26 n=85 report") {
    auto [lo, hi] = fisher_z_interval(0.26, 85);
    CHECK(std::round(lo * 100) / 100 == doctest::Approx(0.05));
    CHECK(std::round(hi * 100) / 100 == doctest::Approx(0.45));
}

TEST_CASE("pearson error paths") {
    std::vector<double> constant = {3, 3, 3, 3};
    std::vector<double> varying = {1, 2, 3, 4};
    CHECK_THROWS_AS(pearson(constant, varying), ZeroVariance);
    std::vector<double> short_x = {1, 2};
    std::vector<double> short_y = {3, 4};
    CHECK_THROWS_AS(pearson(short_x, short_y), TooFewObservations);
    std::vector<double> mismatched = {1, 2, 3};
    CHECK_THROWS_AS(pearson(varying, mismatched), LengthMismatch);
}

TEST_CASE("pearson affine invariance and sign flip") {
    std::mt19937_64 rng(7);
    std::vector<double> x(40), y(40), y2(40), yneg(40);
    for (int i = 0; i < 40; ++i) {
        x[i] = static_cast<double>(rng() % 1000) / 100.0;
        y[i] = static_cast<double>(rng() % 1000) / 100.0;
        y2[i] = 3.5 * y[i] + 12.0;
        yneg[i] = -y[i];
    }
    const double base = pearson(x, y).r;
    CHECK(pearson(x, y2).r == doctest::Approx(base).epsilon(1e-10));
    CHECK(pearson(x, yneg).r == doctest::Approx(-base).epsilon(1e-10));
}

TEST_CASE("spearman handles ties via average ranks") {
    std::vector<double> x = {1, 2, 2, 3, 4};
    std::vector<double> y = {10, 20, 20, 30, 40};
    CHECK(spearman(x, y).r == doctest::Approx(1.0));
    std::vector<double> ymono = {1, 8, 8, 27, 64};  // ties in the same places
    CHECK(spearman(x, ymono).r == doctest::Approx(1.0));
    std::vector<double> ytied_elsewhere = {1, 8, 27, 64, 125};
    // ties in x only: rank vectors are no longer identical, so |r| < 1
    CHECK(spearman(x, ytied_elsewhere).r < 1.0);
    CHECK(spearman(x, ytied_elsewhere).r > 0.9);
}

TEST_CASE("wasserstein examples") {
    std::vector<double> a = {0.2, 0.4, 0.9};
    CHECK(wasserstein_1d(a, a) == 0.0);
    std::vector<double> zero = {0.0};
    std::vector<double> one = {1.0};
    CHECK(wasserstein_1d(zero, one) == doctest::Approx(1.0));
    // hand ECDF integration: {0,1} vs {0,0} differs only on [0,1] where
    // ECDFs are 0.5 vs 1.0
    std::vector<double> p = {0.0, 1.0};
    std::vector<double> q = {0.0, 0.0};
    CHECK(wasserstein_1d(p, q) == doctest::Approx(0.5).epsilon(1e-12));
    std::vector<double> r = {0, 0, 1, 1};
    std::vector<double> s = {0, 1, 1, 1};
    CHECK(wasserstein_1d(r, s) == doctest::Approx(0.25).epsilon(1e-12));
}

TEST_CASE("wasserstein properties on random inputs") {
    std::mt19937_64 rng(11);
    auto sample = [&](std::size_t n) {
        std::vector<double> xs(n);
        for (auto& v : xs) v = static_cast<double>(rng() % 10001) / 10000.0;
        return xs;
    };
    for (int trial = 0; trial < 200; ++trial) {
        const auto a = sample(1 + rng() % 20);
        const auto b = sample(1 + rng() % 20);
        const auto c = sample(1 + rng() % 20);
        const double ab = wasserstein_1d(a, b);
        const double ba = wasserstein_1d(b, a);
        CHECK(ab == doctest::Approx(ba).epsilon(1e-12));
        CHECK(ab >= 0.0);
        // triangle inequality
        CHECK(ab <= wasserstein_1d(a, c) + wasserstein_1d(c, b) + 1e-12);
        // reordering invariance
        auto shuffled = a;
        std::shuffle(shuffled.begin(), shuffled.end(), rng);
        CHECK(wasserstein_1d(shuffled, b) == doctest::Approx(ab).epsilon(1e-12));
    }
}

TEST_CASE("wasserstein routes agree on equal sizes") {
    std::mt19937_64 rng(13);
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t n = 1 + rng() % 30;
        std::vector<double> a(n), b(n);
        for (auto& v : a) v = static_cast<double>(rng() % 10001) / 10000.0;
        for (auto& v : b) v = static_cast<double>(rng() % 10001) / 10000.0;
        CHECK(wasserstein_sorted_diff(a, b) ==
              doctest::Approx(wasserstein_ecdf_integral(a, b)).epsilon(1e-12));
    }
}

TEST_CASE("wasserstein rejects bad input") {
    std::vector<double> empty;
    std::vector<double> ok = {0.5};
    CHECK_THROWS_AS(wasserstein_1d(empty, ok), EmptyInput);
    std::vector<double> off = {1.5};
    CHECK_THROWS_AS(wasserstein_1d(off, ok), OutOfDomain);
}

TEST_CASE("bootstrap baseline degenerate and deterministic") {
    std::vector<double> constant(20, 0.75);
    const auto band = bootstrap_human_baseline(constant, 500, 42);
    CHECK(band.point == 0.0);
    CHECK(band.ci_low == 0.0);
    CHECK(band.ci_high == 0.0);

    std::vector<double> mixed = {0.1, 0.2, 0.3, 0.4, 0.9, 0.8, 0.05, 0.6};
    const auto b1 = bootstrap_human_baseline(mixed, 500, 7);
    const auto b2 = bootstrap_human_baseline(mixed, 500, 7);
    CHECK(b1.point == b2.point);
    CHECK(b1.ci_low == b2.ci_low);
    CHECK(b1.ci_high == b2.ci_high);
    CHECK(b1.ci_low <= b1.point);
    CHECK(b1.point <= b1.ci_high);

    const auto other_seed = bootstrap_human_baseline(mixed, 500, 8);
    CHECK(other_seed.point != b1.point);
}
