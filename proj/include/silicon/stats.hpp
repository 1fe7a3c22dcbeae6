#pragma once

// Statistics kernel: Pearson/Spearman correlation with Fisher-z intervals,
// 1-D Wasserstein distance between empirical distributions, and the
// bootstrap human-human distance baseline.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace silicon::stats {

struct LengthMismatch : std::invalid_argument {
    LengthMismatch(std::size_t a, std::size_t b)
        : std::invalid_argument("length mismatch: " + std::to_string(a) +
                                " vs " + std::to_string(b)) {}
};

struct TooFewObservations : std::invalid_argument {
    explicit TooFewObservations(std::size_t n)
        : std::invalid_argument("too few observations: n=" + std::to_string(n)) {}
};

struct ZeroVariance : std::invalid_argument {
    ZeroVariance() : std::invalid_argument("input vector has zero variance") {}
};

struct EmptyInput : std::invalid_argument {
    EmptyInput() : std::invalid_argument("empty input sample") {}
};

struct OutOfDomain : std::invalid_argument {
    explicit OutOfDomain(double v)
        : std::invalid_argument("value outside [0,1]: " + std::to_string(v)) {}
};

struct CorrelationEstimate {
    double r = 0.0;
    int n = 0;
    double ci_low = 0.0;
    double ci_high = 0.0;
    double p_value = 1.0;
};

struct BaselineBand {
    double point = 0.0;
    double ci_low = 0.0;
    double ci_high = 0.0;
    int iterations = 0;
    std::uint64_t seed = 0;
};

namespace detail {

// Regularized incomplete beta I_x(a,b) by continued fraction (Lentz).
inline double betacf(double a, double b, double x) {
    constexpr int kMaxIter = 200;
    constexpr double kEps = 3.0e-15;
    constexpr double kFpMin = 1.0e-300;
    const double qab = a + b, qap = a + 1.0, qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::fabs(d) < kFpMin) d = kFpMin;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= kMaxIter; ++m) {
        const int m2 = 2 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < kFpMin) d = kFpMin;
        c = 1.0 + aa / c;
        if (std::fabs(c) < kFpMin) c = kFpMin;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < kFpMin) d = kFpMin;
        c = 1.0 + aa / c;
        if (std::fabs(c) < kFpMin) c = kFpMin;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::fabs(del - 1.0) < kEps) break;
    }
    return h;
}

inline double ibeta(double a, double b, double x) {
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;
    const double ln_bt = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                         a * std::log(x) + b * std::log1p(-x);
    const double bt = std::exp(ln_bt);
    if (x < (a + 1.0) / (a + b + 2.0))
        return bt * betacf(a, b, x) / a;
    return 1.0 - bt * betacf(b, a, 1.0 - x) / b;
}

// Two-sided p for a t statistic with df degrees of freedom.
inline double t_two_sided_p(double t, double df) {
    if (!std::isfinite(t)) return 0.0;
    return ibeta(df / 2.0, 0.5, df / (df + t * t));
}

inline void require_unit_interval(std::span<const double> xs) {
    for (double v : xs)
        if (!(v >= 0.0 && v <= 1.0)) throw OutOfDomain(v);
}

// Linear-interpolation percentile over a sorted vector, q in [0,1].
inline double percentile_sorted(const std::vector<double>& sorted, double q) {
    if (sorted.empty()) throw EmptyInput();
    const double pos = q * static_cast<double>(sorted.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const auto hi = static_cast<std::size_t>(std::ceil(pos));
    if (lo == hi) return sorted[lo];
    const double frac = pos - static_cast<double>(lo);
    return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

// Average ranks with ties sharing the mean rank.
inline std::vector<double> average_ranks(std::span<const double> xs) {
    const std::size_t n = xs.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return xs[a] < xs[b]; });
    std::vector<double> ranks(n);
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        while (j + 1 < n && xs[order[j + 1]] == xs[order[i]]) ++j;
        const double mean_rank = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
        for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = mean_rank;
        i = j + 1;
    }
    return ranks;
}

}  // namespace detail

// Fisher z-transform confidence interval for a correlation.
inline std::pair<double, double> fisher_z_interval(double r, int n,
                                                   double confidence = 0.95) {
    if (n < 4) throw TooFewObservations(static_cast<std::size_t>(n));
    // Normal quantile for the two-sided confidence level.
    const double alpha = 1.0 - confidence;
    // Inverse normal CDF via Acklam-style rational approximation is overkill;
    // the only levels used are standard, but keep it general with erf inversion
    // by bisection on the standard normal CDF.
    auto norm_cdf = [](double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); };
    double lo = 0.0, hi = 10.0;
    const double target = 1.0 - alpha / 2.0;
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        (norm_cdf(mid) < target ? lo : hi) = mid;
    }
    const double z_crit = 0.5 * (lo + hi);
    const double z = std::atanh(r);
    const double se = 1.0 / std::sqrt(static_cast<double>(n) - 3.0);
    return {std::tanh(z - z_crit * se), std::tanh(z + z_crit * se)};
}

inline CorrelationEstimate pearson(std::span<const double> x,
                                   std::span<const double> y,
                                   double confidence = 0.95) {
    if (x.size() != y.size()) throw LengthMismatch(x.size(), y.size());
    const std::size_t n = x.size();
    if (n < 3) throw TooFewObservations(n);
    const double nd = static_cast<double>(n);
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= nd;
    my /= nd;
    double sxx = 0.0, syy = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double dx = x[i] - mx, dy = y[i] - my;
        sxx += dx * dx;
        syy += dy * dy;
        sxy += dx * dy;
    }
    if (sxx == 0.0 || syy == 0.0) throw ZeroVariance();
    double r = sxy / std::sqrt(sxx * syy);
    r = std::clamp(r, -1.0, 1.0);

    CorrelationEstimate est;
    est.r = r;
    est.n = static_cast<int>(n);
    if (n >= 4 && std::fabs(r) < 1.0) {
        auto [lo, hi] = fisher_z_interval(r, est.n, confidence);
        est.ci_low = lo;
        est.ci_high = hi;
        const double df = nd - 2.0;
        const double t = r * std::sqrt(df / (1.0 - r * r));
        est.p_value = detail::t_two_sided_p(t, df);
    } else {
        est.ci_low = est.ci_high = r;
        est.p_value = (std::fabs(r) >= 1.0) ? 0.0 : 1.0;
    }
    return est;
}

inline CorrelationEstimate spearman(std::span<const double> x,
                                    std::span<const double> y,
                                    double confidence = 0.95) {
    if (x.size() != y.size()) throw LengthMismatch(x.size(), y.size());
    const auto rx = detail::average_ranks(x);
    const auto ry = detail::average_ranks(y);
    return pearson(rx, ry, confidence);
}

// W1 between two equal-size empirical distributions: mean absolute
// difference of the sorted samples.
inline double wasserstein_sorted_diff(std::span<const double> a,
                                      std::span<const double> b) {
    if (a.empty() || b.empty()) throw EmptyInput();
    if (a.size() != b.size()) throw LengthMismatch(a.size(), b.size());
    std::vector<double> sa(a.begin(), a.end()), sb(b.begin(), b.end());
    std::sort(sa.begin(), sa.end());
    std::sort(sb.begin(), sb.end());
    double acc = 0.0;
    for (std::size_t i = 0; i < sa.size(); ++i) acc += std::fabs(sa[i] - sb[i]);
    return acc / static_cast<double>(sa.size());
}

// W1 as the integral of |ECDF_a - ECDF_b| over the merged breakpoints;
// works for unequal sample sizes.
inline double wasserstein_ecdf_integral(std::span<const double> a,
                                        std::span<const double> b) {
    if (a.empty() || b.empty()) throw EmptyInput();
    std::vector<double> sa(a.begin(), a.end()), sb(b.begin(), b.end());
    std::sort(sa.begin(), sa.end());
    std::sort(sb.begin(), sb.end());
    std::vector<double> points;
    points.reserve(sa.size() + sb.size());
    std::merge(sa.begin(), sa.end(), sb.begin(), sb.end(),
               std::back_inserter(points));
    const double na = static_cast<double>(sa.size());
    const double nb = static_cast<double>(sb.size());
    double total = 0.0;
    std::size_t ia = 0, ib = 0;
    for (std::size_t k = 0; k + 1 < points.size(); ++k) {
        while (ia < sa.size() && sa[ia] <= points[k]) ++ia;
        while (ib < sb.size() && sb[ib] <= points[k]) ++ib;
        const double width = points[k + 1] - points[k];
        if (width > 0.0) {
            const double fa = static_cast<double>(ia) / na;
            const double fb = static_cast<double>(ib) / nb;
            total += std::fabs(fa - fb) * width;
        }
    }
    return total;
}

// W1 on the normalized [0,1] score scale. Uses the sorted-difference
// shortcut for equal sizes, ECDF integration otherwise.
inline double wasserstein_1d(std::span<const double> a,
                             std::span<const double> b) {
    if (a.empty() || b.empty()) throw EmptyInput();
    detail::require_unit_interval(a);
    detail::require_unit_interval(b);
    if (a.size() == b.size()) return wasserstein_sorted_diff(a, b);
    return wasserstein_ecdf_integral(a, b);
}

// Human-human distance band: B iterations, each drawing two independent
// with-replacement resamples of the full sample and recording their W1.
// Point is the mean; band is the 2.5th/97.5th percentile.
inline BaselineBand bootstrap_human_baseline(std::span<const double> scores,
                                             int iterations = 2000,
                                             std::uint64_t seed = 0) {
    if (scores.size() < 2) throw EmptyInput();
    if (iterations < 1) throw TooFewObservations(0);
    detail::require_unit_interval(scores);
    const std::size_t n = scores.size();
    std::mt19937_64 rng(seed);
    std::vector<double> distances(static_cast<std::size_t>(iterations));
    std::vector<double> ra(n), rb(n);
    for (auto& d : distances) {
        for (std::size_t i = 0; i < n; ++i) ra[i] = scores[rng() % n];
        for (std::size_t i = 0; i < n; ++i) rb[i] = scores[rng() % n];
        d = wasserstein_sorted_diff(ra, rb);
    }
    BaselineBand band;
    band.iterations = iterations;
    band.seed = seed;
    band.point = std::accumulate(distances.begin(), distances.end(), 0.0) /
                 static_cast<double>(iterations);
    std::sort(distances.begin(), distances.end());
    band.ci_low = detail::percentile_sorted(distances, 0.025);
    band.ci_high = detail::percentile_sorted(distances, 0.975);
    return band;
}

}  // namespace silicon::stats
