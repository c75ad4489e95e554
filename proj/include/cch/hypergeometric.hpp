#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <vector>

#include "cch/random.hpp"
#include "cch/types.hpp"

namespace cch {

namespace detail {

inline double log_binomial(std::uint64_t n, std::uint64_t k) {
    if (k > n) return -std::numeric_limits<double>::infinity();
    return std::lgamma(static_cast<double>(n) + 1.0) - std::lgamma(static_cast<double>(k) + 1.0) -
           std::lgamma(static_cast<double>(n - k) + 1.0);
}

}  // namespace detail

// Hypergeometric pmf: probability of k successes in n draws without
// replacement from a population of size N containing K successes.
inline double hypergeometric_pmf(std::uint64_t k, std::uint64_t n, std::uint64_t K,
                                 std::uint64_t N) {
    if (k > n || k > K || n - k > N - K) return 0.0;
    return std::exp(detail::log_binomial(K, k) + detail::log_binomial(N - K, n - k) -
                    detail::log_binomial(N, n));
}

// Exact inverse-transform sampler. Consumes one uniform variate; enumerates
// outcomes outward from the mode with ratio recurrences, so the expected
// number of steps is O(standard deviation) rather than O(n).
inline std::uint64_t hypergeometric_sample(Rng& rng, std::uint64_t n, std::uint64_t K,
                                           std::uint64_t N) {
    if (n > N) throw InternalError("hypergeometric_sample: more draws than population");
    const std::uint64_t lo_support = n + K > N ? n + K - N : 0;
    const std::uint64_t hi_support = std::min(n, K);
    if (lo_support == hi_support) return lo_support;

    std::uint64_t mode = static_cast<std::uint64_t>(
        (static_cast<double>(n) + 1.0) * (static_cast<double>(K) + 1.0) /
        (static_cast<double>(N) + 2.0));
    mode = std::max(lo_support, std::min(mode, hi_support));

    const double u = uniform_unit(rng);
    const double nd = static_cast<double>(n), Kd = static_cast<double>(K),
                 Nd = static_cast<double>(N);
    const auto ratio_up = [&](double k) {  // pmf(k+1) / pmf(k)
        return (nd - k) * (Kd - k) / ((k + 1.0) * (Nd - Kd - nd + k + 1.0));
    };

    const double mode_pmf = hypergeometric_pmf(mode, n, K, N);
    double cumulative = mode_pmf;
    if (u < cumulative) return mode;
    std::uint64_t hi = mode, lo = mode;
    double hi_pmf = mode_pmf, lo_pmf = mode_pmf;
    while (hi < hi_support || lo > lo_support) {
        if (hi < hi_support) {
            hi_pmf *= ratio_up(static_cast<double>(hi));
            ++hi;
            cumulative += hi_pmf;
            if (u < cumulative) return hi;
        }
        if (lo > lo_support) {
            lo_pmf /= ratio_up(static_cast<double>(lo) - 1.0);
            --lo;
            cumulative += lo_pmf;
            if (u < cumulative) return lo;
        }
    }
    // u landed in the floating-point tail; return the heavier end.
    return hi_pmf >= lo_pmf ? hi : lo;
}

// Multivariate hypergeometric split: draws n balls without replacement from
// an urn with counts[i] balls of type i, as a chain of univariate draws on
// the conditional remainder. The output sums to n; a violation of that
// conservation is an internal error, checked on every call.
inline std::vector<std::uint64_t> mv_hypergeom(Rng& rng, std::uint64_t n,
                                               std::span<const std::uint64_t> counts) {
    std::uint64_t population = 0;
    for (std::uint64_t c : counts) population += c;
    if (n > population) throw InternalError("mv_hypergeom: more draws than population");
    std::vector<std::uint64_t> result(counts.size(), 0);
    std::uint64_t remaining_draws = n;
    std::uint64_t remaining_population = population;
    for (std::size_t i = 0; i < counts.size(); ++i) {
        if (remaining_draws == 0) break;
        const std::uint64_t draw =
            i + 1 == counts.size()
                ? remaining_draws
                : hypergeometric_sample(rng, remaining_draws, counts[i], remaining_population);
        result[i] = draw;
        remaining_draws -= draw;
        remaining_population -= counts[i];
    }
    std::uint64_t total = 0;
    for (std::size_t i = 0; i < counts.size(); ++i) {
        if (result[i] > counts[i]) throw InternalError("mv_hypergeom: category overdrawn");
        total += result[i];
    }
    if (total != n) throw InternalError("mv_hypergeom: draw count not conserved");
    return result;
}

}  // namespace cch
