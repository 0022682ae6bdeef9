#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <vector>

#include "qproc/census.hpp"
#include "qproc/cube.hpp"
#include "qproc/sampler.hpp"

namespace qproc {

namespace detail {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// log(sum(exp(term))) over a generated sequence, two passes so nothing is
// stored: first the max exponent, then the shifted sum.
template <typename TermLog>
inline double log_sum_exp(std::uint64_t count, const TermLog& term_log) {
    if (count == 0) return kNegInf;
    double max_log = kNegInf;
    for (std::uint64_t i = 0; i < count; ++i) max_log = std::max(max_log, term_log(i));
    if (max_log == kNegInf) return kNegInf;
    double sum = 0.0;
    for (std::uint64_t i = 0; i < count; ++i) sum += std::exp(term_log(i) - max_log);
    return max_log + std::log(sum);
}

}  // namespace detail

// Expected isolated-vertex count n*(1-p)^d.
inline double expected_isolated(int d, double p) {
    const CubeSpec spec = make_cube(d);
    validate_probability(p, "expected_isolated");
    return std::exp(std::log(static_cast<double>(spec.n)) + d * std::log1p(-p));
}

// Union bound (n*d/2)*(1-p)^(2d-1) on the probability that some edge of Q^d
// has both endpoints isolated.
inline double adjacent_isolated_bound(int d, double p) {
    const CubeSpec spec = make_cube(d);
    validate_probability(p, "adjacent_isolated_bound");
    return std::exp(std::log(static_cast<double>(spec.m)) +
                    (2.0 * d - 1.0) * std::log1p(-p));
}

// Natural log of the union bound sum_{k=2}^{floor(n^(1/3))}
// n*(ed)^(k-1)*(1-p)^(k*(d - 2*log2 k)) on mid-size components. The exponent
// d - 2*log2 k is clamped at 0 where negative (a probability factor cannot
// exceed one). The linear-scale value can overflow a double in weak-bound
// regimes, hence the log form; the plain form below exponentiates it.
inline double mid_component_bound_log(int d, double p) {
    const CubeSpec spec = make_cube(d);
    validate_probability(p, "mid_component_bound");
    if (p == 1.0) return detail::kNegInf;
    const std::uint64_t upper = floor_cbrt(spec.n);
    if (upper < 2) return detail::kNegInf;
    const double log_n = std::log(static_cast<double>(spec.n));
    const double log_ed = 1.0 + std::log(static_cast<double>(d));
    const double log_q = std::log1p(-p);
    return detail::log_sum_exp(upper - 1, [&](std::uint64_t i) {
        const double k = static_cast<double>(i + 2);
        const double exponent = std::max(d - 2.0 * std::log2(k), 0.0);
        return log_n + (k - 1.0) * log_ed + k * exponent * log_q;
    });
}

inline double mid_component_bound(int d, double p) {
    return std::exp(mid_component_bound_log(d, p));
}

// Upper bound (1 - (1-p)^d)^(n/2) on the probability of no isolated vertex.
inline double no_isolated_upper_bound(int d, double p) {
    const CubeSpec spec = make_cube(d);
    validate_probability(p, "no_isolated_upper_bound");
    const double log_q = d * std::log1p(-p);            // log (1-p)^d
    const double log_base = std::log1p(-std::exp(log_q));
    return std::exp(static_cast<double>(spec.n / 2) * log_base);
}

// Natural log of the sprinkling failure sum
// sum_{a=ceil(n^(1/3))}^{floor(n/2)} n^(a/n^(1/3)) * e^(-eps*a/2), with the
// cube root taken as a real number in the exponent. Grows astronomically at
// small d where (ln n)/n^(1/3) > eps/2; see the log form note above.
inline double sprinkling_failure_bound_log(int d, double eps) {
    const CubeSpec spec = make_cube(d);
    if (!(eps > 0.0 && eps < 1.0))
        throw std::invalid_argument("sprinkling_failure_bound: eps must be in (0, 1)");
    const double n = static_cast<double>(spec.n);
    const double cbrt_n = std::cbrt(n);
    const std::uint64_t a_low = static_cast<std::uint64_t>(std::ceil(cbrt_n));
    const std::uint64_t a_high = spec.n / 2;
    if (a_low > a_high) return detail::kNegInf;
    const double rate = std::log(n) / cbrt_n - eps / 2.0;
    return detail::log_sum_exp(a_high - a_low + 1, [&](std::uint64_t i) {
        return static_cast<double>(a_low + i) * rate;
    });
}

inline double sprinkling_failure_bound(int d, double eps) {
    return std::exp(sprinkling_failure_bound_log(d, eps));
}

// Exact Binomial(trials, q) CDF at t via stable log-space term summation.
inline double binomial_cdf(std::uint64_t trials, double q, std::int64_t t) {
    validate_probability(q, "binomial_cdf");
    if (t < 0) throw std::invalid_argument("binomial_cdf: t must be nonnegative");
    if (trials < 1) throw std::invalid_argument("binomial_cdf: trials must be >= 1");
    const std::uint64_t cap = std::min<std::uint64_t>(static_cast<std::uint64_t>(t), trials);
    if (q == 0.0) return 1.0;
    if (q == 1.0) return cap >= trials ? 1.0 : 0.0;
    const double nd = static_cast<double>(trials);
    const double log_q = std::log(q);
    const double log_1q = std::log1p(-q);
    double cdf = 0.0;
    for (std::uint64_t j = 0; j <= cap; ++j) {
        const double jd = static_cast<double>(j);
        const double log_term = std::lgamma(nd + 1.0) - std::lgamma(jd + 1.0) -
                                std::lgamma(nd - jd + 1.0) + jd * log_q +
                                (nd - jd) * log_1q;
        cdf += std::exp(log_term);
    }
    return cdf;
}

// All evaluators at one (d, p, eps) point.
struct BoundsReport {
    int d = 0;
    double p = 0.0;
    double eps = 0.0;
    double expected_isolated = 0.0;
    double adjacent_isolated_bound = 0.0;
    double mid_component_bound = 0.0;
    double mid_component_bound_log = 0.0;
    double no_isolated_upper_bound = 0.0;
    double sprinkling_failure_bound = 0.0;
    double sprinkling_failure_bound_log = 0.0;
};

inline BoundsReport evaluate_bounds(int d, double p, double eps) {
    BoundsReport report;
    report.d = d;
    report.p = p;
    report.eps = eps;
    report.expected_isolated = expected_isolated(d, p);
    report.adjacent_isolated_bound = adjacent_isolated_bound(d, p);
    report.mid_component_bound_log = mid_component_bound_log(d, p);
    report.mid_component_bound = std::exp(report.mid_component_bound_log);
    report.no_isolated_upper_bound = no_isolated_upper_bound(d, p);
    report.sprinkling_failure_bound_log = sprinkling_failure_bound_log(d, eps);
    report.sprinkling_failure_bound = std::exp(report.sprinkling_failure_bound_log);
    return report;
}

}  // namespace qproc
