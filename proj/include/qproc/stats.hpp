#pragma once

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <mutex>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "qproc/bounds.hpp"
#include "qproc/rng.hpp"

namespace qproc {

struct ConfidenceInterval {
    double low = 0.0;
    double high = 1.0;
};

// Wilson score interval; stable at extreme proportions.
inline ConfidenceInterval wilson_interval(std::uint64_t successes,
                                          std::uint64_t trials, double z) {
    if (trials < 1) throw std::invalid_argument("wilson_interval: trials must be >= 1");
    if (successes > trials)
        throw std::invalid_argument("wilson_interval: successes exceed trials");
    if (!(z > 0.0)) throw std::invalid_argument("wilson_interval: z must be positive");
    const double n = static_cast<double>(trials);
    const double p_hat = static_cast<double>(successes) / n;
    const double z2 = z * z;
    const double denom = 1.0 + z2 / n;
    const double center = (p_hat + z2 / (2.0 * n)) / denom;
    const double half =
        z * std::sqrt(p_hat * (1.0 - p_hat) / n + z2 / (4.0 * n * n)) / denom;
    return {std::max(center - half, 0.0), std::min(center + half, 1.0)};
}

// A Monte Carlo proportion with its provenance: re-running with the same
// (master_seed, label, trials) reproduces it bit for bit, regardless of the
// worker count.
struct MCEstimate {
    std::uint64_t successes = 0;
    std::uint64_t trials = 0;
    double p_hat = 0.0;
    double ci_low = 0.0;
    double ci_high = 1.0;
    double z = 1.96;
    std::uint64_t master_seed = 0;
    std::string label;
};

namespace detail {

// Runs fn(index, stream) over [0, trials) split into contiguous chunks, one
// worker thread per chunk. Trial i always sees the stream derived from index
// i, so scheduling cannot leak into results. The first trial that throws
// aborts the run and is reported by index.
template <typename Fn>
inline void parallel_trials(std::uint64_t trials, std::uint64_t master_seed,
                            std::string_view label, unsigned workers, const Fn& fn) {
    if (trials < 1) throw std::invalid_argument("parallel_trials: trials must be >= 1");
    if (workers < 1) throw std::invalid_argument("parallel_trials: workers must be >= 1");
    workers = static_cast<unsigned>(
        std::min<std::uint64_t>(workers, trials));

    std::atomic<std::uint64_t> failed_index{UINT64_MAX};
    std::string first_error;
    std::mutex error_mutex;

    auto run_range = [&](std::uint64_t begin, std::uint64_t end) {
        for (std::uint64_t i = begin; i < end; ++i) {
            if (failed_index.load(std::memory_order_relaxed) != UINT64_MAX) return;
            try {
                RngStream stream = derive_stream(master_seed, label, i);
                fn(i, stream);
            } catch (const std::exception& e) {
                std::uint64_t expected = UINT64_MAX;
                if (failed_index.compare_exchange_strong(expected, i)) {
                    std::lock_guard<std::mutex> lock(error_mutex);
                    first_error = e.what();
                }
                return;
            }
        }
    };

    if (workers == 1) {
        run_range(0, trials);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(workers);
        const std::uint64_t chunk = (trials + workers - 1) / workers;
        for (unsigned w = 0; w < workers; ++w) {
            const std::uint64_t begin = std::min<std::uint64_t>(w * chunk, trials);
            const std::uint64_t end = std::min<std::uint64_t>(begin + chunk, trials);
            if (begin < end) pool.emplace_back(run_range, begin, end);
        }
        for (std::thread& t : pool) t.join();
    }

    const std::uint64_t failed = failed_index.load();
    if (failed != UINT64_MAX)
        throw std::runtime_error("trial " + std::to_string(failed) +
                                 " failed: " + first_error);
}

}  // namespace detail

// Estimate P[trial succeeds] over `trials` independent streams.
template <typename Trial>
inline MCEstimate mc_estimate(const Trial& trial, std::uint64_t trials,
                              std::uint64_t master_seed, std::string_view label,
                              unsigned workers = 1, double z = 1.96) {
    std::atomic<std::uint64_t> successes{0};
    detail::parallel_trials(trials, master_seed, label, workers,
                            [&](std::uint64_t, RngStream& stream) {
                                if (trial(stream))
                                    successes.fetch_add(1, std::memory_order_relaxed);
                            });
    MCEstimate est;
    est.successes = successes.load();
    est.trials = trials;
    est.p_hat = static_cast<double>(est.successes) / static_cast<double>(trials);
    const ConfidenceInterval ci = wilson_interval(est.successes, trials, z);
    est.ci_low = ci.low;
    est.ci_high = ci.high;
    est.z = z;
    est.master_seed = master_seed;
    est.label.assign(label);
    return est;
}

// Collect one payload per trial into an index-ordered buffer.
template <typename T, typename Trial>
inline std::vector<T> mc_collect(const Trial& trial, std::uint64_t trials,
                                 std::uint64_t master_seed, std::string_view label,
                                 unsigned workers = 1) {
    std::vector<T> results(trials);
    detail::parallel_trials(trials, master_seed, label, workers,
                            [&](std::uint64_t i, RngStream& stream) {
                                results[i] = trial(stream);
                            });
    return results;
}

// Pearson statistic sum (obs - exp)^2 / exp. The caller must merge bins
// until every expected count is positive (and sensibly >= 5).
inline double chi_square_statistic(std::span<const std::uint64_t> observed,
                                   std::span<const double> expected) {
    if (observed.size() != expected.size() || observed.size() < 2)
        throw std::invalid_argument("chi_square_statistic: need >= 2 equally sized bins");
    double stat = 0.0;
    for (std::size_t i = 0; i < observed.size(); ++i) {
        if (!(expected[i] > 0.0))
            throw std::invalid_argument("chi_square_statistic: expected counts must be > 0");
        const double diff = static_cast<double>(observed[i]) - expected[i];
        stat += diff * diff / expected[i];
    }
    return stat;
}

namespace detail {

// Upper critical values of the chi-square distribution, df = 1..64.
inline constexpr std::array<double, 64> kChiSquareCrit01 = {
    6.63489660102121, 9.21034037197618, 11.3448667301444, 13.2767041359876,
    15.086272469389, 16.8118938297709, 18.4753069065824, 20.0902350296632,
    21.6659943334619, 23.2092511589544, 24.7249703113183, 26.2169673055359,
    27.688249610457, 29.1412377406728, 30.5779141668925, 31.9999269088152,
    33.4086636050046, 34.8053057347051, 36.19086912927, 37.5662347866251,
    38.9321726835161, 40.2893604375939, 41.6383981188585, 42.9798201393517,
    44.3141048962191, 45.6416826662832, 46.9629421247514, 48.2782357703155,
    49.5878844728988, 50.8921813115171, 52.1913948331919, 53.4857718362354,
    54.7755397601103, 56.0609087477891, 57.3420734338592, 58.6192145016871,
    59.8925000450869, 61.1620867636897, 62.4281210161849, 63.6907397515645,
    64.9500713352112, 66.2062362839932, 67.4593479223258, 68.7095129693454,
    69.9568320658381, 71.2014002483115, 72.4433073765482, 73.6826385201057,
    74.9194743084782, 76.1538912490127, 77.3859620161374, 78.6157557150025,
    79.8433381222515, 81.0687719062971, 82.2921168291997, 83.5134299319895,
    84.7327657050639, 85.9501762451033, 87.1657113997876, 88.3794189014494,
    89.5913444906871, 90.8015320308387, 92.0100236141321, 93.2168596602384};

inline constexpr std::array<double, 64> kChiSquareCrit001 = {
    10.8275661706627, 13.8155105579643, 16.2662361962381, 18.4668269529032,
    20.5150056524329, 22.4577444848253, 24.3218863478569, 26.1244815583761,
    27.8771648712566, 29.5882984450744, 31.26413362024, 32.9094904073602,
    34.5281789748709, 36.1232736803981, 37.6972982183538, 39.2523547907685,
    40.7902167069025, 42.31239633168, 43.8201959645175, 45.3147466181259,
    46.7970380415613, 48.2679422908352, 49.7282324664315, 51.1785977773774,
    52.6196557761728, 54.0519623885766, 55.4760202057452, 56.8922853933536,
    58.3011734897949, 59.7030643044299, 61.0983060810581, 62.4872190570885,
    63.8700985223449, 65.2472174609424, 66.618828843701, 67.9851676260242,
    69.3464524962412, 70.702887411505, 72.0546629519878, 73.401957518991,
    74.7449383984237, 76.0837627077, 77.4185782413139, 78.749524228043,
    80.076732010819, 81.40032565871, 82.720422519124, 84.0371337172235,
    85.350564608593, 86.6608151904032, 87.9679804756287, 89.2721508343045,
    90.5734123052986, 91.8718468816601, 93.1675327722285, 94.4605446418781,
    95.7509538324896, 97.0388285665088, 98.3242341347416, 99.6072330698495,
    100.887885306858, 102.166248331849, 103.442377319873, 104.716325263041};

}  // namespace detail

// Hard-coded critical value at significance alpha in {0.01, 0.001},
// df in [1, 64].
inline double chi_square_critical(unsigned df, double alpha) {
    if (df < 1 || df > 64)
        throw std::invalid_argument("chi_square_critical: df must be in [1, 64]");
    if (alpha == 0.01) return detail::kChiSquareCrit01[df - 1];
    if (alpha == 0.001) return detail::kChiSquareCrit001[df - 1];
    throw std::invalid_argument("chi_square_critical: alpha must be 0.01 or 0.001");
}

// Empirical-vs-binomial stochastic domination: passes when the empirical CDF
// of the samples never rises above the Binomial(n0, q) CDF by more than
// `slack`. With slack 0 and finite sample sizes a fail is legitimate, so the
// worst offending point is always reported.
struct DominationResult {
    bool passed = false;
    std::int64_t worst_t = -1;
    double worst_gap = 0.0;  // max over t of empirical_cdf(t) - binomial_cdf(t)
};

inline DominationResult domination_check(std::span<const std::uint64_t> samples,
                                         std::uint64_t n0, double q, double slack) {
    if (samples.empty())
        throw std::invalid_argument("domination_check: samples must be nonempty");
    if (slack < 0.0) throw std::invalid_argument("domination_check: slack must be >= 0");
    const std::uint64_t max_sample = *std::max_element(samples.begin(), samples.end());
    std::vector<std::uint64_t> counts(max_sample + 1, 0);
    for (std::uint64_t s : samples) ++counts[s];

    DominationResult result;
    result.passed = true;
    std::uint64_t cumulative = 0;
    const double total = static_cast<double>(samples.size());
    for (std::uint64_t t = 0; t <= max_sample; ++t) {
        cumulative += counts[t];
        const double empirical = static_cast<double>(cumulative) / total;
        const double reference = binomial_cdf(n0, q, static_cast<std::int64_t>(t));
        const double gap = empirical - reference;
        if (gap > result.worst_gap) {
            result.worst_gap = gap;
            result.worst_t = static_cast<std::int64_t>(t);
        }
        if (gap > slack) result.passed = false;
    }
    return result;
}

}  // namespace qproc
