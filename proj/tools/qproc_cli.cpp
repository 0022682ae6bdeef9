// qproc: batch experiments and verifications on the random hypercube
// process, emitting JSON or CSV reports with full seed provenance.
//
// Reports are byte-reproducible: the same command line with the same --seed
// emits identical bytes no matter how many workers run the trials. Wall
// clock timing therefore goes to stderr; the duration_ms field in the JSON
// envelope is 0 unless --timing is given.

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qproc/bounds.hpp"
#include "qproc/census.hpp"
#include "qproc/hitting.hpp"
#include "qproc/oracle.hpp"
#include "qproc/report_json.hpp"
#include "qproc/sampler.hpp"
#include "qproc/stats.hpp"
#include "qproc/version.hpp"

namespace {

using qproc::OrderedJson;

constexpr int kExitVerificationFailure = 1;
constexpr int kExitUsage = 2;

struct CommonOpts {
    int dim = 0;
    double p = 0.5;
    double epsilon = 0.05;
    std::uint64_t trials = 1000;
    std::uint64_t seed = 0;
    unsigned workers = 1;
    std::string format = "json";
    std::string out;  // empty = stdout
    bool exact = false;
    bool timing = false;
    double threshold = 0.99;
    std::uint64_t index = 0;
    bool emit_order = false;
    double z = 1.96;
};

void require_nonzero_seed(std::uint64_t seed) {
    if (seed == 0)
        throw std::invalid_argument(
            "--seed 0 is rejected as ambiguous; pick a nonzero master seed");
}


using Clock = std::chrono::steady_clock;

// 0 unless --timing was given: reports stay byte-identical by default.
std::uint64_t measured_ms(const CommonOpts& opts, Clock::time_point started) {
    if (!opts.timing) return 0;
    return static_cast<std::uint64_t>(
        std::chrono::duration_cast<std::chrono::milliseconds>(Clock::now() - started)
            .count());
}

void emit(const std::string& out_path, const std::string& text) {
    if (out_path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream f(out_path, std::ios::binary);
    if (!f) throw std::invalid_argument("cannot open output file: " + out_path);
    f << text;
}

OrderedJson envelope(const std::string& command, OrderedJson config,
                     OrderedJson result, const OrderedJson& seed,
                     const std::string& label, std::uint64_t duration_ms) {
    return OrderedJson{{"version", std::string(qproc::kVersion)},
                       {"command", command},
                       {"config", std::move(config)},
                       {"result", std::move(result)},
                       {"provenance", OrderedJson{{"seed", seed}, {"label", label}}},
                       {"duration_ms", duration_ms}};
}

std::string csv_field(const std::string& raw) {
    if (raw.find_first_of(",\"\r\n") == std::string::npos) return raw;
    std::string quoted = "\"";
    for (char c : raw) {
        if (c == '"') quoted += '"';
        quoted += c;
    }
    quoted += '"';
    return quoted;
}

std::string csv_num(double v) {
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

std::string csv_row(const std::vector<std::string>& fields) {
    std::string row;
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i) row += ',';
        row += csv_field(fields[i]);
    }
    row += '\n';
    return row;
}

// Single-row CSV for the Monte Carlo commands.
std::string estimate_csv(const CommonOpts& opts, const std::string& command,
                         const qproc::MCEstimate& est) {
    std::string text = csv_row({"command", "dim", "p", "trials", "seed", "workers",
                                "successes", "p_hat", "ci_low", "ci_high"});
    text += csv_row({command, std::to_string(opts.dim), csv_num(opts.p),
                     std::to_string(est.trials), std::to_string(opts.seed),
                     std::to_string(opts.workers), std::to_string(est.successes),
                     csv_num(est.p_hat), csv_num(est.ci_low), csv_num(est.ci_high)});
    return text;
}

std::string render(const OrderedJson& doc) { return doc.dump(2) + "\n"; }

int run_hitting(const CommonOpts& opts, Clock::time_point started) {
    require_nonzero_seed(opts.seed);
    const qproc::CubeSpec spec = qproc::make_cube(opts.dim);
    const auto est = qproc::mc_estimate(
        [&spec](qproc::RngStream& rng) { return qproc::hitting_equality_trial(spec, rng); },
        opts.trials, opts.seed, "hitting", opts.workers, opts.z);

    if (opts.format == "csv") {
        emit(opts.out, estimate_csv(opts, "hitting", est));
        return 0;
    }
    OrderedJson config{{"dim", opts.dim},         {"trials", opts.trials},
                       {"seed", opts.seed},       {"workers", opts.workers},
                       {"z", opts.z},             {"format", opts.format},
                       {"out", opts.out}};
    emit(opts.out, render(envelope("hitting", config,
                                   OrderedJson{{"estimate", qproc::to_json(est)}},
                                   opts.seed, "hitting", measured_ms(opts, started))));
    return 0;
}

int run_connectivity(const CommonOpts& opts, Clock::time_point started) {
    OrderedJson config{{"dim", opts.dim},   {"p", opts.p},
                       {"exact", opts.exact}, {"format", opts.format},
                       {"out", opts.out}};
    if (opts.exact) {
        const double probability = qproc::exact_connectivity_probability(opts.dim, opts.p);
        if (opts.format == "csv") {
            std::string text = csv_row({"command", "dim", "p", "method", "probability"});
            text += csv_row({"connectivity", std::to_string(opts.dim), csv_num(opts.p),
                             "exact", csv_num(probability)});
            emit(opts.out, text);
            return 0;
        }
        emit(opts.out,
             render(envelope("connectivity", config,
                             OrderedJson{{"method", "exact"}, {"probability", probability}},
                             nullptr, "connectivity", measured_ms(opts, started))));
        return 0;
    }

    require_nonzero_seed(opts.seed);
    const qproc::CubeSpec spec = qproc::make_cube(opts.dim);
    const double p = opts.p;
    const auto est = qproc::mc_estimate(
        [&spec, p](qproc::RngStream& rng) {
            const qproc::SubgraphSample sample = qproc::bernoulli_subgraph(spec, p, rng);
            return qproc::is_connected(spec, sample);
        },
        opts.trials, opts.seed, "connectivity", opts.workers, opts.z);

    if (opts.format == "csv") {
        emit(opts.out, estimate_csv(opts, "connectivity", est));
        return 0;
    }
    config["trials"] = opts.trials;
    config["seed"] = opts.seed;
    config["workers"] = opts.workers;
    config["z"] = opts.z;
    emit(opts.out, render(envelope("connectivity", config,
                                   OrderedJson{{"method", "monte_carlo"},
                                               {"estimate", qproc::to_json(est)}},
                                   opts.seed, "connectivity", measured_ms(opts, started))));
    return 0;
}

int run_census(const CommonOpts& opts, Clock::time_point started) {
    require_nonzero_seed(opts.seed);
    const qproc::CubeSpec spec = qproc::make_cube(opts.dim);
    if (!(opts.threshold > 0.0 && opts.threshold <= 1.0))
        throw std::invalid_argument("--threshold must be in (0, 1]");

    struct TrialOutcome {
        bool holds;
        bool others_all_isolated;
        bool isolated_pairwise_far;
        double giant_fraction;
        std::uint64_t isolated_count;
        std::uint64_t mid_components;
    };
    const double p = opts.p;
    const double threshold = opts.threshold;
    const auto outcomes = qproc::mc_collect<TrialOutcome>(
        [&spec, p, threshold](qproc::RngStream& rng) {
            const qproc::SubgraphSample sample = qproc::bernoulli_subgraph(spec, p, rng);
            const qproc::ComponentCensus census = qproc::components(spec, sample);
            const qproc::PropositionVerdict verdict =
                qproc::proposition_verdict(census, threshold);
            return TrialOutcome{verdict.holds(),
                                verdict.others_all_isolated,
                                verdict.isolated_pairwise_far,
                                verdict.giant_fraction,
                                census.isolated.size(),
                                census.mid_components};
        },
        opts.trials, opts.seed, "census", opts.workers);

    std::uint64_t holds = 0, others_ok = 0, far_ok = 0, mid_trials = 0;
    double min_giant_fraction = 1.0;
    std::uint64_t max_isolated = 0;
    for (const TrialOutcome& t : outcomes) {
        holds += t.holds;
        others_ok += t.others_all_isolated;
        far_ok += t.isolated_pairwise_far;
        mid_trials += t.mid_components > 0;
        min_giant_fraction = std::min(min_giant_fraction, t.giant_fraction);
        max_isolated = std::max(max_isolated, t.isolated_count);
    }
    qproc::MCEstimate est;
    est.successes = holds;
    est.trials = opts.trials;
    est.p_hat = static_cast<double>(holds) / static_cast<double>(opts.trials);
    const auto ci = qproc::wilson_interval(holds, opts.trials, opts.z);
    est.ci_low = ci.low;
    est.ci_high = ci.high;
    est.z = opts.z;
    est.master_seed = opts.seed;
    est.label = "census";

    if (opts.format == "csv") {
        emit(opts.out, estimate_csv(opts, "census", est));
        return 0;
    }
    OrderedJson config{{"dim", opts.dim},       {"p", opts.p},
                       {"threshold", opts.threshold}, {"trials", opts.trials},
                       {"seed", opts.seed},     {"workers", opts.workers},
                       {"z", opts.z},           {"format", opts.format},
                       {"out", opts.out}};
    OrderedJson result{
        {"verdict_rate", qproc::to_json(est)},
        {"trials_others_all_isolated", others_ok},
        {"trials_isolated_pairwise_far", far_ok},
        {"trials_with_mid_components", mid_trials},
        {"min_giant_fraction", min_giant_fraction},
        {"max_isolated_count", max_isolated}};
    emit(opts.out, render(envelope("census", config, result, opts.seed, "census", measured_ms(opts, started))));
    return 0;
}

int run_process_cmd(const CommonOpts& opts, Clock::time_point started) {
    require_nonzero_seed(opts.seed);
    const qproc::CubeSpec spec = qproc::make_cube(opts.dim);
    qproc::RngStream rng = qproc::derive_stream(opts.seed, "process", opts.index);
    const qproc::ProcessOrder order = qproc::process_order(spec, rng);
    const qproc::ProcessTrace trace = qproc::run_process(
        spec, order,
        qproc::StreamProvenance{opts.seed, "process", opts.index});

    if (opts.format == "csv")
        throw std::invalid_argument("process: only json output is supported");
    OrderedJson config{{"dim", opts.dim},   {"seed", opts.seed},
                       {"index", opts.index}, {"emit_order", opts.emit_order},
                       {"format", opts.format}, {"out", opts.out}};
    emit(opts.out,
         render(envelope("process", config,
                         qproc::to_json(trace, opts.emit_order, &order.order),
                         opts.seed, "process", measured_ms(opts, started))));
    return 0;
}

int run_verify(const CommonOpts& opts, Clock::time_point started) {
    if (opts.dim < 1 || opts.dim > 4)
        throw std::invalid_argument("verify: --dim must be in [1, 4] (exhaustive sweeps)");
    if (opts.format == "csv")
        throw std::invalid_argument("verify: only json output is supported");

    const qproc::SweepReport small = qproc::verify_harper_small(opts.dim);
    const qproc::SweepReport big = qproc::verify_harper_big(opts.dim);
    const qproc::SweepReport mindeg = qproc::verify_min_degree_size(opts.dim);
    const qproc::TreeCountReport trees = qproc::tree_count_report(opts.dim, 6);

    const std::uint64_t violations =
        small.violations.size() + big.violations.size() + mindeg.violations.size();
    const bool ok = violations == 0 && trees.all_bounds_hold();

    OrderedJson config{{"dim", opts.dim}, {"format", opts.format}, {"out", opts.out}};
    OrderedJson result{{"sweeps", OrderedJson::array({qproc::to_json(small),
                                                      qproc::to_json(big),
                                                      qproc::to_json(mindeg)})},
                       {"trees", qproc::to_json(trees)},
                       {"total_violations", violations},
                       {"ok", ok}};
    emit(opts.out, render(envelope("verify", config, result, nullptr, "verify", measured_ms(opts, started))));
    return ok ? 0 : kExitVerificationFailure;
}

int run_bounds(const CommonOpts& opts, Clock::time_point started,
               const std::vector<int>& dims, const std::vector<double>& ps) {
    if (dims.empty() || ps.empty())
        throw std::invalid_argument("bounds: provide at least one --dim and one --p");

    std::vector<qproc::BoundsReport> grid;
    for (int d : dims)
        for (double p : ps) grid.push_back(qproc::evaluate_bounds(d, p, opts.epsilon));

    if (opts.format == "csv") {
        std::string text = csv_row(
            {"dim", "p", "eps", "expected_isolated", "adjacent_isolated_bound",
             "mid_component_bound", "mid_component_bound_log", "no_isolated_upper_bound",
             "sprinkling_failure_bound", "sprinkling_failure_bound_log"});
        for (const auto& r : grid)
            text += csv_row({std::to_string(r.d), csv_num(r.p), csv_num(r.eps),
                             csv_num(r.expected_isolated),
                             csv_num(r.adjacent_isolated_bound),
                             csv_num(r.mid_component_bound),
                             csv_num(r.mid_component_bound_log),
                             csv_num(r.no_isolated_upper_bound),
                             csv_num(r.sprinkling_failure_bound),
                             csv_num(r.sprinkling_failure_bound_log)});
        emit(opts.out, text);
        return 0;
    }
    OrderedJson points = OrderedJson::array();
    for (const auto& r : grid) points.push_back(qproc::to_json(r));
    OrderedJson config{{"dims", dims},
                       {"ps", ps},
                       {"epsilon", opts.epsilon},
                       {"format", opts.format},
                       {"out", opts.out}};
    emit(opts.out, render(envelope("bounds", config, OrderedJson{{"grid", points}},
                                   nullptr, "bounds", measured_ms(opts, started))));
    return 0;
}

int run_tworound(const CommonOpts& opts, Clock::time_point started) {
    require_nonzero_seed(opts.seed);
    if (opts.dim > 6)
        throw std::invalid_argument(
            "tworound: --dim must be <= 6 (edge-count chi-square needs df <= 64)");
    if (opts.format == "csv")
        throw std::invalid_argument("tworound: only json output is supported");
    const qproc::CubeSpec spec = qproc::make_cube(opts.dim);
    const qproc::SplitProbabilities split =
        qproc::split_probabilities(opts.p, opts.epsilon);

    std::vector<std::atomic<std::uint64_t>> edge_hits(spec.m);
    std::vector<std::atomic<std::uint64_t>> count_hist(spec.m + 1);
    const double p = opts.p;
    const double eps = opts.epsilon;
    qproc::detail::parallel_trials(
        opts.trials, opts.seed, "tworound", opts.workers,
        [&](std::uint64_t, qproc::RngStream& rng) {
            const qproc::TwoRoundSample sample = qproc::two_round_union(spec, p, eps, rng);
            std::uint64_t total = 0;
            for (qproc::EdgeId e = 0; e < spec.m; ++e)
                if (sample.combined.edges.test(e)) {
                    edge_hits[e].fetch_add(1, std::memory_order_relaxed);
                    ++total;
                }
            count_hist[total].fetch_add(1, std::memory_order_relaxed);
        });

    const double trials_d = static_cast<double>(opts.trials);
    double max_abs_deviation = 0.0;
    OrderedJson per_edge = OrderedJson::array();
    for (qproc::EdgeId e = 0; e < spec.m; ++e) {
        const double freq = static_cast<double>(edge_hits[e].load()) / trials_d;
        max_abs_deviation = std::max(max_abs_deviation, std::abs(freq - opts.p));
        per_edge.push_back(freq);
    }

    // Merge histogram bins until every expected count reaches 5, then test
    // the union's edge-count distribution against Binomial(m, p).
    std::vector<std::uint64_t> observed;
    std::vector<double> expected;
    {
        std::uint64_t obs_acc = 0;
        double exp_acc = 0.0;
        for (std::uint64_t t = 0; t <= spec.m; ++t) {
            const double pmf =
                std::exp(std::lgamma(static_cast<double>(spec.m) + 1.0) -
                         std::lgamma(static_cast<double>(t) + 1.0) -
                         std::lgamma(static_cast<double>(spec.m - t) + 1.0) +
                         (opts.p > 0 ? static_cast<double>(t) * std::log(opts.p) : (t ? -INFINITY : 0.0)) +
                         (opts.p < 1 ? static_cast<double>(spec.m - t) * std::log1p(-opts.p)
                                     : (t < spec.m ? -INFINITY : 0.0)));
            obs_acc += count_hist[t].load();
            exp_acc += pmf * trials_d;
            if (exp_acc >= 5.0) {
                observed.push_back(obs_acc);
                expected.push_back(exp_acc);
                obs_acc = 0;
                exp_acc = 0.0;
            }
        }
        if (exp_acc > 0.0 || obs_acc > 0) {
            if (expected.empty())
                throw std::invalid_argument("tworound: too few trials for the chi-square test");
            observed.back() += obs_acc;
            expected.back() += exp_acc;
        }
    }
    const double stat = qproc::chi_square_statistic(observed, expected);
    const unsigned df = static_cast<unsigned>(observed.size() - 1);
    const double critical = qproc::chi_square_critical(df, 0.001);
    const bool chi_square_ok = stat < critical;

    OrderedJson config{{"dim", opts.dim},     {"p", opts.p},
                       {"epsilon", opts.epsilon}, {"trials", opts.trials},
                       {"seed", opts.seed},   {"workers", opts.workers},
                       {"format", opts.format}, {"out", opts.out}};
    OrderedJson result{{"p1", split.p1},
                       {"p2", split.p2},
                       {"max_abs_deviation", max_abs_deviation},
                       {"chi_square_statistic", stat},
                       {"chi_square_df", df},
                       {"chi_square_critical_alpha_0_001", critical},
                       {"chi_square_ok", chi_square_ok}};
    if (spec.m <= 64) result["per_edge_frequency"] = per_edge;
    emit(opts.out,
         render(envelope("tworound", config, result, opts.seed, "tworound", measured_ms(opts, started))));
    return chi_square_ok ? 0 : kExitVerificationFailure;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"hypercube percolation process laboratory"};
    app.require_subcommand(1);

    CommonOpts opts;
    std::vector<int> bounds_dims;
    std::vector<double> bounds_ps;

    auto* hitting = app.add_subcommand(
        "hitting", "Monte Carlo estimate of P[tau_D = tau_C] for the edge process");
    hitting->add_option("--dim", opts.dim, "cube dimension")->required();
    hitting->add_option("--trials", opts.trials, "number of trials");
    hitting->add_option("--seed", opts.seed, "master seed (nonzero)")->required();
    hitting->add_option("--workers", opts.workers, "worker threads");
    hitting->add_option("--z", opts.z, "Wilson z (default 1.96)");
    hitting->add_option("--format", opts.format, "json|csv")
        ->check(CLI::IsMember({"json", "csv"}));
    hitting->add_option("--out", opts.out, "output path (default stdout)");
    hitting->add_flag("--timing", opts.timing, "embed measured duration_ms");

    auto* connectivity = app.add_subcommand(
        "connectivity", "P[Q^d_p connected]: exact for d <= 3 or Monte Carlo");
    connectivity->add_option("--dim", opts.dim, "cube dimension")->required();
    connectivity->add_option("--p", opts.p, "edge probability")->required();
    connectivity->add_flag("--exact", opts.exact, "exhaustive 2^m oracle (d <= 3)");
    connectivity->add_option("--trials", opts.trials, "number of trials");
    connectivity->add_option("--seed", opts.seed, "master seed (nonzero)");
    connectivity->add_option("--workers", opts.workers, "worker threads");
    connectivity->add_option("--z", opts.z, "Wilson z (default 1.96)");
    connectivity->add_option("--format", opts.format, "json|csv")
        ->check(CLI::IsMember({"json", "csv"}));
    connectivity->add_option("--out", opts.out, "output path (default stdout)");
    connectivity->add_flag("--timing", opts.timing, "embed measured duration_ms");

    auto* census = app.add_subcommand(
        "census", "component-structure verdict rates over seeded samples");
    census->add_option("--dim", opts.dim, "cube dimension")->required();
    census->add_option("--p", opts.p, "edge probability")->required();
    census->add_option("--threshold", opts.threshold, "giant-fraction threshold");
    census->add_option("--trials", opts.trials, "number of samples");
    census->add_option("--seed", opts.seed, "master seed (nonzero)")->required();
    census->add_option("--workers", opts.workers, "worker threads");
    census->add_option("--z", opts.z, "Wilson z (default 1.96)");
    census->add_option("--format", opts.format, "json|csv")
        ->check(CLI::IsMember({"json", "csv"}));
    census->add_option("--out", opts.out, "output path (default stdout)");
    census->add_flag("--timing", opts.timing, "embed measured duration_ms");

    auto* process = app.add_subcommand("process", "dump one seeded process trace");
    process->add_option("--dim", opts.dim, "cube dimension")->required();
    process->add_option("--seed", opts.seed, "master seed (nonzero)")->required();
    process->add_option("--index", opts.index, "trial index (default 0)");
    process->add_flag("--emit-order", opts.emit_order, "include the full edge order");
    process->add_option("--out", opts.out, "output path (default stdout)");
    process->add_flag("--timing", opts.timing, "embed measured duration_ms");

    auto* verify = app.add_subcommand(
        "verify", "exhaustive lemma sweeps and tree-count bounds (d <= 4)");
    verify->add_option("--dim", opts.dim, "cube dimension (1..4)")->required();
    verify->add_option("--out", opts.out, "output path (default stdout)");
    verify->add_flag("--timing", opts.timing, "embed measured duration_ms");

    auto* bounds = app.add_subcommand(
        "bounds", "closed-form bound evaluators over a (dim, p) grid");
    bounds->add_option("--dim", bounds_dims, "cube dimension (repeatable)")->required();
    bounds->add_option("--p", bounds_ps, "edge probability (repeatable)")->required();
    bounds->add_option("--epsilon", opts.epsilon, "sprinkling epsilon");
    bounds->add_option("--format", opts.format, "json|csv")
        ->check(CLI::IsMember({"json", "csv"}));
    bounds->add_option("--out", opts.out, "output path (default stdout)");
    bounds->add_flag("--timing", opts.timing, "embed measured duration_ms");

    auto* tworound = app.add_subcommand(
        "tworound", "two-round exposure distribution tests");
    tworound->add_option("--dim", opts.dim, "cube dimension (<= 6)")->required();
    tworound->add_option("--p", opts.p, "target edge probability")->required();
    tworound->add_option("--epsilon", opts.epsilon, "second-round probability");
    tworound->add_option("--trials", opts.trials, "number of trials");
    tworound->add_option("--seed", opts.seed, "master seed (nonzero)")->required();
    tworound->add_option("--workers", opts.workers, "worker threads");
    tworound->add_option("--out", opts.out, "output path (default stdout)");
    tworound->add_flag("--timing", opts.timing, "embed measured duration_ms");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    const auto started = std::chrono::steady_clock::now();
    int status = 0;
    try {
        if (hitting->parsed()) status = run_hitting(opts, started);
        else if (connectivity->parsed()) status = run_connectivity(opts, started);
        else if (census->parsed()) status = run_census(opts, started);
        else if (process->parsed()) status = run_process_cmd(opts, started);
        else if (verify->parsed()) status = run_verify(opts, started);
        else if (bounds->parsed()) status = run_bounds(opts, started, bounds_dims, bounds_ps);
        else if (tworound->parsed()) status = run_tworound(opts, started);
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitVerificationFailure;
    }
    const auto elapsed = std::chrono::duration_cast<std::chrono::milliseconds>(
                             std::chrono::steady_clock::now() - started)
                             .count();
    std::cerr << "completed in " << elapsed << " ms\n";
    return status;
}
