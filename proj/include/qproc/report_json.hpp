#pragma once

// JSON views of the report types. Kept apart from the core headers so the
// library itself stays dependency-free; only the CLI and tests pull this in.

#include <json.hpp>

#include "qproc/bounds.hpp"
#include "qproc/census.hpp"
#include "qproc/hitting.hpp"
#include "qproc/oracle.hpp"
#include "qproc/stats.hpp"

namespace qproc {

using OrderedJson = nlohmann::ordered_json;

inline OrderedJson to_json(const MCEstimate& est) {
    return OrderedJson{{"successes", est.successes}, {"trials", est.trials},
                       {"p_hat", est.p_hat},         {"ci_low", est.ci_low},
                       {"ci_high", est.ci_high},     {"z", est.z}};
}

inline OrderedJson to_json(const ComponentCensus& census) {
    OrderedJson j{{"dim", census.spec.d},
                  {"sizes", census.sizes},
                  {"giant_size", census.giant_size},
                  {"isolated", census.isolated},
                  {"mid_components", census.mid_components},
                  {"non_giant_non_isolated", census.non_giant_non_isolated}};
    if (census.min_isolated_hamming)
        j["min_isolated_hamming"] = *census.min_isolated_hamming;
    else
        j["min_isolated_hamming"] = nullptr;
    return j;
}

inline OrderedJson to_json(const PropositionVerdict& verdict) {
    return OrderedJson{{"giant_fraction", verdict.giant_fraction},
                       {"others_all_isolated", verdict.others_all_isolated},
                       {"isolated_pairwise_far", verdict.isolated_pairwise_far},
                       {"threshold", verdict.threshold},
                       {"holds", verdict.holds()}};
}

inline OrderedJson to_json(const SweepReport& report) {
    OrderedJson violations = OrderedJson::array();
    for (const SweepViolation& v : report.violations)
        violations.push_back(OrderedJson{{"subset_mask", v.subset_mask},
                                         {"claimed_bound", v.claimed_bound},
                                         {"actual_value", v.actual_value}});
    return OrderedJson{{"name", report.name},
                       {"dim", report.d},
                       {"subsets_checked", report.subsets_checked},
                       {"violations", violations},
                       {"tight_witnesses", report.tight_witnesses}};
}

inline OrderedJson to_json(const TreeCountReport& report) {
    OrderedJson rows = OrderedJson::array();
    for (const TreeCountRow& row : report.rows)
        rows.push_back(OrderedJson{
            {"k", row.k},
            {"count", row.count},
            {"ed_bound", row.ed_bound},
            {"ed_bound_holds", row.ed_bound_holds},
            {"cayley_expression", row.cayley_expression},
            {"below_cayley_expression", row.below_cayley_expression}});
    return OrderedJson{{"dim", report.d},
                       {"k_max", report.k_max},
                       {"root_independent", report.root_independent},
                       {"rows", rows}};
}

inline OrderedJson to_json(const BoundsReport& report) {
    return OrderedJson{
        {"dim", report.d},
        {"p", report.p},
        {"eps", report.eps},
        {"expected_isolated", report.expected_isolated},
        {"adjacent_isolated_bound", report.adjacent_isolated_bound},
        {"mid_component_bound", report.mid_component_bound},
        {"mid_component_bound_log", report.mid_component_bound_log},
        {"no_isolated_upper_bound", report.no_isolated_upper_bound},
        {"sprinkling_failure_bound", report.sprinkling_failure_bound},
        {"sprinkling_failure_bound_log", report.sprinkling_failure_bound_log}};
}

inline OrderedJson to_json(const ProcessTrace& trace, bool include_order,
                           const std::vector<EdgeId>* order = nullptr) {
    OrderedJson j{{"dim", trace.spec.d},
                  {"tau_d", trace.tau_d},
                  {"tau_c", trace.tau_c},
                  {"order_digest", trace.order_digest},
                  {"provenance",
                   OrderedJson{{"master_seed", trace.master_seed},
                               {"label", trace.label},
                               {"index", trace.index}}}};
    if (include_order && order != nullptr) j["order"] = *order;
    return j;
}

inline OrderedJson to_json(const DominationResult& result) {
    return OrderedJson{{"passed", result.passed},
                       {"worst_t", result.worst_t},
                       {"worst_gap", result.worst_gap}};
}

}  // namespace qproc
