#pragma once

// JSON views of the library's result types. Keys are emitted sorted
// (nlohmann::json stores objects in std::map), so identical inputs give
// byte-identical documents.

#include <cmath>
#include <string>
#include <vector>

#include <json.hpp>

#include "hgc/container.hpp"
#include "hgc/hfree.hpp"
#include "hgc/oracle.hpp"

namespace hgc {

using Json = nlohmann::json;

inline constexpr const char* kVersion = "0.1.0";

inline Json to_json(const Rational& q) { return q.str(); }

/// Finite doubles as numbers, everything else as a string ("inf", "nan").
inline Json number(double x) {
    if (std::isfinite(x)) return x;
    return std::isnan(x) ? "nan" : (x > 0 ? "inf" : "-inf");
}

inline Json to_json(const VertexSet& s) { return s.to_vector(); }

inline Json to_json(const MeasureValue& m) {
    return Json{{"num", m.num}, {"den", m.den}, {"value", m.value().str()}};
}

inline Json to_json(const ContainerParams& p) {
    Json pj = Json::array();
    for (double x : p.p_by_j) pj.push_back(number(x));
    return Json{{"r", p.r},
                {"d", p.d.str()},
                {"u", number(p.u)},
                {"q", number(p.q)},
                {"p_by_j", pj},
                {"alpha", number(p.alpha)},
                {"measure_threshold", p.measure_threshold.str()},
                {"vacuous", p.vacuous}};
}

inline Json to_json(const StepOutcome& s) {
    return Json{{"fingerprint", s.fingerprint.str()},
                {"container", to_json(s.container)},
                {"gamma_measure", to_json(s.gamma_measure)},
                {"accepted", s.accepted},
                {"attempts", s.attempts},
                {"size_cap", number(s.size_cap)}};
}

inline Json to_json(const IterationTrace& t) {
    Json levels = Json::array();
    for (const auto& l : t.levels) levels.push_back(to_json(l));
    Json degrees = Json::array();
    for (const auto& d : t.level_degrees) degrees.push_back(d.str());
    return Json{{"levels", levels},
                {"edge_counts", t.edge_counts},
                {"level_degrees", degrees},
                {"final_container", to_json(t.final_container)},
                {"final_edge_count", t.final_edge_count},
                {"delta", t.delta.str()},
                {"k_bound", t.k_bound},
                {"succeeded", t.succeeded},
                {"within_bound", t.within_bound}};
}

inline Json to_json(const CollectionReport& c, bool with_traces = false) {
    Json containers = Json::array();
    for (const auto& s : c.containers) containers.push_back(to_json(s));
    Json coverage = Json::array();
    for (const auto& idx : c.coverage) coverage.push_back(idx ? Json(*idx) : Json(nullptr));
    Json out{{"containers", containers},
             {"container_edges", c.container_edges},
             {"coverage", coverage},
             {"collection_size", c.containers.size()},
             {"failures", c.failures},
             {"max_edge_fraction", c.max_edge_fraction.str()},
             {"delta", c.delta.str()},
             {"k_bound", c.k_bound},
             {"params", to_json(c.top_params)},
             {"bounds",
              {{"beta", number(c.beta)},
               {"log2_bound", number(c.bound_log2)},
               {"log2_collection_size", c.containers.empty() ? 0.0 : std::log2(static_cast<double>(c.containers.size()))},
               {"vacuous", c.bound_vacuous}}},
             {"seed", c.seed},
             {"budget", c.budget}};
    if (with_traces) {
        Json traces = Json::array();
        for (const auto& t : c.traces) traces.push_back(to_json(t));
        out["traces"] = traces;
    }
    return out;
}

inline Json to_json(const CoverageReport& r) {
    Json witnesses = Json::array();
    for (const auto& s : r.uncovered) witnesses.push_back(s.to_list());
    return Json{{"checked", r.checked},
                {"uncovered_count", r.uncovered_count},
                {"uncovered", witnesses},
                {"container_hits", r.container_hits},
                {"truncated", r.truncated}};
}

inline Json to_json(const HfreeCensus& c) {
    return Json{{"count", c.count},
                {"ex", c.extremal},
                {"slots", c.slots},
                {"log2_count_per_slot", number(c.log2_density)},
                {"pi_hat", c.pi_hat.str()},
                {"pi_hat_is_proxy", true}};
}

inline Json to_json(const SimplifiedHypergraph& s) {
    return Json{{"p", number(s.p)},
                {"p_formula", number(s.p_formula)},
                {"regime_invalid", s.regime_invalid},
                {"rho", number(s.rho)},
                {"rho_prime", number(s.rho_prime)},
                {"base_edges", s.base_edges},
                {"base_overlapping_pairs", s.base_overlaps},
                {"expected_edges", number(s.expected_edges)},
                {"expected_overlapping_pairs", number(s.expected_overlaps)},
                {"sampled_edges", s.sampled_edges},
                {"sampled_overlapping_pairs", s.sampled_overlaps},
                {"event_a", s.event_a},
                {"event_b", s.event_b},
                {"first_attempt_a", s.first_attempt_a},
                {"first_attempt_b", s.first_attempt_b},
                {"attempts", s.attempts},
                {"removed_edges", s.removed_edges.size()},
                {"simple_edges", s.graph.edge_count()},
                {"average_degree", number(s.average_degree)},
                {"degree_target", number(s.degree_target)},
                {"meets_degree_target", s.average_degree >= s.degree_target}};
}

inline Json to_json(const PipelineReport& r) {
    Json containers = Json::array();
    for (const auto& c : r.containers) {
        Json cj{{"ell_sets", to_json(c.graph)},
                {"edges", c.edges},
                {"copies", c.copies},
                {"simple_copies", c.simple_copies},
                {"copies_below_eps_bound", c.copies_below_eps}};
        cj["edges_below_turan_bound"] = c.edges_below_turan ? Json(*c.edges_below_turan) : Json(nullptr);
        containers.push_back(cj);
    }
    Json out{{"pattern", {{"ell", r.pattern.ell}, {"v", r.pattern.vertex_count}, {"e", r.pattern.edge_count()}}},
             {"N", r.n_points},
             {"epsilon", number(r.epsilon)},
             {"delta", r.delta.str()},
             {"eta", r.eta.str()},
             {"sigma", r.sigma.str()},
             {"m_H", r.m_density.str()},
             {"copy_hypergraph", {{"vertices", r.copy_vertices}, {"edges", r.copy_edges}}},
             {"simplified", to_json(r.simplified)},
             {"collection", to_json(r.collection)},
             {"containers", containers},
             {"family_size", r.family_size},
             {"family_truncated", r.family_truncated},
             {"bounds",
              {{"eps_copy_bound", number(r.eps_copy_bound)},
               {"beta", number(r.beta)},
               {"beta_log2_bound", number(r.beta_bound_log2)},
               {"beta_bound_vacuous", r.beta_bound_vacuous},
               {"log_collection_exponent", number(r.nls_exponent)},
               {"log_collection_bound", number(r.nls_bound)},
               {"log_collection_bound_vacuous", r.nls_bound_vacuous},
               {"log2_collection_size", number(r.log2_collection_size)}}},
             {"consequence_check",
              {{"checked", r.consequence_checks},
               {"premise_held", r.consequence_premises},
               {"violations", r.consequence_violations}}},
             {"warnings", r.warnings}};
    out["census"] = r.census ? to_json(*r.census) : Json(nullptr);
    out["coverage"] = r.coverage ? to_json(*r.coverage) : Json(nullptr);
    return out;
}

inline Json to_json(const SparseTuranReport& r) {
    Json maxima = Json::array();
    for (const auto& row : r.rows) maxima.push_back(row.max_hfree);
    return Json{{"N", r.n_points},
                {"p", number(r.p)},
                {"gamma", number(r.gamma)},
                {"trials", r.trials},
                {"seed", r.seed},
                {"census", to_json(r.census)},
                {"threshold", number(r.threshold)},
                {"failure_bound", number(r.failure_bound)},
                {"exceedances", r.exceedances},
                {"exceedance_rate", number(r.exceedance_rate)},
                {"sigma", number(r.sigma)},
                {"p_over_N_minus_sigma", number(r.p_over_n_minus_sigma)},
                {"maxima", maxima}};
}

inline std::string sparse_turan_csv(const SparseTuranReport& r) {
    std::string out = "trial,sampled_edges,max_hfree,threshold,exceeds\n";
    for (std::size_t t = 0; t < r.rows.size(); ++t) {
        const auto& row = r.rows[t];
        out += std::to_string(t) + "," + std::to_string(row.sampled_edges) + "," + std::to_string(row.max_hfree) + "," +
               Json(r.threshold).dump() + "," + (row.exceeds ? "1" : "0") + "\n";
    }
    return out;
}

}  // namespace hgc
