#pragma once

#include <array>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "hgc/error.hpp"
#include "hgc/hypergraph.hpp"
#include "hgc/parallel.hpp"
#include "hgc/random.hpp"
#include "hgc/rational.hpp"
#include "hgc/vertex_set.hpp"

namespace hgc {

/// Constants of one container step for an r-graph of average degree d.
struct ContainerParams {
    std::size_t r = 2;
    Rational d{1};
    double u = 0;
    double q = 0;
    std::vector<double> p_by_j;  // sampling probability for each j in [0, r-1]
    double alpha = 0;            // exponent of the 2^{alpha n} collection-size bound
    Rational measure_threshold{1};
    /// q >= 1: the size caps and the collection-size bound say nothing.
    bool vacuous = false;

    /// Integer cap ceil(q*n) on |R|, |S| and |T|.
    double size_cap(std::size_t n) const { return std::ceil(q * static_cast<double>(n)); }
    double sampling_probability(std::size_t j) const { return std::min(1.0, p_by_j.at(j)); }
};

inline ContainerParams compute_params(std::size_t r, const Rational& d) {
    if (r < 2) throw InputError("uniformity r must be at least 2");
    if (d <= Rational(0)) throw InputError("average degree must be positive, got " + d.str());
    const double rr = static_cast<double>(r);
    const double dd = d.to_double();

    ContainerParams p;
    p.r = r;
    p.d = d;
    p.u = std::pow(6.0 * rr / dd, 1.0 / (2.0 * (rr - 1.0))) / std::sqrt(3.0 * rr);
    p.q = 15.0 * rr * p.u;
    p.p_by_j.resize(r);
    for (std::size_t j = 0; j < r; ++j)
        p.p_by_j[j] = std::pow(6.0 * rr / (dd * std::pow(p.u, static_cast<double>(j))), 1.0 / (rr - 1.0));
    p.alpha = std::pow(1.0 / dd, 1.0 / (2.0 * rr - 1.0));
    p.measure_threshold = Rational(1, static_cast<std::int64_t>(4 * r * r));
    p.vacuous = p.q >= 1.0;
    return p;
}

using ParamsPolicy = std::function<ContainerParams(std::size_t r, const Rational& d)>;

inline ParamsPolicy default_params_policy() { return compute_params; }

// ---------------------------------------------------------------------------

/// Vertices v lying in an edge {v} + f + g with f a j-subset of R and g an
/// (r-j-1)-subset of S, the three parts disjoint.
inline VertexSet gamma(const Hypergraph& g, std::size_t j, const VertexSet& r_set, const VertexSet& s_set) {
    const std::size_t r = g.uniformity();
    if (j >= r) throw InputError("j must be in [0, r-1], got " + std::to_string(j));
    require_subset(g, r_set, "gamma(R)");
    require_subset(g, s_set, "gamma(S)");

    VertexSet out(g.label_count());
    std::vector<char> seen(g.edge_count(), 0);
    std::vector<std::uint8_t> cls(r);
    // Every qualifying edge has r-1 >= 1 vertices in R or S, so scanning the
    // incidence lists of R and S reaches all of them.
    auto scan = [&](Vertex w) {
        for (auto ei : g.incident(w)) {
            if (seen[ei]) continue;
            seen[ei] = 1;
            const auto e = g.edge(ei);
            // class per vertex: 0 neither, 1 R only, 2 S only, 3 both
            std::size_t total[4] = {0, 0, 0, 0};
            for (std::size_t k = 0; k < r; ++k) {
                cls[k] = static_cast<std::uint8_t>((r_set.contains(e[k]) ? 1 : 0) | (s_set.contains(e[k]) ? 2 : 0));
                ++total[cls[k]];
            }
            for (std::size_t k = 0; k < r; ++k) {
                std::size_t rest[4] = {total[0], total[1], total[2], total[3]};
                --rest[cls[k]];
                if (rest[0] != 0) continue;
                // R-only vertices must go to f, S-only to g; shared ones fill either.
                if (rest[1] <= j && j <= rest[1] + rest[3]) out.insert(e[k]);
            }
        }
    };
    r_set.for_each(scan);
    s_set.for_each(scan);
    return out;
}

/// The certificate (j, R, S, T) that determines a container.
struct Fingerprint {
    std::size_t j = 0;
    VertexSet r_set;
    VertexSet s_set;
    VertexSet t_set;

    friend bool operator==(const Fingerprint&, const Fingerprint&) = default;

    /// `j=<int>; R=<list>; S=<list>; T=<list>`
    std::string str() const {
        return "j=" + std::to_string(j) + "; R=" + r_set.to_list() + "; S=" + s_set.to_list() +
               "; T=" + t_set.to_list();
    }

    static Fingerprint parse(std::size_t n, std::string_view text) {
        auto take = [&](std::string_view key, bool last) -> std::string_view {
            if (text.substr(0, key.size()) != key) throw InputError("fingerprint: expected '" + std::string(key) + "'");
            text.remove_prefix(key.size());
            if (last) return text;
            const auto sep = text.find("; ");
            if (sep == std::string_view::npos) throw InputError("fingerprint: missing '; ' separator");
            const auto field = text.substr(0, sep);
            text.remove_prefix(sep + 2);
            return field;
        };
        Fingerprint fp;
        const auto jtext = take("j=", false);
        std::size_t j = 0;
        auto [ptr, ec] = std::from_chars(jtext.data(), jtext.data() + jtext.size(), j);
        if (jtext.empty() || ec != std::errc{} || ptr != jtext.data() + jtext.size())
            throw InputError("fingerprint: bad j '" + std::string(jtext) + "'");
        fp.j = j;
        fp.r_set = VertexSet::parse_list(n, take("R=", false));
        fp.s_set = VertexSet::parse_list(n, take("S=", false));
        fp.t_set = VertexSet::parse_list(n, take("T=", true));
        return fp;
    }
};

/// mu(X) >= 1/(4r^2), compared exactly.
inline bool meets_threshold(const MeasureValue& m, std::size_t r) {
    return m.compare(1, 4 * static_cast<std::uint64_t>(r) * r) >= 0;
}

/// Rebuilds the container V \ (Gamma_j(R,S) \ T), or the empty set when the
/// removed part has measure below 1/(4r^2).
inline VertexSet container_from_fingerprint(const Hypergraph& g, const Fingerprint& fp,
                                            MeasureValue* removed_measure = nullptr) {
    const VertexSet removed = gamma(g, fp.j, fp.r_set, fp.s_set) - fp.t_set;
    const MeasureValue m = degree_measure(g, removed);
    if (removed_measure) *removed_measure = m;
    if (!meets_threshold(m, g.uniformity())) return VertexSet(g.label_count());
    return g.universe() - removed;
}

struct StepOutcome {
    Fingerprint fingerprint;
    VertexSet container;
    MeasureValue gamma_measure;  // mu(Gamma_j(R,S) \ T)
    bool accepted = false;
    std::size_t attempts = 0;
    double size_cap = 0;
};

struct StepOptions {
    std::size_t budget = 64;
    /// Iteration level, part of the random-draw coordinates.
    std::uint32_t level = 0;
};

namespace detail {

/// One container step without precondition checks.
inline StepOutcome fingerprint_step(const Hypergraph& g, const VertexSet& independent, const ContainerParams& params,
                                    const CounterRng& rng, const StepOptions& opt) {
    const std::size_t r = g.uniformity();
    const std::size_t n = g.label_count();
    const VertexSet outside = g.universe() - independent;

    StepOutcome best;
    bool have_best = false;
    for (std::size_t attempt = 0; attempt < opt.budget; ++attempt) {
        const std::size_t j = attempt % r;
        const double p = params.sampling_probability(j);
        const auto a = static_cast<std::uint32_t>(attempt);
        const auto jj = static_cast<std::uint32_t>(j);

        Fingerprint fp{j, VertexSet(n), VertexSet(n), VertexSet(n)};
        independent.for_each([&](Vertex v) {
            if (rng.bernoulli(p, opt.level, a, jj, v)) fp.r_set.insert(v);
        });
        outside.for_each([&](Vertex v) {
            if (rng.bernoulli(p, opt.level, a, jj, v)) fp.s_set.insert(v);
        });
        const VertexSet gam = gamma(g, j, fp.r_set, fp.s_set);
        fp.t_set = gam & independent;
        const MeasureValue m = degree_measure(g, gam - fp.t_set);

        const double cap = params.size_cap(g.order());
        const bool small = static_cast<double>(fp.r_set.count()) <= cap &&
                           static_cast<double>(fp.s_set.count()) <= cap &&
                           static_cast<double>(fp.t_set.count()) <= cap;
        const bool accepted = small && meets_threshold(m, r);

        if (accepted || !have_best || m > best.gamma_measure) {
            best.fingerprint = std::move(fp);
            best.gamma_measure = m;
            best.accepted = accepted;
            best.size_cap = cap;
            have_best = true;
        }
        best.attempts = attempt + 1;
        if (accepted) break;
    }
    best.container = container_from_fingerprint(g, best.fingerprint);
    if (!best.container.empty() && !independent.is_subset_of(best.container))
        throw InvariantViolation("container does not contain its independent set");
    return best;
}

inline void require_independent(const Hypergraph& g, const VertexSet& s, const std::string& what) {
    require_subset(g, s, what.c_str());
    if (const auto res = is_independent(g, s); !res.independent)
        throw InputError(what + " is not independent (contains edge " + std::to_string(*res.witness_edge) + ")");
}

inline void require_simple(const Hypergraph& g) {
    if (const auto res = is_simple(g); !res.simple)
        throw NotSimpleError("hypergraph is not simple: edges " + std::to_string(res.witness->first) + " and " +
                                 std::to_string(res.witness->second) + " share two or more vertices",
                             res.witness->first, res.witness->second);
}

}  // namespace detail

/// One randomized container step for the independent set `independent`.
///
/// Attempts cycle j through 0..r-1; each samples R from I and S from V \ I
/// with probability p_j, sets T = Gamma_j(R,S) & I and accepts when
/// |R|,|S|,|T| <= ceil(qn) and mu(Gamma_j(R,S) \ T) >= 1/(4r^2). When the
/// budget runs out the attempt with the largest removed measure is returned
/// unaccepted.
inline StepOutcome fingerprint_independent_set(const Hypergraph& g, const VertexSet& independent,
                                               const ContainerParams& params, const CounterRng& rng,
                                               const StepOptions& opt = {}) {
    if (opt.budget < 1) throw InputError("retry budget must be at least 1");
    if (params.r != g.uniformity()) throw InputError("parameters were computed for a different uniformity");
    detail::require_independent(g, independent, "independent set");
    detail::require_simple(g);
    if (g.edge_count() == 0) throw UndefinedMeasure("container step needs at least one edge");
    return detail::fingerprint_step(g, independent, params, rng, opt);
}

// ---------------------------------------------------------------------------

/// Upper bound on the number of iteration levels: ceil(log delta / log(1 - 1/4r^2)) + 1.
inline std::size_t level_bound(std::size_t r, const Rational& delta) {
    const double shrink = 1.0 - 1.0 / (4.0 * static_cast<double>(r * r));
    return static_cast<std::size_t>(std::ceil(std::log(delta.to_double()) / std::log(shrink))) + 1;
}

struct IterationTrace {
    std::vector<StepOutcome> levels;
    std::vector<std::size_t> edge_counts;  // e(G[C_t]) for t = 0..levels.size() (last entry is the final container)
    std::vector<Rational> level_degrees;   // average degree of G[C_t] used for each level's parameters
    VertexSet final_container;
    std::size_t final_edge_count = 0;
    Rational delta;
    std::size_t k_bound = 0;
    bool succeeded = false;
    bool within_bound = false;
};

inline void require_delta(const Rational& delta) {
    if (!(delta > Rational(0) && delta < Rational(1)))
        throw InputError("delta must satisfy 0 < delta < 1, got " + delta.str());
}

namespace detail {

inline IterationTrace iterate(const Hypergraph& g, const VertexSet& independent, const Rational& delta,
                              const ParamsPolicy& policy, const CounterRng& rng, std::size_t budget) {
    IterationTrace trace;
    trace.delta = delta;
    trace.k_bound = level_bound(g.uniformity(), delta);
    const auto total = static_cast<__int128>(g.edge_count());
    const std::size_t r = g.uniformity();

    VertexSet current = g.universe();
    std::size_t current_edges = g.edge_count();
    trace.edge_counts.push_back(current_edges);
    for (std::uint32_t level = 0;; ++level) {
        // e(G[C]) < delta e(G), exactly
        if (static_cast<__int128>(current_edges) * delta.den() < static_cast<__int128>(delta.num()) * total) {
            trace.succeeded = true;
            break;
        }
        const Hypergraph sub = g.induced(current);
        const Rational d = sub.average_degree();
        trace.level_degrees.push_back(d);
        StepOutcome step = fingerprint_step(sub, independent, policy(r, d), rng, {budget, level});
        const bool ok = step.accepted;
        const VertexSet next = step.container & current;
        trace.levels.push_back(std::move(step));
        if (!ok) break;

        const std::size_t next_edges = g.induced_edge_count(next);
        // e(G[C_{t+1}]) <= (1 - 1/4r^2) e(G[C_t]) follows from the measure bound.
        if (static_cast<__int128>(next_edges) * (4 * r * r) > static_cast<__int128>(current_edges) * (4 * r * r - 1))
            throw InvariantViolation("accepted level did not shrink the edge count by 1 - 1/4r^2");
        current = next;
        current_edges = next_edges;
        trace.edge_counts.push_back(current_edges);
    }
    trace.final_container = current;
    trace.final_edge_count = current_edges;
    trace.within_bound = trace.levels.size() <= trace.k_bound;
    return trace;
}

}  // namespace detail

/// Applies the container step to G, then to G[C], and so on until the
/// container spans fewer than delta*e(G) edges or a step is not accepted.
inline IterationTrace iterate_containers(const Hypergraph& g, const VertexSet& independent, const Rational& delta,
                                         const CounterRng& rng, std::size_t budget = 64,
                                         const ParamsPolicy& policy = default_params_policy()) {
    require_delta(delta);
    if (budget < 1) throw InputError("retry budget must be at least 1");
    detail::require_independent(g, independent, "independent set");
    detail::require_simple(g);
    if (g.edge_count() == 0) throw UndefinedMeasure("container iteration needs at least one edge");
    return detail::iterate(g, independent, delta, policy, rng, budget);
}

// ---------------------------------------------------------------------------

struct CollectionOptions {
    std::uint64_t seed = 0;
    std::size_t budget = 64;
    std::size_t threads = 1;
    ParamsPolicy policy = default_params_policy();
    bool keep_traces = true;
};

struct CollectionReport {
    std::vector<VertexSet> containers;                  // deduplicated, in order of first appearance
    std::vector<std::optional<std::size_t>> coverage;   // family index -> container index (nullopt on failure)
    std::vector<IterationTrace> traces;                 // one per family member when kept
    std::vector<std::size_t> container_edges;           // e(G[C]) per container
    std::size_t failures = 0;
    Rational max_edge_fraction{0};
    Rational delta;
    std::size_t k_bound = 0;
    ContainerParams top_params;
    double beta = 0;          // (1/d)^{1/(2r-1)}
    double bound_log2 = 0;    // beta * n
    bool bound_vacuous = false;
    std::uint64_t seed = 0;
    std::size_t budget = 0;
};

/// Stream tag for per-member randomness in a collection.
inline constexpr std::uint32_t kFamilyStream = 0x46414d31;  // "FAM1"

inline CollectionReport build_collection(const Hypergraph& g, const std::vector<VertexSet>& family,
                                         const Rational& delta, const CollectionOptions& opt = {}) {
    require_delta(delta);
    if (opt.budget < 1) throw InputError("retry budget must be at least 1");
    detail::require_simple(g);
    if (g.edge_count() == 0) throw UndefinedMeasure("container collection needs at least one edge");
    for (std::size_t i = 0; i < family.size(); ++i)
        detail::require_independent(g, family[i], "family member " + std::to_string(i));

    const CounterRng root(opt.seed);
    std::vector<IterationTrace> traces(family.size());
    parallel_for(family.size(), opt.threads, [&](std::size_t i) {
        traces[i] = detail::iterate(g, family[i], delta, opt.policy,
                                    root.derive(kFamilyStream, static_cast<std::uint32_t>(i)), opt.budget);
    });

    CollectionReport rep;
    rep.delta = delta;
    rep.k_bound = level_bound(g.uniformity(), delta);
    rep.seed = opt.seed;
    rep.budget = opt.budget;
    rep.top_params = opt.policy(g.uniformity(), g.average_degree());
    const double dd = g.average_degree().to_double();
    rep.beta = std::pow(1.0 / dd, 1.0 / (2.0 * static_cast<double>(g.uniformity()) - 1.0));
    rep.bound_log2 = rep.beta * static_cast<double>(g.order());
    rep.bound_vacuous = rep.beta >= 1.0;

    std::map<VertexSet, std::size_t> index;
    for (std::size_t i = 0; i < family.size(); ++i) {
        const auto& t = traces[i];
        if (!t.succeeded) {
            ++rep.failures;
            rep.coverage.emplace_back(std::nullopt);
            continue;
        }
        auto [it, inserted] = index.try_emplace(t.final_container, rep.containers.size());
        if (inserted) {
            rep.containers.push_back(t.final_container);
            rep.container_edges.push_back(t.final_edge_count);
            const Rational frac(static_cast<std::int64_t>(t.final_edge_count), static_cast<std::int64_t>(g.edge_count()));
            if (frac > rep.max_edge_fraction) rep.max_edge_fraction = frac;
        }
        rep.coverage.emplace_back(it->second);
    }
    if (opt.keep_traces) rep.traces = std::move(traces);
    return rep;
}

// ---------------------------------------------------------------------------

/// Intermediate quantities of the container step for a given independent set
/// I, level j and witness set A containing I.
struct ProofDiagnostics {
    std::vector<std::size_t> e_counts;                // |E_j'(A)| for j' = 0..r
    std::vector<double> e_thresholds;                 // n d u^j' / 2r for j' = 0..r
    std::map<std::size_t, std::size_t> f_histogram;   // |F_j(v)| -> number of v in A \ I
    std::vector<std::pair<Vertex, std::size_t>> f_sizes;
    double d_threshold = 0;                           // d u^j (1-u) / 2r
    VertexSet d_set;
    MeasureValue d_measure;
    MeasureValue a_measure;
};

inline ProofDiagnostics proof_diagnostics(const Hypergraph& g, const VertexSet& independent, std::size_t j,
                                          const VertexSet& a_set, const ContainerParams& params) {
    const std::size_t r = g.uniformity();
    if (j >= r) throw InputError("j must be in [0, r-1]");
    require_subset(g, a_set, "witness set");
    if (!independent.is_subset_of(a_set)) throw InputError("independent set is not inside the witness set");

    ProofDiagnostics out;
    out.e_counts.assign(r + 1, 0);
    std::vector<std::size_t> f_count(g.label_count(), 0);
    for (std::size_t i = 0; i < g.edge_count(); ++i) {
        if (!g.edge_inside(i, a_set)) continue;
        std::size_t in_i = 0;
        for (Vertex v : g.edge(i)) in_i += independent.contains(v) ? 1 : 0;
        for (std::size_t k = 0; k <= in_i; ++k) ++out.e_counts[k];
        if (in_i == j)
            for (Vertex v : g.edge(i)) ++f_count[v];
    }
    const double nd = static_cast<double>(g.degree_total());
    const double dd = params.d.to_double();
    for (std::size_t k = 0; k <= r; ++k)
        out.e_thresholds.push_back(nd * std::pow(params.u, static_cast<double>(k)) / (2.0 * static_cast<double>(r)));
    out.d_threshold = dd * std::pow(params.u, static_cast<double>(j)) * (1.0 - params.u) / (2.0 * static_cast<double>(r));

    out.d_set = VertexSet(g.label_count());
    (a_set - independent).for_each([&](Vertex v) {
        ++out.f_histogram[f_count[v]];
        out.f_sizes.emplace_back(v, f_count[v]);
        if (static_cast<double>(f_count[v]) >= out.d_threshold) out.d_set.insert(v);
    });
    out.d_measure = degree_measure(g, out.d_set);
    out.a_measure = degree_measure(g, a_set);
    return out;
}

}  // namespace hgc
