#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "hgc/hypergraph.hpp"
#include "hgc/random.hpp"
#include "hgc/vertex_set.hpp"

namespace hgc {

// Brute-force ground truth used to check the container construction. All of
// it is exponential and meant for tiny hypergraphs.

struct EnumerationResult {
    std::uint64_t count = 0;
    bool truncated = false;
};

namespace detail {

/// Does adding v (with vertices above v already decided) complete an edge?
/// Only edges whose smallest vertex is v can become full at this point.
inline bool completes_edge(const Hypergraph& g, Vertex v, const VertexSet& current) {
    for (auto ei : g.incident(v)) {
        const auto e = g.edge(ei);
        if (e[0] != v) continue;
        bool full = true;
        for (std::size_t k = 1; k < e.size() && full; ++k) full = current.contains(e[k]);
        if (full) return true;
    }
    return false;
}

inline std::vector<Vertex> descending_vertices(const Hypergraph& g) {
    auto vs = g.universe().to_vector();
    return {vs.rbegin(), vs.rend()};
}

}  // namespace detail

/// Calls `emit(S)` for every independent set S of G, in increasing order of
/// the bitmask (vertex n-1 most significant), stopping after `cap` sets.
/// `emit` may return false to stop early.
inline EnumerationResult enumerate_independent_sets(const Hypergraph& g, std::uint64_t cap,
                                                    const std::function<bool(const VertexSet&)>& emit) {
    const auto order = detail::descending_vertices(g);
    VertexSet current(g.label_count());
    EnumerationResult res;
    bool stop = false;

    std::function<void(std::size_t)> rec = [&](std::size_t depth) {
        if (stop) return;
        if (depth == order.size()) {
            if (res.count >= cap) {
                res.truncated = true;
                stop = true;
                return;
            }
            ++res.count;
            if (!emit(current)) stop = true;
            return;
        }
        const Vertex v = order[depth];
        rec(depth + 1);
        if (stop || detail::completes_edge(g, v, current)) return;
        current.insert(v);
        rec(depth + 1);
        current.erase(v);
    };
    rec(0);
    return res;
}

inline std::vector<VertexSet> all_independent_sets(const Hypergraph& g, std::uint64_t cap, bool* truncated = nullptr) {
    std::vector<VertexSet> out;
    const auto res = enumerate_independent_sets(g, cap, [&](const VertexSet& s) {
        out.push_back(s);
        return true;
    });
    if (truncated) *truncated = res.truncated;
    return out;
}

/// True when no vertex of V(G) \ S can be added to S without completing an edge.
inline bool is_maximal_independent(const Hypergraph& g, const VertexSet& s) {
    if (!is_independent(g, s).independent) return false;
    bool maximal = true;
    (g.universe() - s).for_each([&](Vertex v) {
        if (!maximal) return;
        bool blocked = false;
        for (auto ei : g.incident(v)) {
            bool rest = true;
            for (Vertex w : g.edge(ei))
                if (w != v && !s.contains(w)) {
                    rest = false;
                    break;
                }
            if (rest) {
                blocked = true;
                break;
            }
        }
        if (!blocked) maximal = false;
    });
    return maximal;
}

struct MaximalSetsResult {
    std::vector<VertexSet> sets;
    bool truncated = false;
};

/// All maximal independent sets, in increasing bitmask order.
///
/// Backtracks like `enumerate_independent_sets`, additionally pruning a
/// branch as soon as an excluded vertex has no edge left that could block it
/// (every edge through it already contains another excluded vertex).
inline MaximalSetsResult maximal_independent_sets(const Hypergraph& g, std::uint64_t cap) {
    const auto order = detail::descending_vertices(g);
    VertexSet current(g.label_count());
    VertexSet excluded(g.label_count());
    MaximalSetsResult res;
    bool stop = false;

    auto can_be_blocked = [&](Vertex v) {
        for (auto ei : g.incident(v)) {
            bool alive = true;
            for (Vertex w : g.edge(ei))
                if (w != v && excluded.contains(w)) {
                    alive = false;
                    break;
                }
            if (alive) return true;
        }
        return false;
    };

    std::function<void(std::size_t)> rec = [&](std::size_t depth) {
        if (stop) return;
        if (depth == order.size()) {
            if (!is_maximal_independent(g, current)) return;
            if (res.sets.size() >= cap) {
                res.truncated = true;
                stop = true;
                return;
            }
            res.sets.push_back(current);
            return;
        }
        const Vertex v = order[depth];
        excluded.insert(v);
        if (can_be_blocked(v)) rec(depth + 1);
        excluded.erase(v);
        if (stop || detail::completes_edge(g, v, current)) return;
        current.insert(v);
        rec(depth + 1);
        current.erase(v);
    };
    rec(0);
    return res;
}

/// Random maximal independent set: scans vertices in a seeded random order
/// and adds each one that keeps the set independent.
inline VertexSet greedy_maximal_independent_set(const Hypergraph& g, std::uint64_t seed) {
    auto order = g.universe().to_vector();
    CounterEngine eng(seed);
    for (std::size_t i = order.size(); i > 1; --i) std::swap(order[i - 1], order[eng.below(i)]);
    VertexSet s(g.label_count());
    for (Vertex v : order) {
        bool ok = true;
        for (auto ei : g.incident(v)) {
            bool rest = true;
            for (Vertex w : g.edge(ei))
                if (w != v && !s.contains(w)) {
                    rest = false;
                    break;
                }
            if (rest) {
                ok = false;
                break;
            }
        }
        if (ok) s.insert(v);
    }
    return s;
}

/// Largest independent set inside `within` (default: all of V(G)), by
/// branch and bound.
inline VertexSet maximum_independent_set(const Hypergraph& g, const VertexSet* within = nullptr) {
    const VertexSet domain = within ? (g.universe() & *within) : g.universe();
    const Hypergraph h = g.induced(domain);
    // Highest-degree vertices first so conflicts surface early.
    auto order = domain.to_vector();
    std::stable_sort(order.begin(), order.end(), [&](Vertex a, Vertex b) { return h.degree(a) > h.degree(b); });

    VertexSet current(g.label_count());
    VertexSet best(g.label_count());
    std::size_t best_size = 0;
    std::size_t size = 0;

    auto blocked = [&](Vertex v) {
        for (auto ei : h.incident(v)) {
            bool rest = true;
            for (Vertex w : h.edge(ei))
                if (w != v && !current.contains(w)) {
                    rest = false;
                    break;
                }
            if (rest) return true;
        }
        return false;
    };

    std::function<void(std::size_t)> rec = [&](std::size_t depth) {
        if (size > best_size) {
            best_size = size;
            best = current;
        }
        if (depth == order.size() || size + (order.size() - depth) <= best_size) return;
        const Vertex v = order[depth];
        if (!blocked(v)) {
            current.insert(v);
            ++size;
            rec(depth + 1);
            --size;
            current.erase(v);
        }
        rec(depth + 1);
    };
    rec(0);
    return best;
}

struct CoverageReport {
    std::uint64_t checked = 0;
    std::uint64_t uncovered_count = 0;
    std::vector<VertexSet> uncovered;          // up to 10 witnesses
    std::vector<std::uint64_t> container_hits; // independent sets inside each container
    bool truncated = false;
};

/// Checks every independent set of G (up to `cap`) for a superset among `containers`.
inline CoverageReport verify_coverage(const Hypergraph& g, const std::vector<VertexSet>& containers,
                                      std::uint64_t cap) {
    CoverageReport rep;
    rep.container_hits.assign(containers.size(), 0);
    const auto res = enumerate_independent_sets(g, cap, [&](const VertexSet& s) {
        bool covered = false;
        for (std::size_t c = 0; c < containers.size(); ++c)
            if (s.is_subset_of(containers[c])) {
                covered = true;
                ++rep.container_hits[c];
            }
        if (!covered) {
            ++rep.uncovered_count;
            if (rep.uncovered.size() < 10) rep.uncovered.push_back(s);
        }
        return true;
    });
    rep.checked = res.count;
    rep.truncated = res.truncated;
    return rep;
}

}  // namespace hgc
