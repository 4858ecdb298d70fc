#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "hgc/container.hpp"
#include "hgc/error.hpp"
#include "hgc/hypergraph.hpp"
#include "hgc/oracle.hpp"
#include "hgc/parallel.hpp"
#include "hgc/random.hpp"
#include "hgc/rational.hpp"
#include "hgc/vertex_set.hpp"

namespace hgc {

inline std::uint64_t binomial(std::uint64_t n, std::uint64_t k) {
    if (k > n) return 0;
    k = std::min(k, n - k);
    unsigned __int128 acc = 1;
    for (std::uint64_t i = 1; i <= k; ++i) {
        acc = acc * (n - k + i) / i;
        if (acc > UINT64_MAX) throw ArithmeticOverflow("binomial overflow");
    }
    return static_cast<std::uint64_t>(acc);
}

/// Colexicographic ranking of the ell-subsets of [N]:
/// rank({c_1 < ... < c_ell}) = sum_i C(c_i, i).
class EllSetCodec {
public:
    EllSetCodec() = default;
    EllSetCodec(std::size_t n_points, std::size_t ell) : points_(n_points), ell_(ell) {
        if (ell < 1) throw InputError("ell must be at least 1");
        if (ell > n_points) throw InputError("ell exceeds the ground set size");
        size_ = binomial(n_points, ell);
    }

    std::size_t points() const { return points_; }
    std::size_t ell() const { return ell_; }
    std::uint64_t size() const { return size_; }

    /// `sorted` must be strictly increasing.
    std::uint64_t rank(std::span<const Vertex> sorted) const {
        std::uint64_t r = 0;
        for (std::size_t i = 0; i < sorted.size(); ++i) r += binomial(sorted[i], i + 1);
        return r;
    }

    std::vector<Vertex> unrank(std::uint64_t r) const {
        std::vector<Vertex> out(ell_);
        for (std::size_t i = ell_; i-- > 0;) {
            Vertex c = static_cast<Vertex>(i);
            while (binomial(c + 1, i + 1) <= r) ++c;
            out[i] = c;
            r -= binomial(c, i + 1);
        }
        return out;
    }

private:
    std::size_t points_ = 0;
    std::size_t ell_ = 0;
    std::uint64_t size_ = 0;
};

/// A fixed ell-graph H.
struct PatternGraph {
    std::size_t ell = 2;
    std::size_t vertex_count = 0;
    std::vector<std::vector<Vertex>> edges;  // sorted ell-tuples over [vertex_count]

    static PatternGraph from_hypergraph(const Hypergraph& h) {
        PatternGraph p;
        p.ell = h.uniformity();
        p.vertex_count = h.label_count();
        for (std::size_t i = 0; i < h.edge_count(); ++i) p.edges.emplace_back(h.edge(i).begin(), h.edge(i).end());
        return p;
    }

    /// Complete ell-graph on k vertices.
    static PatternGraph complete(std::size_t k, std::size_t ell = 2) {
        PatternGraph p;
        p.ell = ell;
        p.vertex_count = k;
        std::vector<Vertex> cur;
        std::function<void(Vertex)> rec = [&](Vertex start) {
            if (cur.size() == ell) {
                p.edges.push_back(cur);
                return;
            }
            for (Vertex v = start; v < k; ++v) {
                cur.push_back(v);
                rec(v + 1);
                cur.pop_back();
            }
        };
        rec(0);
        return p;
    }

    std::size_t edge_count() const { return edges.size(); }

    bool has_isolated_vertex() const {
        std::vector<char> used(vertex_count, 0);
        for (const auto& e : edges)
            for (auto v : e) used[v] = 1;
        return std::find(used.begin(), used.end(), 0) != used.end();
    }

    /// sigma = 1/(2 e(H)).
    Rational sigma() const { return Rational(1, 2 * static_cast<std::int64_t>(edge_count())); }

    /// m(H) = max over edge subsets H' with e(H') > 1 of (e(H') - 1)/(v(H') - ell),
    /// where v(H') counts the vertices spanned by H'.
    Rational m_density() const {
        const std::size_t m = edge_count();
        if (m < 2) throw InputError("m(H) needs at least two edges");
        if (m > 24) throw CapExceeded("m(H) enumeration is capped at 24 edges");
        std::optional<Rational> best;
        for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << m); ++mask) {
            const auto k = static_cast<std::size_t>(std::popcount(mask));
            if (k < 2) continue;
            std::uint64_t span = 0;
            for (std::size_t i = 0; i < m; ++i)
                if ((mask >> i) & 1u)
                    for (auto v : edges[i]) span |= std::uint64_t{1} << v;
            const Rational val(static_cast<std::int64_t>(k) - 1,
                               std::popcount(span) - static_cast<std::int64_t>(ell));
            if (!best || val > *best) best = val;
        }
        return *best;
    }

    void validate_for_pipeline() const {
        if (ell < 2) throw InputError("pattern uniformity must be at least 2");
        if (vertex_count > 63) throw CapExceeded("pattern graphs are limited to 63 vertices");
        if (edge_count() < 2) throw InputError("pattern must have at least two edges");
        if (vertex_count < ell + 1) throw InputError("pattern must have at least ell+1 vertices");
    }
};

/// G(N,H): vertices are the ell-subsets of [N] (colex rank), edges are the
/// e(H)-sets of ell-sets forming a copy of H.
struct CopyHypergraph {
    Hypergraph graph;
    std::size_t n_points = 0;
    PatternGraph pattern;
    EllSetCodec codec;
};

struct CopyCaps {
    std::uint64_t max_injections = 200'000'000;
    std::uint64_t max_vertices = 1'000'000;
};

inline std::uint64_t injection_count(std::uint64_t n, std::uint64_t k) {
    unsigned __int128 acc = 1;
    for (std::uint64_t i = 0; i < k; ++i) {
        acc *= (n - i);
        if (acc > UINT64_MAX) return UINT64_MAX;
    }
    return static_cast<std::uint64_t>(acc);
}

namespace detail {

/// Enumerates injections [vH] -> [N] with phi(0) fixed, calling visit(phi).
template <typename Visit>
void injections_from(std::size_t n_points, std::size_t vh, Vertex first, Visit&& visit) {
    std::vector<Vertex> phi(vh);
    std::vector<char> used(n_points, 0);
    phi[0] = first;
    used[first] = 1;
    std::function<void(std::size_t)> rec = [&](std::size_t k) {
        if (k == vh) {
            visit(phi);
            return;
        }
        for (Vertex x = 0; x < n_points; ++x) {
            if (used[x]) continue;
            used[x] = 1;
            phi[k] = x;
            rec(k + 1);
            used[x] = 0;
        }
    };
    rec(1);
}

}  // namespace detail

inline CopyHypergraph enumerate_copies(const PatternGraph& h, std::size_t n_points, const CopyCaps& caps = {},
                                       std::size_t threads = 1) {
    h.validate_for_pipeline();
    if (n_points < h.vertex_count)
        throw InputError("N=" + std::to_string(n_points) + " is smaller than v(H)=" + std::to_string(h.vertex_count));
    CopyHypergraph out;
    out.n_points = n_points;
    out.pattern = h;
    out.codec = EllSetCodec(n_points, h.ell);
    if (out.codec.size() > caps.max_vertices)
        throw CapExceeded("C(N,ell)=" + std::to_string(out.codec.size()) + " exceeds vertex cap");
    if (injection_count(n_points, h.vertex_count) > caps.max_injections)
        throw CapExceeded("number of injections V(H)->[N] exceeds cap");

    const std::size_t e_h = h.edge_count();
    std::vector<std::vector<std::vector<Vertex>>> per_first(n_points);
    parallel_for(n_points, threads, [&](std::size_t first) {
        auto& local = per_first[first];
        std::vector<Vertex> img(h.ell);
        detail::injections_from(n_points, h.vertex_count, static_cast<Vertex>(first), [&](const std::vector<Vertex>& phi) {
            std::vector<Vertex> copy(e_h);
            for (std::size_t i = 0; i < e_h; ++i) {
                for (std::size_t k = 0; k < h.ell; ++k) img[k] = phi[h.edges[i][k]];
                std::sort(img.begin(), img.end());
                copy[i] = static_cast<Vertex>(out.codec.rank(img));
            }
            std::sort(copy.begin(), copy.end());
            local.push_back(std::move(copy));
        });
        std::sort(local.begin(), local.end());
        local.erase(std::unique(local.begin(), local.end()), local.end());
    });

    std::vector<std::vector<Vertex>> all;
    for (auto& part : per_first)
        for (auto& c : part) all.push_back(std::move(c));
    Caps gcaps;
    gcaps.max_vertices = caps.max_vertices;
    gcaps.max_edges = std::max<std::size_t>(all.size(), 1);
    out.graph = Hypergraph::from_edges(e_h, out.codec.size(), std::move(all), gcaps);
    return out;
}

/// Sidecar for exporting G(N,H): one line per vertex index with its ell-set.
inline std::string format_codec(const EllSetCodec& codec) {
    std::string out = "# colex codec: ell=" + std::to_string(codec.ell()) + " N=" + std::to_string(codec.points()) + "\n";
    for (std::uint64_t i = 0; i < codec.size(); ++i) {
        out += std::to_string(i);
        for (auto v : codec.unrank(i)) out += " " + std::to_string(v);
        out += '\n';
    }
    return out;
}

// ---------------------------------------------------------------------------

namespace detail {

inline std::size_t intersection_size(std::span<const Vertex> a, std::span<const Vertex> b) {
    std::size_t i = 0, j = 0, c = 0;
    while (i < a.size() && j < b.size()) {
        if (a[i] < b[j]) ++i;
        else if (a[i] > b[j]) ++j;
        else { ++c; ++i; ++j; }
    }
    return c;
}

/// Smallest common vertex of two sorted tuples.
inline Vertex first_common(std::span<const Vertex> a, std::span<const Vertex> b) {
    std::size_t i = 0, j = 0;
    while (a[i] != b[j]) (a[i] < b[j]) ? ++i : ++j;
    return a[i];
}

/// Calls visit(a, b) with a < b for each pair of edges sharing >= 2 vertices.
/// Each pair is found once, at its smallest shared vertex.
template <typename Visit>
void for_each_overlapping_pair(const Hypergraph& g, Visit&& visit) {
    for (Vertex v = 0; v < g.label_count(); ++v) {
        const auto& inc = g.incident(v);
        for (std::size_t x = 0; x < inc.size(); ++x)
            for (std::size_t y = x + 1; y < inc.size(); ++y) {
                const auto ea = g.edge(inc[x]);
                const auto eb = g.edge(inc[y]);
                if (intersection_size(ea, eb) >= 2 && first_common(ea, eb) == v) {
                    if (!visit(std::min(inc[x], inc[y]), std::max(inc[x], inc[y]))) return;
                }
            }
    }
}

}  // namespace detail

struct OverlapCount {
    std::uint64_t count = 0;
    bool overflow = false;
};

/// Number of unordered edge pairs sharing two or more vertices, stopping at `cap`.
inline OverlapCount overlapping_pairs(const Hypergraph& g, std::uint64_t cap = UINT64_MAX) {
    OverlapCount c;
    detail::for_each_overlapping_pair(g, [&](std::size_t, std::size_t) {
        if (c.count >= cap) {
            c.overflow = true;
            return false;
        }
        ++c.count;
        return true;
    });
    return c;
}

inline std::vector<std::pair<std::size_t, std::size_t>> overlapping_pair_list(const Hypergraph& g) {
    std::vector<std::pair<std::size_t, std::size_t>> out;
    detail::for_each_overlapping_pair(g, [&](std::size_t a, std::size_t b) {
        out.emplace_back(a, b);
        return true;
    });
    std::sort(out.begin(), out.end());
    return out;
}

struct SimplifiedHypergraph {
    Hypergraph graph;                  // G_simple, same vertex set as G
    double p = 0;                      // sampling probability actually used
    double p_formula = 0;              // N^{-h + ell + rho'} before clamping
    bool regime_invalid = false;       // formula gave p > 1
    double rho = 0;
    double rho_prime = 0;
    std::size_t base_edges = 0;        // e(G)
    std::uint64_t base_overlaps = 0;   // overlapping pairs of G
    double expected_edges = 0;         // p e(G)
    double expected_overlaps = 0;      // p^2 * overlapping pairs of G
    std::size_t sampled_edges = 0;     // E
    std::uint64_t sampled_overlaps = 0;  // F
    bool event_a = false;
    bool event_b = false;
    bool first_attempt_a = false;
    bool first_attempt_b = false;
    std::size_t attempts = 0;
    std::vector<std::size_t> removed_edges;  // indices into G
    std::vector<std::size_t> kept_edges;     // indices into G
    double degree_target = 0;          // N^rho
    double average_degree = 0;
    std::vector<std::string> warnings;
};

inline constexpr std::uint32_t kSimplifyStream = 0x53494d50;  // "SIMP"

/// Random sparsification of G(N,H) into a simple hypergraph: keep each edge
/// with probability p = N^{-v(H)+ell+rho'}, retry until E is within
/// [3/4, 5/4] of its mean and F <= 3 E[F], then drop the larger edge of every
/// remaining overlapping pair.
inline SimplifiedHypergraph simplify(const CopyHypergraph& cg, double rho, double rho_prime, std::uint64_t seed,
                                     std::size_t max_retries = 16) {
    if (!(rho > 0 && rho < rho_prime && rho_prime < 1))
        throw InputError("need 0 < rho < rho' < 1");
    if (max_retries < 1) throw InputError("max_retries must be at least 1");
    const Hypergraph& g = cg.graph;
    const double n_pts = static_cast<double>(cg.n_points);
    const double h = static_cast<double>(cg.pattern.vertex_count);
    const double ell = static_cast<double>(cg.pattern.ell);

    SimplifiedHypergraph out;
    out.rho = rho;
    out.rho_prime = rho_prime;
    out.p_formula = std::pow(n_pts, -h + ell + rho_prime);
    if (!std::isfinite(out.p_formula) || out.p_formula <= 0) throw InputError("sampling probability formula is invalid");
    out.p = std::min(1.0, out.p_formula);
    if (out.p_formula > 1.0) {
        out.regime_invalid = true;
        out.warnings.push_back("regime_invalid: N^{-h+ell+rho'} = " + std::to_string(out.p_formula) +
                               " > 1, clamped to 1");
    }
    out.base_edges = g.edge_count();
    out.base_overlaps = overlapping_pairs(g).count;
    out.expected_edges = out.p * static_cast<double>(g.edge_count());
    out.expected_overlaps = out.p * out.p * static_cast<double>(out.base_overlaps);
    out.degree_target = std::pow(n_pts, rho);

    const CounterRng rng(seed);
    std::vector<std::size_t> kept;
    Hypergraph sampled;
    for (std::size_t attempt = 0; attempt < max_retries; ++attempt) {
        kept.clear();
        for (std::size_t i = 0; i < g.edge_count(); ++i)
            if (rng.bernoulli(out.p, kSimplifyStream, static_cast<std::uint32_t>(attempt), static_cast<std::uint32_t>(i >> 32),
                              static_cast<std::uint32_t>(i)))
                kept.push_back(i);
        sampled = g.with_edges(kept);
        const double e = static_cast<double>(kept.size());
        const std::uint64_t f = overlapping_pairs(sampled).count;
        const bool a = 3.0 * out.expected_edges / 4.0 <= e && e <= 5.0 * out.expected_edges / 4.0;
        const bool b = static_cast<double>(f) <= 3.0 * out.expected_overlaps;
        if (attempt == 0) {
            out.first_attempt_a = a;
            out.first_attempt_b = b;
        }
        out.attempts = attempt + 1;
        out.sampled_edges = kept.size();
        out.sampled_overlaps = f;
        out.event_a = a;
        out.event_b = b;
        if (a && b) break;
    }
    if (!(out.event_a && out.event_b))
        throw InputError("sparsification events A/B failed in all " + std::to_string(max_retries) + " attempts");

    // Pairs come sorted, so the lexicographically larger edge is the second.
    std::vector<char> alive(sampled.edge_count(), 1);
    for (const auto& [a, b] : overlapping_pair_list(sampled))
        if (alive[a] && alive[b]) alive[b] = 0;
    std::vector<std::size_t> keep_local;
    for (std::size_t i = 0; i < sampled.edge_count(); ++i) {
        if (alive[i]) {
            keep_local.push_back(i);
            out.kept_edges.push_back(kept[i]);
        } else {
            out.removed_edges.push_back(kept[i]);
        }
    }
    out.graph = sampled.with_edges(keep_local);
    out.average_degree = static_cast<double>(out.graph.degree_total()) / static_cast<double>(out.graph.order());
    if (!is_simple(out.graph).simple) throw InvariantViolation("overlap removal left a non-simple hypergraph");
    return out;
}

struct ConsequenceCheck {
    std::size_t base_edges = 0;    // e(G[S])
    std::size_t simple_edges = 0;  // e(G_simple[S])
    bool premise = false;          // e(G[S]) >= eta e(G)
    bool holds = true;             // premise => e(G_simple[S]) >= eta e(G_simple) / 2
};

/// Checks "e(G[S]) >= eta e(G) implies e(G_simple[S]) >= eta e(G_simple)/2" for one S.
inline ConsequenceCheck check_sparsification_consequence(const Hypergraph& g, const Hypergraph& simple,
                                                         const VertexSet& s, const Rational& eta) {
    ConsequenceCheck c;
    c.base_edges = g.induced_edge_count(s);
    c.simple_edges = simple.induced_edge_count(s);
    const auto wide = [](std::size_t x) { return static_cast<__int128>(x); };
    c.premise = wide(c.base_edges) * eta.den() >= wide(g.edge_count()) * eta.num();
    if (c.premise) c.holds = wide(c.simple_edges) * 2 * eta.den() >= wide(simple.edge_count()) * eta.num();
    return c;
}

// ---------------------------------------------------------------------------

/// An ell-graph on [N], stored as a set of colex ranks.
struct EllGraph {
    EllSetCodec codec;
    VertexSet edges;

    EllGraph() = default;
    EllGraph(std::size_t n_points, std::size_t ell) : codec(n_points, ell), edges(codec.size()) {}
    EllGraph(const EllSetCodec& c, VertexSet e) : codec(c), edges(std::move(e)) {}

    bool has(std::span<const Vertex> sorted) const {
        return edges.contains(static_cast<Vertex>(codec.rank(sorted)));
    }
};

namespace detail {

/// Counts injections phi: V(H) -> [N] mapping every edge of H into L,
/// with phi fixed on the first `preset` vertices of `order`.
inline std::uint64_t count_embeddings(const EllGraph& l, const PatternGraph& h, std::vector<Vertex>& phi,
                                      std::vector<char>& used, const std::vector<Vertex>& order, std::size_t depth,
                                      const std::vector<std::vector<std::size_t>>& closing, bool stop_at_first) {
    if (depth == order.size()) return 1;
    const std::size_t n_points = l.codec.points();
    const Vertex hv = order[depth];
    std::vector<Vertex> img(h.ell);
    std::uint64_t total = 0;
    auto try_value = [&](Vertex x) {
        phi[hv] = x;
        for (auto ei : closing[depth]) {
            for (std::size_t k = 0; k < h.ell; ++k) img[k] = phi[h.edges[ei][k]];
            std::sort(img.begin(), img.end());
            if (!l.has(img)) return;
        }
        used[x] = 1;
        total += count_embeddings(l, h, phi, used, order, depth + 1, closing, stop_at_first);
        used[x] = 0;
    };
    for (Vertex x = 0; x < n_points; ++x) {
        if (used[x]) continue;
        try_value(x);
        if (stop_at_first && total > 0) break;
    }
    return total;
}

/// closing[k]: edges of H whose last vertex in `order` is order[k].
inline std::vector<std::vector<std::size_t>> closing_edges(const PatternGraph& h, const std::vector<Vertex>& order) {
    std::vector<std::size_t> pos(h.vertex_count);
    for (std::size_t k = 0; k < order.size(); ++k) pos[order[k]] = k;
    std::vector<std::vector<std::size_t>> closing(order.size());
    for (std::size_t i = 0; i < h.edges.size(); ++i) {
        std::size_t last = 0;
        for (auto v : h.edges[i]) last = std::max(last, pos[v]);
        closing[last].push_back(i);
    }
    return closing;
}

inline std::uint64_t automorphism_count(const PatternGraph& h) {
    std::vector<std::vector<Vertex>> sorted_edges = h.edges;
    std::sort(sorted_edges.begin(), sorted_edges.end());
    std::vector<Vertex> perm(h.vertex_count);
    std::iota(perm.begin(), perm.end(), 0);
    std::uint64_t count = 0;
    std::vector<std::vector<Vertex>> img(h.edges.size());
    do {
        for (std::size_t i = 0; i < h.edges.size(); ++i) {
            img[i].clear();
            for (auto v : h.edges[i]) img[i].push_back(perm[v]);
            std::sort(img[i].begin(), img[i].end());
        }
        std::sort(img.begin(), img.end());
        if (img == sorted_edges) ++count;
    } while (std::next_permutation(perm.begin(), perm.end()));
    return count;
}

}  // namespace detail

/// Copies of H in L, counted as distinct edge sets.
///
/// Counts edge-preserving injections directly in L and divides by |Aut(H)|;
/// this route never builds G(N,H).
inline std::uint64_t count_copies(const EllGraph& l, const PatternGraph& h) {
    if (l.codec.ell() != h.ell) throw InputError("L and H have different uniformity");
    if (h.vertex_count > 10) throw CapExceeded("count_copies is capped at v(H) <= 10");
    if (injection_count(l.codec.points(), h.vertex_count) > 500'000'000ULL)
        throw CapExceeded("count_copies: too many injections");
    if (l.codec.points() < h.vertex_count) return 0;

    std::vector<Vertex> order(h.vertex_count);
    std::iota(order.begin(), order.end(), 0);
    const auto closing = detail::closing_edges(h, order);
    std::vector<Vertex> phi(h.vertex_count);
    std::vector<char> used(l.codec.points(), 0);

    if (!h.has_isolated_vertex())
        return detail::count_embeddings(l, h, phi, used, order, 0, closing, false) / detail::automorphism_count(h);

    // Isolated vertices of H do not change the edge set, so collect distinct images.
    std::vector<std::vector<std::uint64_t>> images;
    std::function<void(std::size_t)> rec = [&](std::size_t depth) {
        if (depth == order.size()) {
            std::vector<std::uint64_t> img;
            std::vector<Vertex> e(h.ell);
            for (const auto& he : h.edges) {
                for (std::size_t k = 0; k < h.ell; ++k) e[k] = phi[he[k]];
                std::sort(e.begin(), e.end());
                img.push_back(l.codec.rank(e));
            }
            std::sort(img.begin(), img.end());
            images.push_back(std::move(img));
            return;
        }
        for (Vertex x = 0; x < l.codec.points(); ++x) {
            if (used[x]) continue;
            phi[order[depth]] = x;
            bool ok = true;
            std::vector<Vertex> e(h.ell);
            for (auto ei : closing[depth]) {
                for (std::size_t k = 0; k < h.ell; ++k) e[k] = phi[h.edges[ei][k]];
                std::sort(e.begin(), e.end());
                if (!l.has(e)) ok = false;
            }
            if (!ok) continue;
            used[x] = 1;
            rec(depth + 1);
            used[x] = 0;
        }
    };
    rec(0);
    std::sort(images.begin(), images.end());
    return static_cast<std::uint64_t>(std::unique(images.begin(), images.end()) - images.begin());
}

/// Does L contain a copy of H that uses the ell-set `s` (which must be in L)?
inline bool has_copy_through(const EllGraph& l, const PatternGraph& h, std::span<const Vertex> s) {
    std::vector<Vertex> phi(h.vertex_count);
    std::vector<char> used(l.codec.points(), 0);
    for (const auto& he : h.edges) {
        // Vertices of this H-edge go first, mapped bijectively onto s.
        std::vector<Vertex> order(he.begin(), he.end());
        for (Vertex v = 0; v < h.vertex_count; ++v)
            if (std::find(he.begin(), he.end(), v) == he.end()) order.push_back(v);
        const auto closing = detail::closing_edges(h, order);
        std::vector<Vertex> perm(s.begin(), s.end());
        do {
            bool ok = true;
            for (std::size_t k = 0; k < h.ell; ++k) {
                phi[order[k]] = perm[k];
                used[perm[k]] = 1;
            }
            std::vector<Vertex> e(h.ell);
            for (std::size_t k = 0; k < h.ell && ok; ++k)
                for (auto ei : closing[k]) {
                    for (std::size_t t = 0; t < h.ell; ++t) e[t] = phi[h.edges[ei][t]];
                    std::sort(e.begin(), e.end());
                    if (!l.has(e)) ok = false;
                }
            const bool found = ok && detail::count_embeddings(l, h, phi, used, order, h.ell, closing, true) > 0;
            for (std::size_t k = 0; k < h.ell; ++k) used[perm[k]] = 0;
            if (found) return true;
        } while (std::next_permutation(perm.begin(), perm.end()));
    }
    return false;
}

struct HfreeCensus {
    std::uint64_t count = 0;      // number of H-free ell-graphs on [N]
    std::size_t extremal = 0;     // ex(N, H)
    std::uint64_t slots = 0;      // C(N, ell)
    double log2_density = 0;      // log2(count) / C(N, ell)
    Rational pi_hat{0};           // ex(N, H) / C(N, ell), a finite proxy for pi(H)
};

inline constexpr std::uint64_t kCensusSlotCap = 28;

/// Exact census of H-free ell-graphs on [N] by backtracking over the ell-sets
/// in colex order; an ell-set is added only if it creates no copy of H.
/// `emit`, when given, receives every H-free graph (as a set of ranks).
inline HfreeCensus brute_force_hfree(const PatternGraph& h, std::size_t n_points,
                                     const std::function<void(const VertexSet&)>& emit = {}) {
    if (h.edge_count() < 1) throw InputError("pattern has no edges");
    const EllSetCodec codec(n_points, h.ell);
    if (codec.size() > kCensusSlotCap)
        throw CapExceeded("census needs C(N,ell) <= " + std::to_string(kCensusSlotCap) + ", got " +
                          std::to_string(codec.size()));
    HfreeCensus out;
    out.slots = codec.size();
    EllGraph l(codec, VertexSet(codec.size()));
    std::vector<std::vector<Vertex>> sets(codec.size());
    for (std::uint64_t i = 0; i < codec.size(); ++i) sets[i] = codec.unrank(i);

    std::size_t size = 0;
    std::function<void(std::uint64_t)> rec = [&](std::uint64_t i) {
        if (i == codec.size()) {
            ++out.count;
            out.extremal = std::max(out.extremal, size);
            if (emit) emit(l.edges);
            return;
        }
        rec(i + 1);
        l.edges.insert(static_cast<Vertex>(i));
        if (!has_copy_through(l, h, sets[i])) {
            ++size;
            rec(i + 1);
            --size;
        }
        l.edges.erase(static_cast<Vertex>(i));
    };
    rec(0);
    out.log2_density = std::log2(static_cast<double>(out.count)) / static_cast<double>(out.slots);
    out.pi_hat = Rational(static_cast<std::int64_t>(out.extremal), static_cast<std::int64_t>(out.slots));
    return out;
}

// ---------------------------------------------------------------------------

struct PipelineOptions {
    std::uint64_t seed = 0;
    std::size_t budget = 64;
    std::size_t threads = 1;
    std::size_t max_retries = 16;
    std::uint64_t family_cap = 1'000'000;
    std::optional<std::vector<VertexSet>> family;  // default: all maximal H-free graphs
    bool census = true;                            // compute pi_hat when C(N,ell) allows
    bool verify = false;                           // exhaustive coverage over all H-free graphs
    std::uint64_t verify_cap = 50'000'000;
    std::size_t random_dense_sets = 100;
    double dense_keep = 0.8;
    CopyCaps copy_caps;
};

struct PipelineContainer {
    VertexSet graph;             // container as a set of ell-set ranks
    std::size_t edges = 0;       // e(C)
    std::uint64_t copies = 0;    // e(G[C]) = copies of H in C
    std::size_t simple_copies = 0;
    bool copies_below_eps = false;
    std::optional<bool> edges_below_turan;  // e(C) <= (pi_hat + eps) C(N, ell)
};

struct PipelineReport {
    PatternGraph pattern;
    std::size_t n_points = 0;
    double epsilon = 0;
    Rational delta;
    Rational eta;
    double rho = 0;
    double rho_prime = 0;
    Rational sigma;
    Rational m_density;
    std::size_t copy_vertices = 0;
    std::size_t copy_edges = 0;
    SimplifiedHypergraph simplified;
    CollectionReport collection;
    std::vector<PipelineContainer> containers;
    std::size_t family_size = 0;
    bool family_truncated = false;
    std::optional<HfreeCensus> census;
    double eps_copy_bound = 0;     // eps * N^{v(H)}
    double beta = 0;               // (1/d)^{1/(2e(H)-1)}, d = average degree of G_simple
    double beta_bound_log2 = 0;    // beta * C(N, ell)
    bool beta_bound_vacuous = false;
    double nls_exponent = 0;       // ell - sigma
    double nls_bound = 0;          // N^{ell - sigma}
    bool nls_bound_vacuous = false;
    double log2_collection_size = 0;
    std::size_t consequence_checks = 0;
    std::size_t consequence_premises = 0;
    std::size_t consequence_violations = 0;
    std::optional<CoverageReport> coverage;
    std::vector<std::string> warnings;
};

/// Smallest rho with rho/(2e(H)-1) > 1/(2e(H)), plus a 0.01 margin, and
/// rho' halfway between rho and 1.
inline std::pair<double, double> default_rho(const PatternGraph& h) {
    const double m = static_cast<double>(h.edge_count());
    const double rho = std::min(0.99, (2.0 * m - 1.0) / (2.0 * m) + 0.01);
    return {rho, (rho + 1.0) / 2.0};
}

inline PipelineReport hfree_container_pipeline(const PatternGraph& h, std::size_t n_points, double epsilon,
                                               const Rational& delta, double rho, double rho_prime,
                                               const PipelineOptions& opt = {}) {
    h.validate_for_pipeline();
    require_delta(delta);
    if (!(epsilon > 0)) throw InputError("epsilon must be positive");
    const double m = static_cast<double>(h.edge_count());
    if (!(rho / (2.0 * m - 1.0) > 1.0 / (2.0 * m)))
        throw InputError("rho must satisfy rho/(2e(H)-1) > 1/(2e(H))");

    PipelineReport rep;
    rep.pattern = h;
    rep.n_points = n_points;
    rep.epsilon = epsilon;
    rep.delta = delta;
    rep.eta = delta * Rational(2);
    rep.rho = rho;
    rep.rho_prime = rho_prime;
    rep.sigma = h.sigma();
    rep.m_density = h.m_density();

    const CopyHypergraph cg = enumerate_copies(h, n_points, opt.copy_caps, opt.threads);
    rep.copy_vertices = cg.graph.order();
    rep.copy_edges = cg.graph.edge_count();
    rep.simplified = simplify(cg, rho, rho_prime, opt.seed, opt.max_retries);
    rep.warnings = rep.simplified.warnings;
    const Hypergraph& gs = rep.simplified.graph;

    std::vector<VertexSet> family;
    if (opt.family) {
        family = *opt.family;
    } else {
        auto res = maximal_independent_sets(cg.graph, opt.family_cap);
        family = std::move(res.sets);
        rep.family_truncated = res.truncated;
    }
    rep.family_size = family.size();
    for (std::size_t i = 0; i < family.size(); ++i)
        if (!is_independent(cg.graph, family[i]).independent)
            throw InputError("family member " + std::to_string(i) + " is not H-free");

    CollectionOptions copt;
    copt.seed = opt.seed;
    copt.budget = opt.budget;
    copt.threads = opt.threads;
    rep.collection = build_collection(gs, family, delta, copt);

    if (opt.census && cg.codec.size() <= kCensusSlotCap) rep.census = brute_force_hfree(h, n_points);

    const double nn = static_cast<double>(n_points);
    const double slots = static_cast<double>(cg.codec.size());
    rep.eps_copy_bound = epsilon * std::pow(nn, static_cast<double>(h.vertex_count));
    for (std::size_t c = 0; c < rep.collection.containers.size(); ++c) {
        PipelineContainer pc;
        pc.graph = rep.collection.containers[c];
        pc.edges = pc.graph.count();
        pc.copies = cg.graph.induced_edge_count(pc.graph);
        pc.simple_copies = rep.collection.container_edges[c];
        pc.copies_below_eps = static_cast<double>(pc.copies) <= rep.eps_copy_bound;
        if (rep.census)
            pc.edges_below_turan = static_cast<double>(pc.edges) <= (rep.census->pi_hat.to_double() + epsilon) * slots;
        rep.containers.push_back(std::move(pc));
    }

    const double d = rep.simplified.average_degree;
    rep.beta = d > 0 ? std::pow(1.0 / d, 1.0 / (2.0 * m - 1.0)) : INFINITY;
    rep.beta_bound_log2 = rep.beta * slots;
    rep.beta_bound_vacuous = rep.beta >= 1.0;
    rep.nls_exponent = static_cast<double>(h.ell) - rep.sigma.to_double();
    rep.nls_bound = std::pow(nn, rep.nls_exponent);
    rep.nls_bound_vacuous = rep.nls_bound >= slots;
    rep.log2_collection_size =
        rep.collection.containers.empty() ? 0.0 : std::log2(static_cast<double>(rep.collection.containers.size()));

    // Sparsification consequence on the produced containers and on random dense sets.
    auto consequence = [&](const VertexSet& s) {
        const auto c = check_sparsification_consequence(cg.graph, gs, s, rep.eta);
        ++rep.consequence_checks;
        rep.consequence_premises += c.premise ? 1 : 0;
        rep.consequence_violations += c.holds ? 0 : 1;
    };
    for (const auto& c : rep.collection.containers) consequence(c);
    const CounterRng dense_rng = CounterRng(opt.seed).derive(0x44454e53u, 0);  // "DENS"
    for (std::size_t t = 0; t < opt.random_dense_sets; ++t) {
        VertexSet s(cg.graph.label_count());
        for (Vertex v = 0; v < s.size(); ++v)
            if (dense_rng.bernoulli(opt.dense_keep, static_cast<std::uint32_t>(t), v, 0, 0)) s.insert(v);
        consequence(s);
    }

    if (opt.verify) rep.coverage = verify_coverage(cg.graph, rep.collection.containers, opt.verify_cap);
    return rep;
}

// ---------------------------------------------------------------------------

struct SparseTuranTrial {
    std::size_t sampled_edges = 0;
    std::size_t max_hfree = 0;
    bool exceeds = false;
};

struct SparseTuranReport {
    std::size_t n_points = 0;
    double p = 0;
    double gamma = 0;
    std::size_t trials = 0;
    std::uint64_t seed = 0;
    HfreeCensus census;
    double threshold = 0;          // (pi_hat + gamma) p C(N, ell)
    double failure_bound = 0;      // exp(-gamma^3 p C(N, ell) / 512)
    double exceedance_rate = 0;
    std::size_t exceedances = 0;
    double sigma = 0;
    double p_over_n_minus_sigma = 0;  // p / N^{-sigma}
    std::vector<SparseTuranTrial> rows;
};

inline constexpr std::uint32_t kTrialStream = 0x54524c31;  // "TRL1"

/// Samples G^(ell)(N, p) and computes the exact largest H-free subgraph of each sample.
inline SparseTuranReport sparse_turan_experiment(const PatternGraph& h, std::size_t n_points, double p, double gamma,
                                                 std::size_t trials, std::uint64_t seed, std::size_t threads = 1) {
    if (!(p >= 0.0 && p <= 1.0)) throw InputError("p must lie in [0, 1]");
    if (!(gamma > 0.0 && gamma < 1.0)) throw InputError("gamma must lie in (0, 1)");
    h.validate_for_pipeline();
    const CopyHypergraph cg = enumerate_copies(h, n_points);

    SparseTuranReport rep;
    rep.n_points = n_points;
    rep.p = p;
    rep.gamma = gamma;
    rep.trials = trials;
    rep.seed = seed;
    rep.census = brute_force_hfree(h, n_points);
    const double slots = static_cast<double>(cg.codec.size());
    rep.threshold = (rep.census.pi_hat.to_double() + gamma) * p * slots;
    rep.failure_bound = std::exp(-gamma * gamma * gamma * p * slots / 512.0);
    rep.sigma = h.sigma().to_double();
    rep.p_over_n_minus_sigma = p / std::pow(static_cast<double>(n_points), -rep.sigma);

    const CounterRng root(seed);
    rep.rows.resize(trials);
    parallel_for(trials, threads, [&](std::size_t t) {
        const CounterRng rng = root.derive(kTrialStream, static_cast<std::uint32_t>(t));
        VertexSet sample(cg.graph.label_count());
        for (Vertex v = 0; v < sample.size(); ++v)
            if (rng.bernoulli(p, v, 0, 0, 0)) sample.insert(v);
        auto& row = rep.rows[t];
        row.sampled_edges = sample.count();
        row.max_hfree = maximum_independent_set(cg.graph, &sample).count();
        row.exceeds = static_cast<double>(row.max_hfree) > rep.threshold;
    });
    for (const auto& row : rep.rows) rep.exceedances += row.exceeds ? 1 : 0;
    rep.exceedance_rate = trials == 0 ? 0.0 : static_cast<double>(rep.exceedances) / static_cast<double>(trials);
    return rep;
}

}  // namespace hgc
