#pragma once

#include <algorithm>
#include <array>
#include <charconv>
#include <compare>
#include <cstdint>
#include <fstream>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "hgc/error.hpp"
#include "hgc/rational.hpp"
#include "hgc/vertex_set.hpp"

namespace hgc {

/// Desk-scale limits applied when loading or building hypergraphs.
struct Caps {
    std::size_t max_vertices = 1'000'000;
    std::size_t max_edges = 10'000'000;
};

/// Immutable r-uniform hypergraph.
///
/// Vertices carry labels 0..n-1. The vertex set proper is `universe()`, which
/// is all labels for a freshly built hypergraph and a subset of them for an
/// induced subhypergraph (labels are kept so containers at different levels
/// stay comparable). Edges are sorted tuples, stored in lexicographic order
/// without duplicates.
class Hypergraph {
public:
    Hypergraph() = default;

    /// Validates and canonicalizes `edges`. Duplicate edges are dropped and
    /// counted in `duplicates_dropped` when non-null.
    static Hypergraph from_edges(std::size_t r, std::size_t n, std::vector<std::vector<Vertex>> edges,
                                 const Caps& caps = {}, std::size_t* duplicates_dropped = nullptr) {
        if (r < 2) throw InputError("uniformity must be at least 2, got " + std::to_string(r));
        if (n > caps.max_vertices)
            throw CapExceeded("vertex count " + std::to_string(n) + " exceeds cap " + std::to_string(caps.max_vertices));
        if (edges.size() > caps.max_edges)
            throw CapExceeded("edge count " + std::to_string(edges.size()) + " exceeds cap " +
                              std::to_string(caps.max_edges));
        for (std::size_t i = 0; i < edges.size(); ++i) {
            auto& e = edges[i];
            if (e.size() != r)
                throw InputError("edge " + std::to_string(i) + " has " + std::to_string(e.size()) +
                                 " vertices, expected " + std::to_string(r));
            std::sort(e.begin(), e.end());
            for (std::size_t k = 0; k < r; ++k) {
                if (e[k] >= n)
                    throw InputError("edge " + std::to_string(i) + ": vertex index " + std::to_string(e[k]) +
                                     " out of range (n=" + std::to_string(n) + ")");
                if (k > 0 && e[k] == e[k - 1])
                    throw InputError("edge " + std::to_string(i) + ": duplicate vertex " + std::to_string(e[k]));
            }
        }
        std::sort(edges.begin(), edges.end());
        const auto before = edges.size();
        edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
        if (duplicates_dropped) *duplicates_dropped = before - edges.size();

        Hypergraph g;
        g.r_ = r;
        g.universe_ = VertexSet::full(n);
        g.flat_.reserve(edges.size() * r);
        for (const auto& e : edges) g.flat_.insert(g.flat_.end(), e.begin(), e.end());
        g.index();
        return g;
    }

    std::size_t uniformity() const { return r_; }
    /// Number of vertex labels (the n of the enclosing hypergraph).
    std::size_t label_count() const { return universe_.size(); }
    /// Number of vertices actually in this hypergraph.
    std::size_t order() const { return universe_.count(); }
    const VertexSet& universe() const { return universe_; }

    std::size_t edge_count() const { return r_ == 0 ? 0 : flat_.size() / r_; }
    std::span<const Vertex> edge(std::size_t i) const { return {flat_.data() + i * r_, r_}; }

    std::uint64_t degree(Vertex v) const { return degrees_[v]; }
    const std::vector<std::uint64_t>& degrees() const { return degrees_; }
    const std::vector<std::uint32_t>& incident(Vertex v) const { return incidence_[v]; }

    /// Sum of all degrees, r * e(G); equals n*d for average degree d.
    std::uint64_t degree_total() const { return static_cast<std::uint64_t>(r_) * edge_count(); }

    /// Average degree r*e(G)/|V(G)| over the retained vertex set.
    Rational average_degree() const {
        if (order() == 0) throw InputError("average degree of an empty vertex set");
        return Rational(static_cast<std::int64_t>(degree_total()), static_cast<std::int64_t>(order()));
    }

    bool edge_inside(std::size_t i, const VertexSet& s) const {
        for (Vertex v : edge(i))
            if (!s.contains(v)) return false;
        return true;
    }

    /// e(G[S]): number of edges wholly inside `s`.
    std::size_t induced_edge_count(const VertexSet& s) const {
        std::size_t c = 0;
        for (std::size_t i = 0; i < edge_count(); ++i) c += edge_inside(i, s) ? 1 : 0;
        return c;
    }

    /// G[C] on the same labels with universe restricted to C.
    Hypergraph induced(const VertexSet& c) const {
        Hypergraph g;
        g.r_ = r_;
        g.universe_ = universe_ & c;
        for (std::size_t i = 0; i < edge_count(); ++i)
            if (edge_inside(i, g.universe_)) g.flat_.insert(g.flat_.end(), edge(i).begin(), edge(i).end());
        g.index();
        return g;
    }

    /// Subhypergraph with the same vertex set and the listed edges only.
    Hypergraph with_edges(const std::vector<std::size_t>& keep) const {
        Hypergraph g;
        g.r_ = r_;
        g.universe_ = universe_;
        std::vector<std::size_t> sorted = keep;
        std::sort(sorted.begin(), sorted.end());
        sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
        for (auto i : sorted) g.flat_.insert(g.flat_.end(), edge(i).begin(), edge(i).end());
        g.index();
        return g;
    }

    /// Edge index of a sorted tuple, if present.
    std::optional<std::size_t> find_edge(std::span<const Vertex> sorted) const {
        if (sorted.size() != r_ || sorted.empty() || sorted[0] >= label_count()) return std::nullopt;
        for (auto i : incidence_[sorted[0]])
            if (std::equal(sorted.begin(), sorted.end(), edge(i).begin())) return i;
        return std::nullopt;
    }

    /// Recomputes degrees from the edge list; used to audit cached values.
    std::vector<std::uint64_t> recompute_degrees() const {
        std::vector<std::uint64_t> d(label_count(), 0);
        for (Vertex v : flat_) ++d[v];
        return d;
    }

private:
    void index() {
        const auto n = universe_.size();
        degrees_.assign(n, 0);
        incidence_.assign(n, {});
        for (std::size_t i = 0; i < edge_count(); ++i)
            for (Vertex v : edge(i)) {
                ++degrees_[v];
                incidence_[v].push_back(static_cast<std::uint32_t>(i));
            }
    }

    std::size_t r_ = 0;
    VertexSet universe_;
    std::vector<Vertex> flat_;
    std::vector<std::uint64_t> degrees_;
    std::vector<std::vector<std::uint32_t>> incidence_;
};

/// Exact degree measure: sum of degrees in S over r*e(G).
struct MeasureValue {
    std::uint64_t num = 0;
    std::uint64_t den = 1;

    Rational value() const { return Rational(static_cast<std::int64_t>(num), static_cast<std::int64_t>(den)); }
    double to_double() const { return static_cast<double>(num) / static_cast<double>(den); }

    friend bool operator==(const MeasureValue& a, const MeasureValue& b) {
        return static_cast<__int128>(a.num) * b.den == static_cast<__int128>(b.num) * a.den;
    }
    friend std::strong_ordering operator<=>(const MeasureValue& a, const MeasureValue& b) {
        return static_cast<__int128>(a.num) * b.den <=> static_cast<__int128>(b.num) * a.den;
    }
    /// Compares against p/q without reducing.
    std::strong_ordering compare(std::uint64_t p, std::uint64_t q) const {
        return static_cast<__int128>(num) * q <=> static_cast<__int128>(p) * den;
    }
};

inline void require_subset(const Hypergraph& g, const VertexSet& s, const char* what) {
    if (s.size() != g.label_count())
        throw InputError(std::string(what) + ": vertex set universe " + std::to_string(s.size()) +
                         " does not match hypergraph labels " + std::to_string(g.label_count()));
    if (!s.is_subset_of(g.universe())) throw InputError(std::string(what) + ": set is not inside the vertex set");
}

inline MeasureValue degree_measure(const Hypergraph& g, const VertexSet& s) {
    require_subset(g, s, "degree_measure");
    if (g.edge_count() == 0) throw UndefinedMeasure("degree measure is undefined on a hypergraph with no edges");
    MeasureValue m;
    m.den = g.degree_total();
    s.for_each([&](Vertex v) { m.num += g.degree(v); });
    return m;
}

struct IndependenceResult {
    bool independent = true;
    std::optional<std::size_t> witness_edge;
};

inline IndependenceResult is_independent(const Hypergraph& g, const VertexSet& s) {
    for (std::size_t i = 0; i < g.edge_count(); ++i)
        if (g.edge_inside(i, s)) return {false, i};
    return {};
}

struct SimplicityResult {
    bool simple = true;
    std::optional<std::pair<std::size_t, std::size_t>> witness;
};

/// A hypergraph is simple when no two edges share two or more vertices, i.e.
/// no vertex pair lies in two edges.
inline SimplicityResult is_simple(const Hypergraph& g) {
    const std::size_t r = g.uniformity();
    std::unordered_map<std::uint64_t, std::size_t> owner;
    owner.reserve(g.edge_count() * r * (r - 1) / 2 + 1);
    for (std::size_t i = 0; i < g.edge_count(); ++i) {
        const auto e = g.edge(i);
        for (std::size_t a = 0; a < r; ++a)
            for (std::size_t b = a + 1; b < r; ++b) {
                const std::uint64_t key = (std::uint64_t{e[a]} << 32) | e[b];
                auto [it, inserted] = owner.try_emplace(key, i);
                if (!inserted && it->second != i) return {false, std::make_pair(it->second, i)};
            }
    }
    return {};
}

/// Both sides of the two degree-measure inequalities, in exact integers
/// scaled by r: e(G[S]) <= mu(S) e(G) and e(G[S]) >= (mu(S) - 1 + 1/r) r e(G).
struct MeasureInequalityReport {
    std::size_t induced_edges = 0;
    MeasureValue measure;
    Rational upper_bound;  // mu(S) * e(G)
    Rational lower_bound;  // (mu(S) - 1 + 1/r) * r * e(G)
    bool upper_holds = false;
    bool lower_holds = false;
};

inline MeasureInequalityReport check_measure_inequalities(const Hypergraph& g, const VertexSet& s) {
    MeasureInequalityReport rep;
    rep.measure = degree_measure(g, s);
    rep.induced_edges = g.induced_edge_count(s);
    const auto r = static_cast<std::int64_t>(g.uniformity());
    const auto e = static_cast<std::int64_t>(g.edge_count());
    const auto mass = static_cast<std::int64_t>(rep.measure.num);
    // mu(S) e(G) = mass / r; (mu - 1 + 1/r) r e = mass - (r - 1) e
    rep.upper_bound = Rational(mass, r);
    rep.lower_bound = Rational(mass - (r - 1) * e);
    const Rational induced(static_cast<std::int64_t>(rep.induced_edges));
    rep.upper_holds = induced <= rep.upper_bound;
    rep.lower_holds = induced >= rep.lower_bound;
    if (!rep.upper_holds || !rep.lower_holds)
        throw InvariantViolation("degree-measure inequality failed: e(G[S])=" + std::to_string(rep.induced_edges) +
                                 " upper=" + rep.upper_bound.str() + " lower=" + rep.lower_bound.str());
    return rep;
}

// ---------------------------------------------------------------------------
// Text format: header `r n m`, then m lines of r vertex indices. Lines
// starting with '#' are comments.

struct ParsedHypergraph {
    Hypergraph graph;
    std::vector<std::string> warnings;
};

inline ParsedHypergraph parse_hypergraph(std::string_view text, const Caps& caps = {}) {
    std::istringstream in{std::string(text)};
    std::string line;
    std::size_t line_no = 0;
    std::optional<std::array<std::uint64_t, 3>> header;
    std::vector<std::vector<Vertex>> edges;

    auto fields = [&](const std::string& l) {
        std::vector<std::uint64_t> out;
        std::istringstream ls(l);
        std::string tok;
        while (ls >> tok) {
            std::uint64_t v = 0;
            auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
            if (ec != std::errc{} || ptr != tok.data() + tok.size())
                throw InputError("line " + std::to_string(line_no) + ": not a non-negative integer: '" + tok + "'");
            out.push_back(v);
        }
        return out;
    };

    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        const auto first = line.find_first_not_of(" \t");
        if (first == std::string::npos || line[first] == '#') continue;
        auto f = fields(line);
        if (!header) {
            if (f.size() != 3) throw InputError("line " + std::to_string(line_no) + ": header must be 'r n m'");
            header = std::array<std::uint64_t, 3>{f[0], f[1], f[2]};
            if (f[0] < 2) throw InputError("uniformity must be at least 2");
            if (f[1] > caps.max_vertices)
                throw CapExceeded("vertex count " + std::to_string(f[1]) + " exceeds cap " +
                                  std::to_string(caps.max_vertices));
            if (f[2] > caps.max_edges)
                throw CapExceeded("edge count " + std::to_string(f[2]) + " exceeds cap " +
                                  std::to_string(caps.max_edges));
            continue;
        }
        const auto r = (*header)[0];
        const auto n = (*header)[1];
        if (f.size() != r)
            throw InputError("line " + std::to_string(line_no) + ": uniformity mismatch, expected " +
                             std::to_string(r) + " vertices, got " + std::to_string(f.size()));
        std::vector<Vertex> e;
        for (auto v : f) {
            if (v >= n)
                throw InputError("line " + std::to_string(line_no) + ": vertex index " + std::to_string(v) +
                                 " out of range (n=" + std::to_string(n) + ")");
            e.push_back(static_cast<Vertex>(v));
        }
        std::sort(e.begin(), e.end());
        if (std::adjacent_find(e.begin(), e.end()) != e.end())
            throw InputError("line " + std::to_string(line_no) + ": duplicate vertex within an edge");
        edges.push_back(std::move(e));
    }
    if (!header) throw InputError("missing header line 'r n m'");

    const auto raw = edges.size();
    std::size_t dropped = 0;
    ParsedHypergraph out;
    out.graph = Hypergraph::from_edges((*header)[0], (*header)[1], std::move(edges), caps, &dropped);
    const auto declared = (*header)[2];
    if (declared != raw && declared != out.graph.edge_count())
        throw InputError("header declares " + std::to_string(declared) + " edges but file has " +
                         std::to_string(raw) + " edge lines");
    if (dropped > 0) out.warnings.push_back("dropped " + std::to_string(dropped) + " duplicate edge(s)");
    return out;
}

inline ParsedHypergraph load_hypergraph(const std::string& path, const Caps& caps = {}) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open '" + path + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_hypergraph(buf.str(), caps);
}

/// Canonical text form: header, then edges in lexicographic order.
inline std::string format_hypergraph(const Hypergraph& g) {
    std::string out = std::to_string(g.uniformity()) + " " + std::to_string(g.label_count()) + " " +
                      std::to_string(g.edge_count()) + "\n";
    for (std::size_t i = 0; i < g.edge_count(); ++i) {
        const auto e = g.edge(i);
        for (std::size_t k = 0; k < e.size(); ++k) {
            if (k) out += ' ';
            out += std::to_string(e[k]);
        }
        out += '\n';
    }
    return out;
}

}  // namespace hgc
