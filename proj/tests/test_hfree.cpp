#include <gtest/gtest.h>

#include "test_support.hpp"

namespace hgc {
namespace {

const PatternGraph k3 = PatternGraph::complete(3);

/// 4-cycle 0-1-2-3-0.
PatternGraph c4() {
    PatternGraph p;
    p.ell = 2;
    p.vertex_count = 4;
    p.edges = {{0, 1}, {1, 2}, {2, 3}, {0, 3}};
    return p;
}

EllGraph graph_from_mask(std::size_t n, std::uint64_t mask) {
    const EllSetCodec codec(n, 2);
    return EllGraph(codec, VertexSet::from_mask(codec.size(), mask));
}

std::size_t overlaps_bruteforce(const Hypergraph& g) {
    std::size_t count = 0;
    for (std::size_t a = 0; a < g.edge_count(); ++a)
        for (std::size_t b = a + 1; b < g.edge_count(); ++b) {
            std::size_t common = 0;
            for (auto x : g.edge(a))
                for (auto y : g.edge(b)) common += x == y;
            count += common >= 2 ? 1 : 0;
        }
    return count;
}

TEST(EllSetCodec, ColexRoundTrip) {
    for (std::size_t ell = 1; ell <= 4; ++ell) {
        const EllSetCodec codec(9, ell);
        EXPECT_EQ(codec.size(), binomial(9, ell));
        for (std::uint64_t r = 0; r < codec.size(); ++r) {
            const auto s = codec.unrank(r);
            ASSERT_TRUE(std::is_sorted(s.begin(), s.end()));
            ASSERT_EQ(std::adjacent_find(s.begin(), s.end()), s.end());
            ASSERT_EQ(codec.rank(s), r);
        }
    }
    const EllSetCodec pairs(5, 2);
    for (Vertex b = 1; b < 5; ++b)
        for (Vertex a = 0; a < b; ++a) EXPECT_EQ(pairs.rank(std::vector<Vertex>{a, b}), testing::pair_bit(a, b));
    EXPECT_THROW(EllSetCodec(2, 3), InputError);
}

TEST(PatternGraph, DensityParameters) {
    EXPECT_EQ(k3.sigma(), Rational(1, 6));
    EXPECT_EQ(k3.m_density(), Rational(2));
    EXPECT_EQ(PatternGraph::complete(4).m_density(), Rational(5, 2));
    EXPECT_FALSE(k3.has_isolated_vertex());
    PatternGraph single;
    single.vertex_count = 2;
    single.edges = {{0, 1}};
    EXPECT_THROW(single.validate_for_pipeline(), InputError);
}

TEST(EnumerateCopies, TriangleExamples) {
    const auto g3 = enumerate_copies(k3, 3);
    EXPECT_EQ(g3.graph.label_count(), 3u);
    ASSERT_EQ(g3.graph.edge_count(), 1u);
    EXPECT_EQ(std::vector<Vertex>(g3.graph.edge(0).begin(), g3.graph.edge(0).end()), (std::vector<Vertex>{0, 1, 2}));
    const auto g4 = enumerate_copies(k3, 4);
    EXPECT_EQ(g4.graph.label_count(), 6u);
    EXPECT_EQ(g4.graph.edge_count(), 4u);
    EXPECT_EQ(enumerate_copies(k3, 7).graph.edge_count(), binomial(7, 3));
    EXPECT_EQ(enumerate_copies(c4(), 6).graph.edge_count(), 3 * binomial(6, 4));
}

TEST(EnumerateCopies, IndependentOfThreadCount) {
    const auto a = enumerate_copies(c4(), 7, {}, 1);
    const auto b = enumerate_copies(c4(), 7, {}, 3);
    EXPECT_EQ(format_hypergraph(a.graph), format_hypergraph(b.graph));
}

TEST(EnumerateCopies, EnforcesCaps) {
    CopyCaps caps;
    caps.max_injections = 10;
    EXPECT_THROW(enumerate_copies(k3, 6, caps), CapExceeded);
}

TEST(OverlappingPairs, Examples) {
    EXPECT_EQ(overlapping_pairs(enumerate_copies(k3, 4).graph).count, 0u);
    for (std::size_t n : {5u, 6u}) {
        const auto g = enumerate_copies(k3, n).graph;
        EXPECT_EQ(overlapping_pairs(g).count, overlaps_bruteforce(g));
    }
    for (std::size_t n : {4u, 5u, 6u}) {
        const auto g = enumerate_copies(c4(), n).graph;
        EXPECT_EQ(overlapping_pairs(g).count, overlaps_bruteforce(g)) << n;
        EXPECT_EQ(overlapping_pair_list(g).size(), overlaps_bruteforce(g));
    }
    // each C4 overlaps the other two C4s on its own four vertices
    EXPECT_EQ(overlapping_pairs(enumerate_copies(c4(), 4).graph).count, 3u);
    const auto capped = overlapping_pairs(enumerate_copies(c4(), 6).graph, 2);
    EXPECT_TRUE(capped.overflow);
}

TEST(OverlappingPairs, MatchesBruteForceOnRandomHypergraphs) {
    for (std::uint64_t seed = 0; seed < 30; ++seed) {
        const auto g = testing::random_hypergraph(3 + seed % 2, 15, 30, seed);
        EXPECT_EQ(overlapping_pairs(g).count, overlaps_bruteforce(g));
    }
}

TEST(Simplify, OutputIsAlwaysSimple) {
    const auto cg = enumerate_copies(c4(), 8);
    const auto [rho, rho_prime] = default_rho(c4());
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const auto s = simplify(cg, rho, rho_prime, seed);
        EXPECT_TRUE(is_simple(s.graph).simple);
        EXPECT_EQ(overlapping_pairs(s.graph).count, 0u);
        EXPECT_EQ(s.graph.label_count(), cg.graph.label_count());
        EXPECT_EQ(s.kept_edges.size(), s.graph.edge_count());
        EXPECT_EQ(s.kept_edges.size() + s.removed_edges.size(), s.sampled_edges);
        EXPECT_DOUBLE_EQ(s.expected_edges, s.p * static_cast<double>(cg.graph.edge_count()));
    }
}

TEST(Simplify, SamplingProbabilityFollowsFormula) {
    const auto cg = enumerate_copies(k3, 5);
    const auto s = simplify(cg, 0.3, 0.5, 1);
    EXPECT_DOUBLE_EQ(s.p_formula, std::pow(5.0, -0.5));
    EXPECT_DOUBLE_EQ(s.p, s.p_formula);
    EXPECT_FALSE(s.regime_invalid);
    EXPECT_DOUBLE_EQ(s.degree_target, std::pow(5.0, 0.3));
    EXPECT_THROW(simplify(cg, 0.5, 0.3, 1), InputError);
    EXPECT_THROW(simplify(cg, 0.3, 0.5, 1, 0), InputError);
}

TEST(Simplify, DeterministicForSeed) {
    const auto cg = enumerate_copies(c4(), 7);
    const auto a = simplify(cg, 0.8, 0.9, 5);
    const auto b = simplify(cg, 0.8, 0.9, 5);
    EXPECT_EQ(a.kept_edges, b.kept_edges);
    EXPECT_EQ(a.attempts, b.attempts);
}

TEST(CountCopies, Examples) {
    EXPECT_EQ(count_copies(graph_from_mask(4, 0b111111), k3), 4u);
    EXPECT_EQ(count_copies(graph_from_mask(3, 0b111), k3), 1u);
    EXPECT_EQ(count_copies(graph_from_mask(4, 0b011111), k3), 2u);
    EXPECT_EQ(count_copies(graph_from_mask(4, 0b111111), c4()), 3u);
}

TEST(CountCopies, MatchesInducedEdgeCountAndTriangleOracle) {
    for (std::size_t n = 3; n <= 5; ++n) {
        const auto cg = enumerate_copies(k3, n);
        const std::uint64_t slots = binomial(n, 2);
        for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << slots); ++mask) {
            const auto l = graph_from_mask(n, mask);
            const auto c = count_copies(l, k3);
            ASSERT_EQ(c, cg.graph.induced_edge_count(l.edges));
            ASSERT_EQ(c, testing::mask_triangle_count(mask, n));
        }
    }
}

TEST(CountCopies, MatchesInducedEdgeCountForC4) {
    const std::size_t n = 6;
    const auto cg = enumerate_copies(c4(), n);
    CounterEngine eng(2);
    for (int t = 0; t < 100; ++t) {
        const auto l = EllGraph(cg.codec, testing::random_subset(cg.codec.size(), eng.uniform(), eng));
        ASSERT_EQ(count_copies(l, c4()), cg.graph.induced_edge_count(l.edges));
    }
}

TEST(HfreeEquivalence, IndependentSetsAreTriangleFreeGraphs) {
    for (std::size_t n = 3; n <= 5; ++n) {
        const auto cg = enumerate_copies(k3, n);
        std::vector<std::uint64_t> free;
        const std::uint64_t slots = binomial(n, 2);
        for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << slots); ++mask)
            if (!testing::mask_has_triangle(mask, n)) free.push_back(mask);
        std::vector<std::uint64_t> indep;
        for (const auto& s : all_independent_sets(cg.graph, 1u << 20)) indep.push_back(s.low_word());
        EXPECT_EQ(indep, free) << n;
    }
}

// Triangle-free graph counts on [N] and ex(N, K3), from exhaustive bitmask enumeration.
TEST(BruteForceHfree, TriangleCensus) {
    const std::vector<std::pair<std::uint64_t, std::size_t>> expected = {{7, 2}, {41, 4}, {388, 6}, {5789, 9}};
    for (std::size_t n = 3; n <= 6; ++n) {
        const auto c = brute_force_hfree(k3, n);
        EXPECT_EQ(c.count, expected[n - 3].first) << n;
        EXPECT_EQ(c.extremal, expected[n - 3].second) << n;
        EXPECT_EQ(c.extremal, n * n / 4);
        EXPECT_EQ(c.slots, binomial(n, 2));
        EXPECT_EQ(c.pi_hat, Rational(static_cast<std::int64_t>(n * n / 4), static_cast<std::int64_t>(binomial(n, 2))));
    }
    const auto oracle = testing::triangle_census_bruteforce(5);
    EXPECT_EQ(brute_force_hfree(k3, 5).count, oracle.triangle_free);
}

TEST(BruteForceHfree, EmitsExactlyTheFreeGraphs) {
    const auto cg = enumerate_copies(c4(), 5);
    std::vector<VertexSet> emitted;
    const auto c = brute_force_hfree(c4(), 5, [&](const VertexSet& s) { emitted.push_back(s); });
    std::sort(emitted.begin(), emitted.end());
    EXPECT_EQ(emitted, all_independent_sets(cg.graph, 1u << 20));
    EXPECT_EQ(c.count, emitted.size());
    EXPECT_THROW(brute_force_hfree(k3, 9), CapExceeded);
}

TEST(SparseTuran, DegenerateProbabilities) {
    const auto full = sparse_turan_experiment(k3, 6, 1.0, 0.2, 3, 1);
    for (const auto& row : full.rows) {
        EXPECT_EQ(row.sampled_edges, 15u);
        EXPECT_EQ(row.max_hfree, 9u);
    }
    const auto none = sparse_turan_experiment(k3, 6, 0.0, 0.2, 3, 1);
    for (const auto& row : none.rows) {
        EXPECT_EQ(row.max_hfree, 0u);
        EXPECT_FALSE(row.exceeds);
    }
    EXPECT_THROW(sparse_turan_experiment(k3, 6, 0.5, 1.5, 3, 1), InputError);
    EXPECT_THROW(sparse_turan_experiment(k3, 6, 1.5, 0.5, 3, 1), InputError);
}

TEST(SparseTuran, MaximaAreHfreeAndIndependentOfThreads) {
    const auto a = sparse_turan_experiment(k3, 7, 0.5, 0.2, 12, 4, 1);
    const auto b = sparse_turan_experiment(k3, 7, 0.5, 0.2, 12, 4, 3);
    for (std::size_t t = 0; t < a.rows.size(); ++t) {
        EXPECT_EQ(a.rows[t].max_hfree, b.rows[t].max_hfree);
        EXPECT_LE(a.rows[t].max_hfree, std::min<std::size_t>(a.rows[t].sampled_edges, 12));
    }
    EXPECT_NEAR(a.threshold, (12.0 / 21.0 + 0.2) * 0.5 * 21.0, 1e-12);
}

TEST(Pipeline, CoversEveryTriangleFreeGraph) {
    PipelineOptions opt;
    opt.seed = 2;
    opt.verify = true;
    const auto [rho, rho_prime] = default_rho(k3);
    const auto rep = hfree_container_pipeline(k3, 5, 0.2, Rational(1, 10), rho, rho_prime, opt);
    ASSERT_TRUE(rep.coverage.has_value());
    EXPECT_EQ(rep.coverage->checked, 388u);
    if (rep.collection.failures == 0) {
        EXPECT_EQ(rep.coverage->uncovered_count, 0u);
    }
    EXPECT_EQ(rep.sigma, Rational(1, 6));
    EXPECT_NEAR(rep.nls_exponent, 11.0 / 6.0, 1e-15);
    EXPECT_NEAR(rep.nls_bound, std::pow(5.0, 11.0 / 6.0), 1e-9);
    EXPECT_TRUE(rep.nls_bound_vacuous);
    EXPECT_EQ(rep.eta, Rational(1, 5));
    ASSERT_TRUE(rep.census.has_value());
    EXPECT_EQ(rep.census->count, 388u);
}

TEST(Pipeline, RejectsBadParameters) {
    EXPECT_THROW(hfree_container_pipeline(k3, 5, 0.2, Rational(1, 10), 0.1, 0.5), InputError);
    EXPECT_THROW(hfree_container_pipeline(k3, 5, 0.0, Rational(1, 10), 0.9, 0.95), InputError);
    EXPECT_THROW(hfree_container_pipeline(k3, 5, 0.2, Rational(3, 2), 0.9, 0.95), InputError);
}

TEST(ConsequenceCheck, Examples) {
    const auto g = Hypergraph::from_edges(2, 4, {{0, 1}, {1, 2}, {2, 3}, {0, 3}});
    const auto s = g.with_edges({0});
    const auto c = check_sparsification_consequence(g, s, VertexSet::of(4, {0, 1}), Rational(1, 4));
    EXPECT_TRUE(c.premise);
    EXPECT_TRUE(c.holds);
    const auto d = check_sparsification_consequence(g, s, VertexSet::of(4, {2, 3}), Rational(1, 4));
    EXPECT_TRUE(d.premise);
    EXPECT_FALSE(d.holds);
    const auto e = check_sparsification_consequence(g, s, VertexSet::of(4, {2}), Rational(1, 4));
    EXPECT_FALSE(e.premise);
    EXPECT_TRUE(e.holds);
}

}  // namespace
}  // namespace hgc
