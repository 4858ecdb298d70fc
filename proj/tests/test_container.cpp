#include <gtest/gtest.h>

#include <cmath>

#include "test_support.hpp"

namespace hgc {
namespace {

Hypergraph path3() { return parse_hypergraph("2 3 2\n0 1\n1 2\n").graph; }

Hypergraph fano() {
    return parse_hypergraph("3 7 7\n0 1 2\n0 3 4\n0 5 6\n1 3 5\n1 4 6\n2 3 6\n2 4 5\n").graph;
}

TEST(ComputeParams, Examples) {
    const auto a = compute_params(2, Rational(600));
    EXPECT_NEAR(a.u, 0.057735, 1e-6);
    EXPECT_NEAR(a.q, 1.73205, 1e-5);
    EXPECT_TRUE(a.vacuous);

    const auto b = compute_params(2, Rational(100000000));
    // (1/sqrt 6) * sqrt(12e-8) = sqrt(2) * 1e-4
    EXPECT_NEAR(b.u, std::sqrt(2.0) * 1e-4, 1e-15);
    EXPECT_NEAR(b.q, 30 * std::sqrt(2.0) * 1e-4, 1e-12);
    EXPECT_FALSE(b.vacuous);
    EXPECT_EQ(b.measure_threshold, Rational(1, 16));
}

TEST(ComputeParams, SamplingIdentity) {
    for (std::size_t r = 2; r <= 6; ++r)
        for (std::int64_t d : {100, 10000, 100000000, 7, 333}) {
            const auto p = compute_params(r, Rational(d));
            for (std::size_t j = 0; j < r; ++j) {
                const double lhs = std::pow(p.p_by_j[j], static_cast<double>(r - 1)) * static_cast<double>(d) *
                                   std::pow(p.u, static_cast<double>(j));
                EXPECT_NEAR(lhs / (6.0 * static_cast<double>(r)), 1.0, 1e-12) << r << " " << d << " " << j;
            }
        }
}

// p_{r-1} = 3ru = q/5 exactly, and p_j grows with j while u < 1.
TEST(ComputeParams, SamplingProbabilityAtMostFifthOfQ) {
    for (std::size_t r = 2; r <= 6; ++r)
        for (std::int64_t d : {100, 10000, 100000000}) {
            const auto p = compute_params(r, Rational(d));
            if (p.u > 1.0) continue;
            EXPECT_NEAR(p.p_by_j[r - 1] / (p.q / 5.0), 1.0, 1e-12);
            for (std::size_t j = 0; j < r; ++j) EXPECT_LE(p.p_by_j[j], p.q / 5.0 * (1.0 + 1e-12));
        }
}

TEST(ComputeParams, RejectsBadInput) {
    EXPECT_THROW(compute_params(1, Rational(5)), InputError);
    EXPECT_THROW(compute_params(2, Rational(0)), InputError);
    EXPECT_THROW(compute_params(2, Rational(-3)), InputError);
}

TEST(ComputeParams, SamplingProbabilityIsClamped) {
    const auto p = compute_params(3, Rational(2));
    for (std::size_t j = 0; j < 3; ++j) EXPECT_LE(p.sampling_probability(j), 1.0);
}

TEST(Gamma, Examples) {
    const auto g = path3();
    EXPECT_EQ(gamma(g, 0, VertexSet(3), VertexSet::of(3, {1})), VertexSet::of(3, {0, 2}));
    EXPECT_TRUE(gamma(g, 1, VertexSet(3), VertexSet(3)).empty());

    const auto e = Hypergraph::from_edges(3, 3, {{0, 1, 2}});
    EXPECT_EQ(gamma(e, 1, VertexSet::of(3, {0}), VertexSet::of(3, {1})), VertexSet::of(3, {2}));
    EXPECT_THROW(gamma(e, 3, VertexSet(3), VertexSet(3)), InputError);
}

TEST(Gamma, MatchesLiteralEnumeration) {
    CounterEngine eng(21);
    for (std::uint64_t seed = 0; seed < 60; ++seed) {
        const std::size_t r = 2 + seed % 4;
        const auto g = testing::random_hypergraph(r, 25, 40, seed);
        for (int t = 0; t < 30; ++t) {
            const auto rs = testing::random_subset(25, eng.uniform(), eng);
            const auto ss = testing::random_subset(25, eng.uniform(), eng);
            for (std::size_t j = 0; j < r; ++j)
                ASSERT_EQ(gamma(g, j, rs, ss), testing::gamma_bruteforce(g, j, rs, ss)) << seed << " " << j;
        }
    }
}

TEST(Gamma, MonotoneInRAndS) {
    CounterEngine eng(5);
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const auto g = testing::random_hypergraph(3, 30, 60, seed);
        const auto rs = testing::random_subset(30, 0.3, eng);
        const auto ss = testing::random_subset(30, 0.3, eng);
        const auto rs2 = rs | testing::random_subset(30, 0.2, eng);
        const auto ss2 = ss | testing::random_subset(30, 0.2, eng);
        for (std::size_t j = 0; j < 3; ++j) EXPECT_TRUE(gamma(g, j, rs, ss).is_subset_of(gamma(g, j, rs2, ss2)));
    }
}

TEST(Fingerprint, StringRoundTrip) {
    const Fingerprint fp{2, VertexSet::of(9, {0, 8}), VertexSet(9), VertexSet::of(9, {3})};
    EXPECT_EQ(fp.str(), "j=2; R=0,8; S=; T=3");
    EXPECT_EQ(Fingerprint::parse(9, fp.str()), fp);
    EXPECT_THROW(Fingerprint::parse(9, "j=x; R=; S=; T="), InputError);
    EXPECT_THROW(Fingerprint::parse(9, "j=0; R=; S="), InputError);
}

TEST(ContainerFromFingerprint, Examples) {
    const auto g = path3();
    EXPECT_TRUE(container_from_fingerprint(g, {0, VertexSet(3), VertexSet(3), VertexSet(3)}).empty());
    MeasureValue removed;
    const auto c = container_from_fingerprint(g, {0, VertexSet(3), VertexSet::of(3, {1}), VertexSet(3)}, &removed);
    EXPECT_EQ(c, VertexSet::of(3, {1}));
    EXPECT_EQ(removed.value(), Rational(1, 2));
}

TEST(FingerprintStep, EmptySetIsCovered) {
    const auto g = fano();
    const auto params = compute_params(3, g.average_degree());
    const auto out = fingerprint_independent_set(g, VertexSet(7), params, CounterRng(1));
    ASSERT_TRUE(out.accepted);
    EXPECT_TRUE(out.fingerprint.t_set.empty());
    EXPECT_TRUE(meets_threshold(out.gamma_measure, 3));
}

TEST(FingerprintStep, SingleEdgeRemovesEnoughMass) {
    const auto g = Hypergraph::from_edges(3, 6, {{0, 1, 2}});
    const auto params = compute_params(3, g.average_degree());
    const auto out = fingerprint_independent_set(g, VertexSet::of(6, {0, 1}), params, CounterRng(4));
    ASSERT_TRUE(out.accepted);
    const auto removed = g.universe() - out.container;
    EXPECT_TRUE(meets_threshold(degree_measure(g, removed), 3));
    EXPECT_TRUE(VertexSet::of(6, {0, 1}).is_subset_of(out.container));
}

TEST(FingerprintStep, PropertiesOnRandomSimpleGraphs) {
    for (std::uint64_t seed = 0; seed < 300; ++seed) {
        const auto g = testing::random_simple_hypergraph(3, 60, 400, seed);
        ASSERT_GT(g.edge_count(), 0u);
        CounterEngine eng(seed, 9);
        const auto indep = testing::random_independent_set(g, eng);
        const auto params = compute_params(3, g.average_degree());
        const auto out = fingerprint_independent_set(g, indep, params, CounterRng(seed));
        if (!out.container.empty()) {
            ASSERT_TRUE(indep.is_subset_of(out.container));
        }
        ASSERT_EQ(container_from_fingerprint(g, out.fingerprint), out.container);
        ASSERT_EQ(out.fingerprint.t_set, gamma(g, out.fingerprint.j, out.fingerprint.r_set, out.fingerprint.s_set) & indep);
        ASSERT_TRUE(out.fingerprint.r_set.is_subset_of(indep));
        ASSERT_FALSE(out.fingerprint.s_set.intersects(indep));
        if (out.accepted) {
            ASSERT_LE(degree_measure(g, out.container).value(), Rational(35, 36));
            ASSERT_LE(static_cast<double>(out.fingerprint.r_set.count()), out.size_cap);
            ASSERT_LE(static_cast<double>(out.fingerprint.s_set.count()), out.size_cap);
            ASSERT_LE(static_cast<double>(out.fingerprint.t_set.count()), out.size_cap);
        }
    }
}

TEST(FingerprintStep, BudgetExhaustionReturnsBestUnaccepted) {
    const auto g = fano();
    auto params = compute_params(3, g.average_degree());
    params.q = 0;  // size caps of zero reject any nonempty R or S
    const auto out = fingerprint_independent_set(g, VertexSet::of(7, {0, 1}), params, CounterRng(2), {5, 0});
    EXPECT_FALSE(out.accepted);
    EXPECT_EQ(out.attempts, 5u);
    if (!out.container.empty()) {
        EXPECT_TRUE(VertexSet::of(7, {0, 1}).is_subset_of(out.container));
    }
}

TEST(FingerprintStep, DeterministicForSeed) {
    const auto g = testing::random_simple_hypergraph(3, 40, 200, 3);
    const auto params = compute_params(3, g.average_degree());
    const auto a = fingerprint_independent_set(g, VertexSet(40), params, CounterRng(8));
    const auto b = fingerprint_independent_set(g, VertexSet(40), params, CounterRng(8));
    EXPECT_EQ(a.fingerprint, b.fingerprint);
    EXPECT_EQ(a.container, b.container);
}

TEST(FingerprintStep, RejectsBadInput) {
    const auto g = fano();
    const auto params = compute_params(3, g.average_degree());
    EXPECT_THROW(fingerprint_independent_set(g, VertexSet::of(7, {0, 1, 2}), params, CounterRng(0)), InputError);
    EXPECT_THROW(fingerprint_independent_set(g, VertexSet(7), compute_params(2, Rational(3)), CounterRng(0)), InputError);
    EXPECT_THROW(fingerprint_independent_set(g, VertexSet(7), params, CounterRng(0), {0, 0}), InputError);
    const auto bad = Hypergraph::from_edges(3, 5, {{0, 1, 2}, {0, 1, 3}});
    try {
        fingerprint_independent_set(bad, VertexSet(5), compute_params(3, bad.average_degree()), CounterRng(0));
        FAIL();
    } catch (const NotSimpleError& e) {
        EXPECT_EQ(e.first_edge, 0u);
        EXPECT_EQ(e.second_edge, 1u);
    }
}

TEST(LevelBound, MatchesIndependentEvaluation) {
    EXPECT_EQ(level_bound(2, Rational(1, 10)), 37u);
    for (std::size_t r = 2; r <= 5; ++r)
        for (const Rational& d : {Rational(1, 10), Rational(1, 2), Rational(1, 100), Rational(3, 7)})
            EXPECT_EQ(level_bound(r, d), testing::level_bound_by_loop(r, d)) << r << " " << d.str();
}

// The first level always runs: C_0 = V spans e(G) >= delta e(G) edges.
TEST(Iterate, StartsFromFullVertexSet) {
    const auto g = fano();
    const auto trace = iterate_containers(g, VertexSet(7), Rational(1, 2), CounterRng(0));
    EXPECT_TRUE(trace.succeeded);
    EXPECT_GE(trace.levels.size(), 1u);
    EXPECT_EQ(trace.edge_counts.front(), 7u);
}

TEST(Iterate, ContractOnRandomSimpleGraphs) {
    for (std::uint64_t seed = 0; seed < 60; ++seed) {
        const std::size_t r = 2 + seed % 3;
        const auto g = testing::random_simple_hypergraph(r, 50, 300, seed);
        CounterEngine eng(seed, 3);
        const auto indep = testing::random_independent_set(g, eng);
        const Rational delta(1, 4);
        const auto t = iterate_containers(g, indep, delta, CounterRng(seed));
        ASSERT_EQ(t.edge_counts.size(), t.levels.size() + (t.succeeded ? 1 : 0));
        ASSERT_EQ(t.k_bound, testing::level_bound_by_loop(r, delta));
        if (!t.succeeded) continue;
        const auto rr = static_cast<std::int64_t>(r);
        const Rational shrink(4 * rr * rr - 1, 4 * rr * rr);
        for (std::size_t k = 0; k + 1 < t.edge_counts.size(); ++k)
            ASSERT_LE(Rational(static_cast<std::int64_t>(t.edge_counts[k + 1])),
                      shrink * Rational(static_cast<std::int64_t>(t.edge_counts[k])));
        ASSERT_LT(Rational(static_cast<std::int64_t>(t.final_edge_count)),
                  delta * Rational(static_cast<std::int64_t>(g.edge_count())));
        ASSERT_EQ(t.final_edge_count, g.induced_edge_count(t.final_container));
        ASSERT_TRUE(indep.is_subset_of(t.final_container));
        ASSERT_TRUE(t.within_bound);
    }
}

TEST(Iterate, RejectsBadDelta) {
    const auto g = fano();
    EXPECT_THROW(iterate_containers(g, VertexSet(7), Rational(2), CounterRng(0)), InputError);
    EXPECT_THROW(iterate_containers(g, VertexSet(7), Rational(0), CounterRng(0)), InputError);
    EXPECT_THROW(iterate_containers(Hypergraph::from_edges(3, 7, {}), VertexSet(7), Rational(1, 2), CounterRng(0)),
                 UndefinedMeasure);
}

TEST(BuildCollection, EmptyFamilyMemberGivesOneContainer) {
    const auto g = fano();
    const auto rep = build_collection(g, {VertexSet(7)}, Rational(1, 4), {});
    EXPECT_EQ(rep.failures, 0u);
    EXPECT_EQ(rep.containers.size(), 1u);
}

TEST(BuildCollection, DeduplicatesIdenticalContainers) {
    const auto g = fano();
    const std::vector<VertexSet> fam(5, VertexSet(7));
    CollectionOptions opt;
    opt.seed = 3;
    const auto rep = build_collection(g, fam, Rational(1, 4), opt);
    // identical members still get independent randomness
    std::set<VertexSet> distinct;
    for (const auto& t : rep.traces) distinct.insert(t.final_container);
    EXPECT_EQ(rep.containers.size(), distinct.size());
    EXPECT_EQ(rep.coverage.size(), 5u);
}

TEST(BuildCollection, CoversEveryIndependentSetOfSmallGraphs) {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const auto g = testing::random_simple_hypergraph(3, 14, 40, seed);
        const auto fam = maximal_independent_sets(g, 1'000'000).sets;
        CollectionOptions opt;
        opt.seed = seed;
        const auto rep = build_collection(g, fam, Rational(1, 4), opt);
        if (rep.failures > 0) continue;
        const auto cov = verify_coverage(g, rep.containers, 1'000'000);
        EXPECT_EQ(cov.uncovered_count, 0u) << seed;
        EXPECT_EQ(cov.checked, testing::independent_masks(g).size());
    }
}

TEST(BuildCollection, IndependentOfThreadCount) {
    const auto g = testing::random_simple_hypergraph(2, 30, 60, 1);
    const auto fam = maximal_independent_sets(g, 100).sets;
    CollectionOptions opt;
    opt.seed = 9;
    const auto one = build_collection(g, fam, Rational(1, 4), opt);
    opt.threads = 4;
    const auto four = build_collection(g, fam, Rational(1, 4), opt);
    EXPECT_EQ(one.containers, four.containers);
    EXPECT_EQ(one.coverage, four.coverage);
}

TEST(ProofDiagnostics, Examples) {
    const auto g = path3();
    const auto params = compute_params(2, g.average_degree());
    const auto diag = proof_diagnostics(g, VertexSet::of(3, {0, 2}), 1, VertexSet::full(3), params);
    EXPECT_EQ(diag.e_counts[0], 2u);
    EXPECT_EQ(diag.e_counts[2], 0u);
    ASSERT_EQ(diag.f_sizes.size(), 1u);
    EXPECT_EQ(diag.f_sizes[0], (std::pair<Vertex, std::size_t>{1, 2}));
    EXPECT_THROW(proof_diagnostics(g, VertexSet::of(3, {0}), 1, VertexSet::of(3, {1}), params), InputError);
}

TEST(ProofDiagnostics, TopCountIsZeroForIndependentSets) {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const std::size_t r = 2 + seed % 3;
        const auto g = testing::random_hypergraph(r, 30, 50, seed);
        CounterEngine eng(seed);
        const auto indep = testing::random_independent_set(g, eng);
        const auto params = compute_params(r, g.average_degree());
        const auto diag = proof_diagnostics(g, indep, 0, g.universe(), params);
        EXPECT_EQ(diag.e_counts[0], g.edge_count());
        EXPECT_EQ(diag.e_counts[r], 0u);
        for (std::size_t k = 0; k < r; ++k) EXPECT_GE(diag.e_counts[k], diag.e_counts[k + 1]);
    }
}

}  // namespace
}  // namespace hgc
