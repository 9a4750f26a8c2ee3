#include "helpers.hpp"
#include "oracle.hpp"

#include <cqc/gadgets.hpp>
#include <cqc/generate.hpp>
#include <cqc/hom.hpp>
#include <cqc/params.hpp>

#include <gtest/gtest.h>

#include <cmath>

using namespace cqc;
using namespace testing_helpers;

namespace {
BigInt brute_dominating_sets(const Structure& g, int size)
{
    int n = g.size();
    BigInt total = 0;
    for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
        if (__builtin_popcount(mask) != size)
            continue;
        bool ok = true;
        for (int v = 0; v < n && ok; ++v) {
            bool dom = mask >> v & 1;
            for (int u = 0; u < n && ! dom; ++u)
                dom = (mask >> u & 1) && g.adjacent(u, v);
            ok = dom;
        }
        total += ok;
    }
    return total;
}

}

TEST(Families, Sizes)
{
    EXPECT_EQ(family_query(FamilyKind::psi, 4).h.size(), 5);
    EXPECT_EQ(family_query(FamilyKind::gamma, 3).h.edges().size(), 6u);
    auto w = family_query(FamilyKind::omega, 4);
    EXPECT_EQ(w.h.size(), 14);
    EXPECT_EQ(w.free.size(), 4u);
    // 4 pendant edges, 6 horizontal and 6 vertical grid edges
    EXPECT_EQ(w.h.edges().size(), 16u);
    EXPECT_EQ(family_query(FamilyKind::poly, 4).h.size(), 7);
    EXPECT_EQ(family_query(FamilyKind::subdivided, 4).h.size(), 10);
    EXPECT_TRUE(family_query(FamilyKind::w1, 3).free.empty());
    EXPECT_EQ(family_query(FamilyKind::phi, 3).h.edges().size(), 6u);
    EXPECT_THROW(parse_family("zeta"), ModelError);
    EXPECT_EQ(parse_family(family_name(FamilyKind::omega)), FamilyKind::omega);
}

TEST(Families, GrateIndexing)
{
    EXPECT_EQ(grate_quantified(4, 0, 0), 4);
    EXPECT_EQ(grate_quantified(4, 0, 3), 7);
    EXPECT_EQ(grate_quantified(4, 1, 0), 8);
    EXPECT_EQ(grate_quantified(4, 3, 0), 13);
    EXPECT_THROW(grate_quantified(4, 2, 2), ModelError);
}

TEST(Families, PhiCounts)
{
    auto phi3 = family_query(FamilyKind::phi, 3);
    EXPECT_EQ(count_answers(phi3, complete(4)), 24);
    EXPECT_EQ(count_answers(family_query(FamilyKind::phi, 4), complete(4)), 0);
    EXPECT_EQ(count_answers(family_query(FamilyKind::phi, 2), triangle_pendant()), 6);
}

TEST(Minor, Operations)
{
    auto psi = family_query(FamilyKind::psi, 3);
    auto c = apply_query_minor(psi, {MinorOp::Kind::contract_edge, 3, 0});
    EXPECT_EQ(c.query.h.size(), 3);
    EXPECT_EQ(c.query.free, (std::vector<int>{0, 1, 2}));
    EXPECT_EQ(c.query.h.edges().size(), 2u);
    auto d = apply_query_minor(psi, {MinorOp::Kind::delete_edge, 0, 3});
    EXPECT_EQ(d.query.h.edges().size(), 2u);
    auto v = apply_query_minor(d.query, {MinorOp::Kind::delete_vertex, 0, -1});
    EXPECT_EQ(v.query.free, (std::vector<int>{0, 1}));
    EXPECT_EQ(v.query.quantified(), (std::vector<int>{2}));
    EXPECT_THROW(apply_query_minor(psi, {MinorOp::Kind::delete_vertex, 0, -1}), ModelError);
    EXPECT_THROW(apply_query_minor(psi, {MinorOp::Kind::delete_edge, 0, 1}), ModelError);
}

TEST(Minor, InstancePreservesColorfulCount)
{
    Rng rng(21);
    int checked = 0;
    for (int trial = 0; trial < 150; ++trial) {
        auto q = random_graph_query(rng, 5, 1 + trial % 3, 0.5);
        auto edges = q.h.edges();
        MinorOp op;
        int kind = trial % 3;
        if (kind < 2 && edges.empty())
            continue;
        if (kind == 0) {
            auto e = edges[rng() % edges.size()];
            op = {MinorOp::Kind::delete_edge, e.first, e.second};
        }
        else if (kind == 1) {
            auto e = edges[rng() % edges.size()];
            op = {MinorOp::Kind::contract_edge, e.second, e.first};
        }
        else {
            std::vector<int> iso;
            for (int v = 0; v < q.h.size(); ++v)
                if (gaifman_graph(q.h).neighbours()[v].empty())
                    iso.push_back(v);
            if (iso.empty())
                continue;
            op = {MinorOp::Kind::delete_vertex, iso[rng() % iso.size()], -1};
        }
        auto minor = apply_query_minor(q, op);
        auto ct = random_colored_target(rng, minor.query.h, 2, 0.6);
        auto out = minor_instance_gadget(q, op, ct.target, ct.coloring);
        ASSERT_TRUE(is_valid_coloring(out.target, q.h, out.coloring));
        EXPECT_EQ(oracle::count_cp(minor.query, ct.target, ct.coloring), oracle::count_cp(q, out.target, out.coloring))
            << trial;
        ++checked;
    }
    EXPECT_GT(checked, 60);
}

TEST(Bridges, UncoloredToColorPrescribed)
{
    Rng rng(5);
    for (int trial = 0; trial < 40; ++trial) {
        auto q = random_graph_query(rng, 4, trial % 3, 0.5);
        auto t = random_graph(rng, 4, 0.5);
        auto out = uncolored_to_cp_gadget(q, t);
        ASSERT_TRUE(is_valid_coloring(out.target, q.h, out.coloring));
        EXPECT_EQ(count_cp_answers(q, out.target, out.coloring), oracle::count_answers(q, t)) << trial;
    }
    Signature sig({{"R", 3}, {"U", 1}});
    for (int trial = 0; trial < 30; ++trial) {
        auto q = random_query(rng, sig, 3, 1 + trial % 2, 0.3);
        auto t = random_structure(rng, sig, 3, 0.3);
        auto out = uncolored_to_cp_gadget(q, t);
        EXPECT_EQ(count_cp_answers(q, out.target, out.coloring), oracle::count_answers(q, t)) << trial;
    }
}

TEST(Bridges, ColorfulThroughUncoloredOracle)
{
    Rng rng(9);
    int checked = 0;
    for (int trial = 0; trial < 80 && checked < 25; ++trial) {
        auto q = random_graph_query(rng, 4, 1 + trial % 3, 0.5);
        if (! is_minimal(q)) {
            EXPECT_THROW(cf_count_via_uncolored(q, Structure(Signature::graph(), 0), {}), ModelError);
            continue;
        }
        auto ct = random_colored_target(rng, q.h, 2, 0.6);
        auto res = cf_count_via_uncolored(q, ct.target, ct.coloring, [](const Query& a, const Structure& b) {
            return oracle::count_answers(a, b);
        });
        EXPECT_EQ(res.cf, oracle::count_cf(q, ct.target, ct.coloring)) << trial;
        EXPECT_EQ(res.cp, oracle::count_cp(q, ct.target, ct.coloring)) << trial;
        EXPECT_EQ(res.oracle_calls, int(std::pow(q.free.size() + 1, q.free.size())));
        ++checked;
    }
    EXPECT_GE(checked, 10);
}

TEST(Domset, Surjections)
{
    EXPECT_EQ(count_surjections(3, 2), 6);
    EXPECT_EQ(count_surjections(4, 4), 24);
    EXPECT_EQ(count_surjections(2, 3), 0);
    EXPECT_EQ(count_surjections(0, 0), 1);
    EXPECT_EQ(count_surjections(5, 3), 150);
}

TEST(Domset, MatchesBruteForce)
{
    Rng rng(3);
    std::vector<Structure> graphs{complete(4), Structure(Signature::graph(), 3), star(3), cycle(5), path(4)};
    for (int i = 0; i < 10; ++i)
        graphs.push_back(random_graph(rng, 5, 0.4));
    for (auto& g : graphs)
        for (int k = 1; k <= 3; ++k) {
            auto d = domset_via_star_oracle(g, k);
            ASSERT_EQ(int(d.size()), k + 1);
            for (int l = 1; l <= k; ++l)
                EXPECT_EQ(d[l], brute_dominating_sets(g, l)) << l;
        }
}

TEST(Domset, UsesOnlyStarQueries)
{
    int calls = 0;
    auto counting = [&](const Query& q, const Structure& t, const Coloring& c) {
        EXPECT_EQ(q.free.size(), 2u);
        EXPECT_EQ(dominating_star_size(q), 2);
        ++calls;
        return count_cp_answers(q, t, c);
    };
    auto d = domset_via_star_oracle(cycle(5), 2, counting);
    EXPECT_EQ(d[2], brute_dominating_sets(cycle(5), 2));
    EXPECT_EQ(calls, 3);
}

TEST(Grate, GammaToOmega)
{
    Rng rng(17);
    for (int k = 2; k <= 3; ++k) {
        auto gamma = family_query(FamilyKind::gamma, k);
        auto omega = family_query(FamilyKind::omega, k);
        for (int trial = 0; trial < 15; ++trial) {
            auto ct = random_colored_target(rng, gamma.h, 3, 0.55);
            auto out = gamma_to_grate_gadget(k, ct.target, ct.coloring);
            ASSERT_TRUE(is_valid_coloring(out.target, omega.h, out.coloring));
            EXPECT_EQ(count_cp_answers(omega, out.target, out.coloring), oracle::count_cp(gamma, ct.target, ct.coloring))
                << k << " " << trial;
        }
    }
}

TEST(Gaifman, ExpandPreservesCount)
{
    Rng rng(29);
    Signature sig({{"R", 3}, {"S", 2}});
    int nonzero = 0;
    for (int trial = 0; trial < 40; ++trial) {
        auto q = random_query(rng, sig, 4, 1 + trial % 3, 0.15);
        auto g = gaifman_graph(q.h);
        auto gq = Query(g, q.free);
        auto ct = random_colored_target(rng, g, 2, 0.7);
        auto out = gaifman_expand_gadget(q, ct.target, ct.coloring);
        BigInt expect = oracle::count_cp(gq, ct.target, ct.coloring);
        if (out.zero) {
            EXPECT_EQ(expect, 0);
            continue;
        }
        ASSERT_TRUE(is_valid_coloring(out.target, q.h, out.coloring));
        EXPECT_EQ(oracle::count_cp(q, out.target, out.coloring), expect) << trial;
        nonzero += expect != 0;
    }
    EXPECT_GT(nonzero, 3);
}
