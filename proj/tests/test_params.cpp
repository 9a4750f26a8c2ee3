#include "helpers.hpp"

#include <cqc/gadgets.hpp>
#include <cqc/generate.hpp>
#include <cqc/params.hpp>

#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>

using namespace cqc;
using namespace testing_helpers;

namespace {
// Menger: disjoint A-B paths = smallest vertex set meeting every A-B path.
int brute_disjoint_paths(const Structure& g, const std::vector<int>& a, const std::vector<int>& b)
{
    int n = g.size();
    int best = n;
    for (std::uint32_t cut = 0; cut < (1u << n); ++cut) {
        int size = __builtin_popcount(cut);
        if (size >= best)
            continue;
        std::vector<char> seen(n, 0);
        std::vector<int> stack;
        for (int v : a)
            if (! (cut >> v & 1)) {
                seen[v] = 1;
                stack.push_back(v);
            }
        while (! stack.empty()) {
            int v = stack.back();
            stack.pop_back();
            for (int w = 0; w < n; ++w)
                if (! seen[w] && ! (cut >> w & 1) && g.adjacent(v, w)) {
                    seen[w] = 1;
                    stack.push_back(w);
                }
        }
        bool reach = std::any_of(b.begin(), b.end(), [&](int v) { return seen[v]; });
        if (! reach)
            best = size;
    }
    return best;
}

bool brute_well_linked(const Structure& g, const std::vector<int>& s)
{
    int k = int(s.size());
    int total = 1;
    for (int i = 0; i < k; ++i)
        total *= 3;
    for (int code = 0; code < total; ++code) {
        std::vector<int> a, b;
        int c = code;
        for (int i = 0; i < k; ++i, c /= 3) {
            if (c % 3 == 1)
                a.push_back(s[i]);
            else if (c % 3 == 2)
                b.push_back(s[i]);
        }
        if (a.size() == b.size() && ! a.empty() && brute_disjoint_paths(g, a, b) < int(a.size()))
            return false;
    }
    return true;
}

bool saturates(const Query& q, const Structure& g, const std::vector<int>& ys)
{
    std::vector<int> xs = q.free;
    std::sort(xs.begin(), xs.end());
    std::vector<int> pick(ys.size());
    std::function<bool(std::size_t, std::vector<char>&)> rec = [&](std::size_t i, std::vector<char>& used) {
        if (i == ys.size())
            return true;
        for (std::size_t j = 0; j < xs.size(); ++j)
            if (! used[j] && g.adjacent(xs[j], ys[i])) {
                used[j] = 1;
                if (rec(i + 1, used))
                    return true;
                used[j] = 0;
            }
        return false;
    };
    std::vector<char> used(xs.size(), 0);
    return rec(0, used);
}

int brute_lmn(const Query& q)
{
    auto ys = q.quantified();
    auto g = gaifman_graph(q.h);
    auto gy = g.induced(ys);
    int best = 0;
    for (std::uint32_t mask = 1; mask < (1u << ys.size()); ++mask) {
        std::vector<int> sel, local;
        for (std::size_t i = 0; i < ys.size(); ++i)
            if (mask >> i & 1) {
                sel.push_back(ys[i]);
                local.push_back(int(i));
            }
        if (int(sel.size()) > best && saturates(q, g, sel) && brute_well_linked(gy, local))
            best = int(sel.size());
    }
    return best;
}

std::vector<Query> family(FamilyKind kind, int from, int to)
{
    std::vector<Query> out;
    for (int k = from; k <= to; ++k)
        out.push_back(family_query(kind, k));
    return out;
}
}

TEST(Contract, PsiIsComplete)
{
    auto c = contract_graph(family_query(FamilyKind::psi, 4));
    EXPECT_EQ(c.size(), 4);
    EXPECT_EQ(c.edges().size(), 6u);
}

TEST(Contract, PolyIsPath)
{
    auto c = contract_graph(family_query(FamilyKind::poly, 4));
    EXPECT_EQ(c.size(), 4);
    EXPECT_EQ(c.edges(), path(4).edges());
    EXPECT_EQ(contract_graph(family_query(FamilyKind::w1, 4)).size(), 0);
}

TEST(Contract, FreeEdgesKept)
{
    auto c = contract_graph(q_of("query\nfree a b c\nexists y\nbody E(a,b) & E(c,y)\n"));
    EXPECT_EQ(c.edges().size(), 1u);
    EXPECT_TRUE(c.adjacent(0, 1));
}

TEST(DominatingStar, KnownValues)
{
    EXPECT_EQ(dominating_star_size(family_query(FamilyKind::psi, 5)), 5);
    EXPECT_EQ(dominating_star_size(family_query(FamilyKind::poly, 4)), 2);
    EXPECT_EQ(dominating_star_size(family_query(FamilyKind::w1, 4)), 0);
    EXPECT_EQ(dominating_star_size(family_query(FamilyKind::gamma, 3)), 3);
    EXPECT_EQ(dominating_star_size(family_query(FamilyKind::subdivided, 4)), 2);
}

TEST(WellLinked, KnownGraphs)
{
    EXPECT_TRUE(is_node_well_linked(complete(4), {0, 1, 2, 3}));
    EXPECT_FALSE(is_node_well_linked(path(4), {0, 1, 2, 3}));
    EXPECT_TRUE(is_node_well_linked(path(4), {0, 3}));
    EXPECT_FALSE(is_node_well_linked(Structure(Signature::graph(), 2), {0, 1}));
    EXPECT_TRUE(is_node_well_linked(cycle(6), {0, 2, 4}));
}

TEST(WellLinked, MatchesMengerOracle)
{
    Rng rng(7);
    for (int trial = 0; trial < 60; ++trial) {
        auto g = random_graph(rng, 6, 0.45);
        std::vector<int> all(6);
        std::iota(all.begin(), all.end(), 0);
        std::shuffle(all.begin(), all.end(), rng);
        std::vector<int> s(all.begin(), all.begin() + 1 + trial % 5);
        EXPECT_EQ(is_node_well_linked(g, s), brute_well_linked(g, s)) << trial;
        std::vector<int> a(all.begin(), all.begin() + 2), b(all.begin() + 2, all.begin() + 4);
        EXPECT_EQ(vertex_disjoint_paths(g, a, b), brute_disjoint_paths(g, a, b));
    }
}

TEST(Lmn, Families)
{
    EXPECT_EQ(linked_matching_number(family_query(FamilyKind::gamma, 3)), 3);
    for (int k = 1; k <= 5; ++k)
        EXPECT_EQ(linked_matching_number(family_query(FamilyKind::psi, k)), 1);
    EXPECT_EQ(linked_matching_number(family_query(FamilyKind::omega, 2)), 2);
    EXPECT_EQ(linked_matching_number(family_query(FamilyKind::omega, 3)), 3);
    EXPECT_EQ(linked_matching_number(family_query(FamilyKind::w1, 3)), 0);
    EXPECT_EQ(linked_matching_number(family_query(FamilyKind::subdivided, 4)), 1);
}

TEST(Lmn, MatchesBruteForce)
{
    Rng rng(11);
    for (int trial = 0; trial < 80; ++trial) {
        auto q = random_graph_query(rng, 7, 1 + trial % 4, 0.4);
        int l = linked_matching_number(q);
        EXPECT_EQ(l, brute_lmn(q)) << trial;
        EXPECT_LE(l, int(std::min(q.free.size(), q.quantified().size())));
    }
}

TEST(Lmn, CapIsExplicit)
{
    auto q = family_query(FamilyKind::psi, 3);
    EXPECT_THROW(linked_matching_number(q, 0), ModelError);
    auto r = parameter_report(family_query(FamilyKind::omega, 6));
    EXPECT_EQ(r.lmn, -1);
    EXPECT_FALSE(r.lmn_exact);
}

TEST(Report, SethNote)
{
    auto r = parameter_report(family_query(FamilyKind::psi, 3));
    EXPECT_EQ(r.dss, 3);
    EXPECT_NE(std::find(r.notes.begin(), r.notes.end(), "no O(n^{3-eps}) algorithm under SETH"), r.notes.end());
    auto small = parameter_report(family_query(FamilyKind::psi, 2));
    EXPECT_TRUE(small.notes.empty());
}

TEST(Classify, FigureFamilies)
{
    EXPECT_EQ(classify(family(FamilyKind::poly, 2, 4)).regime, "P");
    EXPECT_EQ(classify(family(FamilyKind::w1, 2, 4)).regime, "W[1]-eq.");
    EXPECT_EQ(classify(family(FamilyKind::subdivided, 2, 4)).regime, "#W[1]-eq.");
    EXPECT_EQ(classify(family(FamilyKind::psi, 2, 4)).regime, "#W[2]-hard");
    EXPECT_EQ(classify(family(FamilyKind::gamma, 2, 4)).regime, "#A[2]-eq.");
    EXPECT_EQ(classify(family(FamilyKind::omega, 2, 4)).regime, "#A[2]-eq.");
}

TEST(Classify, GrowthFlags)
{
    auto c = classify(family(FamilyKind::psi, 2, 4));
    EXPECT_FALSE(c.treewidth_grows);
    EXPECT_TRUE(c.contract_grows);
    EXPECT_TRUE(c.dss_grows);
    EXPECT_FALSE(c.lmn_grows);
    EXPECT_NE(std::find(c.notes.begin(), c.notes.end(), "#A[2] status open"), c.notes.end());
    auto p = classify(family(FamilyKind::poly, 2, 4));
    EXPECT_FALSE(p.treewidth_grows || p.contract_grows || p.dss_grows || p.lmn_grows);
}
