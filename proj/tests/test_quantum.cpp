#include "helpers.hpp"
#include "oracle.hpp"

#include <cqc/generate.hpp>
#include <cqc/parser.hpp>
#include <cqc/quantum.hpp>

#include <gtest/gtest.h>

using namespace cqc;
using namespace testing_helpers;

namespace {
const char* vertex = "query\nfree x\n";
const char* edge = "query\nfree x1 x2\nbody E(x1,x2)\n";
const char* fig1_left = "query\nfree x1 x2\nexists y\nbody E(x1,y) & E(x2,y)\n";
const char* fig1_right = "query\nfree x1 x2\nexists y y2\nbody E(x1,y) & E(x2,y) & E(x2,y2)\n";

QuantumQuery qq_of(std::vector<std::pair<Rational, const char*>> terms, Transform tr = Transform::identity)
{
    QuantumQuery qq;
    qq.transform = tr;
    for (auto& [c, text] : terms)
        qq.terms.push_back({c, q_of(text)});
    return qq;
}

Query edgeless(int k)
{
    std::vector<int> free(k);
    for (int i = 0; i < k; ++i)
        free[i] = i;
    return Query(Structure(Signature::graph(), k), free);
}
}

TEST(Normalize, MergesAndCancels)
{
    auto two = normalize(qq_of({{1, edge}, {1, edge}}));
    ASSERT_EQ(two.terms.size(), 1u);
    EXPECT_EQ(two.terms[0].coeff, 2);
    EXPECT_TRUE(normalize(qq_of({{1, fig1_right}, {-1, fig1_left}})).terms.empty());
    // a relabelled equivalent query with a redundant quantified path
    const char* other = "query\nfree a b\nexists u v w\nbody E(b,u) & E(a,u) & E(a,v) & E(v,w)\n";
    EXPECT_TRUE(normalize(qq_of({{2, fig1_left}, {-2, other}})).terms.empty());
    EXPECT_TRUE(normalize(qq_of({{0, edge}})).terms.empty());
}

TEST(Normalize, CanonicalOrderAndCores)
{
    auto n = normalize(qq_of({{3, fig1_right}, {1, edge}, {-1, vertex}}));
    ASSERT_EQ(n.terms.size(), 3u);
    EXPECT_EQ(n.terms[0].query.h.size(), 1);
    EXPECT_EQ(n.terms[1].query.h.size(), 2);
    EXPECT_EQ(n.terms[2].query.h.size(), 3);
    EXPECT_EQ(n.terms[2].coeff, 3);
    for (auto& t : n.terms)
        EXPECT_TRUE(is_minimal(t.query));
}

TEST(Normalize, PreservesEvaluation)
{
    Rng rng(41);
    for (int trial = 0; trial < 40; ++trial) {
        QuantumQuery qq;
        for (int i = 0; i < 3; ++i)
            qq.terms.push_back({Rational(int(rng() % 7) - 3, 1 + int(rng() % 3)), random_graph_query(rng, 4, int(rng() % 3), 0.5)});
        qq.transform = trial % 2 ? Transform::complement : Transform::identity;
        auto t = random_graph(rng, 4, 0.5);
        EXPECT_EQ(evaluate(normalize(qq), t), evaluate(qq, t)) << trial;
    }
}

TEST(Evaluate, Examples)
{
    EXPECT_EQ(evaluate(qq_of({{1, vertex}, {1, edge}}), complete(3)), 9);
    EXPECT_EQ(evaluate(QuantumQuery{}, complete(3)), 0);
    QuantumQuery is3{{{1, edgeless(3)}}, Transform::complement};
    EXPECT_EQ(evaluate(is3, path(4)), 64);
    EXPECT_EQ(evaluate(qq_of({{Rational(1, 2), edge}}), complete(3)), 3);
}

TEST(TestFamily, FullRank)
{
    std::vector<Query> one{q_of(vertex)};
    auto f1 = build_test_family(one);
    ASSERT_EQ(f1.size(), 1u);
    EXPECT_EQ(f1[0].size(), 1);
    std::vector<Query> two{q_of(vertex), q_of(edge)};
    auto f2 = build_test_family(two);
    ASSERT_EQ(f2.size(), 2u);
    auto a = evaluation_matrix(two, f2);
    std::vector<std::vector<Rational>> ar;
    for (auto& row : a)
        ar.emplace_back(row.begin(), row.end());
    EXPECT_EQ(matrix_rank(ar), 2);
    EXPECT_THROW(build_test_family({q_of(fig1_left), q_of(fig1_right)}), ModelError);
}

TEST(Independence, TriangularSurjectionMatrix)
{
    auto support = all_minimal_graph_queries(3);
    EXPECT_GT(support.size(), 10u);
    auto order = linear_order(support);
    std::vector<Query> sorted;
    for (int i : order)
        sorted.push_back(support[i]);
    auto l = surjection_matrix(sorted);
    for (std::size_t i = 0; i < l.size(); ++i) {
        EXPECT_GT(l[i][i], 0);
        EXPECT_EQ(l[i][i], count_partial_automorphisms(sorted[i]));
        for (std::size_t j = i + 1; j < l.size(); ++j)
            EXPECT_EQ(l[i][j], 0) << i << " " << j;
    }
}

TEST(Independence, SurjectionMatrixMatchesOracle)
{
    auto support = all_minimal_graph_queries(2);
    auto l = surjection_matrix(support);
    for (std::size_t i = 0; i < support.size(); ++i)
        for (std::size_t j = 0; j < support.size(); ++j)
            EXPECT_EQ(l[i][j], oracle::count_surjective(support[i], support[j].h, support[j].free));
}

TEST(Extraction, Example)
{
    auto qq = normalize(qq_of({{1, vertex}, {1, edge}}));
    auto oracle = [&](const Structure& s) { return evaluate(qq, s); };
    auto ex = extract_constituent_counts(qq, complete(3), oracle);
    ASSERT_EQ(ex.counts.size(), 2u);
    EXPECT_EQ(ex.counts[0], 3);
    EXPECT_EQ(ex.counts[1], 6);
    EXPECT_LE(ex.max_oracle_size, 3 * 4);
}

TEST(Extraction, SingleTerm)
{
    auto qq = normalize(qq_of({{Rational(-3, 2), fig1_left}}));
    auto oracle = [&](const Structure& s) { return evaluate(qq, s); };
    auto ex = extract_constituent_counts(qq, path(4), oracle);
    EXPECT_EQ(ex.oracle_calls, 1);
    EXPECT_EQ(ex.counts[0], oracle::count_answers(q_of(fig1_left), path(4)));
}

TEST(Extraction, RandomSupports)
{
    Rng rng(43);
    int checked = 0;
    for (int trial = 0; trial < 60; ++trial) {
        QuantumQuery qq;
        for (int i = 0; i < 2 + trial % 2; ++i)
            qq.terms.push_back({Rational(1 + int(rng() % 5), 1 + int(rng() % 2)), random_graph_query(rng, 3, int(rng() % 3), 0.6)});
        qq.transform = trial % 3 == 0 ? Transform::complement : Transform::identity;
        qq = normalize(qq);
        auto t = random_graph(rng, 5, 0.5);
        auto oracle = [&](const Structure& s) { return evaluate(qq, s); };
        auto ex = extract_constituent_counts(qq, t, oracle);
        Structure storage;
        const Structure& target = evaluation_target(qq, t, storage);
        for (std::size_t i = 0; i < qq.terms.size(); ++i)
            EXPECT_EQ(ex.counts[i], oracle::count_answers(qq.terms[i].query, target)) << trial;
        ++checked;
    }
    EXPECT_EQ(checked, 60);
}

TEST(Tensor, Multiplicative)
{
    Rng rng(47);
    for (int trial = 0; trial < 30; ++trial) {
        auto q = random_graph_query(rng, 4, int(rng() % 4), 0.5);
        auto a = random_graph(rng, 3, 0.6), b = random_graph(rng, 3, 0.6);
        EXPECT_EQ(count_answers(q, tensor_product(a, b)), count_answers(q, a) * count_answers(q, b));
    }
}

TEST(QuantumFormat, RoundTrip)
{
    auto qq = normalize(qq_of({{Rational(-2, 3), fig1_left}, {5, edge}}, Transform::complement));
    auto text = serialize_quantum(qq);
    EXPECT_EQ(parse_quantum(text), qq);
    EXPECT_EQ(serialize_quantum(parse_quantum(text)), text);
    EXPECT_TRUE(parse_quantum("quantum\n").terms.empty());
    auto bare = parse_quantum("coeff 1\nquery\nfree x\n---\ncoeff 2\nquery\nfree x y\nbody E(x,y)\n");
    EXPECT_EQ(bare.terms.size(), 2u);
    EXPECT_EQ(bare.transform, Transform::identity);
}

TEST(QuantumFormat, ErrorsCarryLines)
{
    try {
        parse_quantum("quantum\ncoeff 1\nquery\nfree x\nbody E(x,z)\n");
        FAIL();
    }
    catch (const ParseError& e) {
        EXPECT_EQ(e.line, 5);
    }
    EXPECT_THROW(parse_quantum("coeff 1/0\nquery\nfree x\n"), ParseError);
    EXPECT_THROW(parse_quantum("transform sideways\n"), ParseError);
}
