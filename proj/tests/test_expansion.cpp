#include "helpers.hpp"
#include "oracle.hpp"

#include <cqc/expansion.hpp>
#include <cqc/generate.hpp>

#include <gtest/gtest.h>

using namespace cqc;
using namespace testing_helpers;

namespace {
FormulaAST formula_of(const std::string& text) { return parse_formula(text); }

BigInt integral(const Rational& r)
{
    EXPECT_EQ(denominator(r), 1);
    return numerator(r);
}

Query with_inequalities(Query q, const std::vector<std::pair<int, int>>& pairs)
{
    for (auto [a, b] : pairs)
        q.add_inequality(a, b);
    return q;
}
}

TEST(Flats, SmallLattices)
{
    auto none = matroid_flats_mobius({0, 1}, {});
    ASSERT_EQ(none.flats.size(), 1u);
    EXPECT_EQ(none.flats[0].mobius, 1);
    auto one = matroid_flats_mobius({0, 1}, {{0, 1}});
    ASSERT_EQ(one.flats.size(), 2u);
    EXPECT_EQ(one.flats[0].mobius, 1);
    EXPECT_EQ(one.flats[1].mobius, -1);
    auto tri = matroid_flats_mobius({0, 1, 2}, {{0, 1}, {1, 2}, {0, 2}});
    ASSERT_EQ(tri.flats.size(), 5u);
    auto top = std::find_if(tri.flats.begin(), tri.flats.end(), [](const Flat& f) { return f.blocks == 1; });
    ASSERT_NE(top, tri.flats.end());
    EXPECT_EQ(top->mobius, 2);
    EXPECT_THROW(matroid_flats_mobius({0, 1}, {{0, 2}}), ModelError);
}

TEST(Flats, RotaSignsAndRanks)
{
    for (int n = 1; n <= 4; ++n)
        for (auto& g : all_graphs(n)) {
            auto edges = g.edges();
            std::set<std::pair<int, int>> ineq(edges.begin(), edges.end());
            std::vector<int> x(n);
            std::iota(x.begin(), x.end(), 0);
            auto lat = matroid_flats_mobius(x, ineq);
            for (auto& fl : lat.flats) {
                EXPECT_NE(fl.mobius, 0);
                EXPECT_EQ(fl.mobius > 0, fl.rank % 2 == 0);
                EXPECT_EQ(fl.rank, n - fl.blocks);
            }
            BigInt total = 0;
            for (auto& fl : lat.flats)
                total += fl.mobius;
            // sum over all subsets of (-1)^|s| vanishes unless there are no inequalities
            EXPECT_EQ(total, ineq.empty() ? 1 : 0);
        }
}

TEST(Contract, Examples)
{
    auto q = q_of("query\nfree a b c\nbody E(a,b)\n");
    EXPECT_EQ(contract_query(q, {0, 1, 2}), q);
    auto loop = contract_query(q, {0, 0, 2});
    EXPECT_EQ(loop.h.size(), 2);
    EXPECT_TRUE(loop.h.has_tuple(0, {0, 0}));
    EXPECT_EQ(loop.free, (std::vector<int>{0, 1}));
    auto all = contract_query(q, {0, 0, 0});
    EXPECT_EQ(all.h.size(), 1);
    EXPECT_THROW(contract_query(q, {1, 0, 2}), ModelError);
}

TEST(Inequalities, InjectivePairs)
{
    auto q = with_inequalities(q_of("query\nfree a b\n"), {{0, 1}});
    auto qq = expand_inequalities(q);
    for (int n = 1; n <= 5; ++n)
        EXPECT_EQ(evaluate(qq, Structure(Signature::graph(), n)), n * n - n);
    auto tri = with_inequalities(q_of("query\nfree a b c\n"), {{0, 1}, {1, 2}, {0, 2}});
    auto t = expand_inequalities(tri);
    ASSERT_EQ(t.terms.size(), 3u);
    EXPECT_EQ(t.terms[0].query.free.size(), 1u);
    EXPECT_EQ(t.terms[0].coeff, 2);
    EXPECT_EQ(evaluate(t, path(4)), 24);
}

TEST(Inequalities, MatchesPartiallyInjectiveCount)
{
    Rng rng(61);
    for (int trial = 0; trial < 80; ++trial) {
        auto q = random_graph_query(rng, 4, 2 + trial % 3, 0.4);
        for (std::size_t i = 0; i < q.free.size(); ++i)
            for (std::size_t j = i + 1; j < q.free.size(); ++j)
                if (rng() % 2)
                    q.add_inequality(q.free[i], q.free[j]);
        auto qq = expand_inequalities(q);
        for (auto& term : qq.terms)
            EXPECT_NE(term.coeff, 0);
        auto t = random_graph(rng, 5, 0.5);
        EXPECT_EQ(integral(evaluate(qq, t)), oracle::count_answers(q, t)) << trial;
    }
}

TEST(Negations, Examples)
{
    Query q = q_of("query\nfree a b\n");
    q.negated.insert({0, {0, 1}});
    EXPECT_EQ(evaluate(expand_negations(q), complete(2)), 2);
    auto plain = q_of("query\nfree a b\nexists y\nbody E(a,y)\n");
    auto one = expand_negations(plain);
    ASSERT_EQ(one.terms.size(), 1u);
    EXPECT_EQ(one.terms[0].coeff, 1);
    Query isolated = q_of("query\nfree a b c\nbody E(a,b)\n");
    isolated.negated.insert({0, {1, 2}});
    for (auto& term : expand_negations(isolated).terms)
        EXPECT_EQ(term.query.free.size(), 3u);
}

TEST(Negations, MatchesBruteForce)
{
    Rng rng(67);
    for (int trial = 0; trial < 60; ++trial) {
        auto q = random_graph_query(rng, 4, 2 + trial % 2, 0.4);
        for (int i = 0; i < 2; ++i) {
            int a = q.free[rng() % q.free.size()], b = q.free[rng() % q.free.size()];
            if (a != b)
                q.negated.insert({0, {a, b}});
        }
        auto t = random_graph(rng, 5, 0.5);
        EXPECT_EQ(integral(evaluate(expand_negations(q), t)), oracle::count_answers(q, t)) << trial;
    }
}

TEST(Universal, Split)
{
    auto f = formula_of("formula\nsignature E/2\nfree x\nforall y\nbody E(x,y)\n");
    auto split = universal_to_existential(f);
    EXPECT_TRUE(split.constant.quantified.empty());
    EXPECT_EQ(split.dual.quantified.size(), 1u);
    Structure reflexive_k2(f.signature, 2);
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b)
            reflexive_k2.add_tuple(0, {a, b});
    auto c = complement_structure(reflexive_k2);
    EXPECT_EQ(count_formula_answers(split.constant, c) - count_formula_answers(split.dual, c), 2);
    EXPECT_EQ(count_formula_answers(f, reflexive_k2), 2);
    EXPECT_EQ(count_formula_answers(f, Structure(f.signature, 2)), 0);
}

TEST(Universal, MatchesBruteForce)
{
    Rng rng(71);
    Signature sig({{"E", 2}});
    FormulaShape shape;
    shape.p_inequality = shape.p_equality = 0;
    for (int trial = 0; trial < 80; ++trial) {
        auto f = random_formula(rng, sig, false, shape);
        if (f.quantifier != Quantifier::forall)
            continue;
        auto split = universal_to_existential(f);
        auto t = random_structure(rng, sig, 3, 0.5);
        auto c = complement_structure(t);
        EXPECT_EQ(count_formula_answers(split.constant, c) - count_formula_answers(split.dual, c), count_formula_answers(f, t))
            << trial;
    }
}

TEST(Existential, TwoDisjuncts)
{
    auto f = formula_of("formula\nfree x1 x2\nexists y\nbody E(x1,y) | E(x2,y)\n");
    auto qq = ep_to_quantum(f);
    ASSERT_EQ(qq.terms.size(), 2u);
    EXPECT_EQ(qq.terms[0].coeff, 2);
    EXPECT_EQ(qq.terms[1].coeff, -1);
    EXPECT_EQ(qq.terms[1].query.h.size(), 4);
    for (auto& g : {path(4), star(3), cycle(5)})
        EXPECT_EQ(integral(evaluate(qq, g)), count_formula_answers(f, g));
    auto single = ep_to_quantum(formula_of("formula\nfree x\nexists y\nbody E(x,y)\n"));
    ASSERT_EQ(single.terms.size(), 1u);
    EXPECT_EQ(single.terms[0].coeff, 1);
}

TEST(Existential, MatchesBruteForce)
{
    Rng rng(73);
    Signature sig({{"E", 2}, {"P", 1}});
    FormulaShape shape;
    shape.allow_forall = false;
    shape.p_inequality = shape.p_negated = shape.p_equality = 0;
    for (int trial = 0; trial < 60; ++trial) {
        auto f = random_formula(rng, sig, false, shape);
        auto t = random_structure(rng, sig, 4, 0.4);
        EXPECT_EQ(integral(evaluate(ep_to_quantum(f), t)), count_formula_answers(f, t)) << trial;
    }
}

TEST(Lift, RoundTrip)
{
    auto f = formula_of("formula\nfree a b\nexists y\nbody E(a,y) & !E(a,b)\n");
    auto lifted = lift_formula(f);
    EXPECT_TRUE(lifted.negated.empty());
    EXPECT_EQ(lifted.signature.size(), 2u);
    auto qq = ep_to_quantum(lifted);
    ASSERT_EQ(qq.terms.size(), 1u);
    auto low = lower_query(qq.terms[0].query, f.signature);
    EXPECT_FALSE(low.negated.empty());
    auto g = path(4);
    EXPECT_EQ(count_answers(low, g), count_formula_answers(f, g));
    auto lifted_g = lift_structure(g, {0});
    EXPECT_EQ(count_answers(qq.terms[0].query, lifted_g), count_formula_answers(f, g));
}

TEST(Compile, PlainQueryGivesCore)
{
    auto f = formula_of("query\nfree x1 x2\nexists y y2\nbody E(x1,y) & E(x2,y) & E(x2,y2)\n");
    auto qq = compile(f);
    ASSERT_EQ(qq.terms.size(), 1u);
    EXPECT_EQ(qq.terms[0].coeff, 1);
    EXPECT_EQ(qq.terms[0].query.h.size(), 3);
}

TEST(Compile, NonMaximalCliques)
{
    auto phi = [](int k) {
        std::string text = "query\nfree";
        for (int i = 1; i <= k; ++i)
            text += " x" + std::to_string(i);
        text += "\nexists y\nbody ";
        std::vector<std::string> atoms;
        for (int i = 1; i <= k; ++i) {
            atoms.push_back("E(x" + std::to_string(i) + ",y)");
            for (int j = i + 1; j <= k; ++j)
                atoms.push_back("E(x" + std::to_string(i) + ",x" + std::to_string(j) + ")");
        }
        for (std::size_t i = 0; i < atoms.size(); ++i)
            text += (i ? " & " : "") + atoms[i];
        return parse_formula(text + "\n");
    };
    EXPECT_EQ(evaluate(compile(phi(2)), triangle_pendant()), 6);
    EXPECT_EQ(evaluate(compile(phi(3)), complete(4)), 24);
    EXPECT_EQ(evaluate(compile(phi(4)), complete(4)), 0);
}

TEST(Compile, EqualitiesAndZero)
{
    auto f = formula_of("formula\nfree a b\nexists y\nbody E(a,y)\neq a b\nineq a b\n");
    EXPECT_TRUE(compile(f).terms.empty());
    auto g = formula_of("formula\nfree a b\nexists y\nbody E(a,y) & E(b,y)\neq a b\n");
    EXPECT_EQ(evaluate(compile(g), path(4)), count_formula_answers(g, path(4)));
}

TEST(Compile, RejectsUniversalEqualityOnQuantifiedVariable)
{
    auto f = formula_of("formula\nfree a b\nforall y\nbody E(a,y)\n");
    f.equalities.insert({1, 2});
    EXPECT_THROW(compile(f), ModelError);
}

TEST(Compile, RandomGraphFormulas)
{
    Rng rng(79);
    FormulaShape shape;
    for (int trial = 0; trial < 120; ++trial) {
        auto f = random_formula(rng, Signature::graph(), true, shape);
        auto qq = compile(f);
        for (auto& term : qq.terms) {
            EXPECT_NE(term.coeff, 0);
            EXPECT_TRUE(term.query.is_plain());
        }
        for (int n = 1; n <= 4; ++n) {
            auto t = random_graph(rng, n, 0.5);
            EXPECT_EQ(integral(evaluate(qq, t)), count_formula_answers(f, t)) << trial << " n=" << n;
        }
    }
}

TEST(Compile, RandomStructureFormulas)
{
    Rng rng(83);
    Signature sig({{"E", 2}, {"P", 1}});
    FormulaShape shape;
    for (int trial = 0; trial < 120; ++trial) {
        auto f = random_formula(rng, sig, false, shape);
        auto qq = compile(f);
        for (int n = 0; n <= 3; ++n) {
            auto t = random_structure(rng, sig, n, 0.45);
            EXPECT_EQ(integral(evaluate(qq, t)), count_formula_answers(f, t)) << trial << " n=" << n;
        }
    }
}
