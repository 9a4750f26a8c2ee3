#include "helpers.hpp"

#include <cqc/hom.hpp>

#include <gtest/gtest.h>

using namespace cqc;
using namespace testing_helpers;

TEST(Signature, RejectsDuplicatesAndBadArity)
{
    Signature s = Signature::graph();
    EXPECT_THROW(s.add({"E", 2}), ModelError);
    EXPECT_THROW(s.add({"P", 0}), ModelError);
    EXPECT_EQ(s.add({"P", 1}), 1);
    EXPECT_EQ(s.max_arity(), 2);
}

TEST(Structure, GraphEdgesAreSymmetric)
{
    auto g = Structure::graph(3, {{0, 1}, {1, 2}});
    EXPECT_TRUE(g.adjacent(1, 0));
    EXPECT_TRUE(g.is_graph());
    EXPECT_EQ(g.tuple_count(), 4u);
    EXPECT_EQ(g.edges().size(), 2u);
}

TEST(Structure, TupleValidation)
{
    Structure s(Signature::graph(), 2);
    EXPECT_THROW(s.add_tuple(0, {0, 2}), ModelError);
    EXPECT_THROW(s.add_tuple(0, {0}), ModelError);
}

TEST(Structure, InducedSubstructure)
{
    auto g = cycle(4).induced({0, 1, 2});
    EXPECT_EQ(g.size(), 3);
    EXPECT_EQ(g.edges().size(), 2u);
}

TEST(Query, ValidateCatchesBadFreeList)
{
    Query q(path(2), {0, 0});
    EXPECT_THROW(q.validate(), ModelError);
}

TEST(Products, TensorIsMultiplicativeOnHomCounts)
{
    auto h = Query(cycle(3), {0, 1, 2});
    auto a = complete(3), b = path(3);
    auto ab = tensor_product(a, b);
    EXPECT_EQ(ab.size(), 9);
    EXPECT_EQ(count_answers(h, ab), count_answers(h, a) * count_answers(h, b));
}

TEST(Products, ComplementIsReflexive)
{
    auto c = complement_structure(path(2));
    EXPECT_TRUE(c.has_tuple(0, {0, 0}));
    EXPECT_FALSE(c.has_tuple(0, {0, 1}));
    EXPECT_EQ(complement_structure(c), path(2));
}

TEST(Cloning, MultipliesColourClasses)
{
    auto g = path(3);
    auto cl = clone_vertices(g, {0, 1, 2}, {2, 1, 3});
    EXPECT_EQ(cl.structure.size(), 6);
    EXPECT_EQ(cl.structure.tuple_count(), 2u * (2 * 1 + 1 * 3));
    EXPECT_EQ(cl.origin[5], 2);
}

TEST(Gaifman, ArityThreeBecomesTriangle)
{
    Signature sig({{"R", 3}});
    Structure s(sig, 3);
    s.add_tuple(0, {0, 1, 2});
    EXPECT_EQ(gaifman_graph(s).edges().size(), 3u);
}
