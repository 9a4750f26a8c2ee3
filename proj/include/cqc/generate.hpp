#pragma once

#include <cqc/model.hpp>
#include <cqc/parser.hpp>

#include <random>

namespace cqc {

using Rng = std::mt19937_64;

Structure random_graph(Rng& rng, int n, double p);
Structure random_structure(Rng& rng, const Signature& sig, int n, double density);

// Graph-mode query on n vertices with k free vertices chosen at random.
Query random_graph_query(Rng& rng, int n, int k, double p);
Query random_query(Rng& rng, const Signature& sig, int n, int k, double density);

// A target coloured by q's structure: each target vertex gets a random colour
// and tuples are only drawn between colour classes joined by an atom.
struct ColoredTarget {
    Structure target;
    Coloring coloring;
};
ColoredTarget random_colored_target(Rng& rng, const Structure& h, int per_class_max, double p);

// One representative per isomorphism class of graphs on n vertices (n <= 6).
std::vector<Structure> all_graphs(int n);

struct FormulaShape {
    int max_free = 2;
    int max_quantified = 2;
    int max_atoms = 3;
    bool allow_forall = true;
    double p_inequality = 0.3;
    double p_negated = 0.3;
    double p_equality = 0.15;
};

// Random fragment formula: variables v0.. (free first), body a random
// and/or tree, side constraints drawn per free pair.
FormulaAST random_formula(Rng& rng, const Signature& sig, bool graph_mode, const FormulaShape& shape);

// One minimal graph query per equivalence class, up to max_vertices vertices.
std::vector<Query> all_minimal_graph_queries(int max_vertices);

// Lexicographically smallest edge set over all vertex permutations.
std::vector<std::pair<int, int>> canonical_edges(const Structure& g);

}  // namespace cqc
