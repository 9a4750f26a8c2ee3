#pragma once

#include <cqc/model.hpp>
#include <cqc/parser.hpp>
#include <cqc/quantum.hpp>

#include <optional>
#include <set>
#include <utility>
#include <vector>

namespace cqc {

struct Flat {
    std::vector<int> block;  // block[i] = smallest position of x_i's block
    int blocks = 0;
    int rank = 0;
    BigInt mobius;
};

struct FlatLattice {
    std::vector<int> ground;  // the free variables, by position
    std::vector<std::pair<int, int>> edges;  // inequalities as position pairs
    std::vector<Flat> flats;  // the bottom flat first
};

constexpr int max_inequalities = 16;

// Flats of the graphic matroid of (x, ineq) with mu(0, flat) from the Boolean
// expansion. Throws ModelError above max_inequalities or when a sign check fails.
FlatLattice matroid_flats_mobius(const std::vector<int>& x, const std::set<std::pair<int, int>>& ineq);

// rep[v] is the vertex v is merged into (rep[rep[v]] == rep[v]). Atoms and
// negated atoms are mapped, duplicates collapse and loops are kept.
// Throws ModelError when an inequality collapses.
Query contract_query(const Query& q, const std::vector<int>& rep);

QuantumQuery expand_inequalities(const Query& q);
QuantumQuery expand_negations(const Query& q);

struct UniversalSplit {
    FormulaAST constant;  // free variables and the negated atoms, made positive
    FormulaAST dual;  // exists-formula with the dual body and the same atoms
};

// #f(t) = #constant(C) - #dual(C) where C is the full complement of t.
UniversalSplit universal_to_existential(const FormulaAST& f);

// Inclusion-exclusion over the disjuncts of an existential formula without
// negated atoms or inequalities. Quantified variables are renamed apart.
QuantumQuery ep_to_quantum(const FormulaAST& f);

// Negated atoms as atoms of complement symbols, and back.
FormulaAST lift_formula(const FormulaAST& f);
// base is the signature before lifting; throws ModelError when a complement
// atom touches a quantified vertex.
Query lower_query(const Query& q, const Signature& base);

QuantumQuery compile(const FormulaAST& f);

}  // namespace cqc
