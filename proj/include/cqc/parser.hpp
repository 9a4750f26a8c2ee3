#pragma once

#include <cqc/model.hpp>

#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace cqc {

struct ParseError : std::runtime_error {
    int line, column;
    ParseError(int line, int column, const std::string& msg);
};

enum class Quantifier { exists, forall };

// Body of a formula: a tree of atoms under AND/OR.
struct Expr {
    enum class Kind { atom, conj, disj, truth, falsity };
    Kind kind = Kind::truth;
    int symbol = -1;
    std::vector<int> args;
    std::vector<Expr> children;

    static Expr make_atom(int symbol, std::vector<int> args);
    static Expr make_and(std::vector<Expr> children);
    static Expr make_or(std::vector<Expr> children);
    static Expr truth() { return {}; }
    static Expr falsity();

    bool operator==(const Expr&) const = default;
};

struct FormulaAST {
    Signature signature;
    bool graph_mode = false;  // no signature line: E/2 over loopless graphs
    bool conjunctive = false;  // declared with the `query` header
    std::vector<std::string> names;  // variable id -> name
    std::vector<int> free;
    Quantifier quantifier = Quantifier::exists;
    std::vector<int> quantified;
    Expr body;
    std::set<std::pair<int, int>> inequalities;  // first < second
    std::set<NegatedAtom> negated;
    std::set<std::pair<int, int>> equalities;  // first < second

    int variable_count() const { return int(names.size()); }
    bool is_free(int v) const;
    // Pure conjunction of positive atoms under an existential prefix.
    bool is_conjunctive() const;
};

struct ZeroWitness {
    std::string reason;
};

struct NamedQuery {
    Query query;
    std::vector<std::string> names;
};

Structure parse_structure(const std::string& text);
std::string serialize_structure(const Structure& s);

FormulaAST parse_formula(const std::string& text);
NamedQuery parse_query(const std::string& text);
std::string serialize_query(const Query& q);
// Free vertices first (in order), then quantified ones by index.
Query canonical_relabel(const Query& q);

// Accepts target vertex indices and query variable names (or indices).
Coloring parse_coloring(const std::string& text, int target_size, const std::vector<std::string>& names);

// Throws ModelError when the formula is not conjunctive.
Query formula_to_query(const FormulaAST& f);

std::variant<FormulaAST, ZeroWitness> eliminate_equalities(const FormulaAST& f);
FormulaAST to_disjunctive_normal_form(const FormulaAST& f);
Expr simplify(const Expr& e);
Expr substitute(const Expr& e, const std::vector<int>& map);

// Direct evaluation of the formula semantics, equalities included.
BigInt count_formula_answers(const FormulaAST& f, const Structure& t);

std::string read_file(const std::string& path);

}  // namespace cqc
