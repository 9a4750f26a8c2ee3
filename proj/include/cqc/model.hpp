#pragma once

#include <cqc/numeric.hpp>

#include <cstdint>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace cqc {

struct Symbol {
    std::string name;
    int arity = 0;

    bool operator==(const Symbol&) const = default;
    auto operator<=>(const Symbol&) const = default;
};

class Signature {
public:
    Signature() = default;
    explicit Signature(std::vector<Symbol> symbols);

    static Signature graph();

    const std::vector<Symbol>& symbols() const { return symbols_; }
    std::size_t size() const { return symbols_.size(); }
    const Symbol& operator[](std::size_t i) const { return symbols_[i]; }

    // -1 when absent.
    int index_of(const std::string& name) const;
    int max_arity() const;

    // Appends a symbol; throws on a duplicate name or non-positive arity.
    int add(const Symbol& s);

    bool operator==(const Signature&) const = default;

private:
    std::vector<Symbol> symbols_;
};

using Tuple = std::vector<int>;
using Relation = std::set<Tuple>;

struct ModelError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

class Structure {
public:
    Structure() = default;
    Structure(Signature sig, int n);

    // Graph-mode constructor: every edge is stored in both orientations.
    static Structure graph(int n, const std::vector<std::pair<int, int>>& edges);

    const Signature& signature() const { return sig_; }
    int size() const { return n_; }
    const Relation& relation(std::size_t sym) const { return rels_[sym]; }
    const std::vector<Relation>& relations() const { return rels_; }
    std::size_t tuple_count() const;

    void add_tuple(std::size_t sym, const Tuple& t);
    void add_edge(int u, int v);  // symbol 0, both orientations
    bool has_tuple(std::size_t sym, const Tuple& t) const { return rels_[sym].count(t) > 0; }
    bool adjacent(int u, int v) const { return has_tuple(0, {u, v}); }

    // Adds a symbol with an empty relation and returns its index.
    int add_symbol(const Symbol& s);
    int add_vertex();

    // Single symbol of arity 2, symmetric and without diagonal tuples.
    bool is_graph() const;
    std::vector<std::pair<int, int>> edges() const;  // graph mode, u < v
    std::vector<std::vector<int>> neighbours() const;  // graph mode

    Structure induced(const std::vector<int>& keep) const;

    bool operator==(const Structure&) const = default;

private:
    Signature sig_;
    int n_ = 0;
    std::vector<Relation> rels_;
};

struct NegatedAtom {
    int symbol = 0;
    Tuple args;

    bool operator==(const NegatedAtom&) const = default;
    auto operator<=>(const NegatedAtom&) const = default;
};

// A graphical conjunctive query: the structure's vertices are the variables.
struct Query {
    Structure h;
    std::vector<int> free;
    std::set<std::pair<int, int>> inequalities;  // stored with first < second
    std::set<NegatedAtom> negated;

    Query() = default;
    Query(Structure s, std::vector<int> x);

    bool is_free(int v) const;
    std::vector<int> quantified() const;
    bool is_plain() const { return inequalities.empty() && negated.empty(); }
    void add_inequality(int u, int v);

    // Throws ModelError when an invariant is broken.
    void validate() const;

    bool operator==(const Query&) const = default;
};

// coloring[t] is the query vertex that target vertex t is coloured with.
using Coloring = std::vector<int>;
using Assignment = std::vector<int>;

bool is_homomorphism(const Structure& from, const Structure& to, const std::vector<int>& map);
bool is_valid_coloring(const Structure& target, const Structure& query, const Coloring& c);

Structure gaifman_graph(const Structure& s);
Structure complement_structure(const Structure& s);
Structure tensor_product(const Structure& a, const Structure& b);
// Vertex (i, j) of the product has index i * b.size() + j.

struct ClonedStructure {
    Structure structure;
    Coloring coloring;
    std::vector<int> origin;  // origin[new vertex] = old vertex
};

ClonedStructure clone_vertices(const Structure& s, const Coloring& c, const std::vector<int>& z);

// Name used for the complement of a symbol in a lifted signature.
std::string complement_name(const std::string& name);
Structure lift_structure(const Structure& s, const std::vector<int>& symbols);

// Disjoint union; vertices of b are shifted by a.size().
Structure disjoint_union(const Structure& a, const Structure& b);

}  // namespace cqc
