#pragma once

#include <cqc/kernels.hpp>
#include <cqc/model.hpp>

#include <functional>
#include <unordered_set>
#include <vector>

namespace cqc::detail {

using kernels::Word;

using Row = std::vector<Word>;

Row make_row(int n);
inline void set_bit(Row& r, int i) { r[i >> 6] |= Word(1) << (i & 63); }
inline bool test_bit(const Word* r, int i) { return (r[i >> 6] >> (i & 63)) & 1; }

// Membership tables for a target structure: bit rows for unary and binary
// relations, hashed encodings for higher arities.
class TargetIndex {
public:
    explicit TargetIndex(const Structure& t);

    int size() const { return n_; }
    std::size_t words() const { return words_; }
    const Word* full() const { return full_.data(); }
    const Word* unary(int sym) const { return rows_[sym].data(); }
    const Word* diag(int sym) const { return diag_[sym].data(); }
    const Word* out_row(int sym, int u) const { return rows_[sym].data() + std::size_t(u) * words_; }
    const Word* in_row(int sym, int v) const { return in_[sym].data() + std::size_t(v) * words_; }
    bool contains(int sym, const int* vals, int arity) const;

private:
    int n_;
    std::size_t words_;
    Row full_;
    std::vector<Row> rows_, in_, diag_;
    std::vector<std::unordered_set<std::uint64_t>> higher_;
};

// Backtracking over a fixed vertex order of a query structure. Vertices
// marked preassigned must already carry their image in the image vector.
// Atoms touching a vertex that is neither preassigned nor in the order are
// ignored; callers restrict to the part they mean to search.
class Search {
public:
    using Hook = std::function<bool(const std::vector<int>& img)>;
    using Filter = std::function<bool(int v, int x, const std::vector<int>& img)>;
    using Leaf = std::function<bool(const std::vector<int>& img)>;  // false stops

    Search(const Structure& h, const TargetIndex& t, std::vector<int> order, std::vector<char> preassigned);

    // The image of v must lie in row (row must outlive the search).
    void restrict_to(int v, const Word* row);
    void add_inequality(int u, int v);
    void add_negated(int sym, const Tuple& args);
    // Runs once all of vars have images.
    void add_hook(const std::vector<int>& vars, Hook hook);
    void set_filter(Filter f) { filter_ = std::move(f); }

    BigInt count(std::vector<int>& img);
    bool exists(std::vector<int>& img);
    // Returns false if a leaf callback stopped the enumeration.
    bool enumerate(std::vector<int>& img, const Leaf& leaf);

private:
    struct Dyn {
        int sym;
        int other;
        bool out;
    };
    struct Step {
        int v = -1;
        std::vector<const Word*> rows;
        std::vector<Dyn> dyn;
        std::vector<int> neq;
        std::vector<int> atoms, negs, hooks;
    };
    struct Atom {
        int sym;
        Tuple args;
    };

    int stage_of(const std::vector<int>& vars) const;  // -1 before the first step, -2 never
    void compile();
    bool check_list(const std::vector<int>& atoms, const std::vector<int>& negs, const std::vector<int>& hooks,
        const std::vector<int>& img) const;
    void fill(std::size_t p, const std::vector<int>& img);
    bool leaf_trivial(std::size_t p) const;
    BigInt count_from(std::size_t p, std::vector<int>& img);
    bool enum_from(std::size_t p, std::vector<int>& img, const Leaf& leaf);

    const Structure& h_;
    const TargetIndex& t_;
    std::vector<int> order_;
    std::vector<char> pre_;
    std::vector<int> pos_;
    std::vector<std::pair<int, const Word*>> restrictions_;
    std::vector<std::pair<int, int>> ineqs_;
    std::vector<Atom> atoms_, negs_;
    std::vector<std::pair<std::vector<int>, Hook>> hooks_;
    Filter filter_;
    bool compiled_ = false;
    std::vector<Step> steps_;
    std::vector<int> pre_atoms_, pre_negs_, pre_hooks_;
    bool pre_neq_fail_ = false;
    std::vector<Row> buf_;
};

// Vertex order for backtracking: start from the highest degree vertex, then
// repeatedly take the vertex with most already-ordered neighbours (ties by
// degree, then index).
std::vector<int> search_order(const Structure& h, const std::vector<int>& vertices);

}  // namespace cqc::detail
