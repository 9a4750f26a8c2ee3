#include <cqc/model.hpp>

#include <algorithm>
#include <numeric>

namespace cqc {

Signature::Signature(std::vector<Symbol> symbols)
{
    for (auto& s : symbols)
        add(s);
}

Signature Signature::graph() { return Signature({{"E", 2}}); }

int Signature::index_of(const std::string& name) const
{
    for (std::size_t i = 0; i < symbols_.size(); ++i)
        if (symbols_[i].name == name)
            return int(i);
    return -1;
}

int Signature::max_arity() const
{
    int a = 0;
    for (auto& s : symbols_)
        a = std::max(a, s.arity);
    return a;
}

int Signature::add(const Symbol& s)
{
    if (s.arity < 1)
        throw ModelError("symbol '" + s.name + "' needs a positive arity");
    if (index_of(s.name) >= 0)
        throw ModelError("duplicate symbol '" + s.name + "'");
    symbols_.push_back(s);
    return int(symbols_.size()) - 1;
}

Structure::Structure(Signature sig, int n) : sig_(std::move(sig)), n_(n), rels_(sig_.size())
{
    if (n < 0)
        throw ModelError("negative domain size");
}

Structure Structure::graph(int n, const std::vector<std::pair<int, int>>& edges)
{
    Structure s(Signature::graph(), n);
    for (auto [u, v] : edges)
        s.add_edge(u, v);
    return s;
}

std::size_t Structure::tuple_count() const
{
    std::size_t c = 0;
    for (auto& r : rels_)
        c += r.size();
    return c;
}

void Structure::add_tuple(std::size_t sym, const Tuple& t)
{
    if (sym >= sig_.size())
        throw ModelError("unknown symbol index");
    if (int(t.size()) != sig_[sym].arity)
        throw ModelError("arity mismatch for '" + sig_[sym].name + "'");
    for (int v : t)
        if (v < 0 || v >= n_)
            throw ModelError("vertex " + std::to_string(v) + " out of range");
    rels_[sym].insert(t);
}

void Structure::add_edge(int u, int v)
{
    add_tuple(0, {u, v});
    add_tuple(0, {v, u});
}

int Structure::add_symbol(const Symbol& s)
{
    int i = sig_.add(s);
    rels_.emplace_back();
    return i;
}

int Structure::add_vertex() { return n_++; }

bool Structure::is_graph() const
{
    if (sig_.size() != 1 || sig_[0].arity != 2)
        return false;
    for (auto& t : rels_[0])
        if (t[0] == t[1] || ! rels_[0].count({t[1], t[0]}))
            return false;
    return true;
}

std::vector<std::pair<int, int>> Structure::edges() const
{
    std::vector<std::pair<int, int>> out;
    for (auto& t : rels_[0])
        if (t[0] < t[1])
            out.emplace_back(t[0], t[1]);
    return out;
}

std::vector<std::vector<int>> Structure::neighbours() const
{
    std::vector<std::vector<int>> adj(n_);
    for (auto& t : rels_[0])
        if (t[0] != t[1])
            adj[t[0]].push_back(t[1]);
    for (auto& a : adj) {
        std::sort(a.begin(), a.end());
        a.erase(std::unique(a.begin(), a.end()), a.end());
    }
    return adj;
}

Structure Structure::induced(const std::vector<int>& keep) const
{
    std::vector<int> pos(n_, -1);
    for (std::size_t i = 0; i < keep.size(); ++i)
        pos[keep[i]] = int(i);
    Structure out(sig_, int(keep.size()));
    for (std::size_t r = 0; r < rels_.size(); ++r)
        for (auto& t : rels_[r]) {
            Tuple m(t.size());
            bool ok = true;
            for (std::size_t i = 0; i < t.size() && ok; ++i) {
                m[i] = pos[t[i]];
                ok = m[i] >= 0;
            }
            if (ok)
                out.rels_[r].insert(m);
        }
    return out;
}

Query::Query(Structure s, std::vector<int> x) : h(std::move(s)), free(std::move(x)) {}

bool Query::is_free(int v) const { return std::find(free.begin(), free.end(), v) != free.end(); }

std::vector<int> Query::quantified() const
{
    std::vector<int> y;
    for (int v = 0; v < h.size(); ++v)
        if (! is_free(v))
            y.push_back(v);
    return y;
}

void Query::add_inequality(int u, int v)
{
    if (u == v)
        throw ModelError("inequality between a variable and itself");
    inequalities.insert({std::min(u, v), std::max(u, v)});
}

void Query::validate() const
{
    std::set<int> seen;
    for (int x : free) {
        if (x < 0 || x >= h.size())
            throw ModelError("free variable out of range");
        if (! seen.insert(x).second)
            throw ModelError("free variable listed twice");
    }
    for (auto [u, v] : inequalities) {
        if (u >= v)
            throw ModelError("inequality pair not normalised");
        if (! is_free(u) || ! is_free(v))
            throw ModelError("inequality touches a quantified variable");
    }
    for (auto& a : negated) {
        if (a.symbol < 0 || a.symbol >= int(h.signature().size()) ||
            int(a.args.size()) != h.signature()[a.symbol].arity)
            throw ModelError("malformed negated atom");
        for (int v : a.args)
            if (! is_free(v))
                throw ModelError("negated atom over a quantified variable");
    }
}

bool is_homomorphism(const Structure& from, const Structure& to, const std::vector<int>& map)
{
    if (int(map.size()) != from.size() || ! (from.signature() == to.signature()))
        return false;
    for (int m : map)
        if (m < 0 || m >= to.size())
            return false;
    Tuple img;
    for (std::size_t r = 0; r < from.relations().size(); ++r)
        for (auto& t : from.relation(r)) {
            img.resize(t.size());
            for (std::size_t i = 0; i < t.size(); ++i)
                img[i] = map[t[i]];
            if (! to.has_tuple(r, img))
                return false;
        }
    return true;
}

bool is_valid_coloring(const Structure& target, const Structure& query, const Coloring& c)
{
    return is_homomorphism(target, query, c);
}

Structure gaifman_graph(const Structure& s)
{
    Structure g(Signature::graph(), s.size());
    for (auto& rel : s.relations())
        for (auto& t : rel)
            for (std::size_t i = 0; i < t.size(); ++i)
                for (std::size_t j = i + 1; j < t.size(); ++j)
                    if (t[i] != t[j])
                        g.add_edge(t[i], t[j]);
    return g;
}

namespace {
    // Calls f on every tuple of {0..n-1}^a in lexicographic order.
    template <typename F>
    void for_each_tuple(int n, int a, F&& f)
    {
        if (n == 0)
            return;
        Tuple t(a, 0);
        while (true) {
            f(t);
            int i = a - 1;
            while (i >= 0 && t[i] == n - 1)
                t[i--] = 0;
            if (i < 0)
                return;
            ++t[i];
        }
    }
}

Structure complement_structure(const Structure& s)
{
    Structure out(s.signature(), s.size());
    for (std::size_t r = 0; r < s.signature().size(); ++r)
        for_each_tuple(s.size(), s.signature()[r].arity, [&](const Tuple& t) {
            if (! s.has_tuple(r, t))
                out.add_tuple(r, t);
        });
    return out;
}

Structure tensor_product(const Structure& a, const Structure& b)
{
    if (! (a.signature() == b.signature()))
        throw ModelError("tensor product of structures with different signatures");
    int m = b.size();
    Structure out(a.signature(), a.size() * m);
    for (std::size_t r = 0; r < a.signature().size(); ++r)
        for (auto& ta : a.relation(r))
            for (auto& tb : b.relation(r)) {
                Tuple t(ta.size());
                for (std::size_t i = 0; i < t.size(); ++i)
                    t[i] = ta[i] * m + tb[i];
                out.add_tuple(r, t);
            }
    return out;
}

ClonedStructure clone_vertices(const Structure& s, const Coloring& c, const std::vector<int>& z)
{
    if (int(c.size()) != s.size())
        throw ModelError("coloring does not cover the structure");
    std::vector<std::vector<int>> copies(s.size());
    ClonedStructure out;
    int next = 0;
    for (int v = 0; v < s.size(); ++v) {
        if (c[v] < 0 || c[v] >= int(z.size()))
            throw ModelError("clone multiplicity missing for colour " + std::to_string(c[v]));
        if (z[c[v]] < 1)
            throw ModelError("clone multiplicities must be positive");
        for (int k = 0; k < z[c[v]]; ++k) {
            copies[v].push_back(next++);
            out.coloring.push_back(c[v]);
            out.origin.push_back(v);
        }
    }
    out.structure = Structure(s.signature(), next);
    for (std::size_t r = 0; r < s.signature().size(); ++r)
        for (auto& t : s.relation(r)) {
            // every combination of copies of the entries
            Tuple idx(t.size(), 0), img(t.size());
            while (true) {
                for (std::size_t i = 0; i < t.size(); ++i)
                    img[i] = copies[t[i]][idx[i]];
                out.structure.add_tuple(r, img);
                int i = int(t.size()) - 1;
                while (i >= 0 && idx[i] + 1 == int(copies[t[i]].size()))
                    idx[i--] = 0;
                if (i < 0)
                    break;
                ++idx[i];
            }
        }
    return out;
}

std::string complement_name(const std::string& name) { return name + "_bar"; }

Structure lift_structure(const Structure& s, const std::vector<int>& symbols)
{
    Structure out = s;
    for (int r : symbols) {
        if (r < 0 || r >= int(s.signature().size()))
            throw ModelError("lift of an unknown symbol");
        const auto& sym = s.signature()[r];
        if (out.signature().index_of(complement_name(sym.name)) >= 0)
            throw ModelError("complement symbol name '" + complement_name(sym.name) + "' already in use");
        int nr = out.add_symbol({complement_name(sym.name), sym.arity});
        for_each_tuple(s.size(), sym.arity, [&](const Tuple& t) {
            if (! s.has_tuple(r, t))
                out.add_tuple(nr, t);
        });
    }
    return out;
}

Structure disjoint_union(const Structure& a, const Structure& b)
{
    if (! (a.signature() == b.signature()))
        throw ModelError("disjoint union of structures with different signatures");
    Structure out(a.signature(), a.size() + b.size());
    for (std::size_t r = 0; r < a.signature().size(); ++r) {
        for (auto& t : a.relation(r))
            out.add_tuple(r, t);
        for (auto& t : b.relation(r)) {
            Tuple m = t;
            for (auto& v : m)
                v += a.size();
            out.add_tuple(r, m);
        }
    }
    return out;
}

}  // namespace cqc
