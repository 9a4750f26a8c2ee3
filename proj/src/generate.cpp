#include <cqc/generate.hpp>
#include <cqc/hom.hpp>

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>

namespace cqc {

namespace {
    bool coin(Rng& rng, double p)
    {
        return std::uniform_real_distribution<double>(0.0, 1.0)(rng) < p;
    }

    void random_tuples(Rng& rng, Structure& s, std::size_t sym, int arity, double density)
    {
        int n = s.size();
        if (n == 0)
            return;
        Tuple t(arity, 0);
        while (true) {
            if (coin(rng, density))
                s.add_tuple(sym, t);
            int i = arity - 1;
            while (i >= 0 && ++t[i] == n)
                t[i--] = 0;
            if (i < 0)
                break;
        }
    }

    std::vector<int> random_subset(Rng& rng, int n, int k)
    {
        std::vector<int> all(n);
        std::iota(all.begin(), all.end(), 0);
        std::shuffle(all.begin(), all.end(), rng);
        all.resize(std::min(k, n));
        std::sort(all.begin(), all.end());
        return all;
    }
}

Structure random_graph(Rng& rng, int n, double p)
{
    Structure g(Signature::graph(), n);
    for (int u = 0; u < n; ++u)
        for (int v = u + 1; v < n; ++v)
            if (coin(rng, p))
                g.add_edge(u, v);
    return g;
}

Structure random_structure(Rng& rng, const Signature& sig, int n, double density)
{
    Structure s(sig, n);
    for (std::size_t r = 0; r < sig.size(); ++r)
        random_tuples(rng, s, r, sig[r].arity, density);
    return s;
}

Query random_graph_query(Rng& rng, int n, int k, double p)
{
    return Query(random_graph(rng, n, p), random_subset(rng, n, k));
}

Query random_query(Rng& rng, const Signature& sig, int n, int k, double density)
{
    return Query(random_structure(rng, sig, n, density), random_subset(rng, n, k));
}

ColoredTarget random_colored_target(Rng& rng, const Structure& h, int per_class_max, double p)
{
    ColoredTarget out;
    std::uniform_int_distribution<int> count(0, per_class_max);
    std::vector<std::vector<int>> cls(h.size());
    int n = 0;
    for (int u = 0; u < h.size(); ++u) {
        int m = count(rng);
        for (int i = 0; i < m; ++i) {
            cls[u].push_back(n++);
            out.coloring.push_back(u);
        }
    }
    out.target = Structure(h.signature(), n);
    bool graph = h.is_graph();
    for (std::size_t r = 0; r < h.signature().size(); ++r)
        for (auto& atom : h.relation(r)) {
            Tuple t(atom.size());
            std::function<void(std::size_t)> rec = [&](std::size_t i) {
                if (i == atom.size()) {
                    if (coin(rng, p)) {
                        if (graph)
                            out.target.add_edge(t[0], t[1]);
                        else
                            out.target.add_tuple(r, t);
                    }
                    return;
                }
                for (int v : cls[atom[i]]) {
                    t[i] = v;
                    rec(i + 1);
                }
            };
            if (graph && atom[0] > atom[1])
                continue;
            rec(0);
        }
    return out;
}

std::vector<std::pair<int, int>> canonical_edges(const Structure& g)
{
    std::vector<int> perm(g.size());
    std::iota(perm.begin(), perm.end(), 0);
    auto edges = g.edges();
    std::vector<std::pair<int, int>> best;
    bool first = true;
    do {
        std::vector<std::pair<int, int>> e;
        for (auto [u, v] : edges)
            e.emplace_back(std::min(perm[u], perm[v]), std::max(perm[u], perm[v]));
        std::sort(e.begin(), e.end());
        if (first || e < best) {
            best = e;
            first = false;
        }
    } while (std::next_permutation(perm.begin(), perm.end()));
    return best;
}

std::vector<Structure> all_graphs(int n)
{
    if (n > 6)
        throw ModelError("graph enumeration is limited to 6 vertices");
    std::vector<std::pair<int, int>> slots;
    for (int u = 0; u < n; ++u)
        for (int v = u + 1; v < n; ++v)
            slots.emplace_back(u, v);
    std::map<std::vector<std::pair<int, int>>, Structure> seen;
    for (std::uint32_t mask = 0; mask < (std::uint32_t(1) << slots.size()); ++mask) {
        std::vector<std::pair<int, int>> e;
        for (std::size_t i = 0; i < slots.size(); ++i)
            if (mask >> i & 1)
                e.push_back(slots[i]);
        auto g = Structure::graph(n, e);
        auto key = canonical_edges(g);
        if (! seen.count(key))
            seen.emplace(key, Structure::graph(n, key));
    }
    std::vector<Structure> out;
    for (auto& [k, g] : seen)
        out.push_back(g);
    return out;
}

FormulaAST random_formula(Rng& rng, const Signature& sig, bool graph_mode, const FormulaShape& shape)
{
    FormulaAST f;
    f.signature = sig;
    f.graph_mode = graph_mode;
    int k = std::uniform_int_distribution<int>(0, shape.max_free)(rng);
    int l = std::uniform_int_distribution<int>(0, shape.max_quantified)(rng);
    if (k + l == 0)
        k = 1;
    for (int v = 0; v < k + l; ++v) {
        f.names.push_back("v" + std::to_string(v));
        (v < k ? f.free : f.quantified).push_back(v);
    }
    f.quantifier = shape.allow_forall && coin(rng, 0.5) ? Quantifier::forall : Quantifier::exists;
    std::uniform_int_distribution<int> var(0, k + l - 1), sym(0, int(sig.size()) - 1);
    auto atom = [&] {
        int s = sym(rng);
        Tuple args;
        for (int i = 0; i < sig[s].arity; ++i)
            args.push_back(var(rng));
        return Expr::make_atom(s, args);
    };
    int atoms = std::uniform_int_distribution<int>(1, shape.max_atoms)(rng);
    std::vector<Expr> parts;
    for (int i = 0; i < atoms; ++i)
        parts.push_back(atom());
    while (parts.size() > 1) {
        std::size_t i = rng() % parts.size();
        Expr a = parts[i];
        parts.erase(parts.begin() + long(i));
        std::size_t j = rng() % parts.size();
        parts[j] = coin(rng, 0.5) ? Expr::make_and({a, parts[j]}) : Expr::make_or({a, parts[j]});
    }
    f.body = simplify(parts[0]);
    for (int a = 0; a < k; ++a)
        for (int b = a + 1; b < k; ++b) {
            if (coin(rng, shape.p_inequality))
                f.inequalities.insert({a, b});
            else if (coin(rng, shape.p_equality))
                f.equalities.insert({a, b});
        }
    for (int i = 0; i < 2 && k > 0; ++i)
        if (coin(rng, shape.p_negated)) {
            int s = sym(rng);
            Tuple args;
            for (int j = 0; j < sig[s].arity; ++j)
                args.push_back(int(rng() % k));
            f.negated.insert({s, args});
        }
    if (f.quantifier == Quantifier::exists && l > 0 && coin(rng, shape.p_equality))
        f.equalities.insert({std::min(var(rng), k), std::max(var(rng), k)});
    std::erase_if(f.equalities, [](auto& p) { return p.first == p.second; });
    f.conjunctive = false;
    return f;
}

std::vector<Query> all_minimal_graph_queries(int max_vertices)
{
    std::vector<Query> out;
    for (int n = 0; n <= max_vertices; ++n)
        for (auto& g : all_graphs(n))
            for (std::uint32_t mask = 0; mask < (std::uint32_t(1) << n); ++mask) {
                std::vector<int> free;
                for (int v = 0; v < n; ++v)
                    if (mask >> v & 1)
                        free.push_back(v);
                Query q(g, free);
                if (! is_minimal(q))
                    continue;
                bool seen = std::any_of(out.begin(), out.end(), [&](const Query& p) {
                    return p.h.size() == n && p.free.size() == free.size() && are_equivalent(p, q);
                });
                if (! seen)
                    out.push_back(q);
            }
    return out;
}

}  // namespace cqc
