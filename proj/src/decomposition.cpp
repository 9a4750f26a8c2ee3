#include <cqc/decomposition.hpp>

#include "search.hpp"

#include <algorithm>
#include <bit>
#include <functional>
#include <numeric>
#include <unordered_map>

namespace cqc {

namespace {
    std::vector<std::uint32_t> adjacency_masks(const Structure& g)
    {
        auto adj = g.neighbours();
        std::vector<std::uint32_t> m(g.size(), 0);
        for (int v = 0; v < g.size(); ++v)
            for (int w : adj[v])
                m[v] |= std::uint32_t(1) << w;
        return m;
    }

    TreeDecomposition single_empty_leaf()
    {
        TreeDecomposition td;
        td.nodes.push_back({TreeDecomposition::Kind::leaf, -1, {}, {}});
        td.root = 0;
        td.width = 0;
        return td;
    }

    std::vector<int> min_degree_order(const Structure& g)
    {
        auto adj0 = g.neighbours();
        std::vector<std::set<int>> adj(g.size());
        for (int v = 0; v < g.size(); ++v)
            adj[v] = std::set<int>(adj0[v].begin(), adj0[v].end());
        std::vector<char> gone(g.size(), 0);
        std::vector<int> order;
        for (int step = 0; step < g.size(); ++step) {
            int best = -1;
            for (int v = 0; v < g.size(); ++v)
                if (! gone[v] && (best < 0 || adj[v].size() < adj[best].size()))
                    best = v;
            for (int a : adj[best])
                for (int b : adj[best])
                    if (a != b)
                        adj[a].insert(b);
            for (int a : adj[best])
                adj[a].erase(best);
            gone[best] = 1;
            order.push_back(best);
        }
        return order;
    }
}

TreeDecomposition decomposition_from_order(const Structure& g, const std::vector<int>& order)
{
    int n = g.size();
    if (n == 0)
        return single_empty_leaf();
    if (int(order.size()) != n)
        throw ModelError("elimination order does not cover the graph");
    auto adj0 = g.neighbours();
    std::vector<std::set<int>> adj(n);
    for (int v = 0; v < n; ++v)
        adj[v] = std::set<int>(adj0[v].begin(), adj0[v].end());
    std::vector<int> pos(n);
    for (int i = 0; i < n; ++i)
        pos[order[i]] = i;

    TreeDecomposition td;
    td.nodes.resize(n);
    std::vector<int> parent(n, -1);
    for (int i = 0; i < n; ++i) {
        int v = order[i];
        std::vector<int> later;
        for (int w : adj[v])
            if (pos[w] > i)
                later.push_back(w);
        for (int a : later)
            for (int b : later)
                if (a != b)
                    adj[a].insert(b);
        auto& node = td.nodes[i];
        node.bag = later;
        node.bag.push_back(v);
        std::sort(node.bag.begin(), node.bag.end());
        td.width = std::max(td.width, int(node.bag.size()) - 1);
        int p = -1;
        for (int w : later)
            if (p < 0 || pos[w] < p)
                p = pos[w];
        parent[i] = p;
    }
    for (int i = 0; i + 1 < n; ++i)
        if (parent[i] < 0)
            parent[i] = n - 1;
    for (int i = 0; i + 1 < n; ++i)
        td.nodes[parent[i]].children.push_back(i);
    td.root = n - 1;
    return td;
}

TreeDecomposition make_nice(const TreeDecomposition& td, const std::vector<int>& keep)
{
    using K = TreeDecomposition::Kind;
    TreeDecomposition out;
    auto add = [&](K kind, int v, std::vector<int> bag, std::vector<int> children) {
        out.nodes.push_back({kind, v, std::move(bag), std::move(children)});
        out.width = std::max(out.width, int(out.nodes.back().bag.size()) - 1);
        return int(out.nodes.size()) - 1;
    };
    auto transform = [&](int top, std::vector<int> from, const std::vector<int>& to) {
        for (int v : std::vector<int>(from)) {
            if (std::binary_search(to.begin(), to.end(), v))
                continue;
            from.erase(std::find(from.begin(), from.end(), v));
            top = add(K::forget, v, from, {top});
        }
        for (int v : to) {
            if (std::binary_search(from.begin(), from.end(), v))
                continue;
            from.insert(std::lower_bound(from.begin(), from.end(), v), v);
            top = add(K::introduce, v, from, {top});
        }
        return top;
    };
    std::function<int(int)> build = [&](int t) {
        const auto& node = td.nodes[t];
        std::vector<int> bag = node.bag;
        std::sort(bag.begin(), bag.end());
        std::vector<int> tops;
        for (int c : node.children) {
            std::vector<int> cb = td.nodes[c].bag;
            std::sort(cb.begin(), cb.end());
            tops.push_back(transform(build(c), cb, bag));
        }
        if (tops.empty())
            return transform(add(K::leaf, -1, {}, {}), {}, bag);
        int cur = tops[0];
        for (std::size_t i = 1; i < tops.size(); ++i)
            cur = add(K::join, -1, bag, {cur, tops[i]});
        return cur;
    };
    if (td.nodes.empty() || td.root < 0) {
        out = single_empty_leaf();
        return out;
    }
    int top = build(td.root);
    std::vector<int> rb = td.nodes[td.root].bag;
    std::sort(rb.begin(), rb.end());
    std::vector<int> target;
    for (int v : rb)
        if (std::find(keep.begin(), keep.end(), v) != keep.end())
            target.push_back(v);
    out.root = transform(top, rb, target);
    return out;
}

bool is_valid_decomposition(const Structure& s, const TreeDecomposition& td)
{
    int m = int(td.nodes.size());
    if (td.root < 0 || td.root >= m)
        return false;
    std::vector<int> parent(m, -1);
    for (int i = 0; i < m; ++i)
        for (int c : td.nodes[i].children) {
            if (c < 0 || c >= m || c >= i || parent[c] >= 0)
                return false;
            parent[c] = i;
        }
    for (int i = 0; i < m; ++i)
        if ((i == td.root) != (parent[i] < 0))
            return false;
    std::vector<std::vector<char>> in(m, std::vector<char>(s.size(), 0));
    for (int i = 0; i < m; ++i)
        for (int v : td.nodes[i].bag) {
            if (v < 0 || v >= s.size())
                return false;
            in[i][v] = 1;
        }
    for (int v = 0; v < s.size(); ++v) {
        int tops = 0;
        for (int i = 0; i < m; ++i)
            if (in[i][v] && (parent[i] < 0 || ! in[parent[i]][v]))
                ++tops;
        if (tops != 1)
            return false;
    }
    for (auto& rel : s.relations())
        for (auto& t : rel) {
            bool covered = false;
            for (int i = 0; i < m && ! covered; ++i)
                covered = std::all_of(t.begin(), t.end(), [&](int v) { return in[i][v] != 0; });
            if (! covered)
                return false;
        }
    return true;
}

bool is_nice(const TreeDecomposition& td)
{
    using K = TreeDecomposition::Kind;
    for (auto& n : td.nodes) {
        auto child_bag = [&](int i) { return td.nodes[n.children[i]].bag; };
        switch (n.kind) {
        case K::leaf:
            if (! n.bag.empty() || ! n.children.empty())
                return false;
            break;
        case K::introduce: {
            if (n.children.size() != 1)
                return false;
            auto b = child_bag(0);
            if (std::find(b.begin(), b.end(), n.vertex) != b.end())
                return false;
            b.push_back(n.vertex);
            std::sort(b.begin(), b.end());
            if (b != n.bag)
                return false;
            break;
        }
        case K::forget: {
            if (n.children.size() != 1)
                return false;
            auto b = n.bag;
            if (std::find(b.begin(), b.end(), n.vertex) != b.end())
                return false;
            b.push_back(n.vertex);
            std::sort(b.begin(), b.end());
            if (b != child_bag(0))
                return false;
            break;
        }
        case K::join:
            if (n.children.size() != 2 || child_bag(0) != n.bag || child_bag(1) != n.bag)
                return false;
            break;
        case K::plain:
            return false;
        }
    }
    return true;
}

namespace {
    // Elimination order of minimum width (exact subset DP) or a min-degree order.
    std::vector<int> elimination_order(const Structure& g, int limit, bool allow_heuristic, int& width, bool& exact)
    {
        int n = g.size();
        exact = true;
        if (n > limit || n > 30) {
            if (! allow_heuristic)
                throw ModelError("graph with " + std::to_string(n) + " vertices exceeds the exact treewidth limit");
            exact = false;
            auto order = min_degree_order(g);
            width = decomposition_from_order(g, order).width;
            return order;
        }
        auto adj = adjacency_masks(g);
        std::uint32_t full = (std::uint32_t(1) << n) - 1;
        std::vector<std::int8_t> tw(std::size_t(full) + 1, 0);
        std::vector<std::int8_t> best(std::size_t(full) + 1, -1);
        tw[0] = -1;
        for (std::uint32_t s = 1; s <= full; ++s) {
            int bestv = -1, bestw = 127;
            for (std::uint32_t rest = s; rest; rest &= rest - 1) {
                int v = std::countr_zero(rest);
                std::uint32_t before = s & ~(std::uint32_t(1) << v);
                // neighbours of v's component in G[before + v], outside it
                std::uint32_t comp = std::uint32_t(1) << v, nb = 0;
                while (true) {
                    nb = 0;
                    for (std::uint32_t c = comp; c; c &= c - 1)
                        nb |= adj[std::countr_zero(c)];
                    std::uint32_t grow = comp | (nb & before);
                    if (grow == comp)
                        break;
                    comp = grow;
                }
                int q = std::popcount(nb & ~comp & ~before);
                int w = std::max<int>(tw[before], q);
                if (w < bestw) {
                    bestw = w;
                    bestv = v;
                }
            }
            tw[s] = std::int8_t(bestw);
            best[s] = std::int8_t(bestv);
        }
        std::vector<int> order;
        for (std::uint32_t s = full; s; s &= ~(std::uint32_t(1) << best[s]))
            order.push_back(best[s]);
        std::reverse(order.begin(), order.end());
        width = std::max(0, int(tw[full]));
        return order;
    }
}

TreewidthResult exact_treewidth(const Structure& g0, int limit, bool allow_heuristic)
{
    Structure g = g0.is_graph() ? g0 : gaifman_graph(g0);
    TreewidthResult res;
    if (g.size() == 0) {
        res.decomposition = single_empty_leaf();
        return res;
    }
    auto order = elimination_order(g, limit, allow_heuristic, res.width, res.exact);
    res.decomposition = make_nice(decomposition_from_order(g, order));
    return res;
}

namespace {
    struct Digits {
        std::uint64_t base;
        std::uint64_t encode(const std::vector<int>& d) const
        {
            std::uint64_t k = 0;
            for (auto it = d.rbegin(); it != d.rend(); ++it)
                k = k * base + std::uint64_t(*it);
            return k;
        }
        void decode(std::uint64_t k, std::size_t len, std::vector<int>& d) const
        {
            d.resize(len);
            for (std::size_t i = 0; i < len; ++i) {
                d[i] = int(k % base);
                k /= base;
            }
        }
    };

    template <typename V>
    using Table = std::unordered_map<std::uint64_t, V>;

    template <typename V>
    void accumulate(V& into, const V& v)
    {
        if constexpr (std::is_same_v<V, bool>)
            into = into || v;
        else
            into += v;
    }

    template <typename V>
    V combine(const V& a, const V& b)
    {
        if constexpr (std::is_same_v<V, bool>)
            return a && b;
        else
            return a * b;
    }

    // Runs the DP over a nice decomposition of h and returns the root table,
    // keyed by the images of the root bag (ascending vertex order).
    template <typename V>
    Table<V> run_dp(const Structure& h, const Structure& t, const TreeDecomposition& td)
    {
        using K = TreeDecomposition::Kind;
        detail::TargetIndex ti(t);
        int n = t.size();
        Digits dg{std::uint64_t(std::max(n, 1))};
        {
            long double cap = 1;
            for (int i = 0; i <= td.width; ++i)
                cap *= std::max(n, 1);
            if (cap > 9.0e18L)
                throw ModelError("decomposition too wide for the key encoding");
        }
        // atoms checked where their last vertex is introduced
        std::vector<std::vector<std::pair<int, const Tuple*>>> checks(td.nodes.size());
        for (std::size_t i = 0; i < td.nodes.size(); ++i) {
            auto& node = td.nodes[i];
            if (node.kind != K::introduce)
                continue;
            for (std::size_t r = 0; r < h.signature().size(); ++r)
                for (auto& tu : h.relation(r)) {
                    if (std::find(tu.begin(), tu.end(), node.vertex) == tu.end())
                        continue;
                    bool inside = std::all_of(tu.begin(), tu.end(),
                        [&](int v) { return std::binary_search(node.bag.begin(), node.bag.end(), v); });
                    if (inside)
                        checks[i].emplace_back(int(r), &tu);
                }
        }
        std::vector<Table<V>> tables(td.nodes.size());
        std::vector<int> pos(h.size(), -1), digits, child;
        int vals[64];
        for (std::size_t i = 0; i < td.nodes.size(); ++i) {
            auto& node = td.nodes[i];
            Table<V>& out = tables[i];
            switch (node.kind) {
            case K::leaf:
                out[0] = V(1);
                break;
            case K::introduce: {
                Table<V> in = std::move(tables[node.children[0]]);
                std::size_t p = std::lower_bound(node.bag.begin(), node.bag.end(), node.vertex) - node.bag.begin();
                for (std::size_t j = 0; j < node.bag.size(); ++j)
                    pos[node.bag[j]] = int(j);
                for (auto& [key, val] : in) {
                    dg.decode(key, node.bag.size() - 1, child);
                    digits = child;
                    digits.insert(digits.begin() + long(p), 0);
                    for (int x = 0; x < n; ++x) {
                        digits[p] = x;
                        bool ok = true;
                        for (auto& [sym, tu] : checks[i]) {
                            for (std::size_t a = 0; a < tu->size(); ++a)
                                vals[a] = digits[pos[(*tu)[a]]];
                            if (! ti.contains(sym, vals, int(tu->size()))) {
                                ok = false;
                                break;
                            }
                        }
                        if (ok)
                            out.emplace(dg.encode(digits), val);
                    }
                }
                break;
            }
            case K::forget: {
                Table<V> in = std::move(tables[node.children[0]]);
                auto& cb = td.nodes[node.children[0]].bag;
                std::size_t p = std::lower_bound(cb.begin(), cb.end(), node.vertex) - cb.begin();
                for (auto& [key, val] : in) {
                    dg.decode(key, cb.size(), digits);
                    digits.erase(digits.begin() + long(p));
                    auto [it, fresh] = out.emplace(dg.encode(digits), val);
                    if (! fresh)
                        accumulate(it->second, val);
                }
                break;
            }
            case K::join: {
                Table<V> a = std::move(tables[node.children[0]]);
                Table<V> b = std::move(tables[node.children[1]]);
                if (a.size() > b.size())
                    std::swap(a, b);
                for (auto& [key, val] : a) {
                    auto it = b.find(key);
                    if (it != b.end())
                        out.emplace(key, combine(val, it->second));
                }
                break;
            }
            case K::plain:
                throw ModelError("decomposition is not nice");
            }
        }
        return std::move(tables[td.root]);
    }
}

BigInt count_answers_dp(const Query& q, const Structure& t, const TreeDecomposition& td0)
{
    if (int(q.free.size()) != q.h.size())
        throw ModelError("the DP counter needs every variable free");
    if (! q.is_plain())
        throw ModelError("the DP counter takes plain queries");
    if (! is_valid_decomposition(q.h, td0))
        throw ModelError("invalid tree decomposition");
    TreeDecomposition td = is_nice(td0) ? td0 : make_nice(td0);
    auto table = run_dp<BigInt>(q.h, t, td);
    BigInt total = 0;
    for (auto& [k, v] : table)
        total += v;
    return total;
}

std::vector<QuantifiedComponent> quantified_components(const Query& q)
{
    int m = q.h.size();
    std::vector<char> free(m, 0);
    for (int x : q.free)
        free[x] = 1;
    std::vector<int> parent(m);
    std::iota(parent.begin(), parent.end(), 0);
    std::function<int(int)> find = [&](int x) { return parent[x] == x ? x : parent[x] = find(parent[x]); };
    for (auto& rel : q.h.relations())
        for (auto& t : rel) {
            int first = -1;
            for (int v : t)
                if (! free[v]) {
                    if (first < 0)
                        first = v;
                    parent[find(v)] = find(first);
                }
        }
    std::vector<int> index(m, -1);
    std::vector<QuantifiedComponent> out;
    for (int v = 0; v < m; ++v) {
        if (free[v])
            continue;
        int r = find(v);
        if (index[r] < 0) {
            index[r] = int(out.size());
            out.emplace_back();
        }
        out[index[r]].ys.push_back(v);
    }
    std::vector<std::set<int>> bd(out.size());
    for (auto& rel : q.h.relations())
        for (auto& t : rel)
            for (int v : t)
                if (! free[v])
                    for (int w : t)
                        if (free[w])
                            bd[index[find(v)]].insert(w);
    for (std::size_t i = 0; i < out.size(); ++i)
        out[i].boundary.assign(bd[i].begin(), bd[i].end());
    return out;
}

std::set<Tuple> extendability_relation(const Query& q, const Structure& t, int component, DssStats* stats, int dss_cap)
{
    auto comps = quantified_components(q);
    if (component < 0 || component >= int(comps.size()))
        throw ModelError("no such quantified component");
    const auto& comp = comps[component];
    int a = int(comp.ys.size()), c = int(comp.boundary.size());
    if (c > dss_cap)
        throw ModelError("component with " + std::to_string(c) + " free neighbours exceeds the cap " + std::to_string(dss_cap));

    // local ids: quantified vertices first, then the boundary
    std::vector<int> local(q.h.size(), -1);
    for (int i = 0; i < a; ++i)
        local[comp.ys[i]] = i;
    for (int i = 0; i < c; ++i)
        local[comp.boundary[i]] = a + i;
    Structure sub(q.h.signature(), a + c);
    Structure inner(Signature::graph(), a);
    for (std::size_t r = 0; r < q.h.signature().size(); ++r)
        for (auto& tu : q.h.relation(r)) {
            bool touches = std::any_of(tu.begin(), tu.end(), [&](int v) { return local[v] >= 0 && local[v] < a; });
            if (! touches)
                continue;
            Tuple m;
            for (int v : tu)
                m.push_back(local[v]);
            sub.add_tuple(r, m);
            for (int u : m)
                for (int w : m)
                    if (u < a && w < a && u != w)
                        inner.add_edge(u, w);
        }

    // the boundary joins every bag, so one pass decides all pinned tuples
    int inner_width = 0;
    bool inner_exact = true;
    auto base = decomposition_from_order(inner, elimination_order(inner, default_exact_limit, true, inner_width, inner_exact));
    std::vector<int> boundary_local;
    for (int i = 0; i < c; ++i)
        boundary_local.push_back(a + i);
    for (auto& node : base.nodes) {
        node.bag.insert(node.bag.end(), boundary_local.begin(), boundary_local.end());
        std::sort(node.bag.begin(), node.bag.end());
    }
    auto nice = make_nice(base, boundary_local);
    auto table = run_dp<bool>(sub, t, nice);

    std::set<Tuple> rel;
    Digits dg{std::uint64_t(std::max(t.size(), 1))};
    std::vector<int> digits;
    for (auto& [key, ok] : table) {
        dg.decode(key, std::size_t(c), digits);
        if (ok)
            rel.insert(digits);
    }
    if (stats) {
        stats->candidate_checks += table.size();
        stats->max_relation_arity = std::max(stats->max_relation_arity, c);
    }
    return rel;
}

DerivedInstance derive_free_query(const Query& q, const Structure& t, DssStats* stats, int dss_cap)
{
    if (! q.is_plain())
        throw ModelError("the dss counter takes plain queries");
    q.validate();
    int k = int(q.free.size());
    std::vector<int> local(q.h.size(), -1);
    for (int i = 0; i < k; ++i)
        local[q.free[i]] = i;
    auto comps = quantified_components(q);
    if (stats)
        stats->components += comps.size();

    Signature sig = q.h.signature();
    DerivedInstance out;
    std::vector<int> rsym(comps.size(), -1);
    for (std::size_t i = 0; i < comps.size(); ++i) {
        if (comps[i].boundary.empty())
            continue;
        std::string name = "R" + std::to_string(i);
        while (sig.index_of(name) >= 0)
            name += "_";
        rsym[i] = sig.add({name, int(comps[i].boundary.size())});
    }
    Structure h(sig, k);
    Structure target(sig, t.size());
    for (std::size_t r = 0; r < q.h.signature().size(); ++r) {
        for (auto& tu : q.h.relation(r)) {
            if (! std::all_of(tu.begin(), tu.end(), [&](int v) { return local[v] >= 0; }))
                continue;
            Tuple m;
            for (int v : tu)
                m.push_back(local[v]);
            h.add_tuple(r, m);
        }
        for (auto& tu : t.relation(r))
            target.add_tuple(r, tu);
    }
    for (std::size_t i = 0; i < comps.size(); ++i) {
        auto rel = extendability_relation(q, t, int(i), stats, dss_cap);
        if (rsym[i] < 0) {
            if (rel.empty())
                out.zero = true;
            continue;
        }
        Tuple m;
        for (int b : comps[i].boundary)
            m.push_back(local[b]);
        h.add_tuple(rsym[i], m);
        for (auto& tu : rel)
            target.add_tuple(rsym[i], tu);
    }
    std::vector<int> all(k);
    std::iota(all.begin(), all.end(), 0);
    out.query = Query(h, all);
    out.target = std::move(target);
    return out;
}

BigInt count_answers_dss(const Query& q, const Structure& t, DssStats* stats, int dss_cap)
{
    auto d = derive_free_query(q, t, stats, dss_cap);
    if (d.zero)
        return 0;
    auto g = gaifman_graph(d.query.h);
    auto tw = exact_treewidth(g, default_exact_limit, true);
    if (stats)
        stats->contract_width = tw.width;
    return count_answers_dp(d.query, d.target, tw.decomposition);
}

}  // namespace cqc
