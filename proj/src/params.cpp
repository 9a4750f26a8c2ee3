#include <cqc/params.hpp>

#include <cqc/hom.hpp>

#include <algorithm>
#include <climits>
#include <functional>
#include <queue>

namespace cqc {

Structure contract_graph(const Query& q)
{
    int k = int(q.free.size());
    std::vector<int> local(q.h.size(), -1);
    for (int i = 0; i < k; ++i)
        local[q.free[i]] = i;
    Structure g(Signature::graph(), k);
    for (auto& rel : q.h.relations())
        for (auto& t : rel)
            for (int u : t)
                for (int v : t)
                    if (local[u] >= 0 && local[v] >= 0 && u != v)
                        g.add_edge(local[u], local[v]);
    for (auto& c : quantified_components(q))
        for (int u : c.boundary)
            for (int v : c.boundary)
                if (u != v)
                    g.add_edge(local[u], local[v]);
    return g;
}

int dominating_star_size(const Query& q)
{
    int d = 0;
    for (auto& c : quantified_components(q))
        d = std::max(d, int(c.boundary.size()));
    return d;
}

namespace {
    // Edmonds-Karp on a small dense capacity matrix.
    class Flow {
    public:
        explicit Flow(int n) : n_(n), cap_(std::size_t(n) * n, 0) {}
        void add(int u, int v, int c) { cap_[idx(u, v)] += c; }
        int run(int s, int t, int limit)
        {
            int total = 0;
            std::vector<int> prev(n_);
            while (total < limit) {
                std::fill(prev.begin(), prev.end(), -1);
                prev[s] = s;
                std::queue<int> bfs;
                bfs.push(s);
                while (! bfs.empty() && prev[t] < 0) {
                    int u = bfs.front();
                    bfs.pop();
                    for (int v = 0; v < n_; ++v)
                        if (prev[v] < 0 && cap_[idx(u, v)] > 0) {
                            prev[v] = u;
                            bfs.push(v);
                        }
                }
                if (prev[t] < 0)
                    break;
                for (int v = t; v != s; v = prev[v]) {
                    --cap_[idx(prev[v], v)];
                    ++cap_[idx(v, prev[v])];
                }
                ++total;
            }
            return total;
        }

    private:
        std::size_t idx(int u, int v) const { return std::size_t(u) * n_ + v; }
        int n_;
        std::vector<int> cap_;
    };
}

int vertex_disjoint_paths(const Structure& g, const std::vector<int>& a, const std::vector<int>& b)
{
    int n = g.size();
    // v_in = 2v, v_out = 2v + 1
    int s = 2 * n, t = 2 * n + 1;
    Flow f(2 * n + 2);
    for (int v = 0; v < n; ++v)
        f.add(2 * v, 2 * v + 1, 1);
    for (auto [u, v] : g.edges()) {
        f.add(2 * u + 1, 2 * v, n);
        f.add(2 * v + 1, 2 * u, n);
    }
    for (int v : a)
        f.add(s, 2 * v, 1);
    for (int v : b)
        f.add(2 * v + 1, t, 1);
    return f.run(s, t, int(std::min(a.size(), b.size())));
}

bool is_node_well_linked(const Structure& g, const std::vector<int>& s)
{
    int m = int(s.size());
    if (m > 20)
        throw ModelError("well-linkedness check limited to 20 vertices");
    // each vertex of s is in A, in B or in neither
    for (int k = 1; 2 * k <= m; ++k) {
        std::vector<int> side(m, 0);
        std::function<bool(int, int, int)> rec = [&](int i, int na, int nb) {
            if (na == k && nb == k) {
                std::vector<int> a, b;
                for (int j = 0; j < m; ++j) {
                    if (side[j] == 1)
                        a.push_back(s[j]);
                    else if (side[j] == 2)
                        b.push_back(s[j]);
                }
                return vertex_disjoint_paths(g, a, b) == k;
            }
            if (i == m || (m - i) < (k - na) + (k - nb))
                return true;
            side[i] = 0;
            if (! rec(i + 1, na, nb))
                return false;
            if (na < k) {
                side[i] = 1;
                bool ok = rec(i + 1, na + 1, nb);
                side[i] = 0;
                if (! ok)
                    return false;
            }
            // (A, B) and (B, A) need the same paths, so the first chosen vertex goes to A
            if (nb < k && na > 0) {
                side[i] = 2;
                bool ok = rec(i + 1, na, nb + 1);
                side[i] = 0;
                if (! ok)
                    return false;
            }
            return true;
        };
        if (! rec(0, 0, 0))
            return false;
    }
    return true;
}

namespace {
    // Size of a maximum matching between `left` and `right` in the bipartite
    // graph given by adj (Kuhn's algorithm).
    int matching_size(const std::vector<int>& left, const std::vector<char>& in_right,
        const std::vector<std::vector<int>>& adj, int n)
    {
        std::vector<int> owner(n, -1);
        int size = 0;
        for (int u : left) {
            std::vector<char> seen(n, 0);
            std::function<bool(int)> augment = [&](int x) {
                for (int y : adj[x]) {
                    if (! in_right[y] || seen[y])
                        continue;
                    seen[y] = 1;
                    if (owner[y] < 0 || augment(owner[y])) {
                        owner[y] = x;
                        return true;
                    }
                }
                return false;
            };
            if (augment(u))
                ++size;
        }
        return size;
    }
}

int linked_matching_number(const Query& q, int y_cap)
{
    auto ys = q.quantified();
    int ny = int(ys.size());
    if (ny == 0 || q.free.empty())
        return 0;
    if (ny > y_cap)
        throw ModelError("linked matching number limited to " + std::to_string(y_cap) + " quantified variables");
    int n = q.h.size();
    auto g = gaifman_graph(q.h);
    auto adj = g.neighbours();
    std::vector<char> free(n, 0);
    for (int x : q.free)
        free[x] = 1;
    std::vector<int> ylocal(n, -1);
    for (int i = 0; i < ny; ++i)
        ylocal[ys[i]] = i;
    Structure gy = g.induced(ys);

    std::vector<char> all_y(n, 0);
    for (int y : ys)
        all_y[y] = 1;
    int bound = matching_size(q.free, all_y, adj, n);

    // Supersets of a non-well-linked set are not well-linked.
    std::vector<std::uint32_t> bad;
    for (int size = bound; size >= 1; --size) {
        std::vector<int> pick(size);
        std::function<bool(int, int)> rec = [&](int start, int i) {
            if (i == size) {
                std::uint32_t mask = 0;
                for (int y : pick)
                    mask |= std::uint32_t(1) << ylocal[y];
                for (auto b : bad)
                    if ((mask & b) == b)
                        return false;
                std::vector<char> in(n, 0);
                for (int y : pick)
                    in[y] = 1;
                if (matching_size(q.free, in, adj, n) < size)
                    return false;
                std::vector<int> s;
                for (int y : pick)
                    s.push_back(ylocal[y]);
                if (! is_node_well_linked(gy, s)) {
                    bad.push_back(mask);
                    return false;
                }
                return true;
            }
            for (int j = start; j <= ny - (size - i); ++j) {
                pick[i] = ys[j];
                if (rec(j + 1, i + 1))
                    return true;
            }
            return false;
        };
        if (rec(0, 0))
            return size;
    }
    return 0;
}

ParameterReport parameter_report(const Query& q)
{
    ParameterReport r;
    auto tw = exact_treewidth(gaifman_graph(q.h), default_exact_limit, true);
    r.treewidth = tw.width;
    r.treewidth_exact = tw.exact;
    auto ct = exact_treewidth(contract_graph(q), default_exact_limit, true);
    r.contract_width = ct.width;
    r.contract_exact = ct.exact;
    r.components = quantified_components(q);
    r.dss = dominating_star_size(q);
    try {
        r.lmn = linked_matching_number(q);
    }
    catch (const ModelError&) {
        r.lmn = -1;
        r.lmn_exact = false;
        r.notes.push_back("linked matching number not computed: too many quantified variables");
    }
    if (q.is_plain()) {
        r.minimal = is_minimal(q);
        if (! r.minimal)
            r.notes.push_back("query is not minimal; parameters of its augmented core decide the class");
    }
    if (r.dss >= 3)
        r.notes.push_back("no O(n^{" + std::to_string(r.dss) + "-eps}) algorithm under SETH");
    return r;
}

Classification classify(const std::vector<Query>& family)
{
    Classification c;
    for (auto& q : family)
        c.reports.push_back(parameter_report(q));
    if (! c.reports.empty()) {
        auto& a = c.reports.front();
        auto& b = c.reports.back();
        c.treewidth_grows = b.treewidth > a.treewidth;
        c.contract_grows = b.contract_width > a.contract_width;
        c.dss_grows = b.dss > a.dss;
        c.lmn_grows = b.lmn > a.lmn;
    }
    if (c.lmn_grows) {
        c.regime = "#A[2]-eq.";
        c.description = "#A[2]-equivalent";
    }
    else if (c.dss_grows) {
        c.regime = "#W[2]-hard";
        c.description = "#W[2]-hard";
        c.notes.push_back("#A[2] status open");
    }
    else if (c.contract_grows) {
        c.regime = "#W[1]-eq.";
        c.description = "#W[1]-equivalent";
    }
    else if (c.treewidth_grows) {
        c.regime = "W[1]-eq.";
        c.description = "W[1]-equivalent";
    }
    else {
        c.regime = "P";
        c.description = "polynomial time";
    }
    c.notes.push_back("class-level evidence");
    for (auto& r : c.reports)
        if (! r.minimal) {
            c.notes.push_back("family contains non-minimal queries; minimize first");
            break;
        }
    return c;
}

}  // namespace cqc
