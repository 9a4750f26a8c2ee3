#include <cqc/gadgets.hpp>

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>

namespace cqc {

FamilyKind parse_family(const std::string& name)
{
    static const std::map<std::string, FamilyKind> names{{"psi", FamilyKind::psi}, {"gamma", FamilyKind::gamma},
        {"omega", FamilyKind::omega}, {"poly", FamilyKind::poly}, {"w1", FamilyKind::w1},
        {"subdivided", FamilyKind::subdivided}, {"phi", FamilyKind::phi}};
    auto it = names.find(name);
    if (it == names.end())
        throw ModelError("unknown query family '" + name + "'");
    return it->second;
}

std::string family_name(FamilyKind kind)
{
    switch (kind) {
    case FamilyKind::psi: return "psi";
    case FamilyKind::gamma: return "gamma";
    case FamilyKind::omega: return "omega";
    case FamilyKind::poly: return "poly";
    case FamilyKind::w1: return "w1";
    case FamilyKind::subdivided: return "subdivided";
    case FamilyKind::phi: return "phi";
    }
    return "";
}

int grate_quantified(int k, int i, int j)
{
    if (i < 0 || j < 0 || i + j > k - 1)
        throw ModelError("no such grate vertex");
    // rows 0..i-1 hold k, k-1, ... vertices
    int before = i * k - i * (i - 1) / 2;
    return k + before + j;
}

Query family_query(FamilyKind kind, int k)
{
    if (k < 1)
        throw ModelError("family index must be positive");
    std::vector<int> xs(k);
    std::iota(xs.begin(), xs.end(), 0);
    switch (kind) {
    case FamilyKind::psi:
    case FamilyKind::phi: {
        Structure h(Signature::graph(), k + 1);
        for (int i = 0; i < k; ++i) {
            h.add_edge(i, k);
            if (kind == FamilyKind::phi)
                for (int j = i + 1; j < k; ++j)
                    h.add_edge(i, j);
        }
        return Query(h, xs);
    }
    case FamilyKind::gamma: {
        Structure h(Signature::graph(), 2 * k);
        for (int i = 0; i < k; ++i) {
            h.add_edge(i, k + i);
            for (int j = i + 1; j < k; ++j)
                h.add_edge(k + i, k + j);
        }
        return Query(h, xs);
    }
    case FamilyKind::poly: {
        Structure h(Signature::graph(), 2 * k - 1);
        for (int i = 0; i + 1 < k; ++i) {
            h.add_edge(i, k + i);
            h.add_edge(k + i, i + 1);
        }
        return Query(h, xs);
    }
    case FamilyKind::w1: {
        Structure h(Signature::graph(), k);
        for (int i = 0; i < k; ++i)
            for (int j = i + 1; j < k; ++j)
                h.add_edge(i, j);
        return Query(h, {});
    }
    case FamilyKind::subdivided: {
        Structure h(Signature::graph(), k + k * (k - 1) / 2);
        int next = k;
        for (int i = 0; i < k; ++i)
            for (int j = i + 1; j < k; ++j) {
                h.add_edge(i, next);
                h.add_edge(next, j);
                ++next;
            }
        return Query(h, xs);
    }
    case FamilyKind::omega: {
        Structure h(Signature::graph(), k + k * (k + 1) / 2);
        for (int i = 0; i < k; ++i)
            for (int j = 0; i + j <= k - 1; ++j) {
                int y = grate_quantified(k, i, j);
                if (i + j == k - 1)
                    h.add_edge(i, y);
                if (i + j + 1 <= k - 1) {
                    h.add_edge(y, grate_quantified(k, i, j + 1));
                    h.add_edge(y, grate_quantified(k, i + 1, j));
                }
            }
        return Query(h, xs);
    }
    }
    throw ModelError("unknown query family");
}

namespace {
    void require_graph_query(const Query& q)
    {
        if (! q.h.is_graph() || ! q.is_plain())
            throw ModelError("minor operations need a plain graph-mode query");
    }

    void require_coloring(const Structure& t, const Structure& h, const Coloring& c)
    {
        if (int(c.size()) != t.size() || ! is_valid_coloring(t, h, c))
            throw ModelError("invalid coloring: not a homomorphism from the target to the query");
    }
}

MinorResult apply_query_minor(const Query& q, const MinorOp& op)
{
    require_graph_query(q);
    int m = q.h.size();
    auto in_range = [&](int v) { return v >= 0 && v < m; };
    MinorResult out;
    out.vertex_map.assign(m, -1);
    std::vector<std::pair<int, int>> edges = q.h.edges();
    int n2 = m;
    switch (op.kind) {
    case MinorOp::Kind::delete_edge:
        if (! in_range(op.u) || ! in_range(op.v) || ! q.h.adjacent(op.u, op.v))
            throw ModelError("edge to delete is not in the query");
        std::iota(out.vertex_map.begin(), out.vertex_map.end(), 0);
        edges.erase(std::find(edges.begin(), edges.end(), std::make_pair(std::min(op.u, op.v), std::max(op.u, op.v))));
        break;
    case MinorOp::Kind::delete_vertex:
        if (! in_range(op.u))
            throw ModelError("vertex to delete is not in the query");
        for (auto [a, b] : edges)
            if (a == op.u || b == op.u)
                throw ModelError("only isolated vertices can be deleted");
        for (int v = 0; v < m; ++v)
            out.vertex_map[v] = v == op.u ? -1 : v - (v > op.u);
        n2 = m - 1;
        break;
    case MinorOp::Kind::contract_edge: {
        if (! in_range(op.u) || ! in_range(op.v) || ! q.h.adjacent(op.u, op.v))
            throw ModelError("edge to contract is not in the query");
        int a = std::min(op.u, op.v), b = std::max(op.u, op.v);
        for (int v = 0; v < m; ++v)
            out.vertex_map[v] = v == b ? a : v - (v > b);
        n2 = m - 1;
        break;
    }
    }
    Structure h(Signature::graph(), n2);
    for (auto [a, b] : edges) {
        int x = out.vertex_map[a], y = out.vertex_map[b];
        if (x >= 0 && y >= 0 && x != y)
            h.add_edge(x, y);
    }
    std::vector<int> free;
    for (int x : q.free) {
        int y = out.vertex_map[x];
        if (y >= 0 && std::find(free.begin(), free.end(), y) == free.end())
            free.push_back(y);
    }
    out.query = Query(h, free);
    return out;
}

GadgetOutput minor_instance_gadget(const Query& q, const MinorOp& op, const Structure& t, const Coloring& c)
{
    auto minor = apply_query_minor(q, op);
    require_coloring(t, minor.query.h, c);
    int m = q.h.size();
    // preimage of each minor vertex under the vertex map (unique except for contraction)
    std::vector<int> back(minor.query.h.size(), -1);
    for (int v = m - 1; v >= 0; --v)
        if (minor.vertex_map[v] >= 0)
            back[minor.vertex_map[v]] = v;

    GadgetOutput out;
    out.relation = "cp(H,X,G') = cp(minor,G)";
    switch (op.kind) {
    case MinorOp::Kind::delete_edge: {
        out.target = t;
        out.coloring = c;
        for (int a = 0; a < t.size(); ++a)
            for (int b = 0; b < t.size(); ++b)
                if ((c[a] == op.u && c[b] == op.v))
                    out.target.add_edge(a, b);
        break;
    }
    case MinorOp::Kind::delete_vertex: {
        out.target = t;
        for (int v = 0; v < t.size(); ++v)
            out.coloring.push_back(back[c[v]]);
        out.target.add_vertex();
        out.coloring.push_back(op.u);
        break;
    }
    case MinorOp::Kind::contract_edge: {
        int a = std::min(op.u, op.v), b = std::max(op.u, op.v);
        int w = minor.vertex_map[a];
        int n = t.size();
        std::vector<int> twin(n, -1);
        int next = n;
        for (int v = 0; v < n; ++v)
            if (c[v] == w)
                twin[v] = next++;
        out.target = Structure(Signature::graph(), next);
        out.coloring.assign(next, -1);
        for (int v = 0; v < n; ++v) {
            out.coloring[v] = c[v] == w ? a : back[c[v]];
            if (twin[v] >= 0) {
                out.coloring[twin[v]] = b;
                out.target.add_edge(v, twin[v]);
            }
        }
        // split vertices only keep the edges their own colour has in H
        for (auto [x, y] : t.edges()) {
            for (int s : {x, y}) {
                int o = s == x ? y : x;
                if (twin[s] < 0)
                    continue;
                int oc = out.coloring[o];
                if (q.h.adjacent(b, oc))
                    out.target.add_edge(twin[s], o);
            }
            if (q.h.adjacent(out.coloring[x], out.coloring[y]))
                out.target.add_edge(x, y);
        }
        break;
    }
    }
    return out;
}

GadgetOutput uncolored_to_cp_gadget(const Query& q, const Structure& t)
{
    int m = q.h.size(), n = t.size();
    GadgetOutput out;
    out.relation = "cp(H,X,G') = ans(H,X,G)";
    out.target = Structure(q.h.signature(), m * n);
    for (int u = 0; u < m; ++u)
        for (int g = 0; g < n; ++g)
            out.coloring.push_back(u);
    for (std::size_t r = 0; r < q.h.signature().size(); ++r)
        for (auto& atom : q.h.relation(r))
            for (auto& tu : t.relation(r)) {
                Tuple layered(atom.size());
                for (std::size_t i = 0; i < atom.size(); ++i)
                    layered[i] = atom[i] * n + tu[i];
                out.target.add_tuple(r, layered);
            }
    return out;
}

namespace {
    // Coefficient of z^1 in the Lagrange basis polynomial of node p over 1..d.
    std::vector<Rational> linear_coefficients(int d)
    {
        std::vector<Rational> w(d + 1, 0);
        for (int p = 1; p <= d; ++p) {
            // L_p(z) = prod_{s != p} (z - s) / (p - s); build its coefficients
            std::vector<Rational> poly{1};
            Rational denom = 1;
            for (int s = 1; s <= d; ++s) {
                if (s == p)
                    continue;
                std::vector<Rational> next(poly.size() + 1, 0);
                for (std::size_t i = 0; i < poly.size(); ++i) {
                    next[i + 1] += poly[i];
                    next[i] -= poly[i] * s;
                }
                poly = std::move(next);
                denom *= p - s;
            }
            w[p] = poly.size() > 1 ? poly[1] / denom : Rational(0);
        }
        return w;
    }
}

ColorfulCount cf_count_via_uncolored(const Query& q, const Structure& t, const Coloring& c, const AnswerCounter& counter)
{
    if (! q.is_plain() || ! is_minimal(q))
        throw ModelError("colourful counting through uncoloured answers needs a minimal query");
    require_coloring(t, q.h, c);
    int l = int(q.free.size());
    int d = l + 1;
    auto w = linear_coefficients(d);
    ColorfulCount res;
    Rational acc = 0;
    std::vector<int> z(q.h.size(), 1), grid(l, 1);
    while (true) {
        for (int i = 0; i < l; ++i)
            z[q.free[i]] = grid[i];
        Rational weight = 1;
        for (int i = 0; i < l; ++i)
            weight *= w[grid[i]];
        if (weight != 0) {
            auto cl = clone_vertices(t, c, z);
            acc += weight * Rational(counter(q, cl.structure));
            ++res.oracle_calls;
        }
        int i = l - 1;
        while (i >= 0 && grid[i] == d)
            grid[i--] = 1;
        if (i < 0)
            break;
        ++grid[i];
    }
    if (denominator(acc) != 1)
        throw ModelError("interpolation did not produce an integer");
    res.cf = numerator(acc);
    BigInt aut = count_partial_automorphisms(q);
    if (res.cf % aut != 0)
        throw ModelError("colourful count is not a multiple of the automorphism count");
    res.cp = res.cf / aut;
    return res;
}

BigInt count_surjections(int i, int j)
{
    if (i < 0 || j < 0)
        throw ModelError("negative surjection arguments");
    BigInt total = 0;
    for (int s = 0; s <= j; ++s) {
        BigInt term = binomial(j, s) * power(BigInt(j - s), i);
        total += s % 2 ? -term : term;
    }
    return total;
}

namespace {
    bool is_complete(const Structure& g)
    {
        return g.edges().size() * 2 == std::size_t(g.size()) * std::size_t(std::max(g.size() - 1, 0));
    }
}

BigInt dominating_tuples(const Structure& g, int k, const CpCounter& oracle)
{
    int n = g.size();
    if (k == 0)
        return n == 0 ? 1 : 0;
    if (is_complete(g))
        return power(BigInt(n), k);
    // layer 0 is the quantified star centre, layer i the free vertex i - 1;
    // a star answer is a tuple leaving its centre undominated
    auto psi = family_query(FamilyKind::psi, k);
    Structure layered(Signature::graph(), (k + 1) * n);
    Coloring c((k + 1) * n);
    for (int v = 0; v < n; ++v) {
        c[v] = k;
        for (int i = 1; i <= k; ++i)
            c[i * n + v] = i - 1;
    }
    for (int u = 0; u < n; ++u)
        for (int v = 0; v < n; ++v)
            if (u != v && ! g.adjacent(u, v))
                for (int i = 1; i <= k; ++i)
                    layered.add_edge(u, i * n + v);
    return power(BigInt(n), k) - oracle(psi, layered, c);
}

std::vector<BigInt> domset_via_star_oracle(const Structure& g, int k, const CpCounter& oracle)
{
    if (! g.is_graph() && g.tuple_count() > 0)
        throw ModelError("dominating sets need a loopless graph");
    int n = g.size();
    if (n == 0)
        throw ModelError("dominating sets need a nonempty graph");
    if (k < 1)
        throw ModelError("dominating set size must be positive");
    // dom[l] = number of l-tuples dominating g
    std::vector<BigInt> dom(k + 1, 0);
    dom[k] = dominating_tuples(g, k, oracle);
    std::vector<BigInt> b(k + 1, 0);
    for (int j = 1; j <= k; ++j) {
        Structure padded = g;
        for (int i = 0; i < j; ++i)
            padded.add_vertex();
        b[j] = dominating_tuples(padded, k, oracle);
    }
    // b_j = sum_{i=j..k} C(k,i) Surj(i,j) dom[k-i]; row j has diagonal C(k,j) j!
    for (int j = k; j >= 1; --j) {
        BigInt rest = b[j];
        for (int i = j + 1; i <= k; ++i)
            rest -= binomial(k, i) * count_surjections(i, j) * dom[k - i];
        BigInt diag = binomial(k, j) * count_surjections(j, j);
        if (rest % diag != 0)
            throw ModelError("padding system has no integral solution");
        dom[k - j] = rest / diag;
    }
    std::vector<BigInt> D(k + 1, 0);
    for (int l = 1; l <= k; ++l) {
        BigInt rest = dom[l];
        for (int i = 1; i < l; ++i)
            rest -= D[i] * count_surjections(l, i);
        BigInt diag = count_surjections(l, l);
        if (rest % diag != 0)
            throw ModelError("dominating set recursion has no integral solution");
        D[l] = rest / diag;
    }
    return D;
}

GadgetOutput gamma_to_grate_gadget(int k, const Structure& t, const Coloring& c)
{
    auto gamma = family_query(FamilyKind::gamma, k);
    require_coloring(t, gamma.h, c);
    GadgetOutput out;
    out.relation = "cp(omega_k,G') = cp(gamma_k,G)";
    out.target = Structure(Signature::graph(), 0);
    std::map<std::pair<int, std::pair<int, int>>, int> index;  // (colour, (u, u')) -> vertex
    auto add = [&](int colour, int u, int v) {
        int id = out.target.add_vertex();
        out.coloring.push_back(colour);
        index[{colour, {u, v}}] = id;
        return id;
    };
    auto is_y = [&](int v) { return c[v] >= k; };
    // free vertices and the diagonal
    std::vector<int> image(t.size(), -1);
    for (int v = 0; v < t.size(); ++v) {
        if (! is_y(v))
            image[v] = add(c[v], v, v);
        else {
            int i = c[v] - k;
            image[v] = add(grate_quantified(k, i, k - 1 - i), v, v);
        }
    }
    for (auto [u, v] : t.edges())
        if (is_y(u) != is_y(v))
            out.target.add_edge(image[u], image[v]);
    // interior blocks: one vertex per ordered quantified edge
    std::vector<std::pair<int, int>> yedges;
    for (auto [u, v] : t.edges())
        if (is_y(u) && is_y(v)) {
            yedges.emplace_back(u, v);
            yedges.emplace_back(v, u);
        }
    for (int i = 0; i < k; ++i)
        for (int j = 0; i + j < k - 1; ++j)
            for (auto [u, v] : yedges)
                add(grate_quantified(k, i, j), u, v);
    std::vector<std::vector<std::pair<int, int>>> members(gamma.h.size() + k * (k + 1) / 2 + k);
    for (auto& [key, id] : index)
        members[key.first].push_back(key.second);
    auto id_of = [&](int colour, std::pair<int, int> p) { return index.at({colour, p}); };
    for (int i = 0; i < k; ++i)
        for (int j = 0; i + j < k - 1; ++j) {
            int here = grate_quantified(k, i, j);
            int right = grate_quantified(k, i, j + 1), down = grate_quantified(k, i + 1, j);
            for (auto& p : members[here]) {
                for (auto& r : members[right])
                    if (p.first == r.first)
                        out.target.add_edge(id_of(here, p), id_of(right, r));
                for (auto& d : members[down])
                    if (p.second == d.second)
                        out.target.add_edge(id_of(here, p), id_of(down, d));
            }
        }
    return out;
}

GadgetOutput gaifman_expand_gadget(const Query& q, const Structure& t, const Coloring& c)
{
    auto g = gaifman_graph(q.h);
    if (int(c.size()) != t.size() || ! is_valid_coloring(t, g, c))
        throw ModelError("invalid coloring: not a homomorphism from the target to the Gaifman graph");
    GadgetOutput out;
    out.relation = "cp(H,X,G') = cp(Gaifman(H),X,G)";
    out.target = Structure(q.h.signature(), t.size());
    out.coloring = c;
    std::vector<std::vector<int>> cls(q.h.size());
    for (int v = 0; v < t.size(); ++v)
        cls[c[v]].push_back(v);
    for (std::size_t r = 0; r < q.h.signature().size(); ++r)
        for (auto& atom : q.h.relation(r)) {
            std::vector<int> distinct;
            std::vector<int> slot(atom.size());
            for (std::size_t i = 0; i < atom.size(); ++i) {
                auto it = std::find(distinct.begin(), distinct.end(), atom[i]);
                slot[i] = int(it - distinct.begin());
                if (it == distinct.end())
                    distinct.push_back(atom[i]);
            }
            std::vector<int> pick(distinct.size());
            bool found = false;
            std::function<void(std::size_t)> rec = [&](std::size_t i) {
                if (i == distinct.size()) {
                    Tuple tu(atom.size());
                    for (std::size_t s = 0; s < atom.size(); ++s)
                        tu[s] = pick[slot[s]];
                    out.target.add_tuple(r, tu);
                    found = true;
                    return;
                }
                for (int v : cls[distinct[i]]) {
                    bool ok = true;
                    for (std::size_t p = 0; p < i && ok; ++p)
                        ok = t.adjacent(pick[p], v);
                    if (! ok)
                        continue;
                    pick[i] = v;
                    rec(i + 1);
                }
            };
            rec(0);
            if (! found) {
                out.zero = true;
                out.target = Structure(q.h.signature(), 0);
                out.coloring.clear();
                return out;
            }
        }
    return out;
}

}  // namespace cqc
