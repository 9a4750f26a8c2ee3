#include <cqc/expansion.hpp>

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>

namespace cqc {

namespace {
    std::vector<int> components(int k, const std::vector<std::pair<int, int>>& edges, std::uint32_t mask)
    {
        std::vector<int> parent(k);
        std::iota(parent.begin(), parent.end(), 0);
        std::function<int(int)> find = [&](int v) { return parent[v] == v ? v : parent[v] = find(parent[v]); };
        for (std::size_t e = 0; e < edges.size(); ++e)
            if (mask >> e & 1) {
                int a = find(edges[e].first), b = find(edges[e].second);
                parent[std::max(a, b)] = std::min(a, b);
            }
        std::vector<int> block(k);
        for (int v = 0; v < k; ++v)
            block[v] = find(v);
        return block;
    }

    void add_atom(Structure& h, int symbol, const Tuple& t, bool symmetric)
    {
        h.add_tuple(symbol, t);
        if (symmetric && t.size() == 2)
            h.add_tuple(symbol, {t[1], t[0]});
    }

    Expr dual(const Expr& e)
    {
        switch (e.kind) {
        case Expr::Kind::atom: return e;
        case Expr::Kind::truth: return Expr::falsity();
        case Expr::Kind::falsity: return Expr::truth();
        case Expr::Kind::conj:
        case Expr::Kind::disj: {
            std::vector<Expr> ch;
            for (auto& c : e.children)
                ch.push_back(dual(c));
            return e.kind == Expr::Kind::conj ? Expr::make_or(std::move(ch)) : Expr::make_and(std::move(ch));
        }
        }
        return e;
    }

    Expr conjoin(Expr body, const std::set<NegatedAtom>& atoms, const std::function<int(int)>& symbol_of)
    {
        std::vector<Expr> ch{std::move(body)};
        for (auto& a : atoms)
            ch.push_back(Expr::make_atom(symbol_of(a.symbol), a.args));
        return simplify(Expr::make_and(std::move(ch)));
    }

    // Merges variables into rep[v]; nullopt when an inequality collapses.
    std::optional<FormulaAST> contract_formula(const FormulaAST& f, const std::vector<int>& rep)
    {
        int m = f.variable_count();
        FormulaAST out;
        out.signature = f.signature;
        out.graph_mode = f.graph_mode;
        out.quantifier = f.quantifier;
        std::vector<int> id(m, -1);
        for (int v = 0; v < m; ++v)
            if (rep[v] == v) {
                id[v] = int(out.names.size());
                out.names.push_back(f.names[v]);
            }
        std::vector<int> map(m);
        for (int v = 0; v < m; ++v)
            map[v] = id[rep[v]];
        for (int x : f.free)
            if (std::find(out.free.begin(), out.free.end(), map[x]) == out.free.end())
                out.free.push_back(map[x]);
        for (int y : f.quantified)
            if (std::find(out.free.begin(), out.free.end(), map[y]) == out.free.end()
                && std::find(out.quantified.begin(), out.quantified.end(), map[y]) == out.quantified.end())
                out.quantified.push_back(map[y]);
        out.body = simplify(substitute(f.body, map));
        for (auto [a, b] : f.inequalities) {
            int u = map[a], v = map[b];
            if (u == v)
                return std::nullopt;
            out.inequalities.insert({std::min(u, v), std::max(u, v)});
        }
        for (auto& a : f.negated) {
            NegatedAtom n{a.symbol, {}};
            for (int v : a.args)
                n.args.push_back(map[v]);
            out.negated.insert(n);
        }
        out.conjunctive = out.is_conjunctive();
        return out;
    }

    std::optional<FormulaAST> merge_equalities(const FormulaAST& f)
    {
        int m = f.variable_count();
        std::vector<int> parent(m);
        std::iota(parent.begin(), parent.end(), 0);
        std::function<int(int)> find = [&](int v) { return parent[v] == v ? v : parent[v] = find(parent[v]); };
        for (auto [a, b] : f.equalities)
            parent[find(a)] = find(b);
        // a class is represented by its first free variable, else its smallest member
        std::vector<int> best(m, -1);
        for (int x : f.free)
            if (best[find(x)] < 0)
                best[find(x)] = x;
        for (int v = 0; v < m; ++v)
            if (best[find(v)] < 0)
                best[find(v)] = v;
        std::vector<int> rep(m);
        for (int v = 0; v < m; ++v)
            rep[v] = best[find(v)];
        return contract_formula(f, rep);
    }

    void append(QuantumQuery& acc, const QuantumQuery& qq, const Rational& c)
    {
        for (auto& t : qq.terms)
            acc.terms.push_back({t.coeff * c, t.query});
    }
}

FlatLattice matroid_flats_mobius(const std::vector<int>& x, const std::set<std::pair<int, int>>& ineq)
{
    FlatLattice lat;
    lat.ground = x;
    int k = int(x.size());
    auto pos = [&](int v) {
        auto it = std::find(x.begin(), x.end(), v);
        if (it == x.end())
            throw ModelError("inequality over a variable that is not free");
        return int(it - x.begin());
    };
    for (auto [a, b] : ineq) {
        if (a == b)
            throw ModelError("inequality between a variable and itself");
        lat.edges.emplace_back(pos(a), pos(b));
    }
    if (int(lat.edges.size()) > max_inequalities)
        throw ModelError("inequality expansion is limited to " + std::to_string(max_inequalities) + " inequalities");
    std::map<std::vector<int>, std::size_t> index;
    for (std::uint32_t mask = 0; mask < (std::uint32_t(1) << lat.edges.size()); ++mask) {
        auto block = components(k, lat.edges, mask);
        auto [it, fresh] = index.emplace(block, lat.flats.size());
        if (fresh) {
            Flat fl;
            fl.block = block;
            for (int v = 0; v < k; ++v)
                fl.blocks += block[v] == v;
            fl.rank = k - fl.blocks;
            fl.mobius = 0;
            lat.flats.push_back(fl);
        }
        lat.flats[it->second].mobius += __builtin_popcount(mask) % 2 ? -1 : 1;
    }
    for (auto& fl : lat.flats) {
        int sign = fl.mobius > 0 ? 0 : fl.mobius < 0 ? 1 : -1;
        if (sign != fl.rank % 2)
            throw ModelError("Mobius value with the wrong sign");
    }
    return lat;
}

Query contract_query(const Query& q, const std::vector<int>& rep)
{
    int m = q.h.size();
    if (int(rep.size()) != m)
        throw ModelError("contraction map has the wrong size");
    for (int v = 0; v < m; ++v)
        if (rep[v] < 0 || rep[v] >= m || rep[rep[v]] != rep[v])
            throw ModelError("contraction map is not a retraction");
    std::vector<int> id(m, -1);
    int next = 0;
    for (int v = 0; v < m; ++v)
        if (rep[v] == v)
            id[v] = next++;
    auto map = [&](int v) { return id[rep[v]]; };
    Structure h(q.h.signature(), next);
    for (std::size_t r = 0; r < q.h.signature().size(); ++r)
        for (auto& t : q.h.relation(r)) {
            Tuple m2;
            for (int v : t)
                m2.push_back(map(v));
            h.add_tuple(r, m2);
        }
    std::vector<int> free;
    for (int x : q.free)
        if (std::find(free.begin(), free.end(), map(x)) == free.end())
            free.push_back(map(x));
    Query out(h, free);
    for (auto [a, b] : q.inequalities) {
        if (map(a) == map(b))
            throw ModelError("contraction merges the two sides of an inequality");
        out.add_inequality(map(a), map(b));
    }
    for (auto& a : q.negated) {
        NegatedAtom n{a.symbol, {}};
        for (int v : a.args)
            n.args.push_back(map(v));
        out.negated.insert(n);
    }
    return out;
}

QuantumQuery expand_inequalities(const Query& q)
{
    if (! q.negated.empty())
        throw ModelError("expand negated atoms separately");
    auto lat = matroid_flats_mobius(q.free, q.inequalities);
    Query base = q;
    base.inequalities.clear();
    QuantumQuery qq;
    for (auto& fl : lat.flats) {
        std::vector<int> rep(q.h.size());
        std::iota(rep.begin(), rep.end(), 0);
        for (std::size_t i = 0; i < q.free.size(); ++i)
            rep[q.free[i]] = q.free[fl.block[i]];
        qq.terms.push_back({Rational(fl.mobius), contract_query(base, rep)});
    }
    return normalize(qq);
}

namespace {
    QuantumQuery expand_negations_raw(const Query& q, bool symmetric)
    {
        if (! q.inequalities.empty())
            throw ModelError("expand inequalities first");
        std::vector<NegatedAtom> s(q.negated.begin(), q.negated.end());
        if (s.size() > std::size_t(max_inequalities))
            throw ModelError("too many negated atoms");
        for (auto& a : s)
            for (int v : a.args)
                if (! q.is_free(v))
                    throw ModelError("negated atom over a quantified variable");
        QuantumQuery qq;
        for (std::uint32_t mask = 0; mask < (std::uint32_t(1) << s.size()); ++mask) {
            Structure h = q.h;
            for (std::size_t i = 0; i < s.size(); ++i)
                if (mask >> i & 1)
                    add_atom(h, s[i].symbol, s[i].args, symmetric);
            qq.terms.push_back({__builtin_popcount(mask) % 2 ? -1 : 1, Query(h, q.free)});
        }
        return qq;
    }
}

QuantumQuery expand_negations(const Query& q) { return normalize(expand_negations_raw(q, false)); }

UniversalSplit universal_to_existential(const FormulaAST& f)
{
    if (f.quantifier != Quantifier::forall)
        throw ModelError("expected a universal formula");
    if (! f.inequalities.empty() || ! f.equalities.empty())
        throw ModelError("expand inequalities and equalities first");
    auto same = [](int s) { return s; };
    UniversalSplit out;
    out.constant = f;
    out.constant.quantifier = Quantifier::exists;
    out.constant.quantified.clear();
    out.constant.body = conjoin(Expr::truth(), f.negated, same);
    out.constant.negated.clear();
    out.dual = f;
    out.dual.quantifier = Quantifier::exists;
    out.dual.body = conjoin(dual(f.body), f.negated, same);
    out.dual.negated.clear();
    out.constant.conjunctive = out.constant.is_conjunctive();
    out.dual.conjunctive = out.dual.is_conjunctive();
    return out;
}

QuantumQuery ep_to_quantum(const FormulaAST& f)
{
    if (f.quantifier == Quantifier::forall && ! f.quantified.empty())
        throw ModelError("expected an existential formula");
    if (! f.negated.empty() || ! f.inequalities.empty() || ! f.equalities.empty())
        throw ModelError("lift negated atoms and expand inequalities first");
    auto dnf = to_disjunctive_normal_form(f);
    std::vector<std::vector<Expr>> clauses;
    for (auto& c : dnf.body.children)
        clauses.push_back(c.kind == Expr::Kind::conj ? c.children : std::vector<Expr>{c});
    if (clauses.size() > 12)
        throw ModelError("inclusion-exclusion is limited to 12 disjuncts");
    int k = int(f.free.size()), l = int(f.quantified.size());
    std::vector<int> free_pos(f.variable_count(), -1), q_pos(f.variable_count(), -1);
    for (int i = 0; i < k; ++i)
        free_pos[f.free[i]] = i;
    for (int i = 0; i < l; ++i)
        q_pos[f.quantified[i]] = i;
    std::vector<int> xs(k);
    std::iota(xs.begin(), xs.end(), 0);
    QuantumQuery qq;
    for (std::uint32_t mask = 1; mask < (std::uint32_t(1) << clauses.size()); ++mask) {
        int copies = __builtin_popcount(mask);
        Structure h(f.signature, k + copies * l);
        int copy = 0;
        for (std::size_t c = 0; c < clauses.size(); ++c) {
            if (! (mask >> c & 1))
                continue;
            for (auto& atom : clauses[c]) {
                Tuple t;
                for (int v : atom.args) {
                    if (free_pos[v] >= 0)
                        t.push_back(free_pos[v]);
                    else if (q_pos[v] >= 0)
                        t.push_back(k + copy * l + q_pos[v]);
                    else
                        throw ModelError("unbound variable '" + f.names[v] + "'");
                }
                add_atom(h, atom.symbol, t, f.graph_mode);
            }
            ++copy;
        }
        qq.terms.push_back({copies % 2 ? 1 : -1, Query(h, xs)});
    }
    return normalize(qq);
}

FormulaAST lift_formula(const FormulaAST& f)
{
    FormulaAST out = f;
    std::map<int, int> lifted;
    for (auto& a : f.negated)
        if (! lifted.count(a.symbol)) {
            const auto& sym = f.signature[a.symbol];
            if (out.signature.index_of(complement_name(sym.name)) >= 0)
                throw ModelError("complement symbol name '" + complement_name(sym.name) + "' already in use");
            lifted[a.symbol] = out.signature.add({complement_name(sym.name), sym.arity});
        }
    out.body = conjoin(f.body, f.negated, [&](int s) { return lifted.at(s); });
    out.negated.clear();
    out.conjunctive = out.is_conjunctive();
    return out;
}

namespace {
    Query lower_query_impl(const Query& q, const Signature& base, bool symmetric)
    {
        const auto& sig = q.h.signature();
        Structure h(base, q.h.size());
        Query out;
        std::set<NegatedAtom> negated;
        for (std::size_t r = 0; r < sig.size(); ++r) {
            int b = base.index_of(sig[r].name);
            if (b >= 0) {
                for (auto& t : q.h.relation(r))
                    h.add_tuple(b, t);
                continue;
            }
            int orig = -1;
            for (std::size_t s = 0; s < base.size(); ++s)
                if (complement_name(base[s].name) == sig[r].name)
                    orig = int(s);
            if (orig < 0)
                throw ModelError("symbol '" + sig[r].name + "' is neither a base nor a complement symbol");
            for (auto& t : q.h.relation(r)) {
                for (int v : t)
                    if (! q.is_free(v))
                        throw ModelError("complement atom over a quantified variable");
                if (symmetric && t.size() == 2 && t[0] > t[1])
                    continue;
                negated.insert({orig, t});
            }
        }
        out = Query(h, q.free);
        out.negated = negated;
        return out;
    }
}

Query lower_query(const Query& q, const Signature& base) { return lower_query_impl(q, base, false); }

QuantumQuery compile(const FormulaAST& f0)
{
    QuantumQuery acc;
    if (f0.quantifier == Quantifier::forall)
        for (auto [a, b] : f0.equalities)
            if (! f0.is_free(a) || ! f0.is_free(b))
                throw ModelError("under 'forall', equalities may only join free variables");
    std::optional<FormulaAST> merged = f0.equalities.empty() ? std::optional<FormulaAST>(f0) : merge_equalities(f0);
    bool universal = f0.quantifier == Quantifier::forall && ! f0.quantified.empty();
    acc.transform = universal ? Transform::complement : Transform::identity;
    if (! merged)
        return acc;
    const FormulaAST& f = *merged;
    for (auto& a : f.negated)
        for (int v : a.args)
            if (! f.is_free(v))
                throw ModelError("negated atom over a quantified variable");
    FormulaAST g = universal ? f : lift_formula(f);
    auto lat = matroid_flats_mobius(g.free, g.inequalities);
    for (auto& fl : lat.flats) {
        std::vector<int> rep(g.variable_count());
        std::iota(rep.begin(), rep.end(), 0);
        for (std::size_t i = 0; i < g.free.size(); ++i)
            rep[g.free[i]] = g.free[fl.block[i]];
        FormulaAST flat = g;
        flat.inequalities.clear();
        auto h = contract_formula(flat, rep);
        Rational mu(fl.mobius);
        if (universal) {
            auto split = universal_to_existential(*h);
            append(acc, ep_to_quantum(split.constant), mu);
            append(acc, ep_to_quantum(split.dual), -mu);
        }
        else
            for (auto& term : ep_to_quantum(*h).terms) {
                Query lowered = lower_query_impl(term.query, f.signature, f.graph_mode);
                append(acc, expand_negations_raw(lowered, f.graph_mode), mu * term.coeff);
            }
    }
    return normalize(acc);
}

}  // namespace cqc
