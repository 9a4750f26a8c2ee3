#include "check.hpp"

#include <cqc/decomposition.hpp>
#include <cqc/expansion.hpp>
#include <cqc/gadgets.hpp>
#include <cqc/hom.hpp>
#include <cqc/parser.hpp>
#include <cqc/quantum.hpp>

#include <algorithm>
#include <bit>
#include <set>
#include <sstream>

namespace cqc::cli {

namespace {

int pick(Rng& rng, int lo, int hi)
{
    return lo + int(rng() % std::uint64_t(hi - lo + 1));
}

std::string describe(const Query& q, const Structure& t, const BigInt& expected, const BigInt& got)
{
    std::ostringstream os;
    os << "query:\n" << serialize_query(q) << "target:\n" << serialize_structure(t)
       << "expected " << expected << ", got " << got;
    return os.str();
}

std::optional<std::string> compare(const Query& q, const Structure& t, const BigInt& expected, const BigInt& got)
{
    if (expected == got)
        return std::nullopt;
    return describe(q, t, expected, got);
}

void add_random_inequalities(Rng& rng, Query& q, int count)
{
    if (q.free.size() < 2)
        return;
    for (int i = 0; i < count; ++i) {
        int a = q.free[rng() % q.free.size()], b = q.free[rng() % q.free.size()];
        if (a != b)
            q.add_inequality(a, b);
    }
}

std::optional<std::string> engine_naive(Rng& rng, const CheckLimits& lim)
{
    auto q = random_graph_query(rng, pick(rng, 1, 5), pick(rng, 0, 3), 0.5);
    auto t = random_graph(rng, pick(rng, 1, std::min(lim.max_n, 5)), 0.5);
    return compare(q, t, naive_count(q, t), count_answers(q, t));
}

std::optional<std::string> dss_engine(Rng& rng, const CheckLimits& lim)
{
    auto q = random_graph_query(rng, pick(rng, 1, 7), pick(rng, 0, 4), 0.4);
    auto t = random_graph(rng, pick(rng, 1, lim.max_n), 0.5);
    return compare(q, t, count_answers(q, t), count_answers_dss(q, t));
}

std::optional<std::string> dp_engine(Rng& rng, const CheckLimits& lim)
{
    int n = pick(rng, 1, 6);
    auto q = random_graph_query(rng, n, n, 0.4);
    auto t = random_graph(rng, pick(rng, 1, lim.max_n), 0.5);
    auto td = exact_treewidth(gaifman_graph(q.h));
    return compare(q, t, count_answers(q, t), count_answers_dp(q, t, td.decomposition));
}

std::optional<std::string> relational_dss(Rng& rng, const CheckLimits& lim)
{
    Signature sig({{"R", 3}, {"S", 2}, {"U", 1}});
    auto q = random_query(rng, sig, pick(rng, 1, 5), pick(rng, 0, 3), 0.12);
    auto t = random_structure(rng, sig, pick(rng, 1, std::min(lim.max_n, 4)), 0.3);
    return compare(q, t, naive_count(q, t), count_answers_dss(q, t));
}

std::optional<std::string> surjective_sum(Rng& rng, const CheckLimits& lim)
{
    auto q = random_graph_query(rng, pick(rng, 1, 4), pick(rng, 0, 3), 0.5);
    auto t = random_graph(rng, pick(rng, 1, std::min(lim.max_n, 5)), 0.5);
    BigInt sum = 0;
    for (unsigned mask = 0; mask < (1u << t.size()); ++mask) {
        std::vector<int> z;
        for (int v = 0; v < t.size(); ++v)
            if (mask >> v & 1)
                z.push_back(v);
        if (z.size() <= q.free.size())
            sum += count_surjective_answers(q, t, z);
    }
    return compare(q, t, count_answers(q, t), sum);
}

std::optional<std::string> cf_aut_cp(Rng& rng, const CheckLimits&)
{
    auto q = augmented_core(random_graph_query(rng, pick(rng, 1, 4), pick(rng, 0, 3), 0.6));
    auto ct = random_colored_target(rng, q.h, 2, 0.7);
    auto cp = count_cp_answers(q, ct.target, ct.coloring);
    return compare(q, ct.target, count_partial_automorphisms(q) * cp, count_cf_answers(q, ct.target, ct.coloring));
}

std::optional<std::string> tensor(Rng& rng, const CheckLimits& lim)
{
    auto q = random_graph_query(rng, pick(rng, 1, 4), pick(rng, 0, 3), 0.5);
    int m = std::max(1, std::min(lim.max_n, 4));
    auto a = random_graph(rng, pick(rng, 1, m), 0.6), b = random_graph(rng, pick(rng, 1, m), 0.6);
    auto p = tensor_product(a, b);
    return compare(q, p, count_answers(q, a) * count_answers(q, b), count_answers(q, p));
}

std::optional<std::string> compile_semantics(Rng& rng, const CheckLimits& lim)
{
    bool graph = rng() % 2 == 0;
    Signature sig = graph ? Signature::graph() : Signature({{"R", 2}, {"U", 1}});
    auto f = random_formula(rng, sig, graph, FormulaShape{});
    int n = pick(rng, 1, std::min(lim.max_n, 4));
    auto t = graph ? random_graph(rng, n, 0.5) : random_structure(rng, sig, n, 0.4);
    auto expected = count_formula_answers(f, t);
    auto got = evaluate(compile(f), t);
    if (got == Rational(expected))
        return std::nullopt;
    std::ostringstream os;
    os << "formula with " << f.variable_count() << " variables\ntarget:\n" << serialize_structure(t)
       << "expected " << expected << ", got " << to_string(got);
    return os.str();
}

std::optional<std::string> inequality_expansion(Rng& rng, const CheckLimits& lim)
{
    auto q = random_graph_query(rng, pick(rng, 2, 5), pick(rng, 2, 4), 0.4);
    add_random_inequalities(rng, q, pick(rng, 1, 4));
    auto t = random_graph(rng, pick(rng, 1, std::min(lim.max_n, 5)), 0.5);
    auto got = evaluate(expand_inequalities(q), t);
    auto expected = naive_count(q, t);
    if (got == Rational(expected))
        return std::nullopt;
    return describe(q, t, expected, BigInt(numerator(got)));
}

std::optional<std::string> extraction(Rng& rng, const CheckLimits& lim)
{
    QuantumQuery qq;
    int terms = pick(rng, 2, 3);
    for (int i = 0; i < terms; ++i)
        qq.terms.push_back({Rational(pick(rng, 1, 5), pick(rng, 1, 2)), random_graph_query(rng, pick(rng, 1, 4), pick(rng, 0, 2), 0.6)});
    if (rng() % 3 == 0)
        qq.transform = Transform::complement;
    qq = normalize(qq);
    auto t = random_graph(rng, pick(rng, 1, std::min(lim.max_n, 5)), 0.5);
    auto ex = extract_constituent_counts(qq, t, [&](const Structure& s) { return evaluate(qq, s); });
    Structure storage;
    const Structure& target = evaluation_target(qq, t, storage);
    for (std::size_t i = 0; i < qq.terms.size(); ++i) {
        auto expected = count_answers(qq.terms[i].query, target);
        if (ex.counts[i] != expected)
            return describe(qq.terms[i].query, target, expected, ex.counts[i]);
    }
    return std::nullopt;
}

std::optional<std::string> roundtrip(Rng& rng, const CheckLimits& lim)
{
    auto plain = canonical_relabel(random_graph_query(rng, pick(rng, 1, 5), pick(rng, 0, 3), 0.5));
    auto q = plain;
    add_random_inequalities(rng, q, pick(rng, 0, 2));
    auto t = random_graph(rng, pick(rng, 1, lim.max_n), 0.5);
    if (parse_structure(serialize_structure(t)) != t)
        return "structure round trip changed:\n" + serialize_structure(t);
    if (parse_query(serialize_query(q)).query != q)
        return "query round trip changed:\n" + serialize_query(q);
    QuantumQuery qq = normalize({{{Rational(pick(rng, 1, 4), pick(rng, 1, 3)), plain}}, Transform::identity});
    if (parse_quantum(serialize_quantum(qq)) != qq)
        return "quantum round trip changed:\n" + serialize_quantum(qq);
    return std::nullopt;
}

std::optional<std::string> gadget_uncolored_to_cp(Rng& rng, const CheckLimits& lim)
{
    auto q = random_graph_query(rng, pick(rng, 1, 4), pick(rng, 0, 3), 0.5);
    auto t = random_graph(rng, pick(rng, 1, std::min(lim.max_n, 4)), 0.5);
    auto out = uncolored_to_cp_gadget(q, t);
    BigInt got = out.zero ? BigInt(0) : count_cp_answers(q, out.target, out.coloring);
    return compare(q, t, naive_count(q, t), got);
}

std::optional<std::string> gadget_minor(Rng& rng, const CheckLimits&)
{
    Query q;
    MinorOp op;
    for (int attempt = 0;; ++attempt) {
        q = random_graph_query(rng, pick(rng, 2, 5), pick(rng, 1, 3), 0.5);
        auto edges = q.h.edges();
        int kind = pick(rng, 0, 2);
        if (kind < 2 && ! edges.empty()) {
            auto e = edges[rng() % edges.size()];
            op = {kind == 0 ? MinorOp::Kind::delete_edge : MinorOp::Kind::contract_edge, e.first, e.second};
            break;
        }
        auto nb = gaifman_graph(q.h).neighbours();
        std::vector<int> iso;
        for (int v = 0; v < q.h.size(); ++v)
            if (nb[v].empty())
                iso.push_back(v);
        if (kind == 2 && ! iso.empty()) {
            op = {MinorOp::Kind::delete_vertex, iso[rng() % iso.size()], -1};
            break;
        }
    }
    auto minor = apply_query_minor(q, op);
    auto ct = random_colored_target(rng, minor.query.h, 2, 0.6);
    auto out = minor_instance_gadget(q, op, ct.target, ct.coloring);
    BigInt got = out.zero ? BigInt(0) : count_cp_answers(q, out.target, out.coloring);
    return compare(minor.query, ct.target, count_cp_answers(minor.query, ct.target, ct.coloring), got);
}

std::optional<std::string> gadget_cf_via_uncolored(Rng& rng, const CheckLimits&)
{
    auto q = augmented_core(random_graph_query(rng, pick(rng, 1, 4), pick(rng, 1, 3), 0.5));
    auto ct = random_colored_target(rng, q.h, 2, 0.6);
    auto res = cf_count_via_uncolored(q, ct.target, ct.coloring);
    return compare(q, ct.target, count_cf_answers(q, ct.target, ct.coloring), res.cf);
}

std::optional<std::string> gadget_grate(Rng& rng, const CheckLimits&)
{
    int k = pick(rng, 2, 3);
    auto gamma = family_query(FamilyKind::gamma, k), omega = family_query(FamilyKind::omega, k);
    auto ct = random_colored_target(rng, gamma.h, 2, 0.55);
    auto out = gamma_to_grate_gadget(k, ct.target, ct.coloring);
    BigInt got = out.zero ? BigInt(0) : count_cp_answers(omega, out.target, out.coloring);
    return compare(gamma, ct.target, count_cp_answers(gamma, ct.target, ct.coloring), got);
}

std::optional<std::string> gadget_gaifman(Rng& rng, const CheckLimits&)
{
    Signature sig({{"R", 3}, {"S", 2}});
    auto q = random_query(rng, sig, pick(rng, 2, 4), pick(rng, 1, 3), 0.15);
    auto gq = Query(gaifman_graph(q.h), q.free);
    auto ct = random_colored_target(rng, gq.h, 2, 0.7);
    auto out = gaifman_expand_gadget(q, ct.target, ct.coloring);
    BigInt got = out.zero ? BigInt(0) : count_cp_answers(q, out.target, out.coloring);
    return compare(gq, ct.target, count_cp_answers(gq, ct.target, ct.coloring), got);
}

std::optional<std::string> gadget_domset(Rng& rng, const CheckLimits& lim)
{
    auto g = random_graph(rng, pick(rng, 1, std::min(lim.max_n, 6)), 0.4);
    int k = pick(rng, 1, 3);
    auto d = domset_via_star_oracle(g, k);
    for (int l = 0; l <= k; ++l) {
        auto expected = naive_dominating_sets(g, l);
        if (d[l] != expected) {
            std::ostringstream os;
            os << "graph:\n" << serialize_structure(g) << "size " << l << ": expected " << expected << ", got " << d[l];
            return os.str();
        }
    }
    return std::nullopt;
}

}  // namespace

BigInt naive_count(const Query& q, const Structure& t)
{
    int m = q.h.size(), n = t.size();
    std::set<Assignment> answers;
    if (m > 0 && n == 0)
        return 0;
    std::vector<int> map(m, 0);
    while (true) {
        bool ok = true;
        for (std::size_t r = 0; ok && r < q.h.signature().size(); ++r)
            for (auto& tu : q.h.relation(r)) {
                Tuple img;
                for (int v : tu)
                    img.push_back(map[v]);
                if (! t.has_tuple(r, img)) {
                    ok = false;
                    break;
                }
            }
        for (auto [u, v] : q.inequalities)
            ok = ok && map[u] != map[v];
        for (auto& na : q.negated) {
            Tuple img;
            for (int v : na.args)
                img.push_back(map[v]);
            ok = ok && ! t.has_tuple(na.symbol, img);
        }
        if (ok) {
            Assignment a;
            for (int x : q.free)
                a.push_back(map[x]);
            answers.insert(a);
        }
        int i = m - 1;
        while (i >= 0 && ++map[i] == n)
            map[i--] = 0;
        if (i < 0)
            break;
    }
    return answers.size();
}

BigInt naive_dominating_sets(const Structure& g, int size)
{
    int n = g.size();
    BigInt count = 0;
    for (unsigned mask = 0; mask < (1u << n); ++mask) {
        if (std::popcount(mask) != size)
            continue;
        bool dominating = true;
        for (int v = 0; v < n && dominating; ++v) {
            bool hit = mask >> v & 1;
            for (int u = 0; u < n && ! hit; ++u)
                hit = (mask >> u & 1) && g.adjacent(u, v);
            dominating = hit;
        }
        count += dominating;
    }
    return count;
}

std::vector<Property> check_properties()
{
    return {
        {"engine-naive", engine_naive},
        {"dss-engine", dss_engine},
        {"dp-engine", dp_engine},
        {"relational-dss", relational_dss},
        {"surjective-sum", surjective_sum},
        {"cf-aut-cp", cf_aut_cp},
        {"tensor", tensor},
        {"compile-semantics", compile_semantics},
        {"inequality-expansion", inequality_expansion},
        {"extraction", extraction},
        {"roundtrip", roundtrip},
        {"gadget-uncolored-to-cp", gadget_uncolored_to_cp},
        {"gadget-minor", gadget_minor},
        {"gadget-cf-via-uncolored", gadget_cf_via_uncolored},
        {"gadget-grate", gadget_grate},
        {"gadget-gaifman", gadget_gaifman},
        {"gadget-domset", gadget_domset},
    };
}

const Property* find_property(const std::vector<Property>& all, const std::string& name)
{
    for (auto& p : all)
        if (p.name == "gadget-" + name)
            return &p;
    return nullptr;
}

}  // namespace cqc::cli
