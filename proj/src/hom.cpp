#include <cqc/hom.hpp>

#include "search.hpp"

#include <algorithm>
#include <memory>
#include <numeric>
#include <unordered_map>

namespace cqc {

using detail::Row;
using detail::Search;
using detail::TargetIndex;

namespace {
    struct UnionFind {
        std::vector<int> p;
        explicit UnionFind(int n) : p(n) { std::iota(p.begin(), p.end(), 0); }
        int find(int x) { return p[x] == x ? x : p[x] = find(p[x]); }
        void join(int a, int b) { p[find(a)] = find(b); }
    };

    std::vector<std::vector<int>> group(UnionFind& uf, const std::vector<int>& vs)
    {
        std::vector<std::vector<int>> out;
        std::unordered_map<int, std::size_t> at;
        for (int v : vs) {
            int r = uf.find(v);
            auto it = at.find(r);
            if (it == at.end()) {
                at[r] = out.size();
                out.push_back({v});
            }
            else
                out[it->second].push_back(v);
        }
        return out;
    }

    // Independent parts of a query: vertices linked by atoms, inequalities or
    // negated atoms end up together.
    std::vector<std::vector<int>> pieces(const Query& q)
    {
        UnionFind uf(q.h.size());
        for (auto& rel : q.h.relations())
            for (auto& t : rel)
                for (int v : t)
                    uf.join(t[0], v);
        for (auto [u, v] : q.inequalities)
            uf.join(u, v);
        for (auto& a : q.negated)
            for (int v : a.args)
                uf.join(a.args[0], v);
        std::vector<int> all(q.h.size());
        std::iota(all.begin(), all.end(), 0);
        return group(uf, all);
    }

    struct YComponent {
        std::vector<int> ys;
        std::vector<int> boundary;
    };

    std::vector<YComponent> y_components(const Query& q, const std::vector<int>& vs)
    {
        std::vector<char> free(q.h.size(), 0), in(q.h.size(), 0);
        for (int x : q.free)
            free[x] = 1;
        for (int v : vs)
            in[v] = 1;
        UnionFind uf(q.h.size());
        for (auto& rel : q.h.relations())
            for (auto& t : rel) {
                int first = -1;
                for (int v : t)
                    if (! free[v]) {
                        if (first < 0)
                            first = v;
                        uf.join(first, v);
                    }
            }
        std::vector<int> ys;
        for (int v : vs)
            if (! free[v])
                ys.push_back(v);
        std::vector<YComponent> out;
        for (auto& g : group(uf, ys))
            out.push_back({g, {}});
        std::vector<int> comp_of(q.h.size(), -1);
        for (std::size_t i = 0; i < out.size(); ++i)
            for (int y : out[i].ys)
                comp_of[y] = int(i);
        std::vector<std::set<int>> bd(out.size());
        for (auto& rel : q.h.relations())
            for (auto& t : rel)
                for (int v : t)
                    if (comp_of[v] >= 0)
                        for (int w : t)
                            if (free[w])
                                bd[comp_of[v]].insert(w);
        for (std::size_t i = 0; i < out.size(); ++i)
            out[i].boundary.assign(bd[i].begin(), bd[i].end());
        return out;
    }

    // Answers of the part of q spanned by vs: backtracking over the free
    // vertices, each quantified component checked (and cached) as soon as its
    // free neighbourhood is assigned.
    class AnswerSearch {
    public:
        AnswerSearch(const Query& q, const TargetIndex& t, const std::vector<int>& vs,
            const std::vector<const detail::Word*>& allowed) :
            q_(q), t_(t), img_(q.h.size(), -1)
        {
            std::vector<char> free(q.h.size(), 0);
            for (int x : q.free)
                free[x] = 1;
            for (int v : vs)
                if (free[v])
                    xs_.push_back(v);
            xsearch_ = std::make_unique<Search>(q.h, t, detail::search_order(q.h, xs_), std::vector<char>{});
            for (auto [u, v] : q.inequalities)
                xsearch_->add_inequality(u, v);
            for (auto& a : q.negated)
                xsearch_->add_negated(a.symbol, a.args);
            if (! allowed.empty())
                for (int x : xs_)
                    if (allowed[x])
                        xsearch_->restrict_to(x, allowed[x]);
            auto comps = y_components(q, vs);
            caches_.resize(comps.size());
            for (std::size_t i = 0; i < comps.size(); ++i) {
                std::vector<char> pre(q.h.size(), 0);
                for (int x : comps[i].boundary)
                    pre[x] = 1;
                auto ys = std::make_unique<Search>(q.h, t, detail::search_order(q.h, comps[i].ys), pre);
                if (! allowed.empty())
                    for (int y : comps[i].ys)
                        if (allowed[y])
                            ys->restrict_to(y, allowed[y]);
                Search* raw = ys.get();
                ysearch_.push_back(std::move(ys));
                auto bd = comps[i].boundary;
                auto* cache = &caches_[i];
                int n = t.size();
                xsearch_->add_hook(bd, [this, raw, bd, cache, n](const std::vector<int>& img) {
                    std::uint64_t key = 0;
                    for (int b : bd)
                        key = key * std::uint64_t(n) + std::uint64_t(img[b]);
                    auto it = cache->find(key);
                    if (it != cache->end())
                        return it->second;
                    bool ok = raw->exists(img_);
                    cache->emplace(key, ok);
                    return ok;
                });
            }
        }

        BigInt count() { return xsearch_->count(img_); }

        bool enumerate(const Search::Leaf& leaf) { return xsearch_->enumerate(img_, leaf); }

        void set_filter(Search::Filter f) { xsearch_->set_filter(std::move(f)); }

    private:
        const Query& q_;
        const TargetIndex& t_;
        std::vector<int> xs_;
        std::vector<int> img_;
        std::unique_ptr<Search> xsearch_;
        std::vector<std::unique_ptr<Search>> ysearch_;
        std::vector<std::unordered_map<std::uint64_t, bool>> caches_;
    };

    BigInt count_restricted(const Query& q, const Structure& t, const std::vector<const detail::Word*>& allowed)
    {
        q.validate();
        TargetIndex ti(t);
        BigInt total = 1;
        for (auto& piece : pieces(q)) {
            AnswerSearch s(q, ti, piece, allowed);
            total *= s.count();
            if (total == 0)
                break;
        }
        return total;
    }

    std::vector<Row> class_rows(const Structure& t, const Coloring& c, int classes)
    {
        std::vector<Row> rows(classes, detail::make_row(t.size()));
        for (int v = 0; v < t.size(); ++v)
            detail::set_bit(rows[c[v]], v);
        return rows;
    }

    void require_coloring(const Query& q, const Structure& t, const Coloring& c)
    {
        if (int(c.size()) != t.size() || ! is_valid_coloring(t, q.h, c))
            throw ModelError("invalid coloring: not a homomorphism from the target to the query");
    }

    std::vector<int> all_vertices(int n)
    {
        std::vector<int> v(n);
        std::iota(v.begin(), v.end(), 0);
        return v;
    }

    bool injective_so_far(int v, int x, const std::vector<int>& img)
    {
        for (std::size_t u = 0; u < img.size(); ++u)
            if (int(u) != v && img[u] == x)
                return false;
        return true;
    }
}

BigInt count_extensions(const Query& q, const Structure& t, const PinSet& pins)
{
    if (int(pins.size()) != q.h.size())
        throw ModelError("pin set does not match the query");
    TargetIndex ti(t);
    std::vector<char> pre(q.h.size(), 0);
    std::vector<int> img(q.h.size(), -1), rest;
    for (int v = 0; v < q.h.size(); ++v) {
        if (pins[v] >= 0) {
            if (pins[v] >= t.size())
                throw ModelError("pin outside the target");
            pre[v] = 1;
            img[v] = pins[v];
        }
        else
            rest.push_back(v);
    }
    Search s(q.h, ti, detail::search_order(q.h, rest), pre);
    return s.count(img);
}

BigInt count_answers(const Query& q, const Structure& t) { return count_restricted(q, t, {}); }

BigInt count_cp_answers(const Query& q, const Structure& t, const Coloring& c)
{
    require_coloring(q, t, c);
    auto rows = class_rows(t, c, q.h.size());
    std::vector<const detail::Word*> allowed;
    for (auto& r : rows)
        allowed.push_back(r.data());
    return count_restricted(q, t, allowed);
}

BigInt count_cf_answers(const Query& q, const Structure& t, const Coloring& c)
{
    require_coloring(q, t, c);
    q.validate();
    TargetIndex ti(t);
    int m = q.h.size();
    auto rows = class_rows(t, c, m);
    Row xrow = detail::make_row(t.size()), yrow = detail::make_row(t.size());
    for (int v = 0; v < t.size(); ++v)
        detail::set_bit(q.is_free(c[v]) ? xrow : yrow, v);

    auto colour_injective = [&](int v, int x, const std::vector<int>& img) {
        for (int u = 0; u < m; ++u)
            if (u != v && img[u] >= 0 && c[img[u]] == c[x])
                return false;
        return true;
    };

    std::vector<int> img(m, -1);
    std::vector<char> pre(m, 0);
    for (int x : q.free)
        pre[x] = 1;
    auto ys = q.quantified();
    Search ysearch(q.h, ti, detail::search_order(q.h, ys), pre);
    for (int y : ys)
        ysearch.restrict_to(y, yrow.data());
    ysearch.set_filter(colour_injective);

    Search xsearch(q.h, ti, detail::search_order(q.h, q.free), {});
    for (int x : q.free)
        xsearch.restrict_to(x, xrow.data());
    for (auto [u, v] : q.inequalities)
        xsearch.add_inequality(u, v);
    for (auto& a : q.negated)
        xsearch.add_negated(a.symbol, a.args);
    xsearch.set_filter(colour_injective);
    xsearch.add_hook(q.free, [&](const std::vector<int>&) { return ysearch.exists(img); });
    return xsearch.count(img);
}

void for_each_answer(const Query& q, const Structure& t, const std::function<bool(const Assignment&)>& f)
{
    q.validate();
    TargetIndex ti(t);
    AnswerSearch s(q, ti, all_vertices(q.h.size()), {});
    Assignment a(q.free.size());
    s.enumerate([&](const std::vector<int>& img) {
        for (std::size_t i = 0; i < q.free.size(); ++i)
            a[i] = img[q.free[i]];
        return f(a);
    });
}

BigInt count_surjective_answers(const Query& q, const Structure& t, const std::vector<int>& z)
{
    std::set<int> zs(z.begin(), z.end());
    if (zs.size() > q.free.size())
        return 0;
    for (int v : zs)
        if (v < 0 || v >= t.size())
            throw ModelError("surjection target outside the structure");
    q.validate();
    TargetIndex ti(t);
    Row zrow = detail::make_row(t.size());
    for (int v : zs)
        detail::set_bit(zrow, v);
    std::vector<const detail::Word*> allowed(q.h.size(), nullptr);
    for (int x : q.free)
        allowed[x] = zrow.data();
    AnswerSearch s(q, ti, all_vertices(q.h.size()), allowed);
    BigInt total = 0;
    std::vector<char> seen(t.size());
    s.enumerate([&](const std::vector<int>& img) {
        std::fill(seen.begin(), seen.end(), 0);
        std::size_t hit = 0;
        for (int x : q.free)
            if (! seen[img[x]]) {
                seen[img[x]] = 1;
                ++hit;
            }
        if (hit == zs.size())
            ++total;
        return true;
    });
    return total;
}

BigInt count_partial_automorphisms(const Query& q)
{
    int m = q.h.size();
    TargetIndex ti(q.h);
    Row xrow = detail::make_row(m);
    for (int x : q.free)
        detail::set_bit(xrow, x);
    std::vector<int> img(m, -1);
    std::vector<char> pre(m, 0);
    for (int x : q.free)
        pre[x] = 1;
    auto ys = q.quantified();
    Search ysearch(q.h, ti, detail::search_order(q.h, ys), pre);
    ysearch.set_filter(injective_so_far);
    Search xsearch(q.h, ti, detail::search_order(q.h, q.free), {});
    for (int x : q.free)
        xsearch.restrict_to(x, xrow.data());
    xsearch.set_filter(injective_so_far);
    xsearch.add_hook(q.free, [&](const std::vector<int>&) { return ysearch.exists(img); });
    return xsearch.count(img);
}

bool has_homomorphism(const Structure& from, const Structure& to)
{
    if (! (from.signature() == to.signature()))
        throw ModelError("homomorphism between structures with different signatures");
    TargetIndex ti(to);
    Search s(from, ti, detail::search_order(from, all_vertices(from.size())), {});
    std::vector<int> img(from.size(), -1);
    return s.exists(img);
}

bool has_surjective_extension(const Query& q1, const Query& q2)
{
    if (! (q1.h.signature() == q2.h.signature()))
        throw ModelError("queries over different signatures");
    if (q1.free.size() < q2.free.size())
        return false;
    if (q2.h.size() == 0)
        return q1.h.size() == 0;
    TargetIndex ti(q2.h);
    Row xrow = detail::make_row(q2.h.size());
    for (int x : q2.free)
        detail::set_bit(xrow, x);
    std::vector<const detail::Word*> allowed(q1.h.size(), nullptr);
    for (int x : q1.free)
        allowed[x] = xrow.data();
    Query plain(q1.h, q1.free);
    AnswerSearch s(plain, ti, all_vertices(q1.h.size()), allowed);
    bool found = false;
    std::vector<char> seen(q2.h.size());
    s.enumerate([&](const std::vector<int>& img) {
        std::fill(seen.begin(), seen.end(), 0);
        std::size_t hit = 0;
        for (int x : q1.free)
            if (! seen[img[x]]) {
                seen[img[x]] = 1;
                ++hit;
            }
        found = hit == q2.free.size();
        return ! found;
    });
    return found;
}

Query augmented_core(const Query& q)
{
    if (! q.is_plain())
        throw ModelError("augmented core needs a query without inequalities or negated atoms");
    q.validate();
    std::string aug = "aug";
    while (q.h.signature().index_of(aug) >= 0)
        aug += "_";
    Structure full = q.h;
    int sym = full.add_symbol({aug, 2});
    for (int x : q.free)
        for (int y : q.free)
            if (x != y)
                full.add_tuple(sym, {x, y});
    // a single free vertex gets a loop so that it must stay fixed
    if (q.free.size() == 1)
        full.add_tuple(sym, {q.free[0], q.free[0]});

    std::vector<int> keep = all_vertices(q.h.size());
    bool changed = true;
    while (changed) {
        changed = false;
        Structure cur = full.induced(keep);
        for (std::size_t i = 0; i < keep.size(); ++i) {
            if (q.is_free(keep[i]))
                continue;
            std::vector<int> sub;
            for (std::size_t j = 0; j < keep.size(); ++j)
                if (j != i)
                    sub.push_back(int(j));
            if (has_homomorphism(cur, cur.induced(sub))) {
                keep.erase(keep.begin() + long(i));
                changed = true;
                break;
            }
        }
    }
    std::vector<int> pos(q.h.size(), -1);
    for (std::size_t i = 0; i < keep.size(); ++i)
        pos[keep[i]] = int(i);
    Query out(q.h.induced(keep), {});
    for (int x : q.free)
        out.free.push_back(pos[x]);
    return out;
}

bool are_equivalent(const Query& q1, const Query& q2)
{
    if (! (q1.h.signature() == q2.h.signature()))
        throw ModelError("queries over different signatures");
    return has_surjective_extension(q1, q2) && has_surjective_extension(q2, q1);
}

bool is_minimal(const Query& q) { return augmented_core(q).h.size() == q.h.size(); }

bool endomorphism_bijective_on_X_is_automorphism_check(const Query& q)
{
    int m = q.h.size();
    TargetIndex ti(q.h);
    Row xrow = detail::make_row(m);
    for (int x : q.free)
        detail::set_bit(xrow, x);
    std::vector<int> order = q.free;
    for (int y : q.quantified())
        order.push_back(y);
    Search s(q.h, ti, order, {});
    for (int x : q.free)
        s.restrict_to(x, xrow.data());
    s.set_filter([&](int v, int x, const std::vector<int>& img) {
        return ! q.is_free(v) || injective_so_far(v, x, img);
    });
    std::vector<int> img(m, -1);
    bool all_auto = true;
    std::vector<char> seen(m);
    s.enumerate(img, [&](const std::vector<int>& h) {
        std::fill(seen.begin(), seen.end(), 0);
        for (int v : h)
            seen[v] = 1;
        all_auto = std::all_of(seen.begin(), seen.end(), [](char c) { return c != 0; });
        return all_auto;
    });
    return all_auto;
}

}  // namespace cqc
