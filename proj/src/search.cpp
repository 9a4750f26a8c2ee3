#include "search.hpp"

#include <algorithm>

namespace cqc::detail {

Row make_row(int n) { return Row(kernels::words_for(std::size_t(n)), 0); }

TargetIndex::TargetIndex(const Structure& t) : n_(t.size()), words_(kernels::words_for(std::size_t(t.size())))
{
    full_ = make_row(n_);
    for (int i = 0; i < n_; ++i)
        set_bit(full_, i);
    std::size_t k = t.signature().size();
    rows_.resize(k);
    in_.resize(k);
    diag_.resize(k);
    higher_.resize(k);
    for (std::size_t r = 0; r < k; ++r) {
        int a = t.signature()[r].arity;
        if (a == 1) {
            rows_[r] = make_row(n_);
            for (auto& tu : t.relation(r))
                set_bit(rows_[r], tu[0]);
        }
        else if (a == 2) {
            rows_[r].assign(std::size_t(n_) * words_, 0);
            in_[r].assign(std::size_t(n_) * words_, 0);
            diag_[r] = make_row(n_);
            for (auto& tu : t.relation(r)) {
                int u = tu[0], v = tu[1];
                rows_[r][std::size_t(u) * words_ + (v >> 6)] |= Word(1) << (v & 63);
                in_[r][std::size_t(v) * words_ + (u >> 6)] |= Word(1) << (u & 63);
                if (u == v)
                    set_bit(diag_[r], u);
            }
        }
        else {
            for (auto& tu : t.relation(r)) {
                std::uint64_t key = 0;
                for (int v : tu)
                    key = key * std::uint64_t(n_) + std::uint64_t(v);
                higher_[r].insert(key);
            }
        }
    }
}

bool TargetIndex::contains(int sym, const int* vals, int arity) const
{
    if (arity == 1)
        return test_bit(rows_[sym].data(), vals[0]);
    if (arity == 2)
        return test_bit(out_row(sym, vals[0]), vals[1]);
    std::uint64_t key = 0;
    for (int i = 0; i < arity; ++i)
        key = key * std::uint64_t(n_) + std::uint64_t(vals[i]);
    return higher_[sym].count(key) > 0;
}

Search::Search(const Structure& h, const TargetIndex& t, std::vector<int> order, std::vector<char> preassigned) :
    h_(h), t_(t), order_(std::move(order)), pre_(std::move(preassigned)), pos_(h.size(), -2)
{
    pre_.resize(h.size(), 0);
    for (int v = 0; v < h.size(); ++v)
        if (pre_[v])
            pos_[v] = -1;
    for (std::size_t i = 0; i < order_.size(); ++i)
        pos_[order_[i]] = int(i);
}

void Search::restrict_to(int v, const Word* row) { restrictions_.emplace_back(v, row); }

void Search::add_inequality(int u, int v) { ineqs_.emplace_back(u, v); }

void Search::add_negated(int sym, const Tuple& args) { negs_.push_back({sym, args}); }

void Search::add_hook(const std::vector<int>& vars, Hook hook) { hooks_.emplace_back(vars, std::move(hook)); }

int Search::stage_of(const std::vector<int>& vars) const
{
    int s = -1;
    for (int v : vars) {
        if (pos_[v] == -2)
            return -2;
        s = std::max(s, pos_[v]);
    }
    return s;
}

void Search::compile()
{
    if (compiled_)
        return;
    compiled_ = true;
    steps_.assign(order_.size(), {});
    for (std::size_t p = 0; p < order_.size(); ++p)
        steps_[p].v = order_[p];

    for (std::size_t r = 0; r < h_.signature().size(); ++r) {
        int arity = h_.signature()[r].arity;
        for (auto& tu : h_.relation(r)) {
            int s = stage_of(tu);
            if (s == -2)
                continue;
            if (s == -1) {
                atoms_.push_back({int(r), tu});
                pre_atoms_.push_back(int(atoms_.size()) - 1);
                continue;
            }
            Step& st = steps_[s];
            if (arity == 1)
                st.rows.push_back(t_.unary(int(r)));
            else if (arity == 2) {
                if (tu[0] == tu[1])
                    st.rows.push_back(t_.diag(int(r)));
                else if (tu[0] == st.v)
                    st.dyn.push_back({int(r), tu[1], false});
                else
                    st.dyn.push_back({int(r), tu[0], true});
            }
            else {
                atoms_.push_back({int(r), tu});
                st.atoms.push_back(int(atoms_.size()) - 1);
            }
        }
    }
    for (std::size_t i = 0; i < negs_.size(); ++i) {
        int s = stage_of(negs_[i].args);
        if (s == -2)
            continue;
        (s == -1 ? pre_negs_ : steps_[s].negs).push_back(int(i));
    }
    for (auto [u, v] : ineqs_) {
        int s = stage_of({u, v});
        if (s == -2)
            continue;
        if (s == -1) {
            pre_neq_fail_ = pre_neq_fail_ || u == v;
            continue;
        }
        int other = order_[s] == u ? v : u;
        if (other == order_[s])
            pre_neq_fail_ = true;
        else
            steps_[s].neq.push_back(other);
    }
    for (auto& [v, row] : restrictions_)
        if (pos_[v] >= 0)
            steps_[pos_[v]].rows.push_back(row);
    for (std::size_t i = 0; i < hooks_.size(); ++i) {
        int s = stage_of(hooks_[i].first);
        if (s == -2)
            continue;
        (s == -1 ? pre_hooks_ : steps_[s].hooks).push_back(int(i));
    }
    buf_.assign(order_.size(), Row(t_.words(), 0));
}

bool Search::check_list(const std::vector<int>& atoms, const std::vector<int>& negs, const std::vector<int>& hooks,
    const std::vector<int>& img) const
{
    int vals[64];
    for (int a : atoms) {
        auto& at = atoms_[a];
        for (std::size_t i = 0; i < at.args.size(); ++i)
            vals[i] = img[at.args[i]];
        if (! t_.contains(at.sym, vals, int(at.args.size())))
            return false;
    }
    for (int a : negs) {
        auto& at = negs_[a];
        for (std::size_t i = 0; i < at.args.size(); ++i)
            vals[i] = img[at.args[i]];
        if (t_.contains(at.sym, vals, int(at.args.size())))
            return false;
    }
    for (int k : hooks)
        if (! hooks_[k].second(img))
            return false;
    return true;
}

void Search::fill(std::size_t p, const std::vector<int>& img)
{
    Row& c = buf_[p];
    const Step& st = steps_[p];
    std::size_t w = t_.words();
    std::copy(t_.full(), t_.full() + w, c.begin());
    for (auto* r : st.rows)
        kernels::and_into(c.data(), r, w);
    for (auto& d : st.dyn)
        kernels::and_into(c.data(), d.out ? t_.out_row(d.sym, img[d.other]) : t_.in_row(d.sym, img[d.other]), w);
    for (int o : st.neq)
        c[img[o] >> 6] &= ~(Word(1) << (img[o] & 63));
}

bool Search::leaf_trivial(std::size_t p) const
{
    const Step& st = steps_[p];
    return p + 1 == steps_.size() && st.atoms.empty() && st.negs.empty() && st.hooks.empty() && ! filter_;
}

namespace {
    template <typename F>
    void for_each_bit(const Row& r, F&& f)
    {
        for (std::size_t w = 0; w < r.size(); ++w) {
            Word bits = r[w];
            while (bits) {
                int x = int(w * 64) + __builtin_ctzll(bits);
                bits &= bits - 1;
                if (! f(x))
                    return;
            }
        }
    }
}

BigInt Search::count_from(std::size_t p, std::vector<int>& img)
{
    if (p == steps_.size())
        return 1;
    fill(p, img);
    if (leaf_trivial(p))
        return BigInt(kernels::popcount(buf_[p].data(), t_.words()));
    const Step& st = steps_[p];
    BigInt total = 0;
    std::uint64_t fast = 0;
    const Row& cand = buf_[p];
    for_each_bit(cand, [&](int x) {
        img[st.v] = x;
        if (filter_ && ! filter_(st.v, x, img))
            return true;
        if (! check_list(st.atoms, st.negs, st.hooks, img))
            return true;
        BigInt sub = count_from(p + 1, img);
        if (sub <= 0xffffffffULL && fast < (std::uint64_t(1) << 62))
            fast += sub.convert_to<std::uint64_t>();
        else
            total += sub;
        return true;
    });
    img[st.v] = -1;
    return total + fast;
}

bool Search::enum_from(std::size_t p, std::vector<int>& img, const Leaf& leaf)
{
    if (p == steps_.size())
        return leaf(img);
    fill(p, img);
    const Step& st = steps_[p];
    const Row& cand = buf_[p];
    bool go = true;
    for_each_bit(cand, [&](int x) {
        img[st.v] = x;
        if (filter_ && ! filter_(st.v, x, img))
            return true;
        if (! check_list(st.atoms, st.negs, st.hooks, img))
            return true;
        go = enum_from(p + 1, img, leaf);
        return go;
    });
    img[st.v] = -1;
    return go;
}

BigInt Search::count(std::vector<int>& img)
{
    compile();
    if (pre_neq_fail_ || ! check_list(pre_atoms_, pre_negs_, pre_hooks_, img))
        return 0;
    for (auto& [v, row] : restrictions_)
        if (pos_[v] == -1 && ! test_bit(row, img[v]))
            return 0;
    if (t_.size() == 0)
        return order_.empty() ? 1 : 0;
    return count_from(0, img);
}

bool Search::enumerate(std::vector<int>& img, const Leaf& leaf)
{
    compile();
    if (pre_neq_fail_ || ! check_list(pre_atoms_, pre_negs_, pre_hooks_, img))
        return true;
    for (auto& [v, row] : restrictions_)
        if (pos_[v] == -1 && ! test_bit(row, img[v]))
            return true;
    if (t_.size() == 0) {
        if (order_.empty())
            return leaf(img);
        return true;
    }
    return enum_from(0, img, leaf);
}

bool Search::exists(std::vector<int>& img)
{
    bool found = false;
    enumerate(img, [&](const std::vector<int>&) {
        found = true;
        return false;
    });
    return found;
}

std::vector<int> search_order(const Structure& h, const std::vector<int>& vertices)
{
    auto g = gaifman_graph(h);
    auto adj = g.neighbours();
    std::vector<char> in(h.size(), 0), placed(h.size(), 0);
    for (int v : vertices)
        in[v] = 1;
    std::vector<int> links(h.size(), 0), order;
    while (order.size() < vertices.size()) {
        int best = -1;
        for (int v : vertices) {
            if (placed[v])
                continue;
            if (best < 0 || links[v] > links[best] ||
                (links[v] == links[best] && adj[v].size() > adj[best].size()))
                best = v;
        }
        placed[best] = 1;
        order.push_back(best);
        for (int w : adj[best])
            ++links[w];
    }
    return order;
}

}  // namespace cqc::detail
