#pragma once

// Naive reference counters: enumerate every map and test it atom by atom.

#include <cqc/model.hpp>

#include <algorithm>
#include <functional>
#include <set>

namespace oracle {

using cqc::Assignment;
using cqc::BigInt;
using cqc::Coloring;
using cqc::Query;
using cqc::Structure;

inline void for_each_map(int m, int n, const std::function<void(const std::vector<int>&)>& f)
{
    std::vector<int> map(m, 0);
    if (m == 0) {
        f(map);
        return;
    }
    if (n == 0)
        return;
    while (true) {
        f(map);
        int i = m - 1;
        while (i >= 0 && ++map[i] == n)
            map[i--] = 0;
        if (i < 0)
            return;
    }
}

inline bool preserves(const Structure& h, const Structure& t, const std::vector<int>& map)
{
    for (std::size_t r = 0; r < h.signature().size(); ++r)
        for (auto& tu : h.relation(r)) {
            cqc::Tuple img;
            for (int v : tu)
                img.push_back(map[v]);
            if (! t.relation(r).count(img))
                return false;
        }
    return true;
}

inline bool side_conditions(const Query& q, const Structure& t, const std::vector<int>& map)
{
    for (auto [u, v] : q.inequalities)
        if (map[u] == map[v])
            return false;
    for (auto& na : q.negated) {
        cqc::Tuple img;
        for (int v : na.args)
            img.push_back(map[v]);
        if (t.relation(na.symbol).count(img))
            return false;
    }
    return true;
}

inline Assignment project(const Query& q, const std::vector<int>& map)
{
    Assignment a;
    for (int x : q.free)
        a.push_back(map[x]);
    return a;
}

// Answers extended by maps satisfying `keep`.
inline std::set<Assignment> answers_where(const Query& q, const Structure& t,
    const std::function<bool(const std::vector<int>&)>& keep)
{
    std::set<Assignment> out;
    for_each_map(q.h.size(), t.size(), [&](const std::vector<int>& map) {
        if (preserves(q.h, t, map) && side_conditions(q, t, map) && keep(map))
            out.insert(project(q, map));
    });
    return out;
}

inline BigInt count_answers(const Query& q, const Structure& t)
{
    return answers_where(q, t, [](const std::vector<int>&) { return true; }).size();
}

inline BigInt count_homs(const Structure& h, const Structure& t)
{
    BigInt n = 0;
    for_each_map(h.size(), t.size(), [&](const std::vector<int>& map) {
        if (preserves(h, t, map))
            ++n;
    });
    return n;
}

inline BigInt count_cp(const Query& q, const Structure& t, const Coloring& c)
{
    return answers_where(q, t, [&](const std::vector<int>& map) {
        for (int u = 0; u < q.h.size(); ++u)
            if (c[map[u]] != u)
                return false;
        return true;
    }).size();
}

inline BigInt count_cf(const Query& q, const Structure& t, const Coloring& c)
{
    return answers_where(q, t, [&](const std::vector<int>& map) {
        std::set<int> colours, xcolours;
        for (int u = 0; u < q.h.size(); ++u)
            colours.insert(c[map[u]]);
        for (int x : q.free) {
            if (! q.is_free(c[map[x]]))
                return false;
            xcolours.insert(c[map[x]]);
        }
        return int(colours.size()) == q.h.size() && xcolours.size() == q.free.size();
    }).size();
}

inline BigInt count_surjective(const Query& q, const Structure& t, const std::vector<int>& z)
{
    std::set<int> target(z.begin(), z.end());
    return answers_where(q, t, [&](const std::vector<int>& map) {
        std::set<int> img;
        for (int x : q.free)
            img.insert(map[x]);
        return img == target;
    }).size();
}

inline BigInt count_partial_automorphisms(const Query& q)
{
    std::set<Assignment> seen;
    for_each_map(q.h.size(), q.h.size(), [&](const std::vector<int>& map) {
        std::set<int> img(map.begin(), map.end());
        if (int(img.size()) != q.h.size() || ! preserves(q.h, q.h, map))
            return;
        for (int x : q.free)
            if (! q.is_free(map[x]))
                return;
        seen.insert(project(q, map));
    });
    return seen.size();
}

inline BigInt count_injective_on(const Query& q, const Structure& t, const std::vector<std::pair<int, int>>& pairs)
{
    return answers_where(q, t, [&](const std::vector<int>& map) {
        for (auto [u, v] : pairs)
            if (map[u] == map[v])
                return false;
        return true;
    }).size();
}

}  // namespace oracle
