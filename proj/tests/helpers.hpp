#pragma once

#include <cqc/model.hpp>
#include <cqc/parser.hpp>

namespace testing_helpers {

inline cqc::Query q_of(const std::string& text)
{
    return cqc::parse_query(text).query;
}

inline cqc::Structure path(int n)
{
    std::vector<std::pair<int, int>> e;
    for (int i = 0; i + 1 < n; ++i)
        e.emplace_back(i, i + 1);
    return cqc::Structure::graph(n, e);
}

inline cqc::Structure cycle(int n)
{
    auto g = path(n);
    g.add_edge(n - 1, 0);
    return g;
}

inline cqc::Structure complete(int n)
{
    std::vector<std::pair<int, int>> e;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            e.emplace_back(i, j);
    return cqc::Structure::graph(n, e);
}

inline cqc::Structure star(int leaves)
{
    std::vector<std::pair<int, int>> e;
    for (int i = 1; i <= leaves; ++i)
        e.emplace_back(0, i);
    return cqc::Structure::graph(leaves + 1, e);
}

// Triangle 0-1-2 with a pendant vertex 3 on 2.
inline cqc::Structure triangle_pendant()
{
    return cqc::Structure::graph(4, {{0, 1}, {1, 2}, {0, 2}, {2, 3}});
}

}  // namespace testing_helpers
