#include <cqc/parser.hpp>
#include <cqc/quantum.hpp>

#include <algorithm>
#include <numeric>
#include <sstream>

namespace cqc {

QuantumQuery normalize(const QuantumQuery& qq)
{
    struct Group {
        Rational coeff;
        Query rep;
        std::string key;
    };
    std::vector<Group> groups;
    for (auto& term : qq.terms) {
        if (! term.query.is_plain())
            throw ModelError("normalization needs queries without inequalities or negations");
        if (term.coeff == 0)
            continue;
        Query core = canonical_relabel(augmented_core(term.query));
        std::string key = serialize_query(core);
        auto it = std::find_if(groups.begin(), groups.end(), [&](const Group& g) {
            return g.rep.h.size() == core.h.size() && g.rep.free.size() == core.free.size()
                && g.rep.h.signature() == core.h.signature() && are_equivalent(g.rep, core);
        });
        if (it == groups.end())
            groups.push_back({term.coeff, core, key});
        else {
            it->coeff += term.coeff;
            if (key < it->key) {
                it->rep = core;
                it->key = key;
            }
        }
    }
    std::sort(groups.begin(), groups.end(), [](const Group& a, const Group& b) {
        if (a.rep.h.size() != b.rep.h.size())
            return a.rep.h.size() < b.rep.h.size();
        return a.key < b.key;
    });
    QuantumQuery out;
    out.transform = qq.transform;
    for (auto& g : groups)
        if (g.coeff != 0)
            out.terms.push_back({g.coeff, g.rep});
    return out;
}

const Structure& evaluation_target(const QuantumQuery& qq, const Structure& t, Structure& storage)
{
    if (qq.transform == Transform::identity)
        return t;
    storage = complement_structure(t);
    return storage;
}

Rational evaluate(const QuantumQuery& qq, const Structure& t, const AnswerCounter& counter)
{
    Structure storage;
    const Structure& target = evaluation_target(qq, t, storage);
    Rational total = 0;
    for (auto& term : qq.terms)
        total += term.coeff * Rational(counter(term.query, target));
    return total;
}

std::vector<int> linear_order(const std::vector<Query>& support)
{
    int n = int(support.size());
    std::vector<std::string> keys;
    for (auto& q : support)
        keys.push_back(serialize_query(q));
    // before[i] counts the queries that must precede i
    std::vector<std::vector<int>> later(n);
    std::vector<int> before(n, 0);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (i != j && has_surjective_extension(support[i], support[j])) {
                later[j].push_back(i);
                ++before[i];
            }
    std::vector<int> order;
    std::vector<char> done(n, 0);
    for (int step = 0; step < n; ++step) {
        int pick = -1;
        for (int i = 0; i < n; ++i)
            if (! done[i] && before[i] == 0 && (pick < 0 || keys[i] < keys[pick]))
                pick = i;
        if (pick < 0)
            throw ModelError("support contains equivalent queries");
        done[pick] = 1;
        order.push_back(pick);
        for (int i : later[pick])
            --before[i];
    }
    return order;
}

std::vector<std::vector<BigInt>> surjection_matrix(const std::vector<Query>& support)
{
    int n = int(support.size());
    std::vector<std::vector<BigInt>> l(n, std::vector<BigInt>(n));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            l[i][j] = count_surjective_answers(support[i], support[j].h, support[j].free);
    return l;
}

std::vector<std::vector<BigInt>> evaluation_matrix(const std::vector<Query>& support, const std::vector<Structure>& family)
{
    std::vector<std::vector<BigInt>> a(support.size(), std::vector<BigInt>(family.size()));
    for (std::size_t i = 0; i < support.size(); ++i)
        for (std::size_t f = 0; f < family.size(); ++f)
            a[i][f] = count_answers(support[i], family[f]);
    return a;
}

namespace {
    // Incremental row echelon basis over the rationals.
    struct Basis {
        std::vector<std::vector<Rational>> rows;
        std::vector<std::size_t> pivots;

        bool add(std::vector<Rational> v)
        {
            for (std::size_t r = 0; r < rows.size(); ++r) {
                Rational f = v[pivots[r]];
                if (f == 0)
                    continue;
                for (std::size_t c = 0; c < v.size(); ++c)
                    v[c] -= f * rows[r][c];
            }
            auto it = std::find_if(v.begin(), v.end(), [](const Rational& x) { return x != 0; });
            if (it == v.end())
                return false;
            std::size_t p = std::size_t(it - v.begin());
            Rational lead = v[p];
            for (auto& x : v)
                x /= lead;
            for (auto& row : rows) {
                Rational f = row[p];
                if (f != 0)
                    for (std::size_t c = 0; c < v.size(); ++c)
                        row[c] -= f * v[c];
            }
            rows.push_back(std::move(v));
            pivots.push_back(p);
            return true;
        }
    };

    // Solves m x = b for square invertible m.
    std::vector<Rational> solve(std::vector<std::vector<Rational>> m, std::vector<Rational> b)
    {
        std::size_t n = m.size();
        for (std::size_t c = 0; c < n; ++c) {
            std::size_t p = c;
            while (p < n && m[p][c] == 0)
                ++p;
            if (p == n)
                throw ModelError("singular constituent system: the support is not linearly independent");
            std::swap(m[p], m[c]);
            std::swap(b[p], b[c]);
            for (std::size_t r = 0; r < n; ++r) {
                if (r == c || m[r][c] == 0)
                    continue;
                Rational f = m[r][c] / m[c][c];
                for (std::size_t k = c; k < n; ++k)
                    m[r][k] -= f * m[c][k];
                b[r] -= f * b[c];
            }
        }
        std::vector<Rational> x(n);
        for (std::size_t i = 0; i < n; ++i)
            x[i] = b[i] / m[i][i];
        return x;
    }
}

int matrix_rank(std::vector<std::vector<Rational>> m)
{
    Basis b;
    for (auto& row : m)
        b.add(row);
    return int(b.rows.size());
}

std::vector<Structure> build_test_family(const std::vector<Query>& support)
{
    std::vector<Structure> family;
    if (support.empty())
        return family;
    Basis basis;
    for (auto& q : support) {
        int l = int(q.free.size());
        Coloring identity(q.h.size());
        std::iota(identity.begin(), identity.end(), 0);
        std::vector<int> grid(l, 1), z(q.h.size(), 1);
        while (true) {
            for (int i = 0; i < l; ++i)
                z[q.free[i]] = grid[i];
            Structure f = clone_vertices(q.h, identity, z).structure;
            std::vector<Rational> column;
            for (auto& p : support)
                column.emplace_back(count_answers(p, f));
            if (basis.add(column)) {
                family.push_back(std::move(f));
                if (family.size() == support.size())
                    return family;
            }
            int i = l - 1;
            while (i >= 0 && grid[i] == l + 1)
                grid[i--] = 1;
            if (i < 0)
                break;
            ++grid[i];
        }
    }
    throw ModelError("test family does not reach full rank: the support is not linearly independent");
}

Extraction extract_constituent_counts(const QuantumQuery& qq, const Structure& t, const QuantumOracle& oracle)
{
    Extraction ex;
    std::vector<Query> support;
    for (auto& term : qq.terms) {
        if (term.coeff == 0)
            throw ModelError("zero coefficient in a quantum query");
        support.push_back(term.query);
    }
    if (support.empty())
        return ex;
    auto family = build_test_family(support);
    auto a = evaluation_matrix(support, family);
    std::size_t n = support.size();
    // x^T A = b, solved as A^T x = b
    std::vector<std::vector<Rational>> at(n, std::vector<Rational>(n));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t f = 0; f < n; ++f)
            at[f][i] = Rational(a[i][f]);
    // the oracle complements again, so it sees base x f
    Structure storage;
    const Structure& base = evaluation_target(qq, t, storage);
    std::vector<Rational> b;
    for (auto& f : family) {
        Structure s = tensor_product(base, f);
        if (qq.transform == Transform::complement)
            s = complement_structure(s);
        ex.max_oracle_size = std::max(ex.max_oracle_size, s.size());
        ++ex.oracle_calls;
        b.push_back(oracle(s));
    }
    auto x = solve(at, b);
    for (std::size_t i = 0; i < n; ++i) {
        Rational c = x[i] / qq.terms[i].coeff;
        if (denominator(c) != 1)
            throw ModelError("constituent count is not an integer");
        ex.counts.push_back(numerator(c));
    }
    return ex;
}

namespace {
    std::string trim(const std::string& s)
    {
        auto b = s.find_first_not_of(" \t\r");
        if (b == std::string::npos)
            return "";
        auto e = s.find_last_not_of(" \t\r");
        return s.substr(b, e - b + 1);
    }

    std::string strip_position(const std::string& what)
    {
        auto p = what.find(": ");
        return p == std::string::npos ? what : what.substr(p + 2);
    }
}

QuantumQuery parse_quantum(const std::string& text)
{
    std::vector<std::string> lines;
    std::istringstream in(text);
    for (std::string line; std::getline(in, line);)
        lines.push_back(line);
    QuantumQuery qq;
    std::size_t i = 0;
    auto skip_blank = [&] {
        while (i < lines.size()) {
            std::string s = trim(lines[i]);
            if (! s.empty() && s[0] != '#')
                break;
            ++i;
        }
    };
    skip_blank();
    if (i < lines.size() && trim(lines[i]) == "quantum") {
        ++i;
        skip_blank();
    }
    if (i < lines.size() && trim(lines[i]).rfind("transform", 0) == 0) {
        std::istringstream ls(trim(lines[i]));
        std::string kw, mode, extra;
        ls >> kw >> mode;
        if (kw != "transform" || (mode != "identity" && mode != "complement") || (ls >> extra))
            throw ParseError(int(i) + 1, 1, "expected 'transform identity' or 'transform complement'");
        qq.transform = mode == "complement" ? Transform::complement : Transform::identity;
        ++i;
    }
    while (true) {
        skip_blank();
        if (i >= lines.size())
            break;
        std::istringstream ls(trim(lines[i]));
        std::string kw, value, extra;
        ls >> kw >> value;
        if (kw != "coeff" || value.empty() || (ls >> extra))
            throw ParseError(int(i) + 1, 1, "expected 'coeff <p>/<q>'");
        Rational c;
        try {
            c = parse_rational(value);
        }
        catch (const std::exception&) {
            throw ParseError(int(i) + 1, 7, "invalid coefficient '" + value + "'");
        }
        std::size_t start = ++i;
        std::string block;
        while (i < lines.size() && trim(lines[i]) != "---")
            block += lines[i++] + "\n";
        try {
            qq.terms.push_back({c, parse_query(block).query});
        }
        catch (const ParseError& e) {
            throw ParseError(int(start) + e.line, e.column, strip_position(e.what()));
        }
        if (i < lines.size())
            ++i;
    }
    return qq;
}

std::string serialize_quantum(const QuantumQuery& qq)
{
    std::string out = "quantum\ntransform ";
    out += qq.transform == Transform::complement ? "complement\n" : "identity\n";
    for (std::size_t i = 0; i < qq.terms.size(); ++i) {
        if (i)
            out += "---\n";
        out += "coeff " + to_string(qq.terms[i].coeff) + "\n";
        out += serialize_query(qq.terms[i].query);
    }
    return out;
}

}  // namespace cqc
