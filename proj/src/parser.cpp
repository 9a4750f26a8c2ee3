#include <cqc/parser.hpp>

#include "search.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <map>
#include <numeric>
#include <sstream>

namespace cqc {

ParseError::ParseError(int l, int c, const std::string& msg) :
    std::runtime_error("line " + std::to_string(l) + ", column " + std::to_string(c) + ": " + msg), line(l), column(c)
{
}

Expr Expr::make_atom(int symbol, std::vector<int> args)
{
    Expr e;
    e.kind = Kind::atom;
    e.symbol = symbol;
    e.args = std::move(args);
    return e;
}

Expr Expr::make_and(std::vector<Expr> children)
{
    Expr e;
    e.kind = Kind::conj;
    e.children = std::move(children);
    return e;
}

Expr Expr::make_or(std::vector<Expr> children)
{
    Expr e;
    e.kind = Kind::disj;
    e.children = std::move(children);
    return e;
}

Expr Expr::falsity()
{
    Expr e;
    e.kind = Kind::falsity;
    return e;
}

bool FormulaAST::is_free(int v) const { return std::find(free.begin(), free.end(), v) != free.end(); }

bool FormulaAST::is_conjunctive() const
{
    if (quantifier != Quantifier::exists)
        return false;
    if (body.kind == Expr::Kind::atom || body.kind == Expr::Kind::truth)
        return true;
    if (body.kind != Expr::Kind::conj)
        return false;
    return std::all_of(body.children.begin(), body.children.end(),
        [](const Expr& c) { return c.kind == Expr::Kind::atom; });
}

namespace {
    struct Token {
        enum class Kind { ident, number, punct, end } kind = Kind::end;
        std::string text;
        int column = 0;
    };

    struct Statement {
        int line;
        std::vector<Token> tokens;
    };

    std::vector<Token> tokenize(const std::string& s, int line, int col0)
    {
        std::vector<Token> out;
        std::size_t i = 0;
        while (i < s.size()) {
            char ch = s[i];
            if (std::isspace(static_cast<unsigned char>(ch))) {
                ++i;
                continue;
            }
            Token t;
            t.column = col0 + int(i) + 1;
            if (std::isalpha(static_cast<unsigned char>(ch))) {
                std::size_t j = i;
                while (j < s.size() && (std::isalnum(static_cast<unsigned char>(s[j])) || s[j] == '_'))
                    ++j;
                t.kind = Token::Kind::ident;
                t.text = s.substr(i, j - i);
                i = j;
            }
            else if (std::isdigit(static_cast<unsigned char>(ch)) ||
                (ch == '-' && i + 1 < s.size() && std::isdigit(static_cast<unsigned char>(s[i + 1])))) {
                std::size_t j = i + 1;
                while (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j])))
                    ++j;
                t.kind = Token::Kind::number;
                t.text = s.substr(i, j - i);
                i = j;
            }
            else if (std::string("()&|!,/").find(ch) != std::string::npos) {
                t.kind = Token::Kind::punct;
                t.text = std::string(1, ch);
                ++i;
            }
            else
                throw ParseError(line, t.column, std::string("unexpected character '") + ch + "'");
            out.push_back(t);
        }
        return out;
    }

    // One statement per line or per ';'; '#' starts a comment.
    std::vector<Statement> statements(const std::string& text)
    {
        std::vector<Statement> out;
        std::istringstream in(text);
        std::string raw;
        int line = 0;
        while (std::getline(in, raw)) {
            ++line;
            auto hash = raw.find('#');
            if (hash != std::string::npos)
                raw = raw.substr(0, hash);
            std::size_t start = 0;
            while (start <= raw.size()) {
                auto semi = raw.find(';', start);
                std::string piece = raw.substr(start, semi == std::string::npos ? std::string::npos : semi - start);
                auto toks = tokenize(piece, line, int(start));
                if (! toks.empty())
                    out.push_back({line, std::move(toks)});
                if (semi == std::string::npos)
                    break;
                start = semi + 1;
            }
        }
        return out;
    }

    int to_int(const Token& t, int line, const std::string& what)
    {
        if (t.kind != Token::Kind::number)
            throw ParseError(line, t.column, "expected " + what);
        try {
            return std::stoi(t.text);
        }
        catch (const std::exception&) {
            throw ParseError(line, t.column, "number out of range");
        }
    }

    Signature parse_signature(const Statement& st)
    {
        Signature sig;
        auto& tk = st.tokens;
        std::size_t i = 1;
        while (i < tk.size()) {
            if (tk[i].kind != Token::Kind::ident)
                throw ParseError(st.line, tk[i].column, "expected a symbol name");
            if (i + 2 >= tk.size() || tk[i + 1].text != "/")
                throw ParseError(st.line, tk[i].column, "expected <name>/<arity>");
            int a = to_int(tk[i + 2], st.line, "an arity");
            if (a < 1)
                throw ParseError(st.line, tk[i + 2].column, "arity must be positive");
            if (sig.index_of(tk[i].text) >= 0)
                throw ParseError(st.line, tk[i].column, "duplicate symbol '" + tk[i].text + "'");
            sig.add({tk[i].text, a});
            i += 3;
        }
        return sig;
    }

    std::string signature_line(const Signature& sig)
    {
        std::string s = "signature";
        for (auto& sym : sig.symbols())
            s += " " + sym.name + "/" + std::to_string(sym.arity);
        return s;
    }
}

Structure parse_structure(const std::string& text)
{
    auto sts = statements(text);
    if (sts.empty())
        throw ParseError(1, 1, "empty structure file");
    const auto& head = sts[0].tokens[0];
    bool graph = head.text == "graph";
    if (! graph && head.text != "structure")
        throw ParseError(sts[0].line, head.column, "expected 'structure' or 'graph'");
    if (sts[0].tokens.size() != 1)
        throw ParseError(sts[0].line, sts[0].tokens[1].column, "unexpected token after header");
    Signature sig = Signature::graph();
    bool have_sig = false;
    std::optional<Structure> s;
    for (std::size_t k = 1; k < sts.size(); ++k) {
        auto& st = sts[k];
        auto& kw = st.tokens[0];
        if (kw.text == "signature") {
            if (have_sig || s)
                throw ParseError(st.line, kw.column, "signature must come once, before 'domain'");
            sig = parse_signature(st);
            if (graph && ! (sig == Signature::graph()))
                throw ParseError(st.line, kw.column, "graph files use the signature E/2");
            have_sig = true;
        }
        else if (kw.text == "domain") {
            if (s)
                throw ParseError(st.line, kw.column, "domain given twice");
            if (st.tokens.size() != 2)
                throw ParseError(st.line, kw.column, "expected 'domain <n>'");
            int n = to_int(st.tokens[1], st.line, "a domain size");
            if (n < 0)
                throw ParseError(st.line, st.tokens[1].column, "negative domain size");
            s = Structure(sig, n);
        }
        else {
            if (! s)
                throw ParseError(st.line, kw.column, "tuple before 'domain'");
            int r = sig.index_of(kw.text);
            if (kw.kind != Token::Kind::ident || r < 0)
                throw ParseError(st.line, kw.column, "unknown symbol '" + kw.text + "'");
            if (int(st.tokens.size()) - 1 != sig[r].arity)
                throw ParseError(st.line, kw.column,
                    "arity mismatch: '" + kw.text + "' takes " + std::to_string(sig[r].arity) + " entries");
            Tuple t;
            for (std::size_t i = 1; i < st.tokens.size(); ++i) {
                int v = to_int(st.tokens[i], st.line, "a vertex");
                if (v < 0 || v >= s->size())
                    throw ParseError(st.line, st.tokens[i].column, "vertex " + st.tokens[i].text + " out of range");
                t.push_back(v);
            }
            if (graph) {
                if (t[0] == t[1])
                    throw ParseError(st.line, kw.column, "loop in graph mode");
                s->add_edge(t[0], t[1]);
            }
            else
                s->add_tuple(r, t);
        }
    }
    if (! s)
        throw ParseError(sts.back().line, 1, "missing 'domain'");
    return *s;
}

std::string serialize_structure(const Structure& s)
{
    std::ostringstream out;
    if (s.is_graph()) {
        out << "graph\ndomain " << s.size() << "\n";
        for (auto [u, v] : s.edges())
            out << "E " << u << " " << v << "\n";
        return out.str();
    }
    out << "structure\n" << signature_line(s.signature()) << "\ndomain " << s.size() << "\n";
    for (std::size_t r = 0; r < s.signature().size(); ++r)
        for (auto& t : s.relation(r)) {
            out << s.signature()[r].name;
            for (int v : t)
                out << " " << v;
            out << "\n";
        }
    return out.str();
}

namespace {
    // Expression tree as parsed, before negations are pulled out.
    struct PExpr {
        enum class Kind { atom, neg, conj, disj, truth, falsity } kind = Kind::truth;
        int symbol = -1;
        std::vector<int> args;
        std::vector<PExpr> children;
        int column = 0;
    };

    PExpr make_p(PExpr::Kind k)
    {
        PExpr e;
        e.kind = k;
        return e;
    }

    class ExprParser {
    public:
        ExprParser(const Statement& st, std::size_t from, const Signature& sig,
            const std::map<std::string, int>& vars) :
            st_(st), i_(from), sig_(sig), vars_(vars)
        {
        }

        PExpr parse()
        {
            auto e = parse_or();
            if (i_ < st_.tokens.size())
                fail(st_.tokens[i_], "unexpected '" + st_.tokens[i_].text + "'");
            return e;
        }

    private:
        [[noreturn]] void fail(const Token& t, const std::string& msg) const
        {
            throw ParseError(st_.line, t.column, msg);
        }

        const Token* peek() const { return i_ < st_.tokens.size() ? &st_.tokens[i_] : nullptr; }

        const Token& next()
        {
            if (i_ >= st_.tokens.size()) {
                Token end;
                end.column = st_.tokens.back().column + int(st_.tokens.back().text.size());
                fail(end, "unexpected end of expression");
            }
            return st_.tokens[i_++];
        }

        bool accept(const std::string& p)
        {
            auto* t = peek();
            if (t && t->kind == Token::Kind::punct && t->text == p) {
                ++i_;
                return true;
            }
            return false;
        }

        PExpr parse_or()
        {
            PExpr first = parse_and();
            if (! (peek() && peek()->text == "|"))
                return first;
            PExpr e = make_p(PExpr::Kind::disj);
            e.children.push_back(std::move(first));
            while (accept("|"))
                e.children.push_back(parse_and());
            return e;
        }

        PExpr parse_and()
        {
            PExpr first = parse_factor();
            if (! (peek() && peek()->text == "&"))
                return first;
            PExpr e = make_p(PExpr::Kind::conj);
            e.children.push_back(std::move(first));
            while (accept("&"))
                e.children.push_back(parse_factor());
            return e;
        }

        PExpr parse_factor()
        {
            const Token& t = next();
            if (t.kind == Token::Kind::punct && t.text == "!") {
                PExpr e = make_p(PExpr::Kind::neg);
                e.column = t.column;
                e.children.push_back(parse_factor());
                return e;
            }
            if (t.kind == Token::Kind::punct && t.text == "(") {
                PExpr e = parse_or();
                if (! accept(")"))
                    fail(peek() ? *peek() : t, "expected ')'");
                return e;
            }
            if (t.kind != Token::Kind::ident)
                fail(t, "expected an atom");
            if (t.text == "true" && ! (peek() && peek()->text == "("))
                return make_p(PExpr::Kind::truth);
            if (t.text == "false" && ! (peek() && peek()->text == "("))
                return make_p(PExpr::Kind::falsity);
            int r = sig_.index_of(t.text);
            if (r < 0)
                fail(t, "unknown symbol '" + t.text + "'");
            PExpr e = make_p(PExpr::Kind::atom);
            e.symbol = r;
            e.column = t.column;
            if (! accept("("))
                fail(t, "expected '(' after '" + t.text + "'");
            while (true) {
                const Token& a = next();
                if (a.kind != Token::Kind::ident)
                    fail(a, "expected a variable");
                auto it = vars_.find(a.text);
                if (it == vars_.end())
                    fail(a, "unbound variable '" + a.text + "'");
                e.args.push_back(it->second);
                if (accept(")"))
                    break;
                if (! accept(","))
                    fail(peek() ? *peek() : a, "expected ',' or ')'");
            }
            if (int(e.args.size()) != sig_[r].arity)
                fail(t, "arity mismatch: '" + t.text + "' takes " + std::to_string(sig_[r].arity) + " arguments");
            return e;
        }

        const Statement& st_;
        std::size_t i_;
        const Signature& sig_;
        const std::map<std::string, int>& vars_;
    };

    Expr lower(const PExpr& p, int line)
    {
        switch (p.kind) {
        case PExpr::Kind::atom:
            return Expr::make_atom(p.symbol, p.args);
        case PExpr::Kind::truth:
            return Expr::truth();
        case PExpr::Kind::falsity:
            return Expr::falsity();
        case PExpr::Kind::neg:
            throw ParseError(line, p.column, "negation is only allowed on top-level conjuncts over free variables");
        case PExpr::Kind::conj:
        case PExpr::Kind::disj: {
            std::vector<Expr> ch;
            for (auto& c : p.children)
                ch.push_back(lower(c, line));
            return p.kind == PExpr::Kind::conj ? Expr::make_and(std::move(ch)) : Expr::make_or(std::move(ch));
        }
        }
        return Expr::truth();
    }
}

FormulaAST parse_formula(const std::string& text)
{
    auto sts = statements(text);
    if (sts.empty())
        throw ParseError(1, 1, "empty formula file");
    FormulaAST f;
    const auto& head = sts[0].tokens[0];
    if (head.text == "query")
        f.conjunctive = true;
    else if (head.text != "formula")
        throw ParseError(sts[0].line, head.column, "expected 'formula' or 'query'");
    if (sts[0].tokens.size() != 1)
        throw ParseError(sts[0].line, sts[0].tokens[1].column, "unexpected token after header");

    f.signature = Signature::graph();
    f.graph_mode = true;
    std::map<std::string, int> vars;
    bool have_sig = false, have_free = false, have_quant = false, have_body = false;
    const Statement* body_st = nullptr;
    std::vector<const Statement*> ineq_sts, eq_sts;

    auto declare = [&](const Statement& st, bool free) {
        for (std::size_t i = 1; i < st.tokens.size(); ++i) {
            auto& t = st.tokens[i];
            if (t.kind != Token::Kind::ident)
                throw ParseError(st.line, t.column, "expected a variable name");
            if (vars.count(t.text))
                throw ParseError(st.line, t.column, "variable '" + t.text + "' declared twice");
            int id = int(f.names.size());
            vars[t.text] = id;
            f.names.push_back(t.text);
            (free ? f.free : f.quantified).push_back(id);
        }
    };

    for (std::size_t k = 1; k < sts.size(); ++k) {
        auto& st = sts[k];
        auto& kw = st.tokens[0];
        if (kw.text == "signature") {
            if (have_sig || have_free || have_quant || have_body)
                throw ParseError(st.line, kw.column, "signature must come once, right after the header");
            f.signature = parse_signature(st);
            f.graph_mode = false;
            have_sig = true;
        }
        else if (kw.text == "free") {
            if (have_free || have_quant)
                throw ParseError(st.line, kw.column, "'free' must come once, before the quantifier");
            declare(st, true);
            have_free = true;
        }
        else if (kw.text == "exists" || kw.text == "forall") {
            if (have_quant)
                throw ParseError(st.line, kw.column, "only a single quantifier block is supported");
            f.quantifier = kw.text == "exists" ? Quantifier::exists : Quantifier::forall;
            if (f.conjunctive && f.quantifier == Quantifier::forall)
                throw ParseError(st.line, kw.column, "a query block must be existential");
            declare(st, false);
            have_quant = true;
        }
        else if (kw.text == "body") {
            if (have_body)
                throw ParseError(st.line, kw.column, "body given twice");
            if (st.tokens.size() < 2)
                throw ParseError(st.line, kw.column, "empty body");
            body_st = &st;
            have_body = true;
        }
        else if (kw.text == "ineq")
            ineq_sts.push_back(&st);
        else if (kw.text == "eq")
            eq_sts.push_back(&st);
        else
            throw ParseError(st.line, kw.column, "unknown statement '" + kw.text + "'");
    }

    auto pair_of = [&](const Statement& st) {
        if (st.tokens.size() != 3)
            throw ParseError(st.line, st.tokens[0].column, "expected two variables");
        std::pair<int, int> p;
        for (int i = 0; i < 2; ++i) {
            auto& t = st.tokens[i + 1];
            auto it = vars.find(t.text);
            if (t.kind != Token::Kind::ident || it == vars.end())
                throw ParseError(st.line, t.column, "unbound variable '" + t.text + "'");
            (i == 0 ? p.first : p.second) = it->second;
        }
        if (p.first > p.second)
            std::swap(p.first, p.second);
        return p;
    };

    for (auto* st : ineq_sts) {
        auto p = pair_of(*st);
        if (! f.is_free(p.first) || ! f.is_free(p.second))
            throw ParseError(st->line, st->tokens[0].column, "inequality touching a quantified variable");
        if (p.first == p.second)
            throw ParseError(st->line, st->tokens[0].column, "inequality between a variable and itself");
        f.inequalities.insert(p);
    }
    for (auto* st : eq_sts) {
        if (f.conjunctive)
            throw ParseError(st->line, st->tokens[0].column, "'eq' is not allowed in a query block");
        auto p = pair_of(*st);
        if (f.quantifier == Quantifier::forall && (! f.is_free(p.first) || ! f.is_free(p.second)))
            throw ParseError(st->line, st->tokens[0].column, "under 'forall', equalities may only join free variables");
        if (p.first != p.second)
            f.equalities.insert(p);
    }

    if (body_st) {
        PExpr p = ExprParser(*body_st, 1, f.signature, vars).parse();
        std::vector<PExpr> conj;
        if (p.kind == PExpr::Kind::conj)
            conj = p.children;
        else
            conj.push_back(p);
        std::vector<Expr> kept;
        for (auto& c : conj) {
            if (c.kind == PExpr::Kind::neg) {
                auto& a = c.children[0];
                if (a.kind != PExpr::Kind::atom)
                    throw ParseError(body_st->line, c.column, "negation applies to a single atom");
                for (int v : a.args)
                    if (! f.is_free(v))
                        throw ParseError(body_st->line, c.column, "negated atom over quantified variable '" + f.names[v] + "'");
                f.negated.insert({a.symbol, a.args});
            }
            else
                kept.push_back(lower(c, body_st->line));
        }
        if (kept.empty())
            f.body = Expr::truth();
        else if (kept.size() == 1)
            f.body = kept[0];
        else
            f.body = Expr::make_and(std::move(kept));
    }
    if (f.conjunctive && ! f.is_conjunctive())
        throw ParseError(body_st ? body_st->line : sts[0].line, 1, "a query body must be a conjunction of atoms");
    return f;
}

Query formula_to_query(const FormulaAST& f)
{
    if (! f.is_conjunctive())
        throw ModelError("formula is not a conjunctive query");
    if (! f.equalities.empty())
        throw ModelError("eliminate equalities before converting to a query");
    Structure h(f.signature, f.variable_count());
    auto add = [&](const Expr& a) {
        h.add_tuple(a.symbol, a.args);
        if (f.graph_mode)
            h.add_tuple(a.symbol, {a.args[1], a.args[0]});
    };
    if (f.body.kind == Expr::Kind::atom)
        add(f.body);
    else
        for (auto& c : f.body.children)
            add(c);
    Query q(h, f.free);
    q.inequalities = f.inequalities;
    q.negated = f.negated;
    return q;
}

NamedQuery parse_query(const std::string& text)
{
    FormulaAST f = parse_formula(text);
    if (! f.conjunctive && ! f.is_conjunctive())
        throw ParseError(1, 1, "not a conjunctive query");
    if (! f.equalities.empty())
        throw ParseError(1, 1, "'eq' is not allowed in a query");
    return {formula_to_query(f), f.names};
}

Query canonical_relabel(const Query& q)
{
    std::vector<int> perm(q.h.size(), -1);
    int next = 0;
    for (int x : q.free)
        perm[x] = next++;
    for (int v = 0; v < q.h.size(); ++v)
        if (perm[v] < 0)
            perm[v] = next++;
    Structure h(q.h.signature(), q.h.size());
    for (std::size_t r = 0; r < q.h.signature().size(); ++r)
        for (auto& t : q.h.relation(r)) {
            Tuple m;
            for (int v : t)
                m.push_back(perm[v]);
            h.add_tuple(r, m);
        }
    Query out(h, {});
    for (int x : q.free)
        out.free.push_back(perm[x]);
    for (auto [u, v] : q.inequalities)
        out.add_inequality(perm[u], perm[v]);
    for (auto& a : q.negated) {
        Tuple m;
        for (int v : a.args)
            m.push_back(perm[v]);
        out.negated.insert({a.symbol, m});
    }
    return out;
}

std::string serialize_query(const Query& q0)
{
    Query q = canonical_relabel(q0);
    int k = int(q.free.size());
    auto name = [&](int v) { return v < k ? "x" + std::to_string(v) : "y" + std::to_string(v - k); };
    auto atom = [&](int r, const Tuple& t) {
        std::string s = q.h.signature()[r].name + "(";
        for (std::size_t i = 0; i < t.size(); ++i)
            s += (i ? "," : "") + name(t[i]);
        return s + ")";
    };
    bool graph = q.h.is_graph();
    // Negated atoms are written in their stored orientation; graph mode only
    // needs them as unordered pairs but keeping the tuple makes the round
    // trip exact.
    std::ostringstream out;
    out << "query\n";
    if (! graph)
        out << signature_line(q.h.signature()) << "\n";
    out << "free";
    for (int i = 0; i < k; ++i)
        out << " " << name(i);
    out << "\nexists";
    for (int v = k; v < q.h.size(); ++v)
        out << " " << name(v);
    out << "\n";
    std::vector<std::string> parts;
    for (std::size_t r = 0; r < q.h.signature().size(); ++r)
        for (auto& t : q.h.relation(r))
            if (! graph || t[0] < t[1])
                parts.push_back(atom(int(r), t));
    for (auto& a : q.negated)
        parts.push_back("!" + atom(a.symbol, a.args));
    if (! parts.empty()) {
        out << "body";
        for (std::size_t i = 0; i < parts.size(); ++i)
            out << (i ? " & " : " ") << parts[i];
        out << "\n";
    }
    for (auto [u, v] : q.inequalities)
        out << "ineq " << name(u) << " " << name(v) << "\n";
    return out.str();
}

Coloring parse_coloring(const std::string& text, int target_size, const std::vector<std::string>& names)
{
    Coloring c(target_size, -1);
    for (auto& st : statements(text)) {
        auto& kw = st.tokens[0];
        if (kw.text == "coloring" && st.tokens.size() == 1)
            continue;
        if (kw.text != "color" || st.tokens.size() != 3)
            throw ParseError(st.line, kw.column, "expected 'color <target-vertex> <query-variable>'");
        int t = to_int(st.tokens[1], st.line, "a target vertex");
        if (t < 0 || t >= target_size)
            throw ParseError(st.line, st.tokens[1].column, "target vertex out of range");
        auto& v = st.tokens[2];
        int q = -1;
        if (v.kind == Token::Kind::number)
            q = to_int(v, st.line, "a query vertex");
        else {
            auto it = std::find(names.begin(), names.end(), v.text);
            if (it == names.end())
                throw ParseError(st.line, v.column, "unknown query variable '" + v.text + "'");
            q = int(it - names.begin());
        }
        if (q < 0 || (! names.empty() && q >= int(names.size())))
            throw ParseError(st.line, v.column, "query vertex out of range");
        if (c[t] >= 0)
            throw ParseError(st.line, kw.column, "target vertex coloured twice");
        c[t] = q;
    }
    for (int t = 0; t < target_size; ++t)
        if (c[t] < 0)
            throw ParseError(1, 1, "target vertex " + std::to_string(t) + " has no colour");
    return c;
}

Expr substitute(const Expr& e, const std::vector<int>& map)
{
    Expr out = e;
    for (auto& a : out.args)
        a = map[a];
    for (auto& c : out.children)
        c = substitute(c, map);
    return out;
}

Expr simplify(const Expr& e)
{
    using K = Expr::Kind;
    if (e.kind != K::conj && e.kind != K::disj)
        return e;
    bool is_and = e.kind == K::conj;
    K absorbing = is_and ? K::falsity : K::truth;
    K neutral = is_and ? K::truth : K::falsity;
    std::vector<Expr> ch;
    for (auto& c0 : e.children) {
        Expr c = simplify(c0);
        if (c.kind == absorbing)
            return c;
        if (c.kind == neutral)
            continue;
        if (c.kind == e.kind)
            for (auto& g : c.children)
                ch.push_back(g);
        else
            ch.push_back(c);
    }
    if (ch.empty())
        return is_and ? Expr::truth() : Expr::falsity();
    if (ch.size() == 1)
        return ch[0];
    return is_and ? Expr::make_and(std::move(ch)) : Expr::make_or(std::move(ch));
}

namespace {
    Expr drop_diagonal(const Expr& e)
    {
        if (e.kind == Expr::Kind::atom)
            return e.args[0] == e.args[1] ? Expr::falsity() : e;
        Expr out = e;
        for (auto& c : out.children)
            c = drop_diagonal(c);
        return out;
    }
}

std::variant<FormulaAST, ZeroWitness> eliminate_equalities(const FormulaAST& f)
{
    int m = f.variable_count();
    std::vector<int> parent(m);
    std::iota(parent.begin(), parent.end(), 0);
    std::function<int(int)> find = [&](int x) { return parent[x] == x ? x : parent[x] = find(parent[x]); };
    for (auto [a, b] : f.equalities) {
        if (f.quantifier == Quantifier::forall && (! f.is_free(a) || ! f.is_free(b)))
            throw ModelError("under 'forall', equalities may only join free variables");
        parent[find(a)] = find(b);
    }
    // representative: first free variable of the class, else its smallest id
    std::vector<int> rep(m, -1);
    for (int x : f.free)
        if (rep[find(x)] < 0)
            rep[find(x)] = x;
    for (int v = 0; v < m; ++v)
        if (rep[find(v)] < 0)
            rep[find(v)] = v;

    FormulaAST out;
    out.signature = f.signature;
    out.graph_mode = f.graph_mode;
    out.conjunctive = f.conjunctive;
    out.quantifier = f.quantifier;
    std::vector<int> id(m, -1);
    for (int x : f.free)
        if (rep[find(x)] == x) {
            id[x] = int(out.names.size());
            out.names.push_back(f.names[x]);
            out.free.push_back(id[x]);
        }
    for (int y : f.quantified)
        if (rep[find(y)] == y) {
            id[y] = int(out.names.size());
            out.names.push_back(f.names[y]);
            out.quantified.push_back(id[y]);
        }
    std::vector<int> map(m);
    for (int v = 0; v < m; ++v)
        map[v] = id[rep[find(v)]];

    Expr body = substitute(f.body, map);
    if (f.graph_mode)
        body = drop_diagonal(body);
    out.body = simplify(body);
    for (auto [a, b] : f.inequalities) {
        int u = map[a], v = map[b];
        if (u == v)
            return ZeroWitness{"inequality between identified variables"};
        out.inequalities.insert({std::min(u, v), std::max(u, v)});
    }
    for (auto& a : f.negated) {
        NegatedAtom n{a.symbol, {}};
        for (int v : a.args)
            n.args.push_back(map[v]);
        if (f.graph_mode && n.args[0] == n.args[1])
            continue;
        out.negated.insert(n);
    }
    if (out.body.kind == Expr::Kind::falsity)
        return ZeroWitness{f.graph_mode ? "loop atom on loopless graphs" : "body is unsatisfiable"};
    return out;
}

namespace {
    using Clause = std::vector<Expr>;

    std::vector<Clause> dnf(const Expr& e)
    {
        switch (e.kind) {
        case Expr::Kind::atom:
            return {{e}};
        case Expr::Kind::truth:
            return {{}};
        case Expr::Kind::falsity:
            return {};
        case Expr::Kind::disj: {
            std::vector<Clause> out;
            for (auto& c : e.children)
                for (auto& cl : dnf(c))
                    out.push_back(cl);
            return out;
        }
        case Expr::Kind::conj: {
            std::vector<Clause> acc{{}};
            for (auto& c : e.children) {
                auto part = dnf(c);
                std::vector<Clause> next;
                for (auto& a : acc)
                    for (auto& b : part) {
                        Clause m = a;
                        m.insert(m.end(), b.begin(), b.end());
                        next.push_back(std::move(m));
                    }
                acc = std::move(next);
            }
            return acc;
        }
        }
        return {};
    }

    bool atom_less(const Expr& a, const Expr& b)
    {
        return std::tie(a.symbol, a.args) < std::tie(b.symbol, b.args);
    }
}

FormulaAST to_disjunctive_normal_form(const FormulaAST& f)
{
    FormulaAST out = f;
    std::vector<Clause> clauses = dnf(f.body);
    std::vector<Clause> kept;
    for (auto& cl : clauses) {
        std::sort(cl.begin(), cl.end(), atom_less);
        cl.erase(std::unique(cl.begin(), cl.end()), cl.end());
        if (std::find(kept.begin(), kept.end(), cl) == kept.end())
            kept.push_back(cl);
    }
    std::vector<Expr> disj;
    for (auto& cl : kept)
        disj.push_back(Expr::make_and(cl));
    out.body = Expr::make_or(std::move(disj));
    return out;
}

namespace {
    bool eval(const Expr& e, const std::vector<int>& img, const detail::TargetIndex& t)
    {
        switch (e.kind) {
        case Expr::Kind::truth:
            return true;
        case Expr::Kind::falsity:
            return false;
        case Expr::Kind::atom: {
            int vals[64];
            for (std::size_t i = 0; i < e.args.size(); ++i)
                vals[i] = img[e.args[i]];
            return t.contains(e.symbol, vals, int(e.args.size()));
        }
        case Expr::Kind::conj:
            for (auto& c : e.children)
                if (! eval(c, img, t))
                    return false;
            return true;
        case Expr::Kind::disj:
            for (auto& c : e.children)
                if (eval(c, img, t))
                    return true;
            return false;
        }
        return false;
    }

    // Odometer over the listed positions of img; f returns false to stop.
    template <typename F>
    bool for_each_assignment(const std::vector<int>& vars, int n, std::vector<int>& img, F&& f)
    {
        if (vars.empty())
            return f();
        if (n == 0)
            return true;
        for (int v : vars)
            img[v] = 0;
        while (true) {
            if (! f())
                return false;
            int i = int(vars.size()) - 1;
            while (i >= 0 && img[vars[i]] == n - 1)
                img[vars[i--]] = 0;
            if (i < 0)
                return true;
            ++img[vars[i]];
        }
    }
}

BigInt count_formula_answers(const FormulaAST& f, const Structure& t)
{
    if (! (f.signature == t.signature()))
        throw ModelError("formula and structure use different signatures");
    detail::TargetIndex ti(t);
    int n = t.size();
    std::vector<int> img(f.variable_count(), 0);
    std::vector<std::pair<int, int>> outer_eq, inner_eq;
    for (auto p : f.equalities)
        (f.is_free(p.first) && f.is_free(p.second) ? outer_eq : inner_eq).push_back(p);
    BigInt total = 0;
    for_each_assignment(f.free, n, img, [&] {
        for (auto [a, b] : outer_eq)
            if (img[a] != img[b])
                return true;
        for (auto [a, b] : f.inequalities)
            if (img[a] == img[b])
                return true;
        for (auto& na : f.negated) {
            int vals[64];
            for (std::size_t i = 0; i < na.args.size(); ++i)
                vals[i] = img[na.args[i]];
            if (ti.contains(na.symbol, vals, int(na.args.size())))
                return true;
        }
        bool ok;
        if (f.quantifier == Quantifier::exists) {
            ok = false;
            for_each_assignment(f.quantified, n, img, [&] {
                for (auto [a, b] : inner_eq)
                    if (img[a] != img[b])
                        return true;
                ok = eval(f.body, img, ti);
                return ! ok;
            });
        }
        else {
            ok = true;
            for_each_assignment(f.quantified, n, img, [&] {
                ok = eval(f.body, img, ti);
                return ok;
            });
        }
        if (ok)
            ++total;
        return true;
    });
    return total;
}

std::string read_file(const std::string& path)
{
    std::ifstream in(path);
    if (! in)
        throw std::runtime_error("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace cqc
