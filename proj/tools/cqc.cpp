#include "check.hpp"

#include <cqc/decomposition.hpp>
#include <cqc/expansion.hpp>
#include <cqc/gadgets.hpp>
#include <cqc/hom.hpp>
#include <cqc/params.hpp>
#include <cqc/parser.hpp>
#include <cqc/quantum.hpp>

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

using namespace cqc;
using namespace cqc::cli;

namespace {

enum Exit { ok = 0, input_error = 1, verification_failure = 2 };

struct InputError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Config {
    std::string command;
    std::string query, formula, target, coloring, quantum, output;
    std::vector<std::string> queries;
    std::string method = "auto";
    std::string gadget, op, family;
    std::uint64_t seed = 1;
    int trials = 100;
    int max_n = 6;
    int k = 2, from = 2, to = 4;
    bool machine = false;
};

class Report {
public:
    explicit Report(bool machine) : machine_(machine) {}

    void put(const std::string& key, const std::string& value)
    {
        if (machine_)
            std::cout << key << '=' << value << '\n';
        else
            std::cout << key << ": " << value << '\n';
    }
    void put(const std::string& key, long long value) { put(key, std::to_string(value)); }
    void put(const std::string& key, const BigInt& value) { put(key, value.str()); }
    void put_flag(const std::string& key, bool value) { put(key, std::string(value ? "yes" : "no")); }

    // The bare value in text mode.
    void result(const std::string& key, const std::string& value)
    {
        if (machine_)
            std::cout << key << '=' << value << '\n';
        else
            std::cout << value << '\n';
    }

    // Multi-line text; newlines are escaped in machine mode.
    void block(const std::string& key, const std::string& text)
    {
        if (! machine_) {
            std::cout << key << ":\n" << text;
            if (! text.empty() && text.back() != '\n')
                std::cout << '\n';
            return;
        }
        std::string esc;
        for (char ch : text)
            esc += ch == '\n' ? std::string("\\n") : std::string(1, ch);
        std::cout << key << '=' << esc << '\n';
    }

    bool machine() const { return machine_; }

private:
    bool machine_;
};

template <class F>
auto load(const std::string& path, const std::string& flag, F parse)
{
    if (path.empty())
        throw InputError("missing --" + flag);
    std::string text;
    try {
        text = read_file(path);
    }
    catch (const std::runtime_error& e) {
        throw InputError(e.what());
    }
    try {
        return parse(text);
    }
    catch (const ParseError& e) {
        throw InputError(path + ": " + e.what());
    }
    catch (const ModelError& e) {
        throw InputError(path + ": line 1: " + e.what());
    }
}

NamedQuery load_query(const std::string& path)
{
    return load(path, "query", [](const std::string& s) { return parse_query(s); });
}

Structure load_target(const std::string& path, const Signature* expected)
{
    auto t = load(path, "target", [](const std::string& s) { return parse_structure(s); });
    if (expected && t.signature() != *expected)
        throw InputError(path + ": line 1: signature does not match the query");
    return t;
}

Coloring load_coloring(const std::string& path, const Structure& t, const Structure& h, const std::vector<std::string>& names)
{
    auto c = load(path, "coloring", [&](const std::string& s) { return parse_coloring(s, t.size(), names); });
    for (int v : c)
        if (v >= h.size())
            throw InputError(path + ": line 1: colour " + std::to_string(v) + " is not a query vertex");
    if (! is_valid_coloring(t, h, c))
        throw InputError(path + ": line 1: not a homomorphism from the target to the query");
    return c;
}

void write_artifact(const Config& cfg, Report& rep, const std::string& key, const std::string& text)
{
    if (! cfg.output.empty()) {
        std::ofstream out(cfg.output);
        if (! out)
            throw InputError("cannot write '" + cfg.output + "'");
        out << text;
        rep.put("output", cfg.output);
    }
    else if (rep.machine())
        rep.block(key, text);
    else
        std::cout << text;
}

std::vector<std::string> index_names(int n)
{
    std::vector<std::string> names;
    for (int i = 0; i < n; ++i)
        names.push_back("v" + std::to_string(i));
    return names;
}

bool dp_applicable(const Query& q)
{
    if (! q.is_plain())
        return false;
    for (auto& comp : quantified_components(q))
        if (int(comp.boundary.size()) > default_dss_cap)
            return false;
    auto tw = exact_treewidth(contract_graph(q), default_exact_limit, true);
    return tw.exact;
}

int run_count(const Config& cfg, Report& rep)
{
    if (! cfg.formula.empty()) {
        auto f = load(cfg.formula, "formula", [](const std::string& s) { return parse_formula(s); });
        auto t = load_target(cfg.target, &f.signature);
        if (cfg.method == "brute") {
            rep.result("count", count_formula_answers(f, t).str());
            return ok;
        }
        QuantumQuery qq;
        try {
            qq = compile(f);
        }
        catch (const ModelError& e) {
            throw InputError(cfg.formula + ": line 1: " + e.what());
        }
        rep.result("count", to_string(evaluate(qq, t)));
        return ok;
    }
    auto nq = load_query(cfg.query);
    auto t = load_target(cfg.target, &nq.query.h.signature());
    std::string method = cfg.method;
    if (method == "auto")
        method = dp_applicable(nq.query) ? "dp" : "brute";
    BigInt n;
    if (method == "dp") {
        try {
            n = count_answers_dss(nq.query, t);
        }
        catch (const ModelError& e) {
            throw InputError(cfg.query + ": line 1: " + e.what());
        }
    }
    else
        n = count_answers(nq.query, t);
    if (rep.machine())
        rep.put("method", method);
    rep.result("count", n.str());
    return ok;
}

int run_count_colored(const Config& cfg, Report& rep, bool colorful)
{
    auto nq = load_query(cfg.query);
    auto t = load_target(cfg.target, &nq.query.h.signature());
    auto c = load_coloring(cfg.coloring, t, nq.query.h, nq.names);
    auto n = colorful ? count_cf_answers(nq.query, t, c) : count_cp_answers(nq.query, t, c);
    rep.result(colorful ? "count_cf" : "count_cp", n.str());
    return ok;
}

std::string shape_of(const Structure& g)
{
    int n = g.size();
    auto m = int(g.edges().size());
    if (m == 0)
        return n == 0 ? "empty" : "edgeless";
    if (m == n * (n - 1) / 2)
        return "K" + std::to_string(n);
    return "graph";
}

void put_parameters(Report& rep, const Query& q, const std::vector<std::string>& names, const ParameterReport& r)
{
    auto cg = contract_graph(q);
    std::string edges;
    for (auto [u, v] : cg.edges()) {
        auto name = [&](int i) { return q.free[i] < int(names.size()) ? names[q.free[i]] : std::to_string(q.free[i]); };
        edges += (edges.empty() ? "" : " ") + name(u) + "-" + name(v);
    }
    rep.put("vertices", q.h.size());
    rep.put("free", (long long)q.free.size());
    rep.put("treewidth", r.treewidth);
    rep.put_flag("treewidth_exact", r.treewidth_exact);
    rep.put("contract", shape_of(cg));
    rep.put("contract_edges", edges);
    rep.put("contract_tw", r.contract_width);
    rep.put_flag("contract_exact", r.contract_exact);
    rep.put("dss", r.dss);
    rep.put("lmn", r.lmn);
    rep.put_flag("lmn_exact", r.lmn_exact);
    rep.put("components", (long long)r.components.size());
    rep.put_flag("minimal", r.minimal);
    for (auto& note : r.notes)
        rep.put("note", note);
}

int run_params(const Config& cfg, Report& rep)
{
    auto nq = load_query(cfg.query);
    put_parameters(rep, nq.query, nq.names, parameter_report(nq.query));
    return ok;
}

int run_classify(const Config& cfg, Report& rep)
{
    std::vector<Query> family;
    std::vector<std::string> labels;
    if (! cfg.family.empty()) {
        FamilyKind kind;
        try {
            kind = parse_family(cfg.family);
        }
        catch (const ModelError& e) {
            throw InputError(e.what());
        }
        if (cfg.from < 1 || cfg.to < cfg.from)
            throw InputError("bad range --from " + std::to_string(cfg.from) + " --to " + std::to_string(cfg.to));
        for (int k = cfg.from; k <= cfg.to; ++k) {
            family.push_back(family_query(kind, k));
            labels.push_back(family_name(kind) + "_" + std::to_string(k));
        }
    }
    for (auto& path : cfg.queries) {
        family.push_back(load_query(path).query);
        labels.push_back(path);
    }
    if (family.empty())
        throw InputError("classify needs --family or at least one --query");
    auto c = classify(family);
    for (std::size_t i = 0; i < family.size(); ++i) {
        auto& r = c.reports[i];
        std::ostringstream os;
        os << "tw=" << r.treewidth << " contract_tw=" << r.contract_width << " dss=" << r.dss << " lmn=" << r.lmn;
        rep.put("member " + labels[i], os.str());
    }
    rep.put_flag("treewidth_grows", c.treewidth_grows);
    rep.put_flag("contract_grows", c.contract_grows);
    rep.put_flag("dss_grows", c.dss_grows);
    rep.put_flag("lmn_grows", c.lmn_grows);
    rep.put("regime", c.regime);
    rep.put("description", c.description);
    for (auto& note : c.notes)
        rep.put("note", note);
    return ok;
}

int run_minimize(const Config& cfg, Report& rep)
{
    auto nq = load_query(cfg.query);
    if (! nq.query.is_plain())
        throw InputError(cfg.query + ": line 1: minimize takes queries without inequalities or negations");
    auto core = canonical_relabel(augmented_core(nq.query));
    if (rep.machine() || ! cfg.output.empty()) {
        rep.put("vertices_before", nq.query.h.size());
        rep.put("vertices_after", core.h.size());
    }
    write_artifact(cfg, rep, "query", serialize_query(core));
    return ok;
}

int run_expand(const Config& cfg, Report& rep)
{
    auto f = load(cfg.formula, "formula", [](const std::string& s) { return parse_formula(s); });
    QuantumQuery qq;
    try {
        qq = compile(f);
    }
    catch (const ModelError& e) {
        throw InputError(cfg.formula + ": line 1: " + e.what());
    }
    if (rep.machine() || ! cfg.output.empty()) {
        rep.put("terms", (long long)qq.terms.size());
        rep.put("transform", std::string(qq.transform == Transform::complement ? "complement" : "identity"));
    }
    write_artifact(cfg, rep, "quantum", serialize_quantum(qq));
    return ok;
}

int run_eval(const Config& cfg, Report& rep)
{
    auto qq = load(cfg.quantum, "quantum", [](const std::string& s) { return parse_quantum(s); });
    const Signature* sig = qq.terms.empty() ? nullptr : &qq.terms.front().query.h.signature();
    auto t = load_target(cfg.target, sig);
    rep.result("value", to_string(evaluate(qq, t)));
    return ok;
}

MinorOp parse_minor_op(const std::string& text)
{
    auto colon = text.find(':');
    std::string kind = text.substr(0, colon);
    std::vector<int> args;
    if (colon != std::string::npos) {
        std::stringstream ss(text.substr(colon + 1));
        std::string item;
        while (std::getline(ss, item, ','))
            try {
                args.push_back(std::stoi(item));
            }
            catch (const std::exception&) {
                throw InputError("--op: bad vertex '" + item + "'");
            }
    }
    if (kind == "delete-vertex" && args.size() == 1)
        return {MinorOp::Kind::delete_vertex, args[0], -1};
    if (kind == "delete-edge" && args.size() == 2)
        return {MinorOp::Kind::delete_edge, args[0], args[1]};
    if (kind == "contract" && args.size() == 2)
        return {MinorOp::Kind::contract_edge, args[0], args[1]};
    throw InputError("--op must be delete-vertex:u, delete-edge:u,v or contract:u,v");
}

int report_relation(Report& rep, const std::string& relation, const BigInt& source, const BigInt& gadget)
{
    rep.put("relation", relation);
    rep.put("source_count", source);
    rep.put("gadget_count", gadget);
    rep.put_flag("preserved", source == gadget);
    return source == gadget ? ok : verification_failure;
}

int run_gadget_instance(const Config& cfg, Report& rep)
{
    auto cp_or_zero = [](const Query& q, const GadgetOutput& out) {
        return out.zero ? BigInt(0) : count_cp_answers(q, out.target, out.coloring);
    };
    const std::string& name = cfg.gadget;
    if (name == "domset") {
        auto g = load_target(cfg.target, nullptr);
        if (! g.is_graph())
            throw InputError(cfg.target + ": line 1: domset needs a graph");
        auto d = domset_via_star_oracle(g, cfg.k);
        bool same = true;
        for (int l = 0; l <= cfg.k; ++l) {
            auto brute = naive_dominating_sets(g, l);
            rep.put("D" + std::to_string(l), d[l]);
            same = same && brute == d[l];
        }
        rep.put_flag("preserved", same);
        return same ? ok : verification_failure;
    }
    if (name == "grate") {
        if (cfg.k < 2)
            throw InputError("--k must be at least 2");
        auto gamma = family_query(FamilyKind::gamma, cfg.k), omega = family_query(FamilyKind::omega, cfg.k);
        auto t = load_target(cfg.target, &gamma.h.signature());
        auto c = load_coloring(cfg.coloring, t, gamma.h, index_names(gamma.h.size()));
        auto out = gamma_to_grate_gadget(cfg.k, t, c);
        if (! cfg.output.empty() && ! out.zero)
            write_artifact(cfg, rep, "target", serialize_structure(out.target));
        return report_relation(rep, out.relation, count_cp_answers(gamma, t, c), cp_or_zero(omega, out));
    }
    auto nq = load_query(cfg.query);
    auto& q = nq.query;
    if (name == "uncolored-to-cp") {
        auto t = load_target(cfg.target, &q.h.signature());
        auto out = uncolored_to_cp_gadget(q, t);
        if (! cfg.output.empty() && ! out.zero)
            write_artifact(cfg, rep, "target", serialize_structure(out.target));
        return report_relation(rep, out.relation, count_answers(q, t), cp_or_zero(q, out));
    }
    if (name == "cf-via-uncolored") {
        auto t = load_target(cfg.target, &q.h.signature());
        auto c = load_coloring(cfg.coloring, t, q.h, nq.names);
        if (! is_minimal(q))
            throw InputError(cfg.query + ": line 1: the query is not minimal");
        auto res = cf_count_via_uncolored(q, t, c);
        rep.put("count_cp", res.cp);
        rep.put("oracle_calls", res.oracle_calls);
        return report_relation(rep, "cf", count_cf_answers(q, t, c), res.cf);
    }
    if (name == "minor") {
        if (cfg.op.empty())
            throw InputError("missing --op");
        auto op = parse_minor_op(cfg.op);
        MinorResult minor;
        try {
            minor = apply_query_minor(q, op);
        }
        catch (const ModelError& e) {
            throw InputError("--op: " + std::string(e.what()));
        }
        std::vector<std::string> names(minor.query.h.size());
        for (int v = q.h.size() - 1; v >= 0; --v)
            if (minor.vertex_map[v] >= 0)
                names[minor.vertex_map[v]] = nq.names[v];
        auto t = load_target(cfg.target, &q.h.signature());
        auto c = load_coloring(cfg.coloring, t, minor.query.h, names);
        auto out = minor_instance_gadget(q, op, t, c);
        if (! cfg.output.empty() && ! out.zero)
            write_artifact(cfg, rep, "target", serialize_structure(out.target));
        return report_relation(rep, out.relation, count_cp_answers(minor.query, t, c), cp_or_zero(q, out));
    }
    if (name == "gaifman") {
        auto gq = Query(gaifman_graph(q.h), q.free);
        auto t = load_target(cfg.target, &gq.h.signature());
        auto c = load_coloring(cfg.coloring, t, gq.h, nq.names);
        auto out = gaifman_expand_gadget(q, t, c);
        if (! cfg.output.empty() && ! out.zero)
            write_artifact(cfg, rep, "target", serialize_structure(out.target));
        return report_relation(rep, out.relation, count_cp_answers(gq, t, c), cp_or_zero(q, out));
    }
    throw InputError("unknown gadget '" + name + "'");
}

std::string run_trials(const Property& p, const Config& cfg, int index, int& passed)
{
    std::seed_seq seq{std::uint32_t(cfg.seed), std::uint32_t(cfg.seed >> 32), std::uint32_t(index)};
    Rng rng(seq);
    CheckLimits lim{cfg.max_n};
    passed = 0;
    for (int i = 0; i < cfg.trials; ++i) {
        auto failure = p.trial(rng, lim);
        if (failure)
            return "trial " + std::to_string(i) + "\n" + *failure;
        ++passed;
    }
    return {};
}

int run_check_list(const std::vector<Property>& all, const std::vector<int>& chosen, const Config& cfg, Report& rep)
{
    bool pass = true;
    for (int index : chosen) {
        auto& p = all[index];
        int passed = 0;
        std::string failure;
        try {
            failure = run_trials(p, cfg, index, passed);
        }
        catch (const std::exception& e) {
            failure = std::string("exception: ") + e.what();
        }
        if (failure.empty())
            rep.put(p.name, "pass " + std::to_string(passed) + "/" + std::to_string(cfg.trials));
        else {
            pass = false;
            rep.put(p.name, "FAIL after " + std::to_string(passed) + " passing trials");
            rep.block("counterexample", failure);
        }
    }
    rep.put("result", std::string(pass ? "pass" : "fail"));
    return pass ? ok : verification_failure;
}

void check_limits(const Config& cfg)
{
    if (cfg.trials < 1)
        throw InputError("--trials must be positive");
    if (cfg.max_n < 1 || cfg.max_n > 8)
        throw InputError("--max-n must be between 1 and 8");
}

int run_check(const Config& cfg, Report& rep)
{
    check_limits(cfg);
    auto all = check_properties();
    std::vector<int> chosen(all.size());
    for (std::size_t i = 0; i < all.size(); ++i)
        chosen[i] = int(i);
    return run_check_list(all, chosen, cfg, rep);
}

// Random mode shares the seed stream of the check suite.
int run_gadget(const Config& cfg, Report& rep)
{
    if (! cfg.target.empty())
        return run_gadget_instance(cfg, rep);
    check_limits(cfg);
    auto all = check_properties();
    auto* p = find_property(all, cfg.gadget);
    if (! p)
        throw InputError("unknown gadget '" + cfg.gadget + "'");
    return run_check_list(all, {int(p - all.data())}, cfg, rep);
}

int dispatch(const Config& cfg)
{
    Report rep(cfg.machine);
    if (cfg.command == "count")
        return run_count(cfg, rep);
    if (cfg.command == "count-cp")
        return run_count_colored(cfg, rep, false);
    if (cfg.command == "count-cf")
        return run_count_colored(cfg, rep, true);
    if (cfg.command == "params")
        return run_params(cfg, rep);
    if (cfg.command == "classify")
        return run_classify(cfg, rep);
    if (cfg.command == "minimize")
        return run_minimize(cfg, rep);
    if (cfg.command == "expand")
        return run_expand(cfg, rep);
    if (cfg.command == "eval")
        return run_eval(cfg, rep);
    if (cfg.command == "gadget")
        return run_gadget(cfg, rep);
    return run_check(cfg, rep);
}

}  // namespace

int main(int argc, char** argv)
{
    Config cfg;
    CLI::App app{"Counting answers to conjunctive queries and their extensions"};
    app.require_subcommand(1);

    auto add_common = [&](CLI::App* sub) {
        sub->add_flag("--machine", cfg.machine, "one key=value line per result");
        return sub;
    };
    auto add_input = [&](CLI::App* sub, const std::string& flag, std::string& dest, const std::string& what) {
        sub->add_option("--" + flag, dest, what);
    };
    auto method = [&](CLI::App* sub) {
        sub->add_option("--method", cfg.method, "brute, dp or auto")->check(CLI::IsMember({"brute", "dp", "auto"}));
    };
    auto random = [&](CLI::App* sub) {
        sub->add_option("--seed", cfg.seed, "random seed");
        sub->add_option("--trials", cfg.trials, "trials per property");
        sub->add_option("--max-n", cfg.max_n, "largest random target");
    };

    auto* count = add_common(app.add_subcommand("count", "count answers of a query or formula"));
    add_input(count, "query", cfg.query, "query file");
    add_input(count, "formula", cfg.formula, "formula file");
    add_input(count, "target", cfg.target, "structure file");
    method(count);

    for (auto name : {"count-cp", "count-cf"}) {
        auto* sub = add_common(app.add_subcommand(name, std::string(name) == "count-cp" ? "colour-prescribed answers" : "colourful answers"));
        add_input(sub, "query", cfg.query, "query file");
        add_input(sub, "target", cfg.target, "structure file");
        add_input(sub, "coloring", cfg.coloring, "coloring file");
    }

    auto* params = add_common(app.add_subcommand("params", "structural parameters of a query"));
    add_input(params, "query", cfg.query, "query file");

    auto* cls = add_common(app.add_subcommand("classify", "complexity regime of a query family"));
    cls->add_option("--query", cfg.queries, "family members, in order");
    cls->add_option("--family", cfg.family, "psi, gamma, omega, poly, w1, subdivided or phi");
    cls->add_option("--from", cfg.from, "smallest k");
    cls->add_option("--to", cfg.to, "largest k");

    auto* minimize = add_common(app.add_subcommand("minimize", "augmented core of a query"));
    add_input(minimize, "query", cfg.query, "query file");
    add_input(minimize, "output", cfg.output, "write the core here");

    auto* expand = add_common(app.add_subcommand("expand", "compile a formula into a quantum query"));
    add_input(expand, "formula", cfg.formula, "formula file");
    add_input(expand, "output", cfg.output, "write the quantum query here");

    auto* eval = add_common(app.add_subcommand("eval", "evaluate a quantum query"));
    add_input(eval, "quantum", cfg.quantum, "quantum query file");
    add_input(eval, "target", cfg.target, "structure file");

    auto* gadget = add_common(app.add_subcommand("gadget", "run a reduction gadget and verify its count relation"));
    gadget->add_option("name", cfg.gadget, "uncolored-to-cp, cf-via-uncolored, minor, grate, gaifman or domset")
        ->required()
        ->check(CLI::IsMember({"uncolored-to-cp", "cf-via-uncolored", "minor", "grate", "gaifman", "domset"}));
    add_input(gadget, "query", cfg.query, "query file");
    add_input(gadget, "target", cfg.target, "structure file; random trials when absent");
    add_input(gadget, "coloring", cfg.coloring, "coloring file");
    add_input(gadget, "output", cfg.output, "write the gadget structure here");
    gadget->add_option("--op", cfg.op, "delete-vertex:u, delete-edge:u,v or contract:u,v");
    gadget->add_option("--k", cfg.k, "size parameter for grate and domset");
    random(gadget);

    auto* check = add_common(app.add_subcommand("check", "randomized cross-validation suite"));
    random(check);

    try {
        app.parse(argc, argv);
    }
    catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    }
    catch (const CLI::ParseError& e) {
        app.exit(e);
        return input_error;
    }
    cfg.command = app.get_subcommands().front()->get_name();

    try {
        return dispatch(cfg);
    }
    catch (const InputError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return input_error;
    }
    catch (const ModelError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return input_error;
    }
}
