// diffinv: differential-invariant pipeline for third-order operators.
#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <sstream>

#include "diffinv/equivalence.hpp"
#include "diffinv/error.hpp"
#include "diffinv/expr_io.hpp"
#include "diffinv/json_io.hpp"

using namespace diffinv;
using json = nlohmann::ordered_json;

namespace {

struct Io {
    std::string format = "text";
    std::string output;

    void emit(const std::string& text, const json& j) const {
        std::ostringstream body;
        if (format == "json") {
            json ordered;
            ordered["schema"] = 1;
            for (auto it = j.begin(); it != j.end(); ++it) ordered[it.key()] = it.value();
            body << ordered.dump(2) << "\n";
        } else {
            body << text;
        }
        if (output.empty()) {
            std::cout << body.str();
        } else {
            std::ofstream out(output);
            if (!out) throw std::invalid_argument("cannot write output file: " + output);
            out << body.str();
        }
    }
};

std::vector<QQ> parse_point(const std::string& s, size_t arity) {
    std::vector<QQ> pt;
    std::stringstream ss(s);
    std::string part;
    while (std::getline(ss, part, ',')) pt.push_back(qq_parse(part));
    if (pt.size() != arity)
        throw std::invalid_argument("point must list " + std::to_string(arity) +
                                    " values");
    return pt;
}

Domain parse_domain(const std::string& s) {
    std::vector<QQ> v = parse_point(s, 4);
    return Domain{v[0], v[1], v[2], v[3]};
}

// plain operator view: families are frozen at y0 when given, otherwise the
// fiber coordinate rides along as an inert parameter
LinDiffOp plain_view(const OperatorDoc& doc, const std::string& y0) {
    if (!doc.family) return doc.op;
    if (!y0.empty()) {
        std::map<size_t, Rat> bind{{doc.fam.y_index, Rat(doc.fam.vars, qq_parse(y0))}};
        std::vector<std::string> names;
        std::vector<size_t> keep;
        for (size_t i = 0; i < doc.fam.vars.size(); ++i)
            if (i != doc.fam.y_index) {
                names.push_back(doc.fam.vars.name(i));
                keep.push_back(i);
            }
        VarSet base(names);
        LinDiffOp re{doc.dim, base, {}};
        for (const auto& [a, c] : doc.fam.coeffs)
            re.set_coeff(a, c.substitute(bind).with_vars(doc.fam.vars).restricted(base, keep));
        return re;
    }
    return LinDiffOp{doc.dim, doc.fam.vars, doc.fam.coeffs};
}

std::string gamma_name(int k, int m, int l) {
    return "Gamma^" + std::to_string(k + 1) + "_{" + std::to_string(m + 1) +
           std::to_string(l + 1) + "}";
}

int run_classify(const std::string& path, const std::string& at, const Io& io) {
    OperatorDoc doc = load_operator_file(path);
    LinDiffOp op = plain_view(doc, "");
    if (op.dim != 2) throw std::invalid_argument("classify needs a planar operator");
    SymTensor s3 = symbol3(op);
    Rat delta = discriminant(s3);
    SymbolClass cls = at.empty() ? classify(s3)
                                 : classify_at(s3, parse_point(at, op.vars.size()));
    std::ostringstream text;
    text << "class: " << to_string(cls) << "\n";
    text << "delta: " << to_string(delta) << "\n";
    json j;
    j["command"] = "classify";
    j["class"] = to_string(cls);
    j["delta"] = to_string(delta);
    io.emit(text.str(), j);
    return 0;
}

int run_connection(const std::string& path, const std::string& y0, const Io& io) {
    OperatorDoc doc = load_operator_file(path);
    LinDiffOp op = plain_view(doc, y0);
    DiffCtx ctx = DiffCtx::plain(op.vars, op.dim);
    Connection G = wagner_connection(symbol3(op), ctx);
    bool flat = curvature(G, ctx).is_zero();
    Covector th = torsion_form(G);
    std::ostringstream text;
    json gj = json::object();
    for (int k = 0; k < op.dim; ++k)
        for (int m = 0; m < op.dim; ++m)
            for (int l = 0; l < op.dim; ++l) {
                if (G.at(k, m, l).is_zero()) continue;
                text << gamma_name(k, m, l) << " = " << to_string(G.at(k, m, l))
                     << "\n";
                gj[gamma_name(k, m, l)] = to_string(G.at(k, m, l));
            }
    text << "curvature_zero: " << (flat ? "true" : "false") << "\n";
    json tj = json::array();
    for (int i = 0; i < op.dim; ++i) {
        text << "theta_" << (i + 1) << " = " << to_string(th.comp[(size_t)i]) << "\n";
        tj.push_back(to_string(th.comp[(size_t)i]));
    }
    json j;
    j["command"] = "connection";
    j["gamma"] = gj;
    j["curvature_zero"] = flat;
    j["theta"] = tj;
    io.emit(text.str(), j);
    return 0;
}

int run_symbols(const std::string& path, const std::string& y0, const Io& io) {
    OperatorDoc doc = load_operator_file(path);
    LinDiffOp op = plain_view(doc, y0);
    DiffCtx ctx = DiffCtx::plain(op.vars, op.dim);
    TotalSymbol ts = total_symbol(op, ctx);
    std::ostringstream text;
    json j;
    j["command"] = "symbols";
    auto dump = [&](const char* name, const SymTensor& s) {
        json sj = json::object();
        for (const auto& [a, c] : s.comp) {
            text << name << "[" << midx_key(a) << "] = " << to_string(c) << "\n";
            sj[midx_key(a)] = to_string(c);
        }
        j[name] = sj;
    };
    dump("sigma3", ts.s3);
    dump("sigma2", ts.s2);
    dump("sigma1", ts.s1);
    text << "sigma0 = " << to_string(ts.s0) << "\n";
    j["sigma0"] = to_string(ts.s0);
    io.emit(text.str(), j);
    return 0;
}

int run_invariants(const std::string& path, const std::string& names,
                   const std::string& y0, const Io& io) {
    OperatorDoc doc = load_operator_file(path);
    LinDiffOp op = plain_view(doc, y0);
    InvariantEvaluator ev({op, DiffCtx::plain(op.vars, op.dim)});
    std::ostringstream text;
    json j;
    j["command"] = "invariants";
    json vals = json::object();
    std::stringstream ss(names);
    std::string name;
    while (std::getline(ss, name, ',')) {
        for (auto& [n, v] : ev.eval(InvariantSpec::parse(name))) {
            text << n << " = " << to_string(v) << "\n";
            vals[n] = to_string(v);
        }
    }
    j["values"] = vals;
    io.emit(text.str(), j);
    return 0;
}

int run_descend(const std::string& seeds, int jet_order, int depth,
                const std::string& op_path, const std::string& at, const Io& io) {
    SymbolicFamily fam = symbolic_family_1d(depth, jet_order);
    std::vector<PairInvariant> pis;
    std::vector<std::string> seed_names;
    {
        std::stringstream ss(seeds);
        std::string name;
        while (std::getline(ss, name, ',')) {
            seed_names.push_back(name);
            pis.push_back(pair_invariant(InvariantSpec::parse(name), fam));
        }
    }
    DescentResult d = descend(pis);
    std::ostringstream text;
    json j;
    j["command"] = "descend";
    j["seeds"] = seed_names;
    if (d.no_relations) {
        text << "no relations\n";
        j["relations"] = json::array();
        io.emit(text.str(), j);
        return 0;
    }
    json rels = json::array();
    for (const auto& r : d.relations) {
        text << "relation: " << to_string(r) << "\n";
        rels.push_back(to_string(r));
    }
    j["relations"] = rels;
    json invs = json::object();
    for (const auto& [n, v] : d.invariants) {
        text << n << " = " << to_string(v) << "\n";
        invs[n] = to_string(v);
    }
    j["invariants"] = invs;

    if (!op_path.empty()) {
        OperatorDoc doc = load_operator_file(op_path);
        if (!doc.family || doc.dim != 1)
            throw std::invalid_argument("descend evaluation needs a 1-D family");
        std::vector<QQ> pt = parse_point(at, 2); // (x, y)
        auto jets = coefficient_jet_values(doc.fam, depth);
        json ev = json::object();
        for (const auto& [n, v] : d.invariants) {
            // substitute the concrete coefficient jets, then evaluate
            std::map<size_t, Rat> bind;
            for (size_t i = 0; i < d.params.size(); ++i) {
                auto it = jets.find(d.params.name(i));
                if (it != jets.end()) bind[i] = it->second;
            }
            Rat inst = v.substitute(bind);
            std::vector<QQ> full(inst.vars().size(), QQ(0));
            for (size_t i = 0; i < inst.vars().size(); ++i) {
                const std::string& nm = inst.vars().name(i);
                if (auto ix = doc.fam.vars.index_of(nm)) {
                    full[i] = pt[*ix == doc.fam.y_index ? 1 : 0];
                } else if (inst.depends_on(i)) {
                    throw std::invalid_argument("no concrete value for symbol '" + nm +
                                                "'; increase --depth");
                }
            }
            QQ val = inst.eval(full);
            text << n << " @ (" << to_string(pt[0]) << "," << to_string(pt[1])
                 << ") = " << to_string(val) << "\n";
            ev[n] = to_string(val);
        }
        j["evaluated"] = ev;
    }
    io.emit(text.str(), j);
    return 0;
}

int run_equiv(const std::string& pa, const std::string& pb, const std::string& y0a,
              const std::string& y0b, const std::string& names, const std::string& z1,
              const std::string& z2, const std::string& da, const std::string& db,
              int grid, double tol, const std::string& report, const Io& io) {
    OperatorDoc A = load_operator_file(pa), B = load_operator_file(pb);
    if (!A.family || !B.family)
        throw std::invalid_argument("equiv expects family operator files");
    EquivOptions opt;
    opt.z1 = InvariantSpec::parse(z1);
    opt.z2 = InvariantSpec::parse(z2);
    if (!names.empty()) {
        opt.battery.clear();
        std::stringstream ss(names);
        std::string n;
        while (std::getline(ss, n, ',')) opt.battery.push_back(InvariantSpec::parse(n));
    }
    opt.domain_a = parse_domain(da);
    opt.domain_b = parse_domain(db);
    opt.grid = grid;
    opt.tol = tol;
    EquivReport r = equivalence_test(A.fam, B.fam, qq_parse(y0a), qq_parse(y0b), opt);

    std::ostringstream text;
    text << "verdict: " << to_string(r.verdict) << "\n";
    json j;
    j["command"] = "equiv";
    j["verdict"] = to_string(r.verdict);
    if (r.verdict != Verdict::Equivalent) {
        text << "witness: " << r.witness.kind;
        if (!r.witness.invariant.empty()) text << " " << r.witness.invariant;
        text << " at (" << r.witness.point[0] << ", " << r.witness.point[1]
             << ") residual " << r.witness.residual << "\n";
        if (!r.witness.detail.empty()) text << "detail: " << r.witness.detail << "\n";
        j["witness"] = {{"kind", r.witness.kind},
                        {"invariant", r.witness.invariant},
                        {"point", {r.witness.point[0], r.witness.point[1]}},
                        {"residual", r.witness.residual},
                        {"detail", r.witness.detail}};
    } else {
        text << "max_residual: " << r.max_residual << "\n";
        j["max_residual"] = r.max_residual;
    }
    json corr = json::array();
    for (const auto& m : r.correspondence)
        corr.push_back({{"x", {m.x[0], m.x[1]}},
                        {"x_prime", {m.xprime[0], m.xprime[1]}},
                        {"residual", m.residual}});
    j["correspondence"] = corr;
    if (!report.empty()) {
        json rj;
        rj["schema"] = 1;
        for (auto it = j.begin(); it != j.end(); ++it) rj[it.key()] = it.value();
        std::ofstream out(report);
        if (!out) throw std::invalid_argument("cannot write report file: " + report);
        out << rj.dump(2) << "\n";
    }
    io.emit(text.str(), j);
    return r.verdict == Verdict::Inconclusive ? 1 : 0;
}

int run_oracle1d(const std::string& path, bool symbolic, const std::string& y0,
                 const Io& io) {
    OracleReport rep;
    if (symbolic) {
        rep = oracle_1d_symbolic();
    } else {
        OperatorDoc doc = load_operator_file(path);
        rep = oracle_1d(plain_view(doc, y0));
    }
    std::ostringstream text;
    json items = json::array();
    for (const auto& i : rep.items) {
        text << (i.equal ? "[equal]  " : "[differs] ") << i.name << "\n";
        if (!i.equal) {
            text << "  pipeline: " << i.pipeline << "\n";
            text << "  printed:  " << i.printed << "\n";
        }
        items.push_back({{"name", i.name},
                         {"equal", i.equal},
                         {"pipeline", i.pipeline},
                         {"printed", i.printed}});
    }
    json j;
    j["command"] = "oracle1d";
    j["items"] = items;
    j["all_equal"] = rep.all_equal();
    io.emit(text.str(), j);
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"differential invariants and equivalence of third-order operators"};
    app.require_subcommand(1);
    Io io;
    app.add_option("--format", io.format, "output format: text or json")
        ->check(CLI::IsMember({"text", "json"}));
    app.add_option("--output", io.output, "write the report to this file");

    std::string op_path, op_b_path, at, y0 = "", y0b = "0", names, report;
    std::string z1 = "I0", z2 = "BOX:I0";
    std::string dom_a = "0,1,0,1", dom_b = "0,1,0,1";
    std::string seeds = "I2,I3";
    int grid = 5, jet_order = 1, depth = 3;
    double tol = 1e-9;
    bool symbolic = false;

    auto* classify_cmd = app.add_subcommand("classify", "symbol discriminant and class");
    classify_cmd->add_option("--op", op_path, "operator file")->required();
    classify_cmd->add_option("--at", at, "evaluation point (comma separated)");

    auto* conn_cmd = app.add_subcommand("connection", "parallelism connection table");
    conn_cmd->add_option("--op", op_path, "operator file")->required();
    conn_cmd->add_option("--y0", y0, "freeze the fiber coordinate");

    auto* sym_cmd = app.add_subcommand("symbols", "total symbol decomposition");
    sym_cmd->add_option("--op", op_path, "operator file")->required();
    sym_cmd->add_option("--y0", y0, "freeze the fiber coordinate");

    auto* inv_cmd = app.add_subcommand("invariants", "evaluate named invariants");
    inv_cmd->add_option("--op", op_path, "operator file")->required();
    inv_cmd->add_option("--names", names, "comma separated invariant names")
        ->required();
    inv_cmd->add_option("--y0", y0, "freeze the fiber coordinate");

    auto* desc_cmd = app.add_subcommand("descend", "Groebner descent of seed invariants");
    desc_cmd->add_option("--seeds", seeds, "seed invariant names (default I2,I3)");
    desc_cmd->add_option("--jet-order", jet_order, "jet order of the related pairs");
    desc_cmd->add_option("--depth", depth, "coefficient jet depth");
    desc_cmd->add_option("--op", op_path, "optional 1-D family file for evaluation");
    desc_cmd->add_option("--at", at, "evaluation point x,y");

    auto* eq_cmd = app.add_subcommand("equiv", "equivalence decision for two families");
    eq_cmd->add_option("--op-a", op_path, "first family file")->required();
    eq_cmd->add_option("--op-b", op_b_path, "second family file")->required();
    eq_cmd->add_option("--y0", y0, "fiber sample for the first family")->required();
    eq_cmd->add_option("--y0b", y0b, "fiber sample for the second family");
    eq_cmd->add_option("--invariants", names, "signature battery names");
    eq_cmd->add_option("--z1", z1, "first chart invariant");
    eq_cmd->add_option("--z2", z2, "second chart invariant");
    eq_cmd->add_option("--domain-a", dom_a, "x1lo,x1hi,x2lo,x2hi");
    eq_cmd->add_option("--domain-b", dom_b, "x1lo,x1hi,x2lo,x2hi");
    eq_cmd->add_option("--grid", grid, "sample grid size per side");
    eq_cmd->add_option("--tol", tol, "numeric tolerance");
    eq_cmd->add_option("--report", report, "write the JSON report here");

    auto* or_cmd = app.add_subcommand("oracle1d", "1-D closed-form comparison report");
    or_cmd->add_option("--op", op_path, "1-D operator file");
    or_cmd->add_flag("--symbolic", symbolic, "fully symbolic comparison");
    or_cmd->add_option("--y0", y0, "freeze the fiber coordinate");

    for (auto* sc : app.get_subcommands(nullptr)) sc->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (app.got_subcommand(classify_cmd)) return run_classify(op_path, at, io);
        if (app.got_subcommand(conn_cmd)) return run_connection(op_path, y0, io);
        if (app.got_subcommand(sym_cmd)) return run_symbols(op_path, y0, io);
        if (app.got_subcommand(inv_cmd)) return run_invariants(op_path, names, y0, io);
        if (app.got_subcommand(desc_cmd))
            return run_descend(seeds, jet_order, depth, op_path, at, io);
        if (app.got_subcommand(eq_cmd))
            return run_equiv(op_path, op_b_path, y0, y0b, names, z1, z2, dom_a, dom_b,
                             grid, tol, report, io);
        if (app.got_subcommand(or_cmd)) {
            if (!symbolic && op_path.empty())
                throw std::invalid_argument("oracle1d needs --op or --symbolic");
            return run_oracle1d(op_path, symbolic, y0, io);
        }
        return 2;
    } catch (const math_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::invalid_argument& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
