#include "diffinv/descent.hpp"

#include <algorithm>

#include "diffinv/error.hpp"
#include "diffinv/expr_io.hpp"

namespace diffinv {

namespace {

std::string word_name(const std::string& base, unsigned nx, unsigned ny) {
    if (nx + ny == 0) return base;
    std::string s = base + "_";
    for (unsigned i = 0; i < nx; ++i) s += "x";
    for (unsigned i = 0; i < ny; ++i) s += "y";
    return s;
}

std::string fjet_name(const MIdx& b) {
    std::string s = "f";
    if (b.size() == 1) {
        s += std::to_string(b[0]);
    } else {
        for (unsigned x : b) s += std::to_string(x);
    }
    return s;
}

constexpr int kJetHeadroom = 8;

} // namespace

Rat PairCtx::nabla(const Rat& p) const {
    dctx.check_frontier(p);
    Rat r = p.derivative(y_index);
    for (const auto& [v, shift] : ysh) {
        if (!p.depends_on(v)) continue;
        r = r + p.derivative(v) * shift;
    }
    return r;
}

std::shared_ptr<const PairCtx> pair_context(const OperatorFamily& fam, int jet_order) {
    if (jet_order < 1) throw std::invalid_argument("jet order must be >= 1");
    auto pc = std::make_shared<PairCtx>();
    pc->dim = fam.dim;
    pc->jet_order = jet_order;

    int top = jet_order + kJetHeadroom;
    std::vector<std::string> extra;
    std::vector<MIdx> jets;
    for (const auto& b : all_midx(fam.dim, (unsigned)top))
        if (midx_order(b) >= 1) jets.push_back(b);
    std::sort(jets.begin(), jets.end(), [](const MIdx& a, const MIdx& b) {
        if (midx_order(a) != midx_order(b)) return midx_order(a) < midx_order(b);
        return a < b;
    });
    for (const auto& b : jets) extra.push_back(fjet_name(b));
    pc->vars = fam.vars.extended(extra);
    pc->y_index = fam.y_index;

    pc->dctx = DiffCtx::plain(pc->vars, fam.dim);
    std::map<MIdx, size_t> idx;
    for (const auto& b : jets) idx[b] = pc->vars.require(fjet_name(b));
    pc->fjet = idx;
    // chain rule through y = f(x)
    {
        std::vector<Rat> rule;
        for (int i = 0; i < fam.dim; ++i) {
            MIdx e((size_t)fam.dim, 0);
            e[(size_t)i] = 1;
            rule.push_back(Rat::variable(pc->vars, idx.at(e)));
        }
        pc->dctx.jet.emplace(pc->y_index, std::move(rule));
    }
    for (const auto& b : jets) {
        if ((int)midx_order(b) >= top) {
            pc->dctx.frontier.insert(idx.at(b));
            continue;
        }
        std::vector<Rat> rule;
        for (int i = 0; i < fam.dim; ++i) {
            MIdx up = b;
            ++up[(size_t)i];
            rule.push_back(Rat::variable(pc->vars, idx.at(up)));
        }
        pc->dctx.jet.emplace(idx.at(b), std::move(rule));
    }
    return pc;
}

SymbolicFamily symbolic_family_1d(int jet_depth, int jet_order) {
    if (jet_depth < 1) throw std::invalid_argument("jet depth must be >= 1");
    std::vector<std::string> names = {"x", "y"};
    const std::vector<std::string> coeffs = {"a3", "a2", "a1", "a0"};
    for (const auto& c : coeffs)
        for (int t = 0; t <= jet_depth; ++t)
            for (int ny = 0; ny <= t; ++ny) names.push_back(word_name(c, (unsigned)(t - ny), (unsigned)ny));
    VarSet base(names);

    OperatorFamily fam{1, base, 1, {}};
    fam.set_coeff({3}, Rat::variable(base, base.require("a3")));
    fam.set_coeff({2}, Rat::variable(base, base.require("a2")));
    fam.set_coeff({1}, Rat::variable(base, base.require("a1")));
    fam.set_coeff({0}, Rat::variable(base, base.require("a0")));

    auto pc_const = pair_context(fam, jet_order);
    auto pc = std::make_shared<PairCtx>(*pc_const);
    const VarSet& vs = pc->vars;
    Rat f1 = Rat::variable(vs, pc->fjet.at(MIdx{1}));
    for (const auto& c : coeffs)
        for (int t = 0; t <= jet_depth; ++t)
            for (int ny = 0; ny <= t; ++ny) {
                unsigned nx = (unsigned)(t - ny);
                size_t v = vs.require(word_name(c, nx, (unsigned)ny));
                if (t == jet_depth) {
                    pc->dctx.frontier.insert(v);
                    continue;
                }
                Rat dx = Rat::variable(vs, vs.require(word_name(c, nx + 1, (unsigned)ny)));
                Rat dy = Rat::variable(vs, vs.require(word_name(c, nx, (unsigned)ny + 1)));
                pc->dctx.jet.emplace(v, std::vector<Rat>{dx + dy * f1});
                pc->ysh.emplace(v, dy);
            }
    SymbolicFamily out;
    out.fam = fam;
    out.ctx = pc;
    return out;
}

Rat family_invariant(const InvariantSpec& spec, const OperatorFamily& fam) {
    LinDiffOp op{fam.dim, fam.vars, fam.coeffs};
    InvariantEvaluator ev({op, DiffCtx::plain(fam.vars, fam.dim)});
    return ev.eval_scalar(spec);
}

PairInvariant pair_invariant(const InvariantSpec& spec, const OperatorFamily& fam,
                             int jet_order) {
    auto pc = pair_context(fam, jet_order);
    LinDiffOp op{fam.dim, pc->vars, {}};
    for (const auto& [a, c] : fam.coeffs) op.set_coeff(a, c.with_vars(pc->vars));
    InvariantEvaluator ev({op, pc->dctx});
    return PairInvariant{ev.eval_scalar(spec), pc};
}

PairInvariant pair_invariant(const InvariantSpec& spec, const SymbolicFamily& fam) {
    LinDiffOp op{fam.fam.dim, fam.ctx->vars, {}};
    for (const auto& [a, c] : fam.fam.coeffs) op.set_coeff(a, c.with_vars(fam.ctx->vars));
    InvariantEvaluator ev({op, fam.ctx->dctx});
    return PairInvariant{ev.eval_scalar(spec), fam.ctx};
}

PairInvariant nabla(const PairInvariant& p) {
    return PairInvariant{p.ctx->nabla(p.value), p.ctx};
}

std::string to_string(const Relation& r) {
    if (r.terms.empty()) return "0";
    std::vector<std::pair<Exp, Rat>> terms(r.terms.begin(), r.terms.end());
    std::sort(terms.begin(), terms.end(), [](const auto& a, const auto& b) {
        return a.first > b.first; // lex descending in X0, X1, ...
    });
    std::string out;
    for (const auto& [e, c] : terms) {
        std::string mono;
        for (size_t i = 0; i < e.size(); ++i) {
            if (!e[i]) continue;
            if (!mono.empty()) mono += "*";
            mono += r.x_names[i];
            if (e[i] > 1) mono += "^" + std::to_string(e[i]);
        }
        std::string cs = to_string(c);
        if (!out.empty()) out += " + ";
        if (mono.empty())
            out += "(" + cs + ")";
        else if (c.is_one())
            out += mono;
        else
            out += "(" + cs + ")*" + mono;
    }
    return out;
}

DescentResult descend(const std::vector<PairInvariant>& seeds) {
    if (seeds.empty()) throw std::invalid_argument("descend: no seeds");
    auto ctx = seeds.front().ctx;
    for (const auto& s : seeds)
        if (s.ctx != ctx) throw std::invalid_argument("descend: mixed contexts");

    // eliminate exactly the occurring jet variables (y is the 0-jet)
    std::vector<size_t> work;
    std::vector<size_t> candidates;
    candidates.push_back(ctx->y_index);
    for (const auto& [b, v] : ctx->fjet) candidates.push_back(v);
    std::sort(candidates.begin(), candidates.end());
    for (size_t v : candidates) {
        bool occurs = false;
        for (const auto& s : seeds)
            if (s.value.depends_on(v)) occurs = true;
        if (occurs) work.push_back(v);
    }

    std::vector<Rat> maps;
    for (const auto& s : seeds) maps.push_back(s.value);
    RelationIdeal rel = relations_ideal(maps, work);

    DescentResult out;
    {
        std::vector<std::string> pn;
        for (size_t v : rel.p_vars) pn.push_back(rel.ring.name(v));
        out.params = VarSet(pn);
    }
    if (rel.gens.empty()) {
        out.no_relations = true;
        return out;
    }

    std::vector<std::string> xn;
    for (size_t v : rel.x_vars) xn.push_back(rel.ring.name(v));

    // reinterpret over the field of parameter rational functions
    std::vector<engine::KPoly<Rat>> kgens;
    for (const auto& g : rel.gens) {
        engine::KPoly<Rat> kp;
        for (const auto& [e, c] : g.terms()) {
            Exp xe(rel.x_vars.size(), 0);
            for (size_t i = 0; i < rel.x_vars.size(); ++i) xe[i] = e[rel.x_vars[i]];
            Exp pe(out.params.size(), 0);
            for (size_t i = 0; i < rel.p_vars.size(); ++i) pe[i] = e[rel.p_vars[i]];
            for (size_t v = 0; v < e.size(); ++v) {
                bool known = std::find(rel.x_vars.begin(), rel.x_vars.end(), v) !=
                                 rel.x_vars.end() ||
                             std::find(rel.p_vars.begin(), rel.p_vars.end(), v) !=
                                 rel.p_vars.end();
                if (!known && e[v])
                    throw std::logic_error("descend: eliminated variable survived");
            }
            engine::add_term(kp, xe, Rat::from_poly(Poly::term(out.params, pe, c)));
        }
        kgens.push_back(std::move(kp));
    }
    MonomialOrder xlex(OrderKind::Lex, [&] {
        std::vector<size_t> p(rel.x_vars.size());
        for (size_t i = 0; i < p.size(); ++i) p[i] = i;
        return p;
    }());
    auto reduced = engine::buchberger_k(std::move(kgens), xlex);

    for (const auto& kp : reduced) {
        Relation r{kp, xn};
        out.relations.push_back(r);
    }
    for (size_t ri = 0; ri < out.relations.size(); ++ri) {
        std::vector<std::pair<Exp, Rat>> terms(out.relations[ri].terms.begin(),
                                               out.relations[ri].terms.end());
        std::sort(terms.begin(), terms.end(),
                  [](const auto& a, const auto& b) { return a.first > b.first; });
        for (const auto& [e, c] : terms) {
            std::string mono;
            for (size_t i = 0; i < e.size(); ++i) {
                if (!e[i]) continue;
                if (!mono.empty()) mono += "*";
                mono += xn[i];
                if (e[i] > 1) mono += "^" + std::to_string(e[i]);
            }
            if (mono.empty()) mono = "1";
            out.invariants.emplace_back(
                "b" + std::to_string(ri + 1) + "[" + mono + "]", c);
        }
    }
    return out;
}

DescentResult descend_chain(const PairInvariant& seed, int n) {
    std::vector<PairInvariant> seeds{seed};
    for (int i = 0; i < n; ++i) seeds.push_back(nabla(seeds.back()));
    return descend(seeds);
}

std::vector<Rat> descent_residuals(const DescentResult& d,
                                   const std::vector<PairInvariant>& seeds) {
    std::vector<Rat> out;
    if (seeds.empty()) return out;
    const VarSet& vs = seeds.front().ctx->vars;
    for (const auto& r : d.relations) {
        Rat acc(vs);
        for (const auto& [e, c] : r.terms) {
            Rat t = c.with_vars(vs);
            for (size_t i = 0; i < e.size(); ++i)
                for (unsigned k = 0; k < e[i]; ++k) t = t * seeds[i].value;
            acc = acc + t;
        }
        out.push_back(acc);
    }
    return out;
}

namespace {

struct Linear1D {
    LinDiffOp op;
    DiffCtx ctx;
};

// 1-D operator with opaque coefficient symbols depending on x only.
Linear1D symbolic_linear_1d(int depth) {
    std::vector<std::string> names = {"x"};
    const std::vector<std::string> coeffs = {"a3", "a2", "a1", "a0"};
    for (const auto& c : coeffs)
        for (int t = 0; t <= depth; ++t) names.push_back(word_name(c, (unsigned)t, 0));
    VarSet vs(names);
    Linear1D out{LinDiffOp{1, vs, {}}, DiffCtx::plain(vs, 1)};
    out.op.set_coeff({3}, Rat::variable(vs, vs.require("a3")));
    out.op.set_coeff({2}, Rat::variable(vs, vs.require("a2")));
    out.op.set_coeff({1}, Rat::variable(vs, vs.require("a1")));
    out.op.set_coeff({0}, Rat::variable(vs, vs.require("a0")));
    for (const auto& c : coeffs)
        for (int t = 0; t <= depth; ++t) {
            size_t v = vs.require(word_name(c, (unsigned)t, 0));
            if (t == depth) {
                out.ctx.frontier.insert(v);
            } else {
                out.ctx.jet.emplace(
                    v, std::vector<Rat>{
                           Rat::variable(vs, vs.require(word_name(c, (unsigned)t + 1, 0)))});
            }
        }
    return out;
}

struct OracleInput {
    LinDiffOp op;
    DiffCtx ctx;
    Rat a3, a2, a1, a0;
};

void push_item(OracleReport& rep, const std::string& name, const Rat& pipeline,
               const Rat& printed) {
    rep.items.push_back(
        {name, to_string(pipeline), to_string(printed), pipeline == printed});
}

// Items shared by the concrete and the symbolic oracle.
OracleReport oracle_items(const OracleInput& in) {
    OracleReport rep;
    const DiffCtx& ctx = in.ctx;
    const VarSet& vs = ctx.vars;
    auto D = [&](const Rat& e) { return ctx.d(e, 0); };
    Rat a3 = in.a3, a2 = in.a2, a1 = in.a1, a0 = in.a0;
    Rat three(vs, QQ(3)), nine(vs, QQ(9)), two(vs, QQ(2));

    TotalSymbol ts = total_symbol(in.op, ctx);

    // connection
    Rat gamma_printed = -D(a3) / (three * a3);
    push_item(rep, "Gamma", ts.gamma.at(0, 0, 0), gamma_printed);

    // quantized third-order symbol
    LinDiffOp q3 = quantize(ts.s3, ts.gamma, ctx);
    push_item(rep, "sigma3hat[d^2]", q3.coeff({2}), D(a3));
    Rat printed_s3h1 = (two * D(a3).pow(2) * a3 + three * D(a3) - D(D(a3)) * a3) /
                       (nine * a3);
    push_item(rep, "sigma3hat[d^1]", q3.coeff({1}), printed_s3h1);

    // quantized second-order symbol
    LinDiffOp q2 = quantize(ts.s2, ts.gamma, ctx);
    Rat s2c = a2 - D(a3);
    push_item(rep, "sigma2hat[d^2]", q2.coeff({2}), s2c);
    push_item(rep, "sigma2hat[d^1]", q2.coeff({1}), s2c * D(a3) / (three * a3));

    // first subsymbol
    Rat printed_s1 = a1 - printed_s3h1 - s2c * D(a3) / (three * a3);
    push_item(rep, "sigma1", ts.s1.coeff({1}), printed_s1);

    // scalar invariants; the pairing contributes k! which is divided out
    InvariantEvaluator ev({in.op, ctx});
    push_item(rep, "I0", ev.eval_scalar(InvariantSpec::parse("I0")), a0);
    push_item(rep, "I1", ev.eval_scalar(InvariantSpec::parse("I1")),
              printed_s1 * D(a0));
    push_item(rep, "I2/2!",
              ev.eval_scalar(InvariantSpec::parse("I2")).mul_scalar(qq_of(1, 2)),
              s2c * D(a0).pow(2));
    push_item(rep, "I3/3!",
              ev.eval_scalar(InvariantSpec::parse("I3")).mul_scalar(qq_of(1, 6)),
              a3 * D(a0).pow(3));
    return rep;
}

} // namespace

bool OracleReport::all_equal() const {
    return std::all_of(items.begin(), items.end(),
                       [](const OracleItem& i) { return i.equal; });
}

OracleReport oracle_1d(const LinDiffOp& A) {
    if (A.dim != 1) throw std::invalid_argument("oracle_1d needs a 1-D operator");
    OracleInput in{A, DiffCtx::plain(A.vars, 1), A.coeff({3}), A.coeff({2}),
                   A.coeff({1}), A.coeff({0})};
    return oracle_items(in);
}

std::map<std::string, Rat> coefficient_jet_values(const OperatorFamily& fam, int depth) {
    if (fam.dim != 1) throw std::invalid_argument("coefficient jets are 1-D here");
    std::map<std::string, Rat> out;
    const std::vector<std::pair<std::string, MIdx>> coeffs = {
        {"a3", {3}}, {"a2", {2}}, {"a1", {1}}, {"a0", {0}}};
    for (const auto& [base, idx] : coeffs) {
        Rat c = fam.coeff(idx);
        for (int t = 0; t <= depth; ++t)
            for (int ny = 0; ny <= t; ++ny) {
                unsigned nx = (unsigned)(t - ny);
                Rat v = c;
                for (unsigned i = 0; i < nx; ++i) v = v.derivative(0);
                for (int i = 0; i < ny; ++i) v = v.derivative(fam.y_index);
                out.emplace(word_name(base, nx, (unsigned)ny), v);
            }
    }
    return out;
}

OracleReport oracle_1d_symbolic() {
    Linear1D lin = symbolic_linear_1d(4);
    const VarSet& vs = lin.ctx.vars;
    OracleInput in{lin.op, lin.ctx, Rat::variable(vs, vs.require("a3")),
                   Rat::variable(vs, vs.require("a2")),
                   Rat::variable(vs, vs.require("a1")),
                   Rat::variable(vs, vs.require("a0"))};
    OracleReport rep = oracle_items(in);

    // related-pair first invariant, printed form (reported, never asserted)
    SymbolicFamily fam = symbolic_family_1d(3, 1);
    PairInvariant i1 = pair_invariant(InvariantSpec::parse("I1"), fam);
    const VarSet& pv = fam.ctx->vars;
    auto v = [&](const std::string& n) { return Rat::variable(pv, pv.require(n)); };
    Rat f1 = v("f1"), f2 = v("f2");
    Rat a3 = v("a3"), a2p = v("a2"), a1p = v("a1");
    Rat d3 = v("a3_x") + v("a3_y") * f1;
    Rat nine(pv, QQ(9)), three(pv, QQ(3)), two(pv, QQ(2));
    Rat printed =
        (a1p - (two * d3.pow(2) * a3 + three * d3) / (nine * a3) -
         ((v("a3_xx") + two * v("a3_xy") * f1 + v("a3_yy") * f1.pow(2) +
           (v("a3_x") + v("a3_y")) * f2) *
          a3) /
             (nine * a3) -
         (a2p - d3) * d3 / (three * a3)) *
        (v("a0_x") + v("a0_y") * f1);
    rep.items.push_back({"pair_I1", to_string(i1.value), to_string(printed),
                         i1.value == printed});
    return rep;
}

} // namespace diffinv
