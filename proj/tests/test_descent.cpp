#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "diffinv/descent.hpp"
#include "diffinv/expr_io.hpp"

using namespace diffinv;

namespace {

const VarSet X1Y({"x", "y"});
const VarSet X1({"x"});

Rat rr(const std::string& s, const VarSet& vs) { return parse_expr(s, vs); }

OperatorFamily family1d(const std::string& a3, const std::string& a2,
                        const std::string& a1, const std::string& a0) {
    OperatorFamily f{1, X1Y, 1, {}};
    f.set_coeff({3}, rr(a3, X1Y));
    f.set_coeff({2}, rr(a2, X1Y));
    f.set_coeff({1}, rr(a1, X1Y));
    f.set_coeff({0}, rr(a0, X1Y));
    return f;
}

} // namespace

TEST_CASE("family_invariant treats y as a parameter") {
    OperatorFamily f = family1d("1", "0", "0", "y*x");
    CHECK(family_invariant(InvariantSpec::parse("I0"), f) == rr("y*x", X1Y));

    // y-independent family agrees with the ordinary invariant
    OperatorFamily g = family1d("1", "x", "0", "x^2");
    LinDiffOp op = make_op1d(X1, rr("1", X1), rr("x", X1), rr("0", X1), rr("x^2", X1));
    InvariantEvaluator ev({op, DiffCtx::plain(X1, 1)});
    Rat fam = family_invariant(InvariantSpec::parse("I2"), g);
    Rat ord = ev.eval_scalar(InvariantSpec::parse("I2"));
    CHECK(fam == ord.with_vars(X1Y));

    // I3 with y frozen: pipeline carries the documented 3! factor
    OperatorFamily h = family1d("1", "0", "0", "x*y");
    Rat i3 = family_invariant(InvariantSpec::parse("I3"), h);
    CHECK(i3.mul_scalar(qq_of(1, 6)) == rr("y^3", X1Y));
}

TEST_CASE("pair_invariant: symbolic 1-D formulas") {
    SymbolicFamily fam = symbolic_family_1d(3, 1);
    const VarSet& vs = fam.ctx->vars;
    auto v = [&](const std::string& n) { return Rat::variable(vs, vs.require(n)); };
    Rat u = v("a0_x") + v("a0_y") * v("f1");

    PairInvariant i3 = pair_invariant(InvariantSpec::parse("I3"), fam);
    CHECK(i3.value == v("a3").mul_scalar(QQ(6)) * u.pow(3));

    PairInvariant i2 = pair_invariant(InvariantSpec::parse("I2"), fam);
    Rat q = v("a2") - v("a3_x") - v("a3_y") * v("f1");
    CHECK(i2.value == q.mul_scalar(QQ(2)) * u.pow(2));

    // y-independent concrete family: no jet variables appear
    OperatorFamily g = family1d("1", "x", "0", "x^2");
    PairInvariant p = pair_invariant(InvariantSpec::parse("I2"), g, 1);
    for (const auto& [b, idx] : p.ctx->fjet) CHECK_FALSE(p.value.depends_on(idx));
}

TEST_CASE("nabla") {
    OperatorFamily f = family1d("1", "0", "0", "x*y^2");
    auto pc = pair_context(f, 2);
    const VarSet& vs = pc->vars;

    // concrete coefficient: plain y-derivative
    PairInvariant a0{rr("x*y^2", X1Y).with_vars(vs), pc};
    CHECK(nabla(a0).value == rr("2*x*y", X1Y).with_vars(vs));

    // prolonged vertical field fixes the jet variables: nabla(y f') = f'
    Rat f1 = Rat::variable(vs, pc->fjet.at(MIdx{1}));
    PairInvariant yf{Rat::variable(vs, pc->y_index) * f1, pc};
    CHECK(nabla(yf).value == f1);

    // derivation property on random pairs
    std::mt19937 rng(5150);
    auto rnd = [&] {
        Poly p(vs);
        for (int t = 0; t < 3; ++t) {
            Exp e(vs.size(), 0);
            e[0] = rng() % 2;
            e[1] = rng() % 2;
            e[pc->fjet.at(MIdx{1})] = rng() % 2;
            p.add_term(e, QQ((long)(rng() % 5) - 2));
        }
        return Rat::from_poly(p);
    };
    for (int t = 0; t < 20; ++t) {
        Rat p = rnd(), q = rnd();
        CHECK(pc->nabla(p * q) == pc->nabla(p) * q + p * pc->nabla(q));
    }

    // symbolic coefficients shift their jet words
    SymbolicFamily sf = symbolic_family_1d(2, 1);
    const VarSet& sv = sf.ctx->vars;
    PairInvariant sa{Rat::variable(sv, sv.require("a0")), sf.ctx};
    CHECK(nabla(sa).value == Rat::variable(sv, sv.require("a0_y")));

    // sanity anchor: a y-independent value with no jet variables has zero
    // invariant derivative
    PairInvariant flat{rr("x^2+1", X1Y).with_vars(vs), pc};
    CHECK(nabla(flat).value.is_zero());
}

TEST_CASE("specialization consistency") {
    std::mt19937 rng(8086);
    auto rs = [&](int c) { return QQ((long)(rng() % (2 * c + 1)) - c); };
    for (int t = 0; t < 10; ++t) {
        // random concrete family and graph function
        OperatorFamily A{1, X1Y, 1, {}};
        A.set_coeff({3}, Rat(X1Y, QQ(1)) + rr("x*y", X1Y).mul_scalar(rs(1)));
        A.set_coeff({2}, rr("x", X1Y).mul_scalar(rs(2)));
        A.set_coeff({0}, rr("x+y", X1Y).mul_scalar(rs(2)) + Rat(X1Y, rs(2)));
        Rat f = rr("x^2", X1).mul_scalar(rs(2)) + rr("x", X1).mul_scalar(rs(2)) +
                Rat(X1, rs(2));

        LinDiffOp Af = restrict_family(A, f);
        if (Af.coeff({3}).is_zero()) continue;
        InvariantSpec spec = InvariantSpec::parse((t % 2) ? "I2" : "I3");

        InvariantEvaluator ev({Af, DiffCtx::plain(X1, 1)});
        Rat direct = ev.eval_scalar(spec);

        PairInvariant p = pair_invariant(spec, A, 1);
        // substitute the jet of f (y as the 0-jet)
        std::map<size_t, Rat> bind;
        bind[p.ctx->y_index] = f.with_vars(p.ctx->vars);
        Rat df = f;
        for (int k = 1; k <= p.ctx->jet_order + 8; ++k) {
            df = df.derivative(0);
            bind[p.ctx->fjet.at(MIdx{(unsigned)k})] = df.with_vars(p.ctx->vars);
        }
        Rat specialized = p.value.substitute(bind);
        CHECK(specialized == direct.with_vars(specialized.vars()));
    }
}

TEST_CASE("pair context in dimension two") {
    VarSet X2Y({"x1", "x2", "y"});
    OperatorFamily A{2, X2Y, 2, {}};
    A.set_coeff({2, 1}, parse_expr("1", X2Y));
    A.set_coeff({1, 2}, parse_expr("1", X2Y));
    A.set_coeff({0, 0}, parse_expr("x1*y + x2", X2Y));

    // I0 on related pairs is just a0 with y standing for f
    PairInvariant p = pair_invariant(InvariantSpec::parse("I0"), A, 1);
    CHECK(p.value == parse_expr("x1*y + x2", X2Y).with_vars(p.ctx->vars));

    // the planar jets shift under the graph chain rule: D_1 a0 = a0_x1 + a0_y f10
    Rat d1 = p.ctx->dctx.d(p.value, 0);
    Rat f10 = Rat::variable(p.ctx->vars, p.ctx->fjet.at(MIdx{1, 0}));
    CHECK(d1 == parse_expr("y", X2Y).with_vars(p.ctx->vars) +
                    parse_expr("x1", X2Y).with_vars(p.ctx->vars) * f10);

    // a y-independent planar family has jet-free pair invariants
    OperatorFamily B{2, X2Y, 2, {}};
    B.set_coeff({2, 1}, parse_expr("x1+3", X2Y));
    B.set_coeff({1, 2}, parse_expr("1", X2Y));
    B.set_coeff({1, 0}, parse_expr("1", X2Y));
    PairInvariant q = pair_invariant(InvariantSpec::parse("I1"), B, 1);
    for (const auto& [b, idx] : q.ctx->fjet) CHECK_FALSE(q.value.depends_on(idx));
    CHECK(q.value == family_invariant(InvariantSpec::parse("I1"), B).with_vars(q.ctx->vars));
}

TEST_CASE("descend: toy seeds (f'^2, f'^3)") {
    OperatorFamily f = family1d("1", "0", "0", "y");
    auto pc = pair_context(f, 1);
    Rat f1 = Rat::variable(pc->vars, pc->fjet.at(MIdx{1}));
    DescentResult d = descend({{f1 * f1, pc}, {f1 * f1 * f1, pc}});
    REQUIRE(d.relations.size() == 1);
    CHECK(to_string(d.relations[0]) == "X0^3 + (-1)*X1^2");
    REQUIRE(d.invariants.size() == 2);
    CHECK(d.invariants[0].second.is_one());
    CHECK(d.invariants[1].second == Rat(d.params, QQ(-1)));

    for (const auto& r : descent_residuals(d, {{f1 * f1, pc}, {f1 * f1 * f1, pc}}))
        CHECK(r.is_zero());
}

TEST_CASE("descend: seeds without jet variables give linear relations") {
    SymbolicFamily fam = symbolic_family_1d(2, 1);
    const VarSet& vs = fam.ctx->vars;
    PairInvariant s1{Rat::variable(vs, vs.require("a3")), fam.ctx};
    PairInvariant s2{Rat::variable(vs, vs.require("a2")), fam.ctx};
    DescentResult d = descend({s1, s2});
    REQUIRE(d.relations.size() == 2);
    for (const auto& [name, c] : d.invariants) (void)name;
    for (const auto& r : descent_residuals(d, {s1, s2})) CHECK(r.is_zero());
}

TEST_CASE("descend: the 1-D seed pair (I2, I3)") {
    SymbolicFamily fam = symbolic_family_1d(3, 1);
    PairInvariant i2 = pair_invariant(InvariantSpec::parse("I2"), fam);
    PairInvariant i3 = pair_invariant(InvariantSpec::parse("I3"), fam);
    DescentResult d = descend({i2, i3});
    REQUIRE(d.relations.size() == 1);

    // soundness by resubstitution
    for (const auto& r : descent_residuals(d, {i2, i3})) CHECK(r.is_zero());

    // coefficients involve only the expected parameter symbols
    for (const auto& [name, c] : d.invariants) {
        for (const auto& bad : {"f1", "x", "a1"}) {
            auto idx = d.params.index_of(bad);
            if (idx) CHECK_FALSE(c.depends_on(*idx));
        }
    }

    // cube-root verification: parametrize X0, X1 through u = a0_x + a0_y f'
    VarSet ext = d.params.extended({"_u"});
    auto v = [&](const std::string& n) { return Rat::variable(ext, ext.require(n)); };
    Rat u = v("_u");
    Rat q = v("a2") - v("a3_x") - v("a3_y") * (u - v("a0_x")) / v("a0_y");
    Rat x0 = q.mul_scalar(QQ(2)) * u.pow(2);
    Rat x1 = v("a3").mul_scalar(QQ(6)) * u.pow(3);
    const Relation& rel = d.relations[0];
    Rat acc(ext);
    for (const auto& [e, c] : rel.terms) {
        Rat t = c.with_vars(ext);
        for (unsigned k = 0; k < e[0]; ++k) t = t * x0;
        for (unsigned k = 0; k < e[1]; ++k) t = t * x1;
        acc = acc + t;
    }
    CHECK(acc.is_zero());
}

TEST_CASE("descend_chain: seed plus its invariant derivative") {
    SymbolicFamily fam = symbolic_family_1d(3, 1);
    PairInvariant i3 = pair_invariant(InvariantSpec::parse("I3"), fam);
    DescentResult d = descend_chain(i3, 1); // seeds (I3, nabla I3)
    REQUIRE(d.relations.size() == 1);
    for (const auto& r : descent_residuals(d, {i3, nabla(i3)})) CHECK(r.is_zero());
    // monic in the leading X monomial
    CHECK(d.invariants[0].second.is_one());
}

TEST_CASE("oracle_1d: concrete operators") {
    // constant a3: every item agrees
    LinDiffOp A = make_op1d(X1, rr("1", X1), rr("x", X1), rr("x^2", X1), rr("x", X1));
    OracleReport r = oracle_1d(A);
    CHECK(r.all_equal());

    // a3 = x: the first-order coefficient of the quantized third symbol is
    // flagged, everything else still matches
    LinDiffOp B = make_op1d(X1, rr("x", X1), rr("0", X1), rr("0", X1), rr("x", X1));
    OracleReport rb = oracle_1d(B);
    CHECK_FALSE(rb.all_equal());
    for (const auto& item : rb.items) {
        if (item.name == "sigma3hat[d^1]") {
            CHECK_FALSE(item.equal);
            CHECK(item.pipeline == "(-1/9)/(x)");
        }
        if (item.name == "Gamma") CHECK(item.equal);
        if (item.name == "sigma2hat[d^2]") CHECK(item.equal);
        if (item.name == "I0") CHECK(item.equal);
        if (item.name == "I3/3!") CHECK(item.equal);
    }
}

TEST_CASE("oracle_1d: symbolic comparison") {
    OracleReport r = oracle_1d_symbolic();
    std::map<std::string, bool> res;
    for (const auto& i : r.items) res[i.name] = i.equal;
    CHECK(res.at("Gamma"));
    CHECK(res.at("sigma3hat[d^2]"));
    CHECK(res.at("sigma2hat[d^2]"));
    CHECK(res.at("sigma2hat[d^1]"));
    CHECK(res.at("I0"));
    CHECK(res.at("I2/2!"));
    CHECK(res.at("I3/3!"));
    // the printed first-order coefficient is dimensionally inconsistent;
    // the pipeline value is reported alongside it instead of asserted
    CHECK_FALSE(res.at("sigma3hat[d^1]"));
    CHECK_FALSE(res.at("sigma1"));
    CHECK_FALSE(res.at("I1"));
    CHECK_FALSE(res.at("pair_I1"));
}
