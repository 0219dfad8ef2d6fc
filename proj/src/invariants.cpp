#include "diffinv/invariants.hpp"

#include "diffinv/error.hpp"

namespace diffinv {

namespace {

[[noreturn]] void bad_name(const std::string& n) {
    throw std::invalid_argument("unknown invariant name: " + n);
}

} // namespace

InvariantSpec InvariantSpec::parse(const std::string& name) {
    if (name == "I0") return {Kind::I0, {}};
    if (name == "I1") return {Kind::I1, {}};
    if (name == "I2") return {Kind::I2, {}};
    if (name == "I3") return {Kind::I3, {}};
    if (name.rfind("BOX:", 0) == 0)
        return {Kind::Box, {parse(name.substr(4))}};
    if (name.rfind("TRESSE:", 0) == 0) {
        std::string rest = name.substr(7);
        size_t semi = rest.find(';');
        if (semi == std::string::npos) bad_name(name);
        std::string j = rest.substr(0, semi);
        std::string ab = rest.substr(semi + 1);
        size_t comma = ab.find(',');
        if (comma == std::string::npos) bad_name(name);
        return {Kind::Tresse,
                {parse(j), parse(ab.substr(0, comma)), parse(ab.substr(comma + 1))}};
    }
    bad_name(name);
}

std::string InvariantSpec::name() const {
    switch (kind) {
        case Kind::I0: return "I0";
        case Kind::I1: return "I1";
        case Kind::I2: return "I2";
        case Kind::I3: return "I3";
        case Kind::Box: return "BOX:" + args[0].name();
        case Kind::Tresse:
            return "TRESSE:" + args[0].name() + ";" + args[1].name() + "," +
                   args[2].name();
    }
    return "?";
}

Rat invariant_I0(const LinDiffOp& A) { return A.coeff(MIdx((size_t)A.dim, 0)); }

Rat invariant_I1(const LinDiffOp& A, const DiffCtx& ctx) {
    TotalSymbol ts = total_symbol(A, ctx);
    Covector th = torsion_form(ts.gamma);
    Rat acc(ctx.vars);
    for (int i = 0; i < A.dim; ++i) {
        MIdx e((size_t)A.dim, 0);
        e[(size_t)i] = 1;
        acc = acc + th.comp[(size_t)i] * ts.s1.coeff(e);
    }
    return acc;
}

SymTensor da0_power(const Rat& a0, int k, const DiffCtx& ctx) {
    SymTensor f{ctx.dim, k, Variance::Form, ctx.vars, {}};
    std::vector<Rat> d;
    for (int i = 0; i < ctx.dim; ++i) d.push_back(ctx.d(a0, i));
    static const long fact[4] = {1, 1, 2, 6};
    for (const auto& a : all_midx(ctx.dim, (unsigned)k)) {
        if ((int)midx_order(a) != k) continue;
        Rat c(ctx.vars, qq_of(fact[k], (long)midx_factorial(a)));
        for (int i = 0; i < ctx.dim; ++i)
            for (unsigned n = 0; n < a[(size_t)i]; ++n) c = c * d[(size_t)i];
        f.set_coeff(a, c);
    }
    return f;
}

const TotalSymbol& InvariantEvaluator::peeled() {
    if (!ts_) ts_ = total_symbol(oc_.op, oc_.ctx);
    return *ts_;
}

std::vector<std::pair<std::string, Rat>> InvariantEvaluator::eval(const InvariantSpec& s) {
    using K = InvariantSpec::Kind;
    const int dim = oc_.op.dim;
    switch (s.kind) {
        case K::I0: return {{s.name(), invariant_I0(oc_.op)}};
        case K::I1: {
            const TotalSymbol& ts = peeled();
            if (dim == 1) {
                Rat v = pairing(ts.s1, da0_power(ts.s0, 1, oc_.ctx));
                return {{s.name(), v}};
            }
            Covector th = torsion_form(ts.gamma);
            Rat acc(oc_.ctx.vars);
            for (int i = 0; i < dim; ++i) {
                MIdx e((size_t)dim, 0);
                e[(size_t)i] = 1;
                acc = acc + th.comp[(size_t)i] * ts.s1.coeff(e);
            }
            return {{s.name(), acc}};
        }
        case K::I2: {
            if (dim == 1) {
                const TotalSymbol& ts = peeled();
                return {{s.name(), pairing(ts.s2, da0_power(ts.s0, 2, oc_.ctx))}};
            }
            InvariantSpec boxed{K::Box, {InvariantSpec{K::I1, {}}}};
            Rat v = eval_scalar(boxed);
            return {{s.name(), v}};
        }
        case K::I3: {
            if (dim != 1) throw std::invalid_argument("I3 is a 1-D invariant");
            const TotalSymbol& ts = peeled();
            return {{s.name(), pairing(ts.s3, da0_power(ts.s0, 3, oc_.ctx))}};
        }
        case K::Box: {
            Rat inner = eval_scalar(s.args[0]);
            return {{s.name(), box3(oc_.op, inner, oc_.ctx)}};
        }
        case K::Tresse: {
            Rat j = eval_scalar(s.args[0]);
            Rat i1 = eval_scalar(s.args[1]);
            Rat i2 = eval_scalar(s.args[2]);
            auto [d1, d2] = tresse_derivatives(j, i1, i2, oc_.ctx);
            return {{s.name() + "#1", d1}, {s.name() + "#2", d2}};
        }
    }
    throw std::logic_error("unhandled invariant kind");
}

Rat InvariantEvaluator::eval_scalar(const InvariantSpec& s) {
    auto v = eval(s);
    if (v.size() != 1)
        throw std::invalid_argument("invariant '" + s.name() + "' is multi-valued here");
    return v[0].second;
}

} // namespace diffinv
