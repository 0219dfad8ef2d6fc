#include "diffinv/quantize.hpp"

#include "diffinv/error.hpp"
#include "diffinv/expr_io.hpp"
#include "diffinv/linalg.hpp"

namespace diffinv {

namespace {

std::string fresh_name(const VarSet& vs, std::string base) {
    while (vs.index_of(base)) base = "_" + base;
    return base;
}

// group the terms of p by their exponents on the given variables; the
// denominator must be free of them (true for every use below).
std::map<MIdx, Rat> collect(const Rat& p, const std::vector<size_t>& vars_to_group,
                            const VarSet& vs) {
    for (size_t v : vars_to_group)
        if (p.den().depends_on(v))
            throw std::logic_error("collect: denominator not free of fiber variables");
    std::map<MIdx, Poly> groups;
    for (const auto& [e, c] : p.num().terms()) {
        MIdx key;
        Exp rest = e;
        for (size_t v : vars_to_group) {
            key.push_back(e[v]);
            rest[v] = 0;
        }
        auto it = groups.find(key);
        if (it == groups.end()) it = groups.emplace(key, Poly(vs)).first;
        it->second.add_term(rest, c);
    }
    std::map<MIdx, Rat> out;
    for (auto& [k, num] : groups) out.emplace(k, Rat::make(std::move(num), p.den()));
    return out;
}

} // namespace

Rat sym_derivation(const Connection& G, const DiffCtx& ctx,
                   const std::vector<size_t>& wvars, const Rat& p) {
    const int dim = ctx.dim;
    if ((int)wvars.size() != dim) throw std::invalid_argument("need one w per dimension");
    Rat acc(ctx.vars);
    for (int i = 0; i < dim; ++i)
        acc = acc + Rat::variable(ctx.vars, wvars[(size_t)i]) * ctx.d(p, i);
    for (int k = 0; k < dim; ++k) {
        if (!p.depends_on(wvars[(size_t)k])) continue;
        Rat quad(ctx.vars);
        for (int m = 0; m < dim; ++m)
            for (int l = 0; l < dim; ++l) {
                const Rat& gm = G.at(k, m, l);
                if (gm.is_zero()) continue;
                quad = quad + gm.with_vars(ctx.vars) *
                                  Rat::variable(ctx.vars, wvars[(size_t)m]) *
                                  Rat::variable(ctx.vars, wvars[(size_t)l]);
            }
        acc = acc - quad * p.derivative(wvars[(size_t)k]);
    }
    return acc;
}

LinDiffOp quantize(const SymTensor& alpha, const Connection& G, const DiffCtx& ctx) {
    const int dim = alpha.dim;
    const int k = alpha.degree;
    if (k > 3) throw std::invalid_argument("quantize: degree > 3");
    if (alpha.is_zero()) return LinDiffOp{dim, ctx.vars, {}};

    // extend with fiber variables and jet symbols of h
    std::vector<std::string> extra;
    for (int i = 0; i < dim; ++i)
        extra.push_back(fresh_name(ctx.vars, "_w" + std::to_string(i + 1)));
    auto hs = all_midx(dim, (unsigned)k);
    for (const auto& b : hs) {
        std::string n = "_h";
        for (unsigned x : b) n += std::to_string(x);
        extra.push_back(fresh_name(ctx.vars, n));
    }
    VarSet evs = ctx.vars.extended(extra);
    DiffCtx ectx = ctx.with_vars(evs);
    std::vector<size_t> wv;
    for (int i = 0; i < dim; ++i) wv.push_back(ctx.vars.size() + (size_t)i);
    std::map<MIdx, size_t> hv;
    for (size_t i = 0; i < hs.size(); ++i)
        hv[hs[i]] = ctx.vars.size() + (size_t)dim + i;
    // jet shift rules: d_i h_beta = h_{beta + e_i} (order k never queried)
    for (const auto& [b, idx] : hv) {
        if ((int)midx_order(b) >= k) continue;
        std::vector<Rat> rule;
        for (int i = 0; i < dim; ++i) {
            MIdx up = b;
            ++up[(size_t)i];
            rule.push_back(Rat::variable(evs, hv.at(up)));
        }
        ectx.jet.emplace(idx, std::move(rule));
    }

    Rat p = Rat::variable(evs, hv.at(MIdx((size_t)dim, 0)));
    for (int step = 0; step < k; ++step) p = sym_derivation(G, ectx, wv, p);

    // <alpha, p> = sum_gamma gamma! alpha_gamma [w^gamma] p, then /k!
    auto by_w = collect(p, wv, evs);
    Rat paired(evs);
    for (const auto& [g, val] : by_w) {
        Rat ag = alpha.coeff(g);
        if (ag.is_zero()) continue;
        paired = paired + ag.with_vars(evs) * val.mul_scalar(QQ((long)midx_factorial(g)));
    }
    static const long fact[4] = {1, 1, 2, 6};
    paired = paired.mul_scalar(qq_of(1, fact[k]));

    // read operator coefficients: paired is linear in the h symbols
    std::vector<size_t> hlist;
    for (const auto& [b, idx] : hv) hlist.push_back(idx);
    auto by_h = collect(paired, hlist, evs);
    LinDiffOp Q{dim, ctx.vars, {}};
    std::vector<size_t> keep;
    for (size_t i = 0; i < ctx.vars.size(); ++i) keep.push_back(i);
    std::vector<MIdx> horder;
    for (const auto& [b, idx] : hv) horder.push_back(b);
    for (const auto& [key, val] : by_h) {
        if (val.is_zero()) continue;
        unsigned total = 0;
        MIdx beta;
        for (size_t i = 0; i < key.size(); ++i) {
            if (key[i] == 0) continue;
            if (key[i] != 1 || total > 0)
                throw std::logic_error("quantize: nonlinear in jet symbols");
            total = 1;
            beta = horder[i];
        }
        if (total == 0) throw std::logic_error("quantize: stray jet-free term");
        Q.set_coeff(beta, val.restricted(ctx.vars, keep));
    }
    return Q;
}

TotalSymbol total_symbol(const LinDiffOp& A, const DiffCtx& ctx) {
    SymTensor s3 = symbol3(A);
    Connection G = wagner_connection(s3, ctx);
    LinDiffOp rest = A - quantize(s3, G, ctx);
    if (!symbol_slice(rest, 3).is_zero())
        throw std::logic_error("peeling failed to remove order 3");
    SymTensor s2 = symbol_slice(rest, 2);
    rest = rest - quantize(s2, G, ctx);
    SymTensor s1 = symbol_slice(rest, 1);
    rest = rest - quantize(s1, G, ctx);
    for (int d = 1; d <= 3; ++d)
        if (!symbol_slice(rest, d).is_zero())
            throw std::logic_error("peeling left a higher-order remainder");
    TotalSymbol ts{std::move(s3), std::move(s2), std::move(s1),
                   rest.coeff(MIdx((size_t)A.dim, 0)), std::move(G)};
    return ts;
}

TotalSymbol total_symbol(const LinDiffOp& A) {
    return total_symbol(A, DiffCtx::plain(A.vars, A.dim));
}

LinDiffOp quantize_total(const TotalSymbol& ts, const DiffCtx& ctx) {
    LinDiffOp A = quantize(ts.s3, ts.gamma, ctx) + quantize(ts.s2, ts.gamma, ctx) +
                  quantize(ts.s1, ts.gamma, ctx);
    A.set_coeff(MIdx((size_t)A.dim, 0), A.coeff(MIdx((size_t)A.dim, 0)) + ts.s0);
    return A;
}

Rat box3(const LinDiffOp& A, const Rat& h, const DiffCtx& ctx) {
    Rat hh = h.vars() == ctx.vars ? h : h.with_vars(ctx.vars);
    Rat acc(ctx.vars);
    for (const auto& [a, c] : A.coeffs) {
        Rat d = hh;
        for (int i = 0; i < A.dim; ++i)
            for (unsigned n = 0; n < a[(size_t)i]; ++n) d = ctx.d(d, i);
        acc = acc + c.with_vars(ctx.vars) * d;
    }
    return acc;
}

std::pair<Rat, Rat> tresse_derivatives(const Rat& J, const Rat& I1, const Rat& I2,
                                       const DiffCtx& ctx) {
    if (ctx.dim != 2) throw std::invalid_argument("Tresse derivatives need dim 2");
    std::vector<std::vector<Rat>> M = {{ctx.d(I1, 0), ctx.d(I2, 0)},
                                       {ctx.d(I1, 1), ctx.d(I2, 1)}};
    Rat jac = M[0][0] * M[1][1] - M[0][1] * M[1][0];
    if (jac.is_zero())
        throw general_position_error("invariants are not in general position",
                                     to_string(jac));
    auto x = solve_unique(M, {ctx.d(J, 0), ctx.d(J, 1)});
    return {x[0], x[1]};
}

} // namespace diffinv
