#include "diffinv/groebner.hpp"

#include <algorithm>

#include "diffinv/groebner_engine.hpp"

namespace diffinv {

namespace {

std::vector<size_t> natural_priority(const VarSet& vs) {
    std::vector<size_t> p(vs.size());
    for (size_t i = 0; i < p.size(); ++i) p[i] = i;
    return p;
}

} // namespace

MonomialOrder MonomialOrder::lex(const VarSet& vs) {
    return MonomialOrder(OrderKind::Lex, natural_priority(vs));
}

MonomialOrder MonomialOrder::grlex(const VarSet& vs) {
    return MonomialOrder(OrderKind::GrLex, natural_priority(vs));
}

MonomialOrder MonomialOrder::lex(const VarSet& vs, const std::vector<std::string>& priority) {
    std::vector<size_t> p;
    p.reserve(priority.size());
    for (const auto& n : priority) p.push_back(vs.require(n));
    if (p.size() != vs.size()) throw std::invalid_argument("priority must list every variable");
    return MonomialOrder(OrderKind::Lex, std::move(p));
}

int MonomialOrder::compare(const Exp& a, const Exp& b) const {
    if (kind_ == OrderKind::GrLex) {
        unsigned ta = exp_total(a), tb = exp_total(b);
        if (ta != tb) return ta < tb ? -1 : 1;
    }
    for (size_t v : priority_) {
        if (a[v] != b[v]) return a[v] < b[v] ? -1 : 1;
    }
    return 0;
}

namespace {

engine::KPoly<QQ> to_k(const Poly& p) { return p.terms(); }

Poly from_k(const engine::KPoly<QQ>& k, const VarSet& vs) {
    Poly p(vs);
    for (const auto& [e, c] : k) p.add_term(e, c);
    return p;
}

} // namespace

Poly normal_form(const Poly& p, const std::vector<Poly>& basis, const MonomialOrder& order) {
    std::vector<engine::KPoly<QQ>> b;
    for (const auto& q : basis)
        if (!q.is_zero()) b.push_back(to_k(q));
    if (b.empty()) return p;
    return from_k(engine::normal_form_k(to_k(p), b, order), p.vars());
}

GroebnerBasis buchberger(const std::vector<Poly>& gens, const MonomialOrder& order) {
    std::vector<engine::KPoly<QQ>> g;
    VarSet vs;
    for (const auto& p : gens) {
        if (!p.is_zero()) {
            vs = p.vars();
            g.push_back(to_k(p));
        }
    }
    auto r = engine::buchberger_k(std::move(g), order);
    GroebnerBasis out{{}, order};
    for (const auto& k : r) out.gens.push_back(from_k(k, vs));
    return out;
}

std::vector<Poly> elimination_ideal(const GroebnerBasis& gb,
                                    const std::vector<size_t>& drop_vars) {
    if (gb.order.kind() != OrderKind::Lex)
        throw std::invalid_argument("elimination requires a lex basis");
    // dropped variables must sit in the highest-priority block
    for (size_t i = 0; i < drop_vars.size(); ++i) {
        bool found = false;
        for (size_t j = 0; j < drop_vars.size(); ++j)
            if (gb.order.priority().at(i) == drop_vars[j]) found = true;
        if (!found)
            throw std::invalid_argument("dropped variables must lead the lex priority");
    }
    std::vector<Poly> kept;
    for (const auto& g : gb.gens) {
        bool uses = false;
        for (size_t v : drop_vars)
            if (g.depends_on(v)) uses = true;
        if (!uses) kept.push_back(g);
    }
    return kept;
}

RelationIdeal relations_ideal(const std::vector<Rat>& maps,
                              const std::vector<size_t>& work_vars,
                              const std::string& x_prefix) {
    if (maps.empty()) throw std::invalid_argument("relations_ideal: no maps");
    const VarSet& src = maps.front().vars();
    for (const auto& m : maps)
        if (m.vars() != src) throw std::invalid_argument("relations_ideal: VarSet mismatch");

    std::vector<bool> is_work(src.size(), false);
    for (size_t v : work_vars) is_work.at(v) = true;

    // ring: [work vars..., saturation var, X0..XN, parameters...]
    std::vector<std::string> names;
    std::vector<size_t> src_to_ring(src.size());
    for (size_t v : work_vars) {
        src_to_ring[v] = names.size();
        names.push_back(src.name(v));
    }
    std::string sat = "_sat";
    while (src.index_of(sat)) sat += "_";
    size_t sat_idx = names.size();
    names.push_back(sat);
    std::vector<size_t> x_idx;
    for (size_t i = 0; i < maps.size(); ++i) {
        std::string xn = x_prefix + std::to_string(i);
        while (src.index_of(xn)) xn = "_" + xn;
        x_idx.push_back(names.size());
        names.push_back(xn);
    }
    std::vector<size_t> p_idx;
    for (size_t v = 0; v < src.size(); ++v) {
        if (is_work[v]) continue;
        src_to_ring[v] = names.size();
        p_idx.push_back(names.size());
        names.push_back(src.name(v));
    }
    VarSet ring(names);

    std::vector<Poly> gens;
    Poly den_prod = Poly::constant(ring, QQ(1));
    for (size_t i = 0; i < maps.size(); ++i) {
        Poly num = maps[i].num().with_vars(ring, src_to_ring);
        Poly den = maps[i].den().with_vars(ring, src_to_ring);
        gens.push_back(Poly::variable(ring, x_idx[i]) * den - num);
        if (!den.is_one()) den_prod = den_prod * den;
    }
    gens.push_back(Poly::variable(ring, sat_idx) * den_prod -
                   Poly::constant(ring, QQ(1)));

    GroebnerBasis gb = buchberger(gens, MonomialOrder::lex(ring));
    std::vector<size_t> drop;
    for (size_t i = 0; i <= work_vars.size(); ++i) drop.push_back(i);
    RelationIdeal out;
    out.ring = ring;
    out.x_vars = x_idx;
    out.p_vars = p_idx;
    out.gens = elimination_ideal(gb, drop);
    return out;
}

} // namespace diffinv
