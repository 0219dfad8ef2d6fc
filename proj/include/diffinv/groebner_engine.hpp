#ifndef DIFFINV_GROEBNER_ENGINE_HPP
#define DIFFINV_GROEBNER_ENGINE_HPP

// Buchberger engine generic over the coefficient field, so the same code
// serves QQ coefficients (polyalg) and rational-function coefficients over
// parameter symbols (descent).

#include <algorithm>
#include <map>
#include <set>

#include "diffinv/groebner.hpp"

namespace diffinv::engine {

template <class K>
struct KOps; // is_zero, neg, add_into, mul, div

template <>
struct KOps<QQ> {
    static bool is_zero(const QQ& a) { return a == 0; }
    static QQ neg(const QQ& a) { return -a; }
    static QQ mul(const QQ& a, const QQ& b) { return a * b; }
    static QQ div(const QQ& a, const QQ& b) { return a / b; }
    static void add_into(QQ& a, const QQ& b) { a += b; }
};

template <>
struct KOps<Rat> {
    static bool is_zero(const Rat& a) { return a.is_zero(); }
    static Rat neg(const Rat& a) { return -a; }
    static Rat mul(const Rat& a, const Rat& b) { return a * b; }
    static Rat div(const Rat& a, const Rat& b) { return a / b; }
    static void add_into(Rat& a, const Rat& b) { a = a + b; }
};

template <class K>
using KPoly = std::map<Exp, K>; // no zero coefficients stored

inline bool exp_divides(const Exp& a, const Exp& b) { // a | b
    for (size_t i = 0; i < a.size(); ++i)
        if (a[i] > b[i]) return false;
    return true;
}

inline Exp exp_lcm(const Exp& a, const Exp& b) {
    Exp r(a.size());
    for (size_t i = 0; i < a.size(); ++i) r[i] = std::max(a[i], b[i]);
    return r;
}

inline Exp exp_sub(const Exp& a, const Exp& b) {
    Exp r(a.size());
    for (size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
    return r;
}

inline Exp exp_add(const Exp& a, const Exp& b) {
    Exp r(a.size());
    for (size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
    return r;
}

template <class K>
void add_term(KPoly<K>& p, const Exp& e, const K& c) {
    if (KOps<K>::is_zero(c)) return;
    auto it = p.find(e);
    if (it == p.end()) {
        p.emplace(e, c);
    } else {
        KOps<K>::add_into(it->second, c);
        if (KOps<K>::is_zero(it->second)) p.erase(it);
    }
}

template <class K>
const std::pair<const Exp, K>* lead(const KPoly<K>& p, const MonomialOrder& ord) {
    const std::pair<const Exp, K>* best = nullptr;
    for (const auto& t : p)
        if (!best || ord.less(best->first, t.first)) best = &t;
    return best;
}

// p -= (mono, c) * q
template <class K>
void sub_mul(KPoly<K>& p, const Exp& mono, const K& c, const KPoly<K>& q) {
    for (const auto& [e, k] : q)
        add_term(p, exp_add(e, mono), KOps<K>::neg(KOps<K>::mul(c, k)));
}

template <class K>
KPoly<K> normal_form_k(KPoly<K> p, const std::vector<KPoly<K>>& basis,
                       const MonomialOrder& ord) {
    KPoly<K> rem;
    std::vector<const std::pair<const Exp, K>*> lm(basis.size());
    for (size_t i = 0; i < basis.size(); ++i) lm[i] = lead(basis[i], ord);
    while (!p.empty()) {
        auto* lp = lead(p, ord);
        bool reduced = false;
        for (size_t i = 0; i < basis.size(); ++i) { // first divisor wins
            if (!lm[i] || !exp_divides(lm[i]->first, lp->first)) continue;
            K c = KOps<K>::div(lp->second, lm[i]->second);
            sub_mul(p, exp_sub(lp->first, lm[i]->first), c, basis[i]);
            reduced = true;
            break;
        }
        if (!reduced) {
            rem.emplace(lp->first, lp->second);
            p.erase(lp->first);
        }
    }
    return rem;
}

template <class K>
void make_monic(KPoly<K>& p, const MonomialOrder& ord) {
    if (p.empty()) return;
    K lc = lead(p, ord)->second;
    for (auto& [e, c] : p) c = KOps<K>::div(c, lc);
}

// Reduced Groebner basis, Buchberger with the product and chain criteria,
// pairs processed in the normal selection strategy (smallest lcm first).
template <class K>
std::vector<KPoly<K>> buchberger_k(std::vector<KPoly<K>> gens, const MonomialOrder& ord) {
    std::vector<KPoly<K>> g;
    for (auto& p : gens) {
        if (p.empty()) continue;
        make_monic(p, ord);
        if (std::find(g.begin(), g.end(), p) == g.end()) g.push_back(std::move(p));
    }
    std::sort(g.begin(), g.end(), [&](const KPoly<K>& a, const KPoly<K>& b) {
        return ord.less(lead(a, ord)->first, lead(b, ord)->first);
    });

    struct Pair {
        Exp lcm;
        size_t i, j;
    };
    auto pair_less = [&](const Pair& a, const Pair& b) {
        int c = ord.compare(a.lcm, b.lcm);
        if (c != 0) return c < 0;
        if (a.i != b.i) return a.i < b.i;
        return a.j < b.j;
    };
    std::vector<Pair> queue;
    std::set<std::pair<size_t, size_t>> pending;
    auto push_pairs = [&](size_t t) {
        const Exp& lt = lead(g[t], ord)->first;
        for (size_t i = 0; i < t; ++i) {
            queue.push_back({exp_lcm(lead(g[i], ord)->first, lt), i, t});
            pending.emplace(i, t);
        }
        std::sort(queue.begin(), queue.end(), pair_less);
    };
    for (size_t t = 1; t < g.size(); ++t) push_pairs(t);

    size_t guard = 0;
    while (!queue.empty()) {
        if (++guard > 200000) throw std::runtime_error("buchberger: pair budget exceeded");
        Pair pr = queue.front();
        queue.erase(queue.begin());
        pending.erase({pr.i, pr.j});
        const Exp& ei = lead(g[pr.i], ord)->first;
        const Exp& ej = lead(g[pr.j], ord)->first;
        // product criterion
        if (exp_add(ei, ej) == pr.lcm) continue;
        // chain criterion
        bool skip = false;
        for (size_t k = 0; k < g.size() && !skip; ++k) {
            if (k == pr.i || k == pr.j) continue;
            if (!exp_divides(lead(g[k], ord)->first, pr.lcm)) continue;
            auto key1 = std::minmax(pr.i, k), key2 = std::minmax(pr.j, k);
            if (!pending.count({key1.first, key1.second}) &&
                !pending.count({key2.first, key2.second}))
                skip = true;
        }
        if (skip) continue;

        // S-polynomial; generators are monic, so S = m_i g_i - m_j g_j
        KPoly<K> s;
        {
            const auto* li = lead(g[pr.i], ord);
            const auto* lj = lead(g[pr.j], ord);
            Exp mi = exp_sub(pr.lcm, li->first);
            for (const auto& [e, c] : g[pr.i]) add_term(s, exp_add(e, mi), c);
            sub_mul(s, exp_sub(pr.lcm, lj->first), lj->second, g[pr.j]);
        }
        KPoly<K> r = normal_form_k(std::move(s), g, ord);
        if (r.empty()) continue;
        make_monic(r, ord);
        g.push_back(std::move(r));
        push_pairs(g.size() - 1);
    }

    // minimize: drop generators whose LM is divisible by another kept LM
    std::vector<KPoly<K>> kept;
    for (size_t i = 0; i < g.size(); ++i) {
        bool redundant = false;
        for (size_t j = 0; j < g.size() && !redundant; ++j) {
            if (i == j) continue;
            const Exp& li = lead(g[i], ord)->first;
            const Exp& lj = lead(g[j], ord)->first;
            if (exp_divides(lj, li) && (li != lj || j < i)) redundant = true;
        }
        if (!redundant) kept.push_back(g[i]);
    }
    // tail-reduce each against the others
    std::vector<KPoly<K>> reduced;
    for (size_t i = 0; i < kept.size(); ++i) {
        std::vector<KPoly<K>> others;
        for (size_t j = 0; j < kept.size(); ++j)
            if (j != i) others.push_back(kept[j]);
        KPoly<K> r = normal_form_k(kept[i], others, ord);
        if (!r.empty()) {
            make_monic(r, ord);
            reduced.push_back(std::move(r));
        }
    }
    std::sort(reduced.begin(), reduced.end(), [&](const KPoly<K>& a, const KPoly<K>& b) {
        return ord.less(lead(a, ord)->first, lead(b, ord)->first);
    });
    return reduced;
}

} // namespace diffinv::engine

#endif
