#include "diffinv/poly.hpp"

#include <algorithm>
#include <random>
#include <stdexcept>

namespace diffinv {

Poly Poly::constant(const VarSet& vs, const QQ& c) {
    Poly p(vs);
    if (c != 0) p.t_.emplace(Exp(vs.size(), 0), c);
    return p;
}

Poly Poly::variable(const VarSet& vs, size_t idx) {
    Exp e(vs.size(), 0);
    e.at(idx) = 1;
    return term(vs, e, QQ(1));
}

Poly Poly::term(const VarSet& vs, const Exp& e, const QQ& c) {
    if (e.size() != vs.size()) throw std::invalid_argument("exponent arity mismatch");
    Poly p(vs);
    if (c != 0) p.t_.emplace(e, c);
    return p;
}

int Poly::total_degree() const {
    int d = -1;
    for (const auto& [e, c] : t_) d = std::max(d, (int)exp_total(e));
    return d;
}

unsigned Poly::degree_in(size_t var) const {
    unsigned d = 0;
    for (const auto& [e, c] : t_) d = std::max(d, e.at(var));
    return d;
}

void Poly::add_term(const Exp& e, const QQ& c) {
    if (c == 0) return;
    auto it = t_.find(e);
    if (it == t_.end()) {
        t_.emplace(e, c);
    } else {
        it->second += c;
        if (it->second == 0) t_.erase(it);
    }
}

Poly Poly::operator-() const {
    Poly r(vars_);
    for (const auto& [e, c] : t_) r.t_.emplace(e, -c);
    return r;
}

Poly Poly::operator+(const Poly& o) const {
    if (vars_ != o.vars_) throw std::invalid_argument("VarSet mismatch in +");
    Poly r = *this;
    for (const auto& [e, c] : o.t_) r.add_term(e, c);
    return r;
}

Poly Poly::operator-(const Poly& o) const {
    if (vars_ != o.vars_) throw std::invalid_argument("VarSet mismatch in -");
    Poly r = *this;
    for (const auto& [e, c] : o.t_) r.add_term(e, -c);
    return r;
}

Poly Poly::operator*(const Poly& o) const {
    if (vars_ != o.vars_) throw std::invalid_argument("VarSet mismatch in *");
    Poly r(vars_);
    Exp e(vars_.size(), 0);
    for (const auto& [ea, ca] : t_)
        for (const auto& [eb, cb] : o.t_) {
            for (size_t i = 0; i < e.size(); ++i) e[i] = ea[i] + eb[i];
            r.add_term(e, ca * cb);
        }
    return r;
}

Poly Poly::mul_scalar(const QQ& c) const {
    Poly r(vars_);
    if (c == 0) return r;
    for (const auto& [e, k] : t_) r.t_.emplace(e, k * c);
    return r;
}

Poly Poly::div_scalar(const QQ& c) const {
    if (c == 0) throw std::invalid_argument("division by zero scalar");
    Poly r(vars_);
    for (const auto& [e, k] : t_) r.t_.emplace(e, k / c);
    return r;
}

Poly Poly::mul_term(const Exp& m, const QQ& c) const {
    Poly r(vars_);
    if (c == 0) return r;
    Exp e(vars_.size(), 0);
    for (const auto& [ea, ca] : t_) {
        for (size_t i = 0; i < e.size(); ++i) e[i] = ea[i] + m[i];
        r.t_.emplace(e, ca * c);
    }
    return r;
}

Poly Poly::pow(unsigned n) const {
    Poly r = Poly::constant(vars_, QQ(1));
    Poly b = *this;
    while (n) {
        if (n & 1u) r = r * b;
        b = (n >>= 1) ? b * b : b;
    }
    return r;
}

Poly Poly::derivative(size_t var) const {
    Poly r(vars_);
    for (const auto& [e, c] : t_) {
        if (e.at(var) == 0) continue;
        Exp d = e;
        --d[var];
        r.add_term(d, c * (long)e[var]);
    }
    return r;
}

QQ Poly::eval(const std::vector<QQ>& point) const {
    if (point.size() != vars_.size()) throw std::invalid_argument("point arity mismatch");
    QQ acc(0);
    for (const auto& [e, c] : t_) {
        QQ v = c;
        for (size_t i = 0; i < e.size(); ++i)
            for (unsigned k = 0; k < e[i]; ++k) v *= point[i];
        acc += v;
    }
    return acc;
}

double Poly::eval_double(const std::vector<double>& point) const {
    double acc = 0;
    for (const auto& [e, c] : t_) {
        double v = to_double(c);
        for (size_t i = 0; i < e.size(); ++i)
            for (unsigned k = 0; k < e[i]; ++k) v *= point[i];
        acc += v;
    }
    return acc;
}

Poly Poly::with_vars(const VarSet& target, const std::vector<size_t>& varmap) const {
    if (varmap.size() != vars_.size()) throw std::invalid_argument("varmap arity mismatch");
    Poly r(target);
    Exp e(target.size(), 0);
    for (const auto& [ea, c] : t_) {
        std::fill(e.begin(), e.end(), 0u);
        for (size_t i = 0; i < ea.size(); ++i) e.at(varmap[i]) = ea[i];
        r.t_.emplace(e, c); // injective remap: no merging needed
    }
    return r;
}

Poly Poly::restricted(const VarSet& target, const std::vector<size_t>& keep) const {
    Poly r(target);
    Exp e(target.size(), 0);
    for (const auto& [ea, c] : t_) {
        std::fill(e.begin(), e.end(), 0u);
        unsigned dropped = 0;
        for (size_t i = 0, j = 0; i < ea.size(); ++i) {
            if (j < keep.size() && keep[j] == i) {
                e[j++] = ea[i];
            } else {
                dropped += ea[i];
            }
        }
        if (dropped) throw std::invalid_argument("restricted: polynomial uses a dropped variable");
        r.t_.emplace(e, c);
    }
    return r;
}

namespace {

int grlex_cmp(const Exp& a, const Exp& b) {
    unsigned ta = exp_total(a), tb = exp_total(b);
    if (ta != tb) return ta < tb ? -1 : 1;
    for (size_t i = 0; i < a.size(); ++i)
        if (a[i] != b[i]) return a[i] < b[i] ? -1 : 1;
    return 0;
}

} // namespace

const Exp* Poly::lead_exp_grlex() const {
    const Exp* best = nullptr;
    for (const auto& [e, c] : t_)
        if (!best || grlex_cmp(e, *best) > 0) best = &e;
    return best;
}

QQ Poly::lead_coeff_grlex() const {
    const Exp* e = lead_exp_grlex();
    return e ? t_.at(*e) : QQ(0);
}

//
// GCD machinery: primitive PRS with content extraction, over integer
// coefficients (rational inputs are scaled first).
//

namespace {

// Scale to integer coefficients (multiply by the lcm of denominators),
// then divide by the integer content. Sign fixed by positive grlex lead.
Poly make_primitive_integral(const Poly& p) {
    if (p.is_zero()) return p;
    ZZ l(1);
    for (const auto& [e, c] : p.terms()) {
        ZZ den = c.get_den();
        mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), den.get_mpz_t());
    }
    ZZ g(0);
    for (const auto& [e, c] : p.terms()) {
        ZZ n = c.get_num() * (l / c.get_den());
        mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), n.get_mpz_t());
    }
    QQ f = QQ(l) / QQ(g);
    Poly r = p.mul_scalar(f);
    if (sign(r.lead_coeff_grlex()) < 0) r = -r;
    return r;
}

// View of p as a univariate polynomial in variable v, coefficients still
// over the full VarSet (with v-exponent zeroed).
std::vector<Poly> univariate_view(const Poly& p, size_t v) {
    std::vector<Poly> c(p.degree_in(v) + 1, Poly(p.vars()));
    for (const auto& [e, k] : p.terms()) {
        Exp r = e;
        unsigned d = r[v];
        r[v] = 0;
        c[d].add_term(r, k);
    }
    while (c.size() > 1 && c.back().is_zero()) c.pop_back();
    return c;
}

Poly gcd_integral(const Poly& a, const Poly& b);

// Content of p with respect to variable v: gcd of the coefficients.
Poly content_wrt(const Poly& p, size_t v) {
    auto cs = univariate_view(p, v);
    Poly g(p.vars());
    for (const auto& c : cs) {
        if (c.is_zero()) continue;
        if (g.is_zero()) {
            g = c;
        } else if (g.is_constant()) {
            // integer content only from here on
            ZZ z = g.constant_value().get_num();
            for (const auto& [e, k] : c.terms())
                mpz_gcd(z.get_mpz_t(), z.get_mpz_t(), k.get_num().get_mpz_t());
            g = Poly::constant(p.vars(), QQ(z));
        } else {
            g = gcd_integral(g, c);
        }
        if (g.is_one()) break;
    }
    return g;
}

// --- modular univariate probe -------------------------------------------
//
// Evaluate integral polynomials at a random point mod a word-size prime in
// all variables except v; if the univariate image gcd is constant while both
// leading coefficients keep their degree, the true gcd has degree 0 in v.
// This certificate is exact, not heuristic: lc(gcd) divides lc(a), so a
// surviving lc(a) image forces the gcd image to keep its degree, and the
// gcd image divides the image gcd.

constexpr uint64_t kProbePrime = 1000000007ull;

uint64_t ipow_mod(uint64_t b, unsigned e) {
    uint64_t r = 1;
    b %= kProbePrime;
    while (e) {
        if (e & 1u) r = r * b % kProbePrime;
        b = b * b % kProbePrime;
        e >>= 1;
    }
    return r;
}

uint64_t coeff_mod(const QQ& c) {
    // integral coefficients only (callers guarantee denominator 1)
    ZZ n = c.get_num();
    uint64_t m = mpz_fdiv_ui(n.get_mpz_t(), kProbePrime);
    return m;
}

std::vector<uint64_t> eval_uni_mod(const Poly& p, size_t v,
                                   const std::vector<uint64_t>& pt) {
    std::vector<uint64_t> c(p.degree_in(v) + 1, 0);
    for (const auto& [e, k] : p.terms()) {
        uint64_t val = coeff_mod(k);
        for (size_t i = 0; i < e.size(); ++i)
            if (i != v && e[i]) val = val * ipow_mod(pt[i], e[i]) % kProbePrime;
        c[e[v]] = (c[e[v]] + val) % kProbePrime;
    }
    while (c.size() > 1 && c.back() == 0) c.pop_back();
    return c;
}

uint64_t inv_mod(uint64_t a) { return ipow_mod(a, (unsigned)(kProbePrime - 2)); }

size_t gcd_deg_mod(std::vector<uint64_t> a, std::vector<uint64_t> b) {
    auto deg = [](const std::vector<uint64_t>& p) { return p.size() - 1; };
    while (!(b.size() == 1 && b[0] == 0)) {
        // a mod b
        uint64_t ib = inv_mod(b.back());
        while (a.size() >= b.size() && !(a.size() == 1 && a[0] == 0)) {
            uint64_t q = a.back() * ib % kProbePrime;
            size_t off = a.size() - b.size();
            for (size_t i = 0; i < b.size(); ++i) {
                uint64_t sub = q * b[i] % kProbePrime;
                a[off + i] = (a[off + i] + kProbePrime - sub) % kProbePrime;
            }
            while (a.size() > 1 && a.back() == 0) a.pop_back();
            if (a.size() == 1 && a[0] == 0) break;
        }
        std::swap(a, b);
    }
    return deg(a);
}

// Degree of gcd in v as seen through one modular image, or -1 if every
// attempt hit an unlucky point. An image value of 0 is an exact certificate
// that deg_v(gcd) = 0; positive values are upper bounds used to stop the
// remainder sequence early (candidates are verified by exact division).
int probe_gcd_degree(const Poly& a, const Poly& b, size_t v) {
    unsigned da = a.degree_in(v), db = b.degree_in(v);
    for (unsigned attempt = 0; attempt < 4; ++attempt) {
        std::mt19937_64 rng(0x5eedbea7ull + attempt); // deterministic, no shared state
        std::vector<uint64_t> pt(a.vars().size());
        for (auto& x : pt) x = rng() % (kProbePrime - 2) + 1;
        auto ia = eval_uni_mod(a, v, pt);
        auto ib = eval_uni_mod(b, v, pt);
        if (ia.size() != da + 1 || ib.size() != db + 1) continue; // unlucky point
        return (int)gcd_deg_mod(ia, ib);
    }
    return -1;
}

// Pseudo-remainder normalized by lc_v(b)^(deg_v a - deg_v b + 1), as the
// subresultant recurrence requires. Caller ensures deg_v a >= deg_v b >= 1.
Poly prem_subres(Poly a, const Poly& b, size_t v) {
    auto bc = univariate_view(b, v);
    unsigned db = (unsigned)bc.size() - 1;
    const Poly& lb = bc.back();
    unsigned need = a.degree_in(v) - db + 1, used = 0;
    while (!a.is_zero()) {
        unsigned da = a.degree_in(v);
        if (da < db) break;
        auto ac = univariate_view(a, v);
        Exp shift(a.vars().size(), 0);
        shift[v] = da - db;
        a = a * lb - b.mul_term(shift, QQ(1)) * ac.back();
        ++used;
    }
    for (; used < need; ++used) a = a * lb;
    return a;
}

Poly lead_coeff_wrt(const Poly& p, size_t v) {
    auto c = univariate_view(p, v);
    return c.back();
}

// per-variable minimum exponents (the monomial content)
Exp monomial_content(const Poly& p) {
    Exp m;
    for (const auto& [e, c] : p.terms()) {
        if (m.empty()) {
            m = e;
            continue;
        }
        for (size_t i = 0; i < m.size(); ++i) m[i] = std::min(m[i], e[i]);
    }
    return m;
}

Poly shift_down(const Poly& p, const Exp& m) {
    Poly r(p.vars());
    for (const auto& [e, c] : p.terms()) {
        Exp x = e;
        for (size_t i = 0; i < x.size(); ++i) x[i] -= m[i];
        r.add_term(x, c);
    }
    return r;
}

Poly gcd_integral(const Poly& a, const Poly& b) {
    if (a.is_zero()) return b;
    if (b.is_zero()) return a;
    if (a.is_constant() || b.is_constant()) {
        // content gcd over the integers
        ZZ g(0);
        for (const Poly* p : {&a, &b})
            for (const auto& [e, c] : p->terms())
                mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), c.get_num().get_mpz_t());
        return Poly::constant(a.vars(), QQ(g));
    }
    // split off the monomial content first: it is cheap and common
    {
        Exp ma = monomial_content(a), mb = monomial_content(b);
        Exp shared(ma.size(), 0);
        bool any_a = false, any_b = false;
        for (size_t i = 0; i < ma.size(); ++i) {
            shared[i] = std::min(ma[i], mb[i]);
            any_a = any_a || ma[i] > 0;
            any_b = any_b || mb[i] > 0;
        }
        if (any_a || any_b) {
            Poly g = gcd_integral(shift_down(a, ma), shift_down(b, mb));
            return g.mul_term(shared, QQ(1));
        }
    }
    // main variable: the highest index occurring in either operand
    size_t v = 0;
    for (size_t i = a.vars().size(); i-- > 0;) {
        if (a.depends_on(i) || b.depends_on(i)) {
            v = i;
            break;
        }
    }
    int bound = (a.degree_in(v) == 0 || b.degree_in(v) == 0)
                    ? 0
                    : probe_gcd_degree(a, b, v);
    if (bound == 0) {
        // gcd is free of v: only the contents can share factors
        return gcd_integral(content_wrt(a, v), content_wrt(b, v));
    }
    Poly ca = content_wrt(a, v), cb = content_wrt(b, v);
    Poly d = gcd_integral(ca, cb);
    Poly u = divexact(a, ca), w = divexact(b, cb);
    if (u.degree_in(v) < w.degree_in(v)) std::swap(u, w);
    const Poly pa = u, pb = w; // primitive parts, for candidate verification
    Poly one = Poly::constant(a.vars(), QQ(1));
    Poly g = one, h = one, res = one;
    for (;;) {
        if (bound > 0 && w.degree_in(v) == (unsigned)bound) {
            Poly cand = make_primitive_integral(divexact(w, content_wrt(w, v)));
            Poly q;
            if (try_divide(pa, cand, q) && try_divide(pb, cand, q)) {
                res = cand;
                break;
            }
            bound = -1; // unlucky modular image; fall back to the full chain
        }
        unsigned delta = u.degree_in(v) - w.degree_in(v);
        Poly r = prem_subres(u, w, v);
        if (r.is_zero()) {
            res = divexact(w, content_wrt(w, v));
            break;
        }
        if (r.degree_in(v) == 0) break; // res stays 1
        u = w;
        w = divexact(r, g * h.pow(delta));
        g = lead_coeff_wrt(u, v);
        if (delta == 1)
            h = g;
        else if (delta > 1)
            h = divexact(g.pow(delta), h.pow(delta - 1));
    }
    return make_primitive_integral(d * res);
}

} // namespace

Poly poly_gcd(const Poly& a, const Poly& b) {
    if (a.vars() != b.vars()) throw std::invalid_argument("VarSet mismatch in gcd");
    if (a.is_zero()) return b.is_zero() ? a : make_primitive_integral(b);
    if (b.is_zero()) return make_primitive_integral(a);
    return gcd_integral(make_primitive_integral(a), make_primitive_integral(b));
}

bool try_divide(const Poly& a, const Poly& b, Poly& quotient) {
    if (a.vars() != b.vars()) throw std::invalid_argument("VarSet mismatch in divide");
    if (b.is_zero()) return false;
    if (b.is_constant()) {
        quotient = a.div_scalar(b.constant_value());
        return true;
    }
    Poly q(a.vars());
    Poly r = a;
    const Exp* lb = b.lead_exp_grlex();
    QQ cb = b.lead_coeff_grlex();
    Exp t(a.vars().size(), 0);
    while (!r.is_zero()) {
        const Exp* lr = r.lead_exp_grlex();
        bool div = true;
        for (size_t i = 0; i < t.size(); ++i) {
            if ((*lr)[i] < (*lb)[i]) {
                div = false;
                break;
            }
            t[i] = (*lr)[i] - (*lb)[i];
        }
        if (!div) return false;
        QQ c = r.terms().at(*lr) / cb;
        q.add_term(t, c);
        r = r - b.mul_term(t, c);
    }
    quotient = q;
    return true;
}

Poly divexact(const Poly& a, const Poly& b) {
    Poly q;
    if (!try_divide(a, b, q)) throw std::invalid_argument("divexact: not divisible");
    return q;
}

} // namespace diffinv
