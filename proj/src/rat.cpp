#include "diffinv/rat.hpp"

#include <cmath>
#include <stdexcept>

#include "diffinv/error.hpp"

namespace diffinv {

Rat Rat::from_poly(Poly p) {
    Rat r;
    r.den_ = Poly::constant(p.vars(), QQ(1));
    r.num_ = std::move(p);
    return r;
}

Rat Rat::make(Poly num, Poly den) {
    if (num.vars() != den.vars()) throw std::invalid_argument("VarSet mismatch in Rat");
    if (den.is_zero()) throw pole_error("zero denominator");
    if (num.is_zero()) return Rat(num.vars());
    if (!den.is_constant()) {
        Poly g = poly_gcd(num, den);
        if (!g.is_one()) {
            num = divexact(num, g);
            den = divexact(den, g);
        }
    }
    QQ lc = den.lead_coeff_grlex();
    if (lc != 1) {
        num = num.div_scalar(lc);
        den = den.div_scalar(lc);
    }
    Rat r;
    r.num_ = std::move(num);
    r.den_ = std::move(den);
    return r;
}

Rat Rat::operator-() const {
    Rat r = *this;
    r.num_ = -r.num_;
    return r;
}

namespace {

// Monic-normalize a fraction already known to be reduced.
Rat normalized_reduced(Poly num, Poly den) {
    if (num.is_zero()) return Rat(num.vars());
    QQ lc = den.lead_coeff_grlex();
    if (lc != 1) {
        num = num.div_scalar(lc);
        den = den.div_scalar(lc);
    }
    return Rat::raw(std::move(num), std::move(den));
}

} // namespace

Rat Rat::raw(Poly num, Poly den) {
    Rat r;
    r.num_ = std::move(num);
    r.den_ = std::move(den);
    return r;
}

Rat Rat::operator+(const Rat& o) const {
    if (is_zero()) return o;
    if (o.is_zero()) return *this;
    if (den_.is_one() && o.den_.is_one()) return from_poly(num_ + o.num_);
    // With a/b, c/d canonical and g = gcd(b,d): the only factors the sum can
    // share with its denominator sit inside g (Henrici), so one small gcd
    // replaces the full reduction.
    Poly g = poly_gcd(den_, o.den_);
    if (g.is_constant()) {
        Poly n = num_ * o.den_ + o.num_ * den_;
        if (n.is_zero()) return Rat(vars());
        return normalized_reduced(std::move(n), den_ * o.den_);
    }
    Poly bg = divexact(den_, g), dg = divexact(o.den_, g);
    Poly n = num_ * dg + o.num_ * bg;
    if (n.is_zero()) return Rat(vars());
    Poly h = poly_gcd(n, g);
    if (!h.is_constant()) {
        n = divexact(n, h);
        g = divexact(g, h);
    }
    return normalized_reduced(std::move(n), bg * dg * g);
}

Rat Rat::operator-(const Rat& o) const { return *this + (-o); }

Rat Rat::operator*(const Rat& o) const {
    if (is_zero()) return *this;
    if (o.is_zero()) return o;
    if (den_.is_one() && o.den_.is_one()) return from_poly(num_ * o.num_);
    // Cross-reduce; with canonical operands the cross-reduced product is
    // already in lowest terms, so no further gcd is needed.
    Poly g1 = poly_gcd(num_, o.den_);
    Poly g2 = poly_gcd(o.num_, den_);
    Poly n = divexact(num_, g1) * divexact(o.num_, g2);
    Poly d = divexact(den_, g2) * divexact(o.den_, g1);
    return normalized_reduced(std::move(n), std::move(d));
}

Rat Rat::inverse() const {
    if (is_zero()) throw pole_error("division by zero");
    return make(den_, num_);
}

Rat Rat::operator/(const Rat& o) const { return *this * o.inverse(); }

Rat Rat::pow(int n) const {
    if (n < 0) return inverse().pow(-n);
    Rat r(vars(), QQ(1));
    Rat b = *this;
    unsigned m = (unsigned)n;
    while (m) {
        if (m & 1u) r = r * b;
        b = (m >>= 1) ? b * b : b;
    }
    return r;
}

Rat Rat::mul_scalar(const QQ& c) const {
    if (c == 0) return Rat(vars());
    Rat r = *this;
    r.num_ = r.num_.mul_scalar(c);
    return r;
}

Rat Rat::derivative(size_t var) const {
    if (den_.is_one()) return from_poly(num_.derivative(var));
    // quotient rule with the repeated-factor deflation: for g = gcd(d, d')
    // the derivative is (n' (d/g) - n (d'/g)) / (d (d/g)).
    Poly dp = den_.derivative(var);
    if (dp.is_zero()) return make(num_.derivative(var), den_);
    Poly g = poly_gcd(den_, dp);
    if (g.is_constant())
        return make(num_.derivative(var) * den_ - num_ * dp, den_ * den_);
    Poly dh = divexact(den_, g), w = divexact(dp, g);
    return make(num_.derivative(var) * dh - num_ * w, den_ * dh);
}

namespace {

Rat subst_poly(const Poly& p, const std::map<size_t, Rat>& bindings, const VarSet& vs) {
    // powers cache per bound variable
    std::map<size_t, std::vector<Rat>> pw;
    Rat acc(vs);
    for (const auto& [e, c] : p.terms()) {
        Rat t(vs, c);
        for (size_t i = 0; i < e.size(); ++i) {
            if (e[i] == 0) continue;
            auto b = bindings.find(i);
            if (b == bindings.end()) {
                t = t * Rat::from_poly(Poly::term(vs, [&] {
                        Exp m(vs.size(), 0);
                        m[i] = e[i];
                        return m;
                    }(), QQ(1)));
            } else {
                auto& cache = pw[i];
                if (cache.empty()) cache.push_back(Rat(vs, QQ(1)));
                while (cache.size() <= e[i]) cache.push_back(cache.back() * b->second);
                t = t * cache[e[i]];
            }
        }
        acc = acc + t;
    }
    return acc;
}

} // namespace

Rat Rat::substitute(const std::map<size_t, Rat>& bindings) const {
    // target VarSet: union of ours and all substituted values'
    VarSet target = vars();
    for (const auto& [i, v] : bindings) target = unify(target, v.vars());
    std::map<size_t, Rat> b;
    for (const auto& [i, v] : bindings) b.emplace(i, v.with_vars(target));
    Poly n = num_.with_vars(target);
    Poly d = den_.with_vars(target);
    Rat dn = subst_poly(d, b, target);
    if (dn.is_zero()) throw pole_error("substitution maps denominator to zero");
    return subst_poly(n, b, target) / dn;
}

QQ Rat::eval(const std::vector<QQ>& point) const {
    QQ d = den_.eval(point);
    if (d == 0) throw pole_error("pole at evaluation point");
    return num_.eval(point) / d;
}

double Rat::eval_double(const std::vector<double>& point) const {
    double d = den_.eval_double(point);
    if (std::abs(d) < 1e-300) throw pole_error("pole at numeric evaluation point");
    return num_.eval_double(point) / d;
}

} // namespace diffinv
