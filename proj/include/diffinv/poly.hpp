#ifndef DIFFINV_POLY_HPP
#define DIFFINV_POLY_HPP

#include <map>
#include <vector>

#include "diffinv/scalar.hpp"
#include "diffinv/varset.hpp"

namespace diffinv {

// Exponent vector; arity always equals the VarSet size of the owning Poly.
using Exp = std::vector<unsigned>;

inline unsigned exp_total(const Exp& e) {
    unsigned t = 0;
    for (unsigned x : e) t += x;
    return t;
}

// Sparse multivariate polynomial over QQ. No zero coefficients are stored;
// the term map is ordered by plain lexicographic comparison of exponent
// vectors, which gives deterministic iteration.
class Poly {
public:
    Poly() = default; // zero over the empty VarSet
    explicit Poly(VarSet vs) : vars_(std::move(vs)) {}

    static Poly constant(const VarSet& vs, const QQ& c);
    static Poly variable(const VarSet& vs, size_t idx);
    static Poly term(const VarSet& vs, const Exp& e, const QQ& c);

    const VarSet& vars() const { return vars_; }
    const std::map<Exp, QQ>& terms() const { return t_; }

    bool is_zero() const { return t_.empty(); }
    bool is_constant() const {
        return t_.empty() || (t_.size() == 1 && exp_total(t_.begin()->first) == 0);
    }
    // Constant value; valid only when is_constant().
    QQ constant_value() const { return t_.empty() ? QQ(0) : t_.begin()->second; }
    bool is_one() const { return is_constant() && constant_value() == 1; }

    size_t term_count() const { return t_.size(); }
    int total_degree() const; // -1 for the zero polynomial
    unsigned degree_in(size_t var) const;
    bool depends_on(size_t var) const { return degree_in(var) > 0; }

    void add_term(const Exp& e, const QQ& c); // merges; drops zeros

    Poly operator-() const;
    Poly operator+(const Poly& o) const;
    Poly operator-(const Poly& o) const;
    Poly operator*(const Poly& o) const;
    Poly mul_scalar(const QQ& c) const;
    Poly div_scalar(const QQ& c) const;
    Poly mul_term(const Exp& e, const QQ& c) const;
    Poly pow(unsigned n) const;

    bool operator==(const Poly& o) const { return vars_ == o.vars_ && t_ == o.t_; }
    bool operator!=(const Poly& o) const { return !(*this == o); }

    Poly derivative(size_t var) const;

    // Exact evaluation; every variable must have an entry in point.
    QQ eval(const std::vector<QQ>& point) const;
    double eval_double(const std::vector<double>& point) const;

    // Re-express over a larger VarSet; varmap[i] = index of my variable i there.
    Poly with_vars(const VarSet& target, const std::vector<size_t>& varmap) const;
    Poly with_vars(const VarSet& target) const {
        return with_vars(target, target.embedding_of(vars_));
    }
    // Drop variables this polynomial does not use; keep[i] are retained indices.
    Poly restricted(const VarSet& target, const std::vector<size_t>& keep) const;

    // Leading data under graded-lexicographic order in the natural variable
    // order of the VarSet (the session canonical order).
    const Exp* lead_exp_grlex() const;
    QQ lead_coeff_grlex() const;

private:
    VarSet vars_;
    std::map<Exp, QQ> t_;
};

// GCD in QQ[vars] by primitive polynomial remainder sequences with content
// extraction. The result is integer-primitive with positive grlex leading
// coefficient (so it is a canonical representative of the gcd class).
Poly poly_gcd(const Poly& a, const Poly& b);

// Exact division; throws std::invalid_argument if b does not divide a.
Poly divexact(const Poly& a, const Poly& b);
bool try_divide(const Poly& a, const Poly& b, Poly& quotient);

} // namespace diffinv

#endif
