#ifndef DIFFINV_RAT_HPP
#define DIFFINV_RAT_HPP

#include <map>

#include "diffinv/poly.hpp"

namespace diffinv {

// Rational function over QQ in canonical form: numerator and denominator
// reduced by their gcd, denominator monic under grlex in the session
// variable order. Structural equality therefore decides mathematical
// equality; cross-multiplication is kept in the tests as an oracle.
class Rat {
public:
    Rat() = default;
    explicit Rat(VarSet vs) : num_(vs), den_(Poly::constant(vs, QQ(1))) {}
    Rat(const VarSet& vs, const QQ& c)
        : num_(Poly::constant(vs, c)), den_(Poly::constant(vs, QQ(1))) {}

    static Rat from_poly(Poly p);
    static Rat make(Poly num, Poly den); // canonicalizes; throws on zero denominator
    // Internal: adopts parts that are already reduced and monic-normalized.
    static Rat raw(Poly num, Poly den);
    static Rat variable(const VarSet& vs, size_t idx) {
        return from_poly(Poly::variable(vs, idx));
    }

    const Poly& num() const { return num_; }
    const Poly& den() const { return den_; }
    const VarSet& vars() const { return num_.vars(); }

    bool is_zero() const { return num_.is_zero(); }
    bool is_one() const { return num_.is_one() && den_.is_one(); }
    bool is_poly() const { return den_.is_one(); }
    bool is_constant() const { return num_.is_constant() && den_.is_one(); }
    QQ constant_value() const { return num_.constant_value(); }

    Rat operator-() const;
    Rat operator+(const Rat& o) const;
    Rat operator-(const Rat& o) const;
    Rat operator*(const Rat& o) const;
    Rat operator/(const Rat& o) const; // throws on division by zero
    Rat inverse() const;
    Rat pow(int n) const;
    Rat mul_scalar(const QQ& c) const;

    bool operator==(const Rat& o) const { return num_ == o.num_ && den_ == o.den_; }
    bool operator!=(const Rat& o) const { return !(*this == o); }

    Rat derivative(size_t var) const;

    bool depends_on(size_t var) const {
        return num_.depends_on(var) || den_.depends_on(var);
    }

    // Simultaneous substitution var index -> value. Throws pole_error if the
    // denominator collapses to zero.
    Rat substitute(const std::map<size_t, Rat>& bindings) const;

    // Exact evaluation at a full point; throws pole_error at denominator zeros.
    QQ eval(const std::vector<QQ>& point) const;
    // Numeric evaluation; throws pole_error when |den| underflows.
    double eval_double(const std::vector<double>& point) const;

    Rat with_vars(const VarSet& target) const {
        auto m = target.embedding_of(vars());
        return make(num_.with_vars(target, m), den_.with_vars(target, m));
    }
    Rat restricted(const VarSet& target, const std::vector<size_t>& keep) const {
        return make(num_.restricted(target, keep), den_.restricted(target, keep));
    }

private:
    Poly num_, den_;
};

} // namespace diffinv

#endif
