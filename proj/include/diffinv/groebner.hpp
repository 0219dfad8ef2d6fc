#ifndef DIFFINV_GROEBNER_HPP
#define DIFFINV_GROEBNER_HPP

#include <vector>

#include "diffinv/rat.hpp"

namespace diffinv {

enum class OrderKind { Lex, GrLex };

// Total monomial order compatible with multiplication: lexicographic or
// graded-lexicographic over an explicit variable priority list.
class MonomialOrder {
public:
    MonomialOrder(OrderKind kind, std::vector<size_t> priority)
        : kind_(kind), priority_(std::move(priority)) {}

    static MonomialOrder lex(const VarSet& vs);
    static MonomialOrder grlex(const VarSet& vs);
    // Priority given by variable names, most significant first.
    static MonomialOrder lex(const VarSet& vs, const std::vector<std::string>& priority);

    OrderKind kind() const { return kind_; }
    const std::vector<size_t>& priority() const { return priority_; }

    int compare(const Exp& a, const Exp& b) const;
    bool less(const Exp& a, const Exp& b) const { return compare(a, b) < 0; }

private:
    OrderKind kind_;
    std::vector<size_t> priority_;
};

struct GroebnerBasis {
    std::vector<Poly> gens; // reduced: monic, autoreduced, sorted by increasing LM
    MonomialOrder order;
};

// Remainder of p on division by basis (tie-break: first divisor in basis
// order). p - result lies in the ideal generated by basis.
Poly normal_form(const Poly& p, const std::vector<Poly>& basis, const MonomialOrder& order);

// Reduced Groebner basis; deterministic and independent of generator order.
GroebnerBasis buchberger(const std::vector<Poly>& gens, const MonomialOrder& order);

// Generators of the intersection with the subring excluding drop_vars.
// Requires gb in lex order with the dropped variables of highest priority.
std::vector<Poly> elimination_ideal(const GroebnerBasis& gb,
                                    const std::vector<size_t>& drop_vars);

// Ideal of algebraic relations among rational maps: new indeterminates
// X0..XN, generators Xi*den_i - num_i plus a saturation variable s with
// s*prod(den_i) - 1, eliminated by a lex basis with work vars and s highest.
struct RelationIdeal {
    VarSet ring;                  // [X0..XN, parameter variables...]
    std::vector<size_t> x_vars;   // indices of the Xi in ring
    std::vector<size_t> p_vars;   // indices of the parameters in ring
    std::vector<Poly> gens;       // generators over ring
};

RelationIdeal relations_ideal(const std::vector<Rat>& maps,
                              const std::vector<size_t>& work_vars,
                              const std::string& x_prefix = "X");

} // namespace diffinv

#endif
