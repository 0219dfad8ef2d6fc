#ifndef DIFFINV_DIFFOP_HPP
#define DIFFINV_DIFFOP_HPP

#include <array>
#include <map>

#include "diffinv/rat.hpp"

namespace diffinv {

// Multi-index over the base coordinates; length = dim, |alpha| <= 3 for
// operator keys.
using MIdx = std::vector<unsigned>;

unsigned midx_order(const MIdx& a);
unsigned midx_factorial(const MIdx& a); // alpha!
std::vector<MIdx> all_midx(int dim, unsigned max_order);
std::string midx_key(const MIdx& a); // "2,1" style

// Linear differential operator of order <= 3 in the plain multi-index
// convention A = sum c_alpha d^alpha (no hidden factorials). Base
// coordinates occupy indices 0..dim-1 of the VarSet; additional variables
// (parameters, jet symbols) may follow and are inert under the base partials.
struct LinDiffOp {
    int dim = 0;
    VarSet vars;
    std::map<MIdx, Rat> coeffs;

    Rat coeff(const MIdx& a) const;
    void set_coeff(const MIdx& a, const Rat& c);
    unsigned order() const;

    LinDiffOp operator+(const LinDiffOp& o) const;
    LinDiffOp operator-(const LinDiffOp& o) const;
    LinDiffOp scaled(const Rat& c) const;
    bool operator==(const LinDiffOp& o) const;
};

// Operator family on M x R: coefficients may involve the fiber coordinate y
// (no d_y keys exist in the representation, so the vertical-triviality
// condition holds by construction).
struct OperatorFamily {
    int dim = 0;
    VarSet vars; // base coordinates, then y at index dim, then extras
    size_t y_index = 0;
    std::map<MIdx, Rat> coeffs;

    Rat coeff(const MIdx& a) const;
    void set_coeff(const MIdx& a, const Rat& c);
};

// Diffeomorphism with a caller-supplied exact rational inverse.
struct Diffeo {
    int dim = 0;
    VarSet vars; // base coordinates only
    std::vector<Rat> fwd, inv;

    void validate() const; // inv(fwd(x)) = x, Jacobian not identically zero
};

Diffeo compose(const Diffeo& outer, const Diffeo& inner); // outer after inner

// A(h) = sum c_alpha d^alpha h over the base coordinates.
Rat apply(const LinDiffOp& A, const Rat& h);

// Coefficient conventions of the planar third-order normal form
// (a1,a2,a3,a4,b1,b2,b3,c1,c2,a0); dim 2 only.
LinDiffOp convert_a1form(int dim, const VarSet& vars, const std::array<Rat, 10>& a);
std::array<Rat, 10> convert_to_a1form(const LinDiffOp& A);

// 1-D operator a3 d^3 + a2 d^2 + a1 d + a0.
LinDiffOp make_op1d(const VarSet& vars, const Rat& a3, const Rat& a2, const Rat& a1,
                    const Rat& a0);

// u-convention: u^alpha = alpha! c_alpha / 6 and back.
std::map<MIdx, Rat> convert_uform(const LinDiffOp& A);
LinDiffOp convert_from_uform(int dim, const VarSet& vars, const std::map<MIdx, Rat>& u);

// Restriction of a family to the graph of f (y -> f in every coefficient).
LinDiffOp restrict_family(const OperatorFamily& A, const Rat& f);

// Weakly nonlinear application A_w(f) = A_f(f).
Rat weakly_apply(const OperatorFamily& A, const Rat& f);

// phi_* A = phi_* o A o phi_*^{-1}, computed by expanding A(h o phi) over
// formal jet symbols of h up to order 3 and substituting x -> phi^{-1}.
LinDiffOp pushforward(const LinDiffOp& A, const Diffeo& phi);
OperatorFamily pushforward_family(const OperatorFamily& A, const Diffeo& phi);

// Transport of a scalar: (phi_* f)(x) = f(phi^{-1}(x)).
Rat pushforward_scalar(const Rat& f, const Diffeo& phi);

} // namespace diffinv

#endif
