#ifndef DIFFINV_QUANTIZE_HPP
#define DIFFINV_QUANTIZE_HPP

#include "diffinv/geometry.hpp"

namespace diffinv {

// d^s on a polynomial in the fiber variables wvars (indices into ctx.vars):
//   d^s = sum_i w_i d_{x_i} - sum_k (sum_{m,l} G^k_{ml} w_m w_l) d_{w_k}.
// Degree in w rises by exactly one on w-homogeneous input.
Rat sym_derivation(const Connection& G, const DiffCtx& ctx,
                   const std::vector<size_t>& wvars, const Rat& p);

// Quantization Q(alpha_k)(h) = (1/k!) <alpha_k, (d^s)^k h>, an order-k
// operator whose symbol is exactly alpha_k.
LinDiffOp quantize(const SymTensor& alpha, const Connection& G, const DiffCtx& ctx);

// Total symbol: peel Q(sigma_3), then sigma_2, sigma_1, sigma_0, all lower
// quantizations taken with the Wagner connection of sigma_3.
struct TotalSymbol {
    SymTensor s3, s2, s1;
    Rat s0;
    Connection gamma;
};

TotalSymbol total_symbol(const LinDiffOp& A, const DiffCtx& ctx);
TotalSymbol total_symbol(const LinDiffOp& A);

// Q(s3) + Q(s2) + Q(s1) + s0; equals the peeled operator exactly.
LinDiffOp quantize_total(const TotalSymbol& ts, const DiffCtx& ctx);

// Restriction of the universal third-order operator to the section of A:
// box3(A, h) = sum c_alpha d^alpha h with context total derivatives.
Rat box3(const LinDiffOp& A, const Rat& h, const DiffCtx& ctx);

// Tresse derivatives: the unique (D1, D2) with dJ/dx_i = sum_m dI_m/dx_i D_m.
// Throws general_position_error (carrying the Jacobian) when the wedge of
// the total differentials vanishes.
std::pair<Rat, Rat> tresse_derivatives(const Rat& J, const Rat& I1, const Rat& I2,
                                       const DiffCtx& ctx);

} // namespace diffinv

#endif
