#ifndef DIFFINV_GEOMETRY_HPP
#define DIFFINV_GEOMETRY_HPP

#include "diffinv/diffctx.hpp"
#include "diffinv/diffop.hpp"

namespace diffinv {

enum class Variance { Vector, Form };

// Symmetric k-vector or k-form: components S_alpha of the polynomial
// sum S_alpha w^alpha on the (co)tangent fiber.
struct SymTensor {
    int dim = 0;
    int degree = 0;
    Variance variance = Variance::Vector;
    VarSet vars;
    std::map<MIdx, Rat> comp;

    Rat coeff(const MIdx& a) const;
    void set_coeff(const MIdx& a, const Rat& c);
    bool is_zero() const { return comp.empty(); }
    bool operator==(const SymTensor& o) const {
        return dim == o.dim && degree == o.degree && variance == o.variance &&
               vars == o.vars && comp == o.comp;
    }
    // Fully symmetric component array entry, indices i <= j <= ... sorted:
    // T^{i..} = S_alpha * alpha! / degree!.
    Rat sym_component(const std::vector<int>& idx) const;
};

// <v, s> = sum alpha! v_alpha s_alpha; the unique scaling under which
// quantization reproduces its symbol.
Rat pairing(const SymTensor& vec, const SymTensor& form);

SymTensor symbol3(const LinDiffOp& A);
SymTensor symbol_slice(const LinDiffOp& A, int degree); // degree-k coefficient slice

// Discriminant of the binary cubic associated with a degree-3 symbol (dim 2).
Rat discriminant(const SymTensor& s3);

enum class SymbolClass { Hyperbolic, Ultrahyperbolic, Degenerate };
const char* to_string(SymbolClass c);

SymbolClass classify_at(const SymTensor& s3, const std::vector<QQ>& point);
// Symbolic classification; requires the discriminant to be constant (else
// throws math_error asking for a point).
SymbolClass classify(const SymTensor& s3);

// Linear connection, torsion allowed. Convention: nabla_{d_l} d_m =
// sum_k G^k_{ml} d_k; the direction of differentiation is the SECOND
// lower index.
struct Connection {
    int dim = 0;
    VarSet vars;
    std::vector<Rat> g; // [k][m][l] flattened

    Connection() = default;
    Connection(int d, const VarSet& vs)
        : dim(d), vars(vs), g((size_t)(d * d * d), Rat(vs)) {}
    Rat& at(int k, int m, int l) { return g[idx(k, m, l)]; }
    const Rat& at(int k, int m, int l) const { return g[idx(k, m, l)]; }

private:
    size_t idx(int k, int m, int l) const {
        return (size_t)((k * dim + m) * dim + l);
    }
};

// The unique connection with nabla sigma = 0 for a regular degree-3 symbol,
// by symbolic solution of the parallelism equations. Throws
// degenerate_symbol_error when the system is singular.
Connection wagner_connection(const SymTensor& s3, const DiffCtx& ctx);
Connection wagner_connection(const SymTensor& s3); // plain context

// All parallelism equation residuals (zero iff nabla sigma = 0).
std::vector<Rat> parallel_defect(const SymTensor& s3, const Connection& G,
                                 const DiffCtx& ctx);

// R^k_{m,ij} = d_i G^k_{mj} - d_j G^k_{mi} + sum_p (G^k_{pi} G^p_{mj}
//            - G^k_{pj} G^p_{mi}).
struct Curvature {
    int dim = 0;
    std::vector<Rat> r; // [k][m][i][j]
    const Rat& at(int k, int m, int i, int j) const {
        return r[(size_t)(((k * dim + m) * dim + i) * dim + j)];
    }
    bool is_zero() const;
};

Curvature curvature(const Connection& G, const DiffCtx& ctx);
Curvature curvature(const Connection& G);

struct Covector {
    int dim = 0;
    VarSet vars;
    std::vector<Rat> comp;
};

// theta_j = sum_k (G^k_{jk} - G^k_{kj}).
Covector torsion_form(const Connection& G);

} // namespace diffinv

#endif
