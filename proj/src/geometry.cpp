#include "diffinv/geometry.hpp"

#include <algorithm>

#include "diffinv/error.hpp"
#include "diffinv/linalg.hpp"

namespace diffinv {

Rat SymTensor::coeff(const MIdx& a) const {
    auto it = comp.find(a);
    return it == comp.end() ? Rat(vars) : it->second;
}

void SymTensor::set_coeff(const MIdx& a, const Rat& c) {
    if ((int)a.size() != dim || (int)midx_order(a) != degree)
        throw std::invalid_argument("SymTensor: bad multi-index");
    if (c.is_zero())
        comp.erase(a);
    else
        comp[a] = c;
}

Rat SymTensor::sym_component(const std::vector<int>& idx) const {
    if ((int)idx.size() != degree) throw std::invalid_argument("index count != degree");
    MIdx a((size_t)dim, 0);
    for (int i : idx) ++a.at((size_t)i);
    static const unsigned fact[4] = {1, 1, 2, 6};
    return coeff(a).mul_scalar(qq_of((long)midx_factorial(a), (long)fact[degree]));
}

Rat pairing(const SymTensor& vec, const SymTensor& form) {
    if (vec.degree != form.degree) throw std::invalid_argument("pairing: degree mismatch");
    if (vec.variance != Variance::Vector || form.variance != Variance::Form)
        throw std::invalid_argument("pairing: expected (vector, form)");
    Rat acc(vec.vars);
    for (const auto& [a, v] : vec.comp) {
        Rat s = form.coeff(a);
        if (s.is_zero()) continue;
        acc = acc + (v * s).mul_scalar(QQ((long)midx_factorial(a)));
    }
    return acc;
}

SymTensor symbol_slice(const LinDiffOp& A, int degree) {
    SymTensor s{A.dim, degree, Variance::Vector, A.vars, {}};
    for (const auto& [a, c] : A.coeffs)
        if ((int)midx_order(a) == degree) s.comp.emplace(a, c);
    return s;
}

SymTensor symbol3(const LinDiffOp& A) { return symbol_slice(A, 3); }

Rat discriminant(const SymTensor& s3) {
    if (s3.dim != 2 || s3.degree != 3)
        throw std::invalid_argument("discriminant needs a planar cubic symbol");
    QQ third = qq_of(1, 3);
    Rat a1 = s3.coeff({3, 0});
    Rat a2 = s3.coeff({2, 1}).mul_scalar(third);
    Rat a3 = s3.coeff({1, 2}).mul_scalar(third);
    Rat a4 = s3.coeff({0, 3});
    Rat six(s3.vars, QQ(6)), four(s3.vars, QQ(4)), three(s3.vars, QQ(3));
    return six * a1 * a2 * a3 * a4 - four * (a1 * a3.pow(3) + a4 * a2.pow(3)) +
           three * a2.pow(2) * a3.pow(2) - a1.pow(2) * a4.pow(2);
}

const char* to_string(SymbolClass c) {
    switch (c) {
        case SymbolClass::Hyperbolic: return "hyperbolic";
        case SymbolClass::Ultrahyperbolic: return "ultrahyperbolic";
        default: return "degenerate";
    }
}

namespace {

SymbolClass class_of_sign(int s) {
    if (s > 0) return SymbolClass::Hyperbolic;
    if (s < 0) return SymbolClass::Ultrahyperbolic;
    return SymbolClass::Degenerate;
}

} // namespace

SymbolClass classify_at(const SymTensor& s3, const std::vector<QQ>& point) {
    return class_of_sign(sign(discriminant(s3).eval(point)));
}

SymbolClass classify(const SymTensor& s3) {
    Rat d = discriminant(s3);
    if (d.is_zero()) return SymbolClass::Degenerate;
    if (d.is_constant()) return class_of_sign(sign(d.constant_value()));
    throw math_error("discriminant sign varies; classify at a point");
}

namespace {

std::vector<std::vector<int>> sorted_triples(int dim) {
    std::vector<std::vector<int>> t;
    for (int i = 0; i < dim; ++i)
        for (int j = i; j < dim; ++j)
            for (int k = j; k < dim; ++k) t.push_back({i, j, k});
    return t;
}

// Parallelism residual for triple (i,j,k) and direction l, linear in G.
Rat parallel_equation(const SymTensor& s3, const Connection& G, const DiffCtx& ctx,
                      const std::vector<int>& ijk, int l) {
    Rat acc = ctx.d(s3.sym_component(ijk), l);
    for (int slot = 0; slot < 3; ++slot)
        for (int m = 0; m < s3.dim; ++m) {
            std::vector<int> idx = ijk;
            int upper = idx[(size_t)slot];
            idx[(size_t)slot] = m;
            acc = acc + G.at(upper, m, l) * s3.sym_component(idx);
        }
    return acc;
}

} // namespace

Connection wagner_connection(const SymTensor& s3, const DiffCtx& ctx) {
    if (s3.degree != 3) throw std::invalid_argument("wagner_connection needs degree 3");
    const int dim = s3.dim;
    // regularity
    if (dim == 2) {
        if (discriminant(s3).is_zero())
            throw degenerate_symbol_error("symbol discriminant vanishes identically");
    } else {
        if (s3.coeff({3}).is_zero())
            throw degenerate_symbol_error("leading coefficient vanishes identically");
    }
    Connection G(dim, s3.vars);
    auto triples = sorted_triples(dim);
    const int n = dim * dim;
    // the equations decouple by the direction of differentiation
    for (int l = 0; l < dim; ++l) {
        std::vector<std::vector<Rat>> M((size_t)n, std::vector<Rat>((size_t)n, Rat(s3.vars)));
        std::vector<Rat> rhs((size_t)n, Rat(s3.vars));
        for (size_t row = 0; row < triples.size(); ++row) {
            const auto& ijk = triples[row];
            rhs[row] = -ctx.d(s3.sym_component(ijk), l);
            for (int slot = 0; slot < 3; ++slot)
                for (int m = 0; m < dim; ++m) {
                    std::vector<int> idx = ijk;
                    int upper = idx[(size_t)slot];
                    idx[(size_t)slot] = m;
                    size_t col = (size_t)(upper * dim + m);
                    M[row][col] = M[row][col] + s3.sym_component(idx);
                }
        }
        std::vector<Rat> x;
        try {
            x = solve_unique(M, rhs);
        } catch (const math_error&) {
            throw degenerate_symbol_error("parallelism system is singular");
        }
        for (int k = 0; k < dim; ++k)
            for (int m = 0; m < dim; ++m) G.at(k, m, l) = x[(size_t)(k * dim + m)];
    }
    return G;
}

Connection wagner_connection(const SymTensor& s3) {
    return wagner_connection(s3, DiffCtx::plain(s3.vars, s3.dim));
}

std::vector<Rat> parallel_defect(const SymTensor& s3, const Connection& G,
                                 const DiffCtx& ctx) {
    std::vector<Rat> out;
    for (const auto& ijk : sorted_triples(s3.dim))
        for (int l = 0; l < s3.dim; ++l)
            out.push_back(parallel_equation(s3, G, ctx, ijk, l));
    return out;
}

Curvature curvature(const Connection& G, const DiffCtx& ctx) {
    const int dim = G.dim;
    Curvature R;
    R.dim = dim;
    R.r.assign((size_t)(dim * dim * dim * dim), Rat(G.vars));
    for (int k = 0; k < dim; ++k)
        for (int m = 0; m < dim; ++m)
            for (int i = 0; i < dim; ++i)
                for (int j = 0; j < dim; ++j) {
                    Rat acc = ctx.d(G.at(k, m, j), i) - ctx.d(G.at(k, m, i), j);
                    for (int p = 0; p < dim; ++p)
                        acc = acc + G.at(k, p, i) * G.at(p, m, j) -
                              G.at(k, p, j) * G.at(p, m, i);
                    R.r[(size_t)(((k * dim + m) * dim + i) * dim + j)] = acc;
                }
    return R;
}

Curvature curvature(const Connection& G) {
    return curvature(G, DiffCtx::plain(G.vars, G.dim));
}

bool Curvature::is_zero() const {
    return std::all_of(r.begin(), r.end(), [](const Rat& x) { return x.is_zero(); });
}

Covector torsion_form(const Connection& G) {
    Covector t{G.dim, G.vars, {}};
    for (int j = 0; j < G.dim; ++j) {
        Rat acc(G.vars);
        for (int k = 0; k < G.dim; ++k)
            acc = acc + G.at(k, j, k) - G.at(k, k, j);
        t.comp.push_back(acc);
    }
    return t;
}

} // namespace diffinv
