#include "diffinv/linalg.hpp"

#include "diffinv/error.hpp"

namespace diffinv {

namespace {

// Clear denominators row-wise: each row becomes a Poly row representing the
// same equation up to a nonzero factor.
std::vector<std::vector<Poly>> clear_rows(const std::vector<std::vector<Rat>>& M,
                                          const std::vector<Rat>* rhs) {
    size_t n = M.size();
    std::vector<std::vector<Poly>> P(n);
    for (size_t i = 0; i < n; ++i) {
        const VarSet& vs = (rhs ? (*rhs)[i] : M[i][0]).vars();
        Poly prod = Poly::constant(vs, QQ(1));
        for (const auto& e : M[i])
            if (!e.den().is_one()) prod = prod * e.den();
        if (rhs && !(*rhs)[i].den().is_one()) prod = prod * (*rhs)[i].den();
        auto scaled = [&](const Rat& e) {
            return e.num() * divexact(prod, e.den());
        };
        for (const auto& e : M[i]) P[i].push_back(scaled(e));
        if (rhs) P[i].push_back(scaled((*rhs)[i]));
    }
    return P;
}

// Fraction-free forward elimination in place; returns the row/column
// permutations and the rank achieved. cols = number of unknown columns
// (an extra rhs column, if present, never pivots).
struct Elim {
    std::vector<size_t> row, col;
    size_t rank;
};

Elim bareiss(std::vector<std::vector<Poly>>& P, size_t cols) {
    size_t n = P.size();
    Elim e;
    e.row.resize(n);
    e.col.resize(cols);
    for (size_t i = 0; i < n; ++i) e.row[i] = i;
    for (size_t j = 0; j < cols; ++j) e.col[j] = j;
    Poly prev; // previous pivot; initially the constant 1
    bool have_prev = false;
    size_t k = 0;
    for (; k < n && k < cols; ++k) {
        // full pivot search: nonzero entry with fewest terms, then lowest index
        size_t pr = n, pc = cols;
        size_t best = 0;
        for (size_t i = k; i < n; ++i)
            for (size_t j = k; j < cols; ++j) {
                const Poly& q = P[e.row[i]][e.col[j]];
                if (q.is_zero()) continue;
                size_t sz = q.term_count();
                if (pr == n || sz < best) {
                    pr = i;
                    pc = j;
                    best = sz;
                }
            }
        if (pr == n) break; // no pivot: rank deficiency
        std::swap(e.row[k], e.row[pr]);
        std::swap(e.col[k], e.col[pc]);
        const Poly& piv = P[e.row[k]][e.col[k]];
        for (size_t i = k + 1; i < n; ++i) {
            auto& Ri = P[e.row[i]];
            const auto& Rk = P[e.row[k]];
            for (size_t j = 0; j < P[0].size(); ++j) {
                if (j == e.col[k]) continue;
                Poly t = Ri[j] * piv - Ri[e.col[k]] * Rk[j];
                Ri[j] = have_prev ? divexact(t, prev) : std::move(t);
            }
            Ri[e.col[k]] = Poly(Ri[e.col[k]].vars());
        }
        prev = piv;
        have_prev = true;
    }
    e.rank = k;
    return e;
}

} // namespace

std::vector<Rat> solve_unique(const std::vector<std::vector<Rat>>& M,
                              const std::vector<Rat>& rhs) {
    size_t n = M.size();
    if (n == 0 || rhs.size() != n) throw std::invalid_argument("solve_unique: bad shape");
    for (const auto& r : M)
        if (r.size() != n) throw std::invalid_argument("solve_unique: matrix not square");

    auto P = clear_rows(M, &rhs);
    Elim e = bareiss(P, n);
    if (e.rank < n) throw math_error("singular linear system");

    std::vector<Rat> x(n, Rat(rhs[0].vars()));
    for (size_t k = n; k-- > 0;) {
        const auto& R = P[e.row[k]];
        Rat acc = Rat::from_poly(R[n]); // rhs column
        for (size_t j = k + 1; j < n; ++j)
            acc = acc - Rat::from_poly(R[e.col[j]]) * x[e.col[j]];
        if (R[e.col[k]].is_zero()) throw math_error("singular linear system");
        x[e.col[k]] = acc / Rat::from_poly(R[e.col[k]]);
    }
    return x;
}

Rat determinant(const std::vector<std::vector<Rat>>& M) {
    size_t n = M.size();
    if (n == 0) throw std::invalid_argument("determinant: empty");
    for (const auto& r : M)
        if (r.size() != n) throw std::invalid_argument("determinant: not square");
    // denominator bookkeeping: det of the cleared matrix divided by row factors
    Rat scale(M[0][0].vars(), QQ(1));
    auto P = clear_rows(M, nullptr);
    for (size_t i = 0; i < n; ++i) {
        Poly prod = Poly::constant(M[i][0].vars(), QQ(1));
        for (const auto& entry : M[i])
            if (!entry.den().is_one()) prod = prod * entry.den();
        scale = scale * Rat::from_poly(prod);
    }
    Elim e = bareiss(P, n);
    if (e.rank < n) return Rat(M[0][0].vars());
    // in Bareiss form, the last pivot is det of the cleared matrix
    Rat det = Rat::from_poly(P[e.row[n - 1]][e.col[n - 1]]);
    // sign of the permutations
    int sgn = 1;
    auto parity = [&](std::vector<size_t> p) {
        for (size_t i = 0; i < p.size(); ++i)
            while (p[i] != i) {
                std::swap(p[i], p[p[i]]);
                sgn = -sgn;
            }
    };
    parity(e.row);
    parity(e.col);
    return det.mul_scalar(QQ(sgn)) / scale;
}

} // namespace diffinv
