#include "diffinv/diffop.hpp"

#include <algorithm>

#include "diffinv/error.hpp"

namespace diffinv {

unsigned midx_order(const MIdx& a) {
    unsigned t = 0;
    for (unsigned x : a) t += x;
    return t;
}

unsigned midx_factorial(const MIdx& a) {
    static const unsigned f[4] = {1, 1, 2, 6};
    unsigned r = 1;
    for (unsigned x : a) r *= f[x];
    return r;
}

std::vector<MIdx> all_midx(int dim, unsigned max_order) {
    std::vector<MIdx> out;
    if (dim == 1) {
        for (unsigned k = 0; k <= max_order; ++k) out.push_back({k});
    } else {
        for (unsigned t = 0; t <= max_order; ++t)
            for (unsigned i = 0; i <= t; ++i) out.push_back({t - i, i});
    }
    return out;
}

std::string midx_key(const MIdx& a) {
    std::string s;
    for (size_t i = 0; i < a.size(); ++i) {
        if (i) s += ",";
        s += std::to_string(a[i]);
    }
    return s;
}

Rat LinDiffOp::coeff(const MIdx& a) const {
    auto it = coeffs.find(a);
    return it == coeffs.end() ? Rat(vars) : it->second;
}

void LinDiffOp::set_coeff(const MIdx& a, const Rat& c) {
    if ((int)a.size() != dim) throw std::invalid_argument("multi-index arity mismatch");
    if (midx_order(a) > 3) throw std::invalid_argument("operator order exceeds 3");
    if (c.is_zero())
        coeffs.erase(a);
    else
        coeffs[a] = c;
}

unsigned LinDiffOp::order() const {
    unsigned o = 0;
    for (const auto& [a, c] : coeffs) o = std::max(o, midx_order(a));
    return o;
}

LinDiffOp LinDiffOp::operator+(const LinDiffOp& o) const {
    if (dim != o.dim || vars != o.vars) throw std::invalid_argument("operator mismatch in +");
    LinDiffOp r = *this;
    for (const auto& [a, c] : o.coeffs) r.set_coeff(a, r.coeff(a) + c);
    return r;
}

LinDiffOp LinDiffOp::operator-(const LinDiffOp& o) const {
    if (dim != o.dim || vars != o.vars) throw std::invalid_argument("operator mismatch in -");
    LinDiffOp r = *this;
    for (const auto& [a, c] : o.coeffs) r.set_coeff(a, r.coeff(a) - c);
    return r;
}

LinDiffOp LinDiffOp::scaled(const Rat& c) const {
    LinDiffOp r{dim, vars, {}};
    for (const auto& [a, k] : coeffs) r.set_coeff(a, k * c);
    return r;
}

bool LinDiffOp::operator==(const LinDiffOp& o) const {
    return dim == o.dim && vars == o.vars && coeffs == o.coeffs;
}

Rat OperatorFamily::coeff(const MIdx& a) const {
    auto it = coeffs.find(a);
    return it == coeffs.end() ? Rat(vars) : it->second;
}

void OperatorFamily::set_coeff(const MIdx& a, const Rat& c) {
    if ((int)a.size() != dim) throw std::invalid_argument("multi-index arity mismatch");
    if (midx_order(a) > 3) throw std::invalid_argument("operator order exceeds 3");
    if (c.is_zero())
        coeffs.erase(a);
    else
        coeffs[a] = c;
}

void Diffeo::validate() const {
    if ((int)fwd.size() != dim || (int)inv.size() != dim)
        throw std::invalid_argument("diffeo component count mismatch");
    std::map<size_t, Rat> bind;
    for (int i = 0; i < dim; ++i) bind[(size_t)i] = fwd[i];
    for (int i = 0; i < dim; ++i) {
        Rat comp = inv[i].substitute(bind).with_vars(vars);
        if (comp != Rat::variable(vars, (size_t)i))
            throw std::invalid_argument("diffeo inverse does not invert the forward map");
    }
    if (dim == 1) {
        if (fwd[0].derivative(0).is_zero())
            throw math_error("diffeo Jacobian identically singular");
    } else {
        Rat det = fwd[0].derivative(0) * fwd[1].derivative(1) -
                  fwd[0].derivative(1) * fwd[1].derivative(0);
        if (det.is_zero()) throw math_error("diffeo Jacobian identically singular");
    }
}

Diffeo compose(const Diffeo& outer, const Diffeo& inner) {
    if (outer.dim != inner.dim) throw std::invalid_argument("diffeo dim mismatch");
    Diffeo r{outer.dim, outer.vars, {}, {}};
    std::map<size_t, Rat> bi, bo;
    for (int i = 0; i < r.dim; ++i) {
        bi[(size_t)i] = inner.fwd[i];
        bo[(size_t)i] = outer.inv[i];
    }
    for (int i = 0; i < r.dim; ++i) {
        r.fwd.push_back(outer.fwd[i].substitute(bi).with_vars(r.vars));
        r.inv.push_back(inner.inv[i].substitute(bo).with_vars(r.vars));
    }
    return r;
}

Rat apply(const LinDiffOp& A, const Rat& h) {
    Rat hh = h.vars() == A.vars ? h : h.with_vars(A.vars);
    Rat acc(A.vars);
    for (const auto& [a, c] : A.coeffs) {
        Rat d = hh;
        for (int i = 0; i < A.dim; ++i)
            for (unsigned k = 0; k < a[(size_t)i]; ++k) d = d.derivative((size_t)i);
        acc = acc + c * d;
    }
    return acc;
}

LinDiffOp convert_a1form(int dim, const VarSet& vars, const std::array<Rat, 10>& a) {
    if (dim != 2) throw std::invalid_argument("a1-form conversion is for dim 2");
    LinDiffOp A{2, vars, {}};
    auto three = Rat(vars, QQ(3)), two = Rat(vars, QQ(2));
    A.set_coeff({3, 0}, a[0]);
    A.set_coeff({2, 1}, three * a[1]);
    A.set_coeff({1, 2}, three * a[2]);
    A.set_coeff({0, 3}, a[3]);
    A.set_coeff({2, 0}, a[4]);
    A.set_coeff({1, 1}, two * a[5]);
    A.set_coeff({0, 2}, a[6]);
    A.set_coeff({1, 0}, a[7]);
    A.set_coeff({0, 1}, a[8]);
    A.set_coeff({0, 0}, a[9]);
    return A;
}

std::array<Rat, 10> convert_to_a1form(const LinDiffOp& A) {
    if (A.dim != 2) throw std::invalid_argument("a1-form conversion is for dim 2");
    QQ third = qq_of(1, 3), half = qq_of(1, 2);
    return {A.coeff({3, 0}),
            A.coeff({2, 1}).mul_scalar(third),
            A.coeff({1, 2}).mul_scalar(third),
            A.coeff({0, 3}),
            A.coeff({2, 0}),
            A.coeff({1, 1}).mul_scalar(half),
            A.coeff({0, 2}),
            A.coeff({1, 0}),
            A.coeff({0, 1}),
            A.coeff({0, 0})};
}

LinDiffOp make_op1d(const VarSet& vars, const Rat& a3, const Rat& a2, const Rat& a1,
                    const Rat& a0) {
    LinDiffOp A{1, vars, {}};
    A.set_coeff({3}, a3);
    A.set_coeff({2}, a2);
    A.set_coeff({1}, a1);
    A.set_coeff({0}, a0);
    return A;
}

std::map<MIdx, Rat> convert_uform(const LinDiffOp& A) {
    std::map<MIdx, Rat> u;
    for (const auto& [a, c] : A.coeffs)
        u[a] = c.mul_scalar(qq_of((long)midx_factorial(a), 6));
    return u;
}

LinDiffOp convert_from_uform(int dim, const VarSet& vars, const std::map<MIdx, Rat>& u) {
    LinDiffOp A{dim, vars, {}};
    for (const auto& [a, c] : u)
        A.set_coeff(a, c.mul_scalar(qq_of(6, (long)midx_factorial(a))));
    return A;
}

LinDiffOp restrict_family(const OperatorFamily& A, const Rat& f) {
    if (auto yi = f.vars().index_of(A.vars.name(A.y_index)); yi && f.depends_on(*yi))
        throw std::invalid_argument("graph function must not involve y");
    std::map<size_t, Rat> bind{{A.y_index, f.vars() == A.vars ? f : f.with_vars(A.vars)}};
    // result lives over the family VarSet with y removed
    std::vector<std::string> names;
    std::vector<size_t> keep;
    for (size_t i = 0; i < A.vars.size(); ++i)
        if (i != A.y_index) {
            names.push_back(A.vars.name(i));
            keep.push_back(i);
        }
    VarSet base(names);
    LinDiffOp R{A.dim, base, {}};
    for (const auto& [a, c] : A.coeffs) {
        Rat v;
        try {
            v = c.substitute(bind);
        } catch (const pole_error&) {
            throw pole_error("family coefficient has a pole on the graph of f");
        }
        R.set_coeff(a, v.with_vars(A.vars).restricted(base, keep));
    }
    return R;
}

Rat weakly_apply(const OperatorFamily& A, const Rat& f) {
    LinDiffOp Af = restrict_family(A, f);
    return apply(Af, f.vars() == Af.vars ? f : f.with_vars(Af.vars));
}

namespace {

// A(h o phi) expanded over formal jet symbols of h: a map beta -> E_beta
// with E_beta over the operator variables; h_beta stands for (d^beta h)(phi(x)).
using JetExpr = std::map<MIdx, Rat>;

JetExpr jet_total_derivative(const JetExpr& e, int dir, const std::vector<Rat>& dphi) {
    JetExpr r;
    int dim = (int)dphi.size();
    auto add = [&](const MIdx& b, const Rat& v) {
        if (v.is_zero()) return;
        auto it = r.find(b);
        if (it == r.end())
            r.emplace(b, v);
        else {
            it->second = it->second + v;
            if (it->second.is_zero()) r.erase(it);
        }
    };
    for (const auto& [b, c] : e) {
        add(b, c.derivative((size_t)dir));
        for (int j = 0; j < dim; ++j) {
            MIdx up = b;
            ++up[(size_t)j];
            add(up, c * dphi[(size_t)j]);
        }
    }
    return r;
}

std::map<MIdx, Rat> pushforward_coeffs(int dim, const VarSet& vars,
                                       const std::map<MIdx, Rat>& coeffs,
                                       const Diffeo& phi) {
    // derivatives of phi components with respect to each base direction
    std::vector<std::vector<Rat>> dphi(dim); // dphi[dir][j] = d phi_j / d x_dir
    std::vector<Rat> comp(dim);
    for (int j = 0; j < dim; ++j) comp[(size_t)j] = phi.fwd[(size_t)j].with_vars(vars);
    for (int dir = 0; dir < dim; ++dir)
        for (int j = 0; j < dim; ++j)
            dphi[(size_t)dir].push_back(comp[(size_t)j].derivative((size_t)dir));

    // jets of h o phi, memoized along first-direction recursion
    std::map<MIdx, JetExpr> jets;
    MIdx zero(dim, 0);
    jets[zero] = JetExpr{{zero, Rat(vars, QQ(1))}};
    for (const auto& a : all_midx(dim, 3)) {
        if (jets.count(a)) continue;
        MIdx down = a;
        int dir = 0;
        for (int i = 0; i < dim; ++i)
            if (a[(size_t)i]) {
                dir = i;
                break;
            }
        --down[(size_t)dir];
        jets[a] = jet_total_derivative(jets.at(down), dir, dphi[(size_t)dir]);
    }

    // E_beta = sum_alpha c_alpha * jets[alpha][beta]
    JetExpr E;
    for (const auto& [a, c] : coeffs)
        for (const auto& [b, v] : jets.at(a)) {
            Rat t = c * v;
            auto it = E.find(b);
            if (it == E.end())
                E.emplace(b, t);
            else
                it->second = it->second + t;
        }

    // substitute x -> phi^{-1}
    std::map<size_t, Rat> back;
    for (int i = 0; i < dim; ++i) back[(size_t)i] = phi.inv[(size_t)i].with_vars(vars);
    std::map<MIdx, Rat> out;
    for (const auto& [b, v] : E) {
        Rat c = v.substitute(back).with_vars(vars);
        if (!c.is_zero()) out[b] = c;
    }
    return out;
}

} // namespace

LinDiffOp pushforward(const LinDiffOp& A, const Diffeo& phi) {
    phi.validate();
    LinDiffOp R{A.dim, A.vars, pushforward_coeffs(A.dim, A.vars, A.coeffs, phi)};
    return R;
}

OperatorFamily pushforward_family(const OperatorFamily& A, const Diffeo& phi) {
    phi.validate();
    OperatorFamily R{A.dim, A.vars, A.y_index,
                     pushforward_coeffs(A.dim, A.vars, A.coeffs, phi)};
    return R;
}

Rat pushforward_scalar(const Rat& f, const Diffeo& phi) {
    std::map<size_t, Rat> back;
    for (int i = 0; i < phi.dim; ++i) back[(size_t)i] = phi.inv[(size_t)i];
    return f.substitute(back);
}

} // namespace diffinv
