#include "diffinv/equivalence.hpp"

#include <algorithm>
#include <cmath>

#include "diffinv/error.hpp"
#include "diffinv/expr_io.hpp"

namespace diffinv {

const char* to_string(Verdict v) {
    switch (v) {
        case Verdict::Equivalent: return "equivalent";
        case Verdict::NotEquivalent: return "not_equivalent";
        default: return "inconclusive";
    }
}

namespace {

std::vector<std::array<QQ, 2>> grid_points(const Domain& d, int m) {
    std::vector<std::array<QQ, 2>> pts;
    QQ s1 = (d.x1hi - d.x1lo) / QQ(m - 1), s2 = (d.x2hi - d.x2lo) / QQ(m - 1);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j)
            pts.push_back({d.x1lo + QQ(i) * s1, d.x2lo + QQ(j) * s2});
    return pts;
}

// invariant of the y-frozen family, y substituted, over base coordinates
Rat frozen_invariant(const OperatorFamily& fam, const InvariantSpec& spec,
                     const QQ& y0) {
    Rat v = family_invariant(spec, fam);
    Rat at = v.substitute({{fam.y_index, Rat(fam.vars, y0)}});
    std::vector<std::string> names;
    std::vector<size_t> keep;
    for (size_t i = 0; i < fam.vars.size(); ++i)
        if (i != fam.y_index) {
            names.push_back(fam.vars.name(i));
            keep.push_back(i);
        }
    return at.with_vars(fam.vars).restricted(VarSet(names), keep);
}

std::string point_str(const QQ& a, const QQ& b) {
    return "(" + to_string(a) + ", " + to_string(b) + ")";
}

} // namespace

Chart natural_chart(const OperatorFamily& fam, const QQ& y0, const InvariantSpec& z1s,
                    const InvariantSpec& z2s, const Domain& dom, int grid) {
    if (fam.dim != 2) throw std::invalid_argument("natural charts need dim 2");
    if (grid < 2) throw std::invalid_argument("grid must be at least 2");
    Chart c{frozen_invariant(fam, z1s, y0), frozen_invariant(fam, z2s, y0),
            y0, dom, grid, grid_points(dom, grid)};
    Rat jac = c.z1.derivative(0) * c.z2.derivative(1) -
              c.z1.derivative(1) * c.z2.derivative(0);
    if (jac.is_zero())
        throw general_position_error("chart invariants are functionally dependent",
                                     to_string(jac));
    for (const auto& p : c.points) {
        QQ jv;
        try {
            jv = jac.eval({p[0], p[1]});
        } catch (const pole_error&) {
            throw general_position_error("chart has a pole at grid point " +
                                         point_str(p[0], p[1]));
        }
        if (jv == 0)
            throw general_position_error("chart Jacobian vanishes at grid point " +
                                         point_str(p[0], p[1]));
    }
    return c;
}

Signature invariant_signature(const OperatorFamily& fam, const Chart& chart,
                              const std::vector<InvariantSpec>& extra) {
    Signature sig;
    sig.names = {"z1", "z2"};
    std::vector<Rat> funcs = {chart.z1, chart.z2};
    for (const auto& spec : extra) {
        LinDiffOp op{fam.dim, fam.vars, fam.coeffs};
        InvariantEvaluator ev({op, DiffCtx::plain(fam.vars, fam.dim)});
        for (auto& [name, val] : ev.eval(spec)) {
            sig.names.push_back(name);
            Rat at = val.substitute({{fam.y_index, Rat(fam.vars, chart.y0)}});
            std::vector<std::string> names;
            std::vector<size_t> keep;
            for (size_t i = 0; i < fam.vars.size(); ++i)
                if (i != fam.y_index) {
                    names.push_back(fam.vars.name(i));
                    keep.push_back(i);
                }
            funcs.push_back(at.with_vars(fam.vars).restricted(VarSet(names), keep));
        }
    }
    for (const auto& p : chart.points) {
        SignatureRow row;
        row.x = {to_double(p[0]), to_double(p[1])};
        bool ok = true;
        for (const auto& f : funcs) {
            try {
                row.values.push_back(to_double(f.eval({p[0], p[1]})));
            } catch (const pole_error&) {
                ok = false;
                break;
            }
        }
        if (ok)
            sig.rows.push_back(std::move(row));
        else
            sig.skipped.push_back(row.x);
    }
    return sig;
}

namespace {

struct NumericChart {
    Rat z1, z2, d11, d12, d21, d22;
    std::vector<std::array<QQ, 2>> seeds;

    explicit NumericChart(const Chart& c)
        : z1(c.z1), z2(c.z2), d11(c.z1.derivative(0)), d12(c.z1.derivative(1)),
          d21(c.z2.derivative(0)), d22(c.z2.derivative(1)), seeds(c.points) {}

    bool value(double x1, double x2, double& v1, double& v2) const {
        try {
            std::vector<double> p{x1, x2};
            v1 = z1.eval_double(p);
            v2 = z2.eval_double(p);
            return true;
        } catch (const pole_error&) {
            return false;
        }
    }
};

// one damped Newton run with a 20-iteration cap
bool newton_from(const NumericChart& nc, double t1, double t2, double tol, double x1,
                 double x2, double cur, std::array<double, 2>& out, double& residual) {
    for (int it = 0; it < 20; ++it) {
        if (cur <= 0.01 * tol) break;
        std::vector<double> p{x1, x2};
        double j11, j12, j21, j22, f1, f2;
        try {
            j11 = nc.d11.eval_double(p);
            j12 = nc.d12.eval_double(p);
            j21 = nc.d21.eval_double(p);
            j22 = nc.d22.eval_double(p);
            f1 = nc.z1.eval_double(p) - t1;
            f2 = nc.z2.eval_double(p) - t2;
        } catch (const pole_error&) {
            return false;
        }
        double det = j11 * j22 - j12 * j21;
        if (std::fabs(det) < 1e-300) return false;
        double dx1 = -(j22 * f1 - j12 * f2) / det;
        double dx2 = -(-j21 * f1 + j11 * f2) / det;
        double lambda = 1.0;
        bool moved = false;
        for (int h = 0; h < 12; ++h) {
            double n1 = x1 + lambda * dx1, n2 = x2 + lambda * dx2;
            double v1, v2;
            if (nc.value(n1, n2, v1, v2)) {
                double r = std::max(std::fabs(v1 - t1), std::fabs(v2 - t2));
                if (r < cur) {
                    x1 = n1;
                    x2 = n2;
                    cur = r;
                    moved = true;
                    break;
                }
            }
            lambda *= 0.5;
        }
        if (!moved) break;
    }
    if (cur <= tol) {
        out = {x1, x2};
        residual = cur;
        return true;
    }
    return false;
}

// damped Newton solve of Z(x') = (t1, t2), tried from every grid seed in
// order of initial residual; false when no run converges
bool newton_match(const NumericChart& nc, double t1, double t2, double tol,
                  std::array<double, 2>& out, double& residual) {
    std::vector<std::array<double, 3>> seeds; // residual, x1, x2
    for (const auto& s : nc.seeds) {
        double v1, v2;
        double x1 = to_double(s[0]), x2 = to_double(s[1]);
        if (!nc.value(x1, x2, v1, v2)) continue;
        seeds.push_back({std::max(std::fabs(v1 - t1), std::fabs(v2 - t2)), x1, x2});
    }
    std::sort(seeds.begin(), seeds.end());
    for (const auto& s : seeds)
        if (newton_from(nc, t1, t2, tol, s[1], s[2], s[0], out, residual)) return true;
    return false;
}

struct Correspondence {
    bool ok = false;
    std::string reason;
    std::array<double, 2> failed_at{0, 0};
    std::vector<MatchedPoint> matched;
};

Correspondence match_charts(const Chart& ca, const Chart& cb, double tol) {
    Correspondence out;
    NumericChart na(ca), nb(cb);
    for (const auto& p : ca.points) {
        double t1, t2;
        double x1 = to_double(p[0]), x2 = to_double(p[1]);
        if (!na.value(x1, x2, t1, t2)) {
            out.reason = "pole of the source chart at a grid point";
            out.failed_at = {x1, x2};
            return out;
        }
        std::array<double, 2> xp;
        double res;
        if (!newton_match(nb, t1, t2, tol, xp, res)) {
            out.reason = "no Newton convergence from any grid seed";
            out.failed_at = {x1, x2};
            return out;
        }
        out.matched.push_back({{x1, x2}, xp, res});
    }
    out.ok = true;
    return out;
}

} // namespace

EquivReport equivalence_test(const OperatorFamily& A, const OperatorFamily& B,
                             const QQ& y0a, const QQ& y0b, const EquivOptions& opt) {
    EquivReport rep;
    auto inconclusive = [&](const std::string& why) {
        rep.verdict = Verdict::Inconclusive;
        rep.witness = {"chart", "", {0, 0}, 0, why};
        return rep;
    };

    // (a) charts
    Chart ca, cb;
    try {
        ca = natural_chart(A, y0a, opt.z1, opt.z2, opt.domain_a, opt.grid);
        cb = natural_chart(B, y0b, opt.z1, opt.z2, opt.domain_b, opt.grid);
    } catch (const math_error& e) {
        return inconclusive(std::string("chart construction failed: ") + e.what());
    }

    // (b) correspondence psi via Newton matching
    Correspondence corr = match_charts(ca, cb, opt.tol);
    if (!corr.ok) {
        rep.verdict = Verdict::Inconclusive;
        rep.witness = {"matching", "", corr.failed_at, 0, corr.reason};
        return rep;
    }
    rep.correspondence = corr.matched;
    for (const auto& m : corr.matched) rep.max_residual = std::max(rep.max_residual, m.residual);

    // (c) the correspondence must not depend on the fiber samples
    {
        Chart ca2, cb2;
        try {
            ca2 = natural_chart(A, y0a + opt.y0_shift, opt.z1, opt.z2, opt.domain_a,
                                opt.grid);
            cb2 = natural_chart(B, y0b + opt.y0_shift, opt.z1, opt.z2, opt.domain_b,
                                opt.grid);
        } catch (const math_error& e) {
            return inconclusive(std::string("second fiber sample failed: ") + e.what());
        }
        Correspondence corr2 = match_charts(ca2, cb2, opt.tol);
        if (!corr2.ok) {
            rep.verdict = Verdict::Inconclusive;
            rep.witness = {"matching", "", corr2.failed_at, 0,
                           "no convergence at the second fiber sample"};
            return rep;
        }
        for (size_t i = 0; i < corr.matched.size(); ++i) {
            double dev = std::max(
                std::fabs(corr.matched[i].xprime[0] - corr2.matched[i].xprime[0]),
                std::fabs(corr.matched[i].xprime[1] - corr2.matched[i].xprime[1]));
            if (dev > opt.tol) {
                rep.verdict = Verdict::NotEquivalent;
                rep.witness = {"correspondence", "", corr.matched[i].x, dev,
                               "matched point moves when the fiber sample changes"};
                return rep;
            }
        }
    }

    // (d) signature agreement at matched points
    std::vector<std::pair<std::string, Rat>> batA, batB;
    try {
        LinDiffOp opA{A.dim, A.vars, A.coeffs};
        InvariantEvaluator evA({opA, DiffCtx::plain(A.vars, A.dim)});
        LinDiffOp opB{B.dim, B.vars, B.coeffs};
        InvariantEvaluator evB({opB, DiffCtx::plain(B.vars, B.dim)});
        for (const auto& spec : opt.battery) {
            for (auto& v : evA.eval(spec)) batA.push_back(v);
            for (auto& v : evB.eval(spec)) batB.push_back(v);
        }
    } catch (const math_error& e) {
        return inconclusive(std::string("invariant evaluation failed: ") + e.what());
    }
    auto full_point = [](const OperatorFamily& f, double x1, double x2, double y) {
        std::vector<double> p(f.vars.size(), 0.0);
        p[0] = x1;
        p[1] = x2;
        p[f.y_index] = y;
        return p;
    };
    double ya = to_double(y0a), yb = to_double(y0b);
    size_t compared = 0;
    for (size_t k = 0; k < batA.size(); ++k) {
        for (const auto& m : rep.correspondence) {
            double va, vb;
            try {
                va = batA[k].second.eval_double(full_point(A, m.x[0], m.x[1], ya));
                vb = batB[k].second.eval_double(full_point(B, m.xprime[0], m.xprime[1], yb));
            } catch (const pole_error&) {
                continue; // skipped point
            }
            ++compared;
            double diff = std::fabs(va - vb);
            if (diff > opt.tol) {
                rep.verdict = Verdict::NotEquivalent;
                rep.witness = {"signature", batA[k].first, m.x, diff,
                               "invariant differs at matched points"};
                return rep;
            }
            rep.max_residual = std::max(rep.max_residual, diff);
        }
    }
    if (compared == 0)
        return inconclusive("every signature comparison hit a pole");
    rep.verdict = Verdict::Equivalent;
    return rep;
}

EquivReport equivalence_test_atlas(const OperatorFamily& A, const OperatorFamily& B,
                                   const QQ& y0a, const QQ& y0b,
                                   const std::vector<EquivOptions>& charts) {
    if (charts.empty()) throw std::invalid_argument("atlas needs at least one chart");
    EquivReport agg;
    bool any_inconclusive = false;
    EquivReport first_inconclusive;
    for (size_t i = 0; i < charts.size(); ++i) {
        EquivReport r = equivalence_test(A, B, y0a, y0b, charts[i]);
        if (r.verdict == Verdict::NotEquivalent) return r;
        if (r.verdict == Verdict::Inconclusive) {
            if (!any_inconclusive) first_inconclusive = r;
            any_inconclusive = true;
            continue;
        }
        if (i == 0 || agg.correspondence.empty()) agg = r;
        agg.max_residual = std::max(agg.max_residual, r.max_residual);
    }
    if (any_inconclusive) return first_inconclusive;
    agg.verdict = Verdict::Equivalent;
    return agg;
}

} // namespace diffinv
