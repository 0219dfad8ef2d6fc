#ifndef DIFFINV_DIFFCTX_HPP
#define DIFFINV_DIFFCTX_HPP

#include <map>
#include <set>

#include "diffinv/error.hpp"
#include "diffinv/rat.hpp"

namespace diffinv {

// Total-derivative context. Base coordinates are the first dim variables of
// the VarSet; any other variable differentiates to zero unless a jet rule
// assigns it a derivative (used for fiber coordinates, function jets and
// coefficient-jet symbols). Variables in `frontier` are truncated jets:
// differentiating an expression that still involves one raises an error
// instead of silently treating it as constant.
struct DiffCtx {
    VarSet vars;
    int dim = 0;
    std::map<size_t, std::vector<Rat>> jet; // var index -> d/dx_i for i < dim
    std::set<size_t> frontier;

    static DiffCtx plain(const VarSet& vs, int dim) { return DiffCtx{vs, dim, {}, {}}; }

    void check_frontier(const Rat& e) const {
        for (size_t v : frontier)
            if (e.depends_on(v))
                throw math_error("jet table exhausted at '" + vars.name(v) +
                                 "'; increase the jet depth");
    }

    Rat d(const Rat& e, int dir) const {
        check_frontier(e);
        Rat r = e.derivative((size_t)dir);
        for (const auto& [v, rules] : jet) {
            if (!e.depends_on(v)) continue;
            r = r + e.derivative(v) * rules.at((size_t)dir);
        }
        return r;
    }

    // Extended context over a larger VarSet (same base block).
    DiffCtx with_vars(const VarSet& target) const {
        DiffCtx c{target, dim, {}, {}};
        auto emb = target.embedding_of(vars);
        for (const auto& [v, rules] : jet) {
            std::vector<Rat> lifted;
            for (const auto& r : rules) lifted.push_back(r.with_vars(target));
            c.jet.emplace(emb[v], std::move(lifted));
        }
        for (size_t v : frontier) c.frontier.insert(emb[v]);
        return c;
    }
};

} // namespace diffinv

#endif
