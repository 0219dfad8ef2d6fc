#ifndef DIFFINV_DESCENT_HPP
#define DIFFINV_DESCENT_HPP

#include <memory>

#include "diffinv/groebner.hpp"
#include "diffinv/groebner_engine.hpp"
#include "diffinv/invariants.hpp"

namespace diffinv {

// Differentiation context on the graph of f: base derivatives expand with
// the chain rule through y = f(x), function jets shift, and (for symbolic
// families) coefficient-jet symbols carry their own derivative table.
struct PairCtx {
    VarSet vars;
    int dim = 0;
    size_t y_index = 0;
    int jet_order = 0;
    std::map<MIdx, size_t> fjet; // f_beta, 1 <= |beta| <= jet_order
    DiffCtx dctx;                // graph total derivatives
    std::map<size_t, Rat> ysh;   // d/dy of coefficient-jet symbols

    // invariant derivation: d/dy on coefficient jets, function jets fixed
    Rat nabla(const Rat& p) const;
};

std::shared_ptr<const PairCtx> pair_context(const OperatorFamily& fam, int jet_order);

// 1-D family whose coefficients are opaque jet symbols a3, a2, a1, a0 with
// derivative symbols up to the given depth (e.g. a3_x, a3_xy, ...).
struct SymbolicFamily {
    OperatorFamily fam;
    std::shared_ptr<const PairCtx> ctx;
};
SymbolicFamily symbolic_family_1d(int jet_depth, int jet_order);

struct PairInvariant {
    Rat value;
    std::shared_ptr<const PairCtx> ctx;
};

// Invariant of the y-frozen family, rational in x and y.
Rat family_invariant(const InvariantSpec& spec, const OperatorFamily& fam);

// Invariant of related pairs: the invariant of A_f with the jet of f
// symbolic and y substituted for f.
PairInvariant pair_invariant(const InvariantSpec& spec, const OperatorFamily& fam,
                             int jet_order);
PairInvariant pair_invariant(const InvariantSpec& spec, const SymbolicFamily& fam);

PairInvariant nabla(const PairInvariant& p);

// Relation polynomial in the X indeterminates with coefficients in the
// field of parameter rational functions, monic under lex X0 > X1 > ...
struct Relation {
    engine::KPoly<Rat> terms; // exponents over the X variables
    std::vector<std::string> x_names;
};
std::string to_string(const Relation& r);

struct DescentResult {
    bool no_relations = false;
    std::vector<Relation> relations;
    std::vector<std::pair<std::string, Rat>> invariants; // normalized coefficients
    VarSet params;
};

// Groebner descent: relations among the seeds after eliminating every
// occurring jet variable; the normalized coefficients of the reduced basis
// are the produced invariants.
DescentResult descend(const std::vector<PairInvariant>& seeds);
// Seed plus its first N invariant derivatives.
DescentResult descend_chain(const PairInvariant& seed, int n);

// Substitutes the seed values for the X variables; zero for every relation.
std::vector<Rat> descent_residuals(const DescentResult& d,
                                   const std::vector<PairInvariant>& seeds);

// Comparison of the pipeline against independently printed closed forms for
// 1-D operators (connection, quantized symbols, scalar invariants). Items
// that disagree are reported with both expressions, not asserted.
struct OracleItem {
    std::string name;
    std::string pipeline;
    std::string printed;
    bool equal = false;
};
struct OracleReport {
    std::vector<OracleItem> items;
    bool all_equal() const;
};

OracleReport oracle_1d(const LinDiffOp& A);       // concrete coefficients
OracleReport oracle_1d_symbolic();                // fully symbolic comparison

// Concrete values of the coefficient-jet symbols of a symbolic 1-D family
// ("a3", "a3_x", "a0_xy", ...) as rational functions in (x, y) read off a
// concrete family.
std::map<std::string, Rat> coefficient_jet_values(const OperatorFamily& fam, int depth);

} // namespace diffinv

#endif
