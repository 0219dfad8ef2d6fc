#ifndef DIFFINV_INVARIANTS_HPP
#define DIFFINV_INVARIANTS_HPP

#include <optional>
#include <string>
#include <utility>

#include "diffinv/quantize.hpp"

namespace diffinv {

// Named invariant recipes:
//   "I0"                     free term a0
//   "I1"                     dim 2: <theta, sigma_1>; dim 1: <sigma_1, d a0>
//   "I2"                     dim 2: BOX:I1;         dim 1: <sigma_2, (d a0)^2>
//   "I3"                     dim 1 only: <sigma_3, (d a0)^3>
//   "BOX:<spec>"             image under the universal operator
//   "TRESSE:<J>;<A>,<B>"     Tresse derivative pair of J by (A, B)
struct InvariantSpec {
    enum class Kind { I0, I1, I2, I3, Box, Tresse };
    Kind kind = Kind::I0;
    std::vector<InvariantSpec> args;

    static InvariantSpec parse(const std::string& name);
    std::string name() const;
};

// Operator with its differentiation context (op.vars == ctx.vars; extra
// variables such as the fiber coordinate ride along inert or with jet rules).
struct OpCtx {
    LinDiffOp op;
    DiffCtx ctx;
};

// The free term a0 = A(1).
Rat invariant_I0(const LinDiffOp& A);

// Convolution of the torsion form with the first subsymbol (degenerates to
// zero in dim 1 where a connection has no torsion).
Rat invariant_I1(const LinDiffOp& A, const DiffCtx& ctx);

// Evaluates a recipe; Tresse recipes produce two named components.
class InvariantEvaluator {
public:
    explicit InvariantEvaluator(OpCtx oc) : oc_(std::move(oc)) {}

    std::vector<std::pair<std::string, Rat>> eval(const InvariantSpec& spec);
    Rat eval_scalar(const InvariantSpec& spec); // throws on multi-valued recipes

    const TotalSymbol& peeled();
    const OpCtx& opctx() const { return oc_; }

private:
    OpCtx oc_;
    std::optional<TotalSymbol> ts_;
};

// Form (d a0)^k in the context's total derivatives.
SymTensor da0_power(const Rat& a0, int k, const DiffCtx& ctx);

} // namespace diffinv

#endif
