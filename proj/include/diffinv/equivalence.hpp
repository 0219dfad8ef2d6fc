#ifndef DIFFINV_EQUIVALENCE_HPP
#define DIFFINV_EQUIVALENCE_HPP

#include <array>

#include "diffinv/descent.hpp"

namespace diffinv {

struct Domain {
    QQ x1lo, x1hi, x2lo, x2hi;
};

// Natural chart: values of two invariants of the y-frozen family, checked
// to be a local diffeomorphism on the sample grid.
struct Chart {
    Rat z1, z2; // over the base coordinates
    QQ y0;
    Domain domain;
    int grid = 5;
    std::vector<std::array<QQ, 2>> points;
};

Chart natural_chart(const OperatorFamily& fam, const QQ& y0, const InvariantSpec& z1,
                    const InvariantSpec& z2, const Domain& dom, int grid = 5);

struct SignatureRow {
    std::array<double, 2> x;
    std::vector<double> values; // z1, z2, then the extra invariants
};
struct Signature {
    std::vector<std::string> names;
    std::vector<SignatureRow> rows;
    std::vector<std::array<double, 2>> skipped; // pole points
};

Signature invariant_signature(const OperatorFamily& fam, const Chart& chart,
                              const std::vector<InvariantSpec>& extra);

enum class Verdict { Equivalent, NotEquivalent, Inconclusive };
const char* to_string(Verdict v);

struct Witness {
    std::string kind;      // "signature", "correspondence", "chart", "matching"
    std::string invariant; // failing invariant, when kind == "signature"
    std::array<double, 2> point{0, 0};
    double residual = 0;
    std::string detail;
};

struct MatchedPoint {
    std::array<double, 2> x, xprime;
    double residual = 0;
};

struct EquivReport {
    Verdict verdict = Verdict::Inconclusive;
    Witness witness;
    std::vector<MatchedPoint> correspondence;
    double max_residual = 0;
};

struct EquivOptions {
    InvariantSpec z1 = InvariantSpec::parse("I0");
    InvariantSpec z2 = InvariantSpec::parse("BOX:I0");
    std::vector<InvariantSpec> battery = {
        InvariantSpec::parse("I0"), InvariantSpec::parse("I1"),
        InvariantSpec::parse("BOX:I1"), InvariantSpec::parse("TRESSE:BOX:I1;I1,I2")};
    Domain domain_a{QQ(0), QQ(1), QQ(0), QQ(1)};
    Domain domain_b{QQ(0), QQ(1), QQ(0), QQ(1)};
    int grid = 5;
    double tol = 1e-9;
    QQ y0_shift = QQ(1); // second fiber sample for the coordination check
};

// Desk-scale equivalence decision: chart matching by damped Newton, fiber
// independence of the correspondence, then signature agreement at matched
// points. Numeric failures yield Inconclusive, never NotEquivalent.
EquivReport equivalence_test(const OperatorFamily& A, const OperatorFamily& B,
                             const QQ& y0a, const QQ& y0b, const EquivOptions& opt);

// Atlas bookkeeping: run the test once per supplied chart configuration
// (overlapping domains and chart invariants) and require consistent verdicts.
// Any not_equivalent wins with its witness; otherwise any inconclusive run
// makes the whole answer inconclusive.
EquivReport equivalence_test_atlas(const OperatorFamily& A, const OperatorFamily& B,
                                   const QQ& y0a, const QQ& y0b,
                                   const std::vector<EquivOptions>& charts);

} // namespace diffinv

#endif
