#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "diffinv/equivalence.hpp"
#include "diffinv/expr_io.hpp"

using namespace diffinv;

namespace {

const VarSet X2Y({"x1", "x2", "y"});
const VarSet X2({"x1", "x2"});

Rat rr(const std::string& s, const VarSet& vs) { return parse_expr(s, vs); }

// Regular family with a torsionful symbol whose chart pair (I0, BOX:I0) is
// (x1 y0, x2 y0 + x1^2 y0^2): the chart Jacobian is the constant y0^2.
OperatorFamily base_family() {
    OperatorFamily f{2, X2Y, 2, {}};
    f.set_coeff({2, 1}, rr("x1+3", X2Y));
    f.set_coeff({1, 2}, rr("x2+3", X2Y));
    f.set_coeff({1, 0}, rr("x2", X2Y));
    f.set_coeff({0, 0}, rr("x1*y", X2Y));
    return f;
}

Diffeo shear() {
    Diffeo d{2, X2, {}, {}};
    d.fwd = {rr("x1 + x2^2", X2), rr("x2", X2)};
    d.inv = {rr("x1 - x2^2", X2), rr("x2", X2)};
    return d;
}

EquivOptions options() {
    EquivOptions o;
    o.domain_a = {QQ(1), QQ(2), QQ(1), QQ(2)};
    o.domain_b = {QQ(1), QQ(2), QQ(1), QQ(2)};
    return o;
}

} // namespace

TEST_CASE("natural_chart builds and validates") {
    OperatorFamily f = base_family();
    Chart c = natural_chart(f, QQ(1), InvariantSpec::parse("I0"),
                            InvariantSpec::parse("BOX:I0"),
                            {QQ(1), QQ(2), QQ(1), QQ(2)}, 5);
    CHECK(c.points.size() == 25);
    CHECK(c.z1 == rr("x1", X2));
    CHECK(c.z2 == rr("x2 + x1^2", X2));

    // functionally dependent pair is rejected outright
    CHECK_THROWS_AS(natural_chart(f, QQ(1), InvariantSpec::parse("I0"),
                                  InvariantSpec::parse("I0"),
                                  {QQ(1), QQ(2), QQ(1), QQ(2)}, 5),
                    general_position_error);
}

TEST_CASE("natural_chart names the failing grid point") {
    // z1 = x1^2 + x2^3 at y0 = 1, z2 = 2 x1 + z1^2: Jacobian -6 x2^2
    OperatorFamily f{2, X2Y, 2, {}};
    f.set_coeff({2, 1}, rr("1", X2Y));
    f.set_coeff({1, 2}, rr("1", X2Y));
    f.set_coeff({1, 0}, rr("1", X2Y));
    f.set_coeff({0, 0}, rr("x1^2*y + x2^3", X2Y));
    try {
        natural_chart(f, QQ(1), InvariantSpec::parse("I0"),
                      InvariantSpec::parse("BOX:I0"), {QQ(-1), QQ(1), QQ(-1), QQ(1)}, 3);
        FAIL("expected general_position_error");
    } catch (const general_position_error& e) {
        CHECK(std::string(e.what()).find("(-1, 0)") != std::string::npos);
    }
}

TEST_CASE("invariant_signature tabulates invariants over the chart") {
    OperatorFamily f = base_family();
    Chart c = natural_chart(f, QQ(1), InvariantSpec::parse("I0"),
                            InvariantSpec::parse("BOX:I0"),
                            {QQ(1), QQ(2), QQ(1), QQ(2)}, 3);
    Signature sig = invariant_signature(f, c, {InvariantSpec::parse("I0")});
    REQUIRE(sig.rows.size() == 9);
    REQUIRE(sig.names.size() == 3);
    // the extra I0 column duplicates z1
    for (const auto& row : sig.rows)
        CHECK(row.values[0] == doctest::Approx(row.values[2]).epsilon(1e-12));
}

TEST_CASE("equivalence: identical families") {
    OperatorFamily f = base_family();
    EquivReport r = equivalence_test(f, f, QQ(1), QQ(1), options());
    CHECK(r.verdict == Verdict::Equivalent);
    // psi is the identity on every grid point
    for (const auto& m : r.correspondence) {
        CHECK(std::fabs(m.x[0] - m.xprime[0]) < 1e-9);
        CHECK(std::fabs(m.x[1] - m.xprime[1]) < 1e-9);
    }
}

TEST_CASE("equivalence: transported family is recognized with psi = phi") {
    OperatorFamily f = base_family();
    Diffeo phi = shear();
    OperatorFamily g = pushforward_family(f, phi);
    EquivOptions opt = options();
    // a box inside the image of [1,2]^2 under (x1+x2^2, x2)
    opt.domain_b = {QQ(2), QQ(6), QQ(1), QQ(2)};
    EquivReport r = equivalence_test(f, g, QQ(1), QQ(1), opt);
    CHECK(r.verdict == Verdict::Equivalent);
    CHECK(r.max_residual <= 1e-9);
    for (const auto& m : r.correspondence) {
        double p1 = m.x[0] + m.x[1] * m.x[1]; // phi(x)
        CHECK(std::fabs(m.xprime[0] - p1) < 1e-7);
        CHECK(std::fabs(m.xprime[1] - m.x[1]) < 1e-7);
    }
}

TEST_CASE("equivalence: free-term shift is caught by the coordination check") {
    OperatorFamily f = base_family();
    OperatorFamily g = f;
    g.set_coeff({0, 0}, g.coeff({0, 0}) + Rat(X2Y, QQ(1)));
    EquivReport r = equivalence_test(f, g, QQ(1), QQ(1), options());
    CHECK(r.verdict == Verdict::NotEquivalent);
    CHECK(r.witness.kind == "correspondence");
    CHECK(r.witness.residual > 1e-9);
}

TEST_CASE("equivalence: fiber-linear first-order perturbations flip the verdict") {
    OperatorFamily f = base_family();

    // d1 perturbation: the correspondence acquires a fiber-dependent shift
    OperatorFamily g1 = f;
    g1.set_coeff({1, 0}, g1.coeff({1, 0}) + rr("y", X2Y).mul_scalar(qq_of(1, 10)));
    EquivReport r1 = equivalence_test(f, g1, QQ(1), QQ(1), options());
    CHECK(r1.verdict == Verdict::NotEquivalent);

    // d2 perturbation: charts agree identically, the signature must object
    OperatorFamily g2 = f;
    g2.set_coeff({0, 1}, rr("y", X2Y).mul_scalar(qq_of(1, 10)));
    EquivReport r2 = equivalence_test(f, g2, QQ(1), QQ(1), options());
    CHECK(r2.verdict == Verdict::NotEquivalent);
    CHECK(r2.witness.kind == "signature");
    CHECK(r2.witness.invariant.find("I1") != std::string::npos);
}

TEST_CASE("equivalence: verdicts are symmetric") {
    OperatorFamily f = base_family();
    Diffeo phi = shear();
    OperatorFamily g = pushforward_family(f, phi);
    EquivOptions ab = options();
    ab.domain_b = {QQ(2), QQ(6), QQ(1), QQ(2)};
    EquivOptions ba = options();
    ba.domain_a = {QQ(2), QQ(6), QQ(1), QQ(2)};
    CHECK(equivalence_test(f, g, QQ(1), QQ(1), ab).verdict == Verdict::Equivalent);
    CHECK(equivalence_test(g, f, QQ(1), QQ(1), ba).verdict == Verdict::Equivalent);

    OperatorFamily h = f;
    h.set_coeff({0, 0}, h.coeff({0, 0}) + Rat(X2Y, QQ(1)));
    CHECK(equivalence_test(f, h, QQ(1), QQ(1), options()).verdict ==
          Verdict::NotEquivalent);
    CHECK(equivalence_test(h, f, QQ(1), QQ(1), options()).verdict ==
          Verdict::NotEquivalent);
}

TEST_CASE("equivalence: fiber-sample independence binds") {
    // same slice at y0 = 1 but different fiber dependence
    OperatorFamily f = base_family();
    OperatorFamily g = f;
    g.set_coeff({0, 0}, rr("x1*y^2", X2Y));
    EquivReport r = equivalence_test(f, g, QQ(1), QQ(1), options());
    CHECK(r.verdict == Verdict::NotEquivalent);
    CHECK(r.witness.kind == "correspondence");
}

TEST_CASE("atlas: consistent verdicts across overlapping charts") {
    OperatorFamily f = base_family();
    Diffeo phi = shear();
    OperatorFamily g = pushforward_family(f, phi);

    EquivOptions c1 = options();
    c1.domain_b = {QQ(2), QQ(6), QQ(1), QQ(2)};
    EquivOptions c2 = c1; // overlapping source domain
    c2.domain_a = {QQ(1), qq_of(3, 2), QQ(1), QQ(2)};
    CHECK(equivalence_test_atlas(f, g, QQ(1), QQ(1), {c1, c2}).verdict ==
          Verdict::Equivalent);

    // a failing chart anywhere renders the atlas answer inconclusive
    EquivOptions bad = c1;
    bad.z2 = InvariantSpec::parse("I0");
    CHECK(equivalence_test_atlas(f, g, QQ(1), QQ(1), {c1, bad}).verdict ==
          Verdict::Inconclusive);

    // a disproof on any chart wins
    OperatorFamily h = f;
    h.set_coeff({0, 0}, h.coeff({0, 0}) + Rat(X2Y, QQ(1)));
    CHECK(equivalence_test_atlas(f, h, QQ(1), QQ(1), {options(), options()}).verdict ==
          Verdict::NotEquivalent);
}

TEST_CASE("equivalence: chart failure is inconclusive, never a verdict") {
    OperatorFamily f = base_family();
    EquivOptions opt = options();
    opt.z2 = InvariantSpec::parse("I0"); // z1 = z2: wedge vanishes
    EquivReport r = equivalence_test(f, f, QQ(1), QQ(1), opt);
    CHECK(r.verdict == Verdict::Inconclusive);
    CHECK(r.witness.kind == "chart");
}
